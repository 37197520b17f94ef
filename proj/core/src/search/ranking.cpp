#include "serefind/search/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "serefind/error.hpp"
#include "serefind/identity/redact.hpp"

namespace serefind::search {

double term_score(double weight, double weighted_tf, std::size_t df, std::size_t n) {
  if (!(weighted_tf > 0.0)) return 0.0;
  const double tf_component = 1.0 + std::log(weighted_tf);
  const double idf = std::log(static_cast<double>(n + 1) / static_cast<double>(df + 1)) + 1.0;
  return weight * tf_component * idf;
}

double location_boost(const std::optional<GeoPoint>& origin,
                      const std::optional<GeoPoint>& listing, double decay_km) {
  if (!origin || !listing) return 0.0;
  return std::exp(-haversine_km(*origin, *listing) / decay_km);
}

double freshness(Timestamp created_at, Timestamp now, double scale_days) {
  const double age = std::max(0.0, days_between(created_at, now));
  return std::exp(-age / scale_days);
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::optional<double> bound(schema::DataType type, std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  auto parsed = schema::parse_value(type, s);
  if (!parsed.value) {
    throw Error(ErrorCode::kInvalidFilter, "bad filter bound '" + std::string(s) +
                                               "': " + parsed.error);
  }
  return schema::numeric_of(*parsed.value);
}

}  // namespace

FieldPredicate parse_predicate(schema::DataType type, std::string_view expr) {
  FieldPredicate p;
  if (type == schema::DataType::kText) {
    auto t = trim(expr);
    if (t.empty()) throw Error(ErrorCode::kInvalidFilter, "empty text filter");
    p.contains = lower(t);
    return p;
  }
  if (!schema::filterable(type)) {
    throw Error(ErrorCode::kInvalidFilter, "field type cannot be filtered");
  }
  const auto dots = expr.find("..");
  if (dots == std::string_view::npos) {
    p.min = p.max = bound(type, expr);
    if (!p.min) throw Error(ErrorCode::kInvalidFilter, "empty filter");
  } else {
    p.min = bound(type, expr.substr(0, dots));
    p.max = bound(type, expr.substr(dots + 2));
  }
  return p;
}

bool matches(const FieldPredicate& p, const schema::FieldValue* value) {
  if (value == nullptr) return false;
  if (p.contains) {
    const auto* text = std::get_if<schema::TextValue>(value);
    return text != nullptr && lower(text->text).find(*p.contains) != std::string::npos;
  }
  const auto n = schema::numeric_of(*value);
  if (!n) return false;
  if (p.min && *n < *p.min) return false;
  if (p.max && *n > *p.max) return false;
  return true;
}

std::vector<market::Listing> select_candidates(const SearchQuery& query,
                                               std::span<const market::Listing> listings,
                                               const schema::SchemaRegistry& schemas) {
  if (query.page_size < 1 || query.page_size > 100) {
    throw Error(ErrorCode::kInvalidFilter, "page_size must be between 1 and 100");
  }
  std::vector<std::pair<const schema::FieldSpec*, FieldPredicate>> predicates;
  if (!query.field_filters.empty()) {
    if (!query.category) {
      throw Error(ErrorCode::kInvalidFilter, "field filters need a category");
    }
    const auto& schema = schemas.get(*query.category);
    for (const auto& [label, expr] : query.field_filters) {
      const auto* spec = schema.find(label);
      if (spec == nullptr || !spec->visible_in_search_filter) {
        throw Error(ErrorCode::kInvalidFilter,
                    "'" + label + "' is not a search filter of " + schema.category);
      }
      predicates.emplace_back(spec, parse_predicate(spec->data_type, expr));
    }
  } else if (query.category) {
    schemas.get(*query.category);
  }

  std::vector<market::Listing> out;
  for (const auto& l : listings) {
    if (l.status != market::ListingStatus::kActive) continue;
    if (!identity::can_view(query.user, l)) continue;
    if (query.category && l.category != *query.category) continue;
    if (query.subcategory && l.subcategory != *query.subcategory) continue;
    const bool ok = std::all_of(predicates.begin(), predicates.end(), [&](const auto& p) {
      const schema::FieldValue* v = nullptr;
      for (const auto& [label, value] : l.values) {
        if (schema::labels_equal(label, p.first->label)) v = &value;
      }
      return matches(p.second, v);
    });
    if (ok) out.push_back(l);
  }
  return out;
}

Ranker::Ranker(RankingConfig config, SynonymTable synonyms, Tokenizer tokenizer)
    : config_(config), synonyms_(std::move(synonyms)), tokenizer_(std::move(tokenizer)) {}

std::vector<WeightedTerm> Ranker::query_terms(const std::vector<std::string>& raw) const {
  std::vector<std::string> tokens;
  for (const auto& r : raw) {
    for (auto& t : tokenizer_(r)) tokens.push_back(std::move(t));
  }
  return expand_query(tokens, synonyms_);
}

RankedPage Ranker::rank(const SearchQuery& query, std::span<const market::Listing> candidates,
                        const IndexSnapshot& index, Timestamp now) const {
  const auto terms = query_terms(query.terms);
  const std::size_t n = index.document_count();

  std::vector<RankedResult> scored;
  scored.reserve(candidates.size());
  for (const auto& l : candidates) {
    RankedResult r;
    r.listing_id = l.listing_id;
    r.created_at = l.created_at;
    for (const auto& t : terms) {
      const double s = term_score(t.weight, index.weighted_tf(t.term, l.listing_id),
                                  index.document_frequency(t.term), n);
      if (s > 0.0) {
        r.score_text += s;
        r.matched_terms.push_back(TermMatch{t.term, t.weight, s, t.expanded});
      }
    }
    if (!terms.empty() && r.matched_terms.empty()) continue;
    r.score_location = location_boost(query.origin, l.location, config_.decay_km);
    r.score_freshness = freshness(l.created_at, now, config_.freshness_days);
    r.score_total = config_.w_text * r.score_text + config_.w_loc * r.score_location +
                    config_.w_fresh * r.score_freshness;
    scored.push_back(std::move(r));
  }

  std::sort(scored.begin(), scored.end(), [](const RankedResult& a, const RankedResult& b) {
    if (a.score_total != b.score_total) return a.score_total > b.score_total;
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.listing_id < b.listing_id;
  });

  RankedPage page;
  page.total = scored.size();
  page.page = query.page;
  page.page_size = query.page_size;
  const std::size_t begin = std::min(scored.size(), query.page * query.page_size);
  const std::size_t end = std::min(scored.size(), begin + query.page_size);
  page.results.assign(std::make_move_iterator(scored.begin() + begin),
                      std::make_move_iterator(scored.begin() + end));
  return page;
}

FeedPage newsfeed(const identity::User* user, std::span<const market::Listing> listings,
                  std::size_t page, std::size_t page_size) {
  user = identity::effective_viewer(user);
  std::vector<const market::Listing*> picked;
  for (const auto& l : listings) {
    if (l.status != market::ListingStatus::kActive) continue;
    if (user == nullptr) {
      if (l.visibility != market::Visibility::kPublic) continue;
    } else {
      if (!identity::can_view(user, l)) continue;
      const auto& prefs = user->preferences;
      if (!prefs.categories.empty() && prefs.categories.count(l.category) == 0) continue;
      if (!prefs.networks.empty() && prefs.networks.count(l.network_id) == 0) continue;
      if (prefs.radius_km && user->home_location && l.location &&
          haversine_km(*user->home_location, *l.location) > *prefs.radius_km) {
        continue;
      }
    }
    picked.push_back(&l);
  }
  std::sort(picked.begin(), picked.end(), [](const auto* a, const auto* b) {
    if (a->created_at != b->created_at) return a->created_at > b->created_at;
    return a->listing_id < b->listing_id;
  });

  FeedPage out;
  out.total = picked.size();
  out.page = page;
  out.page_size = page_size;
  const std::size_t begin = std::min(picked.size(), page * page_size);
  const std::size_t end = std::min(picked.size(), begin + page_size);
  for (std::size_t i = begin; i < end; ++i) out.listings.push_back(*picked[i]);
  return out;
}

}  // namespace serefind::search
