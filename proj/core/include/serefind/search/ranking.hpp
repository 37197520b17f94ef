#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "serefind/geo.hpp"
#include "serefind/identity/user.hpp"
#include "serefind/market/listing.hpp"
#include "serefind/schema/registry.hpp"
#include "serefind/search/index.hpp"
#include "serefind/search/query_expansion.hpp"
#include "serefind/time.hpp"

namespace serefind::search {

struct RankingConfig {
  double w_text = 1.0;
  double w_loc = 0.3;
  double w_fresh = 0.2;
  /// Distance decay scale D for the location boost.
  double decay_km = 25.0;
  /// Age decay scale for freshness.
  double freshness_days = 30.0;
};

/// S(q, C) = weight * (1 + ln wtf) * (ln((N+1)/(df+1)) + 1), or 0 when the
/// term does not occur in the listing (wtf == 0).
double term_score(double weight, double weighted_tf, std::size_t df, std::size_t n);

/// exp(-d / decay_km) for haversine distance d; 0 when either point is unknown.
double location_boost(const std::optional<GeoPoint>& origin,
                      const std::optional<GeoPoint>& listing, double decay_km = 25.0);

/// exp(-age_days / scale_days), age clamped at 0.
double freshness(Timestamp created_at, Timestamp now, double scale_days = 30.0);

/// Filter on one search-filter field. Text fields use case-insensitive
/// substring match; number, currency and date-time fields use an inclusive
/// range written `lo..hi` (either side may be empty) or a single exact value.
struct FieldPredicate {
  std::optional<std::string> contains;
  std::optional<double> min;
  std::optional<double> max;
};

/// Throws kInvalidFilter on a malformed expression.
FieldPredicate parse_predicate(schema::DataType type, std::string_view expr);
bool matches(const FieldPredicate& p, const schema::FieldValue* value);

struct SearchQuery {
  /// Null for anonymous searches.
  const identity::User* user = nullptr;
  std::vector<std::string> terms;
  std::optional<std::string> category;
  std::optional<std::string> subcategory;
  /// label -> predicate expression; labels must be search filters of `category`.
  std::map<std::string, std::string> field_filters;
  std::optional<GeoPoint> origin;
  std::size_t page = 0;
  std::size_t page_size = 20;
};

struct TermMatch {
  std::string term;
  double weight = 1.0;
  double score = 0.0;
  bool expanded = false;
};

struct RankedResult {
  ListingId listing_id;
  double score_total = 0.0;
  double score_text = 0.0;
  double score_location = 0.0;
  double score_freshness = 0.0;
  std::vector<TermMatch> matched_terms;
  Timestamp created_at{};
};

struct RankedPage {
  std::vector<RankedResult> results;
  /// Matches across all pages.
  std::size_t total = 0;
  std::size_t page = 0;
  std::size_t page_size = 20;
};

/// Listings the query may rank: visible to the viewer, active, in the
/// requested category/subcategory, passing every field filter.
/// Throws kInvalidFilter (filter without category, non-filter label, bad
/// expression, page_size outside 1..100) or kSchemaNotFound.
std::vector<market::Listing> select_candidates(const SearchQuery& query,
                                               std::span<const market::Listing> listings,
                                               const schema::SchemaRegistry& schemas);

class Ranker {
 public:
  Ranker(RankingConfig config = {}, SynonymTable synonyms = {}, Tokenizer tokenizer = {});

  /// Tokenized, de-duplicated and synonym-expanded query terms.
  std::vector<WeightedTerm> query_terms(const std::vector<std::string>& raw) const;

  /// Scores every candidate. With no query terms every candidate is a match
  /// and ordering degenerates to freshness; otherwise only candidates with a
  /// positive text score are returned. Sorted by total desc, created_at desc,
  /// listing_id asc, then paginated.
  RankedPage rank(const SearchQuery& query, std::span<const market::Listing> candidates,
                  const IndexSnapshot& index, Timestamp now) const;

  const RankingConfig& config() const { return config_; }
  const SynonymTable& synonyms() const { return synonyms_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }

 private:
  RankingConfig config_;
  SynonymTable synonyms_;
  Tokenizer tokenizer_;
};

struct FeedPage {
  std::vector<market::Listing> listings;
  std::size_t total = 0;
  std::size_t page = 0;
  std::size_t page_size = 20;
};

/// Recent listings, newest first. Signed-in users see what they may view,
/// narrowed by their preferences (categories, owner networks, radius around
/// home when both locations are known). Anonymous users get public listings.
FeedPage newsfeed(const identity::User* user, std::span<const market::Listing> listings,
                  std::size_t page, std::size_t page_size);

}  // namespace serefind::search
