#pragma once

// Reference implementations used as test oracles. Written from the
// behavioural rules, deliberately sharing no code with the library.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

inline const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a", "an", "and", "are", "as", "at", "be", "but", "by", "for",
      "from", "has", "have", "in", "is", "it", "its", "of", "on", "or",
      "that", "the", "this", "to", "was", "were", "will", "with", "you", "your"};
  return words;
}

/// Blank out separators, then split on whitespace.
inline std::vector<std::string> tokenize(const std::string& text) {
  std::string spaced;
  for (unsigned char c : text) {
    const bool ascii_word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                            (c >= 'A' && c <= 'Z');
    if (ascii_word) {
      spaced += static_cast<char>(std::tolower(c));
    } else if (c >= 0x80) {
      spaced += static_cast<char>(c);
    } else {
      spaced += ' ';
    }
  }
  std::vector<std::string> out;
  std::istringstream in(spaced);
  std::string w;
  while (in >> w) {
    if (w.size() < 2 || stopwords().count(w)) continue;
    out.push_back(w);
  }
  return out;
}

/// Great-circle distance via the atan2 (Vincenty sphere) form.
inline double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kPi = 3.14159265358979323846;
  const double p1 = lat1 * kPi / 180, p2 = lat2 * kPi / 180;
  const double dl = (lon2 - lon1) * kPi / 180;
  const double a = std::cos(p2) * std::sin(dl);
  const double b = std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl);
  const double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return 6371.0 * std::atan2(std::sqrt(a * a + b * b), c);
}

/// Decimal with at most two fraction digits and an optional currency code.
inline bool currency_ok(const std::string& s) {
  static const std::regex re(R"(^([A-Z]{3} ?)?[0-9]{1,15}(\.[0-9]{1,2})?$)");
  return std::regex_match(s, re);
}

struct Doc {
  std::string id;
  std::string title;
  std::vector<std::string> tags;
  std::string description;
  /// Text-typed schema values other than the title.
  std::vector<std::string> text_values;
  std::optional<std::pair<double, double>> location;
  long long created_at = 0;  // unix seconds
};

struct Weights {
  double text = 1.0, loc = 0.3, fresh = 0.2, decay_km = 25.0, fresh_days = 30.0;
};

struct Scored {
  std::string id;
  double total = 0, text = 0, loc = 0, fresh = 0;
  std::map<std::string, double> per_term;
  long long created_at = 0;
};

inline double count_in(const std::string& text, const std::string& term) {
  double n = 0;
  for (const auto& t : tokenize(text)) n += (t == term);
  return n;
}

inline double weighted_tf(const Doc& d, const std::string& term) {
  double tf = 3 * count_in(d.title, term) + count_in(d.description, term);
  for (const auto& t : d.tags) tf += 2 * count_in(t, term);
  for (const auto& v : d.text_values) tf += count_in(v, term);
  return tf;
}

/// Loops over every document and every query term. `corpus` is every
/// indexed (active) listing; `candidates` the ids the query may return.
inline std::vector<Scored> brute_rank(const std::vector<Doc>& corpus,
                                      const std::set<std::string>& candidates,
                                      const std::vector<std::string>& raw_terms,
                                      const std::map<std::string, std::vector<std::string>>& synonyms,
                                      std::optional<std::pair<double, double>> origin,
                                      long long now, const Weights& w) {
  std::vector<std::pair<std::string, double>> terms;
  auto has = [&](const std::string& t) {
    for (const auto& [x, _] : terms) {
      if (x == t) return true;
    }
    return false;
  };
  for (const auto& raw : raw_terms) {
    for (const auto& t : tokenize(raw)) {
      if (!has(t)) terms.emplace_back(t, 1.0);
    }
  }
  const auto originals = terms;
  for (const auto& [t, _] : originals) {
    auto it = synonyms.find(t);
    if (it == synonyms.end()) continue;
    for (const auto& s : it->second) {
      if (!has(s)) terms.emplace_back(s, 0.5);
    }
  }

  const double n = static_cast<double>(corpus.size());
  std::vector<Scored> out;
  for (const auto& d : corpus) {
    if (!candidates.count(d.id)) continue;
    Scored s;
    s.id = d.id;
    s.created_at = d.created_at;
    for (const auto& [t, weight] : terms) {
      const double tf = weighted_tf(d, t);
      if (tf <= 0) continue;
      double df = 0;
      for (const auto& other : corpus) df += weighted_tf(other, t) > 0;
      const double score = weight * (1 + std::log(tf)) * (std::log((n + 1) / (df + 1)) + 1);
      s.per_term[t] = score;
      s.text += score;
    }
    if (!terms.empty() && s.per_term.empty()) continue;
    if (origin && d.location) {
      const double km = great_circle_km(origin->first, origin->second, d.location->first,
                                        d.location->second);
      s.loc = std::exp(-km / w.decay_km);
    }
    const double age_days = std::max(0.0, (now - d.created_at) / 86400.0);
    s.fresh = std::exp(-age_days / w.fresh_days);
    s.total = w.text * s.text + w.loc * s.loc + w.fresh * s.fresh;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) {
    if (a.total != b.total) return a.total > b.total;
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.id < b.id;
  });
  return out;
}

/// Listing lifecycle as an explicit table: (status, action) -> next status,
/// with the pre-delete status remembered for undo. nullopt = invalid.
struct LifecycleState {
  std::string status = "active";
  std::optional<std::string> before_delete;
};

inline std::optional<LifecycleState> lifecycle_step(const LifecycleState& s,
                                                    const std::string& action) {
  static const std::map<std::pair<std::string, std::string>, std::string> table = {
      {{"active", "edit"}, "active"},    {{"active", "hide"}, "hidden"},
      {{"active", "delete"}, "deleted"}, {{"hidden", "edit"}, "hidden"},
      {{"hidden", "delete"}, "deleted"}, {{"hidden", "undo"}, "active"},
  };
  if (s.status == "deleted" && action == "undo") {
    if (!s.before_delete) return std::nullopt;
    return LifecycleState{*s.before_delete, std::nullopt};
  }
  auto it = table.find({s.status, action});
  if (it == table.end()) return std::nullopt;
  LifecycleState next{it->second, s.before_delete};
  if (action == "delete") next.before_delete = s.status;
  return next;
}

}  // namespace oracle
