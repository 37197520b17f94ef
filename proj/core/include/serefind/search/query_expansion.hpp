#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace serefind::search {

struct WeightedTerm {
  std::string term;
  double weight = 1.0;
  bool expanded = false;

  bool operator==(const WeightedTerm&) const = default;
};

inline constexpr double kSynonymWeight = 0.5;

/// term -> synonyms. Lookups are single hop.
class SynonymTable {
 public:
  SynonymTable() = default;

  void add(const std::string& term, const std::string& synonym);
  const std::set<std::string>* synonyms(const std::string& term) const;
  bool empty() const { return table_.empty(); }

  /// Lines of `term: syn1, syn2, ...`; `#` starts a comment.
  static SynonymTable parse(std::string_view text);
  static SynonymTable load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::set<std::string>> table_;
};

/// Originals keep weight 1.0 (duplicates collapse); each synonym of an
/// original that is not already present is appended with weight 0.5.
std::vector<WeightedTerm> expand_query(const std::vector<std::string>& terms,
                                       const SynonymTable& table);

}  // namespace serefind::search
