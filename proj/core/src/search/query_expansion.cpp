#include "serefind/search/query_expansion.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "serefind/error.hpp"

namespace serefind::search {

namespace {

std::string normalize(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::string out(s.substr(b, s.find_last_not_of(ws) - b + 1));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  });
  return out;
}

}  // namespace

void SynonymTable::add(const std::string& term, const std::string& synonym) {
  const auto t = normalize(term), s = normalize(synonym);
  if (t.empty() || s.empty() || t == s) return;
  table_[t].insert(s);
}

const std::set<std::string>* SynonymTable::synonyms(const std::string& term) const {
  auto it = table_.find(term);
  return it == table_.end() ? nullptr : &it->second;
}

SynonymTable SynonymTable::parse(std::string_view text) {
  SynonymTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (normalize(line).empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kConfigInvalid,
                  "synonym table line " + std::to_string(line_no) + ": expected 'term: syn, ...'");
    }
    const auto term = std::string(line.substr(0, colon));
    auto rest = line.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      table.add(term, std::string(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot read synonym table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<WeightedTerm> expand_query(const std::vector<std::string>& terms,
                                       const SynonymTable& table) {
  std::vector<WeightedTerm> out;
  auto present = [&](const std::string& t) {
    return std::any_of(out.begin(), out.end(),
                       [&](const WeightedTerm& w) { return w.term == t; });
  };
  for (const auto& t : terms) {
    if (!present(t)) out.push_back(WeightedTerm{t, 1.0, false});
  }
  const std::size_t originals = out.size();
  for (std::size_t i = 0; i < originals; ++i) {
    const auto* syns = table.synonyms(out[i].term);
    if (syns == nullptr) continue;
    for (const auto& s : *syns) {
      if (!present(s)) out.push_back(WeightedTerm{s, kSynonymWeight, true});
    }
  }
  return out;
}

}  // namespace serefind::search
