#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace serefind::search {

using StopwordSet = std::unordered_set<std::string>;

/// The built-in 30-word English stopword list.
const StopwordSet& default_stopwords();

/// One word per line, `#` comments allowed.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// Lowercases ASCII, splits on ASCII non-alphanumerics (bytes >= 0x80 are
/// kept as word characters so UTF-8 words stay whole), drops tokens shorter
/// than 2 bytes and stopwords. No stemming.
class Tokenizer {
 public:
  Tokenizer() : stopwords_(default_stopwords()) {}
  explicit Tokenizer(StopwordSet stopwords) : stopwords_(std::move(stopwords)) {}

  std::vector<std::string> operator()(std::string_view text) const;

 private:
  StopwordSet stopwords_;
};

}  // namespace serefind::search
