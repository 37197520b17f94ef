#include "serefind/search/tokenizer.hpp"

#include <fstream>

namespace serefind::search {

const StopwordSet& default_stopwords() {
  static const StopwordSet kWords = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",   "but",
      "by",   "for",  "from", "has",  "have", "in",   "is",   "it",
      "its",  "of",   "on",   "or",   "that", "the",  "this", "to",
      "was",  "were", "will", "with", "you",  "your",
  };
  return kWords;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto word = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    for (auto& c : word) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    out.insert(std::move(word));
  }
  return out;
}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string current;
  auto emit = [&] {
    if (current.size() >= 2 && stopwords_.count(current) == 0) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') {
      current += static_cast<char>(c - 'A' + 'a');
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      current += ch;
    } else {
      emit();
    }
  }
  emit();
  return tokens;
}

}  // namespace serefind::search
