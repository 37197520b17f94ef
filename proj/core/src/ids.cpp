#include "serefind/ids.hpp"

#include <charconv>
#include <cstdio>

namespace serefind {

std::string make_sequential_id(char prefix, unsigned long long n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%08llu", prefix, n);
  return buf;
}

unsigned long long parse_sequential_id(char prefix, const std::string& id) {
  if (id.size() < 2 || id[0] != prefix) return 0;
  unsigned long long n = 0;
  auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
  if (ec != std::errc{} || ptr != id.data() + id.size()) return 0;
  return n;
}

}  // namespace serefind
