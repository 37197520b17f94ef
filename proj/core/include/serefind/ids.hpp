#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>

namespace serefind {

/// Opaque string identifier tagged by what it identifies.
template <typename Tag>
struct StrongId {
  std::string value;

  StrongId() = default;
  explicit StrongId(std::string v) : value(std::move(v)) {}

  bool empty() const { return value.empty(); }
  auto operator<=>(const StrongId&) const = default;
  bool operator==(const StrongId&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) {
    return os << id.value;
  }
};

using UserId = StrongId<struct UserIdTag>;
using ListingId = StrongId<struct ListingIdTag>;
using ThreadId = StrongId<struct ThreadIdTag>;
using MessageId = StrongId<struct MessageIdTag>;

/// Formats sequence number `n` as prefix + zero-padded digits so that
/// lexicographic order matches numeric order.
std::string make_sequential_id(char prefix, unsigned long long n);

/// Inverse of make_sequential_id; returns 0 when `id` is not of that form.
unsigned long long parse_sequential_id(char prefix, const std::string& id);

}  // namespace serefind

template <typename Tag>
struct std::hash<serefind::StrongId<Tag>> {
  std::size_t operator()(const serefind::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
