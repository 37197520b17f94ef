#include "serefind/market/listing.hpp"

namespace serefind::market {

std::string_view to_string(Visibility v) {
  return v == Visibility::kPublic ? "public" : "network";
}

std::string_view to_string(ListingStatus s) {
  switch (s) {
    case ListingStatus::kActive: return "active";
    case ListingStatus::kHidden: return "hidden";
    case ListingStatus::kDeleted: return "deleted";
    case ListingStatus::kSold: return "sold";
  }
  return "active";
}

std::string_view to_string(EdgeKind k) {
  return k == EdgeKind::kSolid ? "solid" : "dashed";
}

std::optional<Visibility> visibility_from_string(std::string_view s) {
  if (s == "network") return Visibility::kNetwork;
  if (s == "public") return Visibility::kPublic;
  return std::nullopt;
}

std::optional<ListingStatus> listing_status_from_string(std::string_view s) {
  for (auto st : {ListingStatus::kActive, ListingStatus::kHidden,
                  ListingStatus::kDeleted, ListingStatus::kSold}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
  if (s == "solid") return EdgeKind::kSolid;
  if (s == "dashed") return EdgeKind::kDashed;
  return std::nullopt;
}

}  // namespace serefind::market
