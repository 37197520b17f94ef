#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "serefind/geo.hpp"
#include "serefind/ids.hpp"
#include "serefind/schema/values.hpp"
#include "serefind/time.hpp"

namespace serefind::market {

enum class Visibility { kNetwork, kPublic };

enum class ListingStatus { kActive, kHidden, kDeleted, kSold };

enum class EdgeKind { kSolid, kDashed };

std::string_view to_string(Visibility v);
std::string_view to_string(ListingStatus s);
std::string_view to_string(EdgeKind k);
std::optional<Visibility> visibility_from_string(std::string_view s);
std::optional<ListingStatus> listing_status_from_string(std::string_view s);
std::optional<EdgeKind> edge_kind_from_string(std::string_view s);

/// A classified node: owner plus schema-defined attributes.
struct Listing {
  ListingId listing_id;
  UserId owner_id;
  /// Owner's network at creation; the visibility boundary.
  std::string network_id;
  std::string category;
  std::string subcategory;
  std::set<std::string> tags;
  std::string title;
  std::string description;
  /// Keyed by the schema's label spelling; includes Title.
  std::map<std::string, schema::FieldValue> values;
  std::optional<GeoPoint> location;
  Visibility visibility = Visibility::kNetwork;
  ListingStatus status = ListingStatus::kActive;
  /// Status held before the most recent delete; consumed by undo.
  std::optional<ListingStatus> status_before_delete;
  Timestamp created_at{};
  Timestamp updated_at{};
  std::uint64_t view_count = 0;

  bool operator==(const Listing&) const = default;
};

struct GraphEdge {
  UserId user_id;
  ListingId listing_id;
  EdgeKind kind = EdgeKind::kDashed;
  std::uint64_t message_count = 0;

  bool operator==(const GraphEdge&) const = default;
};

}  // namespace serefind::market
