#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "serefind/identity/user.hpp"
#include "serefind/market/listing.hpp"
#include "serefind/schema/schema.hpp"

namespace serefind::identity {

enum class RedactionLevel { kAnonymous, kMember, kFull };

std::string_view to_string(RedactionLevel level);

/// What a given viewer may see of a listing.
///
///   anonymous  id, title, category, subcategory, created_at and the values
///              of search-filter fields
///   member     + description, owner username, tags, every value, listing
///              location, network, visibility, status, updated_at
///   full       + view_count (owner only)
///
/// No level carries the owner's email, full name or home location.
struct RedactedListing {
  RedactionLevel level = RedactionLevel::kAnonymous;
  ListingId listing_id;
  std::string category;
  std::string subcategory;
  std::string title;
  Timestamp created_at{};
  std::map<std::string, schema::FieldValue> values;

  std::optional<std::string> description;
  std::optional<std::string> owner_username;
  std::optional<std::set<std::string>> tags;
  std::optional<GeoPoint> location;
  std::optional<std::string> network_id;
  std::optional<market::Visibility> visibility;
  std::optional<market::ListingStatus> status;
  std::optional<Timestamp> updated_at;
  std::optional<std::uint64_t> view_count;

  bool operator==(const RedactedListing&) const = default;
};

/// Inactive accounts browse as anonymous.
const User* effective_viewer(const User* viewer);

/// nullptr viewer means anonymous. Non-owners see active listings only;
/// signed-in viewers from another network see public listings only.
bool can_view(const User* viewer, const market::Listing& listing);

/// nullopt means Denied.
std::optional<RedactedListing> redact(const User* viewer, const market::Listing& listing,
                                      std::string_view owner_username,
                                      std::span<const schema::FieldSpec> filter_fields);

}  // namespace serefind::identity
