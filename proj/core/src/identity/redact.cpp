#include "serefind/identity/redact.hpp"

#include <algorithm>

namespace serefind::identity {

std::string_view to_string(RedactionLevel level) {
  switch (level) {
    case RedactionLevel::kAnonymous: return "anonymous";
    case RedactionLevel::kMember: return "member";
    case RedactionLevel::kFull: return "full";
  }
  return "anonymous";
}

const User* effective_viewer(const User* viewer) {
  return viewer != nullptr && viewer->active ? viewer : nullptr;
}

bool can_view(const User* viewer, const market::Listing& listing) {
  viewer = effective_viewer(viewer);
  if (viewer != nullptr && viewer->user_id == listing.owner_id) return true;
  if (listing.status != market::ListingStatus::kActive) return false;
  if (viewer == nullptr) return true;
  return viewer->network_id == listing.network_id ||
         listing.visibility == market::Visibility::kPublic;
}

std::optional<RedactedListing> redact(const User* viewer, const market::Listing& listing,
                                      std::string_view owner_username,
                                      std::span<const schema::FieldSpec> filter_fields) {
  viewer = effective_viewer(viewer);
  if (!can_view(viewer, listing)) return std::nullopt;

  RedactedListing out;
  out.listing_id = listing.listing_id;
  out.category = listing.category;
  out.subcategory = listing.subcategory;
  out.title = listing.title;
  out.created_at = listing.created_at;

  if (viewer == nullptr) {
    out.level = RedactionLevel::kAnonymous;
    for (const auto& [label, value] : listing.values) {
      const bool shown =
          std::any_of(filter_fields.begin(), filter_fields.end(), [&](const auto& f) {
            return schema::labels_equal(f.label, label);
          });
      if (shown) out.values.emplace(label, value);
    }
    return out;
  }

  out.level = viewer->user_id == listing.owner_id ? RedactionLevel::kFull
                                                  : RedactionLevel::kMember;
  out.values = listing.values;
  out.description = listing.description;
  out.owner_username = std::string(owner_username);
  out.tags = listing.tags;
  out.location = listing.location;
  out.network_id = listing.network_id;
  out.visibility = listing.visibility;
  out.status = listing.status;
  out.updated_at = listing.updated_at;
  if (out.level == RedactionLevel::kFull) out.view_count = listing.view_count;
  return out;
}

}  // namespace serefind::identity
