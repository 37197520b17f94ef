#pragma once

#include <optional>
#include <set>
#include <string>

#include "serefind/geo.hpp"
#include "serefind/ids.hpp"
#include "serefind/time.hpp"

namespace serefind::identity {

/// Newsfeed preferences. Empty sets and an absent radius filter nothing.
struct Preferences {
  std::set<std::string> categories;
  std::set<std::string> networks;
  std::optional<double> radius_km;

  bool operator==(const Preferences&) const = default;
};

struct User {
  UserId user_id;
  std::string username;
  std::string email;
  std::string network_id;
  std::string password_digest;
  bool active = false;
  /// Optional, set in settings; never shown to other users.
  std::string full_name;
  std::optional<GeoPoint> home_location;
  Preferences preferences;
  Timestamp created_at{};

  bool operator==(const User&) const = default;
};

/// 3-32 characters of [a-z0-9_].
bool valid_username(std::string_view username);

}  // namespace serefind::identity
