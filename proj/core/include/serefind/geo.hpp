#pragma once

namespace serefind {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in kilometres.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

bool is_valid(const GeoPoint& p);

}  // namespace serefind
