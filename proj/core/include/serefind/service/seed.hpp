#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "serefind/service/app.hpp"

namespace serefind::service {

struct SeedOptions {
  std::size_t count = 0;
  std::uint64_t seed = 1;
  /// Listings are backdated up to 60 days before this instant.
  Timestamp base_time = Timestamp{std::chrono::seconds{1704067200}};  // 2024-01-01
  std::size_t users_per_network = 3;
  std::string password = "demo-password";
};

struct SeedReport {
  std::size_t users_created = 0;
  std::vector<ListingId> listings;
};

/// Generates `count` listings spread over every category and network, owned
/// by verified demo accounts (created on first use). Deterministic for a
/// given seed, schema set and network registry.
SeedReport seed_demo_data(App& app, const SeedOptions& options);

/// Stable text dump of every listing, one per line, for corpus comparison.
std::string dump_listings(const App& app);

}  // namespace serefind::service
