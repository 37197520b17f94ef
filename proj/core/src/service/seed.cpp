#include "serefind/service/seed.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <random>
#include <sstream>

#include "serefind/error.hpp"

namespace serefind::service {

namespace {

constexpr std::array kWords = {
    "vintage", "wooden", "desk",     "lamp",    "bike",     "road",    "mountain", "textbook",
    "calculus", "physics", "chair",  "sofa",    "couch",    "laptop",  "monitor",  "phone",
    "charger", "guitar",   "piano",  "concert", "ticket",   "party",   "lecture",  "seminar",
    "room",    "sublet",   "studio", "apartment", "kitchen", "table",  "shelf",    "bookcase",
    "camera",  "lens",     "tripod", "jacket",  "winter",   "boots",   "helmet",   "scooter",
    "tutor",   "math",     "chemistry", "lab",  "coat",     "mug",     "printer",  "paper",
    "poster",  "frame",    "rug",    "blender", "microwave", "fridge", "dresser",  "mattress",
    "futon",   "speaker",  "headphones", "keyboard"};

constexpr std::array kSubcategories = {"general", "new", "used", "wanted"};

// Central Baltimore.
constexpr double kCenterLat = 39.2904;
constexpr double kCenterLon = -76.6122;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }
  /// Uniform in [-1, 1] with 1e-6 resolution.
  double unit() { return static_cast<double>(below(2000001)) / 1e6 - 1.0; }
  const char* word() { return kWords[below(kWords.size())]; }

 private:
  std::mt19937_64 gen_;
};

std::string words(Rng& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += rng.word();
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string raw_value(Rng& rng, schema::DataType type, Timestamp base) {
  switch (type) {
    case schema::DataType::kText:
      return words(rng, 1 + rng.below(3));
    case schema::DataType::kDateTime:
      return format_iso8601(base + std::chrono::hours(rng.below(24 * 90)));
    case schema::DataType::kCurrency: {
      const auto cents = 100 + rng.below(100000);
      return "USD " + std::to_string(cents / 100) + "." + (cents % 100 < 10 ? "0" : "") +
             std::to_string(cents % 100);
    }
    case schema::DataType::kNumber:
      return std::to_string(1 + rng.below(500));
    case schema::DataType::kLocation:
      return fixed(kCenterLat + 0.5 * rng.unit(), 6) + "," + fixed(kCenterLon + 0.5 * rng.unit(), 6);
    case schema::DataType::kUrl:
      return "https://example.org/items/" + std::to_string(rng.below(1000000));
  }
  return {};
}

std::string sanitize(const std::string& id) {
  std::string out;
  for (char c : id) {
    const auto u = static_cast<unsigned char>(c);
    out += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
  }
  return out;
}

}  // namespace

SeedReport seed_demo_data(App& app, const SeedOptions& options) {
  SeedReport report;
  if (options.count == 0) return report;

  const auto categories = app.registry().categories();
  if (categories.empty()) throw Error(ErrorCode::kSchemaNotFound, "no categories to seed");
  const auto networks = app.identity().networks().networks();
  if (networks.empty()) throw Error(ErrorCode::kUnknownDomain, "network registry is empty");

  std::vector<identity::User> owners;
  for (const auto& n : networks) {
    if (n.domain_suffixes.empty()) continue;
    const auto& domain = *n.domain_suffixes.begin();
    for (std::size_t k = 1; k <= options.users_per_network; ++k) {
      const auto username = "demo_" + sanitize(n.network_id) + "_" + std::to_string(k);
      auto user = app.find_by_username(username);
      if (!user) {
        const auto email = "demo" + std::to_string(k) + "@" + domain;
        const auto pending = app.register_user(email, username, options.password);
        user = app.verify(pending.token);
        ++report.users_created;
      }
      owners.push_back(*user);
    }
  }
  if (owners.empty()) throw Error(ErrorCode::kUnknownDomain, "no network has a domain");

  Rng rng(options.seed);
  for (std::size_t i = 0; i < options.count; ++i) {
    const auto& category = categories[rng.below(categories.size())];
    const auto& schema = app.registry().get(category);
    const auto& owner = owners[rng.below(owners.size())];

    market::ListingDraft d;
    d.category = category;
    d.subcategory = kSubcategories[rng.below(kSubcategories.size())];
    for (std::size_t t = rng.below(4); t > 0; --t) d.tags.insert(rng.word());
    d.description = words(rng, 6 + rng.below(15));
    for (const auto& f : schema.fields) {
      if (schema::labels_equal(f.label, schema::kTitleLabel)) {
        d.values[f.label] = words(rng, 2 + rng.below(3));
      } else if (rng.below(5) != 0) {
        d.values[f.label] = raw_value(rng, f.data_type, options.base_time);
      }
    }
    d.visibility = rng.below(10) < 3 ? market::Visibility::kPublic : market::Visibility::kNetwork;
    if (rng.below(5) != 0) {
      d.location = GeoPoint{kCenterLat + rng.unit(), kCenterLon + rng.unit()};
    }
    d.created_at = options.base_time - std::chrono::seconds(rng.below(60LL * 86400));
    report.listings.push_back(app.create_listing(owner, d).listing_id);
  }
  return report;
}

std::string dump_listings(const App& app) {
  std::ostringstream out;
  for (const auto& l : app.marketplace().listings()) {
    out << l.listing_id << '\t' << l.owner_id << '\t' << l.network_id << '\t' << l.category
        << '\t' << l.subcategory << '\t' << market::to_string(l.visibility) << '\t'
        << market::to_string(l.status) << '\t' << format_iso8601(l.created_at) << '\t';
    for (const auto& t : l.tags) out << t << ',';
    out << '\t' << l.title << '\t' << l.description << '\t';
    if (l.location) out << fixed(l.location->lat, 6) << ',' << fixed(l.location->lon, 6);
    for (const auto& [label, v] : l.values) out << '\t' << label << '=' << schema::to_canonical(v);
    out << '\n';
  }
  return out.str();
}

}  // namespace serefind::service
