#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "serefind/identity/user.hpp"
#include "serefind/market/marketplace.hpp"
#include "serefind/schema/registry.hpp"
#include "serefind/schema/xml.hpp"
#include "serefind/service/app.hpp"
#include "serefind/service/config.hpp"
#include "serefind/time.hpp"

namespace fixtures {

namespace fs = std::filesystem;

/// Event schema with a text Title filter and a date-time field.
inline constexpr const char* kEventXml =
    "<schema id=\"O198\" category=\"event\" creator=\"admin\">\n"
    "\t<field input-type=\"textbox\"  data-type=\"text\" \n"
    "\tvisibility-in-search-filter=\"true\">Title</field>\n"
    "\t<field data-type=\"date-time\">Date and Time</field>\n"
    "</schema>\n";

inline constexpr const char* kCoverChargeXml =
    "<requestField category=\"event\" data-type=\"currency\" \n"
    "\tcreator=\"user001\">Cover Charge</requestField>\n";

inline constexpr const char* kBooksXml =
    "<schema id=\"B1\" category=\"books\" creator=\"admin\">\n"
    "  <field visibility-in-search-filter=\"true\">Title</field>\n"
    "  <field visibility-in-search-filter=\"true\">Author</field>\n"
    "  <field data-type=\"currency\" visibility-in-search-filter=\"true\">Price</field>\n"
    "  <field data-type=\"location\">Pickup</field>\n"
    "  <field input-type=\"textarea\">Notes</field>\n"
    "</schema>\n";

inline constexpr const char* kNetworksTsv =
    "jhu\tJohns Hopkins University\tjhu.edu\n"
    "umd\tUniversity of Maryland\tumd.edu\n";

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "serefind-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// A service layout under `root` with the event and books schemas, two
/// networks, a small synonym table and cheap password hashing.
inline serefind::service::ServiceConfig make_service(const fs::path& root) {
  write_file(root / "schemas" / "event.xml", kEventXml);
  write_file(root / "schemas" / "books.xml", kBooksXml);
  write_file(root / "networks.tsv", kNetworksTsv);
  write_file(root / "synonyms.txt", "bike: bicycle\ncouch: sofa\n");
  serefind::service::ServiceConfig c;
  c.port = 0;
  c.data_dir = root / "data";
  c.schema_dir = root / "schemas";
  c.network_registry_path = root / "networks.tsv";
  c.synonym_table_path = root / "synonyms.txt";
  c.password_iterations = 1000;
  c.flush_interval_seconds = 0;
  return c;
}

/// Writes `config` in the service's key = value format.
inline void write_config(const fs::path& path, const serefind::service::ServiceConfig& c) {
  std::ostringstream out;
  out << "port = " << c.port << "\n"
      << "data_dir = " << c.data_dir.string() << "\n"
      << "schema_dir = " << c.schema_dir.string() << "\n"
      << "network_registry = " << c.network_registry_path.string() << "\n"
      << "password_iterations = " << c.password_iterations << "\n"
      << "flush_interval_seconds = " << c.flush_interval_seconds << "\n";
  if (c.synonym_table_path) out << "synonym_table = " << c.synonym_table_path->string() << "\n";
  write_file(path, out.str());
}

inline serefind::Timestamp at(const std::string& iso) { return *serefind::parse_iso8601(iso); }

inline serefind::identity::User make_user(const std::string& id, const std::string& username,
                                          const std::string& network, bool active = true) {
  serefind::identity::User u;
  u.user_id = serefind::UserId{id};
  u.username = username;
  u.email = username + "@" + network + ".edu";
  u.network_id = network;
  u.active = active;
  u.full_name = "Full Name Of " + username;
  u.home_location = serefind::GeoPoint{39.3299, -76.6205};
  return u;
}

/// Registers and verifies an account through the App.
inline serefind::identity::User make_member(serefind::service::App& app,
                                            const std::string& username,
                                            const std::string& domain) {
  auto pending = app.register_user(username + "@" + domain, username, "password123");
  return app.verify(pending.token);
}

/// Random schema respecting the structural rules. Labels exercise XML
/// escaping and non-ASCII text.
inline serefind::schema::CategorySchema random_schema(std::mt19937_64& rng, int index) {
  using namespace serefind::schema;
  static const std::vector<std::string> pieces = {
      "Price", "Date", "Venue", "A & B", "<odd>", "\"quoted\"", "it's", "Größe",
      "料金", "Size", "Colour", "Rooms", "url", "Notes", "Cover", "Charge", "x"};
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  CategorySchema s;
  s.schema_id = "S" + std::to_string(index);
  s.category = "cat_" + std::to_string(index);
  s.creator = pick(2) ? "admin" : "user&" + std::to_string(pick(100));
  s.version = 1 + static_cast<int>(pick(5));
  s.fields.push_back({"Title", InputType::kTextbox, DataType::kText, pick(2) == 0});
  const std::size_t extra = pick(8);
  for (std::size_t i = 0; i < extra; ++i) {
    FieldSpec f;
    f.label = pieces[pick(pieces.size())] + " " + std::to_string(i);
    f.input_type = static_cast<InputType>(pick(4));
    f.data_type = static_cast<DataType>(pick(6));
    f.visible_in_search_filter = filterable(f.data_type) && pick(2) == 0;
    s.fields.push_back(f);
  }
  // Title need not come first.
  if (s.fields.size() > 1 && pick(3) == 0) std::swap(s.fields[0], s.fields.back());
  return s;
}

}  // namespace fixtures
