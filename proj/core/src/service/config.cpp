#include "serefind/service/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "serefind/error.hpp"

namespace serefind::service {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void invalid(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kConfigInvalid, "config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T number(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    invalid(line, std::string(key) + " expects a number, got '" + std::string(v) + "'");
  }
  return out;
}

fs::path resolve(const fs::path& base, std::string_view v) {
  fs::path p{std::string(v)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

ServiceConfig parse_config(std::string_view text, const fs::path& base_dir) {
  ServiceConfig c;
  c.data_dir = resolve(base_dir, "data");
  c.schema_dir = resolve(base_dir, "schemas");
  c.network_registry_path = resolve(base_dir, "networks.tsv");

  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) invalid(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "port") c.port = number<int>(value, line_no, key);
    else if (key == "bind_address") c.bind_address = std::string(value);
    else if (key == "base_url") {
      std::string url(value);
      while (!url.empty() && url.back() == '/') url.pop_back();
      c.base_url = url;
    }
    else if (key == "data_dir") c.data_dir = resolve(base_dir, value);
    else if (key == "schema_dir") c.schema_dir = resolve(base_dir, value);
    else if (key == "network_registry") c.network_registry_path = resolve(base_dir, value);
    else if (key == "synonym_table") c.synonym_table_path = resolve(base_dir, value);
    else if (key == "stopwords") c.stopwords_path = resolve(base_dir, value);
    else if (key == "static_dir") c.static_dir = resolve(base_dir, value);
    else if (key == "w_text") c.ranking.w_text = number<double>(value, line_no, key);
    else if (key == "w_loc") c.ranking.w_loc = number<double>(value, line_no, key);
    else if (key == "w_fresh") c.ranking.w_fresh = number<double>(value, line_no, key);
    else if (key == "decay_km") c.ranking.decay_km = number<double>(value, line_no, key);
    else if (key == "freshness_days") c.ranking.freshness_days = number<double>(value, line_no, key);
    else if (key == "page_size") c.page_size = number<std::size_t>(value, line_no, key);
    else if (key == "session_days") c.session_days = number<int>(value, line_no, key);
    else if (key == "token_hours") c.token_hours = number<int>(value, line_no, key);
    else if (key == "password_iterations") c.password_iterations = number<int>(value, line_no, key);
    else if (key == "flush_interval_seconds") c.flush_interval_seconds = number<int>(value, line_no, key);
    else invalid(line_no, "unknown key '" + std::string(key) + "'");
  }
  validate(c);
  return c;
}

ServiceConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void validate(const ServiceConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kConfigInvalid, m); };
  if (c.port < 0 || c.port > 65535) fail("port must be in 1..65535");
  if (c.ranking.w_text < 0 || c.ranking.w_loc < 0 || c.ranking.w_fresh < 0) {
    fail("ranking weights must be >= 0");
  }
  if (!(c.ranking.decay_km > 0)) fail("decay_km must be > 0");
  if (!(c.ranking.freshness_days > 0)) fail("freshness_days must be > 0");
  if (c.page_size < 1 || c.page_size > 100) fail("page_size must be in 1..100");
  if (c.session_days < 1) fail("session_days must be >= 1");
  if (c.token_hours < 1) fail("token_hours must be >= 1");
  if (c.password_iterations < 1) fail("password_iterations must be >= 1");
  if (c.flush_interval_seconds < 0) fail("flush_interval_seconds must be >= 0");
}

}  // namespace serefind::service
