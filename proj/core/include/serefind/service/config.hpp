#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "serefind/search/ranking.hpp"

namespace serefind::service {

/// Service settings read from a line-oriented `key = value` file.
///
/// Recognized keys: port, bind_address, base_url, data_dir, schema_dir,
/// network_registry, synonym_table, stopwords, w_text, w_loc, w_fresh,
/// decay_km, freshness_days, page_size, session_days, token_hours,
/// password_iterations, flush_interval_seconds, static_dir.
/// Relative paths resolve against the config file's directory.
struct ServiceConfig {
  int port = 8080;
  std::string bind_address = "127.0.0.1";
  std::string base_url = "http://localhost:8080";
  std::filesystem::path data_dir = "data";
  std::filesystem::path schema_dir = "schemas";
  std::filesystem::path network_registry_path = "networks.tsv";
  std::optional<std::filesystem::path> synonym_table_path;
  std::optional<std::filesystem::path> stopwords_path;
  search::RankingConfig ranking;
  std::size_t page_size = 20;
  int session_days = 14;
  int token_hours = 48;
  int password_iterations = 100000;
  /// 0 flushes the outbox after every request.
  int flush_interval_seconds = 5;
  std::optional<std::filesystem::path> static_dir;

  std::filesystem::path database_path() const { return data_dir / "serefind.db"; }
  std::filesystem::path outbox_dir() const { return data_dir / "outbox"; }
};

/// Throws kConfigInvalid on unknown keys, bad values or violated ranges.
ServiceConfig parse_config(std::string_view text,
                           const std::filesystem::path& base_dir = {});
ServiceConfig load_config(const std::filesystem::path& path);

/// weights >= 0, decay_km > 0, port in 1..65535 (0 allowed for tests:
/// pick any free port), page_size in 1..100.
void validate(const ServiceConfig& config);

}  // namespace serefind::service
