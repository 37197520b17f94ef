#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "serefind/identity/network.hpp"
#include "serefind/service/app.hpp"
#include "serefind/service/config.hpp"

namespace serefind::service {

/// One line per request: id, status, category, label, data type, creator.
std::string format_requests(const std::vector<StoredRequest>& requests);

/// Reads a `<requestField>` document and files it as pending.
StoredRequest add_request_file(App& app, const std::filesystem::path& xml_file);

/// Adds a network to the registry file named by the config. Throws
/// kNetworkConflict. The running service picks it up on restart.
void add_network(const ServiceConfig& config, identity::Network network);

std::string format_networks(const identity::NetworkRegistry& registry);

}  // namespace serefind::service
