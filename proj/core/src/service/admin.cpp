#include "serefind/service/admin.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "serefind/error.hpp"
#include "serefind/schema/xml.hpp"

namespace serefind::service {

namespace fs = std::filesystem;

std::string format_requests(const std::vector<StoredRequest>& requests) {
  std::ostringstream out;
  for (const auto& r : requests) {
    out << r.request_id << '\t' << schema::to_string(r.request.status) << '\t'
        << r.request.category << '\t' << r.request.label << '\t'
        << schema::to_string(r.request.data_type) << '\t' << r.request.creator;
    if (!r.reason.empty()) out << '\t' << r.reason;
    out << '\n';
  }
  return out.str();
}

StoredRequest add_request_file(App& app, const fs::path& xml_file) {
  std::ifstream in(xml_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + xml_file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return app.submit_field_request(schema::parse_field_request(buf.str()));
}

void add_network(const ServiceConfig& config, identity::Network network) {
  const auto& path = config.network_registry_path;
  auto registry = fs::exists(path) ? identity::NetworkRegistry::load(path)
                                   : identity::NetworkRegistry{};
  registry.add(std::move(network));
  const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << registry.to_text();
    if (!out.flush()) throw Error(ErrorCode::kStorageError, "cannot write " + tmp);
  }
  fs::rename(tmp, path);
}

std::string format_networks(const identity::NetworkRegistry& registry) {
  return registry.to_text();
}

}  // namespace serefind::service
