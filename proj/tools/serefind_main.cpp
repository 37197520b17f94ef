// Command line entry point: `serve` runs the HTTP service, `admin` manages
// schema requests, networks, demo data and graph exports.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "serefind/error.hpp"
#include "serefind/service/admin.hpp"
#include "serefind/service/app.hpp"
#include "serefind/service/http.hpp"
#include "serefind/service/seed.hpp"

namespace sv = serefind::service;

namespace {

int serve(const sv::ServiceConfig& config) {
  // Block termination signals here so a dedicated thread can wait for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  sv::App app(config);
  sv::HttpServer server(app);
  const int port = server.bind();
  std::cout << "serefind listening on " << config.bind_address << ':' << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  if (waiter.joinable()) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  return 0;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw serefind::Error(serefind::ErrorCode::kStorageError, "cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Schema-driven campus classifieds service"};
  cli.require_subcommand(1);
  std::string config_path = "serefind.conf";

  auto* serve_cmd = cli.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", config_path, "Config file")->required();

  auto* admin = cli.add_subcommand("admin", "Administrative commands");
  admin->add_option("--config", config_path, "Config file");
  admin->require_subcommand(1);

  auto* requests = admin->add_subcommand("requests", "Field requests");
  requests->require_subcommand(1);
  auto* req_list = requests->add_subcommand("list", "List field requests");
  std::string xml_file;
  auto* req_add = requests->add_subcommand("add", "File a <requestField> XML document");
  req_add->add_option("file", xml_file)->required();
  std::string request_id;
  auto* req_approve = requests->add_subcommand("approve", "Approve a request");
  req_approve->add_option("id", request_id)->required();
  auto* req_reject = requests->add_subcommand("reject", "Reject a request");
  req_reject->add_option("id", request_id)->required();

  auto* networks = admin->add_subcommand("networks", "Network registry");
  networks->require_subcommand(1);
  serefind::identity::Network network;
  std::vector<std::string> domains;
  auto* net_add = networks->add_subcommand("add", "Register a network");
  net_add->add_option("--id", network.network_id)->required();
  net_add->add_option("--name", network.display_name)->required();
  net_add->add_option("--domain", domains, "Email domain suffix (repeatable)")->required();
  auto* net_list = networks->add_subcommand("list", "List networks");

  sv::SeedOptions seed_options;
  auto* seed = admin->add_subcommand("seed", "Generate deterministic demo listings");
  seed->add_option("--count", seed_options.count, "Number of listings")->required();
  seed->add_option("--seed", seed_options.seed, "Random seed");

  std::string out_path;
  auto* export_graph = admin->add_subcommand("export-graph", "Write the user-listing edge list");
  export_graph->add_option("--out", out_path, "Output file (default stdout)");

  CLI11_PARSE(cli, argc, argv);

  try {
    const auto config = sv::load_config(config_path);
    if (*serve_cmd) return serve(config);

    if (*net_add) {
      network.domain_suffixes.insert(domains.begin(), domains.end());
      sv::add_network(config, network);
      std::cout << "added network " << network.network_id << '\n';
      return 0;
    }
    if (*net_list) {
      std::cout << sv::format_networks(
          serefind::identity::NetworkRegistry::load(config.network_registry_path));
      return 0;
    }

    sv::App app(config);
    if (*req_list) {
      std::cout << sv::format_requests(app.requests());
    } else if (*req_add) {
      std::cout << sv::format_requests({sv::add_request_file(app, xml_file)});
    } else if (*req_approve || *req_reject) {
      const auto decision = *req_approve ? serefind::schema::Decision::kApprove
                                         : serefind::schema::Decision::kReject;
      const auto r = app.decide_request(request_id, decision);
      std::cout << sv::format_requests({r});
      if (decision == serefind::schema::Decision::kApprove &&
          r.request.status != serefind::schema::RequestStatus::kApproved) {
        return 1;
      }
      if (r.request.status == serefind::schema::RequestStatus::kApproved) {
        std::cout << r.request.category << " is now version "
                  << app.schema(r.request.category).version << '\n';
      }
    } else if (*seed) {
      const auto report = sv::seed_demo_data(app, seed_options);
      std::cout << "seeded " << report.listings.size() << " listings, "
                << report.users_created << " new demo users\n";
    } else if (*export_graph) {
      write_output(app.export_graph(), out_path);
    }
    return 0;
  } catch (const serefind::Error& e) {
    std::cerr << "error: " << serefind::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
