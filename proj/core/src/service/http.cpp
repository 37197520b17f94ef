#include "serefind/service/http.hpp"

#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <functional>
#include <iostream>
#include <thread>

#include "codec.hpp"
#include "serefind/schema/xml.hpp"

namespace serefind::service {

using codec::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAuthenticationRequired:
    case ErrorCode::kInvalidCredentials:
      return 401;
    case ErrorCode::kDenied:
    case ErrorCode::kNotOwner:
    case ErrorCode::kNotParticipant:
    case ErrorCode::kAccountInactive:
      return 403;
    case ErrorCode::kListingNotFound:
    case ErrorCode::kThreadNotFound:
    case ErrorCode::kMessageNotFound:
    case ErrorCode::kSchemaNotFound:
    case ErrorCode::kUnknownUsername:
    case ErrorCode::kTokenUnknown:
    case ErrorCode::kUnknownRequestId:
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kUsernameTaken:
    case ErrorCode::kEmailAlreadyRegistered:
    case ErrorCode::kTokenAlreadyUsed:
    case ErrorCode::kInvalidTransition:
    case ErrorCode::kAlreadySold:
    case ErrorCode::kBuyerNeverEngaged:
    case ErrorCode::kRequestNotPending:
    case ErrorCode::kNetworkConflict:
    case ErrorCode::kDuplicateFieldLabel:
    case ErrorCode::kCategoryMismatch:
    case ErrorCode::kListingUnavailable:
      return 409;
    case ErrorCode::kTokenExpired:
    case ErrorCode::kListingDeleted:
      return 410;
    case ErrorCode::kValidationFailed:
      return 422;
    case ErrorCode::kStorageError:
    case ErrorCode::kOutboxUnwritable:
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kSchemaLoadFailed:
    case ErrorCode::kPortUnavailable:
      return 500;
    default:
      return 400;
  }
}

const std::vector<Route>& route_table() {
  static const std::vector<Route> routes = {
      {"POST", "/auth/register", false},
      {"GET", "/verify/{token}", false},
      {"POST", "/auth/login", false},
      {"POST", "/auth/logout", true},
      {"GET", "/feed", false},
      {"GET", "/search", false},
      {"POST", "/listings", true},
      {"GET", "/listings/{id}", false},
      {"PATCH", "/listings/{id}", true},
      {"POST", "/listings/{id}/view", false},
      {"POST", "/listings/{id}/sold", true},
      {"GET", "/directory/profile/{username}", false},
      {"POST", "/messages", true},
      {"GET", "/messages/unread-count", true},
      {"GET", "/messages/{folder}", true},
      {"DELETE", "/messages/{id}", true},
      {"GET", "/schemas", false},
      {"GET", "/schemas/{category}", false},
      {"POST", "/schema-requests", true},
      {"GET", "/settings", true},
      {"PATCH", "/settings", true},
      {"GET", "/health", false},
  };
  return routes;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kBadRequest, msg); }

std::string bearer(const httplib::Request& req) {
  const auto h = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (h.size() > kPrefix.size() && h.compare(0, kPrefix.size(), kPrefix) == 0) {
    return h.substr(kPrefix.size());
  }
  return {};
}

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    bad(std::string("body is not valid JSON: ") + e.what());
  }
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  auto v = req.get_param_value(key);
  if (v.empty()) return std::nullopt;
  return v;
}

std::size_t size_param(const httplib::Request& req, const char* key, std::size_t fallback) {
  const auto v = param(req, key);
  if (!v) return fallback;
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(*v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos != v->size() || (*v)[0] == '-') bad(std::string(key) + " must be a non-negative integer");
  return static_cast<std::size_t>(n);
}

double double_param(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos != v.size()) bad(key + " must be a number");
  return d;
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, codec::error_json(e), http_status(e.code()));
}

}  // namespace

struct HttpServer::Impl {
  App& app;
  httplib::Server server;
  int port = -1;
  std::thread serve_thread;
  std::thread flush_thread;
  std::mutex flush_mu;
  std::condition_variable flush_cv;
  bool stopping = false;

  explicit Impl(App& a) : app(a) { install(); }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  Handler wrap(Handler fn) {
    return [this, fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        app.refresh();
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const json::exception& e) {
        send_error(res, Error(ErrorCode::kBadRequest, e.what()));
      } catch (const std::exception& e) {
        send_json(res, {{"error_code", "InternalError"}, {"message", e.what()}}, 500);
      }
      if (app.config().flush_interval_seconds == 0) flush_quietly();
    };
  }

  void flush_quietly() {
    try {
      app.flush_outbox();
    } catch (const std::exception& e) {
      std::cerr << "outbox flush failed: " << e.what() << '\n';
    }
  }

  std::optional<identity::User> viewer(const httplib::Request& req) {
    return app.session_user(bearer(req));
  }

  identity::User require_user(const httplib::Request& req) {
    auto u = viewer(req);
    if (!u) throw Error(ErrorCode::kAuthenticationRequired, "sign in required");
    return *u;
  }

  void install() {
    auto& s = server;
    s.set_payload_max_length(1 << 20);

    s.Get("/health", wrap([](const auto&, auto& res) { send_json(res, {{"status", "ok"}}); }));

    s.Post("/auth/register", wrap([this](const auto& req, auto& res) {
      const auto b = body_json(req);
      const auto email = b.value("email", std::string{});
      const auto username = b.value("username", std::string{});
      const auto password = b.value("password", std::string{});
      const auto pending = app.register_user(email, username, password);
      const auto user = app.find_user(pending.user_id);
      send_json(res,
                {{"user_id", pending.user_id.value},
                 {"username", user->username},
                 {"network_id", user->network_id},
                 {"status", "pending_verification"},
                 {"verification_expires_at", format_iso8601(pending.expires_at)}},
                201);
    }));

    s.Get("/verify/:token", wrap([this](const auto& req, auto& res) {
      const auto user = app.verify(req.path_params.at("token"));
      send_json(res, {{"user_id", user.user_id.value},
                      {"username", user.username},
                      {"active", user.active}});
    }));

    s.Post("/auth/login", wrap([this](const auto& req, auto& res) {
      const auto b = body_json(req);
      const auto login = b.contains("username") ? b.value("username", std::string{})
                                                : b.value("email", std::string{});
      const auto session = app.login(login, b.value("password", std::string{}));
      const auto user = app.find_user(session.user_id);
      send_json(res, {{"session_token", session.token},
                      {"expires_at", format_iso8601(session.expires_at)},
                      {"user", codec::self_json(*user)}});
    }));

    s.Post("/auth/logout", wrap([this](const auto& req, auto& res) {
      require_user(req);
      app.logout(bearer(req));
      send_json(res, {{"signed_out", true}});
    }));

    s.Get("/feed", wrap([this](const auto& req, auto& res) {
      const auto u = viewer(req);
      const auto page = size_param(req, "page", 0);
      std::optional<std::size_t> size;
      if (param(req, "page_size")) size = size_param(req, "page_size", 0);
      send_json(res, codec::feed_json(app.feed(u ? &*u : nullptr, page, size)));
    }));

    s.Get("/search", wrap([this](const auto& req, auto& res) {
      const auto u = viewer(req);
      SearchParams p;
      p.q = param(req, "q").value_or("");
      p.category = param(req, "category");
      p.subcategory = param(req, "subcategory");
      p.page = size_param(req, "page", 0);
      if (param(req, "page_size")) p.page_size = size_param(req, "page_size", 0);
      const auto view = param(req, "view").value_or("list");
      if (view != "list" && view != "thumbnails" && view != "map" && view != "tabular") {
        bad("view must be list, thumbnails, map or tabular");
      }
      const auto lat = param(req, "lat");
      const auto lon = param(req, "lon");
      if (lat.has_value() != lon.has_value()) bad("lat and lon go together");
      if (lat) {
        p.origin = GeoPoint{double_param("lat", *lat), double_param("lon", *lon)};
        if (!is_valid(*p.origin)) bad("lat/lon out of range");
      }
      if (const auto as_of = param(req, "as_of")) {
        p.as_of = parse_iso8601(*as_of);
        if (!p.as_of) bad("as_of must be an ISO-8601 timestamp");
      }
      for (const auto& [key, value] : req.params) {
        if (key.rfind("filter.", 0) == 0 && key.size() > 7) p.field_filters[key.substr(7)] = value;
      }
      auto body = codec::search_json(app.search(u ? &*u : nullptr, p));
      body["view"] = view;
      send_json(res, body);
    }));

    s.Post("/listings", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const auto l = app.create_listing(u, codec::draft_from(body_json(req)));
      send_json(res, codec::listing_json(app.view_listing(&u, l.listing_id)), 201);
    }));

    s.Get("/listings/:id", wrap([this](const auto& req, auto& res) {
      const auto u = viewer(req);
      const ListingId id{req.path_params.at("id")};
      send_json(res, codec::listing_json(app.view_listing(u ? &*u : nullptr, id)));
    }));

    s.Patch("/listings/:id", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const ListingId id{req.path_params.at("id")};
      const auto l = app.mutate_listing(u, id, codec::action_from(body_json(req)));
      json out = {{"listing_id", l.listing_id.value},
                  {"status", std::string(market::to_string(l.status))}};
      if (l.status != market::ListingStatus::kDeleted) {
        out["listing"] = codec::listing_json(app.view_listing(&u, id));
      }
      send_json(res, out);
    }));

    s.Post("/listings/:id/view", wrap([this](const auto& req, auto& res) {
      const auto u = viewer(req);
      const ListingId id{req.path_params.at("id")};
      const auto* v = u ? &*u : nullptr;
      const auto before = app.marketplace().find(id);
      app.record_view(v, id);
      const bool counted = before && (v == nullptr || before->owner_id != v->user_id);
      send_json(res, {{"listing_id", id.value}, {"recorded", counted}});
    }));

    s.Post("/listings/:id/sold", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const ListingId id{req.path_params.at("id")};
      const auto b = body_json(req);
      const auto buyer = b.value("buyer", std::string{});
      if (buyer.empty()) bad("missing field 'buyer'");
      json edges = json::array();
      for (const auto& e : app.mark_sold(u, id, buyer)) edges.push_back(codec::edge_json(e));
      send_json(res, {{"listing_id", id.value}, {"status", "sold"}, {"edges", edges}});
    }));

    s.Get("/directory/profile/:username", wrap([this](const auto& req, auto& res) {
      const auto u = viewer(req);
      send_json(res, codec::profile_json(
                         app.profile(req.path_params.at("username"), u ? &*u : nullptr)));
    }));

    s.Post("/messages", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const auto b = body_json(req);
      const auto listing = b.value("listing_id", std::string{});
      if (listing.empty()) bad("missing field 'listing_id'");
      std::optional<ThreadId> thread;
      if (b.contains("thread_id") && b["thread_id"].is_string()) {
        thread = ThreadId{b["thread_id"].template get<std::string>()};
      }
      const auto r = app.send_message(u, ListingId{listing}, b.value("body", std::string{}), thread);
      send_json(res,
                {{"message", codec::message_json(r.message)},
                 {"thread_created", r.thread_created}},
                201);
    }));

    // Registered before the folder route so it is not read as a folder name.
    s.Get("/messages/unread-count", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      send_json(res, {{"unread", app.unread_count(u.user_id)}});
    }));

    s.Get("/messages/:folder", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const auto name = req.path_params.at("folder");
      const auto folder = messaging::folder_from_string(name);
      if (!folder) throw Error(ErrorCode::kNotFound, "no folder '" + name + "'");
      if (const auto thread = param(req, "thread")) {
        send_json(res, codec::folder_thread_json(app.open_thread(u.user_id, ThreadId{*thread})));
        return;
      }
      json threads = json::array();
      for (const auto& t : app.folder(u.user_id, *folder)) {
        threads.push_back(codec::folder_thread_json(t));
      }
      send_json(res, {{"folder", name}, {"threads", threads}});
    }));

    s.Delete("/messages/:id", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const auto m = app.delete_message(u.user_id, MessageId{req.path_params.at("id")});
      send_json(res, {{"message_id", m.message_id.value}, {"deleted", true}});
    }));

    s.Get("/schemas", wrap([this](const auto&, auto& res) {
      json out = json::array();
      for (const auto& sc : app.schemas()) out.push_back(codec::schema_json(sc));
      send_json(res, {{"schemas", out}});
    }));

    s.Get("/schemas/:category", wrap([this](const auto& req, auto& res) {
      const auto sc = app.schema(req.path_params.at("category"));
      if (req.get_param_value("format") == "xml") {
        res.set_content(schema::serialize_schema(sc), "application/xml");
        return;
      }
      send_json(res, codec::schema_json(sc));
    }));

    s.Post("/schema-requests", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      const auto ct = req.get_header_value("Content-Type");
      const bool xml = ct.find("xml") != std::string::npos ||
                       (!req.body.empty() && req.body.find_first_not_of(" \t\r\n") !=
                                                 std::string::npos &&
                        req.body[req.body.find_first_not_of(" \t\r\n")] == '<');
      auto request = xml ? schema::parse_field_request(req.body)
                         : codec::field_request_from(body_json(req));
      request.creator = u.username;
      send_json(res, codec::request_json(app.submit_field_request(std::move(request))), 201);
    }));

    s.Get("/settings", wrap([this](const auto& req, auto& res) {
      send_json(res, codec::self_json(require_user(req)));
    }));

    s.Patch("/settings", wrap([this](const auto& req, auto& res) {
      const auto u = require_user(req);
      send_json(res, codec::self_json(
                         app.update_settings(u.user_id, codec::settings_from(body_json(req)))));
    }));

    if (const auto& dir = app.config().static_dir) s.set_mount_point("/", dir->string());
  }

  void flusher() {
    const auto interval = std::chrono::seconds(app.config().flush_interval_seconds);
    std::unique_lock lock(flush_mu);
    while (!stopping) {
      flush_cv.wait_for(lock, interval, [this] { return stopping; });
      lock.unlock();
      flush_quietly();
      lock.lock();
    }
  }
};

HttpServer::HttpServer(App& app) : impl_(std::make_unique<Impl>(app)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& cfg = impl_->app.config();
  if (cfg.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(cfg.bind_address);
  } else if (impl_->server.bind_to_port(cfg.bind_address, cfg.port)) {
    impl_->port = cfg.port;
  }
  if (impl_->port <= 0) {
    throw Error(ErrorCode::kPortUnavailable,
                "cannot bind " + cfg.bind_address + ":" + std::to_string(cfg.port));
  }
  return impl_->port;
}

void HttpServer::run() {
  if (impl_->app.config().flush_interval_seconds > 0 && !impl_->flush_thread.joinable()) {
    impl_->flush_thread = std::thread([this] { impl_->flusher(); });
  }
  impl_->server.listen_after_bind();
}

int HttpServer::start() {
  const int p = bind();
  impl_->serve_thread = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return p;
}

void HttpServer::stop() {
  if (!impl_) return;
  {
    std::lock_guard lock(impl_->flush_mu);
    impl_->stopping = true;
  }
  impl_->flush_cv.notify_all();
  impl_->server.stop();
  if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
  if (impl_->flush_thread.joinable()) impl_->flush_thread.join();
  impl_->flush_quietly();
}

int HttpServer::port() const { return impl_->port; }

}  // namespace serefind::service
