#include "serefind/service/store.hpp"

#include <sqlite3.h>

#include <json.hpp>
#include "serefind/error.hpp"
#include "serefind/schema/xml.hpp"

namespace serefind::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSchemaSql = R"sql(
CREATE TABLE IF NOT EXISTS users (
  user_id TEXT PRIMARY KEY,
  username TEXT NOT NULL UNIQUE,
  email TEXT NOT NULL UNIQUE,
  network_id TEXT NOT NULL,
  password_digest TEXT NOT NULL,
  active INTEGER NOT NULL,
  full_name TEXT NOT NULL DEFAULT '',
  home_lat REAL,
  home_lon REAL,
  preferences TEXT NOT NULL DEFAULT '{}',
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS verification_tokens (
  token TEXT PRIMARY KEY,
  user_id TEXT NOT NULL REFERENCES users(user_id),
  expires_at INTEGER NOT NULL,
  used INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
  token TEXT PRIMARY KEY,
  user_id TEXT NOT NULL REFERENCES users(user_id),
  expires_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS listings (
  listing_id TEXT PRIMARY KEY,
  owner_id TEXT NOT NULL REFERENCES users(user_id),
  network_id TEXT NOT NULL,
  category TEXT NOT NULL,
  subcategory TEXT NOT NULL,
  tags TEXT NOT NULL,
  title TEXT NOT NULL,
  description TEXT NOT NULL,
  field_values TEXT NOT NULL,
  lat REAL,
  lon REAL,
  visibility TEXT NOT NULL,
  status TEXT NOT NULL,
  status_before_delete TEXT,
  created_at INTEGER NOT NULL,
  updated_at INTEGER NOT NULL,
  view_count INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS edges (
  user_id TEXT NOT NULL REFERENCES users(user_id),
  listing_id TEXT NOT NULL REFERENCES listings(listing_id),
  kind TEXT NOT NULL,
  message_count INTEGER NOT NULL,
  PRIMARY KEY (listing_id, user_id)
);
CREATE TABLE IF NOT EXISTS threads (
  thread_id TEXT PRIMARY KEY,
  listing_id TEXT NOT NULL REFERENCES listings(listing_id),
  inquirer_id TEXT NOT NULL REFERENCES users(user_id),
  owner_id TEXT NOT NULL REFERENCES users(user_id),
  subject TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  UNIQUE (listing_id, inquirer_id)
);
CREATE TABLE IF NOT EXISTS messages (
  message_id TEXT PRIMARY KEY,
  thread_id TEXT NOT NULL REFERENCES threads(thread_id),
  sender_id TEXT NOT NULL REFERENCES users(user_id),
  body TEXT NOT NULL,
  sent_at INTEGER NOT NULL,
  read_by_recipient INTEGER NOT NULL,
  deleted_by_inquirer INTEGER NOT NULL,
  deleted_by_owner INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS notifications (
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  recipient_email TEXT NOT NULL,
  kind TEXT NOT NULL,
  link_url TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  dedup_key TEXT NOT NULL,
  latest_message_id TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS field_requests (
  request_id TEXT PRIMARY KEY,
  category TEXT NOT NULL,
  label TEXT NOT NULL,
  data_type TEXT NOT NULL,
  creator TEXT NOT NULL,
  status TEXT NOT NULL,
  reason TEXT NOT NULL,
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS schemas (
  category TEXT PRIMARY KEY,
  version INTEGER NOT NULL,
  xml TEXT NOT NULL
);
)sql";

[[noreturn]] void fail(sqlite3* db, const std::string& what) {
  throw Error(ErrorCode::kStorageError, what + ": " + sqlite3_errmsg(db));
}

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail(db, sql);
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, const std::string& v) {
    sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(int i, long long v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  Statement& bind(int i, double v) {
    sqlite3_bind_double(stmt_, i, v);
    return *this;
  }
  Statement& bind_null(int i) {
    sqlite3_bind_null(stmt_, i);
    return *this;
  }
  template <typename T>
  Statement& bind(int i, const std::optional<T>& v) {
    return v ? bind(i, *v) : bind_null(i);
  }

  /// true while rows remain.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail(db_, "step");
  }
  void run() {
    while (step()) {
    }
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p == nullptr ? std::string{}
                        : std::string(reinterpret_cast<const char*>(p),
                                      static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)));
  }
  long long integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  double real(int col) const { return sqlite3_column_double(stmt_, col); }
  bool null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

long long secs(Timestamp t) { return t.time_since_epoch().count(); }
Timestamp at(long long s) { return Timestamp{std::chrono::seconds{s}}; }

json values_to_json(const std::map<std::string, schema::FieldValue>& values) {
  json out = json::object();
  for (const auto& [label, v] : values) {
    out[label] = {{"type", std::string(schema::to_string(schema::type_of(v)))},
                  {"value", schema::to_canonical(v)}};
  }
  return out;
}

std::map<std::string, schema::FieldValue> values_from_json(const json& j) {
  std::map<std::string, schema::FieldValue> out;
  for (const auto& [label, v] : j.items()) {
    const auto type = schema::data_type_from_string(v.at("type").get<std::string>());
    if (!type) throw Error(ErrorCode::kStorageError, "bad stored data type for " + label);
    auto parsed = schema::parse_value(*type, v.at("value").get<std::string>());
    if (!parsed.value) throw Error(ErrorCode::kStorageError, "bad stored value for " + label);
    out.emplace(label, std::move(*parsed.value));
  }
  return out;
}

}  // namespace

Store::Store(const fs::path& db_path) {
  if (db_path.has_parent_path()) fs::create_directories(db_path.parent_path());
  if (sqlite3_open_v2(db_path.c_str(), &db_,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw Error(ErrorCode::kStorageError, "cannot open " + db_path.string() + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  exec("PRAGMA journal_mode=WAL");
  exec("PRAGMA synchronous=NORMAL");
  exec("PRAGMA foreign_keys=ON");
  exec(kSchemaSql);
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw Error(ErrorCode::kStorageError, msg);
  }
}

Store::Transaction::Transaction(Store& store) : store_(store), lock_(store.mu_) {
  store_.exec("BEGIN IMMEDIATE");
}

Store::Transaction::~Transaction() {
  if (!done_) {
    try {
      store_.exec("ROLLBACK");
    } catch (...) {
    }
  }
}

void Store::Transaction::commit() {
  store_.exec("COMMIT");
  done_ = true;
}

void Store::put_user(const identity::User& u) {
  std::lock_guard lock(mu_);
  json prefs = {{"categories", u.preferences.categories},
                {"networks", u.preferences.networks}};
  if (u.preferences.radius_km) prefs["radius_km"] = *u.preferences.radius_km;
  Statement st(db_, R"(INSERT OR REPLACE INTO users
      (user_id, username, email, network_id, password_digest, active, full_name,
       home_lat, home_lon, preferences, created_at)
      VALUES (?,?,?,?,?,?,?,?,?,?,?))");
  st.bind(1, u.user_id.value).bind(2, u.username).bind(3, u.email).bind(4, u.network_id)
      .bind(5, u.password_digest).bind(6, static_cast<long long>(u.active))
      .bind(7, u.full_name);
  if (u.home_location) {
    st.bind(8, u.home_location->lat).bind(9, u.home_location->lon);
  } else {
    st.bind_null(8).bind_null(9);
  }
  st.bind(10, prefs.dump()).bind(11, secs(u.created_at));
  st.run();
}

void Store::put_token(const identity::VerificationToken& t) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO verification_tokens VALUES (?,?,?,?)");
  st.bind(1, t.token).bind(2, t.user_id.value).bind(3, secs(t.expires_at))
      .bind(4, static_cast<long long>(t.used));
  st.run();
}

void Store::put_session(const Session& s) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO sessions VALUES (?,?,?)");
  st.bind(1, s.token).bind(2, s.user_id.value).bind(3, secs(s.expires_at));
  st.run();
}

void Store::delete_session(const std::string& token) {
  std::lock_guard lock(mu_);
  Statement st(db_, "DELETE FROM sessions WHERE token = ?");
  st.bind(1, token);
  st.run();
}

std::optional<Session> Store::find_session(const std::string& token) {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT token, user_id, expires_at FROM sessions WHERE token = ?");
  st.bind(1, token);
  if (!st.step()) return std::nullopt;
  return Session{st.text(0), UserId{st.text(1)}, at(st.integer(2))};
}

void Store::put_listing(const market::Listing& l) {
  std::lock_guard lock(mu_);
  Statement st(db_, R"(INSERT OR REPLACE INTO listings
      (listing_id, owner_id, network_id, category, subcategory, tags, title, description,
       field_values, lat, lon, visibility, status, status_before_delete, created_at,
       updated_at, view_count)
      VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,
              MAX(?, COALESCE((SELECT view_count FROM listings WHERE listing_id = ?1), 0))))");
  st.bind(1, l.listing_id.value).bind(2, l.owner_id.value).bind(3, l.network_id)
      .bind(4, l.category).bind(5, l.subcategory).bind(6, json(l.tags).dump())
      .bind(7, l.title).bind(8, l.description).bind(9, values_to_json(l.values).dump());
  if (l.location) {
    st.bind(10, l.location->lat).bind(11, l.location->lon);
  } else {
    st.bind_null(10).bind_null(11);
  }
  st.bind(12, std::string(market::to_string(l.visibility)))
      .bind(13, std::string(market::to_string(l.status)));
  if (l.status_before_delete) {
    st.bind(14, std::string(market::to_string(*l.status_before_delete)));
  } else {
    st.bind_null(14);
  }
  st.bind(15, secs(l.created_at)).bind(16, secs(l.updated_at))
      .bind(17, static_cast<long long>(l.view_count));
  st.run();
}

void Store::bump_view_count(const ListingId& id, std::uint64_t count) {
  std::lock_guard lock(mu_);
  Statement st(db_, "UPDATE listings SET view_count = MAX(view_count, ?) WHERE listing_id = ?");
  st.bind(1, static_cast<long long>(count)).bind(2, id.value);
  st.run();
}

void Store::put_edge(const market::GraphEdge& e) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO edges (user_id, listing_id, kind, message_count) "
                    "VALUES (?,?,?,?)");
  st.bind(1, e.user_id.value).bind(2, e.listing_id.value)
      .bind(3, std::string(market::to_string(e.kind)))
      .bind(4, static_cast<long long>(e.message_count));
  st.run();
}

void Store::put_thread(const messaging::MessageThread& t) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO threads VALUES (?,?,?,?,?,?)");
  st.bind(1, t.thread_id.value).bind(2, t.listing_id.value).bind(3, t.inquirer_id.value)
      .bind(4, t.owner_id.value).bind(5, t.subject).bind(6, secs(t.created_at));
  st.run();
}

void Store::put_message(const messaging::Message& m) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO messages VALUES (?,?,?,?,?,?,?,?)");
  st.bind(1, m.message_id.value).bind(2, m.thread_id.value).bind(3, m.sender_id.value)
      .bind(4, m.body).bind(5, secs(m.sent_at))
      .bind(6, static_cast<long long>(m.read_by_recipient))
      .bind(7, static_cast<long long>(m.deleted_by_inquirer))
      .bind(8, static_cast<long long>(m.deleted_by_owner));
  st.run();
}

void Store::replace_notifications(const std::vector<messaging::OutboundNotification>& queue) {
  std::lock_guard lock(mu_);
  exec("DELETE FROM notifications");
  for (const auto& n : queue) {
    Statement st(db_, R"(INSERT INTO notifications
        (recipient_email, kind, link_url, created_at, dedup_key, latest_message_id)
        VALUES (?,?,?,?,?,?))");
    st.bind(1, n.recipient_email).bind(2, std::string(messaging::to_string(n.kind)))
        .bind(3, n.link_url).bind(4, secs(n.created_at)).bind(5, n.dedup_key)
        .bind(6, n.latest_message_id);
    st.run();
  }
}

void Store::put_request(const StoredRequest& r) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO field_requests VALUES (?,?,?,?,?,?,?,?)");
  st.bind(1, r.request_id).bind(2, r.request.category).bind(3, r.request.label)
      .bind(4, std::string(schema::to_string(r.request.data_type))).bind(5, r.request.creator)
      .bind(6, std::string(schema::to_string(r.request.status))).bind(7, r.reason)
      .bind(8, secs(r.created_at));
  st.run();
}

void Store::put_schema(const schema::CategorySchema& s) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT OR REPLACE INTO schemas VALUES (?,?,?)");
  st.bind(1, s.category).bind(2, static_cast<long long>(s.version))
      .bind(3, schema::serialize_schema(s));
  st.run();
}

std::vector<identity::User> Store::load_users() {
  std::lock_guard lock(mu_);
  Statement st(db_, R"(SELECT user_id, username, email, network_id, password_digest, active,
      full_name, home_lat, home_lon, preferences, created_at FROM users ORDER BY user_id)");
  std::vector<identity::User> out;
  while (st.step()) {
    identity::User u;
    u.user_id = UserId{st.text(0)};
    u.username = st.text(1);
    u.email = st.text(2);
    u.network_id = st.text(3);
    u.password_digest = st.text(4);
    u.active = st.integer(5) != 0;
    u.full_name = st.text(6);
    if (!st.null(7)) u.home_location = GeoPoint{st.real(7), st.real(8)};
    const auto prefs = json::parse(st.text(9));
    u.preferences.categories = prefs.value("categories", std::set<std::string>{});
    u.preferences.networks = prefs.value("networks", std::set<std::string>{});
    if (prefs.contains("radius_km")) u.preferences.radius_km = prefs["radius_km"].get<double>();
    u.created_at = at(st.integer(10));
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<identity::VerificationToken> Store::load_tokens() {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT token, user_id, expires_at, used FROM verification_tokens");
  std::vector<identity::VerificationToken> out;
  while (st.step()) {
    out.push_back({st.text(0), UserId{st.text(1)}, at(st.integer(2)), st.integer(3) != 0});
  }
  return out;
}

std::vector<market::Listing> Store::load_listings() {
  std::lock_guard lock(mu_);
  Statement st(db_, R"(SELECT listing_id, owner_id, network_id, category, subcategory, tags,
      title, description, field_values, lat, lon, visibility, status, status_before_delete,
      created_at, updated_at, view_count FROM listings ORDER BY listing_id)");
  std::vector<market::Listing> out;
  while (st.step()) {
    market::Listing l;
    l.listing_id = ListingId{st.text(0)};
    l.owner_id = UserId{st.text(1)};
    l.network_id = st.text(2);
    l.category = st.text(3);
    l.subcategory = st.text(4);
    l.tags = json::parse(st.text(5)).get<std::set<std::string>>();
    l.title = st.text(6);
    l.description = st.text(7);
    l.values = values_from_json(json::parse(st.text(8)));
    if (!st.null(9)) l.location = GeoPoint{st.real(9), st.real(10)};
    l.visibility = market::visibility_from_string(st.text(11)).value_or(market::Visibility::kNetwork);
    l.status = market::listing_status_from_string(st.text(12)).value_or(market::ListingStatus::kActive);
    if (!st.null(13)) l.status_before_delete = market::listing_status_from_string(st.text(13));
    l.created_at = at(st.integer(14));
    l.updated_at = at(st.integer(15));
    l.view_count = static_cast<std::uint64_t>(st.integer(16));
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<market::GraphEdge> Store::load_edges() {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT user_id, listing_id, kind, message_count FROM edges");
  std::vector<market::GraphEdge> out;
  while (st.step()) {
    out.push_back({UserId{st.text(0)}, ListingId{st.text(1)},
                   market::edge_kind_from_string(st.text(2)).value_or(market::EdgeKind::kDashed),
                   static_cast<std::uint64_t>(st.integer(3))});
  }
  return out;
}

std::vector<messaging::MessageThread> Store::load_threads() {
  std::lock_guard lock(mu_);
  std::vector<messaging::MessageThread> out;
  std::map<std::string, std::size_t> index;
  {
    Statement st(db_, "SELECT thread_id, listing_id, inquirer_id, owner_id, subject, created_at "
                      "FROM threads ORDER BY thread_id");
    while (st.step()) {
      messaging::MessageThread t;
      t.thread_id = ThreadId{st.text(0)};
      t.listing_id = ListingId{st.text(1)};
      t.inquirer_id = UserId{st.text(2)};
      t.owner_id = UserId{st.text(3)};
      t.subject = st.text(4);
      t.created_at = at(st.integer(5));
      index[t.thread_id.value] = out.size();
      out.push_back(std::move(t));
    }
  }
  Statement st(db_, "SELECT message_id, thread_id, sender_id, body, sent_at, read_by_recipient, "
                    "deleted_by_inquirer, deleted_by_owner FROM messages ORDER BY message_id");
  while (st.step()) {
    messaging::Message m;
    m.message_id = MessageId{st.text(0)};
    m.thread_id = ThreadId{st.text(1)};
    m.sender_id = UserId{st.text(2)};
    m.body = st.text(3);
    m.sent_at = at(st.integer(4));
    m.read_by_recipient = st.integer(5) != 0;
    m.deleted_by_inquirer = st.integer(6) != 0;
    m.deleted_by_owner = st.integer(7) != 0;
    auto it = index.find(m.thread_id.value);
    if (it != index.end()) out[it->second].messages.push_back(std::move(m));
  }
  return out;
}

std::vector<messaging::OutboundNotification> Store::load_notifications() {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT recipient_email, kind, link_url, created_at, dedup_key, "
                    "latest_message_id FROM notifications ORDER BY seq");
  std::vector<messaging::OutboundNotification> out;
  while (st.step()) {
    messaging::OutboundNotification n;
    n.recipient_email = st.text(0);
    n.kind = st.text(1) == "verification" ? messaging::NotificationKind::kVerification
                                          : messaging::NotificationKind::kNewMessage;
    n.link_url = st.text(2);
    n.created_at = at(st.integer(3));
    n.dedup_key = st.text(4);
    n.latest_message_id = st.text(5);
    out.push_back(std::move(n));
  }
  return out;
}

namespace {

StoredRequest request_from_row(const Statement& st) {
  StoredRequest r;
  r.request_id = st.text(0);
  r.request.category = st.text(1);
  r.request.label = st.text(2);
  r.request.data_type = schema::data_type_from_string(st.text(3)).value_or(schema::DataType::kText);
  r.request.creator = st.text(4);
  r.request.status =
      schema::request_status_from_string(st.text(5)).value_or(schema::RequestStatus::kPending);
  r.reason = st.text(6);
  r.created_at = at(st.integer(7));
  return r;
}

}  // namespace

std::vector<StoredRequest> Store::load_requests() {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT * FROM field_requests ORDER BY request_id");
  std::vector<StoredRequest> out;
  while (st.step()) out.push_back(request_from_row(st));
  return out;
}

std::optional<StoredRequest> Store::find_request(const std::string& id) {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT * FROM field_requests WHERE request_id = ?");
  st.bind(1, id);
  if (!st.step()) return std::nullopt;
  return request_from_row(st);
}

std::vector<schema::CategorySchema> Store::load_schemas() {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT xml FROM schemas ORDER BY category");
  std::vector<schema::CategorySchema> out;
  while (st.step()) out.push_back(schema::parse_schema(st.text(0)));
  return out;
}

std::string Store::next_request_id() {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT request_id FROM field_requests");
  unsigned long long max = 0;
  while (st.step()) max = std::max(max, parse_sequential_id('R', st.text(0)));
  return make_sequential_id('R', max + 1);
}

long long Store::data_version() {
  std::lock_guard lock(mu_);
  Statement st(db_, "PRAGMA data_version");
  st.step();
  return st.integer(0);
}

long long Store::count(const std::string& sql) {
  std::lock_guard lock(mu_);
  Statement st(db_, sql.c_str());
  return st.step() ? st.integer(0) : 0;
}

}  // namespace serefind::service
