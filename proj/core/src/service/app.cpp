#include "serefind/service/app.hpp"

#include <filesystem>
#include <mutex>

#include "serefind/error.hpp"
#include "serefind/schema/xml.hpp"

namespace serefind::service {

namespace fs = std::filesystem;

namespace {

search::Tokenizer make_tokenizer(const ServiceConfig& c) {
  if (c.stopwords_path) return search::Tokenizer(search::load_stopwords(*c.stopwords_path));
  return search::Tokenizer();
}

search::SynonymTable make_synonyms(const ServiceConfig& c) {
  if (c.synonym_table_path) return search::SynonymTable::load(*c.synonym_table_path);
  return {};
}

schema::SchemaRegistry load_registry(const ServiceConfig& c) {
  if (!fs::is_directory(c.schema_dir)) {
    throw Error(ErrorCode::kSchemaLoadFailed,
                "schema directory not found: " + c.schema_dir.string());
  }
  return schema::SchemaRegistry::load_directory(c.schema_dir);
}

}  // namespace

App::App(ServiceConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      store_(std::make_unique<Store>(config_.database_path())),
      registry_(load_registry(config_)),
      index_(make_tokenizer(config_)),
      ranker_(config_.ranking, make_synonyms(config_), make_tokenizer(config_)) {
  identity::IdentityOptions opts;
  opts.base_url = config_.base_url;
  opts.token_ttl = std::chrono::hours(config_.token_hours);
  identity_ = std::make_unique<identity::IdentityService>(
      identity::NetworkRegistry::load(config_.network_registry_path),
      identity::PasswordHasher(config_.password_iterations), clock_, outbox_, opts);
  market_ = std::make_unique<market::Marketplace>(registry_, clock_);
  market_->set_observer(&index_);
  messaging::MessengerOptions mopts;
  mopts.inbox_url = config_.base_url + "/messages/inbox";
  messenger_ = std::make_unique<messaging::Messenger>(*market_, *identity_, outbox_, clock_, mopts);
  load_state();
}

App::~App() = default;

void App::load_state() {
  reload_schemas_locked();
  for (auto& u : store_->load_users()) identity_->restore(std::move(u));
  for (auto& t : store_->load_tokens()) identity_->restore(std::move(t));
  for (auto& l : store_->load_listings()) market_->restore(std::move(l));
  for (auto& e : store_->load_edges()) market_->restore(std::move(e));
  for (auto& t : store_->load_threads()) messenger_->restore(std::move(t));
  for (auto& n : store_->load_notifications()) outbox_.enqueue(std::move(n));
  data_version_ = store_->data_version();
}

void App::reload_schemas_locked() {
  // Stored versions come from approvals and win over older files.
  for (auto& s : store_->load_schemas()) {
    const auto* have = registry_.find(s.category);
    if (have == nullptr || have->version < s.version) registry_.put(std::move(s));
  }
}

void App::refresh() {
  {
    std::shared_lock lock(mu_);
    if (store_->data_version() == data_version_) return;
  }
  std::unique_lock lock(mu_);
  reload_schemas_locked();
  data_version_ = store_->data_version();
}

void App::persist_notifications() { store_->replace_notifications(outbox_.pending()); }

// ---- accounts ----

identity::PendingRegistration App::register_user(std::string_view email,
                                                 std::string_view username,
                                                 std::string_view password) {
  std::unique_lock lock(mu_);
  auto pending = identity_->register_user(email, username, password);
  Store::Transaction tx(*store_);
  store_->put_user(*identity_->find_user(pending.user_id));
  store_->put_token(*identity_->token(pending.token));
  persist_notifications();
  tx.commit();
  return pending;
}

identity::User App::verify(std::string_view token) {
  std::unique_lock lock(mu_);
  auto user = identity_->verify(token);
  Store::Transaction tx(*store_);
  store_->put_user(user);
  store_->put_token(*identity_->token(token));
  tx.commit();
  return user;
}

Session App::login(std::string_view login, std::string_view password) {
  auto user = identity_->authenticate(login, password);
  Session s{identity::random_token(16), user.user_id,
            clock_() + std::chrono::days(config_.session_days)};
  store_->put_session(s);
  return s;
}

void App::logout(const std::string& token) { store_->delete_session(token); }

std::optional<identity::User> App::session_user(const std::string& token) {
  if (token.empty()) return std::nullopt;
  auto s = store_->find_session(token);
  if (!s) return std::nullopt;
  if (s->expires_at <= clock_()) {
    store_->delete_session(token);
    return std::nullopt;
  }
  return identity_->find_user(s->user_id);
}

identity::User App::update_settings(const UserId& id, const identity::SettingsUpdate& update) {
  std::unique_lock lock(mu_);
  auto user = identity_->update_settings(id, update);
  store_->put_user(user);
  return user;
}

std::optional<identity::User> App::find_user(const UserId& id) const {
  return identity_->find_user(id);
}

std::optional<identity::User> App::find_by_username(std::string_view username) const {
  return identity_->find_by_username(username);
}

// ---- listings ----

market::Listing App::create_listing(const identity::User& owner,
                                    const market::ListingDraft& draft) {
  std::unique_lock lock(mu_);
  auto l = market_->create_listing(owner, draft);
  Store::Transaction tx(*store_);
  store_->put_listing(l);
  for (const auto& e : market_->edges_of(l.listing_id)) store_->put_edge(e);
  tx.commit();
  return l;
}

market::Listing App::mutate_listing(const identity::User& actor, const ListingId& id,
                                    const market::ListingAction& action) {
  std::unique_lock lock(mu_);
  auto l = market_->mutate_listing(actor, id, action);
  store_->put_listing(l);
  return l;
}

std::optional<identity::RedactedListing> App::redact_locked(const identity::User* viewer,
                                                            const market::Listing& l) const {
  const auto owner = identity_->find_user(l.owner_id);
  std::vector<schema::FieldSpec> filters;
  if (const auto* s = registry_.find(l.category)) filters = schema::derive_filter_spec(*s);
  return identity::redact(viewer, l, owner ? owner->username : std::string{}, filters);
}

identity::RedactedListing App::view_listing(const identity::User* viewer,
                                            const ListingId& id) const {
  std::shared_lock lock(mu_);
  auto l = market_->find(id);
  if (!l) throw Error(ErrorCode::kListingNotFound, "no listing " + id.value);
  auto r = redact_locked(viewer, *l);
  if (!r) {
    if (l->status == market::ListingStatus::kDeleted) {
      throw Error(ErrorCode::kListingDeleted, "listing " + id.value + " was deleted");
    }
    throw Error(ErrorCode::kDenied, "listing " + id.value + " is not visible to you");
  }
  return *r;
}

std::uint64_t App::record_view(const identity::User* viewer, const ListingId& id) {
  std::shared_lock lock(mu_);
  auto l = market_->find(id);
  if (!l) throw Error(ErrorCode::kListingNotFound, "no listing " + id.value);
  if (!identity::can_view(identity::effective_viewer(viewer), *l)) {
    throw Error(ErrorCode::kDenied, "listing " + id.value + " is not visible to you");
  }
  const auto count = market_->record_view(id, viewer ? &viewer->user_id : nullptr);
  store_->bump_view_count(id, count);
  return count;
}

std::vector<market::GraphEdge> App::mark_sold(const identity::User& owner, const ListingId& id,
                                              std::string_view buyer_username) {
  std::unique_lock lock(mu_);
  auto buyer = identity_->find_by_username(buyer_username);
  if (!buyer) {
    throw Error(ErrorCode::kUnknownUsername, "no user named " + std::string(buyer_username));
  }
  auto changed = market_->mark_sold(owner, id, *buyer);
  Store::Transaction tx(*store_);
  store_->put_listing(*market_->find(id));
  for (const auto& e : market_->edges_of(id)) store_->put_edge(e);
  tx.commit();
  return changed;
}

market::Profile App::profile(std::string_view username, const identity::User* viewer) const {
  auto subject = identity_->find_by_username(username);
  if (!subject) throw Error(ErrorCode::kUnknownUsername, "no user named " + std::string(username));
  return market_->profile_of(*subject, viewer);
}

std::string App::export_graph() const { return market_->export_edges(); }

// ---- discovery ----

SearchResponse App::search(const identity::User* viewer, const SearchParams& params) const {
  std::shared_lock lock(mu_);
  viewer = identity::effective_viewer(viewer);
  search::SearchQuery q;
  q.user = viewer;
  if (!params.q.empty()) q.terms.push_back(params.q);
  q.category = params.category;
  q.subcategory = params.subcategory;
  q.field_filters = params.field_filters;
  q.origin = params.origin;
  q.page = params.page;
  q.page_size = params.page_size.value_or(config_.page_size);

  const auto all = market_->active_listings();
  const auto candidates = search::select_candidates(q, all, registry_);
  const auto snapshot = index_.snapshot();
  const auto page = ranker_.rank(q, candidates, *snapshot, params.as_of.value_or(clock_()));

  std::map<ListingId, const market::Listing*> by_id;
  for (const auto& l : candidates) by_id[l.listing_id] = &l;
  SearchResponse out{{}, page.total, page.page, page.page_size};
  for (const auto& r : page.results) {
    if (auto red = redact_locked(viewer, *by_id.at(r.listing_id))) {
      out.results.push_back({r, std::move(*red)});
    }
  }
  return out;
}

FeedResponse App::feed(const identity::User* viewer, std::size_t page,
                       std::optional<std::size_t> page_size) const {
  std::shared_lock lock(mu_);
  viewer = identity::effective_viewer(viewer);
  const auto size = page_size.value_or(config_.page_size);
  if (size < 1 || size > 100) {
    throw Error(ErrorCode::kBadRequest, "page_size must be between 1 and 100");
  }
  const auto all = market_->active_listings();
  const auto p = search::newsfeed(viewer, all, page, size);
  FeedResponse out{{}, p.total, p.page, p.page_size};
  for (const auto& l : p.listings) {
    if (auto red = redact_locked(viewer, l)) out.listings.push_back(std::move(*red));
  }
  return out;
}

// ---- messaging ----

messaging::SendResult App::send_message(const identity::User& sender, const ListingId& listing,
                                        std::string_view body,
                                        const std::optional<ThreadId>& thread) {
  std::unique_lock lock(mu_);
  auto r = messenger_->send_message(sender, listing, body, thread);
  Store::Transaction tx(*store_);
  store_->put_thread(*messenger_->thread(r.message.thread_id));
  store_->put_message(r.message);
  store_->put_edge(r.edge);
  persist_notifications();
  tx.commit();
  return r;
}

std::vector<messaging::FolderThread> App::folder(const UserId& user,
                                                 messaging::Folder which) const {
  return messenger_->folder(user, which);
}

messaging::FolderThread App::open_thread(const UserId& user, const ThreadId& thread) {
  std::unique_lock lock(mu_);
  auto t = messenger_->open_thread(user, thread);
  const auto stored = messenger_->thread(thread);
  Store::Transaction tx(*store_);
  for (const auto& m : stored->messages) store_->put_message(m);
  tx.commit();
  return t;
}

messaging::Message App::delete_message(const UserId& user, const MessageId& message) {
  std::unique_lock lock(mu_);
  auto m = messenger_->delete_message(user, message);
  store_->put_message(m);
  return m;
}

std::size_t App::unread_count(const UserId& user) const { return messenger_->unread_count(user); }

// ---- schemas ----

std::vector<schema::CategorySchema> App::schemas() const {
  std::shared_lock lock(mu_);
  std::vector<schema::CategorySchema> out;
  for (const auto& c : registry_.categories()) out.push_back(registry_.get(c));
  return out;
}

schema::CategorySchema App::schema(std::string_view category) const {
  std::shared_lock lock(mu_);
  return registry_.get(category);
}

StoredRequest App::submit_field_request(schema::FieldRequest request) {
  std::unique_lock lock(mu_);
  if (request.label.empty()) throw Error(ErrorCode::kBadRequest, "field label is empty");
  request.status = schema::RequestStatus::kPending;
  StoredRequest stored{store_->next_request_id(), std::move(request), {}, clock_()};
  store_->put_request(stored);
  return stored;
}

std::vector<StoredRequest> App::requests() { return store_->load_requests(); }

StoredRequest App::decide_request(const std::string& request_id, schema::Decision decision) {
  std::unique_lock lock(mu_);
  auto stored = store_->find_request(request_id);
  if (!stored) throw Error(ErrorCode::kUnknownRequestId, "no field request " + request_id);
  if (stored->request.status != schema::RequestStatus::kPending) {
    throw Error(ErrorCode::kRequestNotPending, "request " + request_id + " is already " +
                                                   std::string(to_string(stored->request.status)));
  }
  reload_schemas_locked();
  const auto* current = registry_.find(stored->request.category);
  const auto base = current != nullptr
                        ? *current
                        : schema::make_pending_category(stored->request.category,
                                                        stored->request.creator,
                                                        stored->request.category);
  std::optional<schema::CategorySchema> next;
  try {
    auto [s, r] = schema::apply_field_request(base, stored->request, decision);
    stored->request = r;
    if (decision == schema::Decision::kApprove) next = std::move(s);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDuplicateFieldLabel) throw;
    stored->request.status = schema::RequestStatus::kRejected;
    stored->reason = std::string(to_string(e.code())) + ": " + e.what();
  }

  Store::Transaction tx(*store_);
  if (next) {
    schema::write_schema_file(config_.schema_dir, *next);
    store_->put_schema(*next);
    registry_.put(*next);
  }
  store_->put_request(*stored);
  tx.commit();
  data_version_ = store_->data_version();
  return *stored;
}

std::size_t App::flush_outbox() {
  if (outbox_.size() == 0) return 0;
  std::size_t written = 0;
  try {
    written = outbox_.flush(config_.outbox_dir()).size();
  } catch (...) {
    std::unique_lock lock(mu_);
    persist_notifications();
    throw;
  }
  std::unique_lock lock(mu_);
  persist_notifications();
  return written;
}

}  // namespace serefind::service
