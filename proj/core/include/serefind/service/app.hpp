#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "serefind/identity/identity_service.hpp"
#include "serefind/identity/redact.hpp"
#include "serefind/market/marketplace.hpp"
#include "serefind/messaging/messenger.hpp"
#include "serefind/messaging/outbox.hpp"
#include "serefind/schema/registry.hpp"
#include "serefind/search/index.hpp"
#include "serefind/search/ranking.hpp"
#include "serefind/service/config.hpp"
#include "serefind/service/store.hpp"

namespace serefind::service {

struct SearchHit {
  search::RankedResult rank;
  identity::RedactedListing listing;
};

struct SearchResponse {
  std::vector<SearchHit> results;
  std::size_t total = 0;
  std::size_t page = 0;
  std::size_t page_size = 20;
};

struct FeedResponse {
  std::vector<identity::RedactedListing> listings;
  std::size_t total = 0;
  std::size_t page = 0;
  std::size_t page_size = 20;
};

struct SearchParams {
  std::string q;
  std::optional<std::string> category;
  std::optional<std::string> subcategory;
  std::map<std::string, std::string> field_filters;
  std::optional<GeoPoint> origin;
  std::size_t page = 0;
  std::optional<std::size_t> page_size;
  /// Reference instant for freshness; defaults to the service clock.
  std::optional<Timestamp> as_of;
};

/// The composed service: modules, search index and durable storage.
///
/// Every mutation updates memory and then writes all affected records in a
/// single storage transaction. State is rebuilt from storage on construction.
class App {
 public:
  explicit App(ServiceConfig config, Clock clock = system_clock());
  ~App();
  App(const App&) = delete;
  App& operator=(const App&) = delete;

  const ServiceConfig& config() const { return config_; }
  Clock clock() const { return clock_; }

  // Accounts and sessions.
  identity::PendingRegistration register_user(std::string_view email, std::string_view username,
                                              std::string_view password);
  identity::User verify(std::string_view token);
  Session login(std::string_view login, std::string_view password);
  void logout(const std::string& token);
  /// nullopt for unknown or expired sessions.
  std::optional<identity::User> session_user(const std::string& token);
  identity::User update_settings(const UserId& id, const identity::SettingsUpdate& update);
  std::optional<identity::User> find_user(const UserId& id) const;
  std::optional<identity::User> find_by_username(std::string_view username) const;

  // Listings.
  market::Listing create_listing(const identity::User& owner, const market::ListingDraft& draft);
  market::Listing mutate_listing(const identity::User& actor, const ListingId& id,
                                 const market::ListingAction& action);
  /// Throws kListingNotFound or kDenied.
  identity::RedactedListing view_listing(const identity::User* viewer, const ListingId& id) const;
  /// Throws kListingNotFound or kDenied; returns the new count.
  std::uint64_t record_view(const identity::User* viewer, const ListingId& id);
  std::vector<market::GraphEdge> mark_sold(const identity::User& owner, const ListingId& id,
                                           std::string_view buyer_username);
  /// Throws kUnknownUsername.
  market::Profile profile(std::string_view username, const identity::User* viewer) const;
  std::string export_graph() const;

  // Discovery.
  SearchResponse search(const identity::User* viewer, const SearchParams& params) const;
  FeedResponse feed(const identity::User* viewer, std::size_t page,
                    std::optional<std::size_t> page_size) const;

  // Messaging.
  messaging::SendResult send_message(const identity::User& sender, const ListingId& listing,
                                     std::string_view body,
                                     const std::optional<ThreadId>& thread = std::nullopt);
  std::vector<messaging::FolderThread> folder(const UserId& user, messaging::Folder which) const;
  messaging::FolderThread open_thread(const UserId& user, const ThreadId& thread);
  messaging::Message delete_message(const UserId& user, const MessageId& message);
  std::size_t unread_count(const UserId& user) const;

  // Schemas and field requests.
  std::vector<schema::CategorySchema> schemas() const;
  schema::CategorySchema schema(std::string_view category) const;
  StoredRequest submit_field_request(schema::FieldRequest request);
  std::vector<StoredRequest> requests();
  /// Throws kUnknownRequestId or kRequestNotPending. An approval that would
  /// duplicate a label is recorded as a rejection.
  StoredRequest decide_request(const std::string& request_id, schema::Decision decision);

  /// Writes queued emails to the outbox directory; returns how many.
  std::size_t flush_outbox();
  /// Picks up schema changes committed by other processes (admin tooling).
  void refresh();

  /// Read-only access for diagnostics and tests.
  const market::Marketplace& marketplace() const { return *market_; }
  const identity::IdentityService& identity() const { return *identity_; }
  const messaging::Messenger& messenger() const { return *messenger_; }
  const messaging::NotificationQueue& outbox() const { return outbox_; }
  const search::InvertedIndex& index() const { return index_; }
  const search::Ranker& ranker() const { return ranker_; }
  const schema::SchemaRegistry& registry() const { return registry_; }
  Store& store() { return *store_; }

 private:
  void load_state();
  void persist_notifications();
  void reload_schemas_locked();
  std::optional<identity::RedactedListing> redact_locked(const identity::User* viewer,
                                                         const market::Listing& l) const;

  ServiceConfig config_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  std::unique_ptr<Store> store_;
  schema::SchemaRegistry registry_;
  messaging::NotificationQueue outbox_;
  search::InvertedIndex index_;
  search::Ranker ranker_;
  std::unique_ptr<identity::IdentityService> identity_;
  std::unique_ptr<market::Marketplace> market_;
  std::unique_ptr<messaging::Messenger> messenger_;
  long long data_version_ = 0;
};

}  // namespace serefind::service
