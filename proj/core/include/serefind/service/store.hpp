#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "serefind/identity/identity_service.hpp"
#include "serefind/market/listing.hpp"
#include "serefind/messaging/messenger.hpp"
#include "serefind/messaging/outbox.hpp"
#include "serefind/schema/schema.hpp"

struct sqlite3;

namespace serefind::service {

struct Session {
  std::string token;
  UserId user_id;
  Timestamp expires_at{};
};

struct StoredRequest {
  std::string request_id;
  schema::FieldRequest request;
  std::string reason;
  Timestamp created_at{};
};

/// SQLite-backed persistence. Every multi-record change goes through one
/// Transaction so a crash leaves either all or none of it on disk.
/// Thread-safe: a transaction owns the connection until it ends.
class Store {
 public:
  explicit Store(const std::filesystem::path& db_path);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  class Transaction {
   public:
    explicit Transaction(Store& store);
    ~Transaction();
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    void commit();

   private:
    Store& store_;
    std::unique_lock<std::recursive_mutex> lock_;
    bool done_ = false;
  };

  void put_user(const identity::User& user);
  void put_token(const identity::VerificationToken& token);
  void put_session(const Session& session);
  void delete_session(const std::string& token);
  std::optional<Session> find_session(const std::string& token);
  void put_listing(const market::Listing& listing);
  void bump_view_count(const ListingId& id, std::uint64_t count);
  void put_edge(const market::GraphEdge& edge);
  void put_thread(const messaging::MessageThread& thread);
  void put_message(const messaging::Message& message);
  void replace_notifications(const std::vector<messaging::OutboundNotification>& queue);
  void put_request(const StoredRequest& request);
  void put_schema(const schema::CategorySchema& schema);

  std::vector<identity::User> load_users();
  std::vector<identity::VerificationToken> load_tokens();
  std::vector<market::Listing> load_listings();
  std::vector<market::GraphEdge> load_edges();
  /// Threads with their messages in send order.
  std::vector<messaging::MessageThread> load_threads();
  std::vector<messaging::OutboundNotification> load_notifications();
  std::vector<StoredRequest> load_requests();
  std::optional<StoredRequest> find_request(const std::string& id);
  std::vector<schema::CategorySchema> load_schemas();
  std::string next_request_id();

  /// Changes whenever another connection commits.
  long long data_version();

  /// Raw scalar query, for integrity checks in tests and tooling.
  long long count(const std::string& sql);

 private:
  friend class Transaction;
  void exec(const char* sql);

  sqlite3* db_ = nullptr;
  std::recursive_mutex mu_;
};

}  // namespace serefind::service
