#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "serefind/identity/identity_service.hpp"
#include "serefind/identity/user.hpp"
#include "serefind/ids.hpp"
#include "serefind/market/marketplace.hpp"
#include "serefind/messaging/outbox.hpp"
#include "serefind/time.hpp"

namespace serefind::messaging {

inline constexpr std::size_t kMaxBodyChars = 10000;

struct Message {
  MessageId message_id;
  ThreadId thread_id;
  UserId sender_id;
  std::string body;
  Timestamp sent_at{};
  bool read_by_recipient = false;
  bool deleted_by_inquirer = false;
  bool deleted_by_owner = false;

  bool operator==(const Message&) const = default;
};

/// Conversation about one listing between one inquirer and the owner.
struct MessageThread {
  ThreadId thread_id;
  ListingId listing_id;
  UserId inquirer_id;
  UserId owner_id;
  /// Listing title when the thread started; never updated.
  std::string subject;
  Timestamp created_at{};
  std::vector<Message> messages;

  bool operator==(const MessageThread&) const = default;
};

enum class Folder { kInbox, kSent, kDeleted };

std::string_view to_string(Folder f);
std::optional<Folder> folder_from_string(std::string_view s);

struct FolderThread {
  ThreadId thread_id;
  ListingId listing_id;
  std::string subject;
  UserId counterpart_id;
  std::vector<Message> messages;
};

struct SendResult {
  Message message;
  bool thread_created = false;
  market::GraphEdge edge;
};

struct MessengerOptions {
  std::string inbox_url = "http://localhost:8080/messages/inbox";
};

/// Listing-scoped messaging. Thread-safe; appends within a thread are totally
/// ordered and each (listing, inquirer) pair gets exactly one thread.
class Messenger {
 public:
  Messenger(market::Marketplace& market, const identity::UserDirectory& users,
            NotificationQueue& outbox, Clock clock, MessengerOptions options = {});

  /// Inquirers address the listing; owners reply inside an existing thread
  /// and must pass its id. Throws kListingNotFound, kListingDeleted,
  /// kListingUnavailable, kDenied, kSelfMessage, kEmptyBody, kBodyTooLong,
  /// kThreadNotFound, kNotParticipant, kAccountInactive.
  SendResult send_message(const identity::User& sender, const ListingId& listing,
                          std::string_view body,
                          const std::optional<ThreadId>& thread = std::nullopt);

  /// Threads holding at least one message in the folder, newest activity first.
  std::vector<FolderThread> folder(const UserId& user, Folder which) const;

  /// Every message of the thread the user has not deleted; marks the ones
  /// addressed to the user as read. Throws kThreadNotFound, kNotParticipant.
  FolderThread open_thread(const UserId& user, const ThreadId& thread);

  /// Idempotent per-user delete. Throws kMessageNotFound, kNotParticipant.
  Message delete_message(const UserId& user, const MessageId& message);

  std::size_t unread_count(const UserId& user) const;

  std::optional<MessageThread> thread(const ThreadId& id) const;
  std::optional<MessageThread> thread_for(const ListingId& listing, const UserId& inquirer) const;
  std::vector<MessageThread> threads() const;

  void restore(MessageThread thread);

 private:
  MessageThread& thread_locked(const ThreadId& id);
  static bool visible_to(const MessageThread& t, const Message& m, const UserId& user);
  static bool deleted_by(const MessageThread& t, const Message& m, const UserId& user);

  mutable std::mutex mu_;
  market::Marketplace& market_;
  const identity::UserDirectory& users_;
  NotificationQueue& outbox_;
  Clock clock_;
  MessengerOptions options_;
  std::map<ThreadId, MessageThread> threads_;
  std::map<std::pair<ListingId, UserId>, ThreadId> by_pair_;
  std::map<MessageId, ThreadId> message_thread_;
  unsigned long long next_thread_ = 1;
  unsigned long long next_message_ = 1;
};

}  // namespace serefind::messaging
