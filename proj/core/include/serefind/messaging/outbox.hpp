#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "serefind/time.hpp"

namespace serefind::messaging {

enum class NotificationKind { kNewMessage, kVerification };

std::string_view to_string(NotificationKind k);

/// An email waiting in the outbox queue. New-message notifications carry a
/// link to the inbox and nothing else: no body, no sender address.
struct OutboundNotification {
  std::string recipient_email;
  NotificationKind kind = NotificationKind::kNewMessage;
  std::string link_url;
  Timestamp created_at{};
  /// Queue entries with equal keys collapse into one (the newest wins).
  std::string dedup_key;
  /// For new-message notifications, the newest message the email covers.
  std::string latest_message_id;

  bool operator==(const OutboundNotification&) const = default;
};

/// Renders the RFC-5322-style plain-text file written to the outbox.
std::string render_email(const OutboundNotification& n);

/// Pending notifications, de-duplicated by key.
class NotificationQueue {
 public:
  void enqueue(OutboundNotification n);
  std::vector<OutboundNotification> pending() const;
  std::size_t size() const;
  void clear();

  /// Writes each pending notification to `{dir}/{unix_ts}-{seq}.eml` and
  /// empties the queue. Single-flighted. On a write failure, throws
  /// kOutboxUnwritable and keeps every unwritten entry queued.
  std::vector<OutboundNotification> flush(const std::filesystem::path& dir);

 private:
  mutable std::mutex mu_;
  std::mutex flush_mu_;
  std::vector<OutboundNotification> queue_;
  unsigned long long seq_ = 0;
};

}  // namespace serefind::messaging
