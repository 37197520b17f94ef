#include "serefind/messaging/messenger.hpp"

#include <algorithm>

#include "serefind/error.hpp"
#include "serefind/identity/redact.hpp"

namespace serefind::messaging {

std::string_view to_string(Folder f) {
  switch (f) {
    case Folder::kInbox: return "inbox";
    case Folder::kSent: return "sent";
    case Folder::kDeleted: return "deleted";
  }
  return "inbox";
}

std::optional<Folder> folder_from_string(std::string_view s) {
  for (auto f : {Folder::kInbox, Folder::kSent, Folder::kDeleted}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

namespace {

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

Messenger::Messenger(market::Marketplace& market, const identity::UserDirectory& users,
                     NotificationQueue& outbox, Clock clock, MessengerOptions options)
    : market_(market),
      users_(users),
      outbox_(outbox),
      clock_(std::move(clock)),
      options_(std::move(options)) {}

MessageThread& Messenger::thread_locked(const ThreadId& id) {
  auto it = threads_.find(id);
  if (it == threads_.end()) {
    throw Error(ErrorCode::kThreadNotFound, "no thread '" + id.value + "'");
  }
  return it->second;
}

bool Messenger::deleted_by(const MessageThread& t, const Message& m, const UserId& user) {
  if (user == t.inquirer_id) return m.deleted_by_inquirer;
  if (user == t.owner_id) return m.deleted_by_owner;
  return false;
}

bool Messenger::visible_to(const MessageThread& t, const Message& m, const UserId& user) {
  return (user == t.inquirer_id || user == t.owner_id) && !deleted_by(t, m, user);
}

SendResult Messenger::send_message(const identity::User& sender, const ListingId& listing_id,
                                   std::string_view body,
                                   const std::optional<ThreadId>& thread_id) {
  if (!sender.active) throw Error(ErrorCode::kAccountInactive, "account is not verified yet");
  if (blank(body)) throw Error(ErrorCode::kEmptyBody, "message body is empty");
  if (utf8_length(body) > kMaxBodyChars) {
    throw Error(ErrorCode::kBodyTooLong, "message body exceeds 10000 characters");
  }
  const auto listing = market_.find(listing_id);
  if (!listing) throw Error(ErrorCode::kListingNotFound, "no listing '" + listing_id.value + "'");
  if (listing->status == market::ListingStatus::kDeleted) {
    throw Error(ErrorCode::kListingDeleted,
                "the listing was deleted; no further messages can be sent");
  }
  const bool hidden = listing->status == market::ListingStatus::kHidden;

  std::lock_guard lock(mu_);
  MessageThread* t = nullptr;
  bool created = false;
  if (sender.user_id == listing->owner_id) {
    if (!thread_id) {
      throw Error(ErrorCode::kSelfMessage, "owners reply inside an existing thread");
    }
    t = &thread_locked(*thread_id);
    if (t->listing_id != listing_id) {
      throw Error(ErrorCode::kThreadNotFound, "thread belongs to another listing");
    }
    if (t->owner_id != sender.user_id) {
      throw Error(ErrorCode::kNotParticipant, "not a participant of this thread");
    }
    if (hidden) throw Error(ErrorCode::kListingUnavailable, "listing is hidden");
  } else {
    auto existing = by_pair_.find({listing_id, sender.user_id});
    if (thread_id && (existing == by_pair_.end() || existing->second != *thread_id)) {
      if (threads_.count(*thread_id) == 0) {
        throw Error(ErrorCode::kThreadNotFound, "no thread '" + thread_id->value + "'");
      }
      throw Error(ErrorCode::kNotParticipant, "not a participant of this thread");
    }
    if (hidden) throw Error(ErrorCode::kListingUnavailable, "listing is hidden");
    if (existing != by_pair_.end()) {
      t = &threads_.at(existing->second);
    } else {
      if (listing->status != market::ListingStatus::kActive) {
        throw Error(ErrorCode::kListingUnavailable,
                    "listing is " + std::string(to_string(listing->status)));
      }
      if (!identity::can_view(&sender, *listing)) {
        throw Error(ErrorCode::kDenied, "listing is not visible to you");
      }
      MessageThread fresh;
      fresh.thread_id = ThreadId{make_sequential_id('T', next_thread_++)};
      fresh.listing_id = listing_id;
      fresh.inquirer_id = sender.user_id;
      fresh.owner_id = listing->owner_id;
      fresh.subject = listing->title;
      fresh.created_at = clock_();
      const ThreadId id = fresh.thread_id;
      by_pair_.emplace(std::pair{listing_id, sender.user_id}, id);
      t = &threads_.emplace(id, std::move(fresh)).first->second;
      created = true;
    }
  }

  const auto edge = market_.record_message(listing_id, t->inquirer_id);

  Message m;
  m.message_id = MessageId{make_sequential_id('M', next_message_++)};
  m.thread_id = t->thread_id;
  m.sender_id = sender.user_id;
  m.body = std::string(body);
  m.sent_at = clock_();
  t->messages.push_back(m);
  message_thread_.emplace(m.message_id, t->thread_id);

  const UserId& recipient_id =
      sender.user_id == t->inquirer_id ? t->owner_id : t->inquirer_id;
  if (auto recipient = users_.find_user(recipient_id)) {
    outbox_.enqueue(OutboundNotification{
        .recipient_email = recipient->email,
        .kind = NotificationKind::kNewMessage,
        .link_url = options_.inbox_url,
        .created_at = m.sent_at,
        .dedup_key = recipient->email + "|" + t->thread_id.value,
        .latest_message_id = m.message_id.value,
    });
  }
  return SendResult{std::move(m), created, edge};
}

std::vector<FolderThread> Messenger::folder(const UserId& user, Folder which) const {
  std::lock_guard lock(mu_);
  std::vector<FolderThread> out;
  for (const auto& [id, t] : threads_) {
    if (user != t.inquirer_id && user != t.owner_id) continue;
    FolderThread ft{t.thread_id, t.listing_id, t.subject,
                    user == t.inquirer_id ? t.owner_id : t.inquirer_id, {}};
    for (const auto& m : t.messages) {
      const bool mine = m.sender_id == user;
      const bool gone = deleted_by(t, m, user);
      const bool keep = which == Folder::kDeleted ? gone
                        : which == Folder::kSent  ? (mine && !gone)
                                                  : (!mine && !gone);
      if (keep) ft.messages.push_back(m);
    }
    if (!ft.messages.empty()) out.push_back(std::move(ft));
  }
  std::sort(out.begin(), out.end(), [](const FolderThread& a, const FolderThread& b) {
    const auto& la = a.messages.back();
    const auto& lb = b.messages.back();
    if (la.sent_at != lb.sent_at) return la.sent_at > lb.sent_at;
    return la.message_id > lb.message_id;
  });
  return out;
}

FolderThread Messenger::open_thread(const UserId& user, const ThreadId& thread) {
  std::lock_guard lock(mu_);
  auto& t = thread_locked(thread);
  if (user != t.inquirer_id && user != t.owner_id) {
    throw Error(ErrorCode::kNotParticipant, "not a participant of this thread");
  }
  FolderThread ft{t.thread_id, t.listing_id, t.subject,
                  user == t.inquirer_id ? t.owner_id : t.inquirer_id, {}};
  for (auto& m : t.messages) {
    if (deleted_by(t, m, user)) continue;
    if (m.sender_id != user) m.read_by_recipient = true;
    ft.messages.push_back(m);
  }
  return ft;
}

Message Messenger::delete_message(const UserId& user, const MessageId& message) {
  std::lock_guard lock(mu_);
  auto where = message_thread_.find(message);
  if (where == message_thread_.end()) {
    throw Error(ErrorCode::kMessageNotFound, "no message '" + message.value + "'");
  }
  auto& t = threads_.at(where->second);
  if (user != t.inquirer_id && user != t.owner_id) {
    throw Error(ErrorCode::kNotParticipant, "not a participant of this thread");
  }
  auto& m = *std::find_if(t.messages.begin(), t.messages.end(),
                          [&](const Message& x) { return x.message_id == message; });
  if (user == t.inquirer_id) {
    m.deleted_by_inquirer = true;
  } else {
    m.deleted_by_owner = true;
  }
  return m;
}

std::size_t Messenger::unread_count(const UserId& user) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, t] : threads_) {
    if (user != t.inquirer_id && user != t.owner_id) continue;
    for (const auto& m : t.messages) {
      if (m.sender_id != user && !m.read_by_recipient && !deleted_by(t, m, user)) ++n;
    }
  }
  return n;
}

std::optional<MessageThread> Messenger::thread(const ThreadId& id) const {
  std::lock_guard lock(mu_);
  auto it = threads_.find(id);
  if (it == threads_.end()) return std::nullopt;
  return it->second;
}

std::optional<MessageThread> Messenger::thread_for(const ListingId& listing,
                                                   const UserId& inquirer) const {
  std::lock_guard lock(mu_);
  auto it = by_pair_.find({listing, inquirer});
  if (it == by_pair_.end()) return std::nullopt;
  return threads_.at(it->second);
}

std::vector<MessageThread> Messenger::threads() const {
  std::lock_guard lock(mu_);
  std::vector<MessageThread> out;
  out.reserve(threads_.size());
  for (const auto& [_, t] : threads_) out.push_back(t);
  return out;
}

void Messenger::restore(MessageThread thread) {
  std::lock_guard lock(mu_);
  next_thread_ = std::max(next_thread_, parse_sequential_id('T', thread.thread_id.value) + 1);
  for (const auto& m : thread.messages) {
    next_message_ = std::max(next_message_, parse_sequential_id('M', m.message_id.value) + 1);
    message_thread_[m.message_id] = thread.thread_id;
  }
  by_pair_[{thread.listing_id, thread.inquirer_id}] = thread.thread_id;
  auto id = thread.thread_id;
  threads_[id] = std::move(thread);
}

}  // namespace serefind::messaging
