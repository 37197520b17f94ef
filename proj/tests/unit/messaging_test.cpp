#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <thread>

#include "serefind/error.hpp"
#include "serefind/messaging/messenger.hpp"
#include "serefind/messaging/outbox.hpp"
#include "support/fixtures.hpp"

using namespace serefind;
using namespace serefind::messaging;
namespace fs = std::filesystem;

namespace {

class Directory : public identity::UserDirectory {
 public:
  void add(const identity::User& u) { users_[u.user_id] = u; }
  std::optional<identity::User> find_user(const UserId& id) const override {
    auto it = users_.find(id);
    if (it == users_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<UserId, identity::User> users_;
};

struct Harness {
  schema::SchemaRegistry registry;
  ManualClock clock{fixtures::at("2012-05-01T12:00:00Z")};
  Directory users;
  NotificationQueue outbox;
  std::unique_ptr<market::Marketplace> market;
  std::unique_ptr<Messenger> messenger;
  identity::User owner = fixtures::make_user("U00000001", "owner", "jhu");
  identity::User buyer = fixtures::make_user("U00000002", "buyer", "jhu");
  identity::User other = fixtures::make_user("U00000003", "other", "jhu");
  identity::User terp = fixtures::make_user("U00000004", "terp", "umd");
  market::Listing listing;

  Harness() {
    registry.put(schema::parse_schema(fixtures::kEventXml));
    market = std::make_unique<market::Marketplace>(registry, clock.as_clock());
    for (const auto* u : {&owner, &buyer, &other, &terp}) users.add(*u);
    messenger = std::make_unique<Messenger>(*market, users, outbox, clock.as_clock());
    listing = create("Jazz night");
  }

  market::Listing create(const std::string& title) {
    market::ListingDraft d;
    d.category = "event";
    d.values = {{"Title", title}};
    return market->create_listing(owner, d);
  }

  SendResult send(const identity::User& from, const std::string& body,
                  std::optional<ThreadId> thread = std::nullopt) {
    clock.advance(std::chrono::seconds(1));
    return messenger->send_message(from, listing.listing_id, body, thread);
  }
};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kBadRequest;
}

std::size_t message_count(const std::vector<FolderThread>& threads) {
  std::size_t n = 0;
  for (const auto& t : threads) n += t.messages.size();
  return n;
}

}  // namespace

TEST(Messaging, ThreeMessageExchange) {
  Harness h;
  const auto first = h.send(h.buyer, "Is it still on?");
  EXPECT_TRUE(first.thread_created);
  EXPECT_EQ(first.edge.kind, market::EdgeKind::kDashed);
  EXPECT_EQ(first.edge.message_count, 1u);
  const auto tid = first.message.thread_id;
  h.send(h.owner, "Yes, 9pm.", tid);
  const auto third = h.send(h.buyer, "Great, see you.");
  EXPECT_FALSE(third.thread_created);
  EXPECT_EQ(third.message.thread_id, tid);
  EXPECT_EQ(third.edge.message_count, 3u);

  const auto t = h.messenger->thread(tid);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->subject, "Jazz night");
  ASSERT_EQ(t->messages.size(), 3u);
  EXPECT_LT(t->messages[0].sent_at, t->messages[1].sent_at);
  EXPECT_LT(t->messages[1].sent_at, t->messages[2].sent_at);

  EXPECT_EQ(message_count(h.messenger->folder(h.owner.user_id, Folder::kInbox)), 2u);
  EXPECT_EQ(message_count(h.messenger->folder(h.owner.user_id, Folder::kSent)), 1u);
  EXPECT_EQ(message_count(h.messenger->folder(h.buyer.user_id, Folder::kInbox)), 1u);
  EXPECT_EQ(message_count(h.messenger->folder(h.buyer.user_id, Folder::kSent)), 2u);
  EXPECT_EQ(h.messenger->unread_count(h.owner.user_id), 2u);
  h.messenger->open_thread(h.owner.user_id, tid);
  EXPECT_EQ(h.messenger->unread_count(h.owner.user_id), 0u);
  EXPECT_EQ(h.messenger->unread_count(h.buyer.user_id), 1u);
}

TEST(Messaging, SubjectIsFrozen) {
  Harness h;
  const auto tid = h.send(h.buyer, "hi").message.thread_id;
  h.market->mutate_listing(h.owner, h.listing.listing_id,
                           market::EditListing{{{"Title", "Renamed"}}});
  EXPECT_EQ(h.messenger->thread(tid)->subject, "Jazz night");
}

TEST(Messaging, DeleteIsPerUserAndIdempotent) {
  Harness h;
  const auto m = h.send(h.buyer, "hello").message;
  h.messenger->delete_message(h.owner.user_id, m.message_id);
  h.messenger->delete_message(h.owner.user_id, m.message_id);
  EXPECT_EQ(message_count(h.messenger->folder(h.owner.user_id, Folder::kInbox)), 0u);
  EXPECT_EQ(message_count(h.messenger->folder(h.owner.user_id, Folder::kDeleted)), 1u);
  EXPECT_EQ(message_count(h.messenger->folder(h.buyer.user_id, Folder::kSent)), 1u);
  EXPECT_EQ(message_count(h.messenger->folder(h.buyer.user_id, Folder::kDeleted)), 0u);
  EXPECT_EQ(code_of([&] { h.messenger->delete_message(h.other.user_id, m.message_id); }),
            ErrorCode::kNotParticipant);
  EXPECT_EQ(code_of([&] { h.messenger->delete_message(h.owner.user_id, MessageId{"M99999999"}); }),
            ErrorCode::kMessageNotFound);
}

TEST(Messaging, Guards) {
  Harness h;
  const auto tid = h.send(h.buyer, "hello").message.thread_id;
  EXPECT_EQ(code_of([&] { h.messenger->open_thread(h.other.user_id, tid); }),
            ErrorCode::kNotParticipant);
  EXPECT_EQ(code_of([&] { h.send(h.other, "me too", tid); }), ErrorCode::kNotParticipant);
  EXPECT_EQ(code_of([&] { h.send(h.owner, "talking to myself"); }), ErrorCode::kSelfMessage);
  EXPECT_EQ(code_of([&] { h.send(h.buyer, "   "); }), ErrorCode::kEmptyBody);
  EXPECT_EQ(code_of([&] { h.send(h.buyer, std::string(kMaxBodyChars + 1, 'x')); }),
            ErrorCode::kBodyTooLong);
  EXPECT_EQ(code_of([&] { h.send(h.terp, "cross network"); }), ErrorCode::kDenied);

  h.market->mutate_listing(h.owner, h.listing.listing_id, market::DeleteListing{});
  EXPECT_EQ(code_of([&] { h.send(h.buyer, "still there?"); }), ErrorCode::kListingDeleted);
}

TEST(Messaging, UnreadCountMatchesRecount) {
  Harness h;
  std::mt19937_64 rng(5);
  const std::vector<const identity::User*> inquirers = {&h.buyer, &h.other};
  std::map<const identity::User*, ThreadId> threads;
  for (int i = 0; i < 300; ++i) {
    const auto* who = inquirers[rng() % inquirers.size()];
    switch (rng() % 4) {
      case 0:
      case 1:
        threads[who] = h.send(*who, "ping " + std::to_string(i)).message.thread_id;
        break;
      case 2:
        if (threads.count(who)) h.send(h.owner, "pong", threads[who]);
        break;
      default:
        if (threads.count(who)) h.messenger->open_thread(h.owner.user_id, threads[who]);
    }
  }
  for (const auto* u : {&h.owner, &h.buyer, &h.other}) {
    std::size_t unread = 0;
    for (const auto& t : h.messenger->threads()) {
      for (const auto& m : t.messages) {
        const bool to_u = (u->user_id == t.owner_id && m.sender_id == t.inquirer_id) ||
                          (u->user_id == t.inquirer_id && m.sender_id == t.owner_id);
        unread += to_u && !m.read_by_recipient;
      }
    }
    EXPECT_EQ(h.messenger->unread_count(u->user_id), unread) << u->username;
  }
}

TEST(Outbox, NotificationCarriesNoBody) {
  Harness h;
  fixtures::TempDir dir;
  h.send(h.buyer, "secret meeting place: the library");
  const auto written = h.outbox.flush(dir.path());
  ASSERT_EQ(written.size(), 1u);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir.path())) files.push_back(e.path());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].extension(), ".eml");
  const auto text = fixtures::read_file(files[0]);
  EXPECT_NE(text.find("To: owner@jhu.edu"), std::string::npos);
  EXPECT_NE(text.find("/messages/inbox"), std::string::npos);
  EXPECT_EQ(text.find("library"), std::string::npos);
  EXPECT_EQ(text.find("buyer@jhu.edu"), std::string::npos);
  EXPECT_EQ(h.outbox.size(), 0u);
}

TEST(Outbox, BurstCollapsesToOneEmail) {
  Harness h;
  fixtures::TempDir dir;
  h.send(h.buyer, "one");
  const auto second = h.send(h.buyer, "two");
  ASSERT_EQ(h.outbox.size(), 1u);
  EXPECT_EQ(h.outbox.pending()[0].latest_message_id, second.message.message_id.value);
  EXPECT_EQ(h.outbox.flush(dir.path()).size(), 1u);
}

TEST(Outbox, UnwritableDirectoryKeepsQueue) {
  Harness h;
  fixtures::TempDir dir;
  fixtures::write_file(dir.path() / "blocker", "not a directory");
  h.send(h.buyer, "one");
  EXPECT_THROW(h.outbox.flush(dir.path() / "blocker"), Error);
  EXPECT_EQ(h.outbox.size(), 1u);
}

TEST(Messaging, ConcurrentFirstMessagesShareOneThread) {
  Harness h;
  std::vector<std::thread> threads;
  std::atomic<int> created{0};
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&] {
      if (h.messenger->send_message(h.buyer, h.listing.listing_id, "hi").thread_created) ++created;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(created.load(), 1);
  EXPECT_EQ(h.messenger->threads().size(), 1u);
  EXPECT_EQ(h.messenger->threads()[0].messages.size(), 16u);
  EXPECT_EQ(h.market->edge(h.buyer.user_id, h.listing.listing_id)->message_count, 16u);
}
