#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "serefind/error.hpp"
#include "serefind/identity/identity_service.hpp"
#include "serefind/identity/network.hpp"
#include "serefind/identity/redact.hpp"
#include "serefind/messaging/outbox.hpp"
#include "support/fixtures.hpp"

using namespace serefind;
using namespace serefind::identity;

namespace {

NetworkRegistry campus_networks() { return NetworkRegistry::parse(fixtures::kNetworksTsv); }

struct IdentityHarness {
  ManualClock clock{fixtures::at("2012-05-01T12:00:00Z")};
  messaging::NotificationQueue outbox;
  IdentityService service{campus_networks(), PasswordHasher(1000), clock.as_clock(), outbox,
                          IdentityOptions{"http://campus.test", std::chrono::hours(48), 8}};
};

market::Listing listing_in(const std::string& network, market::Visibility v) {
  market::Listing l;
  l.listing_id = ListingId{"L00000001"};
  l.owner_id = UserId{"U00000001"};
  l.network_id = network;
  l.category = "books";
  l.title = "Linear algebra";
  l.description = "Lightly used";
  l.tags = {"math"};
  l.values["Title"] = schema::TextValue{"Linear algebra"};
  l.values["Price"] = schema::CurrencyValue{1200, "USD"};
  l.values["Notes"] = schema::TextValue{"pickup only"};
  l.location = GeoPoint{39.3, -76.6};
  l.visibility = v;
  return l;
}

}  // namespace

TEST(Networks, SuffixMatching) {
  auto reg = campus_networks();
  EXPECT_EQ(reg.network_of("pramod@cs.jhu.edu").network_id, "jhu");
  EXPECT_EQ(reg.network_of("a@jhu.edu").network_id, reg.network_of("a@cs.jhu.edu").network_id);
  EXPECT_THROW(reg.network_of("a@gmail.com"), Error);
  try {
    reg.network_of("a@gmail.com");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownDomain);
  }
  // Suffix means a whole label boundary, not a substring.
  EXPECT_THROW(reg.network_of("a@notjhu.edu"), Error);
}

TEST(Networks, LongestSuffixWins) {
  auto reg = campus_networks();
  reg.add(Network{"jhu_cs", "JHU Computer Science", {"cs.jhu.edu"}});
  EXPECT_EQ(reg.network_of("x@cs.jhu.edu").network_id, "jhu_cs");
  EXPECT_EQ(reg.network_of("x@bio.jhu.edu").network_id, "jhu");
  EXPECT_THROW(reg.add(Network{"dup", "Dup", {"jhu.edu"}}), Error);
  EXPECT_EQ(NetworkRegistry::parse(reg.to_text()).networks(), reg.networks());
}

TEST(Registration, HappyPathQueuesOneMail) {
  IdentityHarness h;
  auto p = h.service.register_user("bluejay@jhu.edu", "bluejay", "longpassword");
  EXPECT_FALSE(p.token.empty());
  ASSERT_EQ(h.outbox.size(), 1u);
  const auto mail = h.outbox.pending()[0];
  EXPECT_EQ(mail.kind, messaging::NotificationKind::kVerification);
  EXPECT_EQ(mail.link_url, "http://campus.test/verify/" + p.token);
  EXPECT_FALSE(h.service.find_user(p.user_id)->active);
}

TEST(Registration, DuplicatesRejected) {
  IdentityHarness h;
  h.service.register_user("bluejay@jhu.edu", "bluejay", "longpassword");
  try {
    h.service.register_user("BlueJay@jhu.edu", "other", "longpassword");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmailAlreadyRegistered);
  }
  try {
    h.service.register_user("x@jhu.edu", "bluejay", "longpassword");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsernameTaken);
  }
}

TEST(Registration, VerifyActivatesOnce) {
  IdentityHarness h;
  auto p = h.service.register_user("bluejay@cs.jhu.edu", "bluejay", "longpassword");
  auto u = h.service.verify(p.token);
  EXPECT_TRUE(u.active);
  EXPECT_EQ(u.network_id, "jhu");
  try {
    h.service.verify(p.token);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTokenAlreadyUsed);
  }
  EXPECT_EQ(h.service.authenticate("bluejay", "longpassword").user_id, u.user_id);
  EXPECT_EQ(h.service.authenticate("bluejay@cs.jhu.edu", "longpassword").user_id, u.user_id);
  EXPECT_THROW(h.service.authenticate("bluejay", "wrong-password"), Error);
}

TEST(Registration, TokenExpiresAfter48Hours) {
  IdentityHarness h;
  auto p = h.service.register_user("a@jhu.edu", "aaa", "longpassword");
  auto q = h.service.register_user("b@jhu.edu", "bbb", "longpassword");
  h.clock.advance(std::chrono::hours(48));
  EXPECT_TRUE(h.service.verify(q.token).active);  // exactly at the limit
  h.clock.advance(std::chrono::seconds(1));
  try {
    h.service.verify(p.token);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTokenExpired);
  }
}

TEST(Registration, InactiveCannotSignIn) {
  IdentityHarness h;
  h.service.register_user("a@jhu.edu", "aaa", "longpassword");
  try {
    h.service.authenticate("aaa", "longpassword");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAccountInactive);
  }
}

TEST(Registration, ConcurrentDuplicatesYieldOneSuccess) {
  IdentityHarness h;
  std::atomic<int> ok{0}, dup{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&, i] {
      try {
        h.service.register_user("same@jhu.edu", "user_" + std::to_string(i), "longpassword");
        ++ok;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kEmailAlreadyRegistered) ++dup;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 1);
  EXPECT_EQ(dup.load(), 15);
}

TEST(Registration, InputValidation) {
  IdentityHarness h;
  EXPECT_THROW(h.service.register_user("not-an-email", "abc", "longpassword"), Error);
  EXPECT_THROW(h.service.register_user("a@jhu.edu", "A!", "longpassword"), Error);
  EXPECT_THROW(h.service.register_user("a@jhu.edu", "abc", "short"), Error);
}

TEST(Redact, AnonymousSeesNoDescriptionOrUsername) {
  const auto l = listing_in("jhu", market::Visibility::kNetwork);
  const std::vector<schema::FieldSpec> filters = {
      {"Title", schema::InputType::kTextbox, schema::DataType::kText, true},
      {"Price", schema::InputType::kTextbox, schema::DataType::kCurrency, true}};
  auto r = redact(nullptr, l, "owner", filters);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->level, RedactionLevel::kAnonymous);
  EXPECT_FALSE(r->description);
  EXPECT_FALSE(r->owner_username);
  EXPECT_EQ(r->values.size(), 2u);
  EXPECT_EQ(r->values.count("Notes"), 0u);
}

TEST(Redact, NetworkBoundary) {
  const auto jhu_viewer = fixtures::make_user("U00000002", "viewer", "jhu");
  const auto umd_viewer = fixtures::make_user("U00000003", "terp", "umd");
  const auto members_only = listing_in("jhu", market::Visibility::kNetwork);
  const auto open = listing_in("jhu", market::Visibility::kPublic);

  auto same = redact(&jhu_viewer, members_only, "owner", {});
  ASSERT_TRUE(same);
  EXPECT_EQ(same->level, RedactionLevel::kMember);
  EXPECT_EQ(same->description, "Lightly used");
  EXPECT_FALSE(same->view_count);

  EXPECT_FALSE(redact(&umd_viewer, members_only, "owner", {}));
  auto cross = redact(&umd_viewer, open, "owner", {});
  ASSERT_TRUE(cross);
  EXPECT_EQ(cross->level, RedactionLevel::kMember);

  const auto owner = fixtures::make_user("U00000001", "owner", "jhu");
  auto full = redact(&owner, members_only, "owner", {});
  ASSERT_TRUE(full);
  EXPECT_EQ(full->level, RedactionLevel::kFull);
  EXPECT_TRUE(full->view_count);
}

TEST(Redact, InactiveViewerIsAnonymous) {
  const auto pending = fixtures::make_user("U00000002", "viewer", "jhu", false);
  auto r = redact(&pending, listing_in("jhu", market::Visibility::kNetwork), "owner", {});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->level, RedactionLevel::kAnonymous);
}

TEST(Redact, NonActiveListingsOnlyForOwner) {
  auto l = listing_in("jhu", market::Visibility::kPublic);
  l.status = market::ListingStatus::kHidden;
  const auto viewer = fixtures::make_user("U00000002", "viewer", "jhu");
  const auto owner = fixtures::make_user("U00000001", "owner", "jhu");
  EXPECT_FALSE(redact(&viewer, l, "owner", {}));
  EXPECT_FALSE(redact(nullptr, l, "owner", {}));
  EXPECT_TRUE(redact(&owner, l, "owner", {}));
}
