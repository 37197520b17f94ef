#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "serefind/identity/network.hpp"
#include "serefind/identity/password.hpp"
#include "serefind/identity/user.hpp"
#include "serefind/messaging/outbox.hpp"
#include "serefind/time.hpp"

namespace serefind::identity {

/// Read access to accounts for modules that only need lookups.
class UserDirectory {
 public:
  virtual ~UserDirectory() = default;
  virtual std::optional<User> find_user(const UserId& id) const = 0;
};

struct VerificationToken {
  std::string token;
  UserId user_id;
  Timestamp expires_at{};
  bool used = false;

  bool operator==(const VerificationToken&) const = default;
};

struct PendingRegistration {
  UserId user_id;
  std::string token;
  Timestamp expires_at{};
};

struct SettingsUpdate {
  std::optional<std::string> full_name;
  std::optional<std::optional<GeoPoint>> home_location;
  std::optional<Preferences> preferences;
};

struct IdentityOptions {
  std::string base_url = "http://localhost:8080";
  std::chrono::hours token_ttl{48};
  std::size_t min_password_length = 8;
};

/// Registration, email verification and sign-in. Thread-safe.
class IdentityService : public UserDirectory {
 public:
  IdentityService(NetworkRegistry networks, PasswordHasher hasher, Clock clock,
                  messaging::NotificationQueue& outbox, IdentityOptions options = {});

  /// Creates an inactive account and queues a verification email.
  PendingRegistration register_user(std::string_view email, std::string_view username,
                                    std::string_view password);

  /// Activates the account behind a single-use token.
  User verify(std::string_view token);

  /// `login` is a username or an email address.
  User authenticate(std::string_view login, std::string_view password) const;

  User update_settings(const UserId& id, const SettingsUpdate& update);

  std::optional<User> find_user(const UserId& id) const override;
  std::optional<User> find_by_username(std::string_view username) const;
  std::vector<User> users() const;
  std::optional<VerificationToken> token(std::string_view token) const;
  std::vector<VerificationToken> tokens() const;

  /// Active users per network id.
  std::map<std::string, std::size_t> member_counts() const;

  const NetworkRegistry& networks() const { return networks_; }

  /// Persistence hooks: reinstate records loaded from storage.
  void restore(User user);
  void restore(VerificationToken token);

 private:
  mutable std::mutex mu_;
  NetworkRegistry networks_;
  PasswordHasher hasher_;
  Clock clock_;
  messaging::NotificationQueue& outbox_;
  IdentityOptions options_;
  std::unordered_map<UserId, User> users_;
  std::unordered_map<std::string, UserId> by_username_;
  std::unordered_map<std::string, UserId> by_email_;
  std::unordered_map<std::string, VerificationToken> tokens_;
  unsigned long long next_user_ = 1;
};

}  // namespace serefind::identity
