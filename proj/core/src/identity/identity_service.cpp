#include "serefind/identity/identity_service.hpp"

#include <algorithm>
#include <cctype>

#include "serefind/error.hpp"

namespace serefind::identity {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

bool valid_username(std::string_view username) {
  if (username.size() < 3 || username.size() > 32) return false;
  return std::all_of(username.begin(), username.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

IdentityService::IdentityService(NetworkRegistry networks, PasswordHasher hasher,
                                 Clock clock, messaging::NotificationQueue& outbox,
                                 IdentityOptions options)
    : networks_(std::move(networks)),
      hasher_(hasher),
      clock_(std::move(clock)),
      outbox_(outbox),
      options_(std::move(options)) {}

PendingRegistration IdentityService::register_user(std::string_view email,
                                                   std::string_view username,
                                                   std::string_view password) {
  const std::string normalized_email = lower(email);
  const auto& network = networks_.network_of(normalized_email);
  if (!valid_username(username)) {
    throw Error(ErrorCode::kInvalidUsername,
                "username must be 3-32 characters of a-z, 0-9 and _");
  }
  if (password.size() < options_.min_password_length) {
    throw Error(ErrorCode::kWeakPassword,
                "password must have at least " +
                    std::to_string(options_.min_password_length) + " characters");
  }
  // Hash outside the lock; it is the slow part.
  std::string digest = hasher_.digest(password);

  std::lock_guard lock(mu_);
  if (by_email_.count(normalized_email) != 0) {
    throw Error(ErrorCode::kEmailAlreadyRegistered, "email is already registered");
  }
  if (by_username_.count(std::string(username)) != 0) {
    throw Error(ErrorCode::kUsernameTaken, "username is taken");
  }

  const Timestamp now = clock_();
  User user;
  user.user_id = UserId{make_sequential_id('U', next_user_++)};
  user.username = std::string(username);
  user.email = normalized_email;
  user.network_id = network.network_id;
  user.password_digest = std::move(digest);
  user.active = false;
  user.created_at = now;

  VerificationToken token{random_token(16), user.user_id,
                          now + std::chrono::duration_cast<std::chrono::seconds>(
                                    options_.token_ttl),
                          false};

  by_email_.emplace(user.email, user.user_id);
  by_username_.emplace(user.username, user.user_id);
  tokens_.emplace(token.token, token);
  const UserId id = user.user_id;
  users_.emplace(id, std::move(user));

  outbox_.enqueue(messaging::OutboundNotification{
      .recipient_email = normalized_email,
      .kind = messaging::NotificationKind::kVerification,
      .link_url = options_.base_url + "/verify/" + token.token,
      .created_at = now,
      .dedup_key = normalized_email + "|verify|" + token.token,
      .latest_message_id = {},
  });
  return PendingRegistration{id, token.token, token.expires_at};
}

User IdentityService::verify(std::string_view token) {
  std::lock_guard lock(mu_);
  auto it = tokens_.find(std::string(token));
  if (it == tokens_.end()) {
    throw Error(ErrorCode::kTokenUnknown, "unknown verification token");
  }
  auto& t = it->second;
  if (t.used) throw Error(ErrorCode::kTokenAlreadyUsed, "token was already used");
  if (clock_() > t.expires_at) {
    throw Error(ErrorCode::kTokenExpired, "verification token expired");
  }
  t.used = true;
  auto& user = users_.at(t.user_id);
  user.active = true;
  return user;
}

User IdentityService::authenticate(std::string_view login,
                                   std::string_view password) const {
  std::optional<User> user;
  {
    std::lock_guard lock(mu_);
    const auto key = std::string(login);
    const UserId* id = nullptr;
    if (auto it = by_username_.find(key); it != by_username_.end()) {
      id = &it->second;
    } else if (auto e = by_email_.find(lower(login)); e != by_email_.end()) {
      id = &e->second;
    }
    if (id != nullptr) user = users_.at(*id);
  }
  if (!user || !hasher_.verify(password, user->password_digest)) {
    throw Error(ErrorCode::kInvalidCredentials, "wrong username or password");
  }
  if (!user->active) {
    throw Error(ErrorCode::kAccountInactive, "account is not verified yet");
  }
  return *user;
}

User IdentityService::update_settings(const UserId& id, const SettingsUpdate& update) {
  std::lock_guard lock(mu_);
  auto it = users_.find(id);
  if (it == users_.end()) throw Error(ErrorCode::kNotFound, "unknown user");
  User next = it->second;
  if (update.full_name) next.full_name = *update.full_name;
  if (update.home_location) {
    if (*update.home_location && !is_valid(**update.home_location)) {
      throw Error(ErrorCode::kBadRequest, "home location out of range");
    }
    next.home_location = *update.home_location;
  }
  if (update.preferences) {
    const auto& p = *update.preferences;
    if (p.radius_km && !(*p.radius_km > 0.0)) {
      throw Error(ErrorCode::kBadRequest, "radius_km must be positive");
    }
    for (const auto& n : p.networks) {
      if (networks_.find(n) == nullptr) {
        throw Error(ErrorCode::kBadRequest, "unknown network '" + n + "'");
      }
    }
    next.preferences = p;
  }
  it->second = next;
  return next;
}

std::optional<User> IdentityService::find_user(const UserId& id) const {
  std::lock_guard lock(mu_);
  auto it = users_.find(id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::optional<User> IdentityService::find_by_username(std::string_view username) const {
  std::lock_guard lock(mu_);
  auto it = by_username_.find(std::string(username));
  if (it == by_username_.end()) return std::nullopt;
  return users_.at(it->second);
}

std::vector<User> IdentityService::users() const {
  std::lock_guard lock(mu_);
  std::vector<User> out;
  out.reserve(users_.size());
  for (const auto& [_, u] : users_) out.push_back(u);
  std::sort(out.begin(), out.end(),
            [](const User& a, const User& b) { return a.user_id < b.user_id; });
  return out;
}

std::optional<VerificationToken> IdentityService::token(std::string_view token) const {
  std::lock_guard lock(mu_);
  auto it = tokens_.find(std::string(token));
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

std::vector<VerificationToken> IdentityService::tokens() const {
  std::lock_guard lock(mu_);
  std::vector<VerificationToken> out;
  for (const auto& [_, t] : tokens_) out.push_back(t);
  return out;
}

std::map<std::string, std::size_t> IdentityService::member_counts() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::size_t> counts;
  for (const auto& [_, u] : users_) {
    if (u.active) ++counts[u.network_id];
  }
  return counts;
}

void IdentityService::restore(User user) {
  std::lock_guard lock(mu_);
  next_user_ = std::max(next_user_, parse_sequential_id('U', user.user_id.value) + 1);
  by_email_[user.email] = user.user_id;
  by_username_[user.username] = user.user_id;
  const UserId id = user.user_id;
  users_[id] = std::move(user);
}

void IdentityService::restore(VerificationToken token) {
  std::lock_guard lock(mu_);
  auto key = token.token;
  tokens_[key] = std::move(token);
}

}  // namespace serefind::identity
