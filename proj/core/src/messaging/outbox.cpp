#include "serefind/messaging/outbox.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "serefind/error.hpp"

namespace serefind::messaging {

namespace fs = std::filesystem;

std::string_view to_string(NotificationKind k) {
  return k == NotificationKind::kVerification ? "verification" : "new_message";
}

std::string render_email(const OutboundNotification& n) {
  std::string out;
  out += "To: " + n.recipient_email + "\r\n";
  if (n.kind == NotificationKind::kVerification) {
    out += "Subject: Verify your Serefind account\r\n";
  } else {
    out += "Subject: You have a new message on Serefind\r\n";
  }
  out += "Date: " + format_rfc5322(n.created_at) + "\r\n";
  out += "X-Serefind-Kind: " + std::string(to_string(n.kind)) + "\r\n";
  out += "X-Serefind-Dedup: " + n.dedup_key;
  if (!n.latest_message_id.empty()) out += "|" + n.latest_message_id;
  out += "\r\n";
  out += "MIME-Version: 1.0\r\n";
  out += "Content-Type: text/plain; charset=utf-8\r\n";
  out += "\r\n";
  if (n.kind == NotificationKind::kVerification) {
    out += "Confirm your address to activate your account:\r\n";
  } else {
    out += "Someone replied about one of your listings. Log in to read it:\r\n";
  }
  out += n.link_url + "\r\n";
  return out;
}

void NotificationQueue::enqueue(OutboundNotification n) {
  std::lock_guard lock(mu_);
  auto it = std::find_if(queue_.begin(), queue_.end(), [&](const auto& q) {
    return q.dedup_key == n.dedup_key;
  });
  if (it != queue_.end()) {
    *it = std::move(n);
  } else {
    queue_.push_back(std::move(n));
  }
}

std::vector<OutboundNotification> NotificationQueue::pending() const {
  std::lock_guard lock(mu_);
  return queue_;
}

std::size_t NotificationQueue::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

void NotificationQueue::clear() {
  std::lock_guard lock(mu_);
  queue_.clear();
}

namespace {

bool write_all(int fd, const std::string& data) {
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  return ::fsync(fd) == 0;
}

}  // namespace

std::vector<OutboundNotification> NotificationQueue::flush(const fs::path& dir) {
  std::lock_guard single_flight(flush_mu_);
  const auto batch = pending();
  std::vector<OutboundNotification> written;
  if (batch.empty()) return written;

  std::error_code ec;
  fs::create_directories(dir, ec);

  for (const auto& n : batch) {
    const std::string body = render_email(n);
    const auto ts = n.created_at.time_since_epoch().count();
    int fd = -1;
    fs::path target;
    for (int attempt = 0; attempt < 1000 && fd < 0; ++attempt) {
      target = dir / (std::to_string(ts) + "-" + std::to_string(++seq_) + ".eml");
      fd = ::open(target.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
      if (fd < 0 && errno != EEXIST) break;
    }
    if (fd < 0) {
      const std::string why = std::strerror(errno);
      std::lock_guard lock(mu_);
      std::erase_if(queue_, [&](const auto& q) {
        return std::find(written.begin(), written.end(), q) != written.end();
      });
      throw Error(ErrorCode::kOutboxUnwritable, dir.string() + ": " + why);
    }
    const bool ok = write_all(fd, body);
    ::close(fd);
    if (!ok) {
      fs::remove(target, ec);
      std::lock_guard lock(mu_);
      std::erase_if(queue_, [&](const auto& q) {
        return std::find(written.begin(), written.end(), q) != written.end();
      });
      throw Error(ErrorCode::kOutboxUnwritable, "short write to " + target.string());
    }
    written.push_back(n);
  }

  std::lock_guard lock(mu_);
  std::erase_if(queue_, [&](const auto& q) {
    return std::find(written.begin(), written.end(), q) != written.end();
  });
  return written;
}

}  // namespace serefind::messaging
