#include "serefind/time.hpp"

#include <cctype>
#include <cstdio>
#include <mutex>

namespace serefind {

using namespace std::chrono;

Clock system_clock() {
  return [] { return floor<seconds>(std::chrono::system_clock::now()); };
}

struct ManualClock::State {
  mutable std::mutex mu;
  Timestamp now;
};

ManualClock::ManualClock(Timestamp start) : state_(std::make_shared<State>()) {
  state_->now = start;
}

Timestamp ManualClock::now() const {
  std::lock_guard lock(state_->mu);
  return state_->now;
}

void ManualClock::set(Timestamp t) {
  std::lock_guard lock(state_->mu);
  state_->now = t;
}

void ManualClock::advance(seconds d) {
  std::lock_guard lock(state_->mu);
  state_->now += d;
}

Clock ManualClock::as_clock() const {
  return [state = state_] {
    std::lock_guard lock(state->mu);
    return state->now;
  };
}

std::string format_iso8601(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ == s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::optional<int> digits(std::size_t n) {
    if (pos_ + n > s_.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const char c = s_[pos_ + i];
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      v = v * 10 + (c - '0');
    }
    pos_ += n;
    return v;
  }
  void skip_digits() {
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  Cursor c(text);
  const auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  const auto mo = c.digits(2);
  if (!mo || !c.eat('-')) return std::nullopt;
  const auto d = c.digits(2);
  if (!d) return std::nullopt;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp t = sys_days{ymd};
  if (c.done()) return t;

  if (!c.eat('T')) return std::nullopt;
  const auto h = c.digits(2);
  if (!h || !c.eat(':')) return std::nullopt;
  const auto mi = c.digits(2);
  if (!mi) return std::nullopt;
  int s = 0;
  if (c.eat(':')) {
    const auto sec = c.digits(2);
    if (!sec) return std::nullopt;
    s = *sec;
    if (c.eat('.')) {
      if (!std::isdigit(static_cast<unsigned char>(c.peek()))) return std::nullopt;
      c.skip_digits();
    }
  }
  if (*h > 23 || *mi > 59 || s > 59) return std::nullopt;
  t += hours{*h} + minutes{*mi} + seconds{s};

  if (c.done() || c.eat('Z')) return c.done() ? std::optional(t) : std::nullopt;
  const char sign = c.peek();
  if (sign != '+' && sign != '-') return std::nullopt;
  c.eat(sign);
  const auto oh = c.digits(2);
  if (!oh) return std::nullopt;
  int om = 0;
  if (!c.done()) {
    c.eat(':');
    const auto m = c.digits(2);
    if (!m) return std::nullopt;
    om = *m;
  }
  if (!c.done() || *oh > 23 || om > 59) return std::nullopt;
  const auto offset = hours{*oh} + minutes{om};
  return sign == '+' ? t - offset : t + offset;
}

std::string format_rfc5322(Timestamp t) {
  static constexpr const char* kDays[] = {"Sun", "Mon", "Tue", "Wed",
                                          "Thu", "Fri", "Sat"};
  static constexpr const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr",
                                            "May", "Jun", "Jul", "Aug",
                                            "Sep", "Oct", "Nov", "Dec"};
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const weekday wd{day};
  const hh_mm_ss hms{t - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s, %02u %s %04d %02ld:%02ld:%02ld +0000",
                kDays[wd.c_encoding()], static_cast<unsigned>(ymd.day()),
                kMonths[static_cast<unsigned>(ymd.month()) - 1],
                static_cast<int>(ymd.year()),
                static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

double days_between(Timestamp earlier, Timestamp later) {
  return static_cast<double>((later - earlier).count()) / 86400.0;
}

}  // namespace serefind
