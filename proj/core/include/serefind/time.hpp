#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace serefind {

using Timestamp = std::chrono::sys_seconds;

/// Source of "now". Injected everywhere time matters so tests can drive it.
using Clock = std::function<Timestamp()>;

Clock system_clock();

/// A clock that returns a settable instant; copies share the same instant.
class ManualClock {
 public:
  explicit ManualClock(Timestamp start);

  Timestamp now() const;
  void set(Timestamp t);
  void advance(std::chrono::seconds d);
  Clock as_clock() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Canonical form: YYYY-MM-DDTHH:MM:SSZ.
std::string format_iso8601(Timestamp t);

/// Accepts YYYY-MM-DD, YYYY-MM-DDTHH:MM[:SS[.fff]] with an optional zone
/// designator (Z, +HH:MM, +HHMM, +HH). A missing zone is read as UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// RFC 5322 date, e.g. "Tue, 01 May 2012 19:00:00 +0000".
std::string format_rfc5322(Timestamp t);

double days_between(Timestamp earlier, Timestamp later);

}  // namespace serefind
