#include "serefind/schema/values.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace serefind::schema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || is_upper(c); }

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// [+-]? ( digits ( . digits* )? | . digits ) ( [eE] [+-]? digits )?
bool decimal_syntax(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

std::optional<double> parse_decimal(std::string_view s) {
  if (!decimal_syntax(s)) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

ValueParse fail(std::string msg) { return ValueParse{std::nullopt, std::move(msg)}; }

ValueParse parse_currency(std::string_view s) {
  CurrencyValue c;
  std::size_t i = 0;
  if (s.size() >= 3 && is_upper(s[0]) && is_upper(s[1]) && is_upper(s[2])) {
    c.code = std::string(s.substr(0, 3));
    i = 3;
    if (i < s.size() && s[i] == ' ') ++i;
  }
  const std::size_t int_begin = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  const std::size_t int_len = i - int_begin;
  if (int_len == 0) return fail("currency needs digits, e.g. 12.50 or USD 12.50");
  if (int_len > 15) return fail("currency amount too large");
  std::int64_t minor = 0;
  for (std::size_t k = int_begin; k < i; ++k) minor = minor * 10 + (s[k] - '0');
  minor *= 100;
  if (i < s.size() && s[i] == '.') {
    ++i;
    const std::size_t frac_begin = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    const std::size_t frac_len = i - frac_begin;
    if (frac_len == 0) return fail("currency fraction needs digits");
    if (frac_len > 2) return fail("currency allows at most 2 fraction digits");
    int frac = (s[frac_begin] - '0') * 10;
    if (frac_len == 2) frac += s[frac_begin + 1] - '0';
    minor += frac;
  }
  if (i != s.size()) return fail("unexpected characters in currency value");
  c.minor_units = minor;
  return ValueParse{FieldValue{std::move(c)}, {}};
}

ValueParse parse_location(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return fail("location must be 'lat,lon'");
  auto lat = parse_decimal(trim(s.substr(0, comma)));
  auto lon = parse_decimal(trim(s.substr(comma + 1)));
  if (!lat || !lon) return fail("location must be 'lat,lon' in decimal degrees");
  GeoPoint p{*lat, *lon};
  if (!is_valid(p)) return fail("location out of range");
  return ValueParse{FieldValue{LocationValue{p}}, {}};
}

// scheme "://" authority [path/query/fragment], no whitespace.
bool url_syntax(std::string_view s) {
  std::size_t i = 0;
  if (s.empty() || !is_alpha(s[0])) return false;
  while (i < s.size() && (is_alpha(s[i]) || is_digit(s[i]) || s[i] == '+' ||
                          s[i] == '-' || s[i] == '.')) {
    ++i;
  }
  if (s.substr(i, 3) != "://") return false;
  i += 3;
  std::size_t host_len = 0;
  while (i < s.size() && s[i] != '/' && s[i] != '?' && s[i] != '#') {
    if (static_cast<unsigned char>(s[i]) <= ' ') return false;
    ++i, ++host_len;
  }
  if (host_len == 0) return false;
  for (; i < s.size(); ++i) {
    if (static_cast<unsigned char>(s[i]) <= ' ') return false;
  }
  return true;
}

}  // namespace

DataType type_of(const FieldValue& v) {
  return std::visit(overloaded{
                        [](const TextValue&) { return DataType::kText; },
                        [](const DateTimeValue&) { return DataType::kDateTime; },
                        [](const CurrencyValue&) { return DataType::kCurrency; },
                        [](const NumberValue&) { return DataType::kNumber; },
                        [](const LocationValue&) { return DataType::kLocation; },
                        [](const UrlValue&) { return DataType::kUrl; },
                    },
                    v);
}

std::string to_canonical(const FieldValue& v) {
  return std::visit(
      overloaded{
          [](const TextValue& t) { return t.text; },
          [](const DateTimeValue& d) { return format_iso8601(d.at); },
          [](const CurrencyValue& c) {
            const auto major = c.minor_units / 100;
            const auto minor = c.minor_units % 100;
            std::string out = c.code + " " + std::to_string(major) + ".";
            if (minor < 10) out += '0';
            return out + std::to_string(minor);
          },
          [](const NumberValue& n) { return shortest(n.value); },
          [](const LocationValue& l) {
            return shortest(l.point.lat) + "," + shortest(l.point.lon);
          },
          [](const UrlValue& u) { return u.url; },
      },
      v);
}

std::optional<double> numeric_of(const FieldValue& v) {
  return std::visit(
      overloaded{
          [](const NumberValue& n) -> std::optional<double> { return n.value; },
          [](const CurrencyValue& c) -> std::optional<double> {
            return static_cast<double>(c.minor_units) / 100.0;
          },
          [](const DateTimeValue& d) -> std::optional<double> {
            return static_cast<double>(d.at.time_since_epoch().count());
          },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      v);
}

ValueParse parse_value(DataType type, std::string_view raw) {
  const auto s = trim(raw);
  switch (type) {
    case DataType::kText:
      if (s.empty()) return fail("text must not be blank");
      return ValueParse{FieldValue{TextValue{std::string(s)}}, {}};
    case DataType::kDateTime: {
      auto t = parse_iso8601(s);
      if (!t) return fail("expected an ISO-8601 date-time, e.g. 2012-05-01T19:00:00Z");
      return ValueParse{FieldValue{DateTimeValue{*t}}, {}};
    }
    case DataType::kCurrency:
      return parse_currency(s);
    case DataType::kNumber: {
      auto d = parse_decimal(s);
      if (!d) return fail("expected a decimal number");
      return ValueParse{FieldValue{NumberValue{*d}}, {}};
    }
    case DataType::kLocation:
      return parse_location(s);
    case DataType::kUrl:
      if (!url_syntax(s)) return fail("expected an absolute URL, e.g. https://host/path");
      return ValueParse{FieldValue{UrlValue{std::string(s)}}, {}};
  }
  return fail("unsupported data type");
}

std::string_view to_string(FieldStatus s) {
  switch (s) {
    case FieldStatus::kOk: return "ok";
    case FieldStatus::kMissing: return "missing";
    case FieldStatus::kTypeError: return "type_error";
    case FieldStatus::kUnknownLabel: return "unknown_label";
  }
  return "ok";
}

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (c.status != FieldStatus::kOk) return false;
  }
  return true;
}

ValidationReport validate_values(const CategorySchema& schema,
                                 const std::map<std::string, std::string>& values) {
  ValidationReport report;
  for (const auto& field : schema.fields) {
    const std::string* raw = nullptr;
    for (const auto& [label, value] : values) {
      if (labels_equal(label, field.label)) {
        raw = &value;
        break;
      }
    }
    FieldCheck check{field.label, FieldStatus::kOk, {}};
    if (raw == nullptr || trim(*raw).empty()) {
      if (labels_equal(field.label, kTitleLabel)) {
        check.status = FieldStatus::kMissing;
        check.message = "required";
      }
    } else {
      auto parsed = parse_value(field.data_type, *raw);
      if (parsed.value) {
        report.accepted.emplace(field.label, std::move(*parsed.value));
      } else {
        check.status = FieldStatus::kTypeError;
        check.message = std::move(parsed.error);
      }
    }
    report.checks.push_back(std::move(check));
  }
  for (const auto& [label, value] : values) {
    if (schema.find(label) == nullptr) {
      report.checks.push_back(
          FieldCheck{label, FieldStatus::kUnknownLabel, "not a field of this category"});
    }
  }
  return report;
}

}  // namespace serefind::schema
