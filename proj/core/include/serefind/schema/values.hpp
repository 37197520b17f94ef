#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "serefind/geo.hpp"
#include "serefind/schema/schema.hpp"
#include "serefind/time.hpp"

namespace serefind::schema {

struct TextValue {
  std::string text;
  bool operator==(const TextValue&) const = default;
};

struct DateTimeValue {
  Timestamp at;
  bool operator==(const DateTimeValue&) const = default;
};

/// Money as integer minor units plus an ISO-4217 style code.
struct CurrencyValue {
  std::int64_t minor_units = 0;
  std::string code = "USD";
  bool operator==(const CurrencyValue&) const = default;
};

struct NumberValue {
  double value = 0.0;
  bool operator==(const NumberValue&) const = default;
};

struct LocationValue {
  GeoPoint point;
  bool operator==(const LocationValue&) const = default;
};

struct UrlValue {
  std::string url;
  bool operator==(const UrlValue&) const = default;
};

using FieldValue = std::variant<TextValue, DateTimeValue, CurrencyValue,
                                NumberValue, LocationValue, UrlValue>;

DataType type_of(const FieldValue& v);

/// Round-trips through parse_value(type_of(v), to_canonical(v)).
std::string to_canonical(const FieldValue& v);

/// Numeric projection used by range filters and sorting: number value,
/// currency in major units, date-time as unix seconds. nullopt otherwise.
std::optional<double> numeric_of(const FieldValue& v);

struct ValueParse {
  std::optional<FieldValue> value;
  std::string error;
};

ValueParse parse_value(DataType type, std::string_view raw);

enum class FieldStatus { kOk, kMissing, kTypeError, kUnknownLabel };

std::string_view to_string(FieldStatus s);

struct FieldCheck {
  std::string label;
  FieldStatus status = FieldStatus::kOk;
  std::string message;
};

struct ValidationReport {
  /// One entry per schema field, in schema order, followed by one entry per
  /// supplied label the schema does not know.
  std::vector<FieldCheck> checks;
  /// Parsed values keyed by the schema's spelling of each label.
  std::map<std::string, FieldValue> accepted;

  bool ok() const;
};

/// Total: never throws for any input map.
ValidationReport validate_values(const CategorySchema& schema,
                                 const std::map<std::string, std::string>& values);

}  // namespace serefind::schema
