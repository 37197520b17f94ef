#pragma once

#include <string>
#include <string_view>

#include "serefind/schema/schema.hpp"

namespace serefind::schema {

enum class ParseMode {
  /// Unknown elements and attributes are errors.
  kStrict,
  /// Unknown elements and attributes are skipped.
  kLenient,
};

/// Parses a `<schema>` document. Throws serefind::Error with one of
/// kMalformedXml, kUnknownElement, kUnknownAttribute, kInvalidAttributeValue,
/// kDuplicateFieldLabel, kEmptySchema, kUnknownDataType, kInvalidFilterField.
CategorySchema parse_schema(std::string_view xml, ParseMode mode = ParseMode::kStrict);

/// Emits attributes only where they differ from their defaults.
std::string serialize_schema(const CategorySchema& schema);

/// Parses a `<requestField>` document into a pending request.
FieldRequest parse_field_request(std::string_view xml,
                                 ParseMode mode = ParseMode::kStrict);

std::string serialize_field_request(const FieldRequest& request);

}  // namespace serefind::schema
