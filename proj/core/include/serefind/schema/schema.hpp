#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace serefind::schema {

enum class InputType { kTextbox, kTextarea, kSelect, kCheckbox };

enum class DataType { kText, kDateTime, kCurrency, kNumber, kLocation, kUrl };

std::string_view to_string(InputType t);
std::string_view to_string(DataType t);
std::optional<InputType> input_type_from_string(std::string_view s);
std::optional<DataType> data_type_from_string(std::string_view s);

/// Only these data types may be exposed as search filters.
bool filterable(DataType t);

struct FieldSpec {
  std::string label;
  InputType input_type = InputType::kTextbox;
  DataType data_type = DataType::kText;
  bool visible_in_search_filter = false;

  bool operator==(const FieldSpec&) const = default;
};

/// A category template. Field order is significant and preserved exactly.
struct CategorySchema {
  std::string schema_id;
  std::string category;
  std::string creator;
  int version = 1;
  std::vector<FieldSpec> fields;

  bool operator==(const CategorySchema&) const = default;

  /// Case-insensitive label lookup.
  const FieldSpec* find(std::string_view label) const;
};

enum class RequestStatus { kPending, kApproved, kRejected };

std::string_view to_string(RequestStatus s);
std::optional<RequestStatus> request_status_from_string(std::string_view s);

struct FieldRequest {
  std::string category;
  std::string label;
  DataType data_type = DataType::kText;
  std::string creator;
  RequestStatus status = RequestStatus::kPending;

  bool operator==(const FieldRequest&) const = default;
};

enum class Decision { kApprove, kReject };

/// The label every category must carry; it is the listing title.
inline constexpr std::string_view kTitleLabel = "Title";

bool labels_equal(std::string_view a, std::string_view b);

/// Fields with visible_in_search_filter set, in schema order.
std::vector<FieldSpec> derive_filter_spec(const CategorySchema& schema);

/// Versioned, append-only evolution. Never mutates its inputs.
///
/// Approve appends {label, textbox, data_type, not filterable} and bumps the
/// version; reject returns the schema unchanged. Throws kCategoryMismatch,
/// kRequestNotPending, or kDuplicateFieldLabel (approve of a label already
/// present).
std::pair<CategorySchema, FieldRequest> apply_field_request(
    const CategorySchema& schema, const FieldRequest& request, Decision decision);

/// Placeholder for a category that does not exist yet: version 0 holding only
/// the Title field. Approving a field request against it produces version 1.
CategorySchema make_pending_category(std::string category, std::string creator,
                                     std::string schema_id);

/// Checks the structural invariants (non-empty, unique labels, filter flags
/// only on filterable types, version >= 1). Throws schema errors.
void check_invariants(const CategorySchema& schema);

}  // namespace serefind::schema
