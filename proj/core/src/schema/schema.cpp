#include "serefind/schema/schema.hpp"

#include <algorithm>
#include <cctype>

#include "serefind/error.hpp"

namespace serefind::schema {

std::string_view to_string(InputType t) {
  switch (t) {
    case InputType::kTextbox: return "textbox";
    case InputType::kTextarea: return "textarea";
    case InputType::kSelect: return "select";
    case InputType::kCheckbox: return "checkbox";
  }
  return "textbox";
}

std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::kText: return "text";
    case DataType::kDateTime: return "date-time";
    case DataType::kCurrency: return "currency";
    case DataType::kNumber: return "number";
    case DataType::kLocation: return "location";
    case DataType::kUrl: return "url";
  }
  return "text";
}

std::optional<InputType> input_type_from_string(std::string_view s) {
  for (auto t : {InputType::kTextbox, InputType::kTextarea, InputType::kSelect,
                 InputType::kCheckbox}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<DataType> data_type_from_string(std::string_view s) {
  for (auto t : {DataType::kText, DataType::kDateTime, DataType::kCurrency,
                 DataType::kNumber, DataType::kLocation, DataType::kUrl}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool filterable(DataType t) {
  return t == DataType::kText || t == DataType::kCurrency ||
         t == DataType::kNumber || t == DataType::kDateTime;
}

std::string_view to_string(RequestStatus s) {
  switch (s) {
    case RequestStatus::kPending: return "pending";
    case RequestStatus::kApproved: return "approved";
    case RequestStatus::kRejected: return "rejected";
  }
  return "pending";
}

std::optional<RequestStatus> request_status_from_string(std::string_view s) {
  for (auto st : {RequestStatus::kPending, RequestStatus::kApproved,
                  RequestStatus::kRejected}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

bool labels_equal(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) ==
           std::tolower(static_cast<unsigned char>(y));
  });
}

const FieldSpec* CategorySchema::find(std::string_view label) const {
  auto it = std::find_if(fields.begin(), fields.end(), [&](const FieldSpec& f) {
    return labels_equal(f.label, label);
  });
  return it == fields.end() ? nullptr : &*it;
}

std::vector<FieldSpec> derive_filter_spec(const CategorySchema& schema) {
  std::vector<FieldSpec> out;
  std::copy_if(schema.fields.begin(), schema.fields.end(), std::back_inserter(out),
               [](const FieldSpec& f) { return f.visible_in_search_filter; });
  return out;
}

std::pair<CategorySchema, FieldRequest> apply_field_request(
    const CategorySchema& schema, const FieldRequest& request, Decision decision) {
  if (request.category != schema.category) {
    throw Error(ErrorCode::kCategoryMismatch,
                "request targets category '" + request.category +
                    "' but schema is '" + schema.category + "'");
  }
  if (request.status != RequestStatus::kPending) {
    throw Error(ErrorCode::kRequestNotPending,
                "request is already " + std::string(to_string(request.status)));
  }

  FieldRequest decided = request;
  if (decision == Decision::kReject) {
    decided.status = RequestStatus::kRejected;
    return {schema, decided};
  }

  if (schema.find(request.label) != nullptr) {
    throw Error(ErrorCode::kDuplicateFieldLabel,
                "label '" + request.label + "' already exists in category '" +
                    schema.category + "'");
  }
  CategorySchema evolved = schema;
  evolved.fields.push_back(FieldSpec{.label = request.label,
                                     .input_type = InputType::kTextbox,
                                     .data_type = request.data_type,
                                     .visible_in_search_filter = false});
  evolved.version += 1;
  decided.status = RequestStatus::kApproved;
  return {std::move(evolved), decided};
}

CategorySchema make_pending_category(std::string category, std::string creator,
                                     std::string schema_id) {
  CategorySchema s;
  s.schema_id = std::move(schema_id);
  s.category = std::move(category);
  s.creator = std::move(creator);
  s.version = 0;
  s.fields.push_back(FieldSpec{.label = std::string(kTitleLabel),
                               .input_type = InputType::kTextbox,
                               .data_type = DataType::kText,
                               .visible_in_search_filter = true});
  return s;
}

void check_invariants(const CategorySchema& schema) {
  if (schema.fields.empty()) {
    throw Error(ErrorCode::kEmptySchema,
                "schema '" + schema.category + "' has no fields");
  }
  if (schema.version < 1) {
    throw Error(ErrorCode::kInvalidAttributeValue, "schema version must be >= 1");
  }
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    const auto& f = schema.fields[i];
    if (f.label.empty()) {
      throw Error(ErrorCode::kMalformedXml, "empty field label");
    }
    if (f.visible_in_search_filter && !filterable(f.data_type)) {
      throw Error(ErrorCode::kInvalidFilterField,
                  "field '" + f.label + "' of type " +
                      std::string(to_string(f.data_type)) +
                      " cannot be a search filter");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_equal(schema.fields[j].label, f.label)) {
        throw Error(ErrorCode::kDuplicateFieldLabel,
                    "duplicate field label '" + f.label + "'");
      }
    }
  }
}

}  // namespace serefind::schema
