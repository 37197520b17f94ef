#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace serefind {

/// Stable, machine-readable failure codes. The string form of each code is
/// part of the HTTP contract (`error_code` in JSON error bodies).
enum class ErrorCode {
  // schema-engine
  kMalformedXml,
  kUnknownElement,
  kUnknownAttribute,
  kInvalidAttributeValue,
  kDuplicateFieldLabel,
  kEmptySchema,
  kUnknownDataType,
  kInvalidFilterField,
  kCategoryMismatch,
  kRequestNotPending,
  kSchemaNotFound,
  kSchemaLoadFailed,
  // identity-network
  kInvalidEmail,
  kUnknownDomain,
  kNetworkConflict,
  kUsernameTaken,
  kInvalidUsername,
  kWeakPassword,
  kEmailAlreadyRegistered,
  kTokenExpired,
  kTokenUnknown,
  kTokenAlreadyUsed,
  kInvalidCredentials,
  kAccountInactive,
  kDenied,
  kUnknownUsername,
  // marketplace-core
  kValidationFailed,
  kListingNotFound,
  kNotOwner,
  kInvalidTransition,
  kBuyerNeverEngaged,
  kAlreadySold,
  kSelfSale,
  // search-rank
  kInvalidFilter,
  // messaging-notify
  kListingDeleted,
  kListingUnavailable,
  kSelfMessage,
  kEmptyBody,
  kBodyTooLong,
  kThreadNotFound,
  kNotParticipant,
  kMessageNotFound,
  kOutboxUnwritable,
  // service-api
  kConfigInvalid,
  kPortUnavailable,
  kUnknownRequestId,
  kAuthenticationRequired,
  kBadRequest,
  kNotFound,
  kStorageError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace serefind
