#include "serefind/error.hpp"

namespace serefind {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedXml: return "MalformedXml";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kInvalidAttributeValue: return "InvalidAttributeValue";
    case ErrorCode::kDuplicateFieldLabel: return "DuplicateFieldLabel";
    case ErrorCode::kEmptySchema: return "EmptySchema";
    case ErrorCode::kUnknownDataType: return "UnknownDataType";
    case ErrorCode::kInvalidFilterField: return "InvalidFilterField";
    case ErrorCode::kCategoryMismatch: return "CategoryMismatch";
    case ErrorCode::kRequestNotPending: return "RequestNotPending";
    case ErrorCode::kSchemaNotFound: return "SchemaNotFound";
    case ErrorCode::kSchemaLoadFailed: return "SchemaLoadFailed";
    case ErrorCode::kInvalidEmail: return "InvalidEmail";
    case ErrorCode::kUnknownDomain: return "UnknownDomain";
    case ErrorCode::kNetworkConflict: return "NetworkConflict";
    case ErrorCode::kUsernameTaken: return "UsernameTaken";
    case ErrorCode::kInvalidUsername: return "InvalidUsername";
    case ErrorCode::kWeakPassword: return "WeakPassword";
    case ErrorCode::kEmailAlreadyRegistered: return "EmailAlreadyRegistered";
    case ErrorCode::kTokenExpired: return "TokenExpired";
    case ErrorCode::kTokenUnknown: return "TokenUnknown";
    case ErrorCode::kTokenAlreadyUsed: return "TokenAlreadyUsed";
    case ErrorCode::kInvalidCredentials: return "InvalidCredentials";
    case ErrorCode::kAccountInactive: return "AccountInactive";
    case ErrorCode::kDenied: return "Denied";
    case ErrorCode::kUnknownUsername: return "UnknownUsername";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kListingNotFound: return "ListingNotFound";
    case ErrorCode::kNotOwner: return "NotOwner";
    case ErrorCode::kInvalidTransition: return "InvalidTransition";
    case ErrorCode::kBuyerNeverEngaged: return "BuyerNeverEngaged";
    case ErrorCode::kAlreadySold: return "AlreadySold";
    case ErrorCode::kSelfSale: return "SelfSale";
    case ErrorCode::kInvalidFilter: return "InvalidFilter";
    case ErrorCode::kListingDeleted: return "ListingDeleted";
    case ErrorCode::kListingUnavailable: return "ListingUnavailable";
    case ErrorCode::kSelfMessage: return "SelfMessage";
    case ErrorCode::kEmptyBody: return "EmptyBody";
    case ErrorCode::kBodyTooLong: return "BodyTooLong";
    case ErrorCode::kThreadNotFound: return "ThreadNotFound";
    case ErrorCode::kNotParticipant: return "NotParticipant";
    case ErrorCode::kMessageNotFound: return "MessageNotFound";
    case ErrorCode::kOutboxUnwritable: return "OutboxUnwritable";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kPortUnavailable: return "PortUnavailable";
    case ErrorCode::kUnknownRequestId: return "UnknownRequestId";
    case ErrorCode::kAuthenticationRequired: return "AuthenticationRequired";
    case ErrorCode::kBadRequest: return "BadRequest";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kStorageError: return "StorageError";
  }
  return "Unknown";
}

}  // namespace serefind
