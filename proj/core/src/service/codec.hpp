#pragma once

// JSON wire format of the HTTP API. Private to the service library.

#include <json.hpp>

#include "serefind/error.hpp"
#include "serefind/service/app.hpp"

namespace serefind::service::codec {

using nlohmann::json;

json value_json(const schema::FieldValue& v);
json values_json(const std::map<std::string, schema::FieldValue>& values);
json geo_json(const GeoPoint& p);

json self_json(const identity::User& u);
json listing_json(const identity::RedactedListing& l);
json search_json(const SearchResponse& r);
json feed_json(const FeedResponse& r);
json profile_json(const market::Profile& p);
json message_json(const messaging::Message& m);
json folder_thread_json(const messaging::FolderThread& t);
json edge_json(const market::GraphEdge& e);
json schema_json(const schema::CategorySchema& s);
json request_json(const StoredRequest& r);
json error_json(const Error& e);

/// Raw value strings; JSON numbers are accepted and printed back.
std::map<std::string, std::string> raw_values(const json& j);
std::optional<GeoPoint> geo_from(const json& j);
market::ListingDraft draft_from(const json& j);
market::ListingAction action_from(const json& j);
identity::SettingsUpdate settings_from(const json& j);
schema::FieldRequest field_request_from(const json& j);

}  // namespace serefind::service::codec
