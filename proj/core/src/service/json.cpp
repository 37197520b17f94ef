#include "codec.hpp"

#include <cmath>

#include "serefind/market/marketplace.hpp"

namespace serefind::service::codec {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kBadRequest, msg); }

std::string str_field(const json& j, const char* key, bool required = false) {
  if (!j.contains(key) || j[key].is_null()) {
    if (required) bad(std::string("missing field '") + key + "'");
    return {};
  }
  if (!j[key].is_string()) bad(std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::set<std::string> string_set(const json& j, const char* key) {
  std::set<std::string> out;
  if (!j.contains(key) || j[key].is_null()) return out;
  if (!j[key].is_array()) bad(std::string("field '") + key + "' must be an array");
  for (const auto& v : j[key]) {
    if (!v.is_string()) bad(std::string("field '") + key + "' must hold strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

market::Visibility visibility_of(const json& j) {
  const auto raw = str_field(j, "visibility");
  if (raw.empty()) return market::Visibility::kNetwork;
  auto v = market::visibility_from_string(raw);
  if (!v) bad("visibility must be 'network' or 'public'");
  return *v;
}

}  // namespace

json geo_json(const GeoPoint& p) { return {{"lat", p.lat}, {"lon", p.lon}}; }

json value_json(const schema::FieldValue& v) {
  json out = {{"type", std::string(schema::to_string(schema::type_of(v)))},
              {"value", schema::to_canonical(v)}};
  if (auto n = schema::numeric_of(v)) out["numeric"] = *n;
  return out;
}

json values_json(const std::map<std::string, schema::FieldValue>& values) {
  json out = json::object();
  for (const auto& [label, v] : values) out[label] = value_json(v);
  return out;
}

json self_json(const identity::User& u) {
  json out = {{"user_id", u.user_id.value},   {"username", u.username},
              {"email", u.email},             {"network_id", u.network_id},
              {"active", u.active},           {"full_name", u.full_name},
              {"created_at", format_iso8601(u.created_at)}};
  out["home_location"] = u.home_location ? geo_json(*u.home_location) : json(nullptr);
  json prefs = {{"categories", u.preferences.categories}, {"networks", u.preferences.networks}};
  prefs["radius_km"] = u.preferences.radius_km ? json(*u.preferences.radius_km) : json(nullptr);
  out["preferences"] = prefs;
  return out;
}

json listing_json(const identity::RedactedListing& l) {
  json out = {{"redaction_level", std::string(identity::to_string(l.level))},
              {"listing_id", l.listing_id.value},
              {"category", l.category},
              {"subcategory", l.subcategory},
              {"title", l.title},
              {"created_at", format_iso8601(l.created_at)},
              {"values", values_json(l.values)}};
  if (l.description) out["description"] = *l.description;
  if (l.owner_username) out["owner_username"] = *l.owner_username;
  if (l.tags) out["tags"] = *l.tags;
  if (l.location) out["location"] = geo_json(*l.location);
  if (l.network_id) out["network_id"] = *l.network_id;
  if (l.visibility) out["visibility"] = std::string(market::to_string(*l.visibility));
  if (l.status) out["status"] = std::string(market::to_string(*l.status));
  if (l.updated_at) out["updated_at"] = format_iso8601(*l.updated_at);
  if (l.view_count) out["view_count"] = *l.view_count;
  return out;
}

json search_json(const SearchResponse& r) {
  json results = json::array();
  for (const auto& hit : r.results) {
    json terms = json::array();
    for (const auto& t : hit.rank.matched_terms) {
      terms.push_back({{"term", t.term}, {"weight", t.weight}, {"score", t.score},
                       {"expanded", t.expanded}});
    }
    results.push_back({{"listing", listing_json(hit.listing)},
                       {"score_total", hit.rank.score_total},
                       {"score_text", hit.rank.score_text},
                       {"score_location", hit.rank.score_location},
                       {"score_freshness", hit.rank.score_freshness},
                       {"matched_terms", terms}});
  }
  return {{"results", results}, {"total", r.total}, {"page", r.page}, {"page_size", r.page_size}};
}

json feed_json(const FeedResponse& r) {
  json listings = json::array();
  for (const auto& l : r.listings) listings.push_back(listing_json(l));
  return {{"listings", listings}, {"total", r.total}, {"page", r.page},
          {"page_size", r.page_size}};
}

json profile_json(const market::Profile& p) {
  json listings = json::array();
  for (const auto& e : p.listings) {
    json row = {{"listing_id", e.listing_id.value},
                {"title", e.title},
                {"category", e.category},
                {"status", std::string(market::to_string(e.status))},
                {"created_at", format_iso8601(e.created_at)}};
    if (e.view_count) row["view_count"] = *e.view_count;
    listings.push_back(row);
  }
  return {{"username", p.username}, {"listings", listings}};
}

json message_json(const messaging::Message& m) {
  return {{"message_id", m.message_id.value}, {"thread_id", m.thread_id.value},
          {"sender_id", m.sender_id.value},   {"body", m.body},
          {"sent_at", format_iso8601(m.sent_at)}, {"read", m.read_by_recipient}};
}

json folder_thread_json(const messaging::FolderThread& t) {
  json msgs = json::array();
  for (const auto& m : t.messages) msgs.push_back(message_json(m));
  return {{"thread_id", t.thread_id.value},
          {"listing_id", t.listing_id.value},
          {"subject", t.subject},
          {"counterpart_id", t.counterpart_id.value},
          {"messages", msgs}};
}

json edge_json(const market::GraphEdge& e) {
  return {{"user_id", e.user_id.value},
          {"listing_id", e.listing_id.value},
          {"kind", std::string(market::to_string(e.kind))},
          {"message_count", e.message_count}};
}

json schema_json(const schema::CategorySchema& s) {
  json fields = json::array();
  for (const auto& f : s.fields) {
    fields.push_back({{"label", f.label},
                      {"input_type", std::string(schema::to_string(f.input_type))},
                      {"data_type", std::string(schema::to_string(f.data_type))},
                      {"visible_in_search_filter", f.visible_in_search_filter}});
  }
  return {{"schema_id", s.schema_id}, {"category", s.category}, {"creator", s.creator},
          {"version", s.version},     {"fields", fields}};
}

json request_json(const StoredRequest& r) {
  json out = {{"request_id", r.request_id},
              {"category", r.request.category},
              {"label", r.request.label},
              {"data_type", std::string(schema::to_string(r.request.data_type))},
              {"creator", r.request.creator},
              {"status", std::string(schema::to_string(r.request.status))},
              {"created_at", format_iso8601(r.created_at)}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  return out;
}

json error_json(const Error& e) {
  json out = {{"error_code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const market::ValidationError*>(&e)) {
    json fields = json::array();
    for (const auto& c : v->report().checks) {
      if (c.status == schema::FieldStatus::kOk) continue;
      fields.push_back({{"label", c.label},
                        {"status", std::string(schema::to_string(c.status))},
                        {"message", c.message}});
    }
    out["details"] = {{"fields", fields}};
  }
  return out;
}

std::map<std::string, std::string> raw_values(const json& j) {
  std::map<std::string, std::string> out;
  if (j.is_null()) return out;
  if (!j.is_object()) bad("'values' must be an object");
  for (const auto& [label, v] : j.items()) {
    if (v.is_string()) {
      out[label] = v.get<std::string>();
    } else if (v.is_number() || v.is_boolean()) {
      out[label] = v.dump();
    } else if (v.is_object() && v.contains("lat") && v.contains("lon")) {
      out[label] = v["lat"].dump() + "," + v["lon"].dump();
    } else {
      bad("value of '" + label + "' must be a string or number");
    }
  }
  return out;
}

std::optional<GeoPoint> geo_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_object() || !j.contains("lat") || !j.contains("lon") || !j["lat"].is_number() ||
      !j["lon"].is_number()) {
    bad("location must be {\"lat\": number, \"lon\": number}");
  }
  return GeoPoint{j["lat"].get<double>(), j["lon"].get<double>()};
}

market::ListingDraft draft_from(const json& j) {
  if (!j.is_object()) bad("listing body must be a JSON object");
  market::ListingDraft d;
  d.category = str_field(j, "category", true);
  d.subcategory = str_field(j, "subcategory");
  d.description = str_field(j, "description");
  d.tags = string_set(j, "tags");
  d.values = raw_values(j.value("values", json(nullptr)));
  d.visibility = visibility_of(j);
  d.location = geo_from(j.value("location", json(nullptr)));
  return d;
}

market::ListingAction action_from(const json& j) {
  if (!j.is_object()) bad("body must be a JSON object");
  const auto action = str_field(j, "action", true);
  if (action == "hide") return market::HideListing{};
  if (action == "delete") return market::DeleteListing{};
  if (action == "undo") return market::UndoListing{};
  if (action != "edit") bad("action must be edit, hide, delete or undo");
  market::EditListing e;
  e.values = raw_values(j.value("values", json(nullptr)));
  if (j.contains("description")) e.description = str_field(j, "description");
  if (j.contains("subcategory")) e.subcategory = str_field(j, "subcategory");
  if (j.contains("tags")) e.tags = string_set(j, "tags");
  if (j.contains("visibility")) e.visibility = visibility_of(j);
  return e;
}

identity::SettingsUpdate settings_from(const json& j) {
  if (!j.is_object()) bad("settings body must be a JSON object");
  identity::SettingsUpdate u;
  if (j.contains("full_name")) u.full_name = str_field(j, "full_name");
  if (j.contains("home_location")) u.home_location = geo_from(j["home_location"]);
  if (j.contains("preferences")) {
    const auto& p = j["preferences"];
    if (!p.is_object()) bad("preferences must be an object");
    identity::Preferences prefs;
    prefs.categories = string_set(p, "categories");
    prefs.networks = string_set(p, "networks");
    if (p.contains("radius_km") && !p["radius_km"].is_null()) {
      if (!p["radius_km"].is_number()) bad("radius_km must be a number");
      prefs.radius_km = p["radius_km"].get<double>();
    }
    u.preferences = prefs;
  }
  return u;
}

schema::FieldRequest field_request_from(const json& j) {
  if (!j.is_object()) bad("request body must be a JSON object");
  schema::FieldRequest r;
  r.category = str_field(j, "category", true);
  r.label = str_field(j, "label", true);
  const auto type = str_field(j, "data_type");
  if (!type.empty()) {
    auto t = schema::data_type_from_string(type);
    if (!t) throw Error(ErrorCode::kUnknownDataType, "unknown data type '" + type + "'");
    r.data_type = *t;
  }
  return r;
}

}  // namespace serefind::service::codec
