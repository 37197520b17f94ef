#include "serefind/schema/xml.hpp"

#include <expat.h>

#include <memory>
#include <vector>

#include "serefind/error.hpp"

namespace serefind::schema {

namespace {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // concatenated direct character data
  std::vector<Element> children;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

class DomBuilder {
 public:
  Element parse(std::string_view xml) {
    std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) throw Error(ErrorCode::kMalformedXml, "cannot allocate XML parser");
    XML_SetUserData(parser.get(), this);
    XML_SetElementHandler(parser.get(), &DomBuilder::on_start, &DomBuilder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &DomBuilder::on_text);
    XML_SetStartDoctypeDeclHandler(parser.get(), &DomBuilder::on_doctype);
    parser_ = parser.get();

    const auto status =
        XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
    if (!error_.empty()) throw Error(ErrorCode::kMalformedXml, error_);
    if (status != XML_STATUS_OK) {
      throw Error(ErrorCode::kMalformedXml,
                  std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) +
                      " at line " +
                      std::to_string(XML_GetCurrentLineNumber(parser.get())));
    }
    return std::move(root_);
  }

 private:
  static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<DomBuilder*>(self_ptr);
    Element e;
    e.name = name;
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      e.attributes.emplace_back(attrs[i], attrs[i + 1]);
    }
    if (self->stack_.empty()) {
      self->root_ = std::move(e);
      self->stack_.push_back(&self->root_);
    } else {
      auto& kids = self->stack_.back()->children;
      kids.push_back(std::move(e));
      self->stack_.push_back(&kids.back());
    }
  }

  static void on_end(void* self_ptr, const XML_Char*) {
    static_cast<DomBuilder*>(self_ptr)->stack_.pop_back();
  }

  static void on_text(void* self_ptr, const XML_Char* s, int len) {
    auto* self = static_cast<DomBuilder*>(self_ptr);
    if (!self->stack_.empty()) self->stack_.back()->text.append(s, len);
  }

  static void on_doctype(void* self_ptr, const XML_Char*, const XML_Char*,
                         const XML_Char*, int) {
    auto* self = static_cast<DomBuilder*>(self_ptr);
    self->error_ = "DOCTYPE declarations are not allowed";
    XML_StopParser(self->parser_, XML_FALSE);
  }

  XML_Parser parser_ = nullptr;
  Element root_;
  std::vector<Element*> stack_;
  std::string error_;
};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

void require_no_children(const Element& e, ParseMode mode) {
  if (mode == ParseMode::kStrict && !e.children.empty()) {
    throw Error(ErrorCode::kUnknownElement, "element <" + e.children.front().name +
                                                "> is not allowed inside <" +
                                                e.name + ">");
  }
}

DataType parse_data_type(const std::string& v) {
  auto t = data_type_from_string(v);
  if (!t) throw Error(ErrorCode::kUnknownDataType, "unknown data-type '" + v + "'");
  return *t;
}

bool parse_bool(const std::string& name, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorCode::kInvalidAttributeValue,
              "attribute " + name + " must be true or false, got '" + v + "'");
}

void unknown_attribute(const Element& e, const std::string& name, ParseMode mode) {
  if (mode == ParseMode::kStrict) {
    throw Error(ErrorCode::kUnknownAttribute,
                "unknown attribute '" + name + "' on <" + e.name + ">");
  }
}

std::string required_label(const Element& e) {
  std::string label(trim(e.text));
  if (label.empty()) {
    throw Error(ErrorCode::kMalformedXml, "<" + e.name + "> has an empty label");
  }
  return label;
}

bool valid_category_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-')) {
      return false;
    }
  }
  return true;
}

FieldSpec parse_field(const Element& e, ParseMode mode) {
  require_no_children(e, mode);
  FieldSpec f;
  for (const auto& [name, value] : e.attributes) {
    if (name == "input-type") {
      auto t = input_type_from_string(value);
      if (!t) {
        throw Error(ErrorCode::kInvalidAttributeValue,
                    "unknown input-type '" + value + "'");
      }
      f.input_type = *t;
    } else if (name == "data-type") {
      f.data_type = parse_data_type(value);
    } else if (name == "visibility-in-search-filter") {
      f.visible_in_search_filter = parse_bool(name, value);
    } else {
      unknown_attribute(e, name, mode);
    }
  }
  f.label = required_label(e);
  return f;
}

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
}

void attribute(std::string& out, std::string_view name, std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  escape_into(out, value);
  out += '"';
}

}  // namespace

CategorySchema parse_schema(std::string_view xml, ParseMode mode) {
  const Element root = DomBuilder{}.parse(xml);
  if (root.name != "schema") {
    throw Error(ErrorCode::kMalformedXml,
                "root element must be <schema>, got <" + root.name + ">");
  }

  CategorySchema schema;
  bool has_id = false, has_category = false, has_creator = false;
  for (const auto& [name, value] : root.attributes) {
    if (name == "id") {
      schema.schema_id = value;
      has_id = true;
    } else if (name == "category") {
      if (!valid_category_name(value)) {
        throw Error(ErrorCode::kInvalidAttributeValue,
                    "category must be a lowercase name, got '" + value + "'");
      }
      schema.category = value;
      has_category = true;
    } else if (name == "creator") {
      schema.creator = value;
      has_creator = true;
    } else if (name == "version") {
      try {
        std::size_t used = 0;
        schema.version = std::stoi(value, &used);
        if (used != value.size() || schema.version < 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidAttributeValue,
                    "version must be an integer >= 1, got '" + value + "'");
      }
    } else {
      unknown_attribute(root, name, mode);
    }
  }
  if (!has_id || !has_category || !has_creator) {
    throw Error(ErrorCode::kMalformedXml,
                "<schema> requires id, category and creator attributes");
  }
  if (mode == ParseMode::kStrict && !trim(root.text).empty()) {
    throw Error(ErrorCode::kMalformedXml, "unexpected text inside <schema>");
  }

  for (const auto& child : root.children) {
    if (child.name != "field") {
      if (mode == ParseMode::kStrict) {
        throw Error(ErrorCode::kUnknownElement,
                    "element <" + child.name + "> is not allowed inside <schema>");
      }
      continue;
    }
    schema.fields.push_back(parse_field(child, mode));
  }
  if (schema.fields.empty()) {
    throw Error(ErrorCode::kEmptySchema,
                "schema '" + schema.category + "' has no <field> elements");
  }
  check_invariants(schema);
  return schema;
}

std::string serialize_schema(const CategorySchema& schema) {
  std::string out = "<schema";
  attribute(out, "id", schema.schema_id);
  attribute(out, "category", schema.category);
  attribute(out, "creator", schema.creator);
  if (schema.version != 1) attribute(out, "version", std::to_string(schema.version));
  out += ">\n";
  for (const auto& f : schema.fields) {
    out += "  <field";
    if (f.input_type != InputType::kTextbox) {
      attribute(out, "input-type", to_string(f.input_type));
    }
    if (f.data_type != DataType::kText) {
      attribute(out, "data-type", to_string(f.data_type));
    }
    if (f.visible_in_search_filter) {
      attribute(out, "visibility-in-search-filter", "true");
    }
    out += '>';
    escape_into(out, f.label);
    out += "</field>\n";
  }
  out += "</schema>\n";
  return out;
}

FieldRequest parse_field_request(std::string_view xml, ParseMode mode) {
  const Element root = DomBuilder{}.parse(xml);
  if (root.name != "requestField") {
    throw Error(ErrorCode::kMalformedXml,
                "root element must be <requestField>, got <" + root.name + ">");
  }
  require_no_children(root, mode);
  FieldRequest req;
  bool has_category = false, has_creator = false;
  for (const auto& [name, value] : root.attributes) {
    if (name == "category") {
      if (!valid_category_name(value)) {
        throw Error(ErrorCode::kInvalidAttributeValue,
                    "category must be a lowercase name, got '" + value + "'");
      }
      req.category = value;
      has_category = true;
    } else if (name == "data-type") {
      req.data_type = parse_data_type(value);
    } else if (name == "creator") {
      req.creator = value;
      has_creator = true;
    } else {
      unknown_attribute(root, name, mode);
    }
  }
  if (!has_category || !has_creator) {
    throw Error(ErrorCode::kMalformedXml,
                "<requestField> requires category and creator attributes");
  }
  req.label = required_label(root);
  req.status = RequestStatus::kPending;
  return req;
}

std::string serialize_field_request(const FieldRequest& request) {
  std::string out = "<requestField";
  attribute(out, "category", request.category);
  if (request.data_type != DataType::kText) {
    attribute(out, "data-type", to_string(request.data_type));
  }
  attribute(out, "creator", request.creator);
  out += '>';
  escape_into(out, request.label);
  out += "</requestField>\n";
  return out;
}

}  // namespace serefind::schema
