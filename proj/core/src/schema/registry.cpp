#include "serefind/schema/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "serefind/error.hpp"
#include "serefind/schema/xml.hpp"

namespace serefind::schema {

namespace fs = std::filesystem;

SchemaRegistry SchemaRegistry::load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kSchemaLoadFailed,
                dir.string() + ": schema directory does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  SchemaRegistry registry;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      auto schema = parse_schema(buf.str());
      if (schema.category != file.stem().string()) {
        throw Error(ErrorCode::kSchemaLoadFailed,
                    "category '" + schema.category + "' does not match file name");
      }
      if (registry.find(schema.category) != nullptr) {
        throw Error(ErrorCode::kSchemaLoadFailed,
                    "duplicate category '" + schema.category + "'");
      }
      registry.put(std::move(schema));
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaLoadFailed, file.string() + ": " +
                                                    std::string(to_string(e.code())) +
                                                    ": " + e.what());
    }
  }
  return registry;
}

void SchemaRegistry::put(CategorySchema schema) {
  check_invariants(schema);
  const auto* title = schema.find(kTitleLabel);
  if (title == nullptr || title->data_type != DataType::kText) {
    throw Error(ErrorCode::kSchemaLoadFailed,
                "category '" + schema.category + "' lacks a text Title field");
  }
  if (auto it = schemas_.find(schema.category); it != schemas_.end()) {
    if (schema.version < it->second.version) {
      throw Error(ErrorCode::kSchemaLoadFailed,
                  "category '" + schema.category + "' would move back to version " +
                      std::to_string(schema.version));
    }
    it->second = std::move(schema);
    return;
  }
  auto key = schema.category;
  schemas_.emplace(std::move(key), std::move(schema));
}

const CategorySchema* SchemaRegistry::find(std::string_view category) const {
  auto it = schemas_.find(category);
  return it == schemas_.end() ? nullptr : &it->second;
}

const CategorySchema& SchemaRegistry::get(std::string_view category) const {
  const auto* s = find(category);
  if (s == nullptr) {
    throw Error(ErrorCode::kSchemaNotFound,
                "no approved schema for category '" + std::string(category) + "'");
  }
  return *s;
}

std::vector<std::string> SchemaRegistry::categories() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : schemas_) out.push_back(name);
  return out;
}

void write_schema_file(const fs::path& dir, const CategorySchema& schema) {
  fs::create_directories(dir);
  const auto target = dir / (schema.category + ".xml");
  const auto tmp = dir / ("." + schema.category + ".xml.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << serialize_schema(schema);
    out.flush();
    if (!out) {
      throw Error(ErrorCode::kStorageError, "cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

}  // namespace serefind::schema
