#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "serefind/schema/schema.hpp"

namespace serefind::schema {

/// Approved category schemas, keyed by category name.
class SchemaRegistry {
 public:
  SchemaRegistry() = default;

  /// Loads every `*.xml` file in `dir`. The file stem must equal the
  /// category attribute. Throws kSchemaLoadFailed naming the file.
  static SchemaRegistry load_directory(const std::filesystem::path& dir);

  /// Adds or replaces a schema. A replacement must not lower the version.
  /// Every schema must carry a text Title field.
  void put(CategorySchema schema);

  const CategorySchema* find(std::string_view category) const;
  const CategorySchema& get(std::string_view category) const;  // kSchemaNotFound
  std::vector<std::string> categories() const;
  std::size_t size() const { return schemas_.size(); }

 private:
  std::map<std::string, CategorySchema, std::less<>> schemas_;
};

/// Atomically writes `schema` to `dir/<category>.xml`.
void write_schema_file(const std::filesystem::path& dir, const CategorySchema& schema);

}  // namespace serefind::schema
