#pragma once

#include <string>
#include <vector>

#include "sketchql/value.hpp"

namespace sketchql {

struct Column {
  std::string name;         // canonical name, globally unique in a catalog
  BaseType type = BaseType::String;
  std::string owner_table;  // empty for derived columns such as "count(x)"
};

// Ordered record type tau: the header shape of a relation.
struct RecordType {
  std::vector<Column> columns;

  const Column* find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }
  size_t size() const { return columns.size(); }

  // Set union. Entries with the same name and type collapse to one;
  // same name with a different type is a type error.
  RecordType union_with(const RecordType& other) const;
  bool disjoint_names(const RecordType& other) const;

  std::string to_string() const;
  bool operator==(const RecordType& other) const;
};

}  // namespace sketchql
