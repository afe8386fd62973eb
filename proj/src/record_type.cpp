#include "sketchql/record_type.hpp"

#include "sketchql/errors.hpp"

namespace sketchql {

const Column* RecordType::find(const std::string& name) const {
  for (const Column& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

RecordType RecordType::union_with(const RecordType& other) const {
  RecordType out = *this;
  for (const Column& c : other.columns) {
    if (const Column* existing = out.find(c.name)) {
      if (existing->type != c.type) {
        throw TypeError(TypeError::Kind::ConflictingColumn, c.name,
                        "column occurs with two different types in record union");
      }
      continue;
    }
    out.columns.push_back(c);
  }
  return out;
}

bool RecordType::disjoint_names(const RecordType& other) const {
  for (const Column& c : other.columns) {
    if (find(c.name)) return false;
  }
  return true;
}

std::string RecordType::to_string() const {
  std::string out = "{";
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ", ";
    out += "(" + columns[i].name + ": " + sketchql::to_string(columns[i].type) + ")";
  }
  out += "}";
  return out;
}

bool RecordType::operator==(const RecordType& other) const {
  if (columns.size() != other.columns.size()) return false;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name != other.columns[i].name) return false;
    if (columns[i].type != other.columns[i].type) return false;
  }
  return true;
}

}  // namespace sketchql
