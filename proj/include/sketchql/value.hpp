#pragma once

#include <optional>
#include <string>

namespace sketchql {

enum class BaseType { Number, Bool, String };

std::string to_string(BaseType t);

// A typed literal. The raw source text is preserved so that values
// round-trip through sketch text and SQL unchanged ("2010" never becomes
// "2010.0").
struct Value {
  BaseType type = BaseType::String;
  double num = 0.0;
  bool boolean = false;
  std::string text;  // String payload, original casing
  std::string raw;   // source spelling

  static Value make_number(double v, std::string raw_text);
  static Value make_number(double v);
  static Value make_bool(bool v);
  static Value make_string(std::string s);

  // Parses `text` as the given type; nullopt when it does not conform.
  static std::optional<Value> parse_typed(const std::string& text, BaseType type);

  bool is_number() const { return type == BaseType::Number; }
  bool is_string() const { return type == BaseType::String; }

  // SQL literal rendering: single-quoted strings with doubled quotes,
  // numbers as their raw spelling, TRUE/FALSE for booleans.
  std::string sql() const;
  // Display form used in sketch text: double-quoted strings, bare numbers.
  std::string sketch_text() const;
};

// ASCII-lowercased copy; string comparisons in the engine are case-insensitive.
std::string fold_case(const std::string& s);

// Three-way comparison of same-typed values. Strings compare case-insensitively,
// false < true for booleans.
int compare_values(const Value& a, const Value& b);
bool values_equal(const Value& a, const Value& b);

}  // namespace sketchql
