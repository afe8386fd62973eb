#include "sketchql/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace sketchql {

std::string to_string(BaseType t) {
  switch (t) {
    case BaseType::Number: return "Number";
    case BaseType::Bool: return "Bool";
    case BaseType::String: return "String";
  }
  return "?";
}

std::string fold_case(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Value Value::make_number(double v, std::string raw_text) {
  Value out;
  out.type = BaseType::Number;
  out.num = v;
  out.raw = std::move(raw_text);
  return out;
}

Value Value::make_number(double v) {
  char buf[64];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  }
  return make_number(v, buf);
}

Value Value::make_bool(bool v) {
  Value out;
  out.type = BaseType::Bool;
  out.boolean = v;
  out.raw = v ? "true" : "false";
  return out;
}

Value Value::make_string(std::string s) {
  Value out;
  out.type = BaseType::String;
  out.raw = s;
  out.text = std::move(s);
  return out;
}

std::optional<Value> Value::parse_typed(const std::string& text, BaseType type) {
  switch (type) {
    case BaseType::Number: {
      const char* begin = text.c_str();
      const char* end = begin + text.size();
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
      return make_number(v, text);
    }
    case BaseType::Bool: {
      std::string f = fold_case(text);
      if (f == "true" || f == "1") return make_bool(true);
      if (f == "false" || f == "0") return make_bool(false);
      return std::nullopt;
    }
    case BaseType::String:
      return make_string(text);
  }
  return std::nullopt;
}

std::string Value::sql() const {
  switch (type) {
    case BaseType::Number: return raw;
    case BaseType::Bool: return boolean ? "TRUE" : "FALSE";
    case BaseType::String: {
      std::string out = "'";
      for (char c : text) {
        out += c;
        if (c == '\'') out += '\'';
      }
      out += "'";
      return out;
    }
  }
  return raw;
}

std::string Value::sketch_text() const {
  switch (type) {
    case BaseType::Number: return raw;
    case BaseType::Bool: return boolean ? "true" : "false";
    case BaseType::String: {
      std::string out = "\"";
      for (char c : text) {
        if (c == '"') out += '\\';
        out += c;
      }
      out += "\"";
      return out;
    }
  }
  return raw;
}

int compare_values(const Value& a, const Value& b) {
  switch (a.type) {
    case BaseType::Number: {
      if (a.num < b.num) return -1;
      if (a.num > b.num) return 1;
      return 0;
    }
    case BaseType::Bool: {
      int x = a.boolean ? 1 : 0;
      int y = b.boolean ? 1 : 0;
      return x - y;
    }
    case BaseType::String: {
      std::string x = fold_case(a.text);
      std::string y = fold_case(b.text);
      if (x < y) return -1;
      if (x > y) return 1;
      return 0;
    }
  }
  return 0;
}

bool values_equal(const Value& a, const Value& b) {
  if (a.type != b.type) return false;
  return compare_values(a, b) == 0;
}

}  // namespace sketchql
