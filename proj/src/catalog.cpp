#include "sketchql/catalog.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace sketchql {

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::MissingTable, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  size_t i = 0;
  auto end_field = [&] {
    row.push_back(field);
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(row);
    row.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      // swallowed; \n terminates the row
    } else if (c == '\n') {
      end_row();
    } else {
      field += c;
    }
    ++i;
  }
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

BaseType type_from_name(const std::string& name, const std::string& where) {
  std::string f = fold_case(name);
  if (f == "number") return BaseType::Number;
  if (f == "string") return BaseType::String;
  if (f == "bool") return BaseType::Bool;
  throw LoadError(LoadError::Kind::BadFormat, "unknown column type '" + name + "' in " + where);
}

BaseType type_from_sqlite_decl(const std::string& decl) {
  std::string f = fold_case(decl);
  if (f.find("int") != std::string::npos || f.find("real") != std::string::npos ||
      f.find("floa") != std::string::npos || f.find("doub") != std::string::npos ||
      f.find("num") != std::string::npos || f.find("dec") != std::string::npos) {
    return BaseType::Number;
  }
  if (f.find("bool") != std::string::npos) return BaseType::Bool;
  if (f.find("char") != std::string::npos || f.find("text") != std::string::npos ||
      f.find("clob") != std::string::npos || f.empty()) {
    return BaseType::String;
  }
  throw LoadError(LoadError::Kind::TypeMismatch, "unsupported SQLite column type " + decl);
}

}  // namespace

bool ContentIndex::satisfies(CompareOp op, const Value& v) const {
  if (v.type != type) return false;  // type-incompatible probe: unsatisfiable
  if (distinct.empty()) return false;
  if (op == CompareOp::Eq) {
    if (type == BaseType::String) return folded.count(fold_case(v.text)) > 0;
    auto it = std::lower_bound(distinct.begin(), distinct.end(), v,
                               [](const Value& a, const Value& b) {
                                 return compare_values(a, b) < 0;
                               });
    return it != distinct.end() && compare_values(*it, v) == 0;
  }
  // Ordering probes only need the column extremes.
  switch (op) {
    case CompareOp::Lt: return compare_values(*min(), v) < 0;
    case CompareOp::Le: return compare_values(*min(), v) <= 0;
    case CompareOp::Gt: return compare_values(*max(), v) > 0;
    case CompareOp::Ge: return compare_values(*max(), v) >= 0;
    case CompareOp::Eq: break;
  }
  return false;
}

bool Catalog::has_table(const std::string& name) const {
  return schemas_.count(name) > 0;
}

const RecordType& Catalog::record_type(const std::string& table) const {
  auto it = schemas_.find(table);
  if (it == schemas_.end()) {
    throw TypeError(TypeError::Kind::UnknownTable, table, "unknown table " + table);
  }
  return it->second;
}

const Table& Catalog::data(const std::string& table) const {
  auto it = data_.find(table);
  if (it == data_.end()) {
    throw TypeError(TypeError::Kind::UnknownTable, table, "unknown table " + table);
  }
  return it->second;
}

const Column* Catalog::find_column(const std::string& canonical) const {
  auto it = columns_.find(canonical);
  return it == columns_.end() ? nullptr : &it->second;
}

const ContentIndex* Catalog::contents(const std::string& canonical) const {
  auto it = index_.find(canonical);
  return it == index_.end() ? nullptr : &it->second;
}

bool Catalog::column_satisfies(const std::string& column, CompareOp op, const Value& v) const {
  const ContentIndex* idx = contents(column);
  if (!idx) return false;
  if (v.type != idx->type && idx->type == BaseType::Number && v.type == BaseType::String) {
    // A numeric-looking string probes a Number column as a number.
    if (auto parsed = Value::parse_typed(v.text, BaseType::Number)) {
      return idx->satisfies(op, *parsed);
    }
    return false;
  }
  return idx->satisfies(op, v);
}

bool Catalog::is_fk_pair(const std::string& c1, const std::string& c2) const {
  for (const ForeignKey& fk : fks_) {
    if (fk.src_col == c1 && fk.dst_col == c2) return true;
    if (fk.src_col == c2 && fk.dst_col == c1) return true;
  }
  return false;
}

double Catalog::content_jaccard(const std::string& c1, const std::string& c2) const {
  const ContentIndex* a = contents(c1);
  const ContentIndex* b = contents(c2);
  if (!a || !b || a->type != b->type) return 0.0;
  size_t inter = 0;
  size_t i = 0, j = 0;
  while (i < a->distinct.size() && j < b->distinct.size()) {
    int c = compare_values(a->distinct[i], b->distinct[j]);
    if (c == 0) {
      ++inter;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  size_t uni = a->distinct.size() + b->distinct.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

void Catalog::finalize(const LoadOptions& opts) {
  // Column names must be globally unique; qualify as Table.col when the raw
  // schema has collisions.
  std::map<std::string, int> name_count;
  for (const auto& t : table_order_) {
    for (const Column& c : schemas_[t].columns) ++name_count[c.name];
  }
  qualified_ = std::any_of(name_count.begin(), name_count.end(),
                           [](const auto& kv) { return kv.second > 1; });
  if (qualified_) {
    for (auto& [t, tau] : schemas_) {
      for (Column& c : tau.columns) c.name = t + "." + c.name;
      data_[t].header = tau;
    }
    for (ForeignKey& fk : fks_) {
      fk.src_col = fk.src_table + "." + fk.src_col;
      fk.dst_col = fk.dst_table + "." + fk.dst_col;
    }
  }

  for (const auto& t : table_order_) {
    const RecordType& tau = schemas_[t];
    for (const Column& c : tau.columns) {
      if (columns_.count(c.name)) {
        throw LoadError(LoadError::Kind::BadFormat, "duplicate column name " + c.name);
      }
      columns_[c.name] = c;
    }
  }

  for (const ForeignKey& fk : fks_) {
    const Column* src = find_column(fk.src_col);
    const Column* dst = find_column(fk.dst_col);
    if (!src || !dst || !has_table(fk.src_table) || !has_table(fk.dst_table)) {
      throw LoadError(LoadError::Kind::DanglingFk,
                      "foreign key " + fk.src_col + " -> " + fk.dst_col +
                          " references a missing table or column");
    }
    if (src->type != dst->type) {
      throw LoadError(LoadError::Kind::DanglingFk,
                      "foreign key " + fk.src_col + " -> " + fk.dst_col + " joins different types");
    }
  }

  // Content indexes over the loaded rows.
  for (const auto& t : table_order_) {
    const Table& table = data_[t];
    for (size_t col = 0; col < table.header.columns.size(); ++col) {
      const Column& c = table.header.columns[col];
      ContentIndex idx;
      idx.type = c.type;
      idx.total_rows = static_cast<int64_t>(table.rows.size());
      std::vector<Value> values;
      values.reserve(table.rows.size());
      for (const auto& row : table.rows) {
        if (!row[col]) {
          throw LoadError(LoadError::Kind::NullCell, "NULL cell in " + t + "." + c.name);
        }
        values.push_back(*row[col]);
      }
      std::sort(values.begin(), values.end(),
                [](const Value& a, const Value& b) { return compare_values(a, b) < 0; });
      for (const Value& v : values) {
        if (!idx.distinct.empty() && compare_values(idx.distinct.back(), v) == 0) {
          ++idx.counts.back();
        } else {
          idx.distinct.push_back(v);
          idx.counts.push_back(1);
        }
      }
      if (opts.sample_limit > 0 && idx.distinct.size() > opts.sample_limit) {
        std::mt19937_64 rng(opts.sample_seed);
        std::vector<size_t> pick(idx.distinct.size());
        for (size_t i = 0; i < pick.size(); ++i) pick[i] = i;
        std::shuffle(pick.begin(), pick.end(), rng);
        pick.resize(opts.sample_limit);
        std::sort(pick.begin(), pick.end());
        ContentIndex sampled;
        sampled.type = idx.type;
        sampled.total_rows = idx.total_rows;
        for (size_t i : pick) {
          sampled.distinct.push_back(idx.distinct[i]);
          sampled.counts.push_back(idx.counts[i]);
        }
        idx = std::move(sampled);
      }
      if (c.type == BaseType::String) {
        for (const Value& v : idx.distinct) idx.folded.insert(fold_case(v.text));
      }
      index_.emplace(c.name, std::move(idx));
    }
  }
}

Catalog Catalog::from_tables(std::vector<std::pair<std::string, Table>> tables,
                             std::vector<ForeignKey> fks, const LoadOptions& opts) {
  Catalog cat;
  for (auto& [name, table] : tables) {
    cat.table_order_.push_back(name);
    cat.schemas_[name] = table.header;
    cat.data_[name] = std::move(table);
    cat.pks_.push_back({});
  }
  cat.fks_ = std::move(fks);
  cat.finalize(opts);
  return cat;
}

Catalog Catalog::load_csv(const std::string& schema_path, const std::string& data_dir,
                          const LoadOptions& opts) {
  std::ifstream in(schema_path);
  if (!in) throw LoadError(LoadError::Kind::BadFormat, "cannot open schema " + schema_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw LoadError(LoadError::Kind::BadFormat, std::string("schema parse error: ") + e.what());
  }
  if (!doc.contains("tables") || !doc["tables"].is_array()) {
    throw LoadError(LoadError::Kind::BadFormat, "schema descriptor lacks a tables array");
  }

  Catalog cat;
  for (const auto& t : doc["tables"]) {
    std::string name = t.at("name").get<std::string>();
    RecordType tau;
    for (const auto& c : t.at("columns")) {
      Column col;
      col.name = c.at("name").get<std::string>();
      col.type = type_from_name(c.at("type").get<std::string>(), name);
      col.owner_table = name;
      if (tau.find(col.name)) {
        throw LoadError(LoadError::Kind::BadFormat,
                        "duplicate column " + col.name + " in table " + name);
      }
      tau.columns.push_back(col);
    }
    std::vector<std::string> pk;
    if (t.contains("primary_key")) {
      for (const auto& k : t["primary_key"]) pk.push_back(k.get<std::string>());
    }
    if (t.contains("foreign_keys")) {
      for (const auto& fk : t["foreign_keys"]) {
        ForeignKey edge;
        edge.src_table = name;
        edge.src_col = fk.at("column").get<std::string>();
        edge.dst_table = fk.at("references").at("table").get<std::string>();
        edge.dst_col = fk.at("references").at("column").get<std::string>();
        cat.fks_.push_back(edge);
      }
    }
    cat.table_order_.push_back(name);
    cat.schemas_[name] = tau;
    cat.pks_.push_back(pk);
  }

  for (const std::string& name : cat.table_order_) {
    std::filesystem::path path = std::filesystem::path(data_dir) / (name + ".csv");
    if (!std::filesystem::exists(path)) {
      throw LoadError(LoadError::Kind::MissingTable, "no CSV file for table " + name);
    }
    auto rows = parse_csv(path.string());
    const RecordType& tau = cat.schemas_[name];
    if (rows.empty()) {
      throw LoadError(LoadError::Kind::BadFormat, "empty CSV for table " + name);
    }
    if (rows[0].size() != tau.size()) {
      throw LoadError(LoadError::Kind::TypeMismatch,
                      "CSV header arity does not match schema for " + name);
    }
    for (size_t i = 0; i < tau.size(); ++i) {
      if (fold_case(rows[0][i]) != fold_case(tau.columns[i].name)) {
        throw LoadError(LoadError::Kind::TypeMismatch,
                        "CSV header mismatch in " + name + ": expected " + tau.columns[i].name +
                            ", got " + rows[0][i]);
      }
    }
    Table table;
    table.header = tau;
    for (size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != tau.size()) {
        throw LoadError(LoadError::Kind::TypeMismatch,
                        "row arity mismatch in " + name + " line " + std::to_string(r + 1));
      }
      std::vector<Cell> row;
      for (size_t i = 0; i < tau.size(); ++i) {
        if (rows[r][i].empty()) {
          throw LoadError(LoadError::Kind::NullCell,
                          "empty cell in " + name + "." + tau.columns[i].name + " line " +
                              std::to_string(r + 1));
        }
        auto v = Value::parse_typed(rows[r][i], tau.columns[i].type);
        if (!v) {
          throw LoadError(LoadError::Kind::TypeMismatch,
                          "cell '" + rows[r][i] + "' does not parse as " +
                              to_string(tau.columns[i].type) + " in " + name + "." +
                              tau.columns[i].name);
        }
        row.push_back(*v);
      }
      table.rows.push_back(std::move(row));
    }
    cat.data_[name] = std::move(table);
  }

  cat.finalize(opts);
  return cat;
}

Catalog Catalog::load_sqlite(const std::string& db_path, const LoadOptions& opts) {
  sqlite3* db = nullptr;
  if (sqlite3_open_v2(db_path.c_str(), &db, SQLITE_OPEN_READONLY, nullptr) != SQLITE_OK) {
    std::string msg = db ? sqlite3_errmsg(db) : "cannot open";
    sqlite3_close(db);
    throw LoadError(LoadError::Kind::BadFormat, "sqlite open failed: " + msg);
  }
  auto query = [&](const std::string& sql, auto&& on_row) {
    sqlite3_stmt* stmt = nullptr;
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK) {
      std::string msg = sqlite3_errmsg(db);
      sqlite3_close(db);
      throw LoadError(LoadError::Kind::BadFormat, "sqlite error: " + msg);
    }
    while (sqlite3_step(stmt) == SQLITE_ROW) on_row(stmt);
    sqlite3_finalize(stmt);
  };

  Catalog cat;
  std::vector<std::string> names;
  query("SELECT name FROM sqlite_master WHERE type='table' AND name NOT LIKE 'sqlite_%' ORDER BY name",
        [&](sqlite3_stmt* s) {
          names.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(s, 0)));
        });

  for (const std::string& name : names) {
    RecordType tau;
    query("PRAGMA table_info(\"" + name + "\")", [&](sqlite3_stmt* s) {
      Column col;
      col.name = reinterpret_cast<const char*>(sqlite3_column_text(s, 1));
      const unsigned char* decl = sqlite3_column_text(s, 2);
      col.type = type_from_sqlite_decl(decl ? reinterpret_cast<const char*>(decl) : "");
      col.owner_table = name;
      tau.columns.push_back(col);
    });
    query("PRAGMA foreign_key_list(\"" + name + "\")", [&](sqlite3_stmt* s) {
      ForeignKey fk;
      fk.src_table = name;
      fk.dst_table = reinterpret_cast<const char*>(sqlite3_column_text(s, 2));
      fk.src_col = reinterpret_cast<const char*>(sqlite3_column_text(s, 3));
      fk.dst_col = reinterpret_cast<const char*>(sqlite3_column_text(s, 4));
      cat.fks_.push_back(fk);
    });
    cat.table_order_.push_back(name);
    cat.schemas_[name] = tau;
    cat.pks_.push_back({});
  }

  for (const std::string& name : names) {
    const RecordType& tau = cat.schemas_[name];
    Table table;
    table.header = tau;
    query("SELECT * FROM \"" + name + "\"", [&](sqlite3_stmt* s) {
      std::vector<Cell> row;
      for (size_t i = 0; i < tau.size(); ++i) {
        int ctype = sqlite3_column_type(s, static_cast<int>(i));
        if (ctype == SQLITE_NULL) {
          sqlite3_close(db);
          throw LoadError(LoadError::Kind::NullCell,
                          "NULL cell in " + name + "." + tau.columns[i].name);
        }
        switch (tau.columns[i].type) {
          case BaseType::Number:
            row.push_back(Value::make_number(sqlite3_column_double(s, static_cast<int>(i))));
            break;
          case BaseType::Bool:
            row.push_back(Value::make_bool(sqlite3_column_int(s, static_cast<int>(i)) != 0));
            break;
          case BaseType::String:
            row.push_back(Value::make_string(
                reinterpret_cast<const char*>(sqlite3_column_text(s, static_cast<int>(i)))));
            break;
        }
      }
      table.rows.push_back(std::move(row));
    });
    cat.data_[name] = std::move(table);
  }
  sqlite3_close(db);

  cat.finalize(opts);
  return cat;
}

}  // namespace sketchql
