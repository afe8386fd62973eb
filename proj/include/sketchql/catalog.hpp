#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sketchql/algebra.hpp"
#include "sketchql/errors.hpp"
#include "sketchql/record_type.hpp"
#include "sketchql/value.hpp"

namespace sketchql {

struct ForeignKey {
  std::string src_table, src_col;  // canonical column names
  std::string dst_table, dst_col;
};

// Per-column content index: sorted distinct values with counts, plus a
// case-folded set for String equality probes.
struct ContentIndex {
  BaseType type = BaseType::String;
  std::vector<Value> distinct;       // sorted ascending
  std::vector<int64_t> counts;       // aligned with distinct
  std::set<std::string> folded;      // String columns only
  int64_t total_rows = 0;

  bool satisfies(CompareOp op, const Value& v) const;
  const Value* min() const { return distinct.empty() ? nullptr : &distinct.front(); }
  const Value* max() const { return distinct.empty() ? nullptr : &distinct.back(); }
};

struct LoadOptions {
  // 0 = index full contents; otherwise reservoir-sample this many distinct
  // values per column (deterministic).
  size_t sample_limit = 0;
  uint64_t sample_seed = 1;
};

// The loaded environment: schema, foreign-key graph, data, and content
// indexes. Immutable after construction; all queries are read-only.
class Catalog {
public:
  // Schema descriptor (JSON) plus a directory of per-table CSV files.
  static Catalog load_csv(const std::string& schema_path, const std::string& data_dir,
                          const LoadOptions& opts = {});
  // Single-file SQLite database; schema and FKs come from its metadata.
  static Catalog load_sqlite(const std::string& db_path, const LoadOptions& opts = {});
  // In-memory construction for tests and generated fixtures.
  static Catalog from_tables(std::vector<std::pair<std::string, Table>> tables,
                             std::vector<ForeignKey> fks, const LoadOptions& opts = {});

  const std::vector<std::string>& tables() const { return table_order_; }
  bool has_table(const std::string& name) const;
  const RecordType& record_type(const std::string& table) const;
  const Table& data(const std::string& table) const;
  const std::vector<ForeignKey>& foreign_keys() const { return fks_; }
  const std::vector<std::vector<std::string>>& primary_keys() const { return pks_; }

  // True when the loader had to qualify column names to keep them
  // globally unique.
  bool qualified() const { return qualified_; }

  const Column* find_column(const std::string& canonical) const;
  const ContentIndex* contents(const std::string& canonical) const;

  // True iff some stored value in `column` satisfies `op` against `v`.
  // Type-incompatible probes are unsatisfiable, not errors.
  bool column_satisfies(const std::string& column, CompareOp op, const Value& v) const;
  // True iff an FK edge connects the two columns, in either direction.
  bool is_fk_pair(const std::string& c1, const std::string& c2) const;

  // |contents(c1) n contents(c2)| / |contents(c1) u contents(c2)|
  double content_jaccard(const std::string& c1, const std::string& c2) const;

private:
  void finalize(const LoadOptions& opts);

  std::vector<std::string> table_order_;
  std::map<std::string, RecordType> schemas_;
  std::map<std::string, Table> data_;
  std::vector<ForeignKey> fks_;
  std::vector<std::vector<std::string>> pks_;  // aligned with table_order_
  std::map<std::string, ContentIndex> index_;  // canonical column name
  std::map<std::string, Column> columns_;
  bool qualified_ = false;
};

}  // namespace sketchql
