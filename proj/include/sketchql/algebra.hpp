#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sketchql/errors.hpp"
#include "sketchql/record_type.hpp"
#include "sketchql/value.hpp"

namespace sketchql {

class Catalog;

enum class AggFunc { Max, Min, Avg, Sum, Count };
enum class CompareOp { Le, Lt, Eq, Gt, Ge };

std::string to_string(AggFunc f);
std::string to_string(CompareOp op);
std::optional<AggFunc> agg_from_name(const std::string& name);

struct QueryTerm;
using TermPtr = std::shared_ptr<const QueryTerm>;

// One entry of a projection list: a plain column, an aggregate f(c),
// or a group-by g(f(c1), c2).
struct SpecItem {
  enum class Kind { Column, Aggregate, GroupBy };
  Kind kind = Kind::Column;
  std::string column;        // c (Column/Aggregate) or c1 (GroupBy)
  AggFunc fn = AggFunc::Count;
  std::string group_column;  // c2 (GroupBy only)

  static SpecItem plain(std::string c);
  static SpecItem aggregate(AggFunc f, std::string c);
  static SpecItem group_by(AggFunc f, std::string c1, std::string c2);
};

// Right-hand side of a comparison: literal, column, or scalar subquery.
struct Expr {
  enum class Kind { Literal, Column, Subquery };
  Kind kind = Kind::Literal;
  Value literal;
  std::string column;
  TermPtr subquery;

  static Expr lit(Value v);
  static Expr col(std::string c);
  static Expr sub(TermPtr t);
};

struct Predicate;
using PredPtr = std::shared_ptr<const Predicate>;

struct Predicate {
  enum class Kind { And, Or, Not, Atom };
  Kind kind = Kind::Atom;
  PredPtr lhs, rhs;  // And/Or children; Not uses lhs only
  std::string column;
  CompareOp op = CompareOp::Eq;
  Expr expr;

  static PredPtr conj(PredPtr a, PredPtr b);
  static PredPtr disj(PredPtr a, PredPtr b);
  static PredPtr negate(PredPtr a);
  static PredPtr atom(std::string column, CompareOp op, Expr e);
};

// A term of the extended relational algebra: base tables composed by
// projection, selection, and equi-joins.
struct QueryTerm {
  enum class Kind { BaseTable, Project, Select, Join };
  Kind kind = Kind::BaseTable;
  std::string table;
  std::vector<SpecItem> items;
  PredPtr predicate;
  TermPtr child;
  TermPtr left, right;
  std::string left_col, right_col;

  static TermPtr base(std::string table);
  static TermPtr project(std::vector<SpecItem> items, TermPtr child);
  static TermPtr select(PredPtr pred, TermPtr child);
  static TermPtr join(TermPtr left, std::string c1, std::string c2, TermPtr right);
};

// Compact algebra-style rendering used in error messages and explain output.
std::string term_to_string(const TermPtr& term);
std::string pred_to_string(const PredPtr& pred);

// Record type of a term per the typing rules; throws TypeError naming the
// offending subterm. Subqueries inside predicates must be scalar: a
// single-column aggregate projection without group-by.
RecordType type_of(const TermPtr& term, const Catalog& catalog);

// Deterministic SQL rendering. Precondition: term type-checks.
std::string emit_sql(const TermPtr& term, const Catalog& catalog);

using Cell = std::optional<Value>;  // absent = SQL NULL (aggregates over empty input)

struct Table {
  RecordType header;
  std::vector<std::vector<Cell>> rows;
};

// Multiset evaluation; the in-process oracle for tests.
// Precondition: term type-checks and catalog data is loaded.
Table evaluate(const TermPtr& term, const Catalog& catalog);

}  // namespace sketchql
