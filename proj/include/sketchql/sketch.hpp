#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sketchql/algebra.hpp"
#include "sketchql/errors.hpp"
#include "sketchql/value.hpp"

namespace sketchql {

// Natural-language hint attached to a hole. Matching is done on the folded
// form; the original casing is kept for display.
struct Hint {
  std::string display;
  std::string folded;

  Hint() = default;
  explicit Hint(const std::string& text);
  bool empty() const { return folded.empty(); }
  bool operator==(const Hint& other) const { return display == other.display; }
};

struct SketchRel;
struct SketchSpec;
using RelPtr = std::shared_ptr<const SketchRel>;
using SpecPtr = std::shared_ptr<const SketchSpec>;

// Any sketch subterm: a relation or a specifier.
using SketchNode = std::variant<RelPtr, SpecPtr>;

// Specifiers: column lists, aggregates, group-bys, predicates, and the
// operands they are built from.
struct SketchSpec {
  enum class Kind { ColHole, AggHole, GroupHole, ColList, PredAtom, And, Or, Not, Literal };
  Kind kind = Kind::ColHole;
  Hint hint;                 // ColHole
  AggFunc fn = AggFunc::Count;  // AggHole
  SpecPtr a, b;              // children; see factory functions
  CompareOp op = CompareOp::Eq;  // PredAtom
  SpecPtr rhs_spec;          // PredAtom rhs when column hole or literal
  RelPtr rhs_rel;            // PredAtom rhs when subquery
  Value value;               // Literal

  static SpecPtr col_hole(Hint h);
  static SpecPtr agg_hole(AggFunc f, SpecPtr col);
  static SpecPtr group_hole(SpecPtr agg, SpecPtr key);
  static SpecPtr col_list(SpecPtr a, SpecPtr b);
  static SpecPtr atom(SpecPtr lhs, CompareOp op, SpecPtr rhs);
  static SpecPtr atom_rel(SpecPtr lhs, CompareOp op, RelPtr rhs);
  static SpecPtr conj(SpecPtr a, SpecPtr b);
  static SpecPtr disj(SpecPtr a, SpecPtr b);
  static SpecPtr negate(SpecPtr a);
  static SpecPtr literal(Value v);
};

// Relations: table holes composed by projection, selection, and joins whose
// join columns are themselves holes.
struct SketchRel {
  enum class Kind { TableHole, Project, Select, Join };
  Kind kind = Kind::TableHole;
  Hint hint;             // TableHole
  SpecPtr spec;          // Project: kappa, Select: psi
  RelPtr child;          // Project/Select
  RelPtr left, right;    // Join
  SpecPtr left_hole, right_hole;  // Join column holes (ColHole specs)

  static RelPtr table_hole(Hint h);
  static RelPtr project(SpecPtr spec, RelPtr child);
  static RelPtr select(SpecPtr spec, RelPtr child);
  static RelPtr join(RelPtr left, SpecPtr h1, SpecPtr h2, RelPtr right);
};

// Textual sketch format:
//   SELECT <speclist> FROM <rel> [WHERE <pred>]
// with holes ? / ?[hint] and ?? / ??[hint], aggregates f(?), group-by
// f(?) BY ?, joins <rel> JOIN <rel> ON ? = ?, double-quoted strings and
// bare numbers.
RelPtr parse_sketch(const std::string& text);
std::string print_sketch(const RelPtr& sketch);
std::string print_spec(const SpecPtr& spec);

bool equal_rel(const RelPtr& a, const RelPtr& b);
bool equal_spec(const SpecPtr& a, const SpecPtr& b);
bool equal_node(const SketchNode& a, const SketchNode& b);

// Structural decompositions used by fault localization: the (child relation,
// specifier) pairs of a relation and the immediate sub-specifiers of a
// specifier. Leaves decompose to nothing.
std::vector<std::pair<RelPtr, SketchNode>> sub_relations(const RelPtr& rel);
std::vector<SketchNode> sub_specifiers(const SpecPtr& spec);

// A path of child indices identifying a subterm. Child numbering:
//   Project/Select: 0 = specifier, 1 = child relation
//   Join: 0 = left, 1 = left hole, 2 = right hole, 3 = right
//   AggHole: 0 = column hole; GroupHole: 0 = aggregate, 1 = key
//   ColList/And/Or: 0, 1; Not: 0; PredAtom: 0 = lhs hole, 1 = rhs
using SketchPath = std::vector<int>;

std::string path_to_string(const SketchPath& path);
SketchNode resolve_path(const RelPtr& root, const SketchPath& path);
// Returns a new sketch with the subterm at `path` replaced. The replacement
// must be the same flavor (relation/specifier) as the slot.
RelPtr replace_path(const RelPtr& root, const SketchPath& path, const SketchNode& replacement);

}  // namespace sketchql
