#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sketchql/completion.hpp"
#include "sketchql/sketch.hpp"

namespace sketchql {

// Rewrite tactics, in application priority order: value splitting and
// function insertion are more targeted than structure-growing joins.
enum class Tactic { AddPred, AddFunc, AddCol, AddJoin1, AddJoin2, AddJoin3 };

std::string to_string(Tactic t);

// Splits text at the first occurrence of a delimiter (space, apostrophe,
// hyphen); (text, "") when no delimiter occurs.
std::pair<std::string, std::string> split_value(const std::string& text);

// The faulty subterm found by localization: no completion of it (under any
// parent instantiation) clears rho, and some tactic can rewrite it.
struct Fault {
  SketchPath path;
  SketchNode subterm;
  double best_score = 0.0;
  // Whether the subterm sits in a projection-list position, where AddFunc
  // may legally rewrite a column hole into an aggregate.
  bool in_column_list = true;
};

// (path, tactic) pairs already applied on a sketch; a tactic never fires
// twice at the same path.
using RepairLineage = std::set<std::pair<std::string, Tactic>>;

// True iff at least one tactic's match predicate holds for the subterm.
bool can_repair(const SketchNode& node, const SimilarityProvider& sim, const Config& config,
                bool in_column_list = true);

// Tactics that match a subterm, in priority order.
std::vector<Tactic> matching_tactics(const SketchNode& node, const SimilarityProvider& sim,
                                     const Config& config, bool in_column_list);

struct RepairResult {
  SketchNode rewritten;
  Tactic tactic;
};

// Applies the highest-priority matching tactic not exhausted by lineage;
// nullopt when every match was already used at this path.
std::optional<RepairResult> apply_repair(const Fault& fault, const RepairLineage& lineage,
                                         const SimilarityProvider& sim, const Config& config);

// Post-order search for a smallest repairable subterm whose best
// instantiation score falls below rho. A specifier counts as faulty only
// when it is faulty under every instantiation of its parent relation.
std::optional<Fault> fault_localize(const RelPtr& sketch, CompletionContext& ctx);

// Specifier entry point; tau is the parent relation's record type.
std::optional<Fault> fault_localize_spec(const SpecPtr& spec, const RecordType& tau,
                                         CompletionContext& ctx);

}  // namespace sketchql
