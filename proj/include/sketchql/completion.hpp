#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "sketchql/algebra.hpp"
#include "sketchql/catalog.hpp"
#include "sketchql/config.hpp"
#include "sketchql/similarity.hpp"
#include "sketchql/sketch.hpp"

namespace sketchql {

// n-ary geometric mean; the score-combination operator. Empty input is
// rejected. Scores compose by folding pairwise left to right, so a term's
// stored factor list reproduces its score through fold_scores.
double combine(std::span<const double> scores);
double combine2(double a, double b);
double fold_scores(std::span<const double> factors);

// Content-based confidence for an atomic predicate: 1-eps when some stored
// value in `column` can satisfy it, eps otherwise. Scalar subqueries are
// evaluated first; column-column atoms probe the two content indexes.
double p_pred(const std::string& column, CompareOp op, const Expr& expr, const Catalog& catalog,
              const Config& config);

// Join-likelihood: 1-eps_join for foreign-key pairs, eps_join otherwise
// (or content Jaccard overlap in the ablation mode).
double p_join(const std::string& c1, const std::string& c2, const Catalog& catalog,
              const Config& config);

// A completed relation: a well-typed term with its record type, confidence
// score, the factors the score folds from, and its rendered SQL.
struct ScoredCandidate {
  TermPtr term;
  RecordType type;
  double score = 0.0;
  std::vector<double> factors;
  std::string sql;
};

// A completed specifier fragment.
struct SpecCandidate {
  enum class Payload { Column, Items, Pred, Expr };
  Payload payload = Payload::Column;
  Column column;                // Payload::Column
  std::vector<SpecItem> items;  // Payload::Items
  PredPtr pred;                 // Payload::Pred
  Expr expr;                    // Payload::Expr (predicate right-hand sides)
  RecordType type;
  double score = 0.0;
  std::vector<double> factors;
  std::string key;  // printed form, used for deterministic ordering
};

// Memoizes instantiation results per subterm (and parent type, for
// specifiers). Single-writer-wins; contents never differ from sequential
// execution because instantiation is deterministic.
class CompletionCache {
public:
  using RelResult = std::shared_ptr<const std::vector<ScoredCandidate>>;
  using SpecResult = std::shared_ptr<const std::vector<SpecCandidate>>;

  RelResult find_rel(const SketchRel* node) const;
  RelResult store_rel(const SketchRel* node, std::vector<ScoredCandidate> result);
  SpecResult find_spec(const SketchSpec* node, const std::string& tau_key) const;
  SpecResult store_spec(const SketchSpec* node, const std::string& tau_key,
                        std::vector<SpecCandidate> result);

private:
  mutable std::mutex mu_;
  std::map<const SketchRel*, RelResult> rels_;
  std::map<std::pair<const SketchSpec*, std::string>, SpecResult> specs_;
};

struct CompletionContext {
  const Catalog& catalog;
  const SimilarityProvider& sim;
  const Config& config;
  CompletionCache& cache;
  bool use_prune = true;
  bool cap_truncated = false;  // sticky: some candidate list hit the cap
};

// Fig.-style completion of relation sketches and specifiers. Candidates
// scoring below the prune threshold are dropped before parents consume
// them; output is sorted by score with a deterministic tie-break.
std::vector<ScoredCandidate> instantiate_rel(const RelPtr& sketch, CompletionContext& ctx);
std::vector<SpecCandidate> instantiate_spec(const SpecPtr& spec, const RecordType& tau,
                                            CompletionContext& ctx);

std::string record_type_key(const RecordType& tau);

// Hint score for one column: sim against the bare column name, optionally
// lifted by 0.9 * sim against the owning table.
double column_hint_score(const Hint& hint, const Column& column, const CompletionContext& ctx);

double max_score(const std::vector<ScoredCandidate>& candidates);

}  // namespace sketchql
