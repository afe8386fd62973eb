#pragma once

#include <stdexcept>

namespace sketchql {

// All numeric knobs in one place. Defaults reproduce the reference settings:
// top 5 sketches, at most 5 repairs, gamma = 0.35, rho = 0.45.
struct Config {
  int top_sketches = 5;   // k
  int max_repairs = 5;    // n
  int max_results = 5;    // m
  double gamma = 0.35;    // accept threshold
  double rho = 0.45;      // fault threshold
  // Score for predicates with no content witness. Kept below the level
  // where one fold against a neutral hole still clears prune_threshold,
  // so unsatisfiable atoms are pruned rather than papered over.
  double epsilon = 0.05;
  double epsilon_join = 0.1;
  double delta = 0.6;            // AddFunc keyword similarity threshold
  double neutral_score = 0.5;    // s0 for hintless holes
  double prune_threshold = 0.2;
  size_t candidate_cap = 50;     // per-hole candidate list bound

  bool no_data = false;    // ablation: ignore database contents in scores
  bool no_type = false;    // ablation: drop type guards during completion
  bool no_repair = false;  // ablation: skip fault localization and repair

  enum class JoinScore { Fk, Jaccard };
  JoinScore join_score = JoinScore::Fk;

  bool table_context_bonus = true;  // column hints also match the owning table

  int threads = 0;  // 0 = hardware concurrency; output is independent of this

  void validate() const {
    if (top_sketches < 1 || max_repairs < 1 || max_results < 1) {
      throw std::invalid_argument("k, n, m must all be >= 1");
    }
    if (!(gamma > 0.0 && gamma < 1.0) || !(rho > 0.0 && rho < 1.0)) {
      throw std::invalid_argument("gamma and rho must lie in (0,1)");
    }
    if (!(prune_threshold > 0.0 && prune_threshold < rho)) {
      throw std::invalid_argument("prune threshold must satisfy 0 < prune < rho");
    }
    if (epsilon <= 0.0 || epsilon >= 1.0 || epsilon_join <= 0.0 || epsilon_join >= 1.0) {
      throw std::invalid_argument("epsilon values must lie in (0,1)");
    }
  }
};

}  // namespace sketchql
