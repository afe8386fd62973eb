#pragma once

#include <map>
#include <string>
#include <vector>

#include "sketchql/errors.hpp"
#include "sketchql/sketch.hpp"

namespace sketchql {

// Token -> unit-normalized vector, all of one dimension.
class EmbeddingStore {
public:
  // Plain-text format: first line "V D", then V lines "token f1 ... fD".
  // Duplicate tokens: last entry wins (a warning is written to stderr).
  static EmbeddingStore load(const std::string& path);

  size_t dimension() const { return dim_; }
  size_t size() const { return vectors_.size(); }
  const std::vector<double>* vector_of(const std::string& token) const;
  bool contains(const std::string& token) const { return vectors_.count(token) > 0; }

private:
  size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

struct SimilarityOptions {
  double neutral_score = 0.5;  // s0, returned for hintless holes
};

// sim(hint, name) in [0,1]: embedding cosine mapped to (cos+1)/2 where both
// tokens are in the store, normalized Levenshtein otherwise; aggregated as
// mean over hint tokens of the max over name tokens.
class SimilarityProvider {
public:
  SimilarityProvider() = default;
  explicit SimilarityProvider(EmbeddingStore store, SimilarityOptions opts = {});
  explicit SimilarityProvider(SimilarityOptions opts);

  double sim(const Hint& hint, const std::string& name) const;
  double sim_text(const std::string& hint_text, const std::string& name) const;
  double neutral() const { return opts_.neutral_score; }
  bool has_embeddings() const { return store_.size() > 0; }

  // Identifier tokenization: split on non-alphanumerics and camelCase
  // boundaries, lowercase, singularize by stripping a final 's' when the
  // stem is in the embedding vocabulary.
  std::vector<std::string> tokenize(const std::string& text) const;

private:
  double token_sim(const std::string& a, const std::string& b) const;

  EmbeddingStore store_;
  SimilarityOptions opts_;
};

// Edit-distance similarity in [0,1]: 1 - lev(a,b)/max(|a|,|b|).
double levenshtein_similarity(const std::string& a, const std::string& b);

}  // namespace sketchql
