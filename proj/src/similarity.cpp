#include "sketchql/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sketchql {

EmbeddingStore EmbeddingStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(LoadError::Kind::BadFormat, "cannot open embedding file " + path);
  size_t count = 0, dim = 0;
  {
    std::string header;
    if (!std::getline(in, header)) {
      throw LoadError(LoadError::Kind::BadFormat, "embedding file is empty");
    }
    std::istringstream hs(header);
    if (!(hs >> count >> dim) || dim == 0) {
      throw LoadError(LoadError::Kind::BadFormat, "embedding header must be 'V D'");
    }
  }
  EmbeddingStore store;
  store.dim_ = dim;
  std::string line;
  size_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> vec;
    vec.reserve(dim);
    double x = 0.0;
    while (ls >> x) vec.push_back(x);
    if (vec.size() != dim) {
      throw LoadError(LoadError::Kind::BadFormat,
                      "dimension mismatch for token '" + token + "': expected " +
                          std::to_string(dim) + " floats, got " + std::to_string(vec.size()));
    }
    double norm = 0.0;
    for (double v : vec) {
      if (!std::isfinite(v)) {
        throw LoadError(LoadError::Kind::BadFormat, "bad float for token '" + token + "'");
      }
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm <= 0.0) {
      throw LoadError(LoadError::Kind::BadFormat, "zero vector for token '" + token + "'");
    }
    for (double& v : vec) v /= norm;
    if (store.vectors_.count(token)) {
      std::cerr << "warning: duplicate embedding token '" << token << "', last entry wins\n";
    }
    store.vectors_[token] = std::move(vec);
    ++seen;
  }
  if (seen != count) {
    std::cerr << "warning: embedding header declares " << count << " tokens, file has " << seen
              << "\n";
  }
  return store;
}

const std::vector<double>* EmbeddingStore::vector_of(const std::string& token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

double levenshtein_similarity(const std::string& a, const std::string& b) {
  if (a == b) return 1.0;
  size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) return 0.0;
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
    }
    std::swap(prev, cur);
  }
  double dist = static_cast<double>(prev[m]);
  return 1.0 - dist / static_cast<double>(std::max(n, m));
}

SimilarityProvider::SimilarityProvider(EmbeddingStore store, SimilarityOptions opts)
    : store_(std::move(store)), opts_(opts) {}

SimilarityProvider::SimilarityProvider(SimilarityOptions opts) : opts_(opts) {}

std::vector<std::string> SimilarityProvider::tokenize(const std::string& text) const {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    std::string folded = fold_case(cur);
    // naive singularization, only when the stem is a known embedding token
    if (folded.size() > 2 && folded.back() == 's' &&
        store_.contains(folded.substr(0, folded.size() - 1))) {
      folded = folded.substr(0, folded.size() - 1);
    }
    tokens.push_back(folded);
    cur.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    // camelCase boundary: lower/digit followed by upper
    if (!cur.empty() && std::isupper(static_cast<unsigned char>(c)) &&
        !std::isupper(static_cast<unsigned char>(cur.back()))) {
      flush();
    }
    cur += c;
  }
  flush();
  return tokens;
}

double SimilarityProvider::token_sim(const std::string& a, const std::string& b) const {
  if (a == b) return 1.0;
  const std::vector<double>* va = store_.vector_of(a);
  const std::vector<double>* vb = store_.vector_of(b);
  if (va && vb) {
    double dot = 0.0;
    for (size_t i = 0; i < va->size(); ++i) dot += (*va)[i] * (*vb)[i];
    dot = std::clamp(dot, -1.0, 1.0);
    return (dot + 1.0) / 2.0;
  }
  return levenshtein_similarity(a, b);
}

double SimilarityProvider::sim(const Hint& hint, const std::string& name) const {
  if (hint.empty()) return opts_.neutral_score;
  return sim_text(hint.folded, name);
}

double SimilarityProvider::sim_text(const std::string& hint_text, const std::string& name) const {
  std::vector<std::string> hint_tokens = tokenize(hint_text);
  std::vector<std::string> name_tokens = tokenize(name);
  if (hint_tokens.empty()) return opts_.neutral_score;
  if (name_tokens.empty()) return 0.0;
  double total = 0.0;
  for (const std::string& h : hint_tokens) {
    double best = 0.0;
    for (const std::string& n : name_tokens) best = std::max(best, token_sim(h, n));
    total += best;
  }
  double score = total / static_cast<double>(hint_tokens.size());
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace sketchql
