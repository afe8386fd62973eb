#include "sketchql/completion.hpp"

#include <algorithm>
#include <cmath>

namespace sketchql {

double combine(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("combine requires at least one score");
  double log_sum = 0.0;
  for (double s : scores) {
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("scores must lie in [0,1]");
    if (s == 0.0) return 0.0;
    log_sum += std::log(s);
  }
  return std::exp(log_sum / static_cast<double>(scores.size()));
}

double combine2(double a, double b) {
  double pair[2] = {a, b};
  return combine(pair);
}

double fold_scores(std::span<const double> factors) {
  if (factors.empty()) throw std::invalid_argument("no factors");
  double acc = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) acc = combine2(acc, factors[i]);
  return acc;
}

double p_pred(const std::string& column, CompareOp op, const Expr& expr, const Catalog& catalog,
              const Config& config) {
  if (config.no_data) return 1.0;
  bool witness = false;
  switch (expr.kind) {
    case Expr::Kind::Literal:
      witness = catalog.column_satisfies(column, op, expr.literal);
      break;
    case Expr::Kind::Subquery: {
      Table t = evaluate(expr.subquery, catalog);
      if (!t.rows.empty() && t.rows[0][0]) {
        witness = catalog.column_satisfies(column, op, *t.rows[0][0]);
      }
      break;
    }
    case Expr::Kind::Column: {
      // Some pair of stored values must satisfy the comparison.
      const ContentIndex* a = catalog.contents(column);
      const ContentIndex* b = catalog.contents(expr.column);
      if (a && b && a->type == b->type && !a->distinct.empty() && !b->distinct.empty()) {
        switch (op) {
          case CompareOp::Eq: {
            size_t i = 0, j = 0;
            while (i < a->distinct.size() && j < b->distinct.size()) {
              int c = compare_values(a->distinct[i], b->distinct[j]);
              if (c == 0) {
                witness = true;
                break;
              }
              (c < 0 ? i : j)++;
            }
            break;
          }
          case CompareOp::Lt: witness = compare_values(*a->min(), *b->max()) < 0; break;
          case CompareOp::Le: witness = compare_values(*a->min(), *b->max()) <= 0; break;
          case CompareOp::Gt: witness = compare_values(*a->max(), *b->min()) > 0; break;
          case CompareOp::Ge: witness = compare_values(*a->max(), *b->min()) >= 0; break;
        }
      }
      break;
    }
  }
  return witness ? 1.0 - config.epsilon : config.epsilon;
}

double p_join(const std::string& c1, const std::string& c2, const Catalog& catalog,
              const Config& config) {
  if (config.join_score == Config::JoinScore::Jaccard) {
    if (config.no_data) return 1.0;
    return catalog.content_jaccard(c1, c2);
  }
  return catalog.is_fk_pair(c1, c2) ? 1.0 - config.epsilon_join : config.epsilon_join;
}

CompletionCache::RelResult CompletionCache::find_rel(const SketchRel* node) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = rels_.find(node);
  return it == rels_.end() ? nullptr : it->second;
}

CompletionCache::RelResult CompletionCache::store_rel(const SketchRel* node,
                                                      std::vector<ScoredCandidate> result) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = rels_.emplace(node, nullptr);
  if (inserted) {
    it->second = std::make_shared<const std::vector<ScoredCandidate>>(std::move(result));
  }
  return it->second;
}

CompletionCache::SpecResult CompletionCache::find_spec(const SketchSpec* node,
                                                       const std::string& tau_key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = specs_.find({node, tau_key});
  return it == specs_.end() ? nullptr : it->second;
}

CompletionCache::SpecResult CompletionCache::store_spec(const SketchSpec* node,
                                                        const std::string& tau_key,
                                                        std::vector<SpecCandidate> result) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = specs_.emplace(std::make_pair(node, tau_key), nullptr);
  if (inserted) {
    it->second = std::make_shared<const std::vector<SpecCandidate>>(std::move(result));
  }
  return it->second;
}

std::string record_type_key(const RecordType& tau) {
  std::string key;
  for (const Column& c : tau.columns) {
    key += c.name;
    key += ':';
    key += to_string(c.type);
    key += ';';
  }
  return key;
}

double column_hint_score(const Hint& hint, const Column& column, const CompletionContext& ctx) {
  std::string bare = column.name;
  if (!column.owner_table.empty() && bare.rfind(column.owner_table + ".", 0) == 0) {
    bare = bare.substr(column.owner_table.size() + 1);
  }
  double score = ctx.sim.sim(hint, bare);
  if (ctx.config.table_context_bonus && !column.owner_table.empty() && !hint.empty()) {
    score = std::max(score, 0.9 * ctx.sim.sim(hint, column.owner_table));
  }
  return score;
}

double max_score(const std::vector<ScoredCandidate>& candidates) {
  double best = 0.0;
  for (const auto& c : candidates) best = std::max(best, c.score);
  return best;
}

namespace {

void finish_rel(std::vector<ScoredCandidate>& out, CompletionContext& ctx) {
  if (ctx.use_prune) {
    std::erase_if(out, [&](const ScoredCandidate& c) {
      return c.score < ctx.config.prune_threshold;
    });
  }
  for (ScoredCandidate& c : out) {
    if (c.sql.empty()) c.sql = emit_sql(c.term, ctx.catalog);
  }
  std::sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.sql.size() != b.sql.size()) return a.sql.size() < b.sql.size();
    return a.sql < b.sql;
  });
  if (out.size() > ctx.config.candidate_cap) {
    out.resize(ctx.config.candidate_cap);
    ctx.cap_truncated = true;
  }
}

void finish_spec(std::vector<SpecCandidate>& out, CompletionContext& ctx) {
  if (ctx.use_prune) {
    std::erase_if(out, [&](const SpecCandidate& c) {
      return c.score < ctx.config.prune_threshold;
    });
  }
  std::sort(out.begin(), out.end(), [](const SpecCandidate& a, const SpecCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.key.size() != b.key.size()) return a.key.size() < b.key.size();
    return a.key < b.key;
  });
  if (out.size() > ctx.config.candidate_cap) {
    out.resize(ctx.config.candidate_cap);
    ctx.cap_truncated = true;
  }
}

std::string item_key(const std::vector<SpecItem>& items) {
  std::string key;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) key += ", ";
    switch (items[i].kind) {
      case SpecItem::Kind::Column:
        key += items[i].column;
        break;
      case SpecItem::Kind::Aggregate:
        key += to_string(items[i].fn) + "(" + items[i].column + ")";
        break;
      case SpecItem::Kind::GroupBy:
        key += "g(" + to_string(items[i].fn) + "(" + items[i].column + ")," +
               items[i].group_column + ")";
        break;
    }
  }
  return key;
}

bool items_compatible(const std::vector<SpecItem>& a, const std::vector<SpecItem>& b) {
  // Column lists may not repeat output names, mix aggregates with plain
  // columns, or contain group-by entries.
  auto has_kind = [](const std::vector<SpecItem>& v, SpecItem::Kind k) {
    return std::any_of(v.begin(), v.end(), [&](const SpecItem& i) { return i.kind == k; });
  };
  if (has_kind(a, SpecItem::Kind::GroupBy) || has_kind(b, SpecItem::Kind::GroupBy)) return false;
  bool agg = has_kind(a, SpecItem::Kind::Aggregate) || has_kind(b, SpecItem::Kind::Aggregate);
  bool plain = has_kind(a, SpecItem::Kind::Column) || has_kind(b, SpecItem::Kind::Column);
  return !(agg && plain);
}

struct Instantiator {
  CompletionContext& ctx;

  std::vector<SpecCandidate> spec(const SpecPtr& node, const RecordType& tau) {
    std::string key = record_type_key(tau);
    if (auto hit = ctx.cache.find_spec(node.get(), key)) return *hit;
    std::vector<SpecCandidate> out = compute_spec(node, tau);
    finish_spec(out, ctx);
    return *ctx.cache.store_spec(node.get(), key, std::move(out));
  }

  std::vector<ScoredCandidate> rel(const RelPtr& node) {
    if (auto hit = ctx.cache.find_rel(node.get())) return *hit;
    std::vector<ScoredCandidate> out = compute_rel(node);
    finish_rel(out, ctx);
    return *ctx.cache.store_rel(node.get(), std::move(out));
  }

  std::vector<ScoredCandidate> compute_rel(const RelPtr& node) {
    std::vector<ScoredCandidate> out;
    switch (node->kind) {
      case SketchRel::Kind::TableHole: {
        for (const std::string& t : ctx.catalog.tables()) {
          double p = ctx.sim.sim(node->hint, t);
          ScoredCandidate c;
          c.term = QueryTerm::base(t);
          c.type = ctx.catalog.record_type(t);
          c.factors = {p};
          c.score = p;
          out.push_back(std::move(c));
        }
        return out;
      }
      case SketchRel::Kind::Project: {
        for (const ScoredCandidate& child : rel(node->child)) {
          for (const SpecCandidate& s : spec(node->spec, child.type)) {
            std::vector<SpecItem> items;
            RecordType out_type;
            if (s.payload == SpecCandidate::Payload::Column) {
              items = {SpecItem::plain(s.column.name)};
              out_type.columns = {s.column};
            } else if (s.payload == SpecCandidate::Payload::Items) {
              items = s.items;
              out_type = s.type;
            } else {
              continue;  // predicates cannot appear in a projection list
            }
            ScoredCandidate c;
            c.term = QueryTerm::project(std::move(items), child.term);
            c.type = std::move(out_type);
            c.factors = {child.score, s.score};
            c.score = fold_scores(c.factors);
            out.push_back(std::move(c));
          }
        }
        return out;
      }
      case SketchRel::Kind::Select: {
        for (const ScoredCandidate& child : rel(node->child)) {
          for (const SpecCandidate& s : spec(node->spec, child.type)) {
            if (s.payload != SpecCandidate::Payload::Pred) continue;
            ScoredCandidate c;
            c.term = QueryTerm::select(s.pred, child.term);
            c.type = child.type;
            c.factors = {child.score, s.score};
            c.score = fold_scores(c.factors);
            out.push_back(std::move(c));
          }
        }
        return out;
      }
      case SketchRel::Kind::Join: {
        for (const ScoredCandidate& lhs : rel(node->left)) {
          for (const ScoredCandidate& rhs : rel(node->right)) {
            // The union type is only well-defined on disjoint column sets;
            // global qualification makes distinct tables disjoint.
            if (!lhs.type.disjoint_names(rhs.type)) continue;
            for (const SpecCandidate& c1 : spec(node->left_hole, lhs.type)) {
              for (const SpecCandidate& c2 : spec(node->right_hole, rhs.type)) {
                if (!ctx.config.no_type && c1.column.type != c2.column.type) continue;
                double pj = p_join(c1.column.name, c2.column.name, ctx.catalog, ctx.config);
                ScoredCandidate c;
                c.term = QueryTerm::join(lhs.term, c1.column.name, c2.column.name, rhs.term);
                c.type = lhs.type.union_with(rhs.type);
                c.factors = {lhs.score, rhs.score, c1.score, c2.score, pj};
                c.score = fold_scores(c.factors);
                out.push_back(std::move(c));
              }
            }
          }
        }
        return out;
      }
    }
    return out;
  }

  std::vector<SpecCandidate> compute_spec(const SpecPtr& node, const RecordType& tau) {
    std::vector<SpecCandidate> out;
    switch (node->kind) {
      case SketchSpec::Kind::ColHole: {
        for (const Column& c : tau.columns) {
          double p = column_hint_score(node->hint, c, ctx);
          SpecCandidate s;
          s.payload = SpecCandidate::Payload::Column;
          s.column = c;
          s.type.columns = {c};
          s.factors = {p};
          s.score = p;
          s.key = c.name;
          out.push_back(std::move(s));
        }
        return out;
      }
      case SketchSpec::Kind::AggHole: {
        for (const SpecCandidate& col : spec(node->a, tau)) {
          if (!ctx.config.no_type && node->fn != AggFunc::Count &&
              col.column.type != BaseType::Number) {
            continue;  // type(f) guard
          }
          SpecCandidate s;
          s.payload = SpecCandidate::Payload::Items;
          s.items = {SpecItem::aggregate(node->fn, col.column.name)};
          s.type.columns = {
              Column{to_string(node->fn) + "(" + col.column.name + ")", BaseType::Number, ""}};
          s.factors = col.factors;
          s.score = col.score;
          s.key = item_key(s.items);
          out.push_back(std::move(s));
        }
        return out;
      }
      case SketchSpec::Kind::GroupHole: {
        for (const SpecCandidate& agg : spec(node->a, tau)) {
          for (const SpecCandidate& key : spec(node->b, tau)) {
            SpecCandidate s;
            s.payload = SpecCandidate::Payload::Items;
            s.items = {SpecItem::group_by(node->fn, agg.items[0].column, key.column.name)};
            s.type.columns = {key.column, agg.type.columns[0]};
            s.factors = {agg.score, key.score};
            s.score = fold_scores(s.factors);
            s.key = item_key(s.items);
            out.push_back(std::move(s));
          }
        }
        return out;
      }
      case SketchSpec::Kind::ColList: {
        for (const SpecCandidate& a : spec(node->a, tau)) {
          for (const SpecCandidate& b : spec(node->b, tau)) {
            auto to_items = [](const SpecCandidate& c) -> std::vector<SpecItem> {
              if (c.payload == SpecCandidate::Payload::Column) {
                return {SpecItem::plain(c.column.name)};
              }
              return c.items;
            };
            auto to_type = [](const SpecCandidate& c) -> RecordType {
              if (c.payload == SpecCandidate::Payload::Column) {
                return RecordType{{c.column}};
              }
              return c.type;
            };
            std::vector<SpecItem> left = to_items(a), right = to_items(b);
            if (!items_compatible(left, right)) continue;
            RecordType lt = to_type(a), rt = to_type(b);
            if (!lt.disjoint_names(rt)) continue;
            SpecCandidate s;
            s.payload = SpecCandidate::Payload::Items;
            s.items = left;
            s.items.insert(s.items.end(), right.begin(), right.end());
            s.type = lt.union_with(rt);
            s.factors = {a.score, b.score};
            s.score = fold_scores(s.factors);
            s.key = item_key(s.items);
            out.push_back(std::move(s));
          }
        }
        return out;
      }
      case SketchSpec::Kind::Literal: {
        // Lift: a literal is usable under tau when some column shares its type.
        bool typed = ctx.config.no_type ||
                     std::any_of(tau.columns.begin(), tau.columns.end(), [&](const Column& c) {
                       return c.type == node->value.type;
                     });
        if (typed) {
          SpecCandidate s;
          s.payload = SpecCandidate::Payload::Expr;
          s.expr = Expr::lit(node->value);
          s.type.columns = {Column{node->value.raw, node->value.type, ""}};
          s.factors = {1.0};
          s.score = 1.0;
          s.key = node->value.sketch_text();
          out.push_back(std::move(s));
        }
        return out;
      }
      case SketchSpec::Kind::PredAtom: {
        std::vector<SpecCandidate> rhs_cands;
        if (node->rhs_rel) {
          // Reduce: complete the subquery, then keep only scalar shapes.
          for (const ScoredCandidate& sub : rel(node->rhs_rel)) {
            if (sub.type.size() != 1) continue;
            if (sub.term->kind != QueryTerm::Kind::Project || sub.term->items.size() != 1 ||
                sub.term->items[0].kind != SpecItem::Kind::Aggregate) {
              continue;
            }
            SpecCandidate s;
            s.payload = SpecCandidate::Payload::Expr;
            s.expr = Expr::sub(sub.term);
            s.type = sub.type;
            s.factors = {sub.score};
            s.score = sub.score;
            s.key = sub.sql;
            rhs_cands.push_back(std::move(s));
          }
        } else if (node->rhs_spec->kind == SketchSpec::Kind::Literal) {
          rhs_cands = spec(node->rhs_spec, tau);
        } else {
          for (const SpecCandidate& col : spec(node->rhs_spec, tau)) {
            SpecCandidate s = col;
            s.payload = SpecCandidate::Payload::Expr;
            s.expr = Expr::col(col.column.name);
            s.key = col.column.name;
            rhs_cands.push_back(std::move(s));
          }
        }
        for (const SpecCandidate& lhs : spec(node->a, tau)) {
          for (const SpecCandidate& rhs : rhs_cands) {
            if (!ctx.config.no_type && lhs.column.type != rhs.type.columns[0].type) continue;
            double pphi = p_pred(lhs.column.name, node->op, rhs.expr, ctx.catalog, ctx.config);
            SpecCandidate s;
            s.payload = SpecCandidate::Payload::Pred;
            s.pred = Predicate::atom(lhs.column.name, node->op, rhs.expr);
            s.factors = {lhs.score, rhs.score, pphi};
            s.score = fold_scores(s.factors);
            s.key = pred_to_string(s.pred);
            out.push_back(std::move(s));
          }
        }
        return out;
      }
      case SketchSpec::Kind::And:
      case SketchSpec::Kind::Or: {
        for (const SpecCandidate& a : spec(node->a, tau)) {
          for (const SpecCandidate& b : spec(node->b, tau)) {
            SpecCandidate s;
            s.payload = SpecCandidate::Payload::Pred;
            s.pred = node->kind == SketchSpec::Kind::And ? Predicate::conj(a.pred, b.pred)
                                                         : Predicate::disj(a.pred, b.pred);
            s.factors = {a.score, b.score};
            s.score = fold_scores(s.factors);
            s.key = pred_to_string(s.pred);
            out.push_back(std::move(s));
          }
        }
        return out;
      }
      case SketchSpec::Kind::Not: {
        for (const SpecCandidate& a : spec(node->a, tau)) {
          SpecCandidate s;
          s.payload = SpecCandidate::Payload::Pred;
          s.pred = Predicate::negate(a.pred);
          s.factors = a.factors;
          s.score = a.score;
          s.key = pred_to_string(s.pred);
          out.push_back(std::move(s));
        }
        return out;
      }
    }
    return out;
  }
};

}  // namespace

std::vector<ScoredCandidate> instantiate_rel(const RelPtr& sketch, CompletionContext& ctx) {
  Instantiator inst{ctx};
  return inst.rel(sketch);
}

std::vector<SpecCandidate> instantiate_spec(const SpecPtr& spec, const RecordType& tau,
                                            CompletionContext& ctx) {
  Instantiator inst{ctx};
  return inst.spec(spec, tau);
}

}  // namespace sketchql
