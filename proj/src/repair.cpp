#include "sketchql/repair.hpp"

#include <algorithm>
#include <array>

namespace sketchql {

namespace {

// Keyword lexicon for AddFunc: phrases that commonly name an aggregate.
const std::vector<std::pair<AggFunc, const char*>>& agg_lexicon() {
  static const std::vector<std::pair<AggFunc, const char*>> lex = {
      {AggFunc::Count, "count"},   {AggFunc::Count, "number"},  {AggFunc::Count, "how many"},
      {AggFunc::Avg, "average"},   {AggFunc::Avg, "mean"},      {AggFunc::Max, "maximum"},
      {AggFunc::Max, "most"},      {AggFunc::Max, "highest"},   {AggFunc::Max, "largest"},
      {AggFunc::Min, "minimum"},   {AggFunc::Min, "least"},     {AggFunc::Min, "lowest"},
      {AggFunc::Min, "smallest"},  {AggFunc::Sum, "total"},     {AggFunc::Sum, "sum"},
  };
  return lex;
}

std::optional<AggFunc> addfunc_match(const Hint& hint, const SimilarityProvider& sim,
                                     const Config& config) {
  if (hint.empty()) return std::nullopt;
  auto [head, rest] = split_value(hint.folded);
  (void)rest;
  if (head.empty()) return std::nullopt;
  double best = 0.0;
  std::optional<AggFunc> best_fn;
  for (const auto& [fn, keyword] : agg_lexicon()) {
    double s = std::max(sim.sim_text(keyword, head), sim.sim_text(head, keyword));
    if (s >= config.delta && s > best) {
      best = s;
      best_fn = fn;
    }
  }
  return best_fn;
}

bool atom_with_literal(const SketchNode& node, const SketchSpec** out = nullptr) {
  if (!std::holds_alternative<SpecPtr>(node)) return false;
  const SpecPtr& spec = std::get<SpecPtr>(node);
  if (spec->kind != SketchSpec::Kind::PredAtom || spec->rhs_rel) return false;
  if (spec->rhs_spec->kind != SketchSpec::Kind::Literal) return false;
  if (out) *out = spec.get();
  return true;
}

bool addpred_matches(const SketchNode& node) {
  const SketchSpec* atom = nullptr;
  if (!atom_with_literal(node, &atom)) return false;
  if (atom->rhs_spec->value.type != BaseType::String) return false;
  auto [v1, v2] = split_value(atom->rhs_spec->value.text);
  (void)v1;
  return !v2.empty();
}

Value retype_token(const std::string& token) {
  if (auto num = Value::parse_typed(token, BaseType::Number)) return *num;
  return Value::make_string(token);
}

SketchNode rewrite(const SketchNode& node, Tactic tactic, const SimilarityProvider& sim,
                   const Config& config) {
  switch (tactic) {
    case Tactic::AddPred: {
      const SpecPtr& atom = std::get<SpecPtr>(node);
      auto [v1, v2] = split_value(atom->rhs_spec->value.text);
      SpecPtr a1 = SketchSpec::atom(atom->a, atom->op, SketchSpec::literal(retype_token(v1)));
      SpecPtr a2 = SketchSpec::atom(atom->a, atom->op, SketchSpec::literal(retype_token(v2)));
      return SketchNode(SketchSpec::conj(a1, a2));
    }
    case Tactic::AddCol: {
      const SpecPtr& atom = std::get<SpecPtr>(node);
      const Value& v = atom->rhs_spec->value;
      std::string hint_text = v.type == BaseType::String ? v.text : v.raw;
      return SketchNode(
          SketchSpec::atom(atom->a, atom->op, SketchSpec::col_hole(Hint(hint_text))));
    }
    case Tactic::AddFunc: {
      const SpecPtr& hole = std::get<SpecPtr>(node);
      auto fn = addfunc_match(hole->hint, sim, config);
      auto [head, rest] = split_value(hole->hint.display);
      (void)head;
      return SketchNode(SketchSpec::agg_hole(*fn, SketchSpec::col_hole(Hint(rest))));
    }
    case Tactic::AddJoin1: {
      const RelPtr& sel = std::get<RelPtr>(node);
      RelPtr joined = SketchRel::join(sel->child, SketchSpec::col_hole(Hint("")),
                                      SketchSpec::col_hole(Hint("")),
                                      SketchRel::table_hole(Hint("")));
      return SketchNode(SketchRel::select(sel->spec, joined));
    }
    case Tactic::AddJoin2: {
      const RelPtr& proj = std::get<RelPtr>(node);
      RelPtr joined = SketchRel::join(proj->child, SketchSpec::col_hole(Hint("")),
                                      SketchSpec::col_hole(Hint("")),
                                      SketchRel::table_hole(Hint("")));
      return SketchNode(SketchRel::project(proj->spec, joined));
    }
    case Tactic::AddJoin3: {
      const RelPtr& join = std::get<RelPtr>(node);
      RelPtr inner = SketchRel::join(join->left, SketchSpec::col_hole(Hint("")),
                                     SketchSpec::col_hole(Hint("")),
                                     SketchRel::table_hole(Hint("")));
      return SketchNode(SketchRel::join(inner, SketchSpec::col_hole(Hint("")),
                                        SketchSpec::col_hole(Hint("")), join->right));
    }
  }
  throw std::logic_error("unknown tactic");
}

}  // namespace

std::string to_string(Tactic t) {
  switch (t) {
    case Tactic::AddPred: return "AddPred";
    case Tactic::AddFunc: return "AddFunc";
    case Tactic::AddCol: return "AddCol";
    case Tactic::AddJoin1: return "AddJoin1";
    case Tactic::AddJoin2: return "AddJoin2";
    case Tactic::AddJoin3: return "AddJoin3";
  }
  return "?";
}

std::pair<std::string, std::string> split_value(const std::string& text) {
  size_t pos = text.find_first_of(" '-");
  if (pos == std::string::npos) return {text, ""};
  return {text.substr(0, pos), text.substr(pos + 1)};
}

std::vector<Tactic> matching_tactics(const SketchNode& node, const SimilarityProvider& sim,
                                     const Config& config, bool in_column_list) {
  std::vector<Tactic> out;
  if (addpred_matches(node)) out.push_back(Tactic::AddPred);
  if (std::holds_alternative<SpecPtr>(node)) {
    const SpecPtr& spec = std::get<SpecPtr>(node);
    if (spec->kind == SketchSpec::Kind::ColHole && in_column_list &&
        addfunc_match(spec->hint, sim, config)) {
      out.push_back(Tactic::AddFunc);
    }
  }
  if (atom_with_literal(node)) out.push_back(Tactic::AddCol);
  if (std::holds_alternative<RelPtr>(node)) {
    switch (std::get<RelPtr>(node)->kind) {
      case SketchRel::Kind::Select: out.push_back(Tactic::AddJoin1); break;
      case SketchRel::Kind::Project: out.push_back(Tactic::AddJoin2); break;
      case SketchRel::Kind::Join: out.push_back(Tactic::AddJoin3); break;
      case SketchRel::Kind::TableHole: break;
    }
  }
  return out;
}

bool can_repair(const SketchNode& node, const SimilarityProvider& sim, const Config& config,
                bool in_column_list) {
  return !matching_tactics(node, sim, config, in_column_list).empty();
}

std::optional<RepairResult> apply_repair(const Fault& fault, const RepairLineage& lineage,
                                         const SimilarityProvider& sim, const Config& config) {
  std::string path_key = path_to_string(fault.path);
  for (Tactic t : matching_tactics(fault.subterm, sim, config, fault.in_column_list)) {
    if (lineage.count({path_key, t})) continue;
    return RepairResult{rewrite(fault.subterm, t, sim, config), t};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fault localization
// ---------------------------------------------------------------------------

namespace {

struct Localizer {
  CompletionContext& ctx;

  std::optional<Fault> rel(const RelPtr& node, const SketchPath& path) {
    struct Piece {
      RelPtr child;
      int child_idx;
      SketchNode spec;
      int spec_idx;
      bool column_list;
    };
    std::vector<Piece> pieces;
    switch (node->kind) {
      case SketchRel::Kind::Project:
        pieces.push_back({node->child, 1, SketchNode(node->spec), 0, true});
        break;
      case SketchRel::Kind::Select:
        pieces.push_back({node->child, 1, SketchNode(node->spec), 0, false});
        break;
      case SketchRel::Kind::Join:
        pieces.push_back({node->left, 0, SketchNode(node->left_hole), 1, false});
        pieces.push_back({node->right, 3, SketchNode(node->right_hole), 2, false});
        break;
      case SketchRel::Kind::TableHole:
        break;
    }

    for (const Piece& piece : pieces) {
      SketchPath child_path = path;
      child_path.push_back(piece.child_idx);
      if (auto fault = rel(piece.child, child_path)) return fault;

      std::vector<ScoredCandidate> theta = instantiate_rel(piece.child, ctx);
      std::vector<RecordType> taus;
      std::vector<std::string> seen;
      for (const ScoredCandidate& cand : theta) {
        std::string key = record_type_key(cand.type);
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
          seen.push_back(key);
          taus.push_back(cand.type);
        }
      }
      if (taus.empty()) continue;  // no parent instantiation to judge the specifier under

      SketchPath spec_path = path;
      spec_path.push_back(piece.spec_idx);
      std::vector<Fault> sub_faults;
      bool all_faulty = true;
      for (const RecordType& tau : taus) {
        auto f = dispatch(piece.spec, tau, spec_path, piece.column_list);
        if (!f) {
          all_faulty = false;
          break;
        }
        sub_faults.push_back(*f);
      }
      if (all_faulty) {
        bool agree = std::all_of(sub_faults.begin(), sub_faults.end(), [&](const Fault& f) {
          return f.path == sub_faults[0].path;
        });
        if (agree) return sub_faults[0];
        if (can_repair(piece.spec, ctx.sim, ctx.config, piece.column_list)) {
          double best = 0.0;
          for (const Fault& f : sub_faults) best = std::max(best, f.best_score);
          return Fault{spec_path, piece.spec, best, piece.column_list};
        }
      }
    }

    std::vector<ScoredCandidate> theta = instantiate_rel(node, ctx);
    double best = max_score(theta);
    if (best < ctx.config.rho && can_repair(SketchNode(node), ctx.sim, ctx.config, false)) {
      return Fault{path, SketchNode(node), best, false};
    }
    return std::nullopt;
  }

  std::optional<Fault> spec(const SpecPtr& node, const RecordType& tau, const SketchPath& path,
                            bool column_list) {
    struct Child {
      SketchNode node;
      int idx;
      bool column_list;
    };
    std::vector<Child> children;
    switch (node->kind) {
      case SketchSpec::Kind::GroupHole:
        children.push_back({SketchNode(node->a), 0, false});
        children.push_back({SketchNode(node->b), 1, false});
        break;
      case SketchSpec::Kind::ColList:
        children.push_back({SketchNode(node->a), 0, column_list});
        children.push_back({SketchNode(node->b), 1, column_list});
        break;
      case SketchSpec::Kind::And:
      case SketchSpec::Kind::Or:
        children.push_back({SketchNode(node->a), 0, false});
        children.push_back({SketchNode(node->b), 1, false});
        break;
      case SketchSpec::Kind::Not:
        children.push_back({SketchNode(node->a), 0, false});
        break;
      case SketchSpec::Kind::PredAtom: {
        children.push_back({SketchNode(node->a), 0, false});
        SketchNode rhs = node->rhs_rel ? SketchNode(node->rhs_rel) : SketchNode(node->rhs_spec);
        children.push_back({rhs, 1, false});
        break;
      }
      case SketchSpec::Kind::ColHole:
      case SketchSpec::Kind::AggHole:
      case SketchSpec::Kind::Literal:
        break;
    }

    for (const Child& child : children) {
      SketchPath child_path = path;
      child_path.push_back(child.idx);
      if (auto fault = dispatch(child.node, tau, child_path, child.column_list)) return fault;
    }

    std::vector<SpecCandidate> theta = instantiate_spec(node, tau, ctx);
    double best = 0.0;
    for (const SpecCandidate& c : theta) best = std::max(best, c.score);
    if (best < ctx.config.rho && can_repair(SketchNode(node), ctx.sim, ctx.config, column_list)) {
      return Fault{path, SketchNode(node), best, column_list};
    }
    return std::nullopt;
  }

  std::optional<Fault> dispatch(const SketchNode& node, const RecordType& tau,
                                const SketchPath& path, bool column_list) {
    if (std::holds_alternative<RelPtr>(node)) {
      return rel(std::get<RelPtr>(node), path);
    }
    return spec(std::get<SpecPtr>(node), tau, path, column_list);
  }
};

}  // namespace

std::optional<Fault> fault_localize(const RelPtr& sketch, CompletionContext& ctx) {
  Localizer loc{ctx};
  return loc.rel(sketch, {});
}

std::optional<Fault> fault_localize_spec(const SpecPtr& spec, const RecordType& tau,
                                         CompletionContext& ctx) {
  Localizer loc{ctx};
  return loc.spec(spec, tau, {}, true);
}

}  // namespace sketchql
