#include "sketchql/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "sketchql/catalog.hpp"

namespace sketchql {

std::string to_string(AggFunc f) {
  switch (f) {
    case AggFunc::Max: return "max";
    case AggFunc::Min: return "min";
    case AggFunc::Avg: return "avg";
    case AggFunc::Sum: return "sum";
    case AggFunc::Count: return "count";
  }
  return "?";
}

std::string to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Le: return "<=";
    case CompareOp::Lt: return "<";
    case CompareOp::Eq: return "=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

std::optional<AggFunc> agg_from_name(const std::string& name) {
  std::string f = fold_case(name);
  if (f == "max") return AggFunc::Max;
  if (f == "min") return AggFunc::Min;
  if (f == "avg") return AggFunc::Avg;
  if (f == "sum") return AggFunc::Sum;
  if (f == "count") return AggFunc::Count;
  return std::nullopt;
}

SpecItem SpecItem::plain(std::string c) {
  SpecItem s;
  s.kind = Kind::Column;
  s.column = std::move(c);
  return s;
}

SpecItem SpecItem::aggregate(AggFunc f, std::string c) {
  SpecItem s;
  s.kind = Kind::Aggregate;
  s.fn = f;
  s.column = std::move(c);
  return s;
}

SpecItem SpecItem::group_by(AggFunc f, std::string c1, std::string c2) {
  SpecItem s;
  s.kind = Kind::GroupBy;
  s.fn = f;
  s.column = std::move(c1);
  s.group_column = std::move(c2);
  return s;
}

Expr Expr::lit(Value v) {
  Expr e;
  e.kind = Kind::Literal;
  e.literal = std::move(v);
  return e;
}

Expr Expr::col(std::string c) {
  Expr e;
  e.kind = Kind::Column;
  e.column = std::move(c);
  return e;
}

Expr Expr::sub(TermPtr t) {
  Expr e;
  e.kind = Kind::Subquery;
  e.subquery = std::move(t);
  return e;
}

PredPtr Predicate::conj(PredPtr a, PredPtr b) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::And;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}

PredPtr Predicate::disj(PredPtr a, PredPtr b) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::Or;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}

PredPtr Predicate::negate(PredPtr a) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::Not;
  p->lhs = std::move(a);
  return p;
}

PredPtr Predicate::atom(std::string column, CompareOp op, Expr e) {
  auto p = std::make_shared<Predicate>();
  p->kind = Kind::Atom;
  p->column = std::move(column);
  p->op = op;
  p->expr = std::move(e);
  return p;
}

TermPtr QueryTerm::base(std::string table) {
  auto t = std::make_shared<QueryTerm>();
  t->kind = Kind::BaseTable;
  t->table = std::move(table);
  return t;
}

TermPtr QueryTerm::project(std::vector<SpecItem> items, TermPtr child) {
  auto t = std::make_shared<QueryTerm>();
  t->kind = Kind::Project;
  t->items = std::move(items);
  t->child = std::move(child);
  return t;
}

TermPtr QueryTerm::select(PredPtr pred, TermPtr child) {
  auto t = std::make_shared<QueryTerm>();
  t->kind = Kind::Select;
  t->predicate = std::move(pred);
  t->child = std::move(child);
  return t;
}

TermPtr QueryTerm::join(TermPtr left, std::string c1, std::string c2, TermPtr right) {
  auto t = std::make_shared<QueryTerm>();
  t->kind = Kind::Join;
  t->left = std::move(left);
  t->right = std::move(right);
  t->left_col = std::move(c1);
  t->right_col = std::move(c2);
  return t;
}

static std::string item_to_string(const SpecItem& item) {
  switch (item.kind) {
    case SpecItem::Kind::Column: return item.column;
    case SpecItem::Kind::Aggregate: return to_string(item.fn) + "(" + item.column + ")";
    case SpecItem::Kind::GroupBy:
      return "g(" + to_string(item.fn) + "(" + item.column + "), " + item.group_column + ")";
  }
  return "?";
}

std::string pred_to_string(const PredPtr& pred) {
  switch (pred->kind) {
    case Predicate::Kind::And:
      return "(" + pred_to_string(pred->lhs) + " && " + pred_to_string(pred->rhs) + ")";
    case Predicate::Kind::Or:
      return "(" + pred_to_string(pred->lhs) + " || " + pred_to_string(pred->rhs) + ")";
    case Predicate::Kind::Not:
      return "!(" + pred_to_string(pred->lhs) + ")";
    case Predicate::Kind::Atom: {
      std::string rhs;
      switch (pred->expr.kind) {
        case Expr::Kind::Literal: rhs = pred->expr.literal.sketch_text(); break;
        case Expr::Kind::Column: rhs = pred->expr.column; break;
        case Expr::Kind::Subquery: rhs = term_to_string(pred->expr.subquery); break;
      }
      return pred->column + " " + to_string(pred->op) + " " + rhs;
    }
  }
  return "?";
}

std::string term_to_string(const TermPtr& term) {
  switch (term->kind) {
    case QueryTerm::Kind::BaseTable:
      return term->table;
    case QueryTerm::Kind::Project: {
      std::string spec;
      for (size_t i = 0; i < term->items.size(); ++i) {
        if (i) spec += ", ";
        spec += item_to_string(term->items[i]);
      }
      return "Pi[" + spec + "](" + term_to_string(term->child) + ")";
    }
    case QueryTerm::Kind::Select:
      return "Sigma[" + pred_to_string(term->predicate) + "](" + term_to_string(term->child) + ")";
    case QueryTerm::Kind::Join:
      return "Join[" + term->left_col + " = " + term->right_col + "](" +
             term_to_string(term->left) + ", " + term_to_string(term->right) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Typing
// ---------------------------------------------------------------------------

namespace {

bool is_scalar_subquery(const TermPtr& term) {
  // A subquery usable as an Expr must produce exactly one value: a single
  // aggregate projection (no group-by).
  return term->kind == QueryTerm::Kind::Project && term->items.size() == 1 &&
         term->items[0].kind == SpecItem::Kind::Aggregate;
}

Column type_item(const SpecItem& item, const RecordType& tau, const std::string& where);

BaseType agg_result_type(AggFunc fn, const Column& col, const std::string& where) {
  if (fn == AggFunc::Count) return BaseType::Number;
  if (col.type != BaseType::Number) {
    throw TypeError(TypeError::Kind::AggregateTypeMismatch, where,
                    to_string(fn) + " requires a Number column, got " + to_string(col.type));
  }
  return BaseType::Number;
}

Column type_item(const SpecItem& item, const RecordType& tau, const std::string& where) {
  const Column* c = tau.find(item.column);
  if (!c) {
    throw TypeError(TypeError::Kind::UnknownColumn, item.column,
                    "unknown column " + item.column + " in " + where);
  }
  switch (item.kind) {
    case SpecItem::Kind::Column:
      return *c;
    case SpecItem::Kind::Aggregate: {
      BaseType out = agg_result_type(item.fn, *c, item_to_string(item));
      return Column{to_string(item.fn) + "(" + item.column + ")", out, ""};
    }
    case SpecItem::Kind::GroupBy:
      // handled by the caller; group items carry two output columns
      return *c;
  }
  return *c;
}

void type_pred(const PredPtr& pred, const RecordType& tau, const Catalog& catalog);

void type_atom(const Predicate& atom, const RecordType& tau, const Catalog& catalog) {
  std::string where = pred_to_string(std::make_shared<Predicate>(atom));
  const Column* lhs = tau.find(atom.column);
  if (!lhs) {
    throw TypeError(TypeError::Kind::UnknownColumn, atom.column,
                    "unknown column " + atom.column + " in " + where);
  }
  switch (atom.expr.kind) {
    case Expr::Kind::Literal:
      if (atom.expr.literal.type != lhs->type) {
        throw TypeError(TypeError::Kind::PredicateTypeMismatch, where,
                        "comparison of " + to_string(lhs->type) + " column with " +
                            to_string(atom.expr.literal.type) + " literal");
      }
      break;
    case Expr::Kind::Column: {
      const Column* rhs = tau.find(atom.expr.column);
      if (!rhs) {
        throw TypeError(TypeError::Kind::UnknownColumn, atom.expr.column,
                        "unknown column " + atom.expr.column + " in " + where);
      }
      if (rhs->type != lhs->type) {
        throw TypeError(TypeError::Kind::PredicateTypeMismatch, where,
                        "comparison of " + to_string(lhs->type) + " with " + to_string(rhs->type));
      }
      break;
    }
    case Expr::Kind::Subquery: {
      RecordType sub = type_of(atom.expr.subquery, catalog);
      if (sub.size() != 1 || !is_scalar_subquery(atom.expr.subquery)) {
        throw TypeError(TypeError::Kind::NonScalarSubquery, term_to_string(atom.expr.subquery),
                        "subquery used as expression must be a single aggregate value");
      }
      if (sub.columns[0].type != lhs->type) {
        throw TypeError(TypeError::Kind::PredicateTypeMismatch, where,
                        "comparison of " + to_string(lhs->type) + " column with " +
                            to_string(sub.columns[0].type) + " subquery");
      }
      break;
    }
  }
}

void type_pred(const PredPtr& pred, const RecordType& tau, const Catalog& catalog) {
  switch (pred->kind) {
    case Predicate::Kind::And:
    case Predicate::Kind::Or:
      type_pred(pred->lhs, tau, catalog);
      type_pred(pred->rhs, tau, catalog);
      break;
    case Predicate::Kind::Not:
      type_pred(pred->lhs, tau, catalog);
      break;
    case Predicate::Kind::Atom:
      type_atom(*pred, tau, catalog);
      break;
  }
}

}  // namespace

RecordType type_of(const TermPtr& term, const Catalog& catalog) {
  switch (term->kind) {
    case QueryTerm::Kind::BaseTable: {
      if (!catalog.has_table(term->table)) {
        throw TypeError(TypeError::Kind::UnknownTable, term->table,
                        "unknown table " + term->table);
      }
      return catalog.record_type(term->table);
    }
    case QueryTerm::Kind::Project: {
      RecordType tau = type_of(term->child, catalog);
      RecordType out;
      bool has_agg = false, has_plain = false, has_group = false;
      for (const SpecItem& item : term->items) {
        switch (item.kind) {
          case SpecItem::Kind::Column: {
            has_plain = true;
            Column c = type_item(item, tau, term_to_string(term));
            if (out.find(c.name)) {
              throw TypeError(TypeError::Kind::AggregateTypeMismatch, c.name,
                              "duplicate column in projection list");
            }
            out.columns.push_back(c);
            break;
          }
          case SpecItem::Kind::Aggregate: {
            has_agg = true;
            Column c = type_item(item, tau, term_to_string(term));
            if (out.find(c.name)) {
              throw TypeError(TypeError::Kind::AggregateTypeMismatch, c.name,
                              "duplicate column in projection list");
            }
            out.columns.push_back(c);
            break;
          }
          case SpecItem::Kind::GroupBy: {
            has_group = true;
            const Column* c1 = tau.find(item.column);
            if (!c1) {
              throw TypeError(TypeError::Kind::UnknownColumn, item.column,
                              "unknown column " + item.column + " in " + term_to_string(term));
            }
            const Column* c2 = tau.find(item.group_column);
            if (!c2) {
              throw TypeError(TypeError::Kind::UnknownColumn, item.group_column,
                              "unknown column " + item.group_column + " in " + term_to_string(term));
            }
            BaseType agg = agg_result_type(item.fn, *c1, item_to_string(item));
            out.columns.push_back(*c2);
            out.columns.push_back(Column{to_string(item.fn) + "(" + item.column + ")", agg, ""});
            break;
          }
        }
      }
      if (has_group && term->items.size() != 1) {
        throw TypeError(TypeError::Kind::AggregateTypeMismatch, term_to_string(term),
                        "group-by must be the only projection item");
      }
      if (has_agg && has_plain) {
        throw TypeError(TypeError::Kind::AggregateTypeMismatch, term_to_string(term),
                        "projection list mixes aggregate and plain columns");
      }
      return out;
    }
    case QueryTerm::Kind::Select: {
      RecordType tau = type_of(term->child, catalog);
      type_pred(term->predicate, tau, catalog);
      return tau;
    }
    case QueryTerm::Kind::Join: {
      RecordType t1 = type_of(term->left, catalog);
      RecordType t2 = type_of(term->right, catalog);
      const Column* c1 = t1.find(term->left_col);
      if (!c1) {
        throw TypeError(TypeError::Kind::UnknownColumn, term->left_col,
                        "unknown column " + term->left_col + " in join left side");
      }
      const Column* c2 = t2.find(term->right_col);
      if (!c2) {
        throw TypeError(TypeError::Kind::UnknownColumn, term->right_col,
                        "unknown column " + term->right_col + " in join right side");
      }
      if (c1->type != c2->type) {
        throw TypeError(TypeError::Kind::PredicateTypeMismatch, term_to_string(term),
                        "join columns have different types");
      }
      return t1.union_with(t2);
    }
  }
  throw TypeError(TypeError::Kind::UnknownTable, "?", "malformed term");
}

// ---------------------------------------------------------------------------
// SQL emission
// ---------------------------------------------------------------------------

namespace {

std::string quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    out += c;
    if (c == '"') out += '"';
  }
  out += "\"";
  return out;
}

// Resolves canonical column names to SQL expressions inside one query block.
// Base tables expose their columns verbatim; derived FROM items expose
// alias-qualified quoted output names.
struct Scope {
  std::map<std::string, std::string> refs;

  void add_base_table(const RecordType& tau) {
    for (const Column& c : tau.columns) refs[c.name] = c.name;
  }
  void add_derived(const std::string& alias, const RecordType& tau) {
    for (const Column& c : tau.columns) refs[c.name] = alias + "." + quote_ident(c.name);
  }
  std::string ref(const std::string& canonical) const {
    auto it = refs.find(canonical);
    return it == refs.end() ? canonical : it->second;
  }
};

struct SqlWriter {
  const Catalog& catalog;
  int next_alias = 1;

  std::string render(const TermPtr& term, bool derived);
  std::string render_from(const TermPtr& term, Scope& scope);
  std::string render_pred(const PredPtr& pred, const Scope& scope, int parent_prec);
  std::string render_item(const SpecItem& item, const Scope& scope);
};

std::string SqlWriter::render_item(const SpecItem& item, const Scope& scope) {
  switch (item.kind) {
    case SpecItem::Kind::Column:
      return scope.ref(item.column);
    case SpecItem::Kind::Aggregate:
      return to_string(item.fn) + "(" + scope.ref(item.column) + ")";
    case SpecItem::Kind::GroupBy:
      // rendered by the caller (needs both the list and the GROUP BY clause)
      return "";
  }
  return "";
}

std::string SqlWriter::render_pred(const PredPtr& pred, const Scope& scope, int parent_prec) {
  // precedence: OR = 1, AND = 2, NOT = 3, atom = 4
  switch (pred->kind) {
    case Predicate::Kind::Or: {
      std::string s = render_pred(pred->lhs, scope, 1) + " OR " + render_pred(pred->rhs, scope, 1);
      return parent_prec > 1 ? "(" + s + ")" : s;
    }
    case Predicate::Kind::And: {
      std::string s = render_pred(pred->lhs, scope, 2) + " AND " + render_pred(pred->rhs, scope, 2);
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case Predicate::Kind::Not:
      return "NOT " + render_pred(pred->lhs, scope, 3);
    case Predicate::Kind::Atom: {
      std::string rhs;
      switch (pred->expr.kind) {
        case Expr::Kind::Literal: rhs = pred->expr.literal.sql(); break;
        case Expr::Kind::Column: rhs = scope.ref(pred->expr.column); break;
        case Expr::Kind::Subquery: rhs = "(" + render(pred->expr.subquery, false) + ")"; break;
      }
      return scope.ref(pred->column) + " " + to_string(pred->op) + " " + rhs;
    }
  }
  return "";
}

std::string SqlWriter::render_from(const TermPtr& term, Scope& scope) {
  if (term->kind == QueryTerm::Kind::Join) {
    std::string left = render_from(term->left, scope);
    std::string right;
    if (term->right->kind == QueryTerm::Kind::BaseTable) {
      right = render_from(term->right, scope);
    } else {
      std::string alias = "_s" + std::to_string(next_alias++);
      right = "(" + render(term->right, true) + ") AS " + alias;
      scope.add_derived(alias, type_of(term->right, catalog));
    }
    return left + " JOIN " + right + " ON " + scope.ref(term->left_col) + " = " +
           scope.ref(term->right_col);
  }
  if (term->kind == QueryTerm::Kind::BaseTable) {
    scope.add_base_table(catalog.record_type(term->table));
    return term->table;
  }
  std::string alias = "_s" + std::to_string(next_alias++);
  scope.add_derived(alias, type_of(term, catalog));
  return "(" + render(term, true) + ") AS " + alias;
}

std::string SqlWriter::render(const TermPtr& term, bool derived) {
  const std::vector<SpecItem>* items = nullptr;
  TermPtr rest = term;
  if (rest->kind == QueryTerm::Kind::Project) {
    items = &rest->items;
    rest = rest->child;
  }
  PredPtr where;
  if (rest->kind == QueryTerm::Kind::Select) {
    where = rest->predicate;
    rest = rest->child;
  }

  Scope scope;
  std::string from = render_from(rest, scope);

  std::string select;
  std::string group;
  if (!items) {
    // Bare Select/Join/BaseTable term: project everything explicitly so
    // derived positions keep canonical output names.
    RecordType tau = type_of(rest, catalog);
    for (size_t i = 0; i < tau.columns.size(); ++i) {
      if (i) select += ", ";
      select += scope.ref(tau.columns[i].name);
      if (derived || scope.ref(tau.columns[i].name) != tau.columns[i].name) {
        select += " AS " + quote_ident(tau.columns[i].name);
      }
    }
    if (tau.columns.empty()) select = "*";
  } else {
    RecordType tau = type_of(term, catalog);
    size_t out_idx = 0;
    for (size_t i = 0; i < items->size(); ++i) {
      const SpecItem& item = (*items)[i];
      if (item.kind == SpecItem::Kind::GroupBy) {
        group = scope.ref(item.group_column);
        std::string key = scope.ref(item.group_column);
        std::string agg = to_string(item.fn) + "(" + scope.ref(item.column) + ")";
        if (i) select += ", ";
        select += key;
        if (derived) select += " AS " + quote_ident(tau.columns[out_idx].name);
        select += ", " + agg;
        if (derived) select += " AS " + quote_ident(tau.columns[out_idx + 1].name);
        out_idx += 2;
        continue;
      }
      if (i) select += ", ";
      select += render_item(item, scope);
      if (derived) select += " AS " + quote_ident(tau.columns[out_idx].name);
      ++out_idx;
    }
  }

  std::string sql = "SELECT " + select + " FROM " + from;
  if (where) sql += " WHERE " + render_pred(where, scope, 0);
  if (!group.empty()) sql += " GROUP BY " + group;
  return sql;
}

}  // namespace

std::string emit_sql(const TermPtr& term, const Catalog& catalog) {
  SqlWriter w{catalog};
  return w.render(term, false);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

bool cell_compare(const Cell& lhs, CompareOp op, const Cell& rhs) {
  if (!lhs || !rhs) return false;  // NULL never satisfies a comparison
  int c = compare_values(*lhs, *rhs);
  switch (op) {
    case CompareOp::Le: return c <= 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Eq: return c == 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

struct Evaluator {
  const Catalog& catalog;
  std::map<const QueryTerm*, Cell> scalar_cache;

  Table eval(const TermPtr& term);
  bool eval_pred(const PredPtr& pred, const RecordType& tau, const std::vector<Cell>& row);
  Cell scalar_of(const TermPtr& sub);
};

Cell aggregate_column(AggFunc fn, const std::vector<Cell>& cells) {
  if (fn == AggFunc::Count) {
    return Value::make_number(static_cast<double>(cells.size()));
  }
  if (cells.empty()) return std::nullopt;  // SQL convention: NULL
  double acc = 0.0;
  double best = cells[0]->num;
  for (const Cell& c : cells) {
    acc += c->num;
    best = (fn == AggFunc::Max) ? std::max(best, c->num) : std::min(best, c->num);
  }
  switch (fn) {
    case AggFunc::Max:
    case AggFunc::Min: return Value::make_number(best);
    case AggFunc::Sum: return Value::make_number(acc);
    case AggFunc::Avg: return Value::make_number(acc / static_cast<double>(cells.size()));
    case AggFunc::Count: break;
  }
  return std::nullopt;
}

Cell Evaluator::scalar_of(const TermPtr& sub) {
  auto it = scalar_cache.find(sub.get());
  if (it != scalar_cache.end()) return it->second;
  Table t = eval(sub);
  Cell result;
  if (!t.rows.empty()) result = t.rows[0][0];
  scalar_cache.emplace(sub.get(), result);
  return result;
}

bool Evaluator::eval_pred(const PredPtr& pred, const RecordType& tau,
                          const std::vector<Cell>& row) {
  switch (pred->kind) {
    case Predicate::Kind::And:
      return eval_pred(pred->lhs, tau, row) && eval_pred(pred->rhs, tau, row);
    case Predicate::Kind::Or:
      return eval_pred(pred->lhs, tau, row) || eval_pred(pred->rhs, tau, row);
    case Predicate::Kind::Not:
      return !eval_pred(pred->lhs, tau, row);
    case Predicate::Kind::Atom: {
      size_t idx = 0;
      for (; idx < tau.columns.size(); ++idx) {
        if (tau.columns[idx].name == pred->column) break;
      }
      const Cell& lhs = row[idx];
      switch (pred->expr.kind) {
        case Expr::Kind::Literal:
          return cell_compare(lhs, pred->op, pred->expr.literal);
        case Expr::Kind::Column: {
          size_t ridx = 0;
          for (; ridx < tau.columns.size(); ++ridx) {
            if (tau.columns[ridx].name == pred->expr.column) break;
          }
          return cell_compare(lhs, pred->op, row[ridx]);
        }
        case Expr::Kind::Subquery:
          return cell_compare(lhs, pred->op, scalar_of(pred->expr.subquery));
      }
      return false;
    }
  }
  return false;
}

Table Evaluator::eval(const TermPtr& term) {
  switch (term->kind) {
    case QueryTerm::Kind::BaseTable:
      return catalog.data(term->table);
    case QueryTerm::Kind::Select: {
      Table in = eval(term->child);
      Table out;
      out.header = in.header;
      for (const auto& row : in.rows) {
        if (eval_pred(term->predicate, in.header, row)) out.rows.push_back(row);
      }
      return out;
    }
    case QueryTerm::Kind::Join: {
      Table a = eval(term->left);
      Table b = eval(term->right);
      size_t li = 0, ri = 0;
      for (; li < a.header.columns.size(); ++li) {
        if (a.header.columns[li].name == term->left_col) break;
      }
      for (; ri < b.header.columns.size(); ++ri) {
        if (b.header.columns[ri].name == term->right_col) break;
      }
      Table out;
      out.header = a.header.union_with(b.header);
      // Right-side columns whose names already appear on the left collapse
      // in the union; skip their cells to keep rows aligned with the header.
      std::vector<bool> keep(b.header.columns.size(), true);
      for (size_t i = 0; i < b.header.columns.size(); ++i) {
        if (a.header.find(b.header.columns[i].name)) keep[i] = false;
      }
      for (const auto& ra : a.rows) {
        for (const auto& rb : b.rows) {
          if (!cell_compare(ra[li], CompareOp::Eq, rb[ri])) continue;
          std::vector<Cell> row = ra;
          for (size_t i = 0; i < rb.size(); ++i) {
            if (keep[i]) row.push_back(rb[i]);
          }
          out.rows.push_back(row);
        }
      }
      return out;
    }
    case QueryTerm::Kind::Project: {
      Table in = eval(term->child);
      auto col_index = [&](const std::string& name) {
        size_t i = 0;
        for (; i < in.header.columns.size(); ++i) {
          if (in.header.columns[i].name == name) break;
        }
        return i;
      };
      Table out;
      out.header = type_of(term, catalog);

      if (term->items.size() == 1 && term->items[0].kind == SpecItem::Kind::GroupBy) {
        const SpecItem& item = term->items[0];
        size_t agg_idx = col_index(item.column);
        size_t key_idx = col_index(item.group_column);
        // Groups keyed case-insensitively, emitted in first-occurrence order.
        std::vector<std::pair<Cell, std::vector<Cell>>> groups;
        std::map<std::string, size_t> by_key;
        for (const auto& row : in.rows) {
          const Cell& key = row[key_idx];
          std::string k = !key ? std::string("\x01null")
                               : (key->type == BaseType::String ? "s:" + fold_case(key->text)
                                  : key->type == BaseType::Number
                                      ? "n:" + std::to_string(key->num)
                                      : std::string("b:") + (key->boolean ? "1" : "0"));
          auto it = by_key.find(k);
          if (it == by_key.end()) {
            by_key.emplace(k, groups.size());
            groups.push_back({key, {}});
            it = by_key.find(k);
          }
          groups[it->second].second.push_back(row[agg_idx]);
        }
        for (auto& [key, cells] : groups) {
          out.rows.push_back({key, aggregate_column(item.fn, cells)});
        }
        return out;
      }

      bool all_aggregate = !term->items.empty() &&
                           term->items[0].kind == SpecItem::Kind::Aggregate;
      if (all_aggregate) {
        std::vector<Cell> row;
        for (const SpecItem& item : term->items) {
          size_t idx = col_index(item.column);
          std::vector<Cell> cells;
          cells.reserve(in.rows.size());
          for (const auto& r : in.rows) cells.push_back(r[idx]);
          row.push_back(aggregate_column(item.fn, cells));
        }
        out.rows.push_back(row);
        return out;
      }

      std::vector<size_t> idx;
      idx.reserve(term->items.size());
      for (const SpecItem& item : term->items) idx.push_back(col_index(item.column));
      for (const auto& r : in.rows) {
        std::vector<Cell> row;
        row.reserve(idx.size());
        for (size_t i : idx) row.push_back(r[i]);
        out.rows.push_back(row);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

Table evaluate(const TermPtr& term, const Catalog& catalog) {
  Evaluator e{catalog, {}};
  return e.eval(term);
}

}  // namespace sketchql
