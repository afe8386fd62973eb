#include "sketchql/sketch.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sketchql {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Hint::Hint(const std::string& text) {
  display = trim(text);
  folded = fold_case(display);
}

SpecPtr SketchSpec::col_hole(Hint h) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::ColHole;
  s->hint = std::move(h);
  return s;
}

SpecPtr SketchSpec::agg_hole(AggFunc f, SpecPtr col) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::AggHole;
  s->fn = f;
  s->a = std::move(col);
  return s;
}

SpecPtr SketchSpec::group_hole(SpecPtr agg, SpecPtr key) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::GroupHole;
  s->fn = agg->fn;
  s->a = std::move(agg);
  s->b = std::move(key);
  return s;
}

SpecPtr SketchSpec::col_list(SpecPtr a, SpecPtr b) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::ColList;
  s->a = std::move(a);
  s->b = std::move(b);
  return s;
}

SpecPtr SketchSpec::atom(SpecPtr lhs, CompareOp op, SpecPtr rhs) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::PredAtom;
  s->a = std::move(lhs);
  s->op = op;
  s->rhs_spec = std::move(rhs);
  return s;
}

SpecPtr SketchSpec::atom_rel(SpecPtr lhs, CompareOp op, RelPtr rhs) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::PredAtom;
  s->a = std::move(lhs);
  s->op = op;
  s->rhs_rel = std::move(rhs);
  return s;
}

SpecPtr SketchSpec::conj(SpecPtr a, SpecPtr b) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::And;
  s->a = std::move(a);
  s->b = std::move(b);
  return s;
}

SpecPtr SketchSpec::disj(SpecPtr a, SpecPtr b) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::Or;
  s->a = std::move(a);
  s->b = std::move(b);
  return s;
}

SpecPtr SketchSpec::negate(SpecPtr a) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::Not;
  s->a = std::move(a);
  return s;
}

SpecPtr SketchSpec::literal(Value v) {
  auto s = std::make_shared<SketchSpec>();
  s->kind = Kind::Literal;
  s->value = std::move(v);
  return s;
}

RelPtr SketchRel::table_hole(Hint h) {
  auto r = std::make_shared<SketchRel>();
  r->kind = Kind::TableHole;
  r->hint = std::move(h);
  return r;
}

RelPtr SketchRel::project(SpecPtr spec, RelPtr child) {
  auto r = std::make_shared<SketchRel>();
  r->kind = Kind::Project;
  r->spec = std::move(spec);
  r->child = std::move(child);
  return r;
}

RelPtr SketchRel::select(SpecPtr spec, RelPtr child) {
  auto r = std::make_shared<SketchRel>();
  r->kind = Kind::Select;
  r->spec = std::move(spec);
  r->child = std::move(child);
  return r;
}

RelPtr SketchRel::join(RelPtr left, SpecPtr h1, SpecPtr h2, RelPtr right) {
  auto r = std::make_shared<SketchRel>();
  r->kind = Kind::Join;
  r->left = std::move(left);
  r->right = std::move(right);
  r->left_hole = std::move(h1);
  r->right_hole = std::move(h2);
  return r;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind {
    Keyword,   // SELECT FROM WHERE JOIN ON BY AND OR NOT TRUE FALSE
    Ident,     // aggregate names
    ColHole,   // ? or ?[hint]
    TableHole, // ?? or ??[hint]
    String,
    Number,
    LParen,
    RParen,
    Comma,
    Op,        // <= < = > >=
    End,
  };
  Kind kind = Kind::End;
  std::string text;    // keyword (folded), ident, op, number raw, string payload
  std::string hint;    // hole hint, raw
  int line = 1, column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void fail(const std::string& expected, const std::string& detail) {
    throw ParseError(line_, col_, expected,
                     "sketch parse error at " + std::to_string(line_) + ":" +
                         std::to_string(col_) + ": " + detail);
  }

  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void bump() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void advance() {
    while (std::isspace(static_cast<unsigned char>(cur()))) bump();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    char c = cur();
    if (c == '\0') {
      tok_.kind = Token::Kind::End;
      return;
    }
    if (c == '?') {
      bump();
      bool table = false;
      if (cur() == '?') {
        table = true;
        bump();
      }
      tok_.kind = table ? Token::Kind::TableHole : Token::Kind::ColHole;
      if (cur() == '[') {
        bump();
        std::string hint;
        while (cur() != ']' && cur() != '\0') {
          hint += cur();
          bump();
        }
        if (cur() != ']') fail("]", "unterminated hole hint");
        bump();
        tok_.hint = hint;
      }
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      while (cur() != '"' && cur() != '\0') {
        if (cur() == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
          bump();
        }
        s += cur();
        bump();
      }
      if (cur() != '"') fail("\"", "unterminated string literal");
      bump();
      tok_.kind = Token::Kind::String;
      tok_.text = s;
      return;
    }
    if (c == '(') {
      bump();
      tok_.kind = Token::Kind::LParen;
      return;
    }
    if (c == ')') {
      bump();
      tok_.kind = Token::Kind::RParen;
      return;
    }
    if (c == ',') {
      bump();
      tok_.kind = Token::Kind::Comma;
      return;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      bump();
      if ((op == "<" || op == ">") && cur() == '=') {
        op += '=';
        bump();
      }
      tok_.kind = Token::Kind::Op;
      tok_.text = op;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::string num;
      if (c == '-') {
        num += c;
        bump();
      }
      while (std::isdigit(static_cast<unsigned char>(cur())) || cur() == '.') {
        num += cur();
        bump();
      }
      tok_.kind = Token::Kind::Number;
      tok_.text = num;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        word += cur();
        bump();
      }
      std::string folded = fold_case(word);
      static const char* keywords[] = {"select", "from", "where", "join", "on",
                                       "by",     "and",  "or",    "not",  "true",
                                       "false"};
      for (const char* k : keywords) {
        if (folded == k) {
          tok_.kind = Token::Kind::Keyword;
          tok_.text = folded;
          return;
        }
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = word;
      return;
    }
    fail("token", std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  RelPtr parse() {
    RelPtr rel = parse_select();
    expect_end();
    return rel;
  }

private:
  [[noreturn]] void fail(const Token& tok, const std::string& expected) {
    throw ParseError(tok.line, tok.column, expected,
                     "sketch parse error at " + std::to_string(tok.line) + ":" +
                         std::to_string(tok.column) + ": expected " + expected);
  }

  bool at_keyword(const char* kw) const {
    return lex_.peek().kind == Token::Kind::Keyword && lex_.peek().text == kw;
  }

  void expect_keyword(const char* kw) {
    if (!at_keyword(kw)) fail(lex_.peek(), kw);
    lex_.take();
  }

  void expect_end() {
    if (lex_.peek().kind != Token::Kind::End) fail(lex_.peek(), "end of sketch");
  }

  RelPtr parse_select() {
    expect_keyword("select");
    SpecPtr spec = parse_speclist();
    expect_keyword("from");
    RelPtr rel = parse_rel();
    if (at_keyword("where")) {
      lex_.take();
      SpecPtr pred = parse_pred();
      rel = SketchRel::select(pred, rel);
    }
    return SketchRel::project(spec, rel);
  }

  SpecPtr parse_speclist() {
    SpecPtr spec = parse_specitem();
    while (lex_.peek().kind == Token::Kind::Comma) {
      lex_.take();
      spec = SketchSpec::col_list(spec, parse_specitem());
    }
    return spec;
  }

  SpecPtr parse_colhole() {
    if (lex_.peek().kind != Token::Kind::ColHole) fail(lex_.peek(), "column hole");
    Token t = lex_.take();
    return SketchSpec::col_hole(Hint(t.hint));
  }

  SpecPtr parse_specitem() {
    if (lex_.peek().kind == Token::Kind::Ident) {
      Token t = lex_.take();
      auto fn = agg_from_name(t.text);
      if (!fn) fail(t, "aggregate function");
      if (lex_.peek().kind != Token::Kind::LParen) fail(lex_.peek(), "(");
      lex_.take();
      SpecPtr col = parse_colhole();
      if (lex_.peek().kind != Token::Kind::RParen) fail(lex_.peek(), ")");
      lex_.take();
      SpecPtr agg = SketchSpec::agg_hole(*fn, col);
      if (at_keyword("by")) {
        lex_.take();
        SpecPtr key = parse_colhole();
        return SketchSpec::group_hole(agg, key);
      }
      return agg;
    }
    return parse_colhole();
  }

  RelPtr parse_rel() {
    RelPtr rel = parse_relatom();
    while (at_keyword("join")) {
      lex_.take();
      RelPtr right = parse_relatom();
      expect_keyword("on");
      SpecPtr h1 = parse_colhole();
      if (lex_.peek().kind != Token::Kind::Op || lex_.peek().text != "=") {
        fail(lex_.peek(), "=");
      }
      lex_.take();
      SpecPtr h2 = parse_colhole();
      rel = SketchRel::join(rel, h1, h2, right);
    }
    return rel;
  }

  RelPtr parse_relatom() {
    if (lex_.peek().kind == Token::Kind::TableHole) {
      Token t = lex_.take();
      return SketchRel::table_hole(Hint(t.hint));
    }
    if (lex_.peek().kind == Token::Kind::LParen) {
      lex_.take();
      RelPtr rel = at_keyword("select") ? parse_select() : parse_rel();
      if (lex_.peek().kind != Token::Kind::RParen) fail(lex_.peek(), ")");
      lex_.take();
      return rel;
    }
    fail(lex_.peek(), "table hole");
  }

  SpecPtr parse_pred() { return parse_or(); }

  SpecPtr parse_or() {
    SpecPtr lhs = parse_and();
    while (at_keyword("or")) {
      lex_.take();
      lhs = SketchSpec::disj(lhs, parse_and());
    }
    return lhs;
  }

  SpecPtr parse_and() {
    SpecPtr lhs = parse_unary();
    while (at_keyword("and")) {
      lex_.take();
      lhs = SketchSpec::conj(lhs, parse_unary());
    }
    return lhs;
  }

  SpecPtr parse_unary() {
    if (at_keyword("not")) {
      lex_.take();
      return SketchSpec::negate(parse_unary());
    }
    if (lex_.peek().kind == Token::Kind::LParen) {
      lex_.take();
      SpecPtr p = parse_pred();
      if (lex_.peek().kind != Token::Kind::RParen) fail(lex_.peek(), ")");
      lex_.take();
      return p;
    }
    return parse_atom();
  }

  SpecPtr parse_atom() {
    SpecPtr lhs = parse_colhole();
    if (lex_.peek().kind != Token::Kind::Op) fail(lex_.peek(), "comparison operator");
    Token op_tok = lex_.take();
    CompareOp op;
    if (op_tok.text == "<=") op = CompareOp::Le;
    else if (op_tok.text == "<") op = CompareOp::Lt;
    else if (op_tok.text == "=") op = CompareOp::Eq;
    else if (op_tok.text == ">") op = CompareOp::Gt;
    else if (op_tok.text == ">=") op = CompareOp::Ge;
    else fail(op_tok, "comparison operator");

    const Token& rhs = lex_.peek();
    switch (rhs.kind) {
      case Token::Kind::Number: {
        Token t = lex_.take();
        auto v = Value::parse_typed(t.text, BaseType::Number);
        if (!v) fail(t, "number");
        return SketchSpec::atom(lhs, op, SketchSpec::literal(*v));
      }
      case Token::Kind::String: {
        Token t = lex_.take();
        return SketchSpec::atom(lhs, op, SketchSpec::literal(Value::make_string(t.text)));
      }
      case Token::Kind::Keyword: {
        if (rhs.text == "true" || rhs.text == "false") {
          Token t = lex_.take();
          return SketchSpec::atom(lhs, op, SketchSpec::literal(Value::make_bool(t.text == "true")));
        }
        fail(rhs, "value, column hole, or subquery");
      }
      case Token::Kind::ColHole: {
        return SketchSpec::atom(lhs, op, parse_colhole());
      }
      case Token::Kind::LParen: {
        lex_.take();
        RelPtr sub = parse_select();
        if (lex_.peek().kind != Token::Kind::RParen) fail(lex_.peek(), ")");
        lex_.take();
        return SketchSpec::atom_rel(lhs, op, sub);
      }
      default:
        fail(rhs, "value, column hole, or subquery");
    }
    return nullptr;
  }

  Lexer lex_;
};

std::string print_hole(const Hint& hint, bool table) {
  std::string out = table ? "??" : "?";
  if (!hint.empty()) out += "[" + hint.display + "]";
  return out;
}

std::string print_pred_spec(const SpecPtr& spec, int parent_prec);
std::string print_rel_part(const RelPtr& rel, bool parenthesize_join);

std::string print_atom_rhs(const SketchSpec& atom) {
  if (atom.rhs_rel) return "(" + print_sketch(atom.rhs_rel) + ")";
  if (atom.rhs_spec->kind == SketchSpec::Kind::Literal) return atom.rhs_spec->value.sketch_text();
  return print_hole(atom.rhs_spec->hint, false);
}

std::string print_pred_spec(const SpecPtr& spec, int parent_prec) {
  // precedence: OR = 1, AND = 2, NOT = 3, atom = 4
  switch (spec->kind) {
    case SketchSpec::Kind::Or: {
      std::string s = print_pred_spec(spec->a, 1) + " OR " + print_pred_spec(spec->b, 1);
      return parent_prec > 1 ? "(" + s + ")" : s;
    }
    case SketchSpec::Kind::And: {
      std::string s = print_pred_spec(spec->a, 2) + " AND " + print_pred_spec(spec->b, 2);
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case SketchSpec::Kind::Not:
      return "NOT " + print_pred_spec(spec->a, 3);
    case SketchSpec::Kind::PredAtom:
      return print_hole(spec->a->hint, false) + " " + to_string(spec->op) + " " +
             print_atom_rhs(*spec);
    default:
      throw std::logic_error("not a predicate specifier");
  }
}

std::string print_rel_part(const RelPtr& rel, bool parenthesize_join) {
  switch (rel->kind) {
    case SketchRel::Kind::TableHole:
      return print_hole(rel->hint, true);
    case SketchRel::Kind::Join: {
      std::string s = print_rel_part(rel->left, false) + " JOIN " +
                      print_rel_part(rel->right, true) + " ON " +
                      print_hole(rel->left_hole->hint, false) + " = " +
                      print_hole(rel->right_hole->hint, false);
      return parenthesize_join ? "(" + s + ")" : s;
    }
    case SketchRel::Kind::Project:
      return "(" + print_sketch(rel) + ")";
    case SketchRel::Kind::Select:
      throw std::logic_error("selection cannot appear as a FROM item in sketch text");
  }
  return "";
}

}  // namespace

RelPtr parse_sketch(const std::string& text) {
  Parser p(text);
  return p.parse();
}

std::string print_spec(const SpecPtr& spec) {
  switch (spec->kind) {
    case SketchSpec::Kind::ColHole:
      return print_hole(spec->hint, false);
    case SketchSpec::Kind::AggHole:
      return to_string(spec->fn) + "(" + print_hole(spec->a->hint, false) + ")";
    case SketchSpec::Kind::GroupHole:
      return print_spec(spec->a) + " BY " + print_hole(spec->b->hint, false);
    case SketchSpec::Kind::ColList:
      return print_spec(spec->a) + ", " + print_spec(spec->b);
    case SketchSpec::Kind::Literal:
      return spec->value.sketch_text();
    case SketchSpec::Kind::PredAtom:
    case SketchSpec::Kind::And:
    case SketchSpec::Kind::Or:
    case SketchSpec::Kind::Not:
      return print_pred_spec(spec, 0);
  }
  return "";
}

std::string print_sketch(const RelPtr& sketch) {
  if (sketch->kind != SketchRel::Kind::Project) {
    throw std::logic_error("sketch text is always SELECT-rooted");
  }
  std::string out = "SELECT " + print_spec(sketch->spec) + " FROM ";
  RelPtr body = sketch->child;
  if (body->kind == SketchRel::Kind::Select) {
    out += print_rel_part(body->child, false);
    out += " WHERE " + print_pred_spec(body->spec, 0);
  } else {
    out += print_rel_part(body, false);
  }
  return out;
}

bool equal_spec(const SpecPtr& a, const SpecPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SketchSpec::Kind::ColHole:
      return a->hint == b->hint;
    case SketchSpec::Kind::AggHole:
      return a->fn == b->fn && equal_spec(a->a, b->a);
    case SketchSpec::Kind::GroupHole:
      return equal_spec(a->a, b->a) && equal_spec(a->b, b->b);
    case SketchSpec::Kind::ColList:
    case SketchSpec::Kind::And:
    case SketchSpec::Kind::Or:
      return equal_spec(a->a, b->a) && equal_spec(a->b, b->b);
    case SketchSpec::Kind::Not:
      return equal_spec(a->a, b->a);
    case SketchSpec::Kind::Literal:
      return a->value.type == b->value.type && a->value.raw == b->value.raw;
    case SketchSpec::Kind::PredAtom: {
      if (a->op != b->op || !equal_spec(a->a, b->a)) return false;
      if (static_cast<bool>(a->rhs_rel) != static_cast<bool>(b->rhs_rel)) return false;
      if (a->rhs_rel) return equal_rel(a->rhs_rel, b->rhs_rel);
      return equal_spec(a->rhs_spec, b->rhs_spec);
    }
  }
  return false;
}

bool equal_rel(const RelPtr& a, const RelPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SketchRel::Kind::TableHole:
      return a->hint == b->hint;
    case SketchRel::Kind::Project:
    case SketchRel::Kind::Select:
      return equal_spec(a->spec, b->spec) && equal_rel(a->child, b->child);
    case SketchRel::Kind::Join:
      return equal_rel(a->left, b->left) && equal_rel(a->right, b->right) &&
             equal_spec(a->left_hole, b->left_hole) && equal_spec(a->right_hole, b->right_hole);
  }
  return false;
}

bool equal_node(const SketchNode& a, const SketchNode& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<RelPtr>(a)) {
    return equal_rel(std::get<RelPtr>(a), std::get<RelPtr>(b));
  }
  return equal_spec(std::get<SpecPtr>(a), std::get<SpecPtr>(b));
}

std::vector<std::pair<RelPtr, SketchNode>> sub_relations(const RelPtr& rel) {
  switch (rel->kind) {
    case SketchRel::Kind::TableHole:
      return {};
    case SketchRel::Kind::Project:
    case SketchRel::Kind::Select:
      return {{rel->child, SketchNode(rel->spec)}};
    case SketchRel::Kind::Join:
      return {{rel->left, SketchNode(rel->left_hole)},
              {rel->right, SketchNode(rel->right_hole)}};
  }
  return {};
}

std::vector<SketchNode> sub_specifiers(const SpecPtr& spec) {
  switch (spec->kind) {
    case SketchSpec::Kind::GroupHole:
      return {SketchNode(spec->a), SketchNode(spec->b)};
    case SketchSpec::Kind::ColList:
    case SketchSpec::Kind::And:
    case SketchSpec::Kind::Or:
      return {SketchNode(spec->a), SketchNode(spec->b)};
    case SketchSpec::Kind::Not:
      return {SketchNode(spec->a)};
    case SketchSpec::Kind::PredAtom: {
      SketchNode rhs = spec->rhs_rel ? SketchNode(spec->rhs_rel) : SketchNode(spec->rhs_spec);
      return {SketchNode(spec->a), rhs};
    }
    case SketchSpec::Kind::ColHole:
    case SketchSpec::Kind::AggHole:
    case SketchSpec::Kind::Literal:
      return {};
  }
  return {};
}

std::string path_to_string(const SketchPath& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(path[i]);
  }
  return out.empty() ? "<root>" : out;
}

namespace {

[[noreturn]] void bad_path(const SketchPath& path) {
  throw std::out_of_range("sketch path " + path_to_string(path) + " does not resolve");
}

SketchNode child_of(const SketchNode& node, int idx, const SketchPath& path) {
  if (std::holds_alternative<RelPtr>(node)) {
    const RelPtr& rel = std::get<RelPtr>(node);
    switch (rel->kind) {
      case SketchRel::Kind::Project:
      case SketchRel::Kind::Select:
        if (idx == 0) return SketchNode(rel->spec);
        if (idx == 1) return SketchNode(rel->child);
        break;
      case SketchRel::Kind::Join:
        if (idx == 0) return SketchNode(rel->left);
        if (idx == 1) return SketchNode(rel->left_hole);
        if (idx == 2) return SketchNode(rel->right_hole);
        if (idx == 3) return SketchNode(rel->right);
        break;
      case SketchRel::Kind::TableHole:
        break;
    }
    bad_path(path);
  }
  const SpecPtr& spec = std::get<SpecPtr>(node);
  switch (spec->kind) {
    case SketchSpec::Kind::AggHole:
      if (idx == 0) return SketchNode(spec->a);
      break;
    case SketchSpec::Kind::GroupHole:
    case SketchSpec::Kind::ColList:
    case SketchSpec::Kind::And:
    case SketchSpec::Kind::Or:
      if (idx == 0) return SketchNode(spec->a);
      if (idx == 1) return SketchNode(spec->b);
      break;
    case SketchSpec::Kind::Not:
      if (idx == 0) return SketchNode(spec->a);
      break;
    case SketchSpec::Kind::PredAtom:
      if (idx == 0) return SketchNode(spec->a);
      if (idx == 1) return spec->rhs_rel ? SketchNode(spec->rhs_rel) : SketchNode(spec->rhs_spec);
      break;
    case SketchSpec::Kind::ColHole:
    case SketchSpec::Kind::Literal:
      break;
  }
  bad_path(path);
}

SketchNode replace_in(const SketchNode& node, const SketchPath& path, size_t depth,
                      const SketchNode& replacement) {
  if (depth == path.size()) {
    if (node.index() != replacement.index()) {
      throw std::invalid_argument("replacement does not match the slot at " +
                                  path_to_string(path));
    }
    return replacement;
  }
  int idx = path[depth];
  SketchNode new_child = replace_in(child_of(node, idx, path), path, depth + 1, replacement);

  if (std::holds_alternative<RelPtr>(node)) {
    auto rel = std::make_shared<SketchRel>(*std::get<RelPtr>(node));
    auto as_rel = [&]() { return std::get<RelPtr>(new_child); };
    auto as_spec = [&]() { return std::get<SpecPtr>(new_child); };
    switch (rel->kind) {
      case SketchRel::Kind::Project:
      case SketchRel::Kind::Select:
        if (idx == 0) rel->spec = as_spec();
        else rel->child = as_rel();
        break;
      case SketchRel::Kind::Join:
        if (idx == 0) rel->left = as_rel();
        else if (idx == 1) rel->left_hole = as_spec();
        else if (idx == 2) rel->right_hole = as_spec();
        else rel->right = as_rel();
        break;
      case SketchRel::Kind::TableHole:
        bad_path(path);
    }
    return SketchNode(RelPtr(rel));
  }

  auto spec = std::make_shared<SketchSpec>(*std::get<SpecPtr>(node));
  switch (spec->kind) {
    case SketchSpec::Kind::AggHole:
    case SketchSpec::Kind::Not:
      spec->a = std::get<SpecPtr>(new_child);
      break;
    case SketchSpec::Kind::GroupHole:
    case SketchSpec::Kind::ColList:
    case SketchSpec::Kind::And:
    case SketchSpec::Kind::Or:
      if (idx == 0) spec->a = std::get<SpecPtr>(new_child);
      else spec->b = std::get<SpecPtr>(new_child);
      break;
    case SketchSpec::Kind::PredAtom:
      if (idx == 0) {
        spec->a = std::get<SpecPtr>(new_child);
      } else if (std::holds_alternative<RelPtr>(new_child)) {
        spec->rhs_rel = std::get<RelPtr>(new_child);
        spec->rhs_spec = nullptr;
      } else {
        spec->rhs_spec = std::get<SpecPtr>(new_child);
        spec->rhs_rel = nullptr;
      }
      break;
    case SketchSpec::Kind::ColHole:
    case SketchSpec::Kind::Literal:
      bad_path(path);
  }
  if (spec->kind == SketchSpec::Kind::GroupHole) spec->fn = spec->a->fn;
  return SketchNode(SpecPtr(spec));
}

}  // namespace

SketchNode resolve_path(const RelPtr& root, const SketchPath& path) {
  SketchNode node = SketchNode(root);
  for (int idx : path) node = child_of(node, idx, path);
  return node;
}

RelPtr replace_path(const RelPtr& root, const SketchPath& path, const SketchNode& replacement) {
  SketchNode out = replace_in(SketchNode(root), path, 0, replacement);
  return std::get<RelPtr>(out);
}

}  // namespace sketchql
