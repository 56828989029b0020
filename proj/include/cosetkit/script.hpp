#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cosetkit/json_io.hpp"
#include "cosetkit/oracle.hpp"

namespace cosetkit {

// Script language:
//
//   group G = Z^2               group W = Dinf^1
//   subgroup A < G = span [[1,0]]
//   subgroup T < W = span [[2]] refl (0)
//   coset C1 = B + (1,0)
//   set Y = A | C1              operators: | & \ ; (v)+S left, S+(v) right
//   map M : G -> G2 = piece <cosetref> [minus <cosetref>, ...]
//                       base (v) -> (w) matrix [[..],..] [refl (q)]  ...
//   normalize Y | decompose Y | check Y | member Y (3,0) | equal Y Z
//   empty Y | graph M | ungraph S : G -> G2 | compare Y Z radius 20
//
// '#' starts a comment; statements are whitespace-insensitive. Elements on
// sign carriers take a '~' suffix for sign -1: (3)~.

struct ParseError : Error {
  int line, col;
  ParseError(int l, int c, const std::string& msg)
      : Error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

struct SemanticError : Error {
  explicit SemanticError(const std::string& msg) : Error("error: " + msg) {}
};

namespace script {

struct ElementLit {
  std::vector<Int> coords;
  bool reflected = false;  // '~' suffix

  bool operator==(const ElementLit& o) const {
    return coords == o.coords && reflected == o.reflected;
  }
};

// Unresolved set expression syntax (names bound at run time).
struct ExprSyn;
using ExprPtr = std::shared_ptr<const ExprSyn>;
struct ExprSyn {
  enum class K { Ref, Union, Intersect, Diff, LTrans, RTrans } k;
  std::string name;        // Ref
  ExprPtr a, b;            // children
  ElementLit g;            // translations

  static ExprPtr ref(std::string n) {
    auto e = std::make_shared<ExprSyn>();
    e->k = K::Ref;
    e->name = std::move(n);
    return e;
  }
  static ExprPtr binary(K k, ExprPtr x, ExprPtr y) {
    auto e = std::make_shared<ExprSyn>();
    e->k = k;
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
  }
  static ExprPtr trans(K k, ElementLit g, ExprPtr x) {
    auto e = std::make_shared<ExprSyn>();
    e->k = k;
    e->g = std::move(g);
    e->a = std::move(x);
    return e;
  }
};

struct MapPieceSyn {
  std::string domain_name;
  std::optional<ElementLit> domain_offset;
  std::vector<std::pair<std::string, std::optional<ElementLit>>> removals;
  ElementLit base_src;
  ElementLit base_dst;
  std::vector<std::vector<Int>> matrix;
  std::optional<ElementLit> refl_image;
};

struct Statement {
  enum class K {
    Group, SubgroupDecl, CosetDecl, SetDecl, MapDecl,
    Normalize, Decompose, Check, Member, Equal, Empty, Graph, Ungraph, Compare
  } k;
  std::string name;                 // declared name or first command argument
  std::string aux, aux2;            // second name / group refs
  bool semidirect = false;          // group decl
  std::size_t dim = 0;              // group decl
  std::vector<std::vector<Int>> matrix;  // subgroup span
  std::optional<ElementLit> refl;   // subgroup refl
  ElementLit element;               // coset offset / member point
  ExprPtr expr;                     // set decl
  std::vector<MapPieceSyn> pieces;  // map decl
  Int radius = 0;                   // compare
};

// ---- lexer ----

struct Token {
  enum class K { Ident, Int, Punct, End } k;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(&src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    const std::string& src = *src_;
    while (pos_ < src.size()) {
      char c = src[pos_];
      if (c == '#') {
        while (pos_ < src.size() && src[pos_] != '\n') step();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        step();
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src.size()) {
      tok_.k = Token::K::End;
      tok_.text.clear();
      return;
    }
    char c = src[pos_];
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src.size() &&
             (isalnum(static_cast<unsigned char>(src[pos_])) || src[pos_] == '_')) {
        s += src[pos_];
        step();
      }
      tok_.k = Token::K::Ident;
      tok_.text = std::move(s);
      return;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src.size() && isdigit(static_cast<unsigned char>(src[pos_]))) {
        s += src[pos_];
        step();
      }
      tok_.k = Token::K::Int;
      tok_.text = std::move(s);
      return;
    }
    if (c == '-' && pos_ + 1 < src.size() && src[pos_ + 1] == '>') {
      step();
      step();
      tok_.k = Token::K::Punct;
      tok_.text = "->";
      return;
    }
    if (c == '-' && pos_ + 1 < src.size() && isdigit(static_cast<unsigned char>(src[pos_ + 1]))) {
      std::string s = "-";
      step();
      while (pos_ < src.size() && isdigit(static_cast<unsigned char>(src[pos_]))) {
        s += src[pos_];
        step();
      }
      tok_.k = Token::K::Int;
      tok_.text = std::move(s);
      return;
    }
    tok_.k = Token::K::Punct;
    tok_.text = std::string(1, c);
    step();
  }

  void step() {
    if ((*src_)[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string* src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---- parser ----

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  std::vector<Statement> parse_script() {
    std::vector<Statement> out;
    while (lex_.peek().k != Token::K::End) out.push_back(parse_statement());
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(lex_.peek().line, lex_.peek().col, msg);
  }

  std::string expect_ident() {
    if (lex_.peek().k != Token::K::Ident) fail("expected an identifier");
    return lex_.take().text;
  }

  Int expect_int() {
    if (lex_.peek().k != Token::K::Int) fail("expected an integer");
    return from_decimal(lex_.take().text);
  }

  void expect_punct(const std::string& p) {
    if (lex_.peek().k != Token::K::Punct || lex_.peek().text != p)
      fail("expected '" + p + "'");
    lex_.take();
  }

  bool peek_punct(const std::string& p) {
    return lex_.peek().k == Token::K::Punct && lex_.peek().text == p;
  }

  bool peek_ident(const std::string& s) {
    return lex_.peek().k == Token::K::Ident && lex_.peek().text == s;
  }

  void expect_keyword(const std::string& s) {
    if (!peek_ident(s)) fail("expected '" + s + "'");
    lex_.take();
  }

  ElementLit parse_element() {
    expect_punct("(");
    ElementLit e;
    e.coords.push_back(expect_int());
    while (peek_punct(",")) {
      lex_.take();
      e.coords.push_back(expect_int());
    }
    expect_punct(")");
    if (peek_punct("~")) {
      lex_.take();
      e.reflected = true;
    }
    return e;
  }

  std::vector<Int> parse_row() {
    expect_punct("[");
    std::vector<Int> row;
    if (!peek_punct("]")) {
      row.push_back(expect_int());
      while (peek_punct(",")) {
        lex_.take();
        row.push_back(expect_int());
      }
    }
    expect_punct("]");
    return row;
  }

  std::vector<std::vector<Int>> parse_matrix() {
    expect_punct("[");
    std::vector<std::vector<Int>> m;
    if (!peek_punct("]")) {
      m.push_back(parse_row());
      while (peek_punct(",")) {
        lex_.take();
        m.push_back(parse_row());
      }
    }
    expect_punct("]");
    return m;
  }

  // precedence: '|' < '&' < '\'
  ExprPtr parse_expr() {
    ExprPtr e = parse_inter();
    while (peek_punct("|")) {
      lex_.take();
      e = ExprSyn::binary(ExprSyn::K::Union, e, parse_inter());
    }
    return e;
  }

  ExprPtr parse_inter() {
    ExprPtr e = parse_diff();
    while (peek_punct("&")) {
      lex_.take();
      e = ExprSyn::binary(ExprSyn::K::Intersect, e, parse_diff());
    }
    return e;
  }

  ExprPtr parse_diff() {
    ExprPtr e = parse_prim();
    while (peek_punct("\\")) {
      lex_.take();
      e = ExprSyn::binary(ExprSyn::K::Diff, e, parse_prim());
    }
    return e;
  }

  ExprPtr parse_prim() {
    if (peek_punct("(")) {
      // either a left-translating element literal or a parenthesized expr:
      // an element starts with '(' INT
      // disambiguate by scanning: element = '(' ints ')' followed by '+'
      // Simpler rule: '(' INT ... ')' ['~'] '+' prim  is a left translate.
      Lexer saved = lex_;
      bool is_element = try_element_translate();
      lex_ = saved;
      if (is_element) {
        ElementLit g = parse_element();
        expect_punct("+");
        ExprPtr inner = parse_prim();
        return ExprSyn::trans(ExprSyn::K::LTrans, std::move(g), inner);
      }
      lex_.take();  // '('
      ExprPtr e = parse_expr();
      expect_punct(")");
      return parse_right_translates(e);
    }
    std::string name = expect_ident();
    return parse_right_translates(ExprSyn::ref(name));
  }

  // trailing "+ (v)" are right translates
  ExprPtr parse_right_translates(ExprPtr e) {
    while (peek_punct("+")) {
      lex_.take();
      ElementLit g = parse_element();
      e = ExprSyn::trans(ExprSyn::K::RTrans, std::move(g), e);
    }
    return e;
  }

  bool try_element_translate() {
    if (!peek_punct("(")) return false;
    lex_.take();
    if (lex_.peek().k != Token::K::Int) return false;
    lex_.take();
    while (peek_punct(",")) {
      lex_.take();
      if (lex_.peek().k != Token::K::Int) return false;
      lex_.take();
    }
    if (!peek_punct(")")) return false;
    lex_.take();
    if (peek_punct("~")) lex_.take();
    return peek_punct("+");
  }

  std::pair<std::string, std::optional<ElementLit>> parse_cosetref() {
    std::string name = expect_ident();
    std::optional<ElementLit> off;
    if (peek_punct("+")) {
      lex_.take();
      off = parse_element();
    }
    return {name, off};
  }

  MapPieceSyn parse_map_piece() {
    expect_keyword("piece");
    MapPieceSyn p;
    auto [dn, off] = parse_cosetref();
    p.domain_name = dn;
    p.domain_offset = off;
    if (peek_ident("minus")) {
      lex_.take();
      p.removals.push_back(parse_cosetref());
      while (peek_punct(",")) {
        lex_.take();
        p.removals.push_back(parse_cosetref());
      }
    }
    expect_keyword("base");
    p.base_src = parse_element();
    expect_punct("->");
    p.base_dst = parse_element();
    expect_keyword("matrix");
    p.matrix = parse_matrix();
    if (peek_ident("refl")) {
      lex_.take();
      p.refl_image = parse_element();
    }
    return p;
  }

  Statement parse_statement() {
    if (lex_.peek().k != Token::K::Ident) fail("expected a statement keyword");
    std::string kw = lex_.take().text;
    Statement s;
    if (kw == "group") {
      s.k = Statement::K::Group;
      s.name = expect_ident();
      expect_punct("=");
      std::string base = expect_ident();
      if (base == "Z") s.semidirect = false;
      else if (base == "Dinf") s.semidirect = true;
      else fail("expected 'Z' or 'Dinf'");
      expect_punct("^");
      Int n = expect_int();
      if (n < 1) fail("group dimension must be at least 1");
      s.dim = static_cast<std::size_t>(n);
      return s;
    }
    if (kw == "subgroup") {
      s.k = Statement::K::SubgroupDecl;
      s.name = expect_ident();
      expect_punct("<");
      s.aux = expect_ident();
      expect_punct("=");
      expect_keyword("span");
      s.matrix = parse_matrix();
      if (peek_ident("refl")) {
        lex_.take();
        s.refl = parse_element();
      }
      return s;
    }
    if (kw == "coset") {
      s.k = Statement::K::CosetDecl;
      s.name = expect_ident();
      expect_punct("=");
      s.aux = expect_ident();
      expect_punct("+");
      s.element = parse_element();
      return s;
    }
    if (kw == "set") {
      s.k = Statement::K::SetDecl;
      s.name = expect_ident();
      expect_punct("=");
      s.expr = parse_expr();
      return s;
    }
    if (kw == "map") {
      s.k = Statement::K::MapDecl;
      s.name = expect_ident();
      expect_punct(":");
      s.aux = expect_ident();
      expect_punct("->");
      s.aux2 = expect_ident();
      expect_punct("=");
      while (peek_ident("piece")) s.pieces.push_back(parse_map_piece());
      if (s.pieces.empty()) fail("map needs at least one piece");
      return s;
    }
    if (kw == "normalize" || kw == "decompose" || kw == "check" || kw == "empty" ||
        kw == "graph") {
      s.k = kw == "normalize"   ? Statement::K::Normalize
            : kw == "decompose" ? Statement::K::Decompose
            : kw == "check"     ? Statement::K::Check
            : kw == "empty"     ? Statement::K::Empty
                                : Statement::K::Graph;
      s.name = expect_ident();
      return s;
    }
    if (kw == "ungraph") {
      s.k = Statement::K::Ungraph;
      s.name = expect_ident();
      expect_punct(":");
      s.aux = expect_ident();
      expect_punct("->");
      s.aux2 = expect_ident();
      return s;
    }
    if (kw == "member") {
      s.k = Statement::K::Member;
      s.name = expect_ident();
      s.element = parse_element();
      return s;
    }
    if (kw == "equal") {
      s.k = Statement::K::Equal;
      s.name = expect_ident();
      s.aux = expect_ident();
      return s;
    }
    if (kw == "compare") {
      s.k = Statement::K::Compare;
      s.name = expect_ident();
      s.aux = expect_ident();
      expect_keyword("radius");
      s.radius = expect_int();
      return s;
    }
    throw ParseError(lex_.peek().line, lex_.peek().col, "unknown statement '" + kw + "'");
  }

  Lexer lex_;
};

// ---- printer (canonical form; reparsing yields the same statement list) ----

inline std::string print_element(const ElementLit& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (i) s += ",";
    s += to_decimal(e.coords[i]);
  }
  s += ")";
  if (e.reflected) s += "~";
  return s;
}

inline std::string print_matrix(const std::vector<std::vector<Int>>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) s += ",";
      s += to_decimal(m[i][j]);
    }
    s += "]";
  }
  return s + "]";
}

inline std::string print_expr(const ExprPtr& e) {
  switch (e->k) {
    case ExprSyn::K::Ref: return e->name;
    case ExprSyn::K::Union: return "(" + print_expr(e->a) + " | " + print_expr(e->b) + ")";
    case ExprSyn::K::Intersect: return "(" + print_expr(e->a) + " & " + print_expr(e->b) + ")";
    case ExprSyn::K::Diff: return "(" + print_expr(e->a) + " \\ " + print_expr(e->b) + ")";
    case ExprSyn::K::LTrans: return print_element(e->g) + " + (" + print_expr(e->a) + ")";
    case ExprSyn::K::RTrans: return "(" + print_expr(e->a) + ") + " + print_element(e->g);
  }
  throw InternalError("unhandled expression syntax kind");
}

inline std::string print_statement(const Statement& s) {
  switch (s.k) {
    case Statement::K::Group:
      return "group " + s.name + " = " + (s.semidirect ? "Dinf" : "Z") + "^" +
             std::to_string(s.dim);
    case Statement::K::SubgroupDecl: {
      std::string out = "subgroup " + s.name + " < " + s.aux + " = span " + print_matrix(s.matrix);
      if (s.refl) out += " refl " + print_element(*s.refl);
      return out;
    }
    case Statement::K::CosetDecl:
      return "coset " + s.name + " = " + s.aux + " + " + print_element(s.element);
    case Statement::K::SetDecl: return "set " + s.name + " = " + print_expr(s.expr);
    case Statement::K::MapDecl: {
      std::string out = "map " + s.name + " : " + s.aux + " -> " + s.aux2 + " =";
      for (const MapPieceSyn& p : s.pieces) {
        out += "\n  piece " + p.domain_name;
        if (p.domain_offset) out += " + " + print_element(*p.domain_offset);
        for (std::size_t i = 0; i < p.removals.size(); ++i) {
          out += i == 0 ? " minus " : ", ";
          out += p.removals[i].first;
          if (p.removals[i].second) out += " + " + print_element(*p.removals[i].second);
        }
        out += " base " + print_element(p.base_src) + " -> " + print_element(p.base_dst);
        out += " matrix " + print_matrix(p.matrix);
        if (p.refl_image) out += " refl " + print_element(*p.refl_image);
      }
      return out;
    }
    case Statement::K::Normalize: return "normalize " + s.name;
    case Statement::K::Decompose: return "decompose " + s.name;
    case Statement::K::Check: return "check " + s.name;
    case Statement::K::Member: return "member " + s.name + " " + print_element(s.element);
    case Statement::K::Equal: return "equal " + s.name + " " + s.aux;
    case Statement::K::Empty: return "empty " + s.name;
    case Statement::K::Graph: return "graph " + s.name;
    case Statement::K::Ungraph: return "ungraph " + s.name + " : " + s.aux + " -> " + s.aux2;
    case Statement::K::Compare:
      return "compare " + s.name + " " + s.aux + " radius " + to_decimal(s.radius);
  }
  throw InternalError("unhandled statement kind");
}

inline std::string print_script(const std::vector<Statement>& script) {
  std::string out;
  for (const Statement& s : script) out += print_statement(s) + "\n";
  return out;
}

inline bool statements_equal(const Statement& a, const Statement& b) {
  return print_statement(a) == print_statement(b);
}

}  // namespace script

struct RunOptions {
  bool json_format = false;
  Int window_radius = 20;
  std::string out_dir = ".";
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> written_files;
};

namespace script {

class Runner {
 public:
  Runner(const RunOptions& opt, std::ostream& out) : opt_(opt), out_(out) {}

  RunResult run(const std::vector<Statement>& stmts) {
    RunResult res;
    try {
      for (const Statement& s : stmts) execute(s);
    } catch (const SemanticError& e) {
      out_ << e.what() << "\n";
      res.exit_code = 2;
      res.written_files = written_;
      return res;
    }
    res.exit_code = failed_ ? 1 : 0;
    res.written_files = written_;
    return res;
  }

 private:
  struct MapEntry {
    PiecewiseAffineMap map;
    GroupCarrier src, tgt;
  };

  const RunOptions& opt_;
  std::ostream& out_;
  bool failed_ = false;
  std::vector<std::string> written_;
  std::map<std::string, GroupCarrier> groups_;
  std::map<std::string, Subgroup> subgroups_;
  std::map<std::string, Coset> cosets_;
  std::map<std::string, SetExpr> sets_;
  std::map<std::string, MapEntry> maps_;
  std::map<std::string, DecompositionCertificate> certs_;

  void declare(const std::string& name) {
    if (groups_.count(name) || subgroups_.count(name) || cosets_.count(name) ||
        sets_.count(name) || maps_.count(name))
      throw SemanticError("name already declared: " + name);
  }

  const GroupCarrier& group(const std::string& name) {
    auto it = groups_.find(name);
    if (it == groups_.end()) throw SemanticError("unknown group: " + name);
    return it->second;
  }

  GroupElement element(const GroupCarrier& c, const ElementLit& e) {
    if (e.coords.size() != c.dim)
      throw SemanticError("element dimension mismatch");
    if (e.reflected && !c.semidirect)
      throw SemanticError("sign -1 element on an abelian group");
    return GroupElement(c, e.coords, e.reflected ? -1 : 1);
  }

  Coset resolve_cosetref(const std::string& name, const std::optional<ElementLit>& off) {
    if (auto it = cosets_.find(name); it != cosets_.end()) {
      if (off) throw SemanticError("offset on a coset name: " + name);
      return it->second;
    }
    if (auto it = subgroups_.find(name); it != subgroups_.end()) {
      const Subgroup& h = it->second;
      GroupElement rep = off ? element(h.carrier(), *off) : identity(h.carrier());
      return Coset(h, rep);
    }
    throw SemanticError("unknown subgroup or coset: " + name);
  }

  SetExpr resolve_expr(const ExprPtr& e) {
    switch (e->k) {
      case ExprSyn::K::Ref: {
        const std::string& n = e->name;
        if (auto it = sets_.find(n); it != sets_.end()) return it->second;
        if (auto it = cosets_.find(n); it != cosets_.end()) return SetExpr::atom(it->second);
        if (auto it = subgroups_.find(n); it != subgroups_.end())
          return SetExpr::atom(Coset::at_identity(it->second));
        if (auto it = groups_.find(n); it != groups_.end())
          return SetExpr::full_set(it->second);
        throw SemanticError("unknown name in set expression: " + n);
      }
      case ExprSyn::K::Union:
        return SetExpr::union_of({resolve_expr(e->a), resolve_expr(e->b)});
      case ExprSyn::K::Intersect:
        return SetExpr::intersect_of({resolve_expr(e->a), resolve_expr(e->b)});
      case ExprSyn::K::Diff:
        return SetExpr::diff(resolve_expr(e->a), resolve_expr(e->b));
      case ExprSyn::K::LTrans: {
        SetExpr inner = resolve_expr(e->a);
        auto c = inner.carrier();
        if (!c) throw SemanticError("cannot infer the carrier of a translated expression");
        return SetExpr::ltranslate(element(*c, e->g), inner);
      }
      case ExprSyn::K::RTrans: {
        SetExpr inner = resolve_expr(e->a);
        auto c = inner.carrier();
        if (!c) throw SemanticError("cannot infer the carrier of a translated expression");
        return SetExpr::rtranslate(inner, element(*c, e->g));
      }
    }
    throw InternalError("unhandled expression syntax kind");
  }

  const SetExpr& named_set(const std::string& name) {
    auto it = sets_.find(name);
    if (it == sets_.end()) throw SemanticError("unknown set: " + name);
    return it->second;
  }

  void emit_bool(const std::string& cmd, const std::string& args, bool value) {
    if (opt_.json_format) {
      Json j;
      j["cmd"] = cmd;
      j["args"] = args;
      j["result"] = value;
      out_ << j.dump() << "\n";
    } else {
      out_ << cmd << " " << args << ": " << (value ? "true" : "false") << "\n";
    }
  }

  std::string write_file(const std::string& filename, const std::string& content) {
    std::string path = opt_.out_dir.empty() ? filename : opt_.out_dir + "/" + filename;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SemanticError("cannot write " + path);
    f << content;
    written_.push_back(path);
    return path;
  }

  void execute(const Statement& s) {
    using K = Statement::K;
    switch (s.k) {
      case K::Group: {
        declare(s.name);
        groups_.emplace(s.name, s.semidirect ? GroupCarrier::zn_semidirect_c2(s.dim)
                                             : GroupCarrier::zn(s.dim));
        return;
      }
      case K::SubgroupDecl: {
        declare(s.name);
        const GroupCarrier& g = group(s.aux);
        for (const auto& row : s.matrix)
          if (row.size() != g.dim) throw SemanticError("span row dimension mismatch");
        Lattice l = Lattice::from_generators(g.dim, s.matrix);
        try {
          if (s.refl) {
            if (!g.semidirect) throw SemanticError("refl part on an abelian group");
            subgroups_.emplace(s.name, Subgroup::with_reflection(g, l, s.refl->coords));
          } else {
            subgroups_.emplace(s.name, Subgroup::lattice_subgroup(g, l));
          }
        } catch (const NotASubgroup& e) {
          throw SemanticError(std::string("invalid subgroup ") + s.name + ": " + e.what());
        }
        return;
      }
      case K::CosetDecl: {
        declare(s.name);
        auto it = subgroups_.find(s.aux);
        if (it == subgroups_.end()) throw SemanticError("unknown subgroup: " + s.aux);
        cosets_.emplace(s.name, Coset(it->second, element(it->second.carrier(), s.element)));
        return;
      }
      case K::SetDecl: {
        declare(s.name);
        sets_.emplace(s.name, resolve_expr(s.expr));
        return;
      }
      case K::MapDecl: {
        declare(s.name);
        const GroupCarrier& src = group(s.aux);
        const GroupCarrier& tgt = group(s.aux2);
        PiecewiseAffineMap m;
        for (const MapPieceSyn& ps : s.pieces) {
          Coset dom = resolve_cosetref(ps.domain_name, ps.domain_offset);
          OmegaPiece piece{dom, {}};
          for (const auto& [rn, roff] : ps.removals)
            piece.removals.push_back(resolve_cosetref(rn, roff));
          AffinePiece ap{dom, element(src, ps.base_src), element(tgt, ps.base_dst),
                         ps.matrix, std::nullopt};
          if (ps.refl_image) ap.refl_image = element(tgt, *ps.refl_image);
          try {
            ap.validate();
          } catch (const Error& e) {
            throw SemanticError("invalid map piece in " + s.name + ": " + e.what());
          }
          m.pieces.push_back(PwPiece{std::move(piece), std::move(ap)});
        }
        try {
          m.validate();
        } catch (const Error& e) {
          throw SemanticError("invalid map " + s.name + ": " + e.what());
        }
        maps_.emplace(s.name, MapEntry{std::move(m), src, tgt});
        return;
      }
      case K::Normalize: {
        OmegaNormalForm nf = to_omega_normal_form(named_set(s.name));
        if (opt_.json_format) {
          Json j;
          j["cmd"] = "normalize";
          j["set"] = s.name;
          j["normal_form"] = to_json(nf);
          out_ << j.dump() << "\n";
        } else {
          out_ << "normalize " << s.name << ": " << nf.pieces.size() << " piece(s)\n";
          for (const OmegaPiece& p : nf.pieces)
            out_ << "  " << p.key() << "\n";
        }
        return;
      }
      case K::Decompose: {
        DecompositionCertificate cert = decompose(named_set(s.name));
        certs_[s.name] = cert;
        std::string path = write_file(s.name + ".cert.json", dump_json(to_json(cert)));
        std::string reason;
        bool ok = check_certificate(cert, &reason);
        if (!ok) failed_ = true;
        if (opt_.json_format) {
          Json j;
          j["cmd"] = "decompose";
          j["set"] = s.name;
          j["subgroups"] = cert.subgroups.size();
          j["certificate"] = path;
          j["verified"] = ok;
          out_ << j.dump() << "\n";
        } else {
          out_ << "decompose " << s.name << ": " << cert.subgroups.size()
               << " subgroup(s), certificate " << path << (ok ? " (verified)" : " (FAILED)")
               << "\n";
        }
        return;
      }
      case K::Check: {
        auto it = certs_.find(s.name);
        DecompositionCertificate cert =
            it != certs_.end() ? it->second : decompose(named_set(s.name));
        std::string reason;
        bool ok = check_certificate(cert, &reason);
        if (!ok) failed_ = true;
        emit_bool("check", s.name, ok);
        if (!ok && !opt_.json_format) out_ << "  reason: " << reason << "\n";
        return;
      }
      case K::Member: {
        const SetExpr& e = named_set(s.name);
        auto c = e.carrier();
        if (!c) throw SemanticError("set has no carrier: " + s.name);
        bool v = eval_membership(e, element(*c, s.element));
        emit_bool("member", s.name + " " + print_element(s.element), v);
        return;
      }
      case K::Equal: {
        bool v = sets_equal(named_set(s.name), named_set(s.aux));
        emit_bool("equal", s.name + " " + s.aux, v);
        return;
      }
      case K::Empty: {
        emit_bool("empty", s.name, is_empty(named_set(s.name)));
        return;
      }
      case K::Graph: {
        auto it = maps_.find(s.name);
        if (it == maps_.end()) throw SemanticError("unknown map: " + s.name);
        SetExpr gamma = graph_of(it->second.map, it->second.src, it->second.tgt);
        std::string gname = s.name + "_graph";
        sets_.erase(gname);
        sets_.emplace(gname, gamma);
        if (opt_.json_format) {
          Json j;
          j["cmd"] = "graph";
          j["map"] = s.name;
          j["set"] = gname;
          j["expr"] = to_json(gamma);
          out_ << j.dump() << "\n";
        } else {
          out_ << "graph " << s.name << ": stored as set " << gname << "\n";
        }
        return;
      }
      case K::Ungraph: {
        const SetExpr& e = named_set(s.name);
        const GroupCarrier& src = group(s.aux);
        const GroupCarrier& tgt = group(s.aux2);
        PiecewiseAffineMap m;
        try {
          m = pw_affine_from_graph(e, src, tgt);
        } catch (const NotAGraph& err) {
          throw SemanticError(std::string("ungraph ") + s.name + ": " + err.what());
        }
        std::string path = write_file(s.name + ".map.json", dump_json(to_json(m)));
        if (opt_.json_format) {
          Json j;
          j["cmd"] = "ungraph";
          j["set"] = s.name;
          j["pieces"] = m.pieces.size();
          j["file"] = path;
          out_ << j.dump() << "\n";
        } else {
          out_ << "ungraph " << s.name << ": " << m.pieces.size() << " piece(s), "
               << path << "\n";
        }
        return;
      }
      case K::Compare: {
        const SetExpr& a = named_set(s.name);
        const SetExpr& b = named_set(s.aux);
        auto c = a.carrier();
        if (!c) throw SemanticError("set has no carrier: " + s.name);
        auto cx = compare_on_window(a, b, Window{*c, s.radius});
        if (opt_.json_format) {
          Json j;
          j["cmd"] = "compare";
          j["sets"] = s.name + " " + s.aux;
          j["radius"] = to_decimal(s.radius);
          j["agree"] = !cx.has_value();
          if (cx) j["counterexample"] = to_json(*cx);
          out_ << j.dump() << "\n";
        } else {
          out_ << "compare " << s.name << " " << s.aux << " radius " << to_decimal(s.radius)
               << ": " << (cx ? "disagree at " + cx->key() : "agree") << "\n";
        }
        if (cx) failed_ = true;
        return;
      }
    }
    throw InternalError("unhandled statement kind");
  }
};

}  // namespace script

// Parse and execute a script. Exit codes: 0 success, 1 a verification-style
// command failed, 2 parse or semantic error.
inline RunResult run_script(const std::string& source, const RunOptions& opt,
                            std::ostream& out) {
  std::vector<script::Statement> stmts;
  try {
    script::Parser parser(source);
    stmts = parser.parse_script();
  } catch (const ParseError& e) {
    out << e.what() << "\n";
    return RunResult{2, {}};
  }
  script::Runner runner(opt, out);
  return runner.run(stmts);
}

}  // namespace cosetkit
