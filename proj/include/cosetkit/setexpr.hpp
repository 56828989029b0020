#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosetkit/subgroup.hpp"

namespace cosetkit {

// Boolean set expression over coset atoms, with left and right translation
// and free symbols for witness expressions. Immutable; nodes are shared.
class SetExpr {
 public:
  enum class Kind { Atom, Empty, Full, Union, Intersect, Diff, LTranslate, RTranslate, Symbol };

  SetExpr() = default;  // empty handle; only produced by default construction

  static SetExpr atom(Coset c) {
    auto n = node(Kind::Atom);
    n->coset = std::move(c);
    return SetExpr(std::move(n));
  }

  static SetExpr empty_set(const GroupCarrier& carrier) {
    auto n = node(Kind::Empty);
    n->carrier = carrier;
    return SetExpr(std::move(n));
  }

  static SetExpr full_set(const GroupCarrier& carrier) {
    auto n = node(Kind::Full);
    n->carrier = carrier;
    return SetExpr(std::move(n));
  }

  static SetExpr union_of(std::vector<SetExpr> args) {
    if (args.empty()) throw Error("union of nothing needs a carrier; use empty_set");
    if (args.size() == 1) return args[0];
    auto n = node(Kind::Union);
    n->args = std::move(args);
    return SetExpr(std::move(n));
  }

  static SetExpr intersect_of(std::vector<SetExpr> args) {
    if (args.empty()) throw Error("intersection of nothing needs a carrier; use full_set");
    if (args.size() == 1) return args[0];
    auto n = node(Kind::Intersect);
    n->args = std::move(args);
    return SetExpr(std::move(n));
  }

  static SetExpr diff(SetExpr lhs, SetExpr rhs) {
    auto n = node(Kind::Diff);
    n->args = {std::move(lhs), std::move(rhs)};
    return SetExpr(std::move(n));
  }

  static SetExpr ltranslate(GroupElement g, SetExpr e) {
    if (g.is_identity()) return e;
    auto n = node(Kind::LTranslate);
    n->element = std::move(g);
    n->args = {std::move(e)};
    return SetExpr(std::move(n));
  }

  static SetExpr rtranslate(SetExpr e, GroupElement g) {
    if (g.is_identity()) return e;
    auto n = node(Kind::RTranslate);
    n->element = std::move(g);
    n->args = {std::move(e)};
    return SetExpr(std::move(n));
  }

  static SetExpr symbol(std::string name) {
    auto n = node(Kind::Symbol);
    n->name = std::move(name);
    return SetExpr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const Coset& atom_coset() const { return *node_->coset; }
  const std::vector<SetExpr>& args() const { return node_->args; }
  const GroupElement& translation() const { return *node_->element; }
  const std::string& symbol_name() const { return node_->name; }
  const GroupCarrier& literal_carrier() const { return *node_->carrier; }

  bool valid() const { return node_ != nullptr; }

  using Bindings = std::map<std::string, SetExpr>;

  // Carrier of the expression, when determined by an atom or literal.
  std::optional<GroupCarrier> carrier() const {
    switch (kind()) {
      case Kind::Atom: return atom_coset().carrier();
      case Kind::Empty:
      case Kind::Full: return literal_carrier();
      case Kind::Symbol: return std::nullopt;
      case Kind::LTranslate:
      case Kind::RTranslate: return translation().carrier;
      default:
        for (const SetExpr& a : args())
          if (auto c = a.carrier()) return c;
        return std::nullopt;
    }
  }

  bool has_symbol() const {
    switch (kind()) {
      case Kind::Symbol: return true;
      case Kind::Atom:
      case Kind::Empty:
      case Kind::Full: return false;
      default:
        for (const SetExpr& a : args())
          if (a.has_symbol()) return true;
        return false;
    }
  }

  SetExpr substitute(const Bindings& bindings) const {
    switch (kind()) {
      case Kind::Symbol: {
        auto it = bindings.find(symbol_name());
        if (it == bindings.end()) throw UnboundSymbol(symbol_name());
        return it->second;
      }
      case Kind::Atom:
      case Kind::Empty:
      case Kind::Full: return *this;
      case Kind::Union: {
        std::vector<SetExpr> xs;
        for (const SetExpr& a : args()) xs.push_back(a.substitute(bindings));
        return union_of(std::move(xs));
      }
      case Kind::Intersect: {
        std::vector<SetExpr> xs;
        for (const SetExpr& a : args()) xs.push_back(a.substitute(bindings));
        return intersect_of(std::move(xs));
      }
      case Kind::Diff:
        return diff(args()[0].substitute(bindings), args()[1].substitute(bindings));
      case Kind::LTranslate:
        return ltranslate(translation(), args()[0].substitute(bindings));
      case Kind::RTranslate:
        return rtranslate(args()[0].substitute(bindings), translation());
    }
    throw InternalError("unhandled expression kind");
  }

  std::string key() const {
    switch (kind()) {
      case Kind::Atom: return "A" + atom_coset().key();
      case Kind::Empty: return "0";
      case Kind::Full: return "1{" + literal_carrier().key() + "}";
      case Kind::Union:
      case Kind::Intersect: {
        std::string s = kind() == Kind::Union ? "U(" : "I(";
        for (std::size_t i = 0; i < args().size(); ++i) {
          if (i) s += ",";
          s += args()[i].key();
        }
        return s + ")";
      }
      case Kind::Diff: return "D(" + args()[0].key() + "," + args()[1].key() + ")";
      case Kind::LTranslate: return "l[" + translation().key() + "]" + args()[0].key();
      case Kind::RTranslate: return "r[" + translation().key() + "]" + args()[0].key();
      case Kind::Symbol: return "$" + symbol_name();
    }
    throw InternalError("unhandled expression kind");
  }

 private:
  struct Node {
    Kind kind;
    std::optional<Coset> coset;            // Atom
    std::optional<GroupElement> element;   // translations
    std::optional<GroupCarrier> carrier;   // Empty / Full literals
    std::string name;                      // Symbol
    std::vector<SetExpr> args;
    explicit Node(Kind k) : kind(k) {}
  };

  static std::shared_ptr<Node> node(Kind k) { return std::make_shared<Node>(k); }
  explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// Pointwise semantics. LTRANSLATE(s, E) denotes sE; RTRANSLATE(E, t) denotes Et.
inline bool eval_membership(const SetExpr& e, const GroupElement& g,
                            const SetExpr::Bindings& bindings = {}) {
  switch (e.kind()) {
    case SetExpr::Kind::Atom: return e.atom_coset().contains(g);
    case SetExpr::Kind::Empty: return false;
    case SetExpr::Kind::Full: {
      require_same_carrier(e.literal_carrier(), g.carrier);
      return true;
    }
    case SetExpr::Kind::Union:
      for (const SetExpr& a : e.args())
        if (eval_membership(a, g, bindings)) return true;
      return false;
    case SetExpr::Kind::Intersect:
      for (const SetExpr& a : e.args())
        if (!eval_membership(a, g, bindings)) return false;
      return true;
    case SetExpr::Kind::Diff:
      return eval_membership(e.args()[0], g, bindings) &&
             !eval_membership(e.args()[1], g, bindings);
    case SetExpr::Kind::LTranslate:
      return eval_membership(e.args()[0], mul(inverse(e.translation()), g), bindings);
    case SetExpr::Kind::RTranslate:
      return eval_membership(e.args()[0], mul(g, inverse(e.translation())), bindings);
    case SetExpr::Kind::Symbol: {
      auto it = bindings.find(e.symbol_name());
      if (it == bindings.end()) throw UnboundSymbol(e.symbol_name());
      return eval_membership(it->second, g, bindings);
    }
  }
  throw InternalError("unhandled expression kind");
}

}  // namespace cosetkit
