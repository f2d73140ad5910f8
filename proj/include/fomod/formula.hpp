#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fomod {

using BigInt = boost::multiprecision::cpp_int;

// The two individual variables of the logic.
enum class Var : uint8_t { X = 0, Y = 1 };

inline Var other(Var v) { return v == Var::X ? Var::Y : Var::X; }
inline const char* var_name(Var v) { return v == Var::X ? "x" : "y"; }

// Navigational vocabulary: words expose successor and the linear order,
// trees expose child, proper descendant, next sibling and later sibling.
enum class NavKind : uint8_t { Word, Tree };

enum class NavSym : uint8_t { Succ, Leq, Child, Desc, NextSib, FollSib };

inline NavKind nav_kind_of(NavSym s) {
  return (s == NavSym::Succ || s == NavSym::Leq) ? NavKind::Word : NavKind::Tree;
}
const char* nav_name(NavSym s);

// Comparison attached to a modulo counting quantifier.
enum class Cmp : uint8_t { Leq, Eq, Geq };
const char* cmp_name(Cmp c);

enum class NodeKind : uint8_t {
  UnaryAtom,   // pred(var)
  NavAtom,     // nav(var, var2)
  Equality,    // var = var2
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,      // E var . lhs
  Forall,      // A var . lhs
  ModExists,   // E[cmp k mod l] var . lhs
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula node. Fields are used according to kind; unused ones
// keep their default values.
struct Formula {
  NodeKind kind;
  std::string pred;        // UnaryAtom
  Var var = Var::X;        // UnaryAtom/NavAtom/Equality first arg; quantified var
  Var var2 = Var::X;       // NavAtom/Equality second arg
  NavSym nav = NavSym::Succ;
  FormulaPtr lhs, rhs;     // children (body of quantifiers lives in lhs)
  Cmp cmp = Cmp::Leq;      // ModExists
  BigInt k, l;             // ModExists: k in Z_l, l >= 1
};

FormulaPtr unary_atom(std::string pred, Var v);
FormulaPtr nav_atom(NavSym s, Var v, Var w);
FormulaPtr equality(Var v, Var w);
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(Var v, FormulaPtr body);
FormulaPtr forall(Var v, FormulaPtr body);
FormulaPtr mod_exists(Cmp c, BigInt k, BigInt l, Var v, FormulaPtr body);

// Balanced conjunction/disjunction of a non-empty list.
FormulaPtr conj(const std::vector<FormulaPtr>& fs);
FormulaPtr disj(const std::vector<FormulaPtr>& fs);

bool structural_equal(const FormulaPtr& a, const FormulaPtr& b);

// Swaps every occurrence of x and y, both free and bound.
FormulaPtr swap_vars(const FormulaPtr& f);

struct FreeVars {
  bool x = false;
  bool y = false;
  bool empty() const { return !x && !y; }
  bool has(Var v) const { return v == Var::X ? x : y; }
};
FreeVars free_vars(const FormulaPtr& f);

bool is_quantifier_free(const FormulaPtr& f);
size_t formula_size(const FormulaPtr& f);
size_t quantifier_count(const FormulaPtr& f);

// Ordered unary-predicate vocabulary plus the navigational kind.
struct Signature {
  std::vector<std::string> preds;
  NavKind nav = NavKind::Word;

  int index_of(const std::string& name) const;  // -1 when absent
  bool has(const std::string& name) const { return index_of(name) >= 0; }
  bool operator==(const Signature& o) const {
    return preds == o.preds && nav == o.nav;
  }
};

// Collects the predicates occurring in f (first-occurrence order) and the
// navigational kind of its binary atoms. Pure unary sentences default to
// the word vocabulary unless a hint is given. Throws std::invalid_argument
// on mixed vocabularies or, with a hint, on predicates missing from it.
Signature infer_signature(const FormulaPtr& f,
                          const std::optional<Signature>& hint = std::nullopt);

// Structural diagnostics for f against sig; empty means well formed.
std::vector<std::string> well_formed_check(const FormulaPtr& f, const Signature& sig);

// Precedence-aware rendering; parses back to a structurally equal formula.
std::string render_formula(const FormulaPtr& f);

// Raised when a configured resource cap is exceeded.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fomod
