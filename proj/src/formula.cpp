#include "fomod/formula.hpp"

#include <algorithm>
#include <functional>

namespace fomod {

const char* nav_name(NavSym s) {
  switch (s) {
    case NavSym::Succ: return "succ";
    case NavSym::Leq: return "leq";
    case NavSym::Child: return "child";
    case NavSym::Desc: return "desc";
    case NavSym::NextSib: return "nsib";
    case NavSym::FollSib: return "fsib";
  }
  return "?";
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Leq: return "<=";
    case Cmp::Eq: return "=";
    case Cmp::Geq: return ">=";
  }
  return "?";
}

namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr unary_atom(std::string pred, Var v) {
  Formula f;
  f.kind = NodeKind::UnaryAtom;
  f.pred = std::move(pred);
  f.var = v;
  return make(std::move(f));
}

FormulaPtr nav_atom(NavSym s, Var v, Var w) {
  Formula f;
  f.kind = NodeKind::NavAtom;
  f.nav = s;
  f.var = v;
  f.var2 = w;
  return make(std::move(f));
}

FormulaPtr equality(Var v, Var w) {
  Formula f;
  f.kind = NodeKind::Equality;
  f.var = v;
  f.var2 = w;
  return make(std::move(f));
}

FormulaPtr lnot(FormulaPtr a) {
  Formula f;
  f.kind = NodeKind::Not;
  f.lhs = std::move(a);
  return make(std::move(f));
}

namespace {
FormulaPtr binary(NodeKind k, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = k;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return make(std::move(f));
}
}  // namespace

FormulaPtr land(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::And, std::move(a), std::move(b)); }
FormulaPtr lor(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::Implies, std::move(a), std::move(b)); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::Iff, std::move(a), std::move(b)); }

FormulaPtr exists(Var v, FormulaPtr body) {
  Formula f;
  f.kind = NodeKind::Exists;
  f.var = v;
  f.lhs = std::move(body);
  return make(std::move(f));
}

FormulaPtr forall(Var v, FormulaPtr body) {
  Formula f;
  f.kind = NodeKind::Forall;
  f.var = v;
  f.lhs = std::move(body);
  return make(std::move(f));
}

FormulaPtr mod_exists(Cmp c, BigInt k, BigInt l, Var v, FormulaPtr body) {
  if (l < 1) throw std::invalid_argument("modulus must be at least 1");
  if (k < 0 || k >= l) throw std::invalid_argument("threshold must lie in [0, modulus)");
  Formula f;
  f.kind = NodeKind::ModExists;
  f.cmp = c;
  f.k = std::move(k);
  f.l = std::move(l);
  f.var = v;
  f.lhs = std::move(body);
  return make(std::move(f));
}

FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("conj of empty list");
  // Balanced tree keeps render depth and evaluation recursion shallow.
  std::function<FormulaPtr(size_t, size_t)> build = [&](size_t lo, size_t hi) -> FormulaPtr {
    if (hi - lo == 1) return fs[lo];
    size_t mid = lo + (hi - lo) / 2;
    return land(build(lo, mid), build(mid, hi));
  };
  return build(0, fs.size());
}

FormulaPtr disj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("disj of empty list");
  std::function<FormulaPtr(size_t, size_t)> build = [&](size_t lo, size_t hi) -> FormulaPtr {
    if (hi - lo == 1) return fs[lo];
    size_t mid = lo + (hi - lo) / 2;
    return lor(build(lo, mid), build(mid, hi));
  };
  return build(0, fs.size());
}

bool structural_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::UnaryAtom:
      return a->pred == b->pred && a->var == b->var;
    case NodeKind::NavAtom:
      return a->nav == b->nav && a->var == b->var && a->var2 == b->var2;
    case NodeKind::Equality:
      return a->var == b->var && a->var2 == b->var2;
    case NodeKind::Not:
      return structural_equal(a->lhs, b->lhs);
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff:
      return structural_equal(a->lhs, b->lhs) && structural_equal(a->rhs, b->rhs);
    case NodeKind::Exists:
    case NodeKind::Forall:
      return a->var == b->var && structural_equal(a->lhs, b->lhs);
    case NodeKind::ModExists:
      return a->var == b->var && a->cmp == b->cmp && a->k == b->k && a->l == b->l &&
             structural_equal(a->lhs, b->lhs);
  }
  return false;
}

FormulaPtr swap_vars(const FormulaPtr& f) {
  if (!f) return f;
  switch (f->kind) {
    case NodeKind::UnaryAtom:
      return unary_atom(f->pred, other(f->var));
    case NodeKind::NavAtom:
      return nav_atom(f->nav, other(f->var), other(f->var2));
    case NodeKind::Equality:
      return equality(other(f->var), other(f->var2));
    case NodeKind::Not:
      return lnot(swap_vars(f->lhs));
    case NodeKind::And:
      return land(swap_vars(f->lhs), swap_vars(f->rhs));
    case NodeKind::Or:
      return lor(swap_vars(f->lhs), swap_vars(f->rhs));
    case NodeKind::Implies:
      return implies(swap_vars(f->lhs), swap_vars(f->rhs));
    case NodeKind::Iff:
      return iff(swap_vars(f->lhs), swap_vars(f->rhs));
    case NodeKind::Exists:
      return exists(other(f->var), swap_vars(f->lhs));
    case NodeKind::Forall:
      return forall(other(f->var), swap_vars(f->lhs));
    case NodeKind::ModExists:
      return mod_exists(f->cmp, f->k, f->l, other(f->var), swap_vars(f->lhs));
  }
  return f;
}

FreeVars free_vars(const FormulaPtr& f) {
  FreeVars out;
  if (!f) return out;
  switch (f->kind) {
    case NodeKind::UnaryAtom:
      (f->var == Var::X ? out.x : out.y) = true;
      return out;
    case NodeKind::NavAtom:
    case NodeKind::Equality:
      (f->var == Var::X ? out.x : out.y) = true;
      (f->var2 == Var::X ? out.x : out.y) = true;
      return out;
    case NodeKind::Not:
      return free_vars(f->lhs);
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff: {
      FreeVars a = free_vars(f->lhs), b = free_vars(f->rhs);
      out.x = a.x || b.x;
      out.y = a.y || b.y;
      return out;
    }
    case NodeKind::Exists:
    case NodeKind::Forall:
    case NodeKind::ModExists: {
      out = free_vars(f->lhs);
      (f->var == Var::X ? out.x : out.y) = false;
      return out;
    }
  }
  return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (!f) return true;
  switch (f->kind) {
    case NodeKind::UnaryAtom:
    case NodeKind::NavAtom:
    case NodeKind::Equality:
      return true;
    case NodeKind::Not:
      return is_quantifier_free(f->lhs);
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff:
      return is_quantifier_free(f->lhs) && is_quantifier_free(f->rhs);
    default:
      return false;
  }
}

size_t formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->lhs) + formula_size(f->rhs);
}

size_t quantifier_count(const FormulaPtr& f) {
  if (!f) return 0;
  size_t self = (f->kind == NodeKind::Exists || f->kind == NodeKind::Forall ||
                 f->kind == NodeKind::ModExists)
                    ? 1
                    : 0;
  return self + quantifier_count(f->lhs) + quantifier_count(f->rhs);
}

int Signature::index_of(const std::string& name) const {
  auto it = std::find(preds.begin(), preds.end(), name);
  return it == preds.end() ? -1 : static_cast<int>(it - preds.begin());
}

namespace {

void collect(const FormulaPtr& f, std::vector<std::string>& preds,
             std::optional<NavKind>& nav) {
  if (!f) return;
  if (f->kind == NodeKind::UnaryAtom) {
    if (std::find(preds.begin(), preds.end(), f->pred) == preds.end())
      preds.push_back(f->pred);
    return;
  }
  if (f->kind == NodeKind::NavAtom) {
    NavKind k = nav_kind_of(f->nav);
    if (nav && *nav != k)
      throw std::invalid_argument("formula mixes word and tree vocabularies");
    nav = k;
    return;
  }
  collect(f->lhs, preds, nav);
  collect(f->rhs, preds, nav);
}

}  // namespace

Signature infer_signature(const FormulaPtr& f, const std::optional<Signature>& hint) {
  std::vector<std::string> preds;
  std::optional<NavKind> nav;
  collect(f, preds, nav);
  if (hint) {
    if (nav && *nav != hint->nav)
      throw std::invalid_argument("formula's navigational atoms do not match the requested kind");
    for (const auto& p : preds)
      if (!hint->has(p))
        throw std::invalid_argument("predicate '" + p + "' not in the given signature");
    return *hint;
  }
  Signature sig;
  sig.preds = std::move(preds);
  sig.nav = nav.value_or(NavKind::Word);
  return sig;
}

namespace {

void check_rec(const FormulaPtr& f, const Signature& sig, bool x_bound, bool y_bound,
               std::vector<std::string>& out) {
  if (!f) {
    out.push_back("null subformula");
    return;
  }
  auto need_bound = [&](Var v, const std::string& where) {
    bool bound = v == Var::X ? x_bound : y_bound;
    if (!bound)
      out.push_back("variable " + std::string(var_name(v)) + " is free in " + where);
  };
  switch (f->kind) {
    case NodeKind::UnaryAtom:
      if (!sig.has(f->pred))
        out.push_back("unknown predicate " + f->pred);
      need_bound(f->var, f->pred + "(" + var_name(f->var) + ")");
      return;
    case NodeKind::NavAtom:
      if (nav_kind_of(f->nav) != sig.nav)
        out.push_back(std::string("navigational atom '") + nav_name(f->nav) +
                      "' does not belong to this vocabulary");
      need_bound(f->var, std::string(nav_name(f->nav)) + " atom");
      need_bound(f->var2, std::string(nav_name(f->nav)) + " atom");
      return;
    case NodeKind::Equality:
      need_bound(f->var, "equality atom");
      need_bound(f->var2, "equality atom");
      return;
    case NodeKind::Not:
      check_rec(f->lhs, sig, x_bound, y_bound, out);
      return;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff:
      check_rec(f->lhs, sig, x_bound, y_bound, out);
      check_rec(f->rhs, sig, x_bound, y_bound, out);
      return;
    case NodeKind::Exists:
    case NodeKind::Forall:
      check_rec(f->lhs, sig, x_bound || f->var == Var::X, y_bound || f->var == Var::Y, out);
      return;
    case NodeKind::ModExists:
      if (f->l < 1) out.push_back("modulus " + f->l.str() + " < 1");
      else if (f->k < 0 || f->k >= f->l)
        out.push_back("residue " + f->k.str() + " >= modulus " + f->l.str());
      check_rec(f->lhs, sig, x_bound || f->var == Var::X, y_bound || f->var == Var::Y, out);
      return;
  }
}

}  // namespace

std::vector<std::string> well_formed_check(const FormulaPtr& f, const Signature& sig) {
  std::vector<std::string> out;
  check_rec(f, sig, false, false, out);
  return out;
}

namespace {

// Binding strength, tighter binds higher. Quantifiers are weakest: their
// body extends maximally to the right.
int prec(NodeKind k) {
  switch (k) {
    case NodeKind::UnaryAtom:
    case NodeKind::NavAtom:
    case NodeKind::Equality:
      return 6;
    case NodeKind::Not:
      return 5;
    case NodeKind::And:
      return 4;
    case NodeKind::Or:
      return 3;
    case NodeKind::Implies:
      return 2;
    case NodeKind::Iff:
      return 1;
    case NodeKind::Exists:
    case NodeKind::Forall:
    case NodeKind::ModExists:
      return 0;
  }
  return 0;
}

void render(const FormulaPtr& f, int parent_prec, std::string& out) {
  int p = prec(f->kind);
  bool paren = p < parent_prec;
  if (paren) out += "(";
  switch (f->kind) {
    case NodeKind::UnaryAtom:
      out += f->pred;
      out += "(";
      out += var_name(f->var);
      out += ")";
      break;
    case NodeKind::NavAtom:
      out += nav_name(f->nav);
      out += "(";
      out += var_name(f->var);
      out += ", ";
      out += var_name(f->var2);
      out += ")";
      break;
    case NodeKind::Equality:
      out += var_name(f->var);
      out += " = ";
      out += var_name(f->var2);
      break;
    case NodeKind::Not:
      out += "!";
      render(f->lhs, p + 1, out);  // operand must bind at least as tightly
      break;
    case NodeKind::And:
      render(f->lhs, p, out);
      out += " & ";
      render(f->rhs, p + 1, out);
      break;
    case NodeKind::Or:
      render(f->lhs, p, out);
      out += " | ";
      render(f->rhs, p + 1, out);
      break;
    case NodeKind::Implies:
      render(f->lhs, p + 1, out);  // right associative
      out += " -> ";
      render(f->rhs, p, out);
      break;
    case NodeKind::Iff:
      render(f->lhs, p, out);  // left associative
      out += " <-> ";
      render(f->rhs, p + 1, out);
      break;
    case NodeKind::Exists:
      out += "E ";
      out += var_name(f->var);
      out += " . ";
      render(f->lhs, 0, out);
      break;
    case NodeKind::Forall:
      out += "A ";
      out += var_name(f->var);
      out += " . ";
      render(f->lhs, 0, out);
      break;
    case NodeKind::ModExists:
      out += "E[";
      out += cmp_name(f->cmp);
      out += " ";
      out += f->k.str();
      out += " mod ";
      out += f->l.str();
      out += "] ";
      out += var_name(f->var);
      out += " . ";
      render(f->lhs, 0, out);
      break;
  }
  if (paren) out += ")";
}

}  // namespace

std::string render_formula(const FormulaPtr& f) {
  std::string out;
  render(f, 0, out);
  return out;
}

}  // namespace fomod
