#include "naive_eval.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace fomod::testsupport {

namespace {

// Flat copy of a model: labels per element; for trees, the parent of each
// node (-1 at the root). All relations below are derived from these fields
// alone, by fresh code.
struct Ground {
  bool is_tree = false;
  std::vector<std::vector<bool>> labels;  // [element][predicate index]
  std::vector<int> parent;

  int size() const { return static_cast<int>(labels.size()); }

  bool strict_ancestor(int a, int d) const {
    int v = parent[d];
    while (v >= 0) {
      if (v == a) return true;
      v = parent[v];
    }
    return false;
  }

  // Position of `e` among the children of its parent, recomputed by scanning
  // all nodes in index order (children vectors are not consulted).
  int sibling_rank(int e) const {
    int rank = 0;
    for (int v = 0; v < e; ++v)
      if (parent[v] == parent[e]) ++rank;
    return rank;
  }

  bool relation(NavSym s, int a, int b) const {
    switch (s) {
      case NavSym::Succ:
        return !is_tree && b == a + 1;
      case NavSym::Leq:
        return !is_tree && a <= b;
      case NavSym::Child:
        return is_tree && parent[b] == a;
      case NavSym::Desc:
        return is_tree && strict_ancestor(a, b);
      case NavSym::NextSib:
        return is_tree && parent[a] >= 0 && parent[a] == parent[b] &&
               sibling_rank(b) == sibling_rank(a) + 1;
      case NavSym::FollSib:
        return is_tree && parent[a] >= 0 && parent[a] == parent[b] &&
               sibling_rank(b) > sibling_rank(a);
    }
    return false;
  }
};

using Env = std::map<Var, int>;

int lookup(const Env& env, Var v) {
  auto it = env.find(v);
  if (it == env.end()) throw std::logic_error("naive_check: unbound variable");
  return it->second;
}

bool ground_eval(const Ground& g, const Signature& sig, const FormulaPtr& f,
                 Env env) {
  switch (f->kind) {
    case NodeKind::UnaryAtom: {
      int idx = sig.index_of(f->pred);
      if (idx < 0) throw std::logic_error("naive_check: unknown predicate " + f->pred);
      return g.labels[lookup(env, f->var)][static_cast<size_t>(idx)];
    }
    case NodeKind::NavAtom:
      return g.relation(f->nav, lookup(env, f->var), lookup(env, f->var2));
    case NodeKind::Equality:
      return lookup(env, f->var) == lookup(env, f->var2);
    case NodeKind::Not:
      return !ground_eval(g, sig, f->lhs, env);
    case NodeKind::And:
      return ground_eval(g, sig, f->lhs, env) && ground_eval(g, sig, f->rhs, env);
    case NodeKind::Or:
      return ground_eval(g, sig, f->lhs, env) || ground_eval(g, sig, f->rhs, env);
    case NodeKind::Implies:
      return !ground_eval(g, sig, f->lhs, env) || ground_eval(g, sig, f->rhs, env);
    case NodeKind::Iff:
      return ground_eval(g, sig, f->lhs, env) == ground_eval(g, sig, f->rhs, env);
    case NodeKind::Exists:
      for (int e = 0; e < g.size(); ++e) {
        env[f->var] = e;
        if (ground_eval(g, sig, f->lhs, env)) return true;
      }
      return false;
    case NodeKind::Forall:
      for (int e = 0; e < g.size(); ++e) {
        env[f->var] = e;
        if (!ground_eval(g, sig, f->lhs, env)) return false;
      }
      return true;
    case NodeKind::ModExists: {
      // Step the residue on each witness; the moduli in tests are small
      // enough for plain integers.
      uint64_t l = f->l.convert_to<uint64_t>();
      uint64_t k = f->k.convert_to<uint64_t>();
      uint64_t residue = 0;
      for (int e = 0; e < g.size(); ++e) {
        env[f->var] = e;
        if (ground_eval(g, sig, f->lhs, env)) residue = (residue + 1) % l;
      }
      switch (f->cmp) {
        case Cmp::Leq:
          return residue <= k;
        case Cmp::Eq:
          return residue == k;
        case Cmp::Geq:
          return residue >= k;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

bool naive_check(const WordModel& m, const Signature& sig, const FormulaPtr& f) {
  Ground g;
  g.is_tree = false;
  for (const auto& mask : m.positions) {
    std::vector<bool> row(sig.preds.size());
    for (size_t p = 0; p < sig.preds.size(); ++p) row[p] = mask.test(p);
    g.labels.push_back(row);
  }
  g.parent.assign(g.labels.size(), -1);
  return ground_eval(g, sig, f, {});
}

bool naive_check(const TreeModel& m, const Signature& sig, const FormulaPtr& f) {
  Ground g;
  g.is_tree = true;
  for (const auto& node : m.nodes) {
    std::vector<bool> row(sig.preds.size());
    for (size_t p = 0; p < sig.preds.size(); ++p) row[p] = node.labels.test(p);
    g.labels.push_back(row);
    g.parent.push_back(node.parent);
  }
  return ground_eval(g, sig, f, {});
}

}  // namespace fomod::testsupport
