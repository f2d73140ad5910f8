#include "fomod/eval.hpp"

namespace fomod {

ModelView::ModelView(const WordModel& w, const Signature& sig)
    : kind_(NavKind::Word), sig_(&sig), labels_(w.positions) {
  if (labels_.empty()) throw std::invalid_argument("word model must be non-empty");
}

ModelView::ModelView(const TreeModel& t, const Signature& sig)
    : kind_(NavKind::Tree), sig_(&sig) {
  if (t.nodes.empty()) throw std::invalid_argument("tree model must be non-empty");
  labels_.reserve(t.nodes.size());
  parent_.resize(t.nodes.size());
  sib_index_.resize(t.nodes.size());
  depth_.resize(t.nodes.size());
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    labels_.push_back(t.nodes[i].labels);
    parent_[i] = t.nodes[i].parent;
    depth_[i] = t.nodes[i].parent < 0 ? 0 : depth_[t.nodes[i].parent] + 1;
  }
  for (const auto& n : t.nodes)
    for (size_t j = 0; j < n.children.size(); ++j)
      sib_index_[n.children[j]] = static_cast<int>(j);
}

bool ModelView::label(int elem, const std::string& pred) const {
  int idx = sig_->index_of(pred);
  if (idx < 0) throw std::invalid_argument("unknown predicate " + pred);
  return labels_[elem].test(static_cast<size_t>(idx));
}

bool ModelView::nav(NavSym s, int a, int b) const {
  if (nav_kind_of(s) != kind_)
    throw std::invalid_argument(std::string("navigational symbol ") + nav_name(s) +
                                " does not match the model kind");
  switch (s) {
    case NavSym::Succ:
      return b == a + 1;
    case NavSym::Leq:
      return a <= b;
    case NavSym::Child:
      return parent_[b] == a;
    case NavSym::Desc: {
      if (depth_[b] <= depth_[a]) return false;
      int v = b;
      while (depth_[v] > depth_[a]) v = parent_[v];
      return v == a;
    }
    case NavSym::NextSib:
      return parent_[a] >= 0 && parent_[a] == parent_[b] && sib_index_[b] == sib_index_[a] + 1;
    case NavSym::FollSib:
      return parent_[a] >= 0 && parent_[a] == parent_[b] && sib_index_[b] > sib_index_[a];
  }
  return false;
}

namespace {

int bound_of(const Assignment& a, Var v) {
  auto e = a.get(v);
  if (!e) throw std::invalid_argument(std::string("variable ") + var_name(v) + " is unbound");
  return *e;
}

bool matches_cmp(const BigInt& residue, Cmp c, const BigInt& k) {
  switch (c) {
    case Cmp::Leq: return residue <= k;
    case Cmp::Eq: return residue == k;
    case Cmp::Geq: return residue >= k;
  }
  return false;
}

}  // namespace

bool eval(const ModelView& m, const FormulaPtr& f, const Assignment& a) {
  switch (f->kind) {
    case NodeKind::UnaryAtom:
      return m.label(bound_of(a, f->var), f->pred);
    case NodeKind::NavAtom:
      return m.nav(f->nav, bound_of(a, f->var), bound_of(a, f->var2));
    case NodeKind::Equality:
      return bound_of(a, f->var) == bound_of(a, f->var2);
    case NodeKind::Not:
      return !eval(m, f->lhs, a);
    case NodeKind::And:
      return eval(m, f->lhs, a) && eval(m, f->rhs, a);
    case NodeKind::Or:
      return eval(m, f->lhs, a) || eval(m, f->rhs, a);
    case NodeKind::Implies:
      return !eval(m, f->lhs, a) || eval(m, f->rhs, a);
    case NodeKind::Iff:
      return eval(m, f->lhs, a) == eval(m, f->rhs, a);
    case NodeKind::Exists: {
      for (int b = 0; b < m.size(); ++b)
        if (eval(m, f->lhs, a.with(f->var, b))) return true;
      return false;
    }
    case NodeKind::Forall: {
      for (int b = 0; b < m.size(); ++b)
        if (!eval(m, f->lhs, a.with(f->var, b))) return false;
      return true;
    }
    case NodeKind::ModExists: {
      uint64_t count = 0;
      for (int b = 0; b < m.size(); ++b)
        if (eval(m, f->lhs, a.with(f->var, b))) ++count;
      BigInt residue = BigInt(count) % f->l;
      return matches_cmp(residue, f->cmp, f->k);
    }
  }
  return false;
}

uint64_t count_matches(const ModelView& m, int a, Var v, const FormulaPtr& f) {
  Assignment base;
  base = base.with(other(v), a);
  uint64_t count = 0;
  for (int b = 0; b < m.size(); ++b) {
    Assignment cur = base.with(v, b);
    // Atoms mentioning only v are fine either way; unused bindings are
    // harmless, so binding both variables is always safe here.
    if (eval(m, f, cur)) ++count;
  }
  return count;
}

bool check_sentence(const ModelView& m, const FormulaPtr& f) {
  FreeVars fv = free_vars(f);
  if (!fv.empty()) throw std::invalid_argument("check_sentence requires a sentence");
  return eval(m, f, Assignment{});
}

bool check_sentence(const WordModel& m, const Signature& sig, const FormulaPtr& f) {
  return check_sentence(ModelView(m, sig), f);
}

bool check_sentence(const TreeModel& m, const Signature& sig, const FormulaPtr& f) {
  return check_sentence(ModelView(m, sig), f);
}

}  // namespace fomod
