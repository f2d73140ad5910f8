#include "fomod/normal_form.hpp"

#include <map>

#include "fomod/parser.hpp"

namespace fomod {

namespace {

FormulaPtr qf_true(Var u) { return equality(u, u); }
FormulaPtr qf_false(Var u) { return lnot(equality(u, u)); }

// A constant-valued formula with the same free variables as node. With no
// variable in scope (top level) a closed quantified surrogate is used.
FormulaPtr constant_like(const FormulaPtr& node, bool value, std::optional<Var> ctx) {
  FreeVars fv = free_vars(node);
  if (fv.x) return value ? qf_true(Var::X) : qf_false(Var::X);
  if (fv.y) return value ? qf_true(Var::Y) : qf_false(Var::Y);
  if (ctx) return value ? qf_true(*ctx) : qf_false(*ctx);
  Var v = (node->kind == NodeKind::Exists || node->kind == NodeKind::Forall ||
           node->kind == NodeKind::ModExists)
              ? node->var
              : Var::X;
  return value ? forall(v, equality(v, v)) : exists(v, lnot(equality(v, v)));
}

FormulaPtr nnf(const FormulaPtr& f, bool neg, std::optional<Var> ctx) {
  switch (f->kind) {
    case NodeKind::UnaryAtom:
    case NodeKind::NavAtom:
    case NodeKind::Equality:
      return neg ? lnot(f) : f;
    case NodeKind::Not:
      return nnf(f->lhs, !neg, ctx);
    case NodeKind::And:
      return neg ? lor(nnf(f->lhs, true, ctx), nnf(f->rhs, true, ctx))
                 : land(nnf(f->lhs, false, ctx), nnf(f->rhs, false, ctx));
    case NodeKind::Or:
      return neg ? land(nnf(f->lhs, true, ctx), nnf(f->rhs, true, ctx))
                 : lor(nnf(f->lhs, false, ctx), nnf(f->rhs, false, ctx));
    case NodeKind::Implies:
      return neg ? land(nnf(f->lhs, false, ctx), nnf(f->rhs, true, ctx))
                 : lor(nnf(f->lhs, true, ctx), nnf(f->rhs, false, ctx));
    case NodeKind::Iff:
      return neg ? lor(land(nnf(f->lhs, false, ctx), nnf(f->rhs, true, ctx)),
                       land(nnf(f->lhs, true, ctx), nnf(f->rhs, false, ctx)))
                 : lor(land(nnf(f->lhs, false, ctx), nnf(f->rhs, false, ctx)),
                       land(nnf(f->lhs, true, ctx), nnf(f->rhs, true, ctx)));
    case NodeKind::Exists:
      return neg ? forall(f->var, nnf(f->lhs, true, f->var))
                 : exists(f->var, nnf(f->lhs, false, f->var));
    case NodeKind::Forall:
      return neg ? exists(f->var, nnf(f->lhs, true, f->var))
                 : forall(f->var, nnf(f->lhs, false, f->var));
    case NodeKind::ModExists: {
      // The body stays positive: negation complements the count comparison.
      FormulaPtr body = nnf(f->lhs, false, f->var);
      const BigInt &k = f->k, &l = f->l;
      if (l == 1)  // every residue is 0, so the node is a constant
        return constant_like(f, !neg, ctx);
      if (!neg) {
        if (f->cmp == Cmp::Leq && k == l - 1) return constant_like(f, true, ctx);
        if (f->cmp == Cmp::Geq && k == 0) return constant_like(f, true, ctx);
        return mod_exists(f->cmp, k, l, f->var, body);
      }
      switch (f->cmp) {
        case Cmp::Leq:
          // not (r <= k) is r >= k+1, impossible past l-1
          if (k + 1 <= l - 1) return mod_exists(Cmp::Geq, k + 1, l, f->var, body);
          return constant_like(f, false, ctx);
        case Cmp::Geq:
          if (k >= 1) return mod_exists(Cmp::Leq, k - 1, l, f->var, body);
          return constant_like(f, false, ctx);
        case Cmp::Eq: {
          bool low = k >= 1;
          bool high = k + 1 <= l - 1;
          FormulaPtr lo = low ? mod_exists(Cmp::Leq, k - 1, l, f->var, body) : nullptr;
          FormulaPtr hi = high ? mod_exists(Cmp::Geq, k + 1, l, f->var, body) : nullptr;
          if (lo && hi) return lor(lo, hi);
          if (lo) return lo;
          if (hi) return hi;
          return constant_like(f, false, ctx);  // unreachable for l >= 2
        }
      }
      return f;
    }
  }
  return f;
}

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == NodeKind::And) {
    flatten_and(f->lhs, out);
    flatten_and(f->rhs, out);
  } else {
    out.push_back(f);
  }
}

struct Parts {
  std::vector<FormulaPtr> chi_clauses;
  std::vector<FormulaPtr> chis;
  std::vector<ModEntry> mods;
};

// Orients a matrix so the quantified variable becomes y.
FormulaPtr orient(const FormulaPtr& matrix, Var bound) {
  return bound == Var::Y ? matrix : swap_vars(matrix);
}

// Recognizes sentences that are already conjunctions of normal-shaped
// conjuncts; fills parts and returns true on success.
bool try_pass_through(const FormulaPtr& f, Parts& parts) {
  std::vector<FormulaPtr> cs;
  flatten_and(f, cs);
  for (const auto& c : cs) {
    if (c->kind != NodeKind::Forall) return false;
    Var v = c->var;
    const FormulaPtr& body = c->lhs;
    if (body->kind == NodeKind::Forall && body->var == other(v) &&
        is_quantifier_free(body->lhs)) {
      parts.chi_clauses.push_back(body->lhs);  // forall-forall is symmetric
      continue;
    }
    if (body->kind == NodeKind::Exists && body->var == other(v) &&
        is_quantifier_free(body->lhs)) {
      parts.chis.push_back(v == Var::X ? body->lhs : swap_vars(body->lhs));
      continue;
    }
    if (body->kind == NodeKind::ModExists && body->var == other(v) &&
        is_quantifier_free(body->lhs)) {
      FormulaPtr m = v == Var::X ? body->lhs : swap_vars(body->lhs);
      if (body->cmp == Cmp::Eq) {
        parts.mods.push_back({Cmp::Leq, body->k, body->l, m});
        parts.mods.push_back({Cmp::Geq, body->k, body->l, m});
      } else {
        parts.mods.push_back({body->cmp, body->k, body->l, m});
      }
      continue;
    }
    if (is_quantifier_free(body) && !free_vars(body).has(other(v))) {
      parts.chi_clauses.push_back(v == Var::X ? body : swap_vars(body));
      continue;
    }
    return false;
  }
  return true;
}

class Renamer {
 public:
  Renamer(const Signature& sig, Parts& parts, std::vector<FreshPred>& fresh)
      : ext_(sig), parts_(parts), fresh_(fresh) {}

  const Signature& ext() const { return ext_; }

  // Returns a quantifier-free stand-in equivalent to node (equivalence in
  // one direction when exact is false). ctx is a variable usable for
  // stand-ins of closed subformulas at this point.
  FormulaPtr tr(const FormulaPtr& node, Var ctx, bool exact) {
    if (is_quantifier_free(node)) return node;
    switch (node->kind) {
      case NodeKind::And:
        return land(tr(node->lhs, ctx, exact), tr(node->rhs, ctx, exact));
      case NodeKind::Or:
        return lor(tr(node->lhs, ctx, exact), tr(node->rhs, ctx, exact));
      case NodeKind::Exists:
      case NodeKind::Forall:
      case NodeKind::ModExists:
        return rename_quantified(node, ctx, exact);
      default:
        throw std::logic_error("unexpected node in negation normal form");
    }
  }

 private:
  std::string fresh_name(const char* stem) {
    for (;;) {
      std::string name = std::string("_") + stem + std::to_string(counter_++);
      if (!ext_.has(name)) return name;
    }
  }

  std::string add_pred(const char* stem) {
    std::string name = fresh_name(stem);
    ext_.preds.push_back(name);
    return name;
  }

  // Guarantees a predicate holding on exactly j elements (the conjunct
  // forall x exists^{>= j mod l} y d(y) pins its count's residue); shared
  // across conjuncts needing the same (j, l).
  FormulaPtr anchor_atom(const BigInt& j, const BigInt& l) {
    auto it = anchors_.find({j, l});
    if (it != anchors_.end()) return unary_atom(it->second, Var::Y);
    std::string name = add_pred("d");
    FreshPred fp;
    fp.kind = FreshPred::Kind::Anchor;
    fp.name = name;
    fp.aj = j;
    fp.al = l;
    fp.source_text = "anchor >= " + j.str() + " mod " + l.str();
    fresh_.push_back(std::move(fp));
    parts_.mods.push_back({Cmp::Geq, j, l, unary_atom(name, Var::Y)});
    anchors_.emplace(std::make_pair(j, l), name);
    return unary_atom(name, Var::Y);
  }

  // Matrix forcing count-residue >= j for elements where sel holds, vacuous
  // elsewhere. For j = 1 the element itself (y = x) is the default witness;
  // larger thresholds need an anchor set.
  FormulaPtr geq_matrix(const FormulaPtr& sel, const FormulaPtr& body, const BigInt& j,
                        const BigInt& l) {
    FormulaPtr fallback = j == 1 ? equality(Var::X, Var::Y) : anchor_atom(j, l);
    return lor(land(sel, body), land(lnot(sel), fallback));
  }

  FormulaPtr rename_quantified(const FormulaPtr& node, Var ctx, bool exact) {
    Var v = node->var;
    Var u = other(v);
    bool closed = !free_vars(node).has(u);
    // Bodies of counting quantifiers need exact stand-ins: the count is
    // not monotone in the body, so one-directional definitions would let
    // residues drift.
    bool body_exact = exact || node->kind == NodeKind::ModExists;
    FormulaPtr inner = tr(node->lhs, v, body_exact);
    FormulaPtr oriented = orient(inner, v);

    std::string g = add_pred("r");
    FreshPred fp;
    fp.kind = FreshPred::Kind::Def;
    fp.name = g;
    {
      FormulaPtr rebuilt;
      if (node->kind == NodeKind::Exists) rebuilt = exists(v, inner);
      else if (node->kind == NodeKind::Forall) rebuilt = forall(v, inner);
      else rebuilt = mod_exists(node->cmp, node->k, node->l, v, inner);
      fp.def = (!closed && u == Var::Y) ? swap_vars(rebuilt) : rebuilt;
    }
    fp.source_text = render_formula(node);
    fresh_.push_back(std::move(fp));

    FormulaPtr gx = unary_atom(g, Var::X);
    switch (node->kind) {
      case NodeKind::Exists:
        parts_.chis.push_back(lor(lnot(gx), oriented));
        if (exact) parts_.chi_clauses.push_back(lor(gx, lnot(oriented)));
        break;
      case NodeKind::Forall:
        parts_.chi_clauses.push_back(lor(lnot(gx), oriented));
        if (exact) parts_.chis.push_back(lor(gx, lnot(oriented)));
        break;
      case NodeKind::ModExists: {
        const BigInt &k = node->k, &l = node->l;
        FormulaPtr guarded = land(gx, oriented);
        if (node->cmp == Cmp::Leq || node->cmp == Cmp::Eq)
          parts_.mods.push_back({Cmp::Leq, k, l, guarded});
        if ((node->cmp == Cmp::Geq || node->cmp == Cmp::Eq) && k >= 1)
          parts_.mods.push_back({Cmp::Geq, k, l, geq_matrix(gx, oriented, k, l)});
        if (exact) add_reverse_mod(node, gx, oriented);
        break;
      }
      default:
        break;
    }
    return closed ? unary_atom(g, ctx) : unary_atom(g, u);
  }

  // For stand-ins inside counting bodies: elements where g fails must
  // falsify the quantifier, i.e. satisfy the complemented comparison.
  void add_reverse_mod(const FormulaPtr& node, const FormulaPtr& gx,
                       const FormulaPtr& oriented) {
    const BigInt &k = node->k, &l = node->l;
    FormulaPtr ng = lnot(gx);
    switch (node->cmp) {
      case Cmp::Leq: {
        BigInt j = k + 1;  // k <= l-2 after NNF collapses, so j <= l-1
        parts_.mods.push_back({Cmp::Geq, j, l, geq_matrix(ng, oriented, j, l)});
        break;
      }
      case Cmp::Geq:
        // k >= 1 after NNF collapses
        parts_.mods.push_back({Cmp::Leq, k - 1, l, land(ng, oriented)});
        break;
      case Cmp::Eq: {
        bool low = k >= 1;
        bool high = k + 1 <= l - 1;
        if (low && high) {
          // Residue must land on either side of k; a selector predicate
          // records which side each element takes.
          std::string h = add_pred("s");
          FreshPred fp;
          fp.kind = FreshPred::Kind::Def;
          fp.name = h;
          fp.def = land(lnot(gx), mod_exists(Cmp::Leq, k - 1, l, Var::Y, oriented));
          fp.source_text = "case split for " + render_formula(node);
          fresh_.push_back(std::move(fp));
          FormulaPtr hx = unary_atom(h, Var::X);
          parts_.mods.push_back({Cmp::Leq, k - 1, l, land(land(ng, hx), oriented)});
          BigInt j = k + 1;
          FormulaPtr sel = land(ng, lnot(hx));
          FormulaPtr fallback = anchor_atom(j, l);  // j >= 2 here
          parts_.mods.push_back(
              {Cmp::Geq, j, l, lor(land(sel, oriented), land(lnot(sel), fallback))});
        } else if (high) {  // k == 0
          parts_.mods.push_back({Cmp::Geq, k + 1, l, geq_matrix(ng, oriented, k + 1, l)});
        } else {  // k == l-1
          parts_.mods.push_back({Cmp::Leq, k - 1, l, land(ng, oriented)});
        }
        break;
      }
    }
  }

  Signature ext_;
  Parts& parts_;
  std::vector<FreshPred>& fresh_;
  std::map<std::pair<BigInt, BigInt>, std::string> anchors_;
  int counter_ = 0;
};

NormalFormFormula assemble(Parts parts, const Signature& orig, Signature ext,
                           std::vector<FreshPred> fresh) {
  NormalFormFormula nf;
  nf.chi = parts.chi_clauses.empty() ? qf_true(Var::X) : conj(parts.chi_clauses);
  nf.chi_list = std::move(parts.chis);
  if (nf.chi_list.empty()) nf.chi_list.push_back(equality(Var::X, Var::Y));
  nf.mod_list = std::move(parts.mods);
  if (nf.mod_list.empty())
    nf.mod_list.push_back({Cmp::Geq, 0, 2, equality(Var::X, Var::Y)});
  nf.original_sig = orig;
  nf.extended_sig = std::move(ext);
  nf.fresh = std::move(fresh);
  return nf;
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false, std::nullopt); }

FormulaPtr NormalFormFormula::to_formula() const {
  std::vector<FormulaPtr> cs;
  cs.push_back(forall(Var::X, forall(Var::Y, chi)));
  for (const auto& c : chi_list) cs.push_back(forall(Var::X, exists(Var::Y, c)));
  for (const auto& m : mod_list)
    cs.push_back(forall(Var::X, mod_exists(m.cmp, m.k, m.l, Var::Y, m.psi)));
  return conj(cs);
}

NormalFormFormula normalize(const FormulaPtr& f, const Signature& sig) {
  if (!free_vars(f).empty())
    throw std::invalid_argument("normalize requires a sentence");
  Parts parts;
  if (try_pass_through(f, parts))
    return assemble(std::move(parts), sig, sig, {});
  Parts gp;
  std::vector<FreshPred> fresh;
  Renamer rn(sig, gp, fresh);
  FormulaPtr top = rn.tr(to_nnf(f), Var::X, false);
  gp.chi_clauses.push_back(top);  // asserts the renamed sentence itself
  return assemble(std::move(gp), sig, rn.ext(), std::move(fresh));
}

NormalFormFormula normalize_text(const std::string& text) {
  ParseResult pr = parse_formula(text);
  return normalize(pr.formula, pr.sig);
}

namespace {

// Shared expansion engine: interprets fresh predicates one at a time on a
// growing label vector, reading each recipe against the already-extended
// part of the signature.
template <typename ModelT>
ModelT expand_model(const ModelT& m, const NormalFormFormula& nf,
                    std::vector<LabelMask> (*get_labels)(const ModelT&),
                    void (*set_labels)(ModelT&, const std::vector<LabelMask>&)) {
  ModelT out = m;
  std::vector<LabelMask> labels = get_labels(out);
  Signature cur = nf.original_sig;
  for (const auto& fp : nf.fresh) {
    int bit = static_cast<int>(cur.preds.size());
    if (bit >= static_cast<int>(kMaxPreds))
      throw ResourceError("extended signature exceeds " + std::to_string(kMaxPreds) +
                          " predicates");
    if (fp.kind == FreshPred::Kind::Anchor) {
      if (BigInt(labels.size()) < fp.aj)
        throw std::invalid_argument("model of size " + std::to_string(labels.size()) +
                                    " cannot host anchor " + fp.name + " needing " +
                                    fp.aj.str() + " elements");
      uint64_t j = fp.aj.convert_to<uint64_t>();
      for (uint64_t i = 0; i < j; ++i) labels[i].set(static_cast<size_t>(bit));
    } else {
      set_labels(out, labels);
      ModelView view(out, cur);
      std::vector<bool> vals(labels.size());
      for (int a = 0; a < view.size(); ++a)
        vals[a] = eval(view, fp.def, Assignment{}.with(Var::X, a));
      for (size_t a = 0; a < labels.size(); ++a)
        if (vals[a]) labels[a].set(static_cast<size_t>(bit));
    }
    cur.preds.push_back(fp.name);
  }
  set_labels(out, labels);
  return out;
}

std::vector<LabelMask> word_labels(const WordModel& m) { return m.positions; }
void word_set(WordModel& m, const std::vector<LabelMask>& l) { m.positions = l; }

std::vector<LabelMask> tree_labels(const TreeModel& m) {
  std::vector<LabelMask> out;
  out.reserve(m.nodes.size());
  for (const auto& n : m.nodes) out.push_back(n.labels);
  return out;
}
void tree_set(TreeModel& m, const std::vector<LabelMask>& l) {
  for (size_t i = 0; i < l.size(); ++i) m.nodes[i].labels = l[i];
}

template <typename ModelT>
ModelT restrict_model(const ModelT& m, const NormalFormFormula& nf,
                      std::vector<LabelMask> (*get_labels)(const ModelT&),
                      void (*set_labels)(ModelT&, const std::vector<LabelMask>&)) {
  ModelT out = m;
  std::vector<LabelMask> labels = get_labels(out);
  LabelMask keep;
  for (size_t i = 0; i < nf.original_sig.preds.size(); ++i) keep.set(i);
  for (auto& l : labels) l &= keep;
  set_labels(out, labels);
  return out;
}

}  // namespace

WordModel expand_word_model(const WordModel& m, const NormalFormFormula& nf) {
  return expand_model<WordModel>(m, nf, word_labels, word_set);
}

TreeModel expand_tree_model(const TreeModel& m, const NormalFormFormula& nf) {
  return expand_model<TreeModel>(m, nf, tree_labels, tree_set);
}

WordModel restrict_word_model(const WordModel& m, const NormalFormFormula& nf) {
  return restrict_model<WordModel>(m, nf, word_labels, word_set);
}

TreeModel restrict_tree_model(const TreeModel& m, const NormalFormFormula& nf) {
  return restrict_model<TreeModel>(m, nf, tree_labels, tree_set);
}

}  // namespace fomod
