#pragma once

#include "fomod/eval.hpp"
#include "fomod/formula.hpp"
#include "fomod/model.hpp"

namespace fomod {

// One counting conjunct: forall x exists^{cmp k mod l} y psi(x,y).
struct ModEntry {
  Cmp cmp;  // Leq or Geq only
  BigInt k;
  BigInt l;
  FormulaPtr psi;  // quantifier-free matrix over x (outer) and y (counted)
};

// Interpretation recipe for one predicate added during normalization.
struct FreshPred {
  enum class Kind {
    Def,     // holds at a iff def holds with x bound to a
    Anchor,  // any set of exactly aj elements (supports a >= aj mod al conjunct)
  };
  Kind kind = Kind::Def;
  std::string name;
  FormulaPtr def;    // Def only; free variables subset of {x}
  BigInt aj, al;     // Anchor only
  std::string source_text;  // human-readable origin, for reports
};

// A sentence in the shape: forall-forall chi, AND of forall-exists chi_i
// (i = 1..n, n >= 1), AND of counting conjuncts (j = 1..m, m >= 1).
// All matrices quantifier-free, oriented with x outer and y inner.
struct NormalFormFormula {
  FormulaPtr chi;
  std::vector<FormulaPtr> chi_list;
  std::vector<ModEntry> mod_list;
  Signature original_sig;
  Signature extended_sig;
  std::vector<FreshPred> fresh;  // in interpretation order

  // The conjunction itself, as a single renderable sentence.
  FormulaPtr to_formula() const;
};

// Negation normal form: negations pushed to atoms; Implies/Iff expanded;
// negated counting quantifiers complemented with boundary collapses
// (residues lie in [0, l-1], so e.g. not exists^{<= l-1 mod l} is false).
// Result is logically equivalent to f.
FormulaPtr to_nnf(const FormulaPtr& f);

// Converts any sentence into normal shape over an extended signature.
// Sentences that are already conjunctions of normal-shaped conjuncts pass
// through unchanged (up to '=' splitting and padding); everything else goes
// through NNF and subformula renaming with fresh unary predicates. Models
// of the result restricted to original_sig satisfy f; conversely any model
// of f extends to one of the result on the same universe, except that a
// counting conjunct "exists >= j" with j >= 2 (arising only from renamed
// subformulas with such thresholds) has no models smaller than j.
NormalFormFormula normalize(const FormulaPtr& f, const Signature& sig);
NormalFormFormula normalize_text(const std::string& text);

// Extends a model of the original signature to the extended signature by
// interpreting each fresh predicate per its recipe. If model satisfies f,
// the result satisfies the normal form. Throws when an anchor needs more
// elements than the model has.
WordModel expand_word_model(const WordModel& m, const NormalFormFormula& nf);
TreeModel expand_tree_model(const TreeModel& m, const NormalFormFormula& nf);

// Drops the predicates added by normalization, keeping original_sig bits.
WordModel restrict_word_model(const WordModel& m, const NormalFormFormula& nf);
TreeModel restrict_tree_model(const TreeModel& m, const NormalFormFormula& nf);

}  // namespace fomod
