#pragma once

#include <optional>

#include "fomod/model.hpp"

namespace fomod {

// Partial binding of the two variables to element indices.
struct Assignment {
  std::optional<int> x;
  std::optional<int> y;

  std::optional<int> get(Var v) const { return v == Var::X ? x : y; }
  Assignment with(Var v, int elem) const {
    Assignment a = *this;
    (v == Var::X ? a.x : a.y) = elem;
    return a;
  }
};

// Uniform read-only view over a word or tree model, bound to the signature
// that gives label-mask bits their names. Elements are word positions or
// tree preorder indices. The referenced signature must outlive the view.
class ModelView {
 public:
  ModelView(const WordModel& w, const Signature& sig);
  ModelView(const TreeModel& t, const Signature& sig);

  NavKind kind() const { return kind_; }
  const Signature& sig() const { return *sig_; }
  int size() const { return static_cast<int>(labels_.size()); }
  LabelMask labels(int elem) const { return labels_[elem]; }
  bool label(int elem, const std::string& pred) const;
  // Truth of nav(a, b); the symbol must belong to this view's vocabulary.
  bool nav(NavSym s, int a, int b) const;

 private:
  NavKind kind_;
  const Signature* sig_;
  std::vector<LabelMask> labels_;
  std::vector<int> parent_;     // trees only
  std::vector<int> sib_index_;  // trees only: position among siblings
  std::vector<int> depth_;      // trees only
};

// Direct recursive interpretation; exponential in quantifier depth. Free
// variables of f must be bound in a; throws std::invalid_argument when a
// needed binding is missing or the vocabulary does not match the model.
bool eval(const ModelView& m, const FormulaPtr& f, const Assignment& a);

// |{b : f holds with v bound to b and the other variable bound to a}|.
// The count ranges over the whole universe, including b = a.
uint64_t count_matches(const ModelView& m, int a, Var v, const FormulaPtr& f);

// eval with the empty assignment; f must be a sentence.
bool check_sentence(const ModelView& m, const FormulaPtr& f);
bool check_sentence(const WordModel& m, const Signature& sig, const FormulaPtr& f);
bool check_sentence(const TreeModel& m, const Signature& sig, const FormulaPtr& f);

}  // namespace fomod
