#pragma once

#include <functional>
#include <unordered_map>

#include "fomod/eval.hpp"
#include "fomod/normal_form.hpp"

namespace fomod {

// An atomic 1-type: bit i set means predicate i of the ambient signature
// holds. Enumeration order is the numeric order of the bit patterns.
using OneType = uint32_t;

// Order formulas: mutually exclusive, jointly exhaustive descriptions of
// the position of a second element relative to a first. Exactly one holds
// for every ordered pair (v, w), including v = w.
enum WordTheta : int {
  kWEq = 0,         // w = v
  kWNext = 1,       // w = v + 1
  kWPrev = 2,       // w = v - 1
  kWFarBefore = 3,  // w <= v - 2
  kWFarAfter = 4,   // w >= v + 2
};

enum TreeTheta : int {
  kTEq = 0,        // w = v
  kTDown = 1,      // w is a child of v
  kTUp = 2,        // w is the parent of v
  kTDownFar = 3,   // proper descendant, not a child
  kTUpFar = 4,     // proper ancestor, not the parent
  kTRight = 5,     // immediate next sibling of v
  kTLeft = 6,      // immediate previous sibling
  kTRightFar = 7,  // later sibling, not immediate
  kTLeftFar = 8,   // earlier sibling, not immediate
  kTFree = 9,      // none of the above
};

int theta_count(NavKind k);
const char* theta_tag(NavKind k, int theta);  // short ASCII names for dumps

// Index of the order formula describing w relative to v.
int classify_pair(const ModelView& m, int v, int w);

// Occurrence flag (is the count nonzero?) plus the count's residues modulo
// each l_j. A zero flag forces all residues to zero.
struct CountCell {
  uint8_t flag = 0;
  std::vector<uint64_t> res;

  bool is_zero() const { return flag == 0; }
  bool operator==(const CountCell& o) const { return flag == o.flag && res == o.res; }
};

CountCell zero_cell(size_t m);
CountCell cell_of_count(uint64_t count, const std::vector<uint64_t>& moduli);

// Per-1-type row of cells; the building block of full types and of the
// aggregate tables the tree solver passes around.
struct CellTable {
  std::vector<CountCell> cells;  // indexed by OneType value

  bool operator==(const CellTable& o) const { return cells == o.cells; }
  bool all_zero() const;
  // number of 1-types with nonzero cells
  size_t support_size() const;
  // the unique nonzero 1-type if the table is a singleton of count 1
  bool is_singleton(const std::vector<uint64_t>& moduli, OneType* out = nullptr) const;
};

CellTable zero_table(size_t n_types, size_t m);
CellTable singleton_table(size_t n_types, OneType t, const std::vector<uint64_t>& moduli);

// Pointwise combination: flags take max, residues add modulo l_j. This is
// exactly how counts of disjoint element sets aggregate.
CountCell combine(const CountCell& a, const CountCell& b, const std::vector<uint64_t>& moduli);
CellTable combine(const CellTable& a, const CellTable& b, const std::vector<uint64_t>& moduli);

// Enumeration of all realizable cells over the given moduli: option 0 is
// the zero cell, and option c in 1 .. lcm(l_1..l_m) stands for any count
// congruent to c modulo every l_j. Residue combinations that no single
// count produces (possible when moduli share factors) are skipped — no
// aggregate of actual elements can ever realize them. Used wherever a
// solver guesses a table outright.
uint64_t cell_option_count(const std::vector<uint64_t>& moduli);
CountCell cell_from_option(uint64_t option, const std::vector<uint64_t>& moduli);

// Visits every cell table supported inside `allow` whose per-cell counts sum
// to exactly `weight`, counts drawn from 0 .. lcm(moduli). Tables appear in
// ascending lexicographic order of their count vectors. Enumerating weights
// 0, 1, 2, ... therefore yields guesses describing few remaining elements
// before guesses describing many, and exhausts the whole table space at
// weight lcm * |allow|. Returns false when the callback stopped the walk.
bool for_each_table_of_count(const std::vector<bool>& allow,
                             const std::vector<uint64_t>& moduli, uint64_t weight,
                             const std::function<bool(const CellTable&)>& visit);

// Full type of an element: one cell table per order formula.
struct FullType {
  NavKind kind = NavKind::Word;
  std::vector<uint64_t> moduli;
  std::vector<CellTable> comp;  // indexed by theta

  bool operator==(const FullType& o) const {
    return kind == o.kind && moduli == o.moduli && comp == o.comp;
  }
  // the 1-type in the equality component's singleton
  OneType self_type() const;
};

FullType zero_full_type(NavKind kind, const std::vector<uint64_t>& moduli, size_t n_types);

// Structural invariants: equality component a singleton; immediate-step
// components zero-or-singleton; far components zero when their immediate
// counterpart is zero. Returns diagnostics, empty when all hold.
std::vector<std::string> full_type_invariant_errors(const FullType& t);

// Compact byte key for visited sets and memo tables.
std::string full_type_key(const FullType& t);

// Debug dump: one line per nonzero cell, "theta-tag type-bits flag r1 .. rm".
std::string dump_full_type(const FullType& t, size_t n_preds);
std::string one_type_bits(OneType t, size_t n_preds);

// All 2^|preds| one-types in numeric order; throws ResourceError when the
// count exceeds the cap.
std::vector<OneType> enumerate_one_types(const Signature& sig, size_t cap = size_t{1} << 20);

// The full type realized at element v: counts all w per (order formula,
// 1-type of w) and reduces them to flags and residues.
FullType realized_full_type(const ModelView& m, int v, const std::vector<uint64_t>& moduli);

// Normal form compiled for type-level work: moduli narrowed to machine
// integers, matrices indexed, entailment memoized.
struct CompiledNF {
  Signature sig;  // extended signature
  NavKind kind = NavKind::Word;
  std::vector<uint64_t> moduli;  // l_1..l_m
  FormulaPtr chi;
  std::vector<FormulaPtr> chi_list;
  struct Mod {
    bool geq;
    uint64_t k;
    uint64_t l;
    FormulaPtr psi;
  };
  std::vector<Mod> mods;
  size_t n_types = 0;  // 2^|preds|

  size_t matrix_count() const { return 1 + chi_list.size() + mods.size(); }
  const FormulaPtr& matrix(size_t idx) const;

  // Does alpha(x), beta(y), theta(x,y) propositionally force matrix idx?
  bool entails(size_t idx, int theta, OneType alpha, OneType beta) const;

 private:
  mutable std::unordered_map<uint64_t, bool> memo_;
};

CompiledNF compile_nf(const NormalFormFormula& nf, size_t max_onetypes = size_t{1} << 20);

// Evaluates a quantifier-free formula under the propositional valuation
// induced by the 1-types of x and y and the order formula between them.
bool qf_truth_under(const FormulaPtr& f, OneType alpha, OneType beta, int theta,
                    NavKind kind, const Signature& sig);

// The three-part compatibility check between one full type and a compiled
// normal form: every nonzero cell satisfies the universal matrix, every
// existential conjunct has a witnessing cell, and every counting conjunct's
// residue (summed over entailing cells) lands on the right side of k.
bool is_phi_consistent(const FullType& t, const CompiledNF& nf);

// (2 * l_1 * ... * l_m) ^ (|Theta| * |one-types|): the search-space bound
// on distinct full types, exact in arbitrary precision.
BigInt model_bound(const NormalFormFormula& nf);

}  // namespace fomod
