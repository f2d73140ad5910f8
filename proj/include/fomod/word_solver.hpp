#pragma once

#include "fomod/normal_form.hpp"
#include "fomod/types.hpp"

namespace fomod {

struct SolveOptions {
  uint64_t max_states = 5'000'000;      // expansions + guessed tables before giving up
  size_t max_onetypes = size_t{1} << 20;
  unsigned max_degree = 8;              // tree solver: sibling sequence length cap
  unsigned jobs = 1;                    // reserved; the solvers run sequentially
};

enum class Verdict { Sat, Unsat, Inconclusive };

const char* verdict_name(Verdict v);

struct SolveResult {
  Verdict verdict = Verdict::Unsat;
  std::optional<WordModel> word;  // present iff verdict == Sat (word runs)
  std::optional<TreeModel> tree;  // present iff verdict == Sat (tree runs)
  uint64_t explored = 0;
  double elapsed_seconds = 0.0;
  std::string note;  // cap diagnostics for inconclusive verdicts
};

// Structural compatibility of the full types of two adjacent positions:
//   (E1) succ's previous-element row equals cur's own singleton;
//   (E2) cur's next-element row equals succ's own singleton;
//   (E3) succ's far-before row is cur's far-before row plus cur's previous row;
//   (E4) cur's far-after row is succ's far-after row plus succ's next row.
bool is_valid_successor(const FullType& succ, const FullType& cur);

// Depth-first search over phi-consistent full types chained by the equations
// above, from first-position types (far-before and previous rows zero) to
// last-position types (far-after and next rows zero). SAT verdicts carry a
// witness word, rebuilt from the path and re-checked against the sentence.
SolveResult solve_word(const NormalFormFormula& nf, const SolveOptions& opts = {});

// Pumping surgery: while two positions realize the same full type, the
// letters strictly between them are removed and the pair collapses into one
// position. The result satisfies nf and realizes pairwise-distinct types.
WordModel shrink_word(const WordModel& model, const NormalFormFormula& nf);

}  // namespace fomod
