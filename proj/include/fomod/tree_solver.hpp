#pragma once

#include "fomod/word_solver.hpp"

namespace fomod {

// Reduced description of a subtree: the root's 1-type plus the aggregated
// cell table over all proper descendants. The two halves are kept apart
// because flags only saturate upward: a combined total cannot recover the
// descendant part once the root's own 1-type is mixed in.
struct SubtreeSummary {
  OneType root = 0;
  CellTable desc;

  bool operator==(const SubtreeSummary& o) const {
    return root == o.root && desc == o.desc;
  }
};

// The components of a child's full type that its surroundings determine:
// parent, remoter ancestors, the four sibling rows, and the unrelated rest.
// The downward rows and the node's own singleton are the subtree's business.
struct ChildContext {
  CellTable up, up_far, left, left_far, right, right_far, free;

  bool operator==(const ChildContext& o) const = default;
};

// Context of a child of a node realizing `parent`, given the left and right
// sibling subtrees in order (nearest sibling last in `left`, first in
// `right`). The unrelated row collects everything the parent cannot reach
// downward plus the interiors of all sibling subtrees.
ChildContext derive_child_context(const FullType& parent,
                                  const std::vector<SubtreeSummary>& left,
                                  const std::vector<SubtreeSummary>& right);

// Memoized AND-OR search: a subtree is feasible when its root's assembled
// full type passes the consistency check and some ordered child sequence
// realizes the downward obligations with every child feasible in turn. SAT
// verdicts carry a reconstructed witness tree, re-checked in-process.
SolveResult solve_tree(const NormalFormFormula& nf, const SolveOptions& opts = {});

// Pumping surgeries: replace an ancestor's subtree by an equal-full-type
// descendant's, and cut sibling ranges between equal-full-type children.
// Every step is verified before it is kept, so the result always satisfies
// nf; surgery stops when no verified step applies.
TreeModel shrink_tree(const TreeModel& model, const NormalFormFormula& nf);

}  // namespace fomod
