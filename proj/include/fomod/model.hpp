#pragma once

#include <bitset>
#include <cstdint>
#include <string>
#include <vector>

#include "fomod/formula.hpp"

namespace fomod {

// Label sets are bitmasks over the signature's predicates: bit i set means
// predicate sig.preds[i] holds. Wide enough for machine-generated
// vocabularies (tile and color predicates), not just hand-written ones.
using LabelMask = std::bitset<256>;
constexpr size_t kMaxPreds = 256;

// Finite word: one label set per position, left to right. Universes are
// non-empty, so positions.size() >= 1 for every valid model.
struct WordModel {
  std::vector<LabelMask> positions;
  size_t size() const { return positions.size(); }
  bool operator==(const WordModel& o) const { return positions == o.positions; }
};

// Finite ordered unranked tree, nodes addressed by preorder index, root 0.
struct TreeNode {
  LabelMask labels = 0;
  int parent = -1;               // -1 for the root
  std::vector<int> children;     // left-to-right order
};

struct TreeModel {
  std::vector<TreeNode> nodes;   // preorder: node 0 is the root
  size_t size() const { return nodes.size(); }
  bool operator==(const TreeModel& o) const;
};

// Builds a preorder-indexed tree from a parent vector (parent[0] must be -1,
// parents must precede children) with children attached in index order.
TreeModel tree_from_parents(const std::vector<int>& parents,
                            const std::vector<LabelMask>& labels);

// Structural validation (single root, acyclic, consistent parent/child links).
std::vector<std::string> validate_tree(const TreeModel& t);

// --- file formats ---------------------------------------------------------
// Word files: one position per line, labels in braces, e.g. "{p q}" or "{}".
// Tree files: one parenthesized term, e.g. "({p} ({} ({q})) ({p q}))".
// Both are whitespace-insensitive; predicates must belong to the signature.

std::string word_to_text(const WordModel& m, const Signature& sig);
WordModel word_from_text(const std::string& text, const Signature& sig);

std::string tree_to_text(const TreeModel& m, const Signature& sig);
TreeModel tree_from_text(const std::string& text, const Signature& sig);

// Single-line rendering of either kind, used in reports.
std::string word_inline(const WordModel& m, const Signature& sig);
std::string tree_inline(const TreeModel& m, const Signature& sig);

struct ModelReadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fomod
