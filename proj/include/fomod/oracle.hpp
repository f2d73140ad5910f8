#pragma once

#include <functional>

#include "fomod/eval.hpp"
#include "fomod/model.hpp"

namespace fomod {

// Canonical enumeration of all structures of size 1..max_size over sig:
// words by length then labeling, trees by size, shape (root plus the
// recursively enumerated forest of child subtrees), then labeling. The
// visitor returns false to stop early. Order is deterministic.
void enumerate_words(const Signature& sig, size_t max_size,
                     const std::function<bool(const WordModel&)>& visit);
void enumerate_trees(const Signature& sig, size_t max_size,
                     const std::function<bool(const TreeModel&)>& visit);

// Total number of enumerated structures (closed-form cross-check).
BigInt count_models(const Signature& sig, NavKind kind, size_t max_size);

struct OracleVerdict {
  bool sat = false;
  size_t bound = 0;  // when unsat: no model up to this size exists
  std::optional<WordModel> word;
  std::optional<TreeModel> tree;
};

// Brute-force bounded satisfiability: the first enumerated model of f, or
// the negative verdict with the bound. With jobs > 1 models are checked in
// parallel batches, still reporting the enumeration-least witness. Throws
// ResourceError when the enumeration would exceed work_cap models.
OracleVerdict oracle_sat(const FormulaPtr& f, const Signature& sig, NavKind kind,
                         size_t max_size, unsigned jobs = 1,
                         uint64_t work_cap = 200'000'000);

}  // namespace fomod
