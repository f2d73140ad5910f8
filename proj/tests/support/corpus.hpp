#pragma once

#include <string>
#include <vector>

namespace fomod::testsupport {

// One test sentence in concrete syntax, with the structure kinds it can be
// evaluated over (a sentence with word navigation is word-only, etc.).
struct CorpusEntry {
  std::string text;
  bool word_ok;
  bool tree_ok;
};

// Fixed corpus: at most two unary predicates (p, q), moduli at most 4,
// quantifier depth at most 3. Mixes tautologies, unsatisfiable sentences,
// counting constraints, and navigation in both vocabularies.
const std::vector<CorpusEntry>& corpus();

// The subsets usable for word runs and tree runs, in corpus order.
std::vector<std::string> word_corpus();
std::vector<std::string> tree_corpus();

}  // namespace fomod::testsupport
