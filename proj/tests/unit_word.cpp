#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "fomod/oracle.hpp"
#include "fomod/parser.hpp"
#include "fomod/word_solver.hpp"

using namespace fomod;

namespace {

Signature word_sig(std::vector<std::string> preds) {
  Signature s;
  s.preds = std::move(preds);
  s.nav = NavKind::Word;
  return s;
}

WordModel word_of(const Signature& sig, const std::vector<std::vector<std::string>>& rows) {
  WordModel m;
  for (const auto& row : rows) {
    LabelMask mask;
    for (const auto& p : row) mask.set(static_cast<size_t>(sig.index_of(p)));
    m.positions.push_back(mask);
  }
  return m;
}

NormalFormFormula word_nf(const std::string& text) {
  ParseResult r = parse_formula(text);
  Signature sig = r.sig;
  sig.nav = NavKind::Word;
  return normalize(r.formula, sig);
}

}  // namespace

TEST_CASE("adjacent positions pass the successor linkage equations") {
  Signature sig = word_sig({"p"});
  WordModel m = word_of(sig, {{"p"}, {}});
  ModelView view(m, sig);
  FullType first = realized_full_type(view, 0, {2});
  FullType second = realized_full_type(view, 1, {2});
  CHECK(is_valid_successor(second, first));
  CHECK(!is_valid_successor(first, second));

  WordModel single = word_of(sig, {{"p"}});
  ModelView sv(single, sig);
  FullType only = realized_full_type(sv, 0, {2});
  CHECK(!is_valid_successor(only, only));
}

TEST_CASE("successor linkage holds for every adjacent pair and no reversed one") {
  Signature sig = word_sig({"p"});
  enumerate_words(sig, 4, [&](const WordModel& m) {
    ModelView view(m, sig);
    std::vector<FullType> types;
    for (int v = 0; v < view.size(); ++v)
      types.push_back(realized_full_type(view, v, {2}));
    for (int v = 0; v + 1 < view.size(); ++v) {
      CHECK(is_valid_successor(types[v + 1], types[v]));
      // The reversed orientation would make position v the later one.
      CHECK(!is_valid_successor(types[v], types[v + 1]));
    }
    return true;
  });
}

TEST_CASE("an eventually-p constraint is satisfiable with a p-final witness") {
  NormalFormFormula nf = word_nf("A x . E y . leq(x,y) & p(y)");
  SolveResult res = solve_word(nf);
  REQUIRE(res.verdict == Verdict::Sat);
  REQUIRE(res.word.has_value());
  CHECK(check_sentence(*res.word, nf.extended_sig, nf.to_formula()));
  // The last position can only find its witness at itself.
  int p_bit = nf.extended_sig.index_of("p");
  REQUIRE(p_bit >= 0);
  CHECK(res.word->positions.back().test(static_cast<size_t>(p_bit)));
}

TEST_CASE("contradictory residue constraints are unsatisfiable") {
  NormalFormFormula nf = word_nf(
      "(A x . E[>= 1 mod 2] y . p(y)) & (A x . E[<= 0 mod 2] y . p(y))");
  SolveResult res = solve_word(nf);
  CHECK(res.verdict == Verdict::Unsat);
  CHECK(!res.word.has_value());
}

TEST_CASE("an even nonzero count of p needs two positions") {
  NormalFormFormula nf =
      word_nf("(A x . E[<= 0 mod 2] y . p(y)) & (A x . E y . p(y))");
  SolveResult res = solve_word(nf);
  REQUIRE(res.verdict == Verdict::Sat);
  REQUIRE(res.word.has_value());
  CHECK(check_sentence(*res.word, nf.extended_sig, nf.to_formula()));
  CHECK(res.word->size() >= 2);

  // The enumeration-least oracle witness pins the minimal length at 2.
  ParseResult r = parse_formula(
      "(A x . E[<= 0 mod 2] y . p(y)) & (A x . E y . p(y))");
  Signature sig = r.sig;
  sig.nav = NavKind::Word;
  OracleVerdict oracle = oracle_sat(r.formula, sig, NavKind::Word, 4);
  REQUIRE(oracle.sat);
  CHECK(oracle.word->size() == 2);
}

TEST_CASE("state exploration stays within the closed-form bound") {
  NormalFormFormula nf = word_nf("A x . E[>= 1 mod 2] y . p(y)");
  SolveResult res = solve_word(nf);
  CHECK(res.verdict == Verdict::Sat);
  CHECK(BigInt(res.explored) <= model_bound(nf));
}

TEST_CASE("a state cap produces an inconclusive verdict, never unsat") {
  NormalFormFormula nf = word_nf(
      "(A x . E[>= 1 mod 3] y . p(y) | q(y)) & (A x . E[<= 1 mod 4] y . q(y))");
  SolveOptions opts;
  opts.max_states = 1;
  SolveResult res = solve_word(nf, opts);
  CHECK(res.verdict == Verdict::Inconclusive);
  CHECK(!res.note.empty());
}

TEST_CASE("solver verdicts agree with the exhaustive oracle on samples") {
  for (const auto& text : testsupport::word_corpus()) {
    ParseResult r = parse_formula(text);
    Signature sig = r.sig;
    sig.nav = NavKind::Word;
    if (sig.preds.size() > 2) continue;
    NormalFormFormula nf = normalize(r.formula, sig);
    SolveResult res = solve_word(nf);
    REQUIRE(res.verdict != Verdict::Inconclusive);
    OracleVerdict oracle = oracle_sat(r.formula, sig, NavKind::Word, 5);
    if (res.verdict == Verdict::Sat) {
      REQUIRE(res.word.has_value());
      CHECK(check_sentence(*res.word, nf.extended_sig, nf.to_formula()));
      WordModel original = restrict_word_model(*res.word, nf);
      CHECK(check_sentence(original, sig, r.formula));
      if (res.word->size() <= 5) CHECK(oracle.sat);
    } else {
      CHECK(!oracle.sat);
    }
  }
}

TEST_CASE("pumping removes interior repetition from an unlabeled word") {
  // End positions always realize distinct full types (their neighbor rows
  // have different flags), so the collapse happens among interior positions
  // whose before/after residues agree. Length seven leaves five behind.
  NormalFormFormula nf = word_nf("A x . E[>= 0 mod 2] y . x = y");
  Signature sig = nf.extended_sig;
  WordModel m;
  m.positions.assign(7, LabelMask{});
  WordModel small = shrink_word(m, nf);
  CHECK(small.size() == 5);
  CHECK(check_sentence(small, sig, nf.to_formula()));

  ModelView view(small, sig);
  std::vector<std::string> keys;
  for (int v = 0; v < view.size(); ++v)
    keys.push_back(full_type_key(realized_full_type(view, v, {2})));
  for (size_t i = 0; i < keys.size(); ++i)
    for (size_t j = i + 1; j < keys.size(); ++j) CHECK(keys[i] != keys[j]);
}

TEST_CASE("a word with pairwise-distinct full types is a shrink fixpoint") {
  NormalFormFormula nf = word_nf("A x . E y . leq(x,y)");
  Signature sig = nf.extended_sig;
  // Two unlabeled positions: first and last realize different types because
  // their predecessor/successor rows differ.
  WordModel m;
  m.positions = {LabelMask{}, LabelMask{}};
  CompiledNF cnf = compile_nf(nf);
  ModelView view(m, sig);
  REQUIRE(full_type_key(realized_full_type(view, 0, cnf.moduli)) !=
          full_type_key(realized_full_type(view, 1, cnf.moduli)));
  WordModel out = shrink_word(m, nf);
  CHECK(out == m);
}

TEST_CASE("a four-position even-p word already realizes distinct types") {
  // Each position is distinguished by its closest-neighbor rows, so the
  // surgery has nothing to collapse and the word is returned unchanged.
  NormalFormFormula nf =
      word_nf("(A x . E[<= 0 mod 2] y . p(y)) & (A x . E y . p(y))");
  Signature sig = nf.extended_sig;
  WordModel m = word_of(sig, {{"p"}, {}, {}, {"p"}});
  REQUIRE(check_sentence(m, sig, nf.to_formula()));
  CHECK(shrink_word(m, nf) == m);
}

TEST_CASE("pumping shortens a long even-p word and keeps the count even") {
  NormalFormFormula nf =
      word_nf("(A x . E[<= 0 mod 2] y . p(y)) & (A x . E y . p(y))");
  Signature sig = nf.extended_sig;
  WordModel m = word_of(sig, std::vector<std::vector<std::string>>(
                                 8, std::vector<std::string>{"p"}));
  REQUIRE(check_sentence(m, sig, nf.to_formula()));
  WordModel out = shrink_word(m, nf);
  CHECK(out.size() == 6);
  CHECK(check_sentence(out, sig, nf.to_formula()));
}

TEST_CASE("shrink rejects words that do not satisfy the constraints") {
  NormalFormFormula nf = word_nf("A x . E[>= 1 mod 2] y . p(y)");
  Signature sig = nf.extended_sig;
  WordModel bad = word_of(sig, {{}, {}});
  CHECK_THROWS_AS(shrink_word(bad, nf), std::invalid_argument);
}
