#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "fomod/eval.hpp"
#include "fomod/parser.hpp"
#include "fomod/reductions.hpp"
#include "machines.hpp"

using namespace fomod;
using namespace fomod::testsupport;

namespace {

bool has_tile(const std::vector<Tile>& set, const Tile& t) {
  return std::find(set.begin(), set.end(), t) != set.end();
}

// Collects the navigation symbols a formula mentions.
void collect_navs(const FormulaPtr& f, std::vector<NavSym>* out) {
  if (!f) return;
  if (f->kind == NodeKind::NavAtom) out->push_back(f->nav);
  collect_navs(f->lhs, out);
  collect_navs(f->rhs, out);
}

}  // namespace

TEST_CASE("the desk machines are structurally sound") {
  CHECK(validate_atm(machine_two_step_accepter()).empty());
  CHECK(validate_atm(machine_universal_rejecter()).empty());
  CHECK(validate_atm(machine_existential_chooser()).empty());
  CHECK(validate_atm(machine_forever_looper()).empty());
  CHECK(validate_atm(machine_right_left_mover()).empty());
}

TEST_CASE("validation rejects broken machines") {
  ATM m = machine_two_step_accepter();
  m.trans.pop_back();  // one (state, symbol) row now has a single transition
  CHECK(!validate_atm(m).empty());

  ATM same_parity = machine_two_step_accepter();
  same_parity.existential.push_back("u");  // q0 -> u no longer alternates
  CHECK(!validate_atm(same_parity).empty());

  ATM no_init = machine_two_step_accepter();
  no_init.existential = {"q1"};
  CHECK(!validate_atm(no_init).empty());
}

TEST_CASE("machines survive the text round trip") {
  for (const ATM& m : {machine_two_step_accepter(), machine_universal_rejecter(),
                       machine_right_left_mover()}) {
    ATM back = atm_from_text(atm_to_text(m));
    CHECK(back.states == m.states);
    CHECK(back.existential == m.existential);
    CHECK(back.initial == m.initial);
    CHECK(back.tape == m.tape);
    CHECK(back.trans == m.trans);
  }
  CHECK_THROWS_AS(atm_from_text("states q0"), std::invalid_argument);
}

TEST_CASE("alternating acceptance follows the and-or semantics") {
  CHECK(atm_accepts(machine_two_step_accepter(), {"a"}));
  CHECK(!atm_accepts(machine_universal_rejecter(), {"a"}));
  CHECK(atm_accepts(machine_existential_chooser(), {"a"}));
  CHECK(!atm_accepts(machine_forever_looper(), {"a"}));
  CHECK(atm_accepts(machine_right_left_mover(), {"a", "a"}));
}

TEST_CASE("acceptance guards its inputs") {
  ATM m = machine_two_step_accepter();
  CHECK_THROWS_AS(atm_accepts(m, {}), std::invalid_argument);
  CHECK_THROWS_AS(atm_accepts(m, {"z"}), std::invalid_argument);
  CHECK_THROWS_AS(atm_accepts(m, {"a"}, 1), std::invalid_argument);
}

TEST_CASE("the compiled game's colors are tape symbols, pairs, and white") {
  ATM m = machine_forever_looper();  // four states, two tape symbols
  TilingGame g = atm_to_game(m, {"a"});
  CHECK(g.colors.size() == 11);  // 2 + 4*2 + 1
  CHECK(g.white == "#");
  CHECK(g.n == 1);
  CHECK(validate_game(g).empty());
  CHECK(std::find(g.colors.begin(), g.colors.end(), "q0.a") != g.colors.end());
}

TEST_CASE("the initial tiles spell the starting configuration") {
  TilingGame g = atm_to_game(machine_two_step_accepter(), {"a"});
  REQUIRE(g.initial.size() == 2);
  CHECK(g.initial[0] == Tile{"#", "#", "#", "q0.a"});
  CHECK(g.initial[1] == Tile{"#", "#", "q0.a", "#"});
}

TEST_CASE("copy tiles live in both move sets") {
  ATM m = machine_two_step_accepter();
  TilingGame g = atm_to_game(m, {"a"});
  std::vector<std::string> plain = {"a", "B", "#"};
  for (const auto& a : plain)
    for (const auto& b : plain) {
      Tile copy{a, b, a, b};
      CHECK(has_tile(g.t0, copy));
      CHECK(has_tile(g.t1, copy));
    }
}

TEST_CASE("a left-moving transition contributes its three tile families") {
  ATM m = machine_right_left_mover();
  TilingGame g = atm_to_game(m, {"a", "a"});
  // The first transition of u reading a is (u, a, a, L, q1); first
  // transitions land in the first move set.
  CHECK(has_tile(g.t0, Tile{"a", "#", "a", "q1.B"}));   // head arrives from the right
  CHECK(has_tile(g.t0, Tile{"#", "u.a", "q1.B", "a"})); // the cell the head leaves
  CHECK(has_tile(g.t0, Tile{"u.a", "x", "a", "x"}));    // right neighbor copies
  // The second transition (u, a, a, N, q1) stays put and lands in set one.
  CHECK(has_tile(g.t1, Tile{"u.a", "x", "q1.a", "x"}));
  CHECK(has_tile(g.t1, Tile{"x", "u.a", "x", "q1.a"}));
}

TEST_CASE("accepting closures are winning tiles, rejecting ones are not") {
  TilingGame g = atm_to_game(machine_universal_rejecter(), {"a"});
  Tile accept_close{"qA.a", "#", "#", "#"};
  Tile reject_close{"qR.a", "#", "#", "#"};
  CHECK(has_tile(g.t0, accept_close));
  CHECK(has_tile(g.last, accept_close));
  CHECK(has_tile(g.t0, reject_close));
  CHECK(!has_tile(g.last, reject_close));
}

TEST_CASE("adjacency is shared-edge matching") {
  Tile t{"a", "b", "c", "d"};
  CHECK(h_adjacent(t, Tile{"b", "e", "d", "f"}));
  CHECK(v_adjacent(t, Tile{"c", "d", "e", "f"}));
  CHECK(!h_adjacent(t, Tile{"a", "e", "d", "f"}));
  CHECK(!h_adjacent(t, Tile{"b", "e", "c", "f"}));
  CHECK(!v_adjacent(t, Tile{"d", "c", "e", "f"}));
}

TEST_CASE("games survive the text round trip") {
  TilingGame g = atm_to_game(machine_two_step_accepter(), {"a"});
  TilingGame back = game_from_text(game_to_text(g));
  CHECK(back.colors == g.colors);
  CHECK(back.white == g.white);
  CHECK(back.n == g.n);
  CHECK(back.initial == g.initial);
  CHECK(back.t0 == g.t0);
  CHECK(back.t1 == g.t1);
  CHECK(back.last == g.last);
}

TEST_CASE("a one-move game resolves for whoever owns the closing row") {
  WinnerResult win = game_winner(game_one_move_win(), 4);
  CHECK(win.winner == GameWinner::Prover);
  REQUIRE(win.strategy.has_value());
  CHECK(validate_strategy(game_one_move_win(), *win.strategy).empty());

  WinnerResult loss = game_winner(game_one_move_loss(), 4);
  CHECK(loss.winner == GameWinner::Spoiler);
  CHECK(!loss.strategy.has_value());

  WinnerResult endless = game_winner(game_endless(), 3);
  CHECK(endless.winner == GameWinner::Unknown);
}

TEST_CASE("an ambiguous move set is reported, not searched through") {
  CHECK_THROWS_AS(game_winner(game_ambiguous(), 4), std::invalid_argument);
  WellFormedResult wf = check_well_formed(game_ambiguous(), 4);
  CHECK(!wf.ok);
  CHECK(wf.set == 0);
  CHECK(wf.extensions == 2);

  TilingGame stuck = game_one_move_win();
  stuck.t0.clear();
  stuck.last = stuck.t1;
  WellFormedResult sf = check_well_formed(stuck, 4);
  CHECK(!sf.ok);
  CHECK(sf.set == 0);
  CHECK(sf.extensions == 0);
}

TEST_CASE("compiled games are well-formed to desk depth") {
  CHECK(check_well_formed(atm_to_game(machine_two_step_accepter(), {"a"}), 4).ok);
  CHECK(check_well_formed(atm_to_game(machine_universal_rejecter(), {"a"}), 4).ok);
  CHECK(check_well_formed(atm_to_game(machine_forever_looper(), {"a"}), 4).ok);
}

TEST_CASE("game winners mirror machine acceptance") {
  CHECK(game_winner(atm_to_game(machine_two_step_accepter(), {"a"}), 8).winner ==
        GameWinner::Prover);
  CHECK(game_winner(atm_to_game(machine_universal_rejecter(), {"a"}), 8).winner ==
        GameWinner::Spoiler);
  CHECK(game_winner(atm_to_game(machine_existential_chooser(), {"a"}), 8).winner ==
        GameWinner::Prover);
  // A looping machine never resolves; bounded search cannot call it.
  CHECK(game_winner(atm_to_game(machine_forever_looper(), {"a"}), 6).winner ==
        GameWinner::Unknown);
}

TEST_CASE("the encoding vocabulary counts bits, tiles, colors, and marks") {
  TilingGame g = game_one_move_win();
  GameVocab v = game_vocab(g);
  CHECK(v.sig.nav == NavKind::Tree);
  CHECK(v.sig.preds.size() == g.n + v.tiles.size() + 4 * g.colors.size() + 9);
  CHECK(v.sig.preds[v.bits] == "B0");
  CHECK(v.sig.preds[v.tile0] == "tile0");
  CHECK(v.sig.preds[v.first] == "First");
  CHECK(v.sig.preds[v.set_l] == "setL");
  // White is "#", sanitized to W in the corner predicates.
  CHECK(v.sig.preds[v.pi(1, v.color_index("#"))] == "pi1_W");
  CHECK(v.sig.preds[v.pi(4, v.color_index("c"))] == "pi4_c");
  CHECK(v.tile_index(g.initial[0]) < v.tiles.size());
  CHECK_THROWS_AS(v.tile_index(Tile{"z", "z", "z", "z"}), std::invalid_argument);
}

TEST_CASE("the encoded formula is a well-formed tree sentence over down moves") {
  TilingGame g = game_one_move_win();
  FormulaPtr f = game_to_formula(g);
  GameVocab v = game_vocab(g);
  CHECK(well_formed_check(f, v.sig).empty());
  std::vector<NavSym> navs;
  collect_navs(f, &navs);
  CHECK(!navs.empty());
  for (NavSym s : navs) CHECK((s == NavSym::Child || s == NavSym::Desc));

  // The rendered sentence parses back to the same structure.
  ParseResult back = parse_formula(render_formula(f), v.sig);
  CHECK(structural_equal(back.formula, f));
}

TEST_CASE("strategies survive the text round trip") {
  TilingGame g = game_one_move_win();
  WinnerResult res = game_winner(g, 4);
  REQUIRE(res.strategy.has_value());
  StrategyTree back = strategy_from_text(strategy_to_text(*res.strategy));
  REQUIRE(back.nodes.size() == res.strategy->nodes.size());
  for (size_t i = 0; i < back.nodes.size(); ++i) {
    CHECK(back.nodes[i].row == res.strategy->nodes[i].row);
    CHECK(back.nodes[i].move == res.strategy->nodes[i].move);
    CHECK(back.nodes[i].children == res.strategy->nodes[i].children);
  }
  CHECK(validate_strategy(g, back).empty());
}

TEST_CASE("a one-move winning strategy encodes to a satisfying four-node tree") {
  TilingGame g = game_one_move_win();
  WinnerResult res = game_winner(g, 4);
  REQUIRE(res.strategy.has_value());
  TreeModel tree = strategy_to_tree(g, *res.strategy);
  CHECK(tree.size() == 4);  // two rows of width two
  GameVocab v = game_vocab(g);
  FormulaPtr f = game_to_formula(g);
  CHECK(check_sentence(tree, v.sig, f));

  // Erasing the tile predicate of the root breaks the encoding.
  TreeModel broken = tree;
  broken.nodes[0].labels.reset(v.tile0 + v.tile_index(g.initial[0]));
  CHECK(!check_sentence(broken, v.sig, f));
}

TEST_CASE("a compiled machine game encodes its strategy faithfully") {
  TilingGame g = atm_to_game(machine_two_step_accepter(), {"a"});
  WinnerResult res = game_winner(g, 8);
  REQUIRE(res.winner == GameWinner::Prover);
  REQUIRE(res.strategy.has_value());
  REQUIRE(validate_strategy(g, *res.strategy).empty());
  TreeModel tree = strategy_to_tree(g, *res.strategy);
  CHECK(check_sentence(tree, game_vocab(g).sig, game_to_formula(g)));
}

TEST_CASE("strategy encoding refuses a non-winning tree") {
  TilingGame g = game_one_move_win();
  WinnerResult res = game_winner(g, 4);
  REQUIRE(res.strategy.has_value());
  StrategyTree bad = *res.strategy;
  bad.nodes.resize(1);  // the root alone never closes the corridor
  bad.nodes[0].children.clear();
  CHECK_THROWS_AS(strategy_to_tree(g, bad), std::invalid_argument);
}

TEST_CASE("a hand-built corridor path satisfies the local tiling families") {
  // Width-four corridor: an initial row, a copy row, and a closing row,
  // encoded as a single twelve-node chain.
  TilingGame g;
  g.colors = {"#", "a", "b"};
  g.white = "#";
  g.n = 2;
  g.initial = {Tile{"#", "#", "#", "a"}, Tile{"#", "#", "a", "b"},
               Tile{"#", "#", "b", "#"}};
  Row row1 = {Tile{"#", "a", "#", "a"}, Tile{"a", "b", "a", "b"},
              Tile{"b", "#", "b", "#"}, Tile{"#", "#", "#", "#"}};
  Row row2 = {Tile{"#", "a", "#", "#"}, Tile{"a", "b", "#", "#"},
              Tile{"b", "#", "#", "#"}, Tile{"#", "#", "#", "#"}};
  g.t0 = row1;
  g.t1 = row2;
  g.last = row2;
  REQUIRE(validate_game(g).empty());

  GameVocab v = game_vocab(g);
  Row row0 = initial_row(g);
  std::vector<int> parents;
  std::vector<LabelMask> labels;
  auto add_row = [&](const Row& row, bool first, bool last, bool row_e, int move) {
    for (size_t col = 0; col < row.size(); ++col) {
      parents.push_back(static_cast<int>(labels.size()) - 1);
      labels.push_back(game_node_label(g, v, col, row[col], first, last, row_e, move));
    }
  };
  add_row(row0, true, false, true, -1);
  add_row(row1, false, false, false, 0);
  add_row(row2, false, true, true, 1);
  TreeModel path = tree_from_parents(parents, labels);
  REQUIRE(path.size() == 12);

  GameFormulaParts parts = game_formula_parts(g);
  CHECK(check_sentence(path, v.sig, parts.numbering));
  CHECK(check_sentence(path, v.sig, parts.tiles));
  CHECK(check_sentence(path, v.sig, parts.first_last));
  CHECK(check_sentence(path, v.sig, parts.rows));
  CHECK(check_sentence(path, v.sig, parts.horizontal));
  CHECK(check_sentence(path, v.sig, parts.vertical));
  CHECK(check_sentence(path, v.sig, parts.closing));
  // A universal row on a single path has only one child, so the branching
  // family is the one part a lone play cannot witness.
  CHECK(!check_sentence(path, v.sig, parts.universal));

  // Horizontal matching is sensitive: swapping one tile breaks it.
  Row bad_row1 = row1;
  std::swap(bad_row1[0], bad_row1[1]);
  parents.clear();
  labels.clear();
  add_row(row0, true, false, true, -1);
  add_row(bad_row1, false, false, false, 0);
  add_row(row2, false, true, true, 1);
  TreeModel bad_path = tree_from_parents(parents, labels);
  CHECK(!check_sentence(bad_path, v.sig, parts.horizontal));
}
