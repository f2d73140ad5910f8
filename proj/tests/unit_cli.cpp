// Tests for the command-line front end: exit codes, report contents, and the
// files each subcommand reads and writes. Every run goes through run_cli with
// captured streams, so these tests double as end-to-end pipelines over real
// artifacts (formula -> witness -> check, machine -> game -> winner ->
// strategy -> tree model).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fomod/atm.hpp"
#include "fomod/cli.hpp"
#include "fomod/eval.hpp"
#include "fomod/model.hpp"
#include "fomod/parser.hpp"
#include "fomod/reductions.hpp"
#include "machines.hpp"

namespace fs = std::filesystem;
using namespace fomod;
using namespace fomod::testsupport;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Each test works in its own scratch directory so witness defaults and
// output files never collide across test cases.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("fomod_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    fs::path p = dir / name;
    std::ofstream os(p, std::ios::binary);
    os << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  std::string cur;
  while (std::getline(in, cur))
    if (cur == line) return true;
  return false;
}

std::string line_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string cur;
  const std::string prefix = key + ": ";
  while (std::getline(in, cur))
    if (cur.rfind(prefix, 0) == 0) return cur.substr(prefix.size());
  return "";
}

}  // namespace

TEST_CASE("solve reports SAT with a verified witness and exits 0") {
  Scratch s("solve_sat");
  std::string f = s.file("f.fo2", "A x . E y . leq(x, y) & p(y)\n");
  Run r = run({"solve", "--kind", "word", "--formula", f});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(has_line(r.out, "command: solve"));
  CHECK(has_line(r.out, "kind: word"));
  CHECK(has_line(r.out, "formula: " + f));
  CHECK(has_line(r.out, "verdict: SAT"));
  CHECK(has_line(r.out, "witness-verified: true"));
  // Default witness path is <formula>.model; the file must itself pass check.
  std::string witness = line_value(r.out, "witness");
  CHECK(witness == f + ".model");
  Run chk = run({"check", "--kind", "word", "--formula", f, "--model", witness});
  CHECK(chk.code == 0);
  CHECK(has_line(chk.out, "result: true"));
}

TEST_CASE("solve honors an explicit witness path") {
  Scratch s("solve_witness");
  std::string f = s.file("f.fo2", "E x . p(x)\n");
  std::string w = s.path("out.model");
  Run r = run({"solve", "--kind", "word", "--formula", f, "--witness", w});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "witness: " + w));
  CHECK(fs::exists(w));
}

TEST_CASE("solve reports UNSAT with exit 1 and writes no witness") {
  Scratch s("solve_unsat");
  std::string f = s.file("f.fo2",
                         "(A x . E[>= 1 mod 2] y . p(y)) & (A x . E[<= 0 mod 2] y . p(y))\n");
  Run r = run({"solve", "--kind", "word", "--formula", f});
  CHECK(r.code == 1);
  CHECK(has_line(r.out, "verdict: UNSAT"));
  CHECK(r.out.find("witness") == std::string::npos);
  CHECK_FALSE(fs::exists(f + ".model"));
}

TEST_CASE("solve under a tiny state budget is inconclusive with exit 2") {
  Scratch s("solve_budget");
  std::string f = s.file("f.fo2", "A x . E y . leq(x, y) & p(y)\n");
  Run r = run({"solve", "--kind", "word", "--formula", f, "--max-states", "1"});
  CHECK(r.code == 2);
  CHECK(has_line(r.out, "verdict: INCONCLUSIVE"));
  CHECK(line_value(r.out, "note") != "");
}

TEST_CASE("solve solves tree formulas when asked for trees") {
  Scratch s("solve_tree");
  std::string f = s.file("f.fo2", "E x . A y . !child(x, y) | p(y)\n");
  Run r = run({"solve", "--kind", "tree", "--formula", f});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "kind: tree"));
  std::string witness = line_value(r.out, "witness");
  Run chk = run({"check", "--kind", "tree", "--formula", f, "--model", witness});
  CHECK(chk.code == 0);
}

TEST_CASE("solve rejects a formula whose navigation does not match the kind") {
  Scratch s("solve_kind");
  std::string f = s.file("f.fo2", "E x . E y . child(x, y)\n");
  Run r = run({"solve", "--kind", "word", "--formula", f});
  CHECK(r.code == 3);
  CHECK(r.err.find("tree navigation") != std::string::npos);
}

TEST_CASE("check distinguishes true from false and exits accordingly") {
  Scratch s("check");
  std::string f = s.file("f.fo2", "A x . E[<= 0 mod 2] y . p(y)\n");
  std::string good = s.file("good.model", "{p}\n{p}\n");
  std::string bad = s.file("bad.model", "{p}\n");
  Run yes = run({"check", "--kind", "word", "--formula", f, "--model", good});
  CHECK(yes.code == 0);
  CHECK(has_line(yes.out, "command: check"));
  CHECK(has_line(yes.out, "model: " + good));
  CHECK(has_line(yes.out, "result: true"));
  Run no = run({"check", "--kind", "word", "--formula", f, "--model", bad});
  CHECK(no.code == 1);
  CHECK(has_line(no.out, "result: false"));
}

TEST_CASE("check reads tree models in parenthesized form") {
  Scratch s("check_tree");
  std::string f = s.file("f.fo2", "E x . E y . child(x, y) & p(y)\n");
  std::string m = s.file("t.model", "({} ({p}))\n");
  Run r = run({"check", "--kind", "tree", "--formula", f, "--model", m});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "result: true"));
}

TEST_CASE("normalize reports conjunct counts and renders a reparsable shape") {
  Scratch s("normalize");
  std::string f = s.file("f.fo2", "A x . A y . !(p(x) & p(y))\n");
  Run r = run({"normalize", "--formula", f});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "command: normalize"));
  // A normal-shaped input passes through: padding supplies the exists and
  // counting conjuncts, and no fresh predicates are minted.
  CHECK(has_line(r.out, "forall-exists-conjuncts: 1"));
  CHECK(has_line(r.out, "counting-conjuncts: 1"));
  CHECK(has_line(r.out, "fresh-predicates: 0"));
  std::string rendered = line_value(r.out, "normal-form");
  CHECK(rendered != "");
  ParseResult again = parse_formula(rendered);
  CHECK(well_formed_check(again.formula, again.sig).empty());
}

TEST_CASE("normalize writes the formula to --out instead of the report") {
  Scratch s("normalize_out");
  std::string f = s.file("f.fo2", "E x . (p(x) <-> E y . succ(x, y))\n");
  std::string o = s.path("nf.fo2");
  Run r = run({"normalize", "--formula", f, "--out", o});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "out: " + o));
  CHECK(r.out.find("normal-form:") == std::string::npos);
  std::string fresh = line_value(r.out, "fresh-predicates");
  CHECK(fresh != "0");  // the biconditional under E x forces renaming
  ParseResult again = parse_formula(slurp(o));
  CHECK(well_formed_check(again.formula, again.sig).empty());
}

TEST_CASE("oracle finds small witnesses and reports misses with the bound") {
  Scratch s("oracle");
  std::string sat = s.file("sat.fo2", "E x . E y . succ(x, y) & p(y)\n");
  std::string w = s.path("w.model");
  Run hit = run({"oracle", "--kind", "word", "--formula", sat, "--max-size", "3",
                 "--witness", w});
  CHECK(hit.code == 0);
  CHECK(has_line(hit.out, "verdict: SAT"));
  CHECK(has_line(hit.out, "witness: " + w));
  Run chk = run({"check", "--kind", "word", "--formula", sat, "--model", w});
  CHECK(chk.code == 0);

  std::string unsat = s.file("unsat.fo2", "E x . p(x) & !p(x)\n");
  Run miss = run({"oracle", "--kind", "word", "--formula", unsat, "--max-size", "3"});
  CHECK(miss.code == 1);
  CHECK(has_line(miss.out, "verdict: NO-MODEL-UP-TO-BOUND"));
  CHECK(has_line(miss.out, "bound: 3"));
}

TEST_CASE("oracle reports INCONCLUSIVE when the work cap trips") {
  Scratch s("oracle_cap");
  std::string f = s.file("f.fo2", "E x . p(x) & !p(x)\n");
  Run r = run({"oracle", "--kind", "word", "--formula", f, "--max-size", "6",
               "--work-cap", "1"});
  CHECK(r.code == 2);
  CHECK(has_line(r.out, "verdict: INCONCLUSIVE"));
  CHECK(line_value(r.out, "note") != "");
}

TEST_CASE("machine-to-game-to-winner pipeline tracks machine acceptance") {
  Scratch s("pipeline");
  ATM accepter = machine_two_step_accepter();
  ATM rejecter = machine_universal_rejecter();
  std::string acc = s.file("acc.atm", atm_to_text(accepter));
  std::string rej = s.file("rej.atm", atm_to_text(rejecter));
  REQUIRE(atm_accepts(accepter, {"a"}));
  REQUIRE_FALSE(atm_accepts(rejecter, {"a"}));

  std::string acc_game = s.path("acc.game");
  Run build = run({"reduce", "atm2game", "--atm", acc, "--input", "a", "--out",
                   acc_game});
  CHECK(build.code == 0);
  CHECK(has_line(build.out, "command: reduce-atm2game"));
  CHECK(has_line(build.out, "input: a"));
  CHECK(has_line(build.out, "width: 2"));
  CHECK(line_value(build.out, "colors") != "");

  std::string strat = s.path("acc.strategy");
  Run win = run({"game", "winner", "--game", acc_game, "--depth", "8",
                 "--strategy", strat});
  CHECK(win.code == 0);
  CHECK(has_line(win.out, "winner: Prover"));
  CHECK(has_line(win.out, "strategy: " + strat));
  CHECK(fs::exists(strat));

  std::string rej_game = s.path("rej.game");
  Run build2 = run({"reduce", "atm2game", "--atm", rej, "--input", "a", "--out",
                    rej_game});
  CHECK(build2.code == 0);
  Run lose = run({"game", "winner", "--game", rej_game, "--depth", "8"});
  CHECK(lose.code == 1);
  CHECK(has_line(lose.out, "winner: Spoiler"));
  CHECK(lose.out.find("strategy:") == std::string::npos);

  // Unknown outcome: an endless game with no last row and a shallow budget.
  std::string endless = s.file("endless.game", game_to_text(game_endless()));
  Run unk = run({"game", "winner", "--game", endless, "--depth", "3"});
  CHECK(unk.code == 2);
  CHECK(has_line(unk.out, "winner: Unknown"));
}

TEST_CASE("game wellformed reports the offending frontier on failure") {
  Scratch s("wellformed");
  std::string ok = s.file("ok.game",
                          game_to_text(atm_to_game(machine_two_step_accepter(), {"a"})));
  Run good = run({"game", "wellformed", "--game", ok, "--depth", "4"});
  CHECK(good.code == 0);
  CHECK(has_line(good.out, "well-formed: true"));
  CHECK(good.out.find("frontier") == std::string::npos);

  std::string bad = s.file("bad.game", game_to_text(game_ambiguous()));
  Run r = run({"game", "wellformed", "--game", bad, "--depth", "4"});
  CHECK(r.code == 1);
  CHECK(has_line(r.out, "well-formed: false"));
  CHECK(line_value(r.out, "frontier") != "");
  std::string set = line_value(r.out, "set");
  CHECK((set == "T0" || set == "T1"));
  CHECK(has_line(r.out, "extensions: >=2"));
}

TEST_CASE("encode strategy turns a winning strategy into a model of the game formula") {
  Scratch s("encode");
  TilingGame g = game_one_move_win();
  std::string game_path = s.file("g.game", game_to_text(g));
  std::string strat = s.path("g.strategy");
  Run win = run({"game", "winner", "--game", game_path, "--depth", "4",
                 "--strategy", strat});
  REQUIRE(win.code == 0);

  std::string formula_path = s.path("g.fo2");
  Run enc_f = run({"reduce", "game2formula", "--game", game_path, "--out",
                   formula_path});
  CHECK(enc_f.code == 0);
  CHECK(has_line(enc_f.out, "command: reduce-game2formula"));
  CHECK(line_value(enc_f.out, "predicates") != "");

  std::string model_path = s.path("g.tree");
  Run enc_s = run({"encode", "strategy", "--game", game_path, "--strategy", strat,
                   "--out", model_path});
  CHECK(enc_s.code == 0);
  CHECK(has_line(enc_s.out, "command: encode-strategy"));
  CHECK(line_value(enc_s.out, "nodes") != "");

  Run chk = run({"check", "--kind", "tree", "--formula", formula_path, "--model",
                 model_path});
  CHECK(chk.code == 0);
  CHECK(has_line(chk.out, "result: true"));
}

TEST_CASE("shrink rewrites a satisfying model into a no-larger one") {
  Scratch s("shrink");
  std::string f = s.file("f.fo2", "A x . E[>= 0 mod 2] y . x = y\n");
  std::string m = s.file("m.model", "{}\n{}\n{}\n{}\n{}\n{}\n{}\n");
  std::string o = s.path("small.model");
  Run r = run({"shrink", "--kind", "word", "--formula", f, "--model", m,
               "--out", o});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "input-size: 7"));
  CHECK(has_line(r.out, "output-size: 5"));
  Run chk = run({"check", "--kind", "word", "--formula", f, "--model", o});
  CHECK(chk.code == 0);
}

TEST_CASE("shrink refuses a model that does not satisfy the formula") {
  Scratch s("shrink_bad");
  std::string f = s.file("f.fo2", "A x . p(x)\n");
  std::string m = s.file("m.model", "{}\n");
  Run r = run({"shrink", "--kind", "word", "--formula", f, "--model", m,
               "--out", s.path("o.model")});
  CHECK(r.code == 3);
  CHECK(r.err.find("does not satisfy") != std::string::npos);
}

TEST_CASE("usage errors exit 3 and syntax errors carry a position") {
  Scratch s("usage");
  CHECK(run({"frobnicate"}).code == 3);
  CHECK(run({}).code == 3);
  CHECK(run({"solve", "--kind", "word"}).code == 3);  // missing --formula
  Run bad_kind = run({"solve", "--kind", "list", "--formula",
                      s.file("f.fo2", "E x . p(x)\n")});
  CHECK(bad_kind.code == 3);
  CHECK(bad_kind.err.find("unknown kind") != std::string::npos);
  Run syntax = run({"check", "--kind", "word", "--formula",
                    s.file("g.fo2", "E x . p(x\n"), "--model",
                    s.file("m.model", "{p}\n")});
  CHECK(syntax.code == 3);
  CHECK(syntax.err.find("line") != std::string::npos);
  Run missing = run({"solve", "--kind", "word", "--formula", s.path("absent.fo2")});
  CHECK(missing.code == 3);
  CHECK(missing.err.find("cannot open") != std::string::npos);
  Run bad_model = run({"check", "--kind", "word", "--formula",
                       s.file("h.fo2", "E x . p(x)\n"), "--model",
                       s.file("broken.model", "{p\n")});
  CHECK(bad_model.code == 3);
}

TEST_CASE("help exits 0") {
  Run r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("solve") != std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns") {
  Scratch s("rerun");
  std::string f = s.file("f.fo2", "A x . E y . leq(x, y) & p(y)\n");
  Run a = run({"solve", "--kind", "word", "--formula", f});
  Run b = run({"solve", "--kind", "word", "--formula", f});
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);

  std::string game_path = s.file("g.game",
                                 game_to_text(atm_to_game(machine_two_step_accepter(), {"a"})));
  Run w1 = run({"game", "winner", "--game", game_path, "--depth", "8"});
  Run w2 = run({"game", "winner", "--game", game_path, "--depth", "8"});
  CHECK(w1.out == w2.out);
}

TEST_CASE("seed is echoed only when given and timings only when asked") {
  Scratch s("seed");
  std::string f = s.file("f.fo2", "E x . p(x)\n");
  Run plain = run({"solve", "--kind", "word", "--formula", f});
  CHECK(plain.out.find("seed:") == std::string::npos);
  CHECK(plain.out.find("elapsed-seconds") == std::string::npos);
  Run seeded = run({"solve", "--seed", "42", "--kind", "word", "--formula", f});
  CHECK(has_line(seeded.out, "seed: 42"));
  Run timed = run({"solve", "--timings", "--kind", "word", "--formula", f});
  CHECK(line_value(timed.out, "elapsed-seconds") != "");
  // The seed changes nothing but the echo line.
  std::string stripped;
  std::istringstream in(seeded.out);
  std::string cur;
  while (std::getline(in, cur))
    if (cur.rfind("seed:", 0) != 0) stripped += cur + "\n";
  CHECK(stripped == plain.out);
}
