#include "fomod/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fomod/atm.hpp"
#include "fomod/eval.hpp"
#include "fomod/formula.hpp"
#include "fomod/model.hpp"
#include "fomod/normal_form.hpp"
#include "fomod/oracle.hpp"
#include "fomod/parser.hpp"
#include "fomod/reductions.hpp"
#include "fomod/tiling.hpp"
#include "fomod/tree_solver.hpp"
#include "fomod/types.hpp"
#include "fomod/word_solver.hpp"

namespace fomod {

namespace {

// Line-oriented key:value output in insertion order, so identical runs
// produce byte-identical reports.
struct Report {
  std::vector<std::pair<std::string, std::string>> rows;
  void add(std::string key, std::string value) {
    rows.emplace_back(std::move(key), std::move(value));
  }
  void print(std::ostream& os) const {
    for (const auto& [key, value] : rows) os << key << ": " << value << "\n";
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

// An input word is one letter per character, or comma-separated multi-letter
// symbols when the string contains a comma.
std::vector<std::string> split_input(const std::string& s) {
  std::vector<std::string> out;
  if (s.find(',') != std::string::npos) {
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
  } else {
    for (char ch : s) out.emplace_back(1, ch);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool has_nav_of_kind(const FormulaPtr& f, NavKind kind) {
  if (!f) return false;
  if (f->kind == NodeKind::NavAtom) return nav_kind_of(f->nav) == kind;
  return has_nav_of_kind(f->lhs, kind) || has_nav_of_kind(f->rhs, kind);
}

// Shared solver/limit flags; seed is echoed for provenance but the solvers
// are deterministic and take no randomness.
struct Common {
  uint64_t max_states = SolveOptions{}.max_states;
  uint64_t max_onetypes = SolveOptions{}.max_onetypes;
  unsigned max_degree = SolveOptions{}.max_degree;
  unsigned jobs = 1;
  long long seed = 0;
  bool seed_given = false;
  bool timings = false;

  SolveOptions solve_options() const {
    SolveOptions o;
    o.max_states = max_states;
    o.max_onetypes = static_cast<size_t>(max_onetypes);
    o.max_degree = max_degree;
    o.jobs = jobs;
    return o;
  }
  void echo(Report& r) const {
    if (seed_given) r.add("seed", std::to_string(seed));
  }
};

struct ParsedFormula {
  FormulaPtr formula;
  Signature sig;
  std::string path;
};

ParsedFormula load_formula(const std::string& path, NavKind kind) {
  ParsedFormula p;
  p.path = path;
  ParseResult res = parse_formula(read_file(path));
  p.formula = res.formula;
  p.sig = res.sig;
  if (kind == NavKind::Word && has_nav_of_kind(p.formula, NavKind::Tree))
    throw std::runtime_error("formula in '" + path +
                             "' uses tree navigation but the run is over words");
  if (kind == NavKind::Tree && has_nav_of_kind(p.formula, NavKind::Word))
    throw std::runtime_error("formula in '" + path +
                             "' uses word navigation but the run is over trees");
  p.sig.nav = kind;
  auto errs = well_formed_check(p.formula, p.sig);
  if (!errs.empty())
    throw std::runtime_error("formula in '" + path + "': " + errs.front());
  FreeVars fv = free_vars(p.formula);
  if (!fv.empty())
    throw std::runtime_error("formula in '" + path + "' is not a sentence");
  return p;
}

NavKind parse_kind(const std::string& kind) {
  if (kind == "word") return NavKind::Word;
  if (kind == "tree") return NavKind::Tree;
  throw std::runtime_error("unknown kind '" + kind + "' (expected word or tree)");
}

int cmd_solve(std::ostream& out, const Common& c, const std::string& kind_text,
              const std::string& formula_path, std::string witness_path) {
  NavKind kind = parse_kind(kind_text);
  ParsedFormula p = load_formula(formula_path, kind);
  NormalFormFormula nf = normalize(p.formula, p.sig);
  SolveResult res = kind == NavKind::Word ? solve_word(nf, c.solve_options())
                                          : solve_tree(nf, c.solve_options());

  if (witness_path.empty()) witness_path = formula_path + ".model";
  Report r;
  r.add("command", "solve");
  r.add("kind", kind_text);
  r.add("formula", formula_path);
  c.echo(r);
  r.add("verdict", verdict_name(res.verdict));
  r.add("states-explored", std::to_string(res.explored));
  if (res.verdict == Verdict::Sat) {
    bool verified = false;
    std::string text;
    if (kind == NavKind::Word) {
      WordModel w = restrict_word_model(*res.word, nf);
      verified = check_sentence(w, p.sig, p.formula);
      text = word_to_text(w, p.sig);
    } else {
      TreeModel t = restrict_tree_model(*res.tree, nf);
      verified = check_sentence(t, p.sig, p.formula);
      text = tree_to_text(t, p.sig);
    }
    write_file(witness_path, text);
    r.add("witness", witness_path);
    r.add("witness-verified", verified ? "true" : "false");
  }
  if (res.verdict == Verdict::Inconclusive && !res.note.empty())
    r.add("note", res.note);
  if (c.timings) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(3);
    ss << res.elapsed_seconds;
    r.add("elapsed-seconds", ss.str());
  }
  r.print(out);
  switch (res.verdict) {
    case Verdict::Sat:
      return 0;
    case Verdict::Unsat:
      return 1;
    case Verdict::Inconclusive:
      return 2;
  }
  return 3;
}

int cmd_check(std::ostream& out, const Common& c, const std::string& kind_text,
              const std::string& formula_path, const std::string& model_path) {
  NavKind kind = parse_kind(kind_text);
  ParsedFormula p = load_formula(formula_path, kind);
  bool holds;
  if (kind == NavKind::Word) {
    WordModel m = word_from_text(read_file(model_path), p.sig);
    holds = check_sentence(m, p.sig, p.formula);
  } else {
    TreeModel m = tree_from_text(read_file(model_path), p.sig);
    holds = check_sentence(m, p.sig, p.formula);
  }
  Report r;
  r.add("command", "check");
  r.add("kind", kind_text);
  r.add("formula", formula_path);
  r.add("model", model_path);
  c.echo(r);
  r.add("result", holds ? "true" : "false");
  r.print(out);
  return holds ? 0 : 1;
}

int cmd_normalize(std::ostream& out, const Common& c,
                  const std::string& formula_path, const std::string& out_path) {
  ParseResult parsed = parse_formula(read_file(formula_path));
  auto errs = well_formed_check(parsed.formula, parsed.sig);
  if (!errs.empty())
    throw std::runtime_error("formula in '" + formula_path + "': " + errs.front());
  NormalFormFormula nf = normalize(parsed.formula, parsed.sig);
  std::string text = render_formula(nf.to_formula());
  Report r;
  r.add("command", "normalize");
  r.add("formula", formula_path);
  c.echo(r);
  r.add("forall-exists-conjuncts", std::to_string(nf.chi_list.size()));
  r.add("counting-conjuncts", std::to_string(nf.mod_list.size()));
  r.add("fresh-predicates", std::to_string(nf.fresh.size()));
  if (!out_path.empty()) {
    write_file(out_path, text + "\n");
    r.add("out", out_path);
  } else {
    r.add("normal-form", text);
  }
  r.print(out);
  return 0;
}

int cmd_oracle(std::ostream& out, const Common& c, const std::string& kind_text,
               const std::string& formula_path, uint64_t max_size,
               uint64_t work_cap, std::string witness_path) {
  NavKind kind = parse_kind(kind_text);
  ParsedFormula p = load_formula(formula_path, kind);
  Report r;
  r.add("command", "oracle");
  r.add("kind", kind_text);
  r.add("formula", formula_path);
  r.add("max-size", std::to_string(max_size));
  c.echo(r);
  try {
    OracleVerdict v = oracle_sat(p.formula, p.sig, kind,
                                 static_cast<size_t>(max_size), c.jobs, work_cap);
    if (v.sat) {
      if (witness_path.empty()) witness_path = formula_path + ".model";
      std::string text = kind == NavKind::Word ? word_to_text(*v.word, p.sig)
                                               : tree_to_text(*v.tree, p.sig);
      write_file(witness_path, text);
      r.add("verdict", "SAT");
      r.add("witness", witness_path);
      r.print(out);
      return 0;
    }
    r.add("verdict", "NO-MODEL-UP-TO-BOUND");
    r.add("bound", std::to_string(v.bound));
    r.print(out);
    return 1;
  } catch (const ResourceError& e) {
    r.add("verdict", "INCONCLUSIVE");
    r.add("note", e.what());
    r.print(out);
    return 2;
  }
}

int cmd_atm2game(std::ostream& out, const Common& c, const std::string& atm_path,
                 const std::string& input, const std::string& out_path) {
  ATM m = atm_from_text(read_file(atm_path));
  std::vector<std::string> word = split_input(input);
  TilingGame g = atm_to_game(m, word);
  write_file(out_path, game_to_text(g));
  Report r;
  r.add("command", "reduce-atm2game");
  r.add("atm", atm_path);
  r.add("input", join(word, ","));
  c.echo(r);
  r.add("out", out_path);
  r.add("colors", std::to_string(g.colors.size()));
  r.add("width", std::to_string(g.width()));
  r.add("tiles-t0", std::to_string(g.t0.size()));
  r.add("tiles-t1", std::to_string(g.t1.size()));
  r.add("tiles-last", std::to_string(g.last.size()));
  r.print(out);
  return 0;
}

int cmd_game2formula(std::ostream& out, const Common& c,
                     const std::string& game_path, const std::string& out_path) {
  TilingGame g = game_from_text(read_file(game_path));
  GameVocab v = game_vocab(g);
  FormulaPtr f = game_to_formula(g);
  write_file(out_path, render_formula(f) + "\n");
  Report r;
  r.add("command", "reduce-game2formula");
  r.add("game", game_path);
  c.echo(r);
  r.add("out", out_path);
  r.add("predicates", std::to_string(v.sig.preds.size()));
  r.add("tiles", std::to_string(v.tiles.size()));
  r.print(out);
  return 0;
}

int cmd_game_winner(std::ostream& out, const Common& c,
                    const std::string& game_path, unsigned depth,
                    const std::string& strategy_path) {
  TilingGame g = game_from_text(read_file(game_path));
  WinnerResult res = game_winner(g, depth);
  Report r;
  r.add("command", "game-winner");
  r.add("game", game_path);
  r.add("depth", std::to_string(depth));
  c.echo(r);
  r.add("winner", winner_name(res.winner));
  r.add("states-explored", std::to_string(res.explored));
  if (res.winner == GameWinner::Prover && !strategy_path.empty() &&
      res.strategy) {
    write_file(strategy_path, strategy_to_text(*res.strategy));
    r.add("strategy", strategy_path);
  }
  r.print(out);
  switch (res.winner) {
    case GameWinner::Prover:
      return 0;
    case GameWinner::Spoiler:
      return 1;
    case GameWinner::Unknown:
      return 2;
  }
  return 3;
}

int cmd_game_wellformed(std::ostream& out, const Common& c,
                        const std::string& game_path, unsigned depth) {
  TilingGame g = game_from_text(read_file(game_path));
  WellFormedResult res = check_well_formed(g, depth);
  Report r;
  r.add("command", "game-wellformed");
  r.add("game", game_path);
  r.add("depth", std::to_string(depth));
  c.echo(r);
  r.add("well-formed", res.ok ? "true" : "false");
  r.add("states-explored", std::to_string(res.explored));
  if (!res.ok) {
    r.add("frontier", row_text(res.frontier));
    r.add("set", res.set == 0 ? "T0" : "T1");
    r.add("extensions", res.extensions == 0 ? "0" : ">=2");
  }
  r.print(out);
  return res.ok ? 0 : 1;
}

int cmd_encode_strategy(std::ostream& out, const Common& c,
                        const std::string& game_path,
                        const std::string& strategy_path,
                        const std::string& out_path) {
  TilingGame g = game_from_text(read_file(game_path));
  StrategyTree s = strategy_from_text(read_file(strategy_path));
  GameVocab v = game_vocab(g);
  TreeModel t = strategy_to_tree(g, s);
  write_file(out_path, tree_to_text(t, v.sig));
  Report r;
  r.add("command", "encode-strategy");
  r.add("game", game_path);
  r.add("strategy", strategy_path);
  c.echo(r);
  r.add("out", out_path);
  r.add("nodes", std::to_string(t.nodes.size()));
  r.add("predicates", std::to_string(v.sig.preds.size()));
  r.print(out);
  return 0;
}

int cmd_shrink(std::ostream& out, const Common& c, const std::string& kind_text,
               const std::string& formula_path, const std::string& model_path,
               const std::string& out_path) {
  NavKind kind = parse_kind(kind_text);
  ParsedFormula p = load_formula(formula_path, kind);
  NormalFormFormula nf = normalize(p.formula, p.sig);
  Report r;
  r.add("command", "shrink");
  r.add("kind", kind_text);
  r.add("formula", formula_path);
  r.add("model", model_path);
  c.echo(r);
  size_t before, after;
  std::string text;
  if (kind == NavKind::Word) {
    WordModel m = word_from_text(read_file(model_path), p.sig);
    if (!check_sentence(m, p.sig, p.formula))
      throw std::runtime_error("input model does not satisfy the formula");
    WordModel small = restrict_word_model(shrink_word(expand_word_model(m, nf), nf), nf);
    before = m.positions.size();
    after = small.positions.size();
    text = word_to_text(small, p.sig);
  } else {
    TreeModel m = tree_from_text(read_file(model_path), p.sig);
    if (!check_sentence(m, p.sig, p.formula))
      throw std::runtime_error("input model does not satisfy the formula");
    TreeModel small = restrict_tree_model(shrink_tree(expand_tree_model(m, nf), nf), nf);
    before = m.nodes.size();
    after = small.nodes.size();
    text = tree_to_text(small, p.sig);
  }
  write_file(out_path, text);
  r.add("out", out_path);
  r.add("input-size", std::to_string(before));
  r.add("output-size", std::to_string(after));
  r.print(out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Satisfiability tools for two-variable logic with modulo "
               "counting over words and trees"};
  app.require_subcommand(1);

  Common c;
  app.add_option("--max-states", c.max_states,
                 "solver state budget before giving up")
      ->envname("FOMODSAT_MAX_STATES");
  app.add_option("--max-onetypes", c.max_onetypes,
                 "cap on distinct atomic 1-types the solvers track");
  app.add_option("--max-degree", c.max_degree,
                 "tree solver sibling-sequence length cap");
  app.add_option("--jobs", c.jobs, "worker threads for the oracle");
  app.add_option_function<long long>(
      "--seed",
      [&c](long long v) {
        c.seed = v;
        c.seed_given = true;
      },
      "echoed in reports; runs are deterministic");
  app.add_flag("--timings", c.timings, "include elapsed time in reports");

  int code = 0;

  std::string kind = "word", formula_path, model_path, witness_path, out_path;
  std::string atm_path, input_text, game_path, strategy_path;
  uint64_t max_size = 4;
  uint64_t work_cap = 200'000'000;
  unsigned depth = 8;

  CLI::App* solve = app.add_subcommand("solve", "decide satisfiability");
  solve->fallthrough();
  solve->add_option("--kind", kind, "word or tree")->required();
  solve->add_option("--formula", formula_path, "formula file")->required();
  solve->add_option("--witness", witness_path,
                    "witness path (default: <formula>.model)");
  solve->callback(
      [&] { code = cmd_solve(out, c, kind, formula_path, witness_path); });

  CLI::App* check = app.add_subcommand("check", "evaluate a sentence on a model");
  check->fallthrough();
  check->add_option("--kind", kind, "word or tree")->required();
  check->add_option("--formula", formula_path, "formula file")->required();
  check->add_option("--model", model_path, "model file")->required();
  check->callback(
      [&] { code = cmd_check(out, c, kind, formula_path, model_path); });

  CLI::App* normalize_cmd =
      app.add_subcommand("normalize", "rewrite into solver normal shape");
  normalize_cmd->fallthrough();
  normalize_cmd->add_option("--formula", formula_path, "formula file")->required();
  normalize_cmd->add_option("--out", out_path, "write the normal form here");
  normalize_cmd->callback(
      [&] { code = cmd_normalize(out, c, formula_path, out_path); });

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "brute-force bounded satisfiability");
  oracle_cmd->fallthrough();
  oracle_cmd->add_option("--kind", kind, "word or tree")->required();
  oracle_cmd->add_option("--formula", formula_path, "formula file")->required();
  oracle_cmd->add_option("--max-size", max_size, "largest model size to try")
      ->required();
  oracle_cmd->add_option("--work-cap", work_cap,
                         "abort when the enumeration exceeds this many models");
  oracle_cmd->add_option("--witness", witness_path,
                         "witness path (default: <formula>.model)");
  oracle_cmd->callback([&] {
    code = cmd_oracle(out, c, kind, formula_path, max_size, work_cap, witness_path);
  });

  CLI::App* reduce = app.add_subcommand("reduce", "reductions between artifacts");
  reduce->require_subcommand(1);
  reduce->fallthrough();
  CLI::App* atm2game = reduce->add_subcommand(
      "atm2game", "compile a machine run into a corridor tiling game");
  atm2game->fallthrough();
  atm2game->add_option("--atm", atm_path, "machine file")->required();
  atm2game->add_option("--input", input_text,
                       "input word; one letter per character, or comma-separated")
      ->required();
  atm2game->add_option("--out", out_path, "game file to write")->required();
  atm2game->callback(
      [&] { code = cmd_atm2game(out, c, atm_path, input_text, out_path); });
  CLI::App* game2formula = reduce->add_subcommand(
      "game2formula", "axiomatize a game's strategy trees as a sentence");
  game2formula->fallthrough();
  game2formula->add_option("--game", game_path, "game file")->required();
  game2formula->add_option("--out", out_path, "formula file to write")->required();
  game2formula->callback(
      [&] { code = cmd_game2formula(out, c, game_path, out_path); });

  CLI::App* game = app.add_subcommand("game", "corridor tiling games");
  game->require_subcommand(1);
  game->fallthrough();
  CLI::App* winner = game->add_subcommand("winner", "decide the winner");
  winner->fallthrough();
  winner->add_option("--game", game_path, "game file")->required();
  winner->add_option("--depth", depth, "row budget for the search")->required();
  winner->add_option("--strategy", strategy_path,
                     "write Prover's winning strategy here");
  winner->callback(
      [&] { code = cmd_game_winner(out, c, game_path, depth, strategy_path); });
  CLI::App* wellformed = game->add_subcommand(
      "wellformed", "check each choice admits exactly one next row");
  wellformed->fallthrough();
  wellformed->add_option("--game", game_path, "game file")->required();
  wellformed->add_option("--depth", depth, "row budget for the search")->required();
  wellformed->callback(
      [&] { code = cmd_game_wellformed(out, c, game_path, depth); });

  CLI::App* encode = app.add_subcommand("encode", "encode artifacts as models");
  encode->require_subcommand(1);
  encode->fallthrough();
  CLI::App* enc_strategy = encode->add_subcommand(
      "strategy", "turn a winning strategy into a labeled tree model");
  enc_strategy->fallthrough();
  enc_strategy->add_option("--game", game_path, "game file")->required();
  enc_strategy->add_option("--strategy", strategy_path, "strategy file")->required();
  enc_strategy->add_option("--out", out_path, "tree model file to write")->required();
  enc_strategy->callback([&] {
    code = cmd_encode_strategy(out, c, game_path, strategy_path, out_path);
  });

  CLI::App* shrink = app.add_subcommand("shrink", "pump a model down in place");
  shrink->fallthrough();
  shrink->add_option("--kind", kind, "word or tree")->required();
  shrink->add_option("--formula", formula_path, "formula file")->required();
  shrink->add_option("--model", model_path, "model file")->required();
  shrink->add_option("--out", out_path, "shrunk model file to write")->required();
  shrink->callback([&] {
    code = cmd_shrink(out, c, kind, formula_path, model_path, out_path);
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 3;
  } catch (const ParseError& e) {
    err << "error: parse failed at line " << e.line << ", column " << e.col
        << ": " << e.what() << "\n";
    return 3;
  } catch (const ModelReadError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return code;
}

}  // namespace fomod
