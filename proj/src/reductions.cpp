#include "fomod/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace fomod {

namespace {

constexpr Var X = Var::X;
constexpr Var Y = Var::Y;

std::string pair_color(const std::string& state, const std::string& symbol) {
  return state + "." + symbol;
}

bool contains_tile(const std::vector<Tile>& set, const Tile& t) {
  return std::find(set.begin(), set.end(), t) != set.end();
}

std::string sanitize_color(const std::string& color) {
  std::string out;
  for (char ch : color) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')
      out += ch;
    else if (ch == '#')
      out += 'W';
    else
      out += '_';
  }
  if (out.empty()) out = "c";
  return out;
}

}  // namespace

TilingGame atm_to_game(const ATM& m, const std::vector<std::string>& w) {
  auto errs = validate_atm(m);
  if (!errs.empty())
    throw std::invalid_argument("invalid machine: " + errs.front());
  if (w.empty()) throw std::invalid_argument("input word must be non-empty");
  for (const auto& letter : w)
    if (std::find(m.input.begin(), m.input.end(), letter) == m.input.end())
      throw std::invalid_argument("input letter '" + letter +
                                  "' is not in the machine's input alphabet");
  if (w.size() > 16)
    throw ResourceError("corridor width 2^n only supports inputs up to length 16");

  TilingGame g;
  g.n = static_cast<unsigned>(w.size());
  g.white = "#";
  for (const auto& a : m.tape) g.colors.push_back(a);
  for (const auto& q : m.states)
    for (const auto& a : m.tape) g.colors.push_back(pair_color(q, a));
  g.colors.push_back(g.white);

  // A corridor cell shows a plain tape symbol, a head/symbol pair, or white;
  // white stands for a cell the machine has never written (i.e. blank).
  std::vector<std::string> plain = m.tape;
  plain.push_back(g.white);
  auto sub = [&](const std::string& c) { return c == g.white ? m.blank : c; };

  const size_t n = w.size();
  g.initial.push_back(Tile{g.white, g.white, g.white, pair_color(m.initial, w[0])});
  for (size_t i = 1; i < n; ++i)
    g.initial.push_back(
        Tile{g.white, g.white, i == 1 ? pair_color(m.initial, w[0]) : w[i - 1], w[i]});
  g.initial.push_back(
      Tile{g.white, g.white, n == 1 ? pair_color(m.initial, w[0]) : w[n - 1], g.white});

  std::set<Tile> t0, t1, last;
  auto add_both = [&](const Tile& t) {
    t0.insert(t);
    t1.insert(t);
  };

  // Cells away from the head are copied unchanged from row to row.
  for (const auto& a : plain)
    for (const auto& b : plain) add_both(Tile{a, b, a, b});

  // A row may close with an all-white lower edge once the machine has halted.
  // Closures over plain cells are shared; only accepting halts belong to L.
  for (const auto& u : plain)
    for (const auto& v : plain) {
      Tile t{u, v, g.white, g.white};
      add_both(t);
      last.insert(t);
    }
  auto add_halting = [&](const std::string& qf, bool accepting) {
    for (const auto& a : m.tape)
      for (const auto& v : plain) {
        Tile left{pair_color(qf, a), v, g.white, g.white};
        Tile right{v, pair_color(qf, a), g.white, g.white};
        add_both(left);
        add_both(right);
        if (accepting) {
          last.insert(left);
          last.insert(right);
        }
      }
  };
  add_halting(m.accept, true);
  add_halting(m.reject, false);

  // Each non-final (state, symbol) has exactly two outgoing transitions; the
  // first one listed drives T0, the second drives T1.
  std::map<std::pair<std::string, std::string>, int> rank;
  for (const auto& tr : m.trans) {
    int which = rank[{tr.from, tr.read}]++;
    std::set<Tile>& dest = which == 0 ? t0 : t1;
    const std::string head = pair_color(tr.from, tr.read);
    switch (tr.move) {
      case Move::L:
        for (const auto& y : plain) {
          const std::string grab = pair_color(tr.to, sub(y));
          for (const auto& x : plain) dest.insert(Tile{x, y, x, grab});
          dest.insert(Tile{y, head, grab, tr.write});
        }
        for (const auto& z : plain) dest.insert(Tile{head, z, tr.write, z});
        break;
      case Move::R:
        for (const auto& x : plain) dest.insert(Tile{x, head, x, tr.write});
        for (const auto& y : plain) {
          const std::string grab = pair_color(tr.to, sub(y));
          dest.insert(Tile{head, y, tr.write, grab});
          for (const auto& z : plain) dest.insert(Tile{y, z, grab, z});
        }
        break;
      case Move::N: {
        const std::string stay = pair_color(tr.to, tr.write);
        for (const auto& x : plain) dest.insert(Tile{x, head, x, stay});
        for (const auto& y : plain) dest.insert(Tile{head, y, stay, y});
        break;
      }
    }
  }

  g.t0.assign(t0.begin(), t0.end());
  g.t1.assign(t1.begin(), t1.end());
  g.last.assign(last.begin(), last.end());

  errs = validate_game(g);
  if (!errs.empty())
    throw std::logic_error("generated game failed validation: " + errs.front());
  return g;
}

size_t GameVocab::tile_index(const Tile& t) const {
  for (size_t i = 0; i < tiles.size(); ++i)
    if (tiles[i] == t) return i;
  throw std::invalid_argument("tile " + tile_text(t) + " is not part of the game");
}

size_t GameVocab::color_index(const std::string& c) const {
  for (size_t i = 0; i < colors.size(); ++i)
    if (colors[i] == c) return i;
  throw std::invalid_argument("color '" + c + "' is not part of the game");
}

GameVocab game_vocab(const TilingGame& g) {
  auto errs = validate_game(g);
  if (!errs.empty())
    throw std::invalid_argument("invalid game: " + errs.front());

  GameVocab v;
  v.n = g.n;
  v.colors = g.colors;
  auto add_tile = [&](const Tile& t) {
    if (!contains_tile(v.tiles, t)) v.tiles.push_back(t);
  };
  for (const auto& t : g.initial) add_tile(t);
  add_tile(Tile{g.white, g.white, g.white, g.white});
  for (const auto& t : g.t0) add_tile(t);
  for (const auto& t : g.t1) add_tile(t);

  Signature sig;
  sig.nav = NavKind::Tree;
  v.bits = sig.preds.size();
  for (unsigned i = 0; i < g.n; ++i) sig.preds.push_back("B" + std::to_string(i));
  v.tile0 = sig.preds.size();
  for (size_t i = 0; i < v.tiles.size(); ++i)
    sig.preds.push_back("tile" + std::to_string(i));

  v.color0 = sig.preds.size();
  std::set<std::string> used(sig.preds.begin(), sig.preds.end());
  for (size_t c = 0; c < g.colors.size(); ++c) {
    const std::string base = sanitize_color(g.colors[c]);
    auto taken = [&](const std::string& s) {
      for (int corner = 1; corner <= 4; ++corner)
        if (used.count("pi" + std::to_string(corner) + "_" + s)) return true;
      return false;
    };
    std::string name = base;
    for (unsigned bump = 0; taken(name); ++bump) {
      name = base + "_" + std::to_string(c);
      if (bump > 0) name += "_" + std::to_string(bump);
    }
    for (int corner = 1; corner <= 4; ++corner) {
      std::string p = "pi" + std::to_string(corner) + "_" + name;
      used.insert(p);
      sig.preds.push_back(p);
    }
  }

  auto flag = [&](size_t& slot, const char* name) {
    slot = sig.preds.size();
    sig.preds.push_back(name);
  };
  flag(v.first, "First");
  flag(v.last, "Last");
  flag(v.row_e, "rowE");
  flag(v.row_a, "rowA");
  flag(v.move_0, "move0");
  flag(v.move_1, "move1");
  flag(v.set_t0, "setT0");
  flag(v.set_t1, "setT1");
  flag(v.set_l, "setL");

  if (sig.preds.size() > kMaxPreds)
    throw ResourceError("the game needs " + std::to_string(sig.preds.size()) +
                        " unary predicates, more than the supported maximum of " +
                        std::to_string(kMaxPreds));
  v.sig = std::move(sig);
  return v;
}

namespace {

// Shared scaffolding for building the corridor axioms over a fixed vocabulary.
struct AxiomBuilder {
  const TilingGame& g;
  const GameVocab& v;
  uint64_t wmax;  // highest column number, 2^n - 1

  FormulaPtr truef() const { return equality(X, X); }
  FormulaPtr falsef() const { return lnot(equality(X, X)); }
  FormulaPtr dis(std::vector<FormulaPtr> fs) const {
    return fs.empty() ? falsef() : disj(std::move(fs));
  }
  FormulaPtr con(std::vector<FormulaPtr> fs) const {
    return fs.empty() ? truef() : conj(std::move(fs));
  }
  FormulaPtr pred(size_t idx, Var var) const { return unary_atom(v.sig.preds[idx], var); }
  FormulaPtr bit(unsigned i, Var var) const { return pred(v.bits + i, var); }
  FormulaPtr tile(size_t i, Var var) const { return pred(v.tile0 + i, var); }
  FormulaPtr pi(int corner, size_t color, Var var) const {
    return pred(v.pi(corner, color), var);
  }
  FormulaPtr pi_white(int corner, Var var) const {
    return pi(corner, v.color_index(g.white), var);
  }

  // Column-number arithmetic over the B bits (bit 0 least significant).
  FormulaPtr nr_eq_const(Var var, uint64_t c) const {
    std::vector<FormulaPtr> fs;
    for (unsigned i = 0; i < v.n; ++i)
      fs.push_back(c >> i & 1 ? bit(i, var) : lnot(bit(i, var)));
    return con(std::move(fs));
  }
  FormulaPtr nr_equal(Var a, Var b) const {
    std::vector<FormulaPtr> fs;
    for (unsigned i = 0; i < v.n; ++i) fs.push_back(iff(bit(i, a), bit(i, b)));
    return con(std::move(fs));
  }
  // number(b) == number(a) + 1 without wrap-around: some bit flips 0 -> 1
  // while everything below it flips 1 -> 0 and everything above is unchanged.
  FormulaPtr nr_succ(Var a, Var b) const {
    std::vector<FormulaPtr> cases;
    for (unsigned i = 0; i < v.n; ++i) {
      std::vector<FormulaPtr> fs;
      fs.push_back(lnot(bit(i, a)));
      fs.push_back(bit(i, b));
      for (unsigned j = 0; j < i; ++j) {
        fs.push_back(bit(j, a));
        fs.push_back(lnot(bit(j, b)));
      }
      for (unsigned j = i + 1; j < v.n; ++j) fs.push_back(iff(bit(j, a), bit(j, b)));
      cases.push_back(con(std::move(fs)));
    }
    return dis(std::move(cases));
  }
  // number(var) > c: some bit of var is 1 where c has 0, with equality above.
  FormulaPtr nr_gt_const(Var var, uint64_t c) const {
    std::vector<FormulaPtr> cases;
    for (unsigned i = 0; i < v.n; ++i) {
      if (c >> i & 1) continue;
      std::vector<FormulaPtr> fs;
      fs.push_back(bit(i, var));
      for (unsigned j = i + 1; j < v.n; ++j)
        fs.push_back(c >> j & 1 ? bit(j, var) : lnot(bit(j, var)));
      cases.push_back(con(std::move(fs)));
    }
    return dis(std::move(cases));
  }

  FormulaPtr parent(Var p, Var c) const { return nav_atom(NavSym::Child, p, c); }
  FormulaPtr ancestor(Var a, Var d) const { return nav_atom(NavSym::Desc, a, d); }

  // Column numbers tick up by one along the trunk and wrap after the last
  // column; every trunk node except the very first has a parent.
  FormulaPtr numbering() const {
    std::vector<FormulaPtr> fs;
    fs.push_back(forall(X, implies(lnot(exists(Y, parent(Y, X))), nr_eq_const(X, 0))));
    fs.push_back(forall(
        X, implies(lnot(nr_eq_const(X, wmax)),
                   land(exists(Y, parent(X, Y)),
                        forall(Y, implies(parent(X, Y), nr_succ(X, Y)))))));
    fs.push_back(forall(X, implies(nr_eq_const(X, wmax),
                                   forall(Y, implies(parent(X, Y), nr_eq_const(Y, 0))))));
    return conj({fs[0], fs[1], fs[2]});
  }

  // Every node carries exactly one tile and exactly one color per corner, the
  // tile fixes its four corner colors, and the set flags match membership.
  FormulaPtr tiles_and_colors() const {
    std::vector<FormulaPtr> fs;
    const size_t ntiles = v.tiles.size();
    {
      std::vector<FormulaPtr> alts;
      for (size_t i = 0; i < ntiles; ++i) {
        std::vector<FormulaPtr> one;
        one.push_back(tile(i, X));
        for (size_t j = 0; j < ntiles; ++j)
          if (j != i) one.push_back(lnot(tile(j, X)));
        alts.push_back(con(std::move(one)));
      }
      fs.push_back(forall(X, dis(std::move(alts))));
    }
    {
      std::vector<FormulaPtr> per_corner;
      for (int corner = 1; corner <= 4; ++corner) {
        std::vector<FormulaPtr> alts;
        for (size_t c = 0; c < v.colors.size(); ++c) {
          std::vector<FormulaPtr> one;
          one.push_back(pi(corner, c, X));
          for (size_t d = 0; d < v.colors.size(); ++d)
            if (d != c) one.push_back(lnot(pi(corner, d, X)));
          alts.push_back(con(std::move(one)));
        }
        per_corner.push_back(dis(std::move(alts)));
      }
      fs.push_back(forall(X, con(std::move(per_corner))));
    }
    for (size_t i = 0; i < ntiles; ++i) {
      std::vector<FormulaPtr> corners;
      for (int corner = 1; corner <= 4; ++corner)
        corners.push_back(pi(corner, v.color_index(v.tiles[i][corner - 1]), X));
      fs.push_back(forall(X, iff(tile(i, X), con(std::move(corners)))));
    }
    auto member = [&](const std::vector<Tile>& set, size_t set_pred) {
      std::vector<FormulaPtr> alts;
      for (size_t i = 0; i < v.tiles.size(); ++i)
        if (contains_tile(set, v.tiles[i])) alts.push_back(tile(i, X));
      return forall(X, iff(dis(std::move(alts)), pred(set_pred, X)));
    };
    fs.push_back(member(g.t0, v.set_t0));
    fs.push_back(member(g.t1, v.set_t1));
    fs.push_back(member(g.last, v.set_l));
    return conj(std::move(fs));
  }

  // First marks the initial row (no strict ancestor in the same column), Last
  // the closing rows; the first row shows the start tiles padded with white.
  FormulaPtr first_and_last() const {
    std::vector<FormulaPtr> fs;
    fs.push_back(forall(
        X, iff(pred(v.first, X),
               lnot(exists(Y, land(ancestor(Y, X), nr_equal(Y, X)))))));
    fs.push_back(forall(
        X, iff(pred(v.last, X),
               lnot(exists(Y, land(ancestor(X, Y), nr_equal(Y, X)))))));
    for (size_t i = 0; i < g.initial.size(); ++i)
      fs.push_back(forall(
          X, implies(land(pred(v.first, X), nr_eq_const(X, i)),
                     tile(v.tile_index(g.initial[i]), X))));
    const Tile blank{g.white, g.white, g.white, g.white};
    fs.push_back(forall(X, implies(land(pred(v.first, X), nr_gt_const(X, g.n)),
                                   tile(v.tile_index(blank), X))));
    fs.push_back(
        forall(X, implies(pred(v.first, X), land(pi_white(1, X), pi_white(2, X)))));
    fs.push_back(forall(
        X, implies(pred(v.last, X),
                   conj({pi_white(3, X), pi_white(4, X), pred(v.set_l, X)}))));
    return conj(std::move(fs));
  }

  // Row side alternates between rounds: rowE within a row is constant, the
  // first row is E, and each new row flips the side of the one above it.
  FormulaPtr rows() const {
    std::vector<FormulaPtr> fs;
    fs.push_back(forall(X, iff(pred(v.row_e, X), lnot(pred(v.row_a, X)))));
    fs.push_back(forall(
        X, implies(lnot(nr_eq_const(X, 0)),
                   exists(Y, land(parent(Y, X),
                                  iff(pred(v.row_e, Y), pred(v.row_e, X)))))));
    fs.push_back(forall(X, implies(pred(v.first, X), pred(v.row_e, X))));
    fs.push_back(forall(
        X, implies(land(nr_eq_const(X, 0), lnot(pred(v.first, X))),
                   exists(Y, land(parent(Y, X),
                                  iff(pred(v.row_e, Y), pred(v.row_a, X)))))));
    return conj(std::move(fs));
  }

  // Every non-initial row commits to one tile set; a finished A row that does
  // not close must branch into both possible replies.
  FormulaPtr universal_branching() const {
    std::vector<FormulaPtr> fs;
    fs.push_back(forall(X, implies(lnot(pred(v.first, X)),
                                   iff(pred(v.move_0, X), lnot(pred(v.move_1, X))))));
    fs.push_back(forall(
        X, implies(lnot(nr_eq_const(X, 0)),
                   exists(Y, land(parent(Y, X),
                                  iff(pred(v.move_0, Y), pred(v.move_0, X)))))));
    fs.push_back(forall(X, implies(pred(v.move_0, X), pred(v.set_t0, X))));
    fs.push_back(forall(X, implies(pred(v.move_1, X), pred(v.set_t1, X))));
    fs.push_back(forall(
        X, implies(conj({nr_eq_const(X, wmax), lnot(pred(v.last, X)),
                         pred(v.row_a, X)}),
                   land(exists(Y, land(parent(X, Y), pred(v.move_0, Y))),
                        exists(Y, land(parent(X, Y), pred(v.move_1, Y)))))));
    return conj(std::move(fs));
  }

  // Within a row, each tile's right edge matches the left edge of the tile in
  // the next column (which sits one level deeper on the trunk).
  FormulaPtr horizontal() const {
    std::vector<FormulaPtr> fs;
    fs.push_back(forall(
        X, implies(nr_eq_const(X, 0), land(pi_white(1, X), pi_white(3, X)))));
    fs.push_back(forall(
        X, implies(nr_eq_const(X, wmax), land(pi_white(2, X), pi_white(4, X)))));
    for (size_t c = 0; c < v.colors.size(); ++c) {
      fs.push_back(forall(
          X, implies(land(lnot(nr_eq_const(X, 0)), pi(1, c, X)),
                     exists(Y, land(parent(Y, X), pi(2, c, Y))))));
      fs.push_back(forall(
          X, implies(land(lnot(nr_eq_const(X, 0)), pi(3, c, X)),
                     exists(Y, land(parent(Y, X), pi(4, c, Y))))));
    }
    return conj(std::move(fs));
  }

  // Between consecutive rows of the same column the lower edge of one tile is
  // the upper edge of the next.  Along a branch, the color of a fixed column
  // slot changes an even number of times between matching interfaces, so the
  // count of ancestors where the upper corner differs from the lower corner
  // has the same parity as [first interface = c] + [current interface = c].
  FormulaPtr vertical() const {
    std::vector<FormulaPtr> fs;
    const size_t white = v.color_index(g.white);
    auto parity = [&](int upper, int lower, size_t c, int residue) {
      FormulaPtr flips =
          conj({ancestor(Y, X), nr_equal(Y, X),
                lnot(iff(pi(upper, c, Y), pi(lower, c, Y)))});
      return forall(X, implies(pi(upper, c, X),
                               mod_exists(Cmp::Eq, residue, 2, Y, std::move(flips))));
    };
    fs.push_back(parity(1, 3, white, 0));
    fs.push_back(parity(2, 4, white, 0));
    for (size_t c = 0; c < v.colors.size(); ++c) {
      if (c == white) continue;
      fs.push_back(parity(1, 3, c, 1));
      fs.push_back(parity(2, 4, c, 1));
    }
    return conj(std::move(fs));
  }

  // A tile whose whole lower edge is white ends its play, so it must belong
  // to the winning set L.
  FormulaPtr closing() const {
    return forall(X, implies(land(pi_white(3, X), pi_white(4, X)),
                             pred(v.set_l, X)));
  }
};

}  // namespace

GameFormulaParts game_formula_parts(const TilingGame& g) {
  GameVocab v = game_vocab(g);
  AxiomBuilder b{g, v, (uint64_t{1} << g.n) - 1};
  GameFormulaParts parts;
  parts.numbering = b.numbering();
  parts.tiles = b.tiles_and_colors();
  parts.first_last = b.first_and_last();
  parts.rows = b.rows();
  parts.universal = b.universal_branching();
  parts.horizontal = b.horizontal();
  parts.vertical = b.vertical();
  parts.closing = b.closing();
  return parts;
}

FormulaPtr game_to_formula(const TilingGame& g) {
  return conj(game_formula_parts(g).all());
}

LabelMask game_node_label(const TilingGame& g, const GameVocab& v, size_t column,
                          const Tile& t, bool first_row, bool last_row, bool row_e,
                          int move) {
  if (column >= g.width())
    throw std::invalid_argument("column index exceeds the corridor width");
  LabelMask mask;
  for (unsigned i = 0; i < v.n; ++i)
    if (column >> i & 1) mask.set(v.bits + i);
  mask.set(v.tile0 + v.tile_index(t));
  for (int corner = 1; corner <= 4; ++corner)
    mask.set(v.pi(corner, v.color_index(t[corner - 1])));
  if (first_row) mask.set(v.first);
  if (last_row) mask.set(v.last);
  mask.set(row_e ? v.row_e : v.row_a);
  if (move == 0) mask.set(v.move_0);
  if (move == 1) mask.set(v.move_1);
  if (contains_tile(g.t0, t)) mask.set(v.set_t0);
  if (contains_tile(g.t1, t)) mask.set(v.set_t1);
  if (contains_tile(g.last, t)) mask.set(v.set_l);
  return mask;
}

TreeModel strategy_to_tree(const TilingGame& g, const StrategyTree& s) {
  auto errs = validate_strategy(g, s);
  if (!errs.empty())
    throw std::invalid_argument("not a valid winning strategy: " + errs.front());
  GameVocab v = game_vocab(g);
  const size_t width = g.width();

  // Breadth-first over the strategy so every row's parent segment is already
  // materialized when its own segment is laid down.
  std::vector<size_t> order;
  std::vector<size_t> depth(s.nodes.size(), 0);
  std::vector<int> parent_row(s.nodes.size(), -1);
  order.push_back(0);
  for (size_t head = 0; head < order.size(); ++head) {
    size_t at = order[head];
    for (size_t child : s.nodes[at].children) {
      depth[child] = depth[at] + 1;
      parent_row[child] = static_cast<int>(at);
      order.push_back(child);
    }
  }

  std::vector<int> parents;
  std::vector<LabelMask> labels;
  std::vector<int> segment_end(s.nodes.size(), -1);
  for (size_t at : order) {
    const StrategyNode& node = s.nodes[at];
    const bool first_row = parent_row[at] < 0;
    const bool last_row = node.children.empty();
    const bool row_e = depth[at] % 2 == 0;
    for (size_t col = 0; col < width; ++col) {
      int up = col == 0 ? (first_row ? -1 : segment_end[parent_row[at]])
                        : static_cast<int>(parents.size()) - 1;
      parents.push_back(up);
      labels.push_back(game_node_label(g, v, col, node.row[col], first_row,
                                       last_row, row_e, node.move));
    }
    segment_end[at] = static_cast<int>(parents.size()) - 1;
  }
  return tree_from_parents(parents, labels);
}

}  // namespace fomod
