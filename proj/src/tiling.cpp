#include "fomod/tiling.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace fomod {

std::string tile_text(const Tile& t) {
  return "(" + t[0] + "," + t[1] + "," + t[2] + "," + t[3] + ")";
}

bool h_adjacent(const Tile& left, const Tile& right) {
  return right[0] == left[1] && right[2] == left[3];
}

bool v_adjacent(const Tile& above, const Tile& below) {
  return below[0] == above[2] && below[1] == above[3];
}

namespace {

bool clean_color(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')')
      return false;
  return true;
}

bool contains_tile(const std::vector<Tile>& set, const Tile& t) {
  return std::find(set.begin(), set.end(), t) != set.end();
}

}  // namespace

std::string row_text(const Row& row) {
  std::string s;
  for (const auto& t : row) s += tile_text(t);
  return s;
}

std::vector<std::string> validate_game(const TilingGame& g) {
  std::vector<std::string> errs;
  auto err = [&](std::string m) { errs.push_back(std::move(m)); };

  if (g.n < 1 || g.n > 16) err("n must be between 1 and 16");
  if (g.colors.empty()) err("the game has no colors");
  for (const auto& c : g.colors)
    if (!clean_color(c)) err("color '" + c + "' contains separator characters");
  for (size_t i = 0; i < g.colors.size(); ++i)
    for (size_t j = i + 1; j < g.colors.size(); ++j)
      if (g.colors[i] == g.colors[j]) err("duplicate color " + g.colors[i]);
  auto known = [&](const std::string& c) {
    return std::find(g.colors.begin(), g.colors.end(), c) != g.colors.end();
  };
  if (!known(g.white)) err("white color " + g.white + " is not a color");

  auto check_tiles = [&](const std::vector<Tile>& ts, const char* where) {
    for (const auto& t : ts)
      for (const auto& c : t)
        if (!known(c)) {
          err("tile " + tile_text(t) + " in " + where + " uses unknown color " + c);
          return;
        }
  };
  check_tiles(g.initial, "the initial row");
  check_tiles(g.t0, "T0");
  check_tiles(g.t1, "T1");
  check_tiles(g.last, "L");
  if (!errs.empty()) return errs;

  if (g.initial.size() != size_t{g.n} + 1)
    err("the initial row needs n+1 = " + std::to_string(g.n + 1) + " tiles, got " +
        std::to_string(g.initial.size()));
  for (const auto& t : g.initial)
    if (t[0] != g.white || t[1] != g.white)
      err("initial tile " + tile_text(t) + " does not have a white upper half");
  for (size_t i = 0; i + 1 < g.initial.size(); ++i)
    if (!h_adjacent(g.initial[i], g.initial[i + 1]))
      err("initial tiles " + tile_text(g.initial[i]) + " and " +
          tile_text(g.initial[i + 1]) + " do not chain");
  if (!g.initial.empty() && g.initial.front()[2] != g.white)
    err("the first initial tile must have a white left half");
  if (!g.initial.empty() && g.initial.back()[3] != g.white)
    err("the last initial tile must end on white to meet the padding");
  for (const auto& t : g.last)
    if (!contains_tile(g.t0, t) && !contains_tile(g.t1, t))
      err("closing tile " + tile_text(t) + " is in neither T0 nor T1");
  return errs;
}

std::string game_to_text(const TilingGame& g) {
  std::ostringstream out;
  out << "colors:";
  for (const auto& c : g.colors) out << " " << c;
  out << "\nwhite: " << g.white << "\nn: " << g.n << "\ninit:";
  for (const auto& t : g.initial) out << " " << tile_text(t);
  auto set_line = [&](const char* key, const std::vector<Tile>& ts) {
    out << "\n" << key << ":";
    for (const auto& t : ts) out << " " << tile_text(t);
  };
  set_line("T0", g.t0);
  set_line("T1", g.t1);
  set_line("L", g.last);
  out << "\n";
  return out.str();
}

namespace {

std::vector<Tile> parse_tiles(const std::string& rest, int line_no) {
  std::vector<Tile> tiles;
  size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("game file line " + std::to_string(line_no) + ": " + msg);
  };
  while (i < rest.size()) {
    if (std::isspace(static_cast<unsigned char>(rest[i]))) {
      ++i;
      continue;
    }
    if (rest[i] != '(') fail("expected '(' to start a tile");
    size_t close = rest.find(')', i);
    if (close == std::string::npos) fail("unterminated tile");
    std::string body = rest.substr(i + 1, close - i - 1);
    Tile t;
    size_t field = 0, pos = 0;
    while (field < 4) {
      size_t comma = body.find(',', pos);
      std::string part = field == 3 ? body.substr(pos)
                                    : body.substr(pos, comma - pos);
      if (field < 3 && comma == std::string::npos) fail("tile needs four colors");
      while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front())))
        part.erase(part.begin());
      while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back())))
        part.pop_back();
      if (part.empty()) fail("tile has an empty color");
      t[field++] = part;
      pos = comma + 1;
    }
    if (std::count(body.begin(), body.end(), ',') != 3) fail("tile needs four colors");
    tiles.push_back(std::move(t));
    i = close + 1;
  }
  return tiles;
}

}  // namespace

TilingGame game_from_text(const std::string& text) {
  TilingGame g;
  g.n = 0;  // so a missing n: line is caught by validation below
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("game file line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream probe(raw);
    std::string key;
    if (!(probe >> key)) continue;
    if (key.back() != ':') fail("expected 'key:' at the start of the line");
    key.pop_back();
    std::string rest = raw.substr(raw.find(':') + 1);
    if (key == "colors") {
      std::istringstream cs(rest);
      for (std::string c; cs >> c;) g.colors.push_back(c);
    } else if (key == "white") {
      std::istringstream ws(rest);
      if (!(ws >> g.white)) fail("'white:' takes one color");
    } else if (key == "n") {
      std::istringstream ns(rest);
      if (!(ns >> g.n)) fail("'n:' takes a number");
    } else if (key == "init") {
      auto ts = parse_tiles(rest, line_no);
      g.initial.insert(g.initial.end(), ts.begin(), ts.end());
    } else if (key == "T0") {
      auto ts = parse_tiles(rest, line_no);
      g.t0.insert(g.t0.end(), ts.begin(), ts.end());
    } else if (key == "T1") {
      auto ts = parse_tiles(rest, line_no);
      g.t1.insert(g.t1.end(), ts.begin(), ts.end());
    } else if (key == "L") {
      auto ts = parse_tiles(rest, line_no);
      g.last.insert(g.last.end(), ts.begin(), ts.end());
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  auto errs = validate_game(g);
  if (!errs.empty()) throw std::invalid_argument("invalid game: " + errs[0]);
  return g;
}

Row initial_row(const TilingGame& g) {
  Row row = g.initial;
  row.resize(g.width(), Tile{g.white, g.white, g.white, g.white});
  return row;
}

bool closes_corridor(const TilingGame& g, const Row& row) {
  for (const auto& t : row)
    if (t[2] != g.white || t[3] != g.white) return false;
  return true;
}

bool row_in_last(const TilingGame& g, const Row& row) {
  for (const auto& t : row)
    if (!contains_tile(g.last, t)) return false;
  return true;
}

std::vector<Row> next_rows(const TilingGame& g, const Row& prev,
                           const std::vector<Tile>& set, size_t limit) {
  std::vector<Tile> candidates;
  for (const auto& t : set)
    if (!contains_tile(candidates, t)) candidates.push_back(t);
  const size_t w = g.width();
  std::vector<Row> found;
  Row row(w);
  auto place = [&](auto&& self, size_t j) -> bool {  // false stops the search
    if (j == w) {
      found.push_back(row);
      return limit == 0 || found.size() < limit;
    }
    for (const auto& t : candidates) {
      if (!v_adjacent(prev[j], t)) continue;
      if (j == 0) {
        if (t[0] != g.white || t[2] != g.white) continue;
      } else if (!h_adjacent(row[j - 1], t)) {
        continue;
      }
      if (j + 1 == w && (t[1] != g.white || t[3] != g.white)) continue;
      row[j] = t;
      if (!self(self, j + 1)) return false;
    }
    return true;
  };
  place(place, 0);
  return found;
}

const char* winner_name(GameWinner w) {
  switch (w) {
    case GameWinner::Prover: return "Prover";
    case GameWinner::Spoiler: return "Spoiler";
    case GameWinner::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

struct GameSearch {
  explicit GameSearch(const TilingGame& game) : g(game) {}

  const TilingGame& g;
  uint64_t explored = 0;
  // Definite verdicts hold at any depth; Unknown only certifies the depth
  // it was computed with (deeper search could still resolve it).
  struct Entry {
    GameWinner verdict = GameWinner::Unknown;
    unsigned depth = 0;
  };
  std::map<std::string, Entry> memo;

  void reject_ambiguity(const Row& frontier, int set, size_t count) const {
    if (count < 2) return;
    throw std::invalid_argument(
        "game is not well-formed: set T" + std::to_string(set) + " admits " +
        std::to_string(count) + "+ rows after frontier " + row_text(frontier));
  }

  // Value of choosing `set` from `frontier` with `depth` rows left to place.
  GameWinner branch(const Row& frontier, int set, bool prover_turn, unsigned depth) {
    auto rows = next_rows(g, frontier, set == 0 ? g.t0 : g.t1, 2);
    reject_ambiguity(frontier, set, rows.size());
    if (rows.empty()) return GameWinner::Spoiler;  // the play dies rowless
    const Row& row = rows.front();
    if (closes_corridor(g, row))
      return row_in_last(g, row) ? GameWinner::Prover : GameWinner::Spoiler;
    return search(row, !prover_turn, depth - 1);
  }

  // `prover_turn` alternates from the caller; depth = rows still placeable.
  GameWinner search(const Row& frontier, bool prover_turn, unsigned depth) {
    if (depth == 0) return GameWinner::Unknown;
    std::string key = (prover_turn ? "P" : "S") + row_text(frontier);
    auto it = memo.find(key);
    if (it != memo.end()) {
      if (it->second.verdict != GameWinner::Unknown) return it->second.verdict;
      if (it->second.depth >= depth) return GameWinner::Unknown;
    }
    ++explored;
    GameWinner result;
    GameWinner b0 = branch(frontier, 0, prover_turn, depth);
    if (prover_turn) {
      if (b0 == GameWinner::Prover) {
        result = GameWinner::Prover;
      } else {
        GameWinner b1 = branch(frontier, 1, prover_turn, depth);
        if (b1 == GameWinner::Prover) result = GameWinner::Prover;
        else if (b0 == GameWinner::Spoiler && b1 == GameWinner::Spoiler)
          result = GameWinner::Spoiler;
        else result = GameWinner::Unknown;
      }
    } else {
      if (b0 == GameWinner::Spoiler) {
        result = GameWinner::Spoiler;
      } else {
        GameWinner b1 = branch(frontier, 1, prover_turn, depth);
        if (b1 == GameWinner::Spoiler) result = GameWinner::Spoiler;
        else if (b0 == GameWinner::Prover && b1 == GameWinner::Prover)
          result = GameWinner::Prover;
        else result = GameWinner::Unknown;
      }
    }
    memo[key] = Entry{result, depth};
    return result;
  }

  // Rebuilds Prover's winning subtree below an already-won position. The
  // memo makes the revisits cheap and keeps the choices identical to the
  // original search.
  void grow(StrategyTree& tree, size_t node, const Row& frontier, bool prover_turn,
            unsigned depth) {
    auto attach = [&](int set, const Row& row) {
      size_t child = tree.nodes.size();
      tree.nodes.push_back(StrategyNode{row, set, {}});
      tree.nodes[node].children.push_back(child);
      if (!closes_corridor(g, row)) grow(tree, child, row, !prover_turn, depth - 1);
    };
    if (prover_turn) {
      for (int set = 0; set < 2; ++set) {
        if (branch(frontier, set, prover_turn, depth) != GameWinner::Prover) continue;
        auto rows = next_rows(g, frontier, set == 0 ? g.t0 : g.t1, 2);
        attach(set, rows.front());
        return;
      }
      throw std::logic_error("winning strategy reconstruction lost a branch");
    }
    for (int set = 0; set < 2; ++set) {
      auto rows = next_rows(g, frontier, set == 0 ? g.t0 : g.t1, 2);
      if (rows.empty())
        throw std::logic_error("winning strategy reconstruction hit a stuck set");
      attach(set, rows.front());
    }
  }
};

}  // namespace

WinnerResult game_winner(const TilingGame& g, unsigned depth) {
  auto errs = validate_game(g);
  if (!errs.empty()) throw std::invalid_argument("invalid game: " + errs[0]);
  GameSearch s(g);
  Row start = initial_row(g);
  WinnerResult res;
  res.winner = s.search(start, true, depth);
  res.explored = s.explored;
  if (res.winner == GameWinner::Prover) {
    StrategyTree tree;
    tree.nodes.push_back(StrategyNode{start, -1, {}});
    s.grow(tree, 0, start, true, depth);
    res.strategy = std::move(tree);
  }
  return res;
}

WellFormedResult check_well_formed(const TilingGame& g, unsigned depth) {
  auto errs = validate_game(g);
  if (!errs.empty()) throw std::invalid_argument("invalid game: " + errs[0]);
  WellFormedResult res;
  std::set<std::string> seen;
  std::vector<std::pair<Row, unsigned>> queue{{initial_row(g), 0}};
  seen.insert(row_text(queue.front().first));
  for (size_t head = 0; head < queue.size(); ++head) {
    auto [frontier, placed] = queue[head];
    ++res.explored;
    for (int set = 0; set < 2; ++set) {
      auto rows = next_rows(g, frontier, set == 0 ? g.t0 : g.t1, 2);
      if (rows.size() != 1) {
        res.ok = false;
        res.frontier = frontier;
        res.set = set;
        res.extensions = rows.size();
        return res;
      }
      const Row& row = rows.front();
      if (closes_corridor(g, row) || placed + 1 >= depth) continue;
      if (seen.insert(row_text(row)).second) queue.emplace_back(row, placed + 1);
    }
  }
  return res;
}

std::vector<std::string> validate_strategy(const TilingGame& g, const StrategyTree& s) {
  std::vector<std::string> errs;
  auto err = [&](std::string m) { errs.push_back(std::move(m)); };
  if (s.nodes.empty()) return {"the strategy is empty"};
  if (s.nodes[0].row != initial_row(g))
    err("the root must hold the padded initial row");
  if (s.nodes[0].move != -1) err("the root row is given, not built from a set");

  std::vector<int> depth(s.nodes.size(), -1);
  depth[0] = 0;
  std::vector<size_t> order{0};
  for (size_t head = 0; head < order.size(); ++head) {
    size_t idx = order[head];
    const StrategyNode& node = s.nodes[idx];
    for (size_t c : node.children) {
      if (c >= s.nodes.size()) return {"child index out of range"};
      if (depth[c] != -1) return {"node " + std::to_string(c) + " has two parents"};
      depth[c] = depth[idx] + 1;
      order.push_back(c);
    }
  }
  for (size_t i = 0; i < s.nodes.size(); ++i)
    if (depth[i] == -1) err("node " + std::to_string(i) + " is unreachable");
  if (!errs.empty()) return errs;

  for (size_t idx : order) {
    const StrategyNode& node = s.nodes[idx];
    std::string where = "node " + std::to_string(idx);
    if (node.row.size() != g.width()) {
      err(where + ": row has wrong width");
      continue;
    }
    bool closing = idx != 0 && closes_corridor(g, node.row);
    if (closing) {
      if (!node.children.empty()) err(where + ": play already ended at this row");
      if (!row_in_last(g, node.row))
        err(where + ": closing row leaves the closing set");
      continue;
    }
    bool prover_moves = depth[idx] % 2 == 0;
    if (prover_moves && node.children.size() != 1)
      err(where + ": Prover to move needs exactly one reply");
    if (!prover_moves && node.children.size() != 2)
      err(where + ": Spoiler to move needs both sets covered");
    for (size_t k = 0; k < node.children.size(); ++k) {
      const StrategyNode& child = s.nodes[node.children[k]];
      std::string cw = "node " + std::to_string(node.children[k]);
      if (!prover_moves && child.move != static_cast<int>(k)) {
        err(cw + ": Spoiler's replies must cover set 0 then set 1");
        continue;
      }
      if (child.move != 0 && child.move != 1) {
        err(cw + ": placed rows need a move mark 0 or 1");
        continue;
      }
      const std::vector<Tile>& set = child.move == 0 ? g.t0 : g.t1;
      if (child.row.size() != g.width()) continue;  // reported when visited
      for (size_t j = 0; j < child.row.size(); ++j) {
        const Tile& t = child.row[j];
        if (!contains_tile(set, t)) {
          err(cw + ": tile " + tile_text(t) + " is not in the claimed set");
          break;
        }
        if (!v_adjacent(node.row[j], t)) {
          err(cw + ": tile " + tile_text(t) + " does not match the row above");
          break;
        }
        if (j > 0 && !h_adjacent(child.row[j - 1], t)) {
          err(cw + ": tile " + tile_text(t) + " does not chain to its left");
          break;
        }
      }
      if (!child.row.empty()) {
        if (child.row.front()[0] != g.white || child.row.front()[2] != g.white)
          err(cw + ": left edge is not white");
        if (child.row.back()[1] != g.white || child.row.back()[3] != g.white)
          err(cw + ": right edge is not white");
      }
    }
  }
  return errs;
}

std::string strategy_to_text(const StrategyTree& s) {
  std::vector<int> parent(s.nodes.size(), -1);
  for (size_t i = 0; i < s.nodes.size(); ++i)
    for (size_t c : s.nodes[i].children)
      if (c < s.nodes.size()) parent[c] = static_cast<int>(i);
  std::ostringstream out;
  for (size_t i = 0; i < s.nodes.size(); ++i) {
    const StrategyNode& node = s.nodes[i];
    out << "node: " << parent[i] << " ";
    if (node.move < 0) out << "-";
    else out << node.move;
    for (const auto& t : node.row) out << " " << tile_text(t);
    out << "\n";
  }
  return out.str();
}

StrategyTree strategy_from_text(const std::string& text) {
  StrategyTree s;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    auto fail = [&](const std::string& msg) {
      throw std::invalid_argument("strategy file line " + std::to_string(line_no) +
                                  ": " + msg);
    };
    if (key != "node:") fail("expected 'node:'");
    int parent;
    std::string move;
    if (!(ls >> parent >> move)) fail("expected '<parent> <move>'");
    StrategyNode node;
    if (move == "-") node.move = -1;
    else if (move == "0") node.move = 0;
    else if (move == "1") node.move = 1;
    else fail("move must be 0, 1 or -");
    std::string rest;
    std::getline(ls, rest);
    node.row = parse_tiles(rest, line_no);
    size_t idx = s.nodes.size();
    if (parent >= 0) {
      if (static_cast<size_t>(parent) >= idx) fail("parent must precede its child");
      s.nodes[static_cast<size_t>(parent)].children.push_back(idx);
    } else if (idx != 0) {
      fail("only the first node may be the root");
    }
    s.nodes.push_back(std::move(node));
  }
  if (s.nodes.empty()) throw std::invalid_argument("strategy file has no nodes");
  return s;
}

}  // namespace fomod
