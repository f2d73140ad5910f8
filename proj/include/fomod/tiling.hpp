#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fomod {

// A tile is a square of four colored corner squares, in reading order:
// upper-left, upper-right, lower-left, lower-right.
using Tile = std::array<std::string, 4>;

std::string tile_text(const Tile& t);  // "(a,b,c,d)"

// `right` sits directly right of `left`: the shared vertical edge matches.
bool h_adjacent(const Tile& left, const Tile& right);
// `below` sits directly below `above`: the shared horizontal edge matches.
bool v_adjacent(const Tile& above, const Tile& below);

// Two players fill a corridor of width 2^n row by row, starting from the
// given initial row (padded with all-white tiles). Prover moves first; each
// move picks one of the two tile sets and lays a full row from it. A row
// whose lower half is all white completes the corridor's bottom edge and
// ends the play: Prover wins exactly when that closing row uses only tiles
// from `last`.
struct TilingGame {
  std::vector<std::string> colors;
  std::string white;
  unsigned n = 1;              // corridor width is 2^n
  std::vector<Tile> initial;   // n+1 tiles starting the first row
  std::vector<Tile> t0, t1;    // the two move sets
  std::vector<Tile> last;      // tiles allowed in the closing row

  size_t width() const { return size_t{1} << n; }
};

// Structural diagnostics; empty means the game is usable: known colors
// everywhere, white upper halves on a chained initial row, closing set
// inside t0 ∪ t1, and 1 <= n <= 16.
std::vector<std::string> validate_game(const TilingGame& g);

// Line-oriented file format: colors:, white:, n:, init: with the initial
// tiles, then T0:, T1:, L: with space-separated tiles as "(a,b,c,d)".
// Repeated set keys accumulate.
std::string game_to_text(const TilingGame& g);
TilingGame game_from_text(const std::string& text);

using Row = std::vector<Tile>;

// Compact one-line rendering of a row, "(a,b,c,d)(e,f,g,h)...". Used in
// reports and as a canonical key for row identity.
std::string row_text(const Row& row);

// The initial tiles padded with all-white tiles to the corridor width.
Row initial_row(const TilingGame& g);

// Whether every tile's lower half is white, i.e. placing this row ends the
// play with a complete bottom edge.
bool closes_corridor(const TilingGame& g, const Row& row);

// Whether every tile of the row belongs to the closing set.
bool row_in_last(const TilingGame& g, const Row& row);

// All rows buildable from `set` directly below `prev`: every tile from the
// set, horizontally chained, vertically matching prev, white outer edges.
// Enumeration order is deterministic; stops early after `limit` rows
// (0 = unlimited).
std::vector<Row> next_rows(const TilingGame& g, const Row& prev,
                           const std::vector<Tile>& set, size_t limit = 0);

enum class GameWinner { Prover, Spoiler, Unknown };
const char* winner_name(GameWinner w);

// A strategy for Prover: node 0 holds the initial row, every other node a
// placed row together with the set (0 or 1) it was built from. Nodes where
// Prover moves next have one child, nodes where Spoiler moves next have two
// (his T0 reply, then his T1 reply); leaves are closing rows.
struct StrategyNode {
  Row row;
  int move = -1;                 // set that built this row; -1 at the root
  std::vector<size_t> children;  // indices into StrategyTree::nodes
};

struct StrategyTree {
  std::vector<StrategyNode> nodes;  // node 0 is the root
};

struct WinnerResult {
  GameWinner winner = GameWinner::Unknown;
  uint64_t explored = 0;                 // positions expanded
  std::optional<StrategyTree> strategy;  // present when Prover wins
};

// Bounded AND-OR search with Prover to move first and at most `depth`
// placed rows per play. A set with no legal row loses the play for Prover
// (stuck plays have no corridor). Throws std::invalid_argument when a
// reachable position admits two or more rows from one set: the game is not
// well-formed and "the row from set i" is meaningless.
WinnerResult game_winner(const TilingGame& g, unsigned depth);

struct WellFormedResult {
  bool ok = true;
  uint64_t explored = 0;  // frontiers expanded
  // Filled on failure: the frontier whose extension count is off.
  Row frontier;
  int set = 0;            // offending set, 0 or 1
  size_t extensions = 0;  // 0, or 2 meaning "at least two"
};

// Breadth-first check that every reachable non-closing frontier within
// `depth` placed rows admits exactly one next row from each set.
WellFormedResult check_well_formed(const TilingGame& g, unsigned depth);

// Diagnostics; empty means s is a winning strategy for g: correct root,
// alternating ownership with Prover first, legal rows from the claimed
// sets, both sets covered below universal rows, and every leaf a closing
// row inside the closing set.
std::vector<std::string> validate_strategy(const TilingGame& g, const StrategyTree& s);

// One "node: <parent> <move> <tiles…>" line per node, root (parent -1,
// move -) first; children keep file order.
std::string strategy_to_text(const StrategyTree& s);
StrategyTree strategy_from_text(const std::string& text);

}  // namespace fomod
