#pragma once

#include "fomod/atm.hpp"
#include "fomod/formula.hpp"
#include "fomod/model.hpp"
#include "fomod/tiling.hpp"

namespace fomod {

// Compiles a machine and an input word of length n into a corridor tiling
// game of width 2^n: Prover wins the game exactly when the machine accepts
// the word within 2^n - 1 tape cells. Colors are the tape symbols, one
// "q.a" pair color per state and symbol, and "#" for white; tape cells the
// machine never touched stay white, and a head moving onto such a cell
// reads the blank symbol.
TilingGame atm_to_game(const ATM& m, const std::vector<std::string>& w);

// Shared vocabulary and label layout of the tree encoding of a game: n
// counter bits, one predicate per tile, four corner-color predicates per
// color, and the row bookkeeping predicates. Color names are sanitized
// into identifiers ("#" becomes W, other separators become underscores,
// collisions get an index suffix).
struct GameVocab {
  Signature sig;            // tree vocabulary
  std::vector<Tile> tiles;  // enumeration behind the tile<i> predicates
  std::vector<std::string> colors;
  unsigned n = 1;
  size_t bits = 0;     // predicate index of B0 (bits i at bits + i)
  size_t tile0 = 0;    // predicate index of tile0
  size_t color0 = 0;   // four predicates per color start here
  size_t first = 0, last = 0, row_e = 0, row_a = 0;
  size_t move_0 = 0, move_1 = 0, set_t0 = 0, set_t1 = 0, set_l = 0;

  size_t tile_index(const Tile& t) const;            // throws on unknown tile
  size_t color_index(const std::string& c) const;    // throws on unknown color
  size_t pi(int corner, size_t color) const {        // corner in 1..4
    return color0 + 4 * color + static_cast<size_t>(corner - 1);
  }
};

GameVocab game_vocab(const TilingGame& g);

// The conjunct families of the tree encoding, separated for testing:
// column numbering, tile/color consistency, first and last row, row
// ownership alternation, universal-row branching, horizontal adjacency,
// vertical adjacency via column parity, and the closing discipline that
// ties white lower halves to the closing set.
struct GameFormulaParts {
  FormulaPtr numbering, tiles, first_last, rows, universal;
  FormulaPtr horizontal, vertical, closing;

  std::vector<FormulaPtr> all() const {
    return {numbering, tiles, first_last, rows,
            universal, horizontal, vertical, closing};
  }
};

GameFormulaParts game_formula_parts(const TilingGame& g);

// Conjunction of all the families: satisfiable over finite trees exactly
// when Prover wins the (well-formed) game.
FormulaPtr game_to_formula(const TilingGame& g);

// Labels of one encoded node, exposed for building corridor paths by hand.
LabelMask game_node_label(const TilingGame& g, const GameVocab& v, size_t column,
                          const Tile& t, bool first_row, bool last_row, bool row_e,
                          int move);

// Encodes a winning strategy as a tree model over game_vocab(g).sig: every
// row becomes a chain of 2^n nodes, child rows hang off the previous row's
// last node, and the labels follow the vocabulary. The result satisfies
// game_to_formula(g). Throws std::invalid_argument when s is not a winning
// strategy for g.
TreeModel strategy_to_tree(const TilingGame& g, const StrategyTree& s);

}  // namespace fomod
