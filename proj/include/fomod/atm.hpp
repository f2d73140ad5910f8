#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fomod {

enum class Move : uint8_t { L, N, R };
const char* move_name(Move m);

struct AtmTransition {
  std::string from;   // state reading the cell
  std::string read;   // symbol under the head
  std::string write;  // symbol put in its place
  Move move = Move::N;
  std::string to;     // next state
  bool operator==(const AtmTransition& o) const = default;
};

// Alternating Turing machine with a single tape. Existential states choose
// one of their two applicable transitions, universal states need both to
// succeed. Exactly one accepting and one rejecting state.
struct ATM {
  std::vector<std::string> states;       // Q
  std::vector<std::string> existential;  // E, a subset of Q
  std::string initial;                   // in E
  std::string accept;
  std::string reject;
  std::vector<std::string> input;        // subset of the tape alphabet
  std::vector<std::string> tape;         // all tape symbols
  std::string blank;                     // in tape
  std::vector<AtmTransition> trans;

  bool is_existential(const std::string& q) const;
  bool is_final(const std::string& q) const { return q == accept || q == reject; }
};

// Structural diagnostics; empty means the machine is well formed: every
// non-final state has exactly two distinct transitions per tape symbol,
// sources and targets alternate existential/universal, final states have
// no outgoing transitions, and all names are alphanumeric tokens.
std::vector<std::string> validate_atm(const ATM& m);

// Line-oriented file format: states:, existential:, initial:, accept:,
// reject:, alphabet:, tape:, blank:, then one "trans: q a -> b MOVE q'"
// line per tuple. Blank lines and #-comments are ignored on input.
std::string atm_to_text(const ATM& m);
ATM atm_from_text(const std::string& text);

// Whether the machine accepts w from "initial state, head on the first
// letter", running on a tape of cell_budget - 1 cells (w padded with
// blanks). Moves that leave the tape make that branch non-accepting, and
// so do plays that revisit a configuration (infinite runs lose).
bool atm_accepts(const ATM& m, const std::vector<std::string>& w, uint64_t cell_budget);
// Same with the default budget of 2^|w| configuration cells.
bool atm_accepts(const ATM& m, const std::vector<std::string>& w);

}  // namespace fomod
