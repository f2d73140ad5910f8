#include "fomod/atm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace fomod {

const char* move_name(Move m) {
  switch (m) {
    case Move::L: return "L";
    case Move::N: return "N";
    case Move::R: return "R";
  }
  return "?";
}

bool ATM::is_existential(const std::string& q) const {
  return std::find(existential.begin(), existential.end(), q) != existential.end();
}

namespace {

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

bool clean_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

std::vector<std::string> validate_atm(const ATM& m) {
  std::vector<std::string> errs;
  auto err = [&](std::string msg) { errs.push_back(std::move(msg)); };

  for (const auto& q : m.states)
    if (!clean_token(q)) err("state name '" + q + "' is not an alphanumeric token");
  for (const auto& a : m.tape)
    if (!clean_token(a)) err("tape symbol '" + a + "' is not an alphanumeric token");
  if (m.states.empty()) err("the machine has no states");
  for (size_t i = 0; i < m.states.size(); ++i)
    for (size_t j = i + 1; j < m.states.size(); ++j)
      if (m.states[i] == m.states[j]) err("duplicate state " + m.states[i]);
  for (size_t i = 0; i < m.tape.size(); ++i)
    for (size_t j = i + 1; j < m.tape.size(); ++j)
      if (m.tape[i] == m.tape[j]) err("duplicate tape symbol " + m.tape[i]);
  for (const auto& q : m.existential)
    if (!contains(m.states, q)) err("existential state " + q + " is not a state");
  if (!contains(m.existential, m.initial))
    err("initial state " + m.initial + " must be existential");
  if (!contains(m.states, m.accept)) err("accepting state " + m.accept + " is not a state");
  if (!contains(m.states, m.reject)) err("rejecting state " + m.reject + " is not a state");
  if (m.accept == m.reject) err("accepting and rejecting states must differ");
  if (contains(m.existential, m.accept) || contains(m.existential, m.reject))
    err("final states must not be existential");
  for (const auto& a : m.input)
    if (!contains(m.tape, a)) err("input symbol " + a + " is not a tape symbol");
  if (!contains(m.tape, m.blank)) err("blank symbol " + m.blank + " is not a tape symbol");

  for (const auto& t : m.trans) {
    if (!contains(m.states, t.from) || !contains(m.states, t.to))
      err("transition references unknown state " +
          (contains(m.states, t.from) ? t.to : t.from));
    if (!contains(m.tape, t.read) || !contains(m.tape, t.write))
      err("transition references unknown tape symbol " +
          (contains(m.tape, t.read) ? t.write : t.read));
    if (t.from == m.accept || t.from == m.reject)
      err("final state " + t.from + " must have no outgoing transitions");
  }
  if (!errs.empty()) return errs;

  for (const auto& t : m.trans)
    if (m.is_existential(t.from) == m.is_existential(t.to))
      err("transition " + t.from + " -> " + t.to +
          " does not alternate existential and universal states");
  for (const auto& q : m.states) {
    if (q == m.accept || q == m.reject) continue;
    for (const auto& a : m.tape) {
      std::vector<const AtmTransition*> hits;
      for (const auto& t : m.trans)
        if (t.from == q && t.read == a) hits.push_back(&t);
      if (hits.size() != 2)
        err("state " + q + " reading " + a + " has " + std::to_string(hits.size()) +
            " transitions, expected exactly two");
      else if (*hits[0] == *hits[1])
        err("state " + q + " reading " + a + " repeats one transition twice");
    }
  }
  return errs;
}

std::string atm_to_text(const ATM& m) {
  std::ostringstream out;
  auto line = [&](const char* key, const std::vector<std::string>& xs) {
    out << key << ":";
    for (const auto& x : xs) out << " " << x;
    out << "\n";
  };
  line("states", m.states);
  line("existential", m.existential);
  out << "initial: " << m.initial << "\n";
  out << "accept: " << m.accept << "\n";
  out << "reject: " << m.reject << "\n";
  line("alphabet", m.input);
  line("tape", m.tape);
  out << "blank: " << m.blank << "\n";
  for (const auto& t : m.trans)
    out << "trans: " << t.from << " " << t.read << " -> " << t.write << " "
        << move_name(t.move) << " " << t.to << "\n";
  return out.str();
}

ATM atm_from_text(const std::string& text) {
  ATM m;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("machine file line " + std::to_string(line_no) + ": " +
                                msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    if (key.back() != ':') fail("expected 'key:' at the start of the line");
    key.pop_back();
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    auto one = [&]() {
      if (toks.size() != 1) fail("'" + key + ":' takes exactly one token");
      return toks[0];
    };
    if (key == "states") m.states = toks;
    else if (key == "existential") m.existential = toks;
    else if (key == "initial") m.initial = one();
    else if (key == "accept") m.accept = one();
    else if (key == "reject") m.reject = one();
    else if (key == "alphabet") m.input = toks;
    else if (key == "tape") m.tape = toks;
    else if (key == "blank") m.blank = one();
    else if (key == "trans") {
      if (toks.size() != 6 || toks[2] != "->")
        fail("expected 'trans: q a -> b MOVE q2'");
      AtmTransition t;
      t.from = toks[0];
      t.read = toks[1];
      t.write = toks[3];
      if (toks[4] == "L") t.move = Move::L;
      else if (toks[4] == "N") t.move = Move::N;
      else if (toks[4] == "R") t.move = Move::R;
      else fail("unknown move '" + toks[4] + "', expected L, N or R");
      t.to = toks[5];
      m.trans.push_back(std::move(t));
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  auto errs = validate_atm(m);
  if (!errs.empty()) throw std::invalid_argument("invalid machine: " + errs[0]);
  return m;
}

namespace {

struct Config {
  std::string state;
  size_t head = 0;
  std::vector<std::string> cells;

  std::string key() const {
    std::string k = state + "\x1f" + std::to_string(head);
    for (const auto& c : cells) k += "\x1f" + c;
    return k;
  }
};

constexpr size_t kDeadBranch = SIZE_MAX;  // a move that would leave the tape

struct ConfigNode {
  bool existential = false;
  bool is_accept = false;
  bool is_reject = false;
  std::vector<size_t> succs;  // kDeadBranch for off-tape moves
};

}  // namespace

bool atm_accepts(const ATM& m, const std::vector<std::string>& w, uint64_t cell_budget) {
  auto errs = validate_atm(m);
  if (!errs.empty()) throw std::invalid_argument("invalid machine: " + errs[0]);
  if (w.empty()) throw std::invalid_argument("input word must be non-empty");
  for (const auto& a : w)
    if (std::find(m.input.begin(), m.input.end(), a) == m.input.end())
      throw std::invalid_argument("input letter " + a + " is not in the input alphabet");
  if (cell_budget < w.size() + 1)
    throw std::invalid_argument("cell budget " + std::to_string(cell_budget) +
                                " is too small for an input of length " +
                                std::to_string(w.size()));

  Config start;
  start.state = m.initial;
  start.head = 0;
  start.cells = w;
  start.cells.resize(cell_budget - 1, m.blank);

  // Build the graph of configurations reachable inside the budget.
  std::map<std::string, size_t> index;
  std::vector<ConfigNode> nodes;
  std::vector<Config> pending;
  auto intern = [&](const Config& c) {
    auto [it, fresh] = index.emplace(c.key(), nodes.size());
    if (fresh) {
      ConfigNode n;
      n.existential = m.is_existential(c.state);
      n.is_accept = c.state == m.accept;
      n.is_reject = c.state == m.reject;
      nodes.push_back(std::move(n));
      pending.push_back(c);
    }
    return it->second;
  };
  intern(start);
  while (!pending.empty()) {
    Config c = std::move(pending.back());
    pending.pop_back();
    size_t self = index.at(c.key());
    if (nodes[self].is_accept || nodes[self].is_reject) continue;
    for (const auto& t : m.trans) {
      if (t.from != c.state || t.read != c.cells[c.head]) continue;
      long next = static_cast<long>(c.head) +
                  (t.move == Move::L ? -1 : t.move == Move::R ? 1 : 0);
      if (next < 0 || next >= static_cast<long>(c.cells.size())) {
        nodes[self].succs.push_back(kDeadBranch);
        continue;
      }
      Config succ = c;
      succ.cells[c.head] = t.write;
      succ.state = t.to;
      succ.head = static_cast<size_t>(next);
      nodes[self].succs.push_back(intern(succ));
    }
  }

  // Least fixed point: a configuration leads to acceptance iff it reaches
  // the accepting state along a well-founded run tree.  Plays that loop
  // forever or fall off the tape never do.
  std::vector<char> good(nodes.size(), 0);
  for (size_t i = 0; i < nodes.size(); ++i) good[i] = nodes[i].is_accept ? 1 : 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (good[i] || nodes[i].is_accept || nodes[i].is_reject) continue;
      bool value = !nodes[i].existential && !nodes[i].succs.empty();
      for (size_t s : nodes[i].succs) {
        bool branch = s != kDeadBranch && good[s];
        if (nodes[i].existential ? branch : !branch) {
          value = nodes[i].existential;
          break;
        }
      }
      if (value) {
        good[i] = 1;
        changed = true;
      }
    }
  }
  return good[index.at(start.key())] != 0;
}

bool atm_accepts(const ATM& m, const std::vector<std::string>& w) {
  if (w.size() >= 60)
    throw std::invalid_argument("default budget 2^n overflows for inputs this long");
  return atm_accepts(m, w, uint64_t{1} << w.size());
}

}  // namespace fomod
