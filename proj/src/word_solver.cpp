#include "fomod/word_solver.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <unordered_map>

namespace fomod {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    default: return "INCONCLUSIVE";
  }
}

bool is_valid_successor(const FullType& succ, const FullType& cur) {
  if (succ.kind != NavKind::Word || cur.kind != NavKind::Word)
    throw std::invalid_argument("successor linkage is defined for word types");
  if (succ.moduli != cur.moduli)
    throw std::invalid_argument("full types disagree on moduli");
  const auto& m = cur.moduli;
  return succ.comp[kWPrev] == cur.comp[kWEq] &&
         cur.comp[kWNext] == succ.comp[kWEq] &&
         succ.comp[kWFarBefore] == combine(cur.comp[kWFarBefore], cur.comp[kWPrev], m) &&
         cur.comp[kWFarAfter] == combine(succ.comp[kWFarAfter], succ.comp[kWNext], m);
}

namespace {

struct CapHit {
  std::string what;
};

// Search bookkeeping shared by the enumeration helpers below.
struct Search {
  const CompiledNF& nf;
  uint64_t max_states;
  uint64_t explored = 0;

  void charge(const char* what) {
    if (++explored > max_states)
      throw CapHit{std::string("state cap reached while ") + what + " (--max-states)"};
  }
};

bool is_final(const FullType& t) {
  return t.comp[kWNext].all_zero() && t.comp[kWFarAfter].all_zero();
}

// All cell tables over the 1-type space whose support stays inside `allow`,
// visited in mixed-radix order with the all-zero table first; returns false
// when the callback stops early.
bool for_each_table(Search& s, const char* what, const std::vector<bool>& allow,
                    const std::function<bool(const CellTable&)>& visit) {
  size_t n_types = allow.size();
  const auto& moduli = s.nf.moduli;
  uint64_t options = cell_option_count(moduli);
  std::vector<uint64_t> idx(n_types, 0);
  for (;;) {
    s.charge(what);
    CellTable t;
    t.cells.reserve(n_types);
    for (uint64_t i : idx) t.cells.push_back(cell_from_option(i, moduli));
    if (!visit(t)) return false;
    size_t pos = n_types;
    while (pos > 0) {
      uint64_t limit = allow[pos - 1] ? options : 1;
      if (++idx[pos - 1] < limit) break;
      idx[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) return true;
  }
}

// First-position candidates: previous and far-before rows are zero, the own
// singleton carries the chosen 1-type, and the forward-looking rows (next,
// far-after) are guessed outright.
void initial_states(Search& s, std::vector<FullType>* out) {
  size_t n_types = s.nf.n_types;
  const auto& moduli = s.nf.moduli;
  for (size_t alpha = 0; alpha < n_types; ++alpha) {
    for (size_t next = 0; next <= n_types; ++next) {  // n_types means "no successor"
      bool terminal = next == n_types;
      FullType base = zero_full_type(NavKind::Word, moduli, n_types);
      base.comp[kWEq] = singleton_table(n_types, static_cast<OneType>(alpha), moduli);
      if (!terminal)
        base.comp[kWNext] = singleton_table(n_types, static_cast<OneType>(next), moduli);
      if (terminal) {
        // No successor forces an empty far-after row.
        s.charge("enumerating first-position types");
        if (is_phi_consistent(base, s.nf)) out->push_back(base);
        continue;
      }
      // 1-types the universal matrix rules out at far-after distance can
      // never sit in the guessed row; skip them while enumerating.
      std::vector<bool> allow(n_types);
      for (size_t c = 0; c < n_types; ++c)
        allow[c] = s.nf.entails(0, kWFarAfter, static_cast<OneType>(alpha),
                                static_cast<OneType>(c));
      for_each_table(s, "enumerating first-position types", allow,
                     [&](const CellTable& far) {
                       FullType t = base;
                       t.comp[kWFarAfter] = far;
                       if (is_phi_consistent(t, s.nf)) out->push_back(t);
                       return true;
                     });
    }
  }
}

// Every full type compatible with cur one position to the right. The
// backward-looking rows are forced by the linkage equations; the own
// singleton is forced by cur's next row; only the forward-looking rows
// leave room: the next row is zero or a singleton, and the far-after row
// follows from cur's by discounting the chosen successor.
void successor_states(Search& s, const FullType& cur, std::vector<FullType>* out) {
  size_t n_types = s.nf.n_types;
  const auto& moduli = s.nf.moduli;
  OneType self;
  if (!cur.comp[kWNext].is_singleton(moduli, &self)) return;  // last position

  FullType base = zero_full_type(NavKind::Word, moduli, n_types);
  base.comp[kWEq] = singleton_table(n_types, self, moduli);
  base.comp[kWPrev] = cur.comp[kWEq];
  base.comp[kWFarBefore] = combine(cur.comp[kWFarBefore], cur.comp[kWPrev], moduli);

  auto consider = [&](FullType t) {
    s.charge("expanding successor types");
    if (is_phi_consistent(t, s.nf)) out->push_back(std::move(t));
  };

  // Terminal successor: far-after must already be used up.
  if (cur.comp[kWFarAfter].all_zero()) consider(base);

  for (size_t next = 0; next < n_types; ++next) {
    const CountCell& ahead = cur.comp[kWFarAfter].cells[next];
    if (ahead.is_zero()) continue;  // the chosen successor must be expected
    FullType t = base;
    t.comp[kWNext] = singleton_table(n_types, static_cast<OneType>(next), moduli);
    t.comp[kWFarAfter] = cur.comp[kWFarAfter];
    CountCell& cell = t.comp[kWFarAfter].cells[next];
    bool residues_zero = true;
    for (size_t j = 0; j < moduli.size(); ++j) {
      cell.res[j] = (cell.res[j] + moduli[j] - 1) % moduli[j];
      residues_zero = residues_zero && cell.res[j] == 0;
    }
    consider(t);  // count of this 1-type beyond the successor stays nonzero
    if (residues_zero) {
      FullType done = t;
      done.comp[kWFarAfter].cells[next].flag = 0;
      consider(std::move(done));
    }
  }
}

std::vector<FullType> sorted_by_key(std::vector<FullType> v) {
  std::sort(v.begin(), v.end(), [](const FullType& a, const FullType& b) {
    return full_type_key(a) < full_type_key(b);
  });
  return v;
}

WordModel word_from_path(const std::vector<const FullType*>& path) {
  WordModel w;
  w.positions.reserve(path.size());
  for (const FullType* t : path) w.positions.push_back(t->self_type());
  return w;
}

}  // namespace

SolveResult solve_word(const NormalFormFormula& nf, const SolveOptions& opts) {
  auto started = std::chrono::steady_clock::now();
  SolveResult result;
  auto finish = [&](Verdict v) {
    result.verdict = v;
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  };

  CompiledNF compiled;
  try {
    compiled = compile_nf(nf, opts.max_onetypes);
  } catch (const ResourceError& e) {
    result.note = e.what();
    return finish(Verdict::Inconclusive);
  }
  if (compiled.kind != NavKind::Word)
    throw std::invalid_argument("solve_word needs a word-signature normal form");

  Search search{compiled, opts.max_states};
  // Keyed states with parent links for witness reconstruction.
  std::unordered_map<std::string, std::pair<FullType, std::string>> seen;
  std::vector<std::string> stack;

  auto admit = [&](const FullType& t, const std::string& parent) -> const std::string* {
    std::string key = full_type_key(t);
    auto [it, fresh] = seen.emplace(key, std::make_pair(t, parent));
    if (!fresh) return nullptr;
    stack.push_back(it->first);
    return &it->first;
  };

  try {
    std::vector<FullType> init;
    initial_states(search, &init);
    for (const FullType& t : sorted_by_key(std::move(init))) admit(t, "");

    while (!stack.empty()) {
      std::string key = std::move(stack.back());
      stack.pop_back();
      const FullType& cur = seen.at(key).first;
      if (is_final(cur)) {
        std::vector<const FullType*> path;
        for (std::string at = key; !at.empty();) {
          const auto& entry = seen.at(at);
          path.push_back(&entry.first);
          at = entry.second;
        }
        std::reverse(path.begin(), path.end());
        WordModel witness = word_from_path(path);
        if (!check_sentence(witness, nf.extended_sig, nf.to_formula()))
          throw std::logic_error("word solver produced a witness that fails verification");
        result.word = std::move(witness);
        result.explored = search.explored;
        return finish(Verdict::Sat);
      }
      search.charge("expanding the search frontier");
      std::vector<FullType> next;
      successor_states(search, cur, &next);
      for (const FullType& t : sorted_by_key(std::move(next))) admit(t, key);
    }
  } catch (const CapHit& cap) {
    result.note = cap.what;
    result.explored = search.explored;
    return finish(Verdict::Inconclusive);
  } catch (const ResourceError& e) {
    result.note = e.what();
    result.explored = search.explored;
    return finish(Verdict::Inconclusive);
  }

  result.explored = search.explored;
  return finish(Verdict::Unsat);
}

WordModel shrink_word(const WordModel& model, const NormalFormFormula& nf) {
  FormulaPtr sentence = nf.to_formula();
  if (!check_sentence(model, nf.extended_sig, sentence))
    throw std::invalid_argument("model does not satisfy the normal form");
  std::vector<uint64_t> moduli;
  for (const auto& m : nf.mod_list) moduli.push_back(m.l.convert_to<uint64_t>());

  WordModel cur = model;
  for (;;) {
    ModelView view(cur, nf.extended_sig);
    std::vector<std::string> keys;
    keys.reserve(cur.size());
    for (int v = 0; v < view.size(); ++v)
      keys.push_back(full_type_key(realized_full_type(view, v, moduli)));

    size_t u = 0, v = 0;
    bool found = false;
    for (size_t i = 0; i < keys.size() && !found; ++i)
      for (size_t j = keys.size(); j-- > i + 1 && !found;)
        if (keys[i] == keys[j]) {
          u = i;
          v = j;
          found = true;
        }
    if (!found) return cur;

    WordModel shorter;
    shorter.positions.assign(cur.positions.begin(), cur.positions.begin() + u + 1);
    shorter.positions.insert(shorter.positions.end(), cur.positions.begin() + v + 1,
                             cur.positions.end());
    if (!check_sentence(shorter, nf.extended_sig, sentence))
      throw std::logic_error("word pumping surgery broke satisfaction");
    cur = std::move(shorter);
  }
}

}  // namespace fomod
