#include "fomod/types.hpp"

namespace fomod {

int theta_count(NavKind k) { return k == NavKind::Word ? 5 : 10; }

const char* theta_tag(NavKind k, int theta) {
  static const char* word[] = {"=", "+1", "-1", "<<", ">>"};
  static const char* tree[] = {"=",     "down",  "up",   "down+", "up+",
                               "right", "left", "right+", "left+", "free"};
  return k == NavKind::Word ? word[theta] : tree[theta];
}

int classify_pair(const ModelView& m, int v, int w) {
  if (m.kind() == NavKind::Word) {
    if (w == v) return kWEq;
    if (w == v + 1) return kWNext;
    if (w == v - 1) return kWPrev;
    return w < v ? kWFarBefore : kWFarAfter;
  }
  if (w == v) return kTEq;
  if (m.nav(NavSym::Child, v, w)) return kTDown;
  if (m.nav(NavSym::Child, w, v)) return kTUp;
  if (m.nav(NavSym::Desc, v, w)) return kTDownFar;
  if (m.nav(NavSym::Desc, w, v)) return kTUpFar;
  if (m.nav(NavSym::NextSib, v, w)) return kTRight;
  if (m.nav(NavSym::NextSib, w, v)) return kTLeft;
  if (m.nav(NavSym::FollSib, v, w)) return kTRightFar;
  if (m.nav(NavSym::FollSib, w, v)) return kTLeftFar;
  return kTFree;
}

CountCell zero_cell(size_t m) {
  CountCell c;
  c.res.assign(m, 0);
  return c;
}

CountCell cell_of_count(uint64_t count, const std::vector<uint64_t>& moduli) {
  CountCell c;
  c.flag = count > 0 ? 1 : 0;
  c.res.reserve(moduli.size());
  for (uint64_t l : moduli) c.res.push_back(count % l);
  return c;
}

bool CellTable::all_zero() const {
  for (const auto& c : cells)
    if (!c.is_zero()) return false;
  return true;
}

size_t CellTable::support_size() const {
  size_t n = 0;
  for (const auto& c : cells)
    if (!c.is_zero()) ++n;
  return n;
}

bool CellTable::is_singleton(const std::vector<uint64_t>& moduli, OneType* out) const {
  int found = -1;
  for (size_t t = 0; t < cells.size(); ++t) {
    if (cells[t].is_zero()) continue;
    if (found >= 0) return false;
    if (!(cells[t] == cell_of_count(1, moduli))) return false;
    found = static_cast<int>(t);
  }
  if (found < 0) return false;
  if (out) *out = static_cast<OneType>(found);
  return true;
}

CellTable zero_table(size_t n_types, size_t m) {
  CellTable t;
  t.cells.assign(n_types, zero_cell(m));
  return t;
}

CellTable singleton_table(size_t n_types, OneType tp, const std::vector<uint64_t>& moduli) {
  CellTable t = zero_table(n_types, moduli.size());
  t.cells[tp] = cell_of_count(1, moduli);
  return t;
}

CountCell combine(const CountCell& a, const CountCell& b, const std::vector<uint64_t>& moduli) {
  CountCell c;
  c.flag = std::max(a.flag, b.flag);
  c.res.resize(moduli.size());
  for (size_t j = 0; j < moduli.size(); ++j) c.res[j] = (a.res[j] + b.res[j]) % moduli[j];
  return c;
}

CellTable combine(const CellTable& a, const CellTable& b, const std::vector<uint64_t>& moduli) {
  if (a.cells.size() != b.cells.size())
    throw std::invalid_argument("cell tables cover different 1-type spaces");
  CellTable t;
  t.cells.reserve(a.cells.size());
  for (size_t i = 0; i < a.cells.size(); ++i)
    t.cells.push_back(combine(a.cells[i], b.cells[i], moduli));
  return t;
}

uint64_t cell_option_count(const std::vector<uint64_t>& moduli) {
  uint64_t period = 1;
  for (uint64_t l : moduli) {
    uint64_t step = l / std::gcd(period, l);
    if (period > (UINT64_MAX - 1) / step)
      throw ResourceError("residue space of the moduli is too large to enumerate");
    period *= step;
  }
  return period + 1;
}

CountCell cell_from_option(uint64_t option, const std::vector<uint64_t>& moduli) {
  return cell_of_count(option, moduli);
}

namespace {

bool tables_of_count_rec(const std::vector<bool>& allow,
                         const std::vector<uint64_t>& moduli, uint64_t period,
                         size_t at, uint64_t remaining, uint64_t room,
                         std::vector<uint64_t>& counts,
                         const std::function<bool(const CellTable&)>& visit) {
  if (remaining > room) return true;  // cannot place this much in what's left
  if (at == counts.size()) {
    CellTable t;
    t.cells.reserve(counts.size());
    for (uint64_t c : counts) t.cells.push_back(cell_of_count(c, moduli));
    return visit(t);
  }
  if (!allow[at]) {
    counts[at] = 0;
    return tables_of_count_rec(allow, moduli, period, at + 1, remaining, room, counts,
                               visit);
  }
  uint64_t cap = std::min(period, remaining);
  for (uint64_t c = 0; c <= cap; ++c) {
    counts[at] = c;
    if (!tables_of_count_rec(allow, moduli, period, at + 1, remaining - c,
                             room - period, counts, visit))
      return false;
  }
  return true;
}

}  // namespace

bool for_each_table_of_count(const std::vector<bool>& allow,
                             const std::vector<uint64_t>& moduli, uint64_t weight,
                             const std::function<bool(const CellTable&)>& visit) {
  uint64_t period = cell_option_count(moduli) - 1;
  uint64_t room = 0;
  for (bool a : allow)
    if (a) room += period;
  std::vector<uint64_t> counts(allow.size(), 0);
  return tables_of_count_rec(allow, moduli, period, 0, weight, room, counts, visit);
}

OneType FullType::self_type() const {
  for (size_t t = 0; t < comp[0].cells.size(); ++t)
    if (!comp[0].cells[t].is_zero()) return static_cast<OneType>(t);
  throw std::logic_error("full type has an empty equality component");
}

FullType zero_full_type(NavKind kind, const std::vector<uint64_t>& moduli, size_t n_types) {
  FullType t;
  t.kind = kind;
  t.moduli = moduli;
  t.comp.assign(theta_count(kind), zero_table(n_types, moduli.size()));
  return t;
}

namespace {

// (immediate, far) component pairs subject to the zero-implication rule,
// plus the components that hold at most one element.
std::vector<std::pair<int, int>> far_pairs(NavKind k) {
  if (k == NavKind::Word) return {{kWNext, kWFarAfter}, {kWPrev, kWFarBefore}};
  return {{kTDown, kTDownFar}, {kTUp, kTUpFar}, {kTRight, kTRightFar}, {kTLeft, kTLeftFar}};
}

std::vector<int> unit_components(NavKind k) {
  if (k == NavKind::Word) return {kWNext, kWPrev};
  return {kTUp, kTRight, kTLeft};
}

}  // namespace

std::vector<std::string> full_type_invariant_errors(const FullType& t) {
  std::vector<std::string> out;
  if (static_cast<int>(t.comp.size()) != theta_count(t.kind)) {
    out.push_back("wrong number of order-formula components");
    return out;
  }
  if (!t.comp[0].is_singleton(t.moduli))
    out.push_back("equality component is not a singleton");
  for (int th : unit_components(t.kind)) {
    const CellTable& c = t.comp[th];
    if (!c.all_zero() && !c.is_singleton(t.moduli))
      out.push_back(std::string("component ") + theta_tag(t.kind, th) +
                    " is neither zero nor a singleton");
  }
  for (auto [imm, far] : far_pairs(t.kind)) {
    if (t.comp[imm].all_zero() && !t.comp[far].all_zero())
      out.push_back(std::string("component ") + theta_tag(t.kind, far) +
                    " nonzero while " + theta_tag(t.kind, imm) + " is zero");
  }
  return out;
}

std::string full_type_key(const FullType& t) {
  std::string key;
  key.reserve(2 + t.comp.size() * t.comp[0].cells.size() * (1 + 4 * t.moduli.size()));
  for (const auto& table : t.comp) {
    for (const auto& c : table.cells) {
      key.push_back(static_cast<char>(c.flag));
      for (uint64_t r : c.res)
        for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((r >> (8 * b)) & 0xff));
    }
  }
  return key;
}

std::string one_type_bits(OneType t, size_t n_preds) {
  if (n_preds == 0) return "-";
  std::string out(n_preds, '0');
  for (size_t i = 0; i < n_preds; ++i)
    if ((t >> i) & 1u) out[i] = '1';
  return out;
}

std::string dump_full_type(const FullType& t, size_t n_preds) {
  std::string out;
  for (size_t th = 0; th < t.comp.size(); ++th) {
    for (size_t tp = 0; tp < t.comp[th].cells.size(); ++tp) {
      const CountCell& c = t.comp[th].cells[tp];
      if (c.is_zero()) continue;
      out += theta_tag(t.kind, static_cast<int>(th));
      out += " ";
      out += one_type_bits(static_cast<OneType>(tp), n_preds);
      out += " ";
      out += std::to_string(static_cast<int>(c.flag));
      for (uint64_t r : c.res) {
        out += " ";
        out += std::to_string(r);
      }
      out += "\n";
    }
  }
  return out;
}

std::vector<OneType> enumerate_one_types(const Signature& sig, size_t cap) {
  size_t p = sig.preds.size();
  if (p >= 63 || (size_t{1} << p) > cap)
    throw ResourceError("1-type space 2^" + std::to_string(p) +
                        " exceeds the cap of " + std::to_string(cap) +
                        " (--max-onetypes)");
  std::vector<OneType> out;
  out.reserve(size_t{1} << p);
  for (size_t t = 0; t < (size_t{1} << p); ++t) out.push_back(static_cast<OneType>(t));
  return out;
}

FullType realized_full_type(const ModelView& m, int v, const std::vector<uint64_t>& moduli) {
  if (moduli.empty()) throw std::invalid_argument("moduli must be non-empty");
  size_t n_types = size_t{1} << m.sig().preds.size();
  std::vector<std::vector<uint64_t>> counts(theta_count(m.kind()),
                                            std::vector<uint64_t>(n_types, 0));
  for (int w = 0; w < m.size(); ++w)
    counts[classify_pair(m, v, w)][static_cast<size_t>(m.labels(w).to_ullong())]++;
  FullType t;
  t.kind = m.kind();
  t.moduli = moduli;
  t.comp.reserve(counts.size());
  for (const auto& row : counts) {
    CellTable table;
    table.cells.reserve(n_types);
    for (uint64_t c : row) table.cells.push_back(cell_of_count(c, moduli));
    t.comp.push_back(std::move(table));
  }
  return t;
}

namespace {

// Truth of nav(a, b) where a, b are drawn from {x, y} and theta describes
// y's position relative to x. x_first: the atom is nav(x, y).
bool nav_truth(NavKind kind, int theta, NavSym s, bool x_first) {
  if (kind == NavKind::Word) {
    switch (s) {
      case NavSym::Succ:
        return x_first ? theta == kWNext : theta == kWPrev;
      case NavSym::Leq:
        if (theta == kWEq) return true;
        return x_first ? (theta == kWNext || theta == kWFarAfter)
                       : (theta == kWPrev || theta == kWFarBefore);
      default:
        throw std::invalid_argument("tree symbol in a word entailment");
    }
  }
  switch (s) {
    case NavSym::Child:
      return x_first ? theta == kTDown : theta == kTUp;
    case NavSym::Desc:
      return x_first ? (theta == kTDown || theta == kTDownFar)
                     : (theta == kTUp || theta == kTUpFar);
    case NavSym::NextSib:
      return x_first ? theta == kTRight : theta == kTLeft;
    case NavSym::FollSib:
      return x_first ? (theta == kTRight || theta == kTRightFar)
                     : (theta == kTLeft || theta == kTLeftFar);
    default:
      throw std::invalid_argument("word symbol in a tree entailment");
  }
}

}  // namespace

bool qf_truth_under(const FormulaPtr& f, OneType alpha, OneType beta, int theta,
                    NavKind kind, const Signature& sig) {
  switch (f->kind) {
    case NodeKind::UnaryAtom: {
      int idx = sig.index_of(f->pred);
      if (idx < 0) throw std::invalid_argument("unknown predicate " + f->pred);
      OneType t = f->var == Var::X ? alpha : beta;
      return (t >> idx) & 1u;
    }
    case NodeKind::NavAtom: {
      if (f->var == f->var2) {
        // Same-element pair: only the reflexive order relation holds.
        return kind == NavKind::Word && f->nav == NavSym::Leq;
      }
      return nav_truth(kind, theta, f->nav, f->var == Var::X);
    }
    case NodeKind::Equality:
      if (f->var == f->var2) return true;
      return theta == 0;  // the equality order formula has index 0 in both kinds
    case NodeKind::Not:
      return !qf_truth_under(f->lhs, alpha, beta, theta, kind, sig);
    case NodeKind::And:
      return qf_truth_under(f->lhs, alpha, beta, theta, kind, sig) &&
             qf_truth_under(f->rhs, alpha, beta, theta, kind, sig);
    case NodeKind::Or:
      return qf_truth_under(f->lhs, alpha, beta, theta, kind, sig) ||
             qf_truth_under(f->rhs, alpha, beta, theta, kind, sig);
    case NodeKind::Implies:
      return !qf_truth_under(f->lhs, alpha, beta, theta, kind, sig) ||
             qf_truth_under(f->rhs, alpha, beta, theta, kind, sig);
    case NodeKind::Iff:
      return qf_truth_under(f->lhs, alpha, beta, theta, kind, sig) ==
             qf_truth_under(f->rhs, alpha, beta, theta, kind, sig);
    default:
      throw std::invalid_argument("entailment matrices must be quantifier-free");
  }
}

const FormulaPtr& CompiledNF::matrix(size_t idx) const {
  if (idx == 0) return chi;
  if (idx <= chi_list.size()) return chi_list[idx - 1];
  return mods[idx - 1 - chi_list.size()].psi;
}

bool CompiledNF::entails(size_t idx, int theta, OneType alpha, OneType beta) const {
  uint64_t key = (((static_cast<uint64_t>(idx) * 16 + static_cast<uint64_t>(theta)) << 25 |
                   alpha)
                  << 25) |
                 beta;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  bool v = qf_truth_under(matrix(idx), alpha, beta, theta, kind, sig);
  memo_.emplace(key, v);
  return v;
}

CompiledNF compile_nf(const NormalFormFormula& nf, size_t max_onetypes) {
  CompiledNF out;
  out.sig = nf.extended_sig;
  out.kind = nf.extended_sig.nav;
  out.chi = nf.chi;
  out.chi_list = nf.chi_list;
  for (const auto& m : nf.mod_list) {
    if (m.l >= (BigInt(1) << 32))
      throw ResourceError("modulus " + m.l.str() + " exceeds the solver limit of 2^32");
    if (m.cmp == Cmp::Eq)
      throw std::invalid_argument("normal forms may not carry '=' comparisons");
    CompiledNF::Mod cm;
    cm.geq = m.cmp == Cmp::Geq;
    cm.k = m.k.convert_to<uint64_t>();
    cm.l = m.l.convert_to<uint64_t>();
    cm.psi = m.psi;
    out.moduli.push_back(cm.l);
    out.mods.push_back(std::move(cm));
  }
  out.n_types = enumerate_one_types(nf.extended_sig, max_onetypes).size();
  return out;
}

bool is_phi_consistent(const FullType& t, const CompiledNF& nf) {
  if (t.moduli != nf.moduli)
    throw std::invalid_argument("full type and normal form have different moduli");
  OneType alpha = t.self_type();
  int thetas = theta_count(t.kind);
  // (1) no pair may violate the universal matrix
  for (int th = 0; th < thetas; ++th)
    for (size_t b = 0; b < t.comp[th].cells.size(); ++b)
      if (!t.comp[th].cells[b].is_zero() &&
          !nf.entails(0, th, alpha, static_cast<OneType>(b)))
        return false;
  // (2) every existential conjunct needs a witnessing nonzero cell
  for (size_t i = 0; i < nf.chi_list.size(); ++i) {
    bool found = false;
    for (int th = 0; th < thetas && !found; ++th)
      for (size_t b = 0; b < t.comp[th].cells.size() && !found; ++b)
        if (!t.comp[th].cells[b].is_zero() &&
            nf.entails(1 + i, th, alpha, static_cast<OneType>(b)))
          found = true;
    if (!found) return false;
  }
  // (3) counting conjuncts: residues of entailing cells must sum right
  for (size_t j = 0; j < nf.mods.size(); ++j) {
    const auto& mod = nf.mods[j];
    size_t idx = 1 + nf.chi_list.size() + j;
    uint64_t sum = 0;
    for (int th = 0; th < thetas; ++th)
      for (size_t b = 0; b < t.comp[th].cells.size(); ++b) {
        const CountCell& c = t.comp[th].cells[b];
        if (!c.is_zero() && nf.entails(idx, th, alpha, static_cast<OneType>(b)))
          sum = (sum + c.res[j]) % mod.l;
      }
    if (mod.geq ? sum < mod.k : sum > mod.k) return false;
  }
  return true;
}

BigInt model_bound(const NormalFormFormula& nf) {
  BigInt base = 2;
  for (const auto& m : nf.mod_list) base *= m.l;
  size_t p = nf.extended_sig.preds.size();
  BigInt alphas = BigInt(1) << p;
  BigInt exponent = BigInt(theta_count(nf.extended_sig.nav)) * alphas;
  return boost::multiprecision::pow(base, exponent.convert_to<unsigned>());
}

}  // namespace fomod
