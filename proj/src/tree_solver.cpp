#include "fomod/tree_solver.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <unordered_map>

namespace fomod {

ChildContext derive_child_context(const FullType& parent,
                                  const std::vector<SubtreeSummary>& left,
                                  const std::vector<SubtreeSummary>& right) {
  if (parent.kind != NavKind::Tree)
    throw std::invalid_argument("child contexts are defined for tree types");
  const auto& moduli = parent.moduli;
  size_t n_types = parent.comp[0].cells.size();
  size_t m = moduli.size();
  ChildContext ctx;
  ctx.up = parent.comp[kTEq];
  ctx.up_far = combine(parent.comp[kTUp], parent.comp[kTUpFar], moduli);
  ctx.left = zero_table(n_types, m);
  ctx.left_far = zero_table(n_types, m);
  ctx.right = zero_table(n_types, m);
  ctx.right_far = zero_table(n_types, m);
  if (!left.empty()) {
    ctx.left = singleton_table(n_types, left.back().root, moduli);
    for (size_t i = 0; i + 1 < left.size(); ++i)
      ctx.left_far =
          combine(ctx.left_far, singleton_table(n_types, left[i].root, moduli), moduli);
  }
  if (!right.empty()) {
    ctx.right = singleton_table(n_types, right.front().root, moduli);
    for (size_t i = 1; i < right.size(); ++i)
      ctx.right_far =
          combine(ctx.right_far, singleton_table(n_types, right[i].root, moduli), moduli);
  }
  // Everything unrelated to the child: whatever was unrelated to the parent,
  // the parent's own siblings, and the interiors of the child's siblings.
  ctx.free = parent.comp[kTFree];
  for (int th : {kTLeft, kTLeftFar, kTRight, kTRightFar})
    ctx.free = combine(ctx.free, parent.comp[th], moduli);
  for (const auto& s : left) ctx.free = combine(ctx.free, s.desc, moduli);
  for (const auto& s : right) ctx.free = combine(ctx.free, s.desc, moduli);
  return ctx;
}

namespace {

constexpr size_t kNoOpenDependency = SIZE_MAX;

struct CapHit {
  std::string what;
};

struct ChildSpec {
  OneType root = 0;
  CellTable desc;
};

struct MemoEntry {
  enum class State { InProgress, True, False };
  State state = State::InProgress;
  size_t depth = 0;                 // recursion depth while in progress
  CellTable down, down_far;         // chosen split when state == True
  std::vector<ChildSpec> children;  // witness sequence; empty means leaf
};

struct TreeSearch {
  const CompiledNF& nf;
  uint64_t max_states;
  unsigned max_degree;
  uint64_t explored = 0;
  bool truncated = false;  // the degree cap cut a sequence short somewhere
  size_t depth = 0;
  std::unordered_map<std::string, MemoEntry> memo;

  void charge(const char* what) {
    if (++explored > max_states)
      throw CapHit{std::string("state cap reached while ") + what + " (--max-states)"};
  }
};

void append_table(const CellTable& t, std::string* out) {
  for (const auto& c : t.cells) {
    out->push_back(static_cast<char>(c.flag));
    for (uint64_t r : c.res)
      for (int b = 0; b < 4; ++b) out->push_back(static_cast<char>((r >> (8 * b)) & 0xff));
  }
}

std::string subtree_key(OneType alpha, const CellTable& desc, const ChildContext& ctx) {
  std::string key;
  for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((alpha >> (8 * b)) & 0xff));
  append_table(desc, &key);
  for (const CellTable* t : {&ctx.up, &ctx.up_far, &ctx.left, &ctx.left_far, &ctx.right,
                             &ctx.right_far, &ctx.free})
    append_table(*t, &key);
  return key;
}

FullType assemble(const TreeSearch& s, OneType alpha, const ChildContext& ctx,
                  const CellTable& down, const CellTable& down_far) {
  FullType t = zero_full_type(NavKind::Tree, s.nf.moduli, s.nf.n_types);
  t.comp[kTEq] = singleton_table(s.nf.n_types, alpha, s.nf.moduli);
  t.comp[kTDown] = down;
  t.comp[kTDownFar] = down_far;
  t.comp[kTUp] = ctx.up;
  t.comp[kTUpFar] = ctx.up_far;
  t.comp[kTLeft] = ctx.left;
  t.comp[kTLeftFar] = ctx.left_far;
  t.comp[kTRight] = ctx.right;
  t.comp[kTRightFar] = ctx.right_far;
  t.comp[kTFree] = ctx.free;
  return t;
}

uint64_t flag_mask(const CellTable& t) {
  uint64_t mask = 0;
  for (size_t c = 0; c < t.cells.size(); ++c)
    if (!t.cells[c].is_zero()) mask |= uint64_t{1} << c;
  return mask;
}

// The aggregate of the elements not yet placed: flags are the guessed mask,
// residues whatever remains of `total` after `prefix`. Fails when the guess
// claims a 1-type absent while its residues have not been used up.
bool suffix_table(const CellTable& total, const CellTable& prefix, uint64_t mask,
                  const std::vector<uint64_t>& moduli, CellTable* out) {
  size_t n_types = total.cells.size();
  *out = zero_table(n_types, moduli.size());
  for (size_t c = 0; c < n_types; ++c) {
    bool claimed = (mask >> c) & 1u;
    if (claimed && total.cells[c].is_zero()) return false;
    CountCell& cell = out->cells[c];
    bool all_zero = true;
    for (size_t j = 0; j < moduli.size(); ++j) {
      uint64_t diff =
          (total.cells[c].res[j] + moduli[j] - prefix.cells[c].res[j]) % moduli[j];
      if (claimed) cell.res[j] = diff;
      all_zero = all_zero && diff == 0;
    }
    if (claimed)
      cell.flag = 1;
    else if (!all_zero)
      return false;
  }
  return true;
}

// All cell tables whose support stays inside `allow`, in mixed-radix order
// with the all-zero table first; stops early when the callback returns false.
bool for_each_table(TreeSearch& s, const char* what, const std::vector<bool>& allow,
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

// Tables shared by every child of one node under one split.
struct SeqEnv {
  const CellTable& t_s;  // required aggregate of the children's singletons
  const CellTable& t_d;  // required aggregate of the children's interiors
  CellTable up, up_far;  // context rows every child inherits
  CellTable fix_free;    // the split-independent part of every child's free row
};

// Rolling window over a left-to-right child sequence. The guessed masks say
// which 1-types must still show up among later children (as roots, and as
// interior flags); everything else is exact prefix bookkeeping.
struct SeqState {
  CellTable before_far;      // singletons of children 1 .. i-2
  bool has_prev2 = false;
  OneType prev2 = 0;         // root of child i-1
  OneType prev1 = 0;         // root of child i
  CellTable interior_before; // interiors of children 1 .. i-1
  CellTable interior_prev;   // interior of child i
  uint64_t pending_roots = 0;
  uint64_t pending_desc = 0;
  unsigned length = 1;       // i; not part of the dedup key
};

std::string seq_key(const SeqState& st) {
  std::string key;
  key.push_back(st.has_prev2 ? 1 : 0);
  for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((st.prev2 >> (8 * b)) & 0xff));
  for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((st.prev1 >> (8 * b)) & 0xff));
  append_table(st.before_far, &key);
  append_table(st.interior_before, &key);
  append_table(st.interior_prev, &key);
  for (int b = 0; b < 8; ++b)
    key.push_back(static_cast<char>((st.pending_roots >> (8 * b)) & 0xff));
  for (int b = 0; b < 8; ++b)
    key.push_back(static_cast<char>((st.pending_desc >> (8 * b)) & 0xff));
  return key;
}

std::pair<bool, size_t> feasible(TreeSearch& s, OneType alpha, const CellTable& desc,
                                 const ChildContext& ctx);

// 1-types that may appear anywhere inside a subtree rooted at a `root`-typed
// node without breaking the universal matrix.
std::vector<bool> interior_allowance(const TreeSearch& s, OneType root) {
  std::vector<bool> allow(s.nf.n_types);
  for (size_t c = 0; c < s.nf.n_types; ++c)
    allow[c] = s.nf.entails(0, kTDown, root, static_cast<OneType>(c)) ||
               s.nf.entails(0, kTDownFar, root, static_cast<OneType>(c));
  return allow;
}

// Searches for an ordered child sequence realizing the split aggregates,
// breadth-first over rolling-window states with a visited set. Feasibility
// of each child is checked as soon as its right neighbour is fixed; the
// last child is checked when the sequence closes.
bool sequence_search(TreeSearch& s, const SeqEnv& env, unsigned max_degree,
                     std::vector<ChildSpec>* witness, size_t* min_touch) {
  const auto& moduli = s.nf.moduli;
  size_t n_types = s.nf.n_types;
  CellTable zero = zero_table(n_types, moduli.size());

  auto touch = [&](size_t t) { *min_touch = std::min(*min_touch, t); };

  // (state, key of predecessor state) — enough to replay the sequence.
  std::unordered_map<std::string, std::pair<SeqState, std::string>> seen;
  std::deque<std::string> queue;

  auto admit = [&](SeqState st, const std::string& parent) {
    std::string key = seq_key(st);
    auto [it, fresh] = seen.emplace(key, std::make_pair(std::move(st), parent));
    if (!fresh) return;
    s.charge("arranging child sequences");
    queue.push_back(it->first);
  };

  auto prefix_singletons = [&](const SeqState& st) {
    CellTable p = st.before_far;
    if (st.has_prev2) p = combine(p, singleton_table(n_types, st.prev2, moduli), moduli);
    return combine(p, singleton_table(n_types, st.prev1, moduli), moduli);
  };

  uint64_t roots0 = flag_mask(env.t_s);
  uint64_t desc0 = flag_mask(env.t_d);

  // Seed: every choice of the leftmost child and of the pending-work masks.
  for (size_t t = 0; t < n_types; ++t) {
    if (!((roots0 >> t) & 1u)) continue;
    std::vector<bool> allow = interior_allowance(s, static_cast<OneType>(t));
    for (size_t c = 0; c < n_types; ++c)
      allow[c] = allow[c] && ((desc0 >> c) & 1u);
    for_each_table(s, "arranging child sequences", allow, [&](const CellTable& interior) {
      uint64_t overlap = desc0 & flag_mask(interior);
      for (uint64_t f : {roots0 & ~(uint64_t{1} << t), roots0}) {
        uint64_t drop = overlap;
        for (;;) {
          SeqState st;
          st.before_far = zero;
          st.interior_before = zero;
          st.prev1 = static_cast<OneType>(t);
          st.interior_prev = interior;
          st.pending_roots = f;
          st.pending_desc = desc0 & ~drop;
          admit(std::move(st), "");
          if (drop == 0) break;
          drop = (drop - 1) & overlap;
        }
      }
      return true;
    });
  }

  while (!queue.empty()) {
    std::string key = std::move(queue.front());
    queue.pop_front();
    const SeqState st = seen.at(key).first;  // copy: seen grows below
    CellTable prefix = prefix_singletons(st);
    CellTable interiors = combine(st.interior_before, st.interior_prev, moduli);

    // Close the sequence here?
    if (st.pending_roots == 0 && st.pending_desc == 0 && prefix == env.t_s &&
        interiors == env.t_d) {
      ChildContext last;
      last.up = env.up;
      last.up_far = env.up_far;
      last.left = st.has_prev2 ? singleton_table(n_types, st.prev2, moduli) : zero;
      last.left_far = st.before_far;
      last.right = zero;
      last.right_far = zero;
      last.free = combine(env.fix_free, st.interior_before, moduli);
      auto [ok, t] = feasible(s, st.prev1, st.interior_prev, last);
      touch(t);
      if (ok) {
        std::vector<ChildSpec> specs;
        for (std::string at = key; !at.empty();) {
          const auto& entry = seen.at(at);
          specs.push_back(ChildSpec{entry.first.prev1, entry.first.interior_prev});
          at = entry.second;
        }
        std::reverse(specs.begin(), specs.end());
        *witness = std::move(specs);
        return true;
      }
    }

    if (st.length >= max_degree) {
      s.truncated = true;
      continue;
    }

    for (size_t t = 0; t < n_types; ++t) {
      if (!((st.pending_roots >> t) & 1u)) continue;
      CellTable next_prefix =
          combine(prefix, singleton_table(n_types, static_cast<OneType>(t), moduli), moduli);
      std::vector<bool> allow = interior_allowance(s, static_cast<OneType>(t));
      for (size_t c = 0; c < n_types; ++c)
        allow[c] = allow[c] && ((st.pending_desc >> c) & 1u);
      for_each_table(s, "arranging child sequences", allow, [&](const CellTable& interior) {
        CellTable next_interiors = combine(interiors, interior, moduli);
        uint64_t overlap = st.pending_desc & flag_mask(interior);
        for (uint64_t f : {st.pending_roots & ~(uint64_t{1} << t), st.pending_roots}) {
          CellTable right_far;
          if (!suffix_table(env.t_s, next_prefix, f, moduli, &right_far)) continue;
          uint64_t drop = overlap;
          for (;;) {
            uint64_t g = st.pending_desc & ~drop;
            CellTable free_suffix;
            if (suffix_table(env.t_d, next_interiors, g, moduli, &free_suffix)) {
              // The previous child now has both neighbours: check it.
              ChildContext prev;
              prev.up = env.up;
              prev.up_far = env.up_far;
              prev.left = st.has_prev2 ? singleton_table(n_types, st.prev2, moduli) : zero;
              prev.left_far = st.before_far;
              prev.right = singleton_table(n_types, static_cast<OneType>(t), moduli);
              prev.right_far = right_far;
              prev.free = combine(combine(env.fix_free, st.interior_before, moduli),
                                  combine(interior, free_suffix, moduli), moduli);
              auto [ok, touched] = feasible(s, st.prev1, st.interior_prev, prev);
              touch(touched);
              if (ok) {
                SeqState next;
                next.before_far =
                    st.has_prev2
                        ? combine(st.before_far,
                                  singleton_table(n_types, st.prev2, moduli), moduli)
                        : st.before_far;
                next.has_prev2 = true;
                next.prev2 = st.prev1;
                next.prev1 = static_cast<OneType>(t);
                next.interior_before =
                    combine(st.interior_before, st.interior_prev, moduli);
                next.interior_prev = interior;
                next.pending_roots = f;
                next.pending_desc = g;
                next.length = st.length + 1;
                admit(std::move(next), key);
              }
            }
            if (drop == 0) break;
            drop = (drop - 1) & overlap;
          }
        }
        return true;
      });
    }
  }
  return false;
}

std::pair<bool, size_t> feasible(TreeSearch& s, OneType alpha, const CellTable& desc,
                                 const ChildContext& ctx) {
  std::string key = subtree_key(alpha, desc, ctx);
  auto it = s.memo.find(key);
  if (it != s.memo.end()) {
    switch (it->second.state) {
      case MemoEntry::State::True: return {true, kNoOpenDependency};
      case MemoEntry::State::False: return {false, kNoOpenDependency};
      case MemoEntry::State::InProgress: return {false, it->second.depth};
    }
  }
  s.charge("growing subtrees");
  size_t my_depth = ++s.depth;
  MemoEntry& entry = s.memo[key];  // value references survive rehashing
  entry.state = MemoEntry::State::InProgress;
  entry.depth = my_depth;

  const auto& moduli = s.nf.moduli;
  size_t n_types = s.nf.n_types;
  size_t m = moduli.size();
  bool ok = false;
  size_t min_touch = kNoOpenDependency;
  CellTable win_down, win_down_far;
  std::vector<ChildSpec> win_children;

  if (desc.all_zero()) {
    ok = is_phi_consistent(assemble(s, alpha, ctx, zero_table(n_types, m),
                                    zero_table(n_types, m)),
                           s.nf);
  } else {
    // Ways to split one descendant cell between the child row and the
    // deeper row, as licensed by the universal matrix.
    struct SplitOption {
      CountCell down, deep;
    };
    std::vector<std::vector<SplitOption>> options(n_types);
    bool splittable = true;
    for (size_t c = 0; c < n_types && splittable; ++c) {
      const CountCell& cell = desc.cells[c];
      if (cell.is_zero()) {
        options[c].push_back({zero_cell(m), zero_cell(m)});
        continue;
      }
      bool down_ok = s.nf.entails(0, kTDown, alpha, static_cast<OneType>(c));
      bool deep_ok = s.nf.entails(0, kTDownFar, alpha, static_cast<OneType>(c));
      if (down_ok) options[c].push_back({cell, zero_cell(m)});
      if (deep_ok) options[c].push_back({zero_cell(m), cell});
      if (down_ok && deep_ok) {
        std::vector<uint64_t> r(m, 0);
        for (;;) {
          CountCell down, deep;
          down.flag = deep.flag = 1;
          down.res = r;
          deep.res.resize(m);
          for (size_t j = 0; j < m; ++j)
            deep.res[j] = (cell.res[j] + moduli[j] - r[j]) % moduli[j];
          options[c].push_back({std::move(down), std::move(deep)});
          size_t pos = m;
          while (pos > 0) {
            if (++r[pos - 1] < moduli[pos - 1]) break;
            r[pos - 1] = 0;
            --pos;
          }
          if (pos == 0) break;
        }
      }
      splittable = !options[c].empty();
    }

    if (splittable) {
      std::vector<size_t> pick(n_types, 0);
      for (;;) {
        s.charge("splitting descendant obligations");
        CellTable t_s = zero_table(n_types, m), t_d = zero_table(n_types, m);
        for (size_t c = 0; c < n_types; ++c) {
          t_s.cells[c] = options[c][pick[c]].down;
          t_d.cells[c] = options[c][pick[c]].deep;
        }
        if (!t_s.all_zero()) {
          FullType ft = assemble(s, alpha, ctx, t_s, t_d);
          if (is_phi_consistent(ft, s.nf)) {
            SeqEnv env{t_s, t_d, singleton_table(n_types, alpha, moduli),
                       combine(ctx.up, ctx.up_far, moduli), ctx.free};
            for (const CellTable* extra : {&ctx.left, &ctx.left_far, &ctx.right,
                                           &ctx.right_far})
              env.fix_free = combine(env.fix_free, *extra, moduli);
            if (sequence_search(s, env, s.max_degree, &win_children, &min_touch)) {
              ok = true;
              win_down = std::move(t_s);
              win_down_far = std::move(t_d);
              break;
            }
          }
        }
        size_t pos = n_types;
        while (pos > 0) {
          if (++pick[pos - 1] < options[pos - 1].size()) break;
          pick[pos - 1] = 0;
          --pos;
        }
        if (pos == 0) break;
      }
    }
  }

  --s.depth;
  if (ok) {
    entry.state = MemoEntry::State::True;
    entry.down = std::move(win_down);
    entry.down_far = std::move(win_down_far);
    entry.children = std::move(win_children);
    return {true, kNoOpenDependency};
  }
  if (min_touch >= my_depth) {
    // Nothing still open above this call was consulted: the failure stands
    // on its own and can be remembered.
    entry.state = MemoEntry::State::False;
    return {false, kNoOpenDependency};
  }
  s.memo.erase(key);
  return {false, min_touch};
}

void build_witness(TreeSearch& s, OneType alpha, const CellTable& desc,
                   const ChildContext& ctx, int parent, TreeModel* out) {
  auto it = s.memo.find(subtree_key(alpha, desc, ctx));
  if (it == s.memo.end() || it->second.state != MemoEntry::State::True)
    throw std::logic_error("tree witness reconstruction lost a memo entry");
  // Copy what we need: recursive calls only read the memo, but stay safe.
  CellTable down = it->second.down, down_far = it->second.down_far;
  std::vector<ChildSpec> children = it->second.children;

  int idx = static_cast<int>(out->nodes.size());
  TreeNode node;
  node.labels = alpha;
  node.parent = parent;
  out->nodes.push_back(node);
  if (parent >= 0) out->nodes[parent].children.push_back(idx);
  if (children.empty()) return;

  FullType ft = assemble(s, alpha, ctx, down, down_far);
  std::vector<SubtreeSummary> summaries;
  summaries.reserve(children.size());
  for (const auto& spec : children) summaries.push_back({spec.root, spec.desc});
  for (size_t i = 0; i < children.size(); ++i) {
    std::vector<SubtreeSummary> left(summaries.begin(), summaries.begin() + i);
    std::vector<SubtreeSummary> right(summaries.begin() + i + 1, summaries.end());
    ChildContext cctx = derive_child_context(ft, left, right);
    build_witness(s, children[i].root, children[i].desc, cctx, idx, out);
  }
}

}  // namespace

SolveResult solve_tree(const NormalFormFormula& nf, const SolveOptions& opts) {
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
    if (compiled.n_types > 64)
      throw ResourceError("child-sequence bookkeeping supports at most 64 one-types");
  } catch (const ResourceError& e) {
    result.note = e.what();
    return finish(Verdict::Inconclusive);
  }
  if (compiled.kind != NavKind::Tree)
    throw std::invalid_argument("solve_tree needs a tree-signature normal form");

  TreeSearch search{compiled, opts.max_states, opts.max_degree, 0, false, 0, {}};
  size_t n_types = compiled.n_types;
  size_t m = compiled.moduli.size();
  ChildContext root_ctx;
  for (CellTable* t : {&root_ctx.up, &root_ctx.up_far, &root_ctx.left, &root_ctx.left_far,
                       &root_ctx.right, &root_ctx.right_far, &root_ctx.free})
    *t = zero_table(n_types, m);

  try {
    for (size_t alpha = 0; alpha < n_types; ++alpha) {
      std::vector<bool> allow = interior_allowance(search, static_cast<OneType>(alpha));
      bool found = false;
      CellTable found_desc;
      for_each_table(search, "enumerating root obligations", allow,
                     [&](const CellTable& desc) {
                       auto [ok, touched] = feasible(search, static_cast<OneType>(alpha),
                                                     desc, root_ctx);
                       (void)touched;
                       if (!ok) return true;
                       found = true;
                       found_desc = desc;
                       return false;
                     });
      if (found) {
        TreeModel witness;
        build_witness(search, static_cast<OneType>(alpha), found_desc, root_ctx, -1,
                      &witness);
        if (!check_sentence(witness, nf.extended_sig, nf.to_formula()))
          throw std::logic_error("tree solver produced a witness that fails verification");
        result.tree = std::move(witness);
        result.explored = search.explored;
        return finish(Verdict::Sat);
      }
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
  if (search.truncated) {
    result.note = "degree cap reached (--max-degree)";
    return finish(Verdict::Inconclusive);
  }
  return finish(Verdict::Unsat);
}

namespace {

void copy_replacing(const TreeModel& t, int node, int from, int to, int parent,
                    TreeModel* out) {
  if (node == from) node = to;
  int idx = static_cast<int>(out->nodes.size());
  TreeNode fresh;
  fresh.labels = t.nodes[node].labels;
  fresh.parent = parent;
  out->nodes.push_back(fresh);
  if (parent >= 0) out->nodes[parent].children.push_back(idx);
  for (int c : t.nodes[node].children) copy_replacing(t, c, from, to, idx, out);
}

void copy_dropping(const TreeModel& t, int node, const std::vector<bool>& dropped,
                   int parent, TreeModel* out) {
  int idx = static_cast<int>(out->nodes.size());
  TreeNode fresh;
  fresh.labels = t.nodes[node].labels;
  fresh.parent = parent;
  out->nodes.push_back(fresh);
  if (parent >= 0) out->nodes[parent].children.push_back(idx);
  for (int c : t.nodes[node].children)
    if (!dropped[c]) copy_dropping(t, c, dropped, idx, out);
}

bool is_proper_descendant(const TreeModel& t, int anc, int node) {
  for (int at = t.nodes[node].parent; at >= 0; at = t.nodes[at].parent)
    if (at == anc) return true;
  return false;
}

}  // namespace

TreeModel shrink_tree(const TreeModel& model, const NormalFormFormula& nf) {
  FormulaPtr sentence = nf.to_formula();
  if (!check_sentence(model, nf.extended_sig, sentence))
    throw std::invalid_argument("model does not satisfy the normal form");
  std::vector<uint64_t> moduli;
  for (const auto& md : nf.mod_list) moduli.push_back(md.l.convert_to<uint64_t>());

  TreeModel cur = model;
  for (;;) {
    ModelView view(cur, nf.extended_sig);
    std::vector<std::string> keys;
    keys.reserve(cur.size());
    for (int v = 0; v < view.size(); ++v)
      keys.push_back(full_type_key(realized_full_type(view, v, moduli)));

    bool committed = false;

    // Path surgery: an ancestor's subtree gives way to a descendant's.
    for (size_t u = 0; u < cur.size() && !committed; ++u)
      for (size_t v = u + 1; v < cur.size() && !committed; ++v) {
        if (keys[u] != keys[v]) continue;
        if (!is_proper_descendant(cur, static_cast<int>(u), static_cast<int>(v))) continue;
        TreeModel shorter;
        copy_replacing(cur, 0, static_cast<int>(u), static_cast<int>(v), -1, &shorter);
        if (!check_sentence(shorter, nf.extended_sig, sentence)) continue;
        cur = std::move(shorter);
        committed = true;
      }
    if (committed) continue;

    // Sibling surgery: cut everything between two look-alike children,
    // keeping the left one.
    for (size_t p = 0; p < cur.size() && !committed; ++p) {
      const auto& kids = cur.nodes[p].children;
      for (size_t i = 0; i < kids.size() && !committed; ++i)
        for (size_t j = kids.size(); j-- > i + 1 && !committed;) {
          if (keys[kids[i]] != keys[kids[j]]) continue;
          std::vector<bool> dropped(cur.size(), false);
          for (size_t k = i + 1; k <= j; ++k) dropped[kids[k]] = true;
          TreeModel shorter;
          copy_dropping(cur, 0, dropped, -1, &shorter);
          if (!check_sentence(shorter, nf.extended_sig, sentence)) continue;
          cur = std::move(shorter);
          committed = true;
        }
    }
    if (!committed) return cur;
  }
}

}  // namespace fomod
