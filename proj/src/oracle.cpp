#include "fomod/oracle.hpp"

#include <thread>

namespace fomod {

namespace {

// Advances a base-(2^p) odometer over `digits` label slots; returns false
// after the last combination.
bool next_labeling(std::vector<uint64_t>& labels, uint64_t n_types) {
  for (size_t i = labels.size(); i-- > 0;) {
    if (++labels[i] < n_types) return true;
    labels[i] = 0;
  }
  return false;
}

std::vector<LabelMask> to_masks(const std::vector<uint64_t>& labels) {
  std::vector<LabelMask> out;
  out.reserve(labels.size());
  for (uint64_t l : labels) out.emplace_back(l);
  return out;
}

using ShapeList = std::vector<std::vector<int>>;  // parent vectors

// All ordered-forest shapes with m nodes, as parent vectors whose roots
// point at -1; trees of the forest appear left to right.
const ShapeList& forest_shapes(size_t m);

// All ordered-tree shapes with n nodes (parent vectors, root first).
const ShapeList& tree_shapes(size_t n) {
  static std::vector<ShapeList> cache;
  if (cache.size() <= n) cache.resize(n + 1);
  ShapeList& out = cache[n];
  if (!out.empty() || n == 0) return out;
  for (const auto& forest : forest_shapes(n - 1)) {
    std::vector<int> shape(n);
    shape[0] = -1;
    for (size_t i = 0; i < forest.size(); ++i)
      shape[i + 1] = forest[i] < 0 ? 0 : forest[i] + 1;
    out.push_back(std::move(shape));
  }
  return out;
}

const ShapeList& forest_shapes(size_t m) {
  static std::vector<ShapeList> cache;
  if (cache.size() <= m) cache.resize(m + 1);
  ShapeList& out = cache[m];
  if (!out.empty()) return out;
  if (m == 0) {
    out.push_back({});
    return out;
  }
  // First tree takes s nodes, the rest form a smaller forest.
  for (size_t s = 1; s <= m; ++s) {
    const ShapeList& heads = tree_shapes(s);
    const ShapeList& tails = forest_shapes(m - s);
    for (const auto& head : heads) {
      for (const auto& tail : tails) {
        std::vector<int> shape = head;
        shape.reserve(m);
        for (int p : tail) shape.push_back(p < 0 ? -1 : p + static_cast<int>(s));
        out.push_back(std::move(shape));
      }
    }
  }
  return out;
}

BigInt shape_count(size_t n) {
  // Catalan-style: number of ordered trees with n nodes.
  static std::vector<BigInt> cache{1};  // index 0 unused placeholder
  while (cache.size() <= n) {
    size_t k = cache.size();
    if (k == 1) {
      cache.push_back(1);
      continue;
    }
    // trees(k) = forests(k-1); forests via convolution
    BigInt total = 0;
    // forests(m) = sum_s trees(s)*forests(m-s); compute iteratively
    std::vector<BigInt> forests(k, 0);
    forests[0] = 1;
    std::vector<BigInt> trees(k, 0);
    if (k >= 1) trees.resize(k, 0);
    for (size_t i = 1; i < k; ++i) {
      trees[i] = forests[i - 1];
      for (size_t s = 1; s <= i; ++s) forests[i] += trees[s] * forests[i - s];
    }
    total = forests[k - 1];
    cache.push_back(total);
  }
  return cache[n];
}

}  // namespace

void enumerate_words(const Signature& sig, size_t max_size,
                     const std::function<bool(const WordModel&)>& visit) {
  uint64_t n_types = uint64_t{1} << sig.preds.size();
  for (size_t n = 1; n <= max_size; ++n) {
    std::vector<uint64_t> labels(n, 0);
    do {
      WordModel m;
      m.positions = to_masks(labels);
      if (!visit(m)) return;
    } while (next_labeling(labels, n_types));
  }
}

void enumerate_trees(const Signature& sig, size_t max_size,
                     const std::function<bool(const TreeModel&)>& visit) {
  uint64_t n_types = uint64_t{1} << sig.preds.size();
  for (size_t n = 1; n <= max_size; ++n) {
    for (const auto& shape : tree_shapes(n)) {
      std::vector<uint64_t> labels(n, 0);
      do {
        if (!visit(tree_from_parents(shape, to_masks(labels)))) return;
      } while (next_labeling(labels, n_types));
    }
  }
}

BigInt count_models(const Signature& sig, NavKind kind, size_t max_size) {
  BigInt n_types = BigInt(1) << sig.preds.size();
  BigInt total = 0;
  for (size_t n = 1; n <= max_size; ++n) {
    BigInt labelings = boost::multiprecision::pow(n_types, static_cast<unsigned>(n));
    total += kind == NavKind::Word ? labelings : shape_count(n) * labelings;
  }
  return total;
}

namespace {

template <typename ModelT>
bool check_batch(const std::vector<ModelT>& batch, const Signature& sig,
                 const FormulaPtr& f, unsigned jobs, size_t* hit_index) {
  if (jobs <= 1 || batch.size() < 2) {
    for (size_t i = 0; i < batch.size(); ++i) {
      if (check_sentence(ModelView(batch[i], sig), f)) {
        *hit_index = i;
        return true;
      }
    }
    return false;
  }
  std::vector<size_t> hits(jobs, batch.size());
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w]() {
      for (size_t i = w; i < batch.size(); i += jobs) {
        if (check_sentence(ModelView(batch[i], sig), f)) {
          hits[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  size_t best = batch.size();
  for (size_t h : hits) best = std::min(best, h);
  if (best == batch.size()) return false;
  // Workers stop at their own first hit, which may not be the global
  // least; rescan the prefix sequentially for the enumeration-least one.
  for (size_t i = 0; i <= best; ++i) {
    if (check_sentence(ModelView(batch[i], sig), f)) {
      *hit_index = i;
      return true;
    }
  }
  *hit_index = best;
  return true;
}

}  // namespace

OracleVerdict oracle_sat(const FormulaPtr& f, const Signature& sig, NavKind kind,
                         size_t max_size, unsigned jobs, uint64_t work_cap) {
  if (count_models(sig, kind, max_size) > work_cap)
    throw ResourceError("bounded enumeration would visit more than " +
                        std::to_string(work_cap) + " models");
  OracleVerdict out;
  out.bound = max_size;
  constexpr size_t kBatch = 1024;
  if (kind == NavKind::Word) {
    std::vector<WordModel> batch;
    auto flush = [&]() -> bool {  // true = found, stop
      size_t idx = 0;
      if (check_batch(batch, sig, f, jobs, &idx)) {
        out.sat = true;
        out.word = batch[idx];
        return true;
      }
      batch.clear();
      return false;
    };
    enumerate_words(sig, max_size, [&](const WordModel& m) {
      batch.push_back(m);
      return batch.size() < kBatch ? true : !flush();
    });
    if (!out.sat && !batch.empty()) flush();
  } else {
    std::vector<TreeModel> batch;
    auto flush = [&]() -> bool {
      size_t idx = 0;
      if (check_batch(batch, sig, f, jobs, &idx)) {
        out.sat = true;
        out.tree = batch[idx];
        return true;
      }
      batch.clear();
      return false;
    };
    enumerate_trees(sig, max_size, [&](const TreeModel& m) {
      batch.push_back(m);
      return batch.size() < kBatch ? true : !flush();
    });
    if (!out.sat && !batch.empty()) flush();
  }
  return out;
}

}  // namespace fomod
