#include "skewmix/selection.hpp"

#include "skewmix/em.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace skewmix {
namespace {

double choose2(double x) { return 0.5 * x * (x - 1.0); }

double plogp(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// True when a should be preferred over b.
bool better(const MixtureFit& a, const MixtureFit& b) {
  if (a.bic != b.bic) return a.bic > b.bic;
  if (a.n_params != b.n_params) return a.n_params < b.n_params;
  if (a.components_count() != b.components_count()) {
    return a.components_count() < b.components_count();
  }
  if (a.model != b.model) return to_string(a.model) < to_string(b.model);
  return to_string(a.family) < to_string(b.family);
}

}  // namespace

double bic(double loglik, Index n_params, Index n) {
  if (n < 1) throw InputError("bic needs n >= 1");
  return 2.0 * loglik -
         static_cast<double>(n_params) * std::log(static_cast<double>(n));
}

const MixtureFit& select_best(std::span<const MixtureFit> fits) {
  if (fits.empty()) throw InputError("select_best needs at least one fit");
  const MixtureFit* best = &fits.front();
  for (const auto& f : fits.subspan(1)) {
    if (better(f, *best)) best = &f;
  }
  return *best;
}

Partition Partition::from_labels(std::vector<int> labels) {
  Partition p;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 1) {
      throw InputError("partition label at position " + std::to_string(j + 1) +
                       " is below 1");
    }
    p.k = std::max(p.k, labels[j]);
  }
  p.labels = std::move(labels);
  return p;
}

Matrix contingency(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw InputError("partitions have different lengths");
  }
  Matrix table = Matrix::Zero(a.k, b.k);
  for (Index j = 0; j < a.size(); ++j) {
    table(a.labels[j] - 1, b.labels[j] - 1) += 1.0;
  }
  return table;
}

double ari_from_table(const Matrix& table) {
  const double n = table.sum();
  const double index = table.unaryExpr(&choose2).sum();
  const double rows = table.rowwise().sum().unaryExpr(&choose2).sum();
  const double cols = table.colwise().sum().unaryExpr(&choose2).sum();
  const double total = choose2(n);
  if (total <= 0.0) return 1.0;
  const double expected = rows * cols / total;
  const double max_index = 0.5 * (rows + cols);
  if (max_index == expected) {
    // Both partitions trivial (all-in-one or all-singletons) and equal.
    return index == expected ? 1.0 : 0.0;
  }
  return (index - expected) / (max_index - expected);
}

double ari(const Partition& a, const Partition& b) {
  return ari_from_table(contingency(a, b));
}

MergeTree merge_entropy(const Matrix& resp) {
  MergeTree tree;
  const Index g = resp.cols();
  if (g <= 1) return tree;

  std::vector<Vector> cols;
  std::vector<std::vector<int>> groups;
  for (Index i = 0; i < g; ++i) {
    cols.emplace_back(resp.col(i));
    groups.push_back({static_cast<int>(i) + 1});
  }
  auto entropy_of = [](const Vector& c) {
    return -c.unaryExpr(&plogp).sum();
  };
  auto snapshot = [&](int step, std::pair<int, int> merged) {
    Matrix z(resp.rows(), static_cast<Index>(cols.size()));
    double ent = 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      z.col(static_cast<Index>(c)) = cols[c];
      ent += entropy_of(cols[c]);
    }
    MergeStep s;
    s.step = step;
    s.merged = merged;
    s.labels = Partition::from_labels(map_labels(z));
    s.labels.k = static_cast<int>(cols.size());
    s.entropy = ent;
    s.groups = groups;
    return s;
  };

  tree.steps.push_back(snapshot(0, {0, 0}));
  for (int step = 1; step < g; ++step) {
    std::optional<double> best_drop;
    std::size_t ba = 0;
    std::size_t bb = 1;
    for (std::size_t a = 0; a < cols.size(); ++a) {
      for (std::size_t b = a + 1; b < cols.size(); ++b) {
        const double drop =
            entropy_of(cols[a]) + entropy_of(cols[b]) -
            entropy_of(cols[a] + cols[b]);
        if (!best_drop ||
            drop > *best_drop + 1e-12 * std::max(1.0, std::abs(*best_drop))) {
          best_drop = drop;
          ba = a;
          bb = b;
        }
      }
    }
    cols[ba] += cols[bb];
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(bb));
    groups[ba].insert(groups[ba].end(), groups[bb].begin(), groups[bb].end());
    std::sort(groups[ba].begin(), groups[ba].end());
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bb));
    tree.steps.push_back(snapshot(
        step, {static_cast<int>(ba) + 1, static_cast<int>(bb) + 1}));
  }
  return tree;
}

MergeTree merge_entropy(const MixtureFit& fit) {
  return merge_entropy(fit.responsibilities);
}

std::pair<double, int> best_ari_along(const MergeTree& tree,
                                      const Partition& truth) {
  double best = -std::numeric_limits<double>::infinity();
  int at = -1;
  for (const auto& s : tree.steps) {
    const double v = ari(s.labels, truth);
    if (v > best) {
      best = v;
      at = s.step;
    }
  }
  return {best, at};
}

HandMerge merge_by_hand(const Partition& pred, const Partition& truth) {
  constexpr int kMaxGroups = 12;
  if (pred.k > kMaxGroups) {
    throw InputError("merge_by_hand supports at most 12 predicted groups, got " +
                     std::to_string(pred.k));
  }
  const Matrix table = contingency(pred, truth);
  const int k = pred.k;
  const int max_blocks = std::max(1, truth.k);

  HandMerge best;
  best.best_ari = -std::numeric_limits<double>::infinity();
  std::vector<int> block_of(k, 0);
  std::vector<int> best_blocks;

  auto evaluate = [&](const std::vector<int>& assign, int blocks) {
    Matrix merged = Matrix::Zero(blocks, table.cols());
    for (int c = 0; c < k; ++c) merged.row(assign[c]) += table.row(c);
    const double v = ari_from_table(merged);
    if (v > best.best_ari) {
      best.best_ari = v;
      best_blocks = assign;
    }
  };

  // Restricted growth strings enumerate each set partition once; blocks are
  // numbered by their smallest member.
  std::function<void(int, int)> recurse = [&](int pos, int used) {
    if (pos == k) {
      evaluate(block_of, used);
      return;
    }
    const int limit = std::min(used + 1, max_blocks);
    for (int b = 0; b < limit; ++b) {
      block_of[pos] = b;
      recurse(pos + 1, std::max(used, b + 1));
    }
  };
  if (k > 0) recurse(0, 0);
  if (k > max_blocks) {
    std::vector<int> identity(k);
    for (int c = 0; c < k; ++c) identity[c] = c;
    evaluate(identity, k);
  }

  const int nblocks =
      best_blocks.empty()
          ? 0
          : *std::max_element(best_blocks.begin(), best_blocks.end()) + 1;
  best.blocks.assign(nblocks, {});
  for (int c = 0; c < k; ++c) best.blocks[best_blocks[c]].push_back(c + 1);
  std::vector<int> labels(pred.labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j) {
    labels[j] = best_blocks[pred.labels[j] - 1] + 1;
  }
  best.merged = Partition::from_labels(std::move(labels));
  best.merged.k = nblocks;
  return best;
}

}  // namespace skewmix
