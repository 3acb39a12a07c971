#ifndef SKEWMIX_SELECTION_HPP
#define SKEWMIX_SELECTION_HPP

#include "skewmix/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace skewmix {

struct MixtureFit;

/// 2 loglik - n_params log n; larger is better.
double bic(double loglik, Index n_params, Index n);

/// Fit with the largest BIC. Ties go to fewer parameters, then fewer
/// components, then the alphabetically earlier model name. Throws InputError
/// on an empty collection.
const MixtureFit& select_best(std::span<const MixtureFit> fits);

/// A hard partition with labels in 1..k.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  /// k is taken as the largest label; throws InputError on labels < 1.
  static Partition from_labels(std::vector<int> labels);
  Index size() const noexcept { return static_cast<Index>(labels.size()); }
};

/// k_a x k_b table of co-occurrence counts.
Matrix contingency(const Partition& a, const Partition& b);

/// Adjusted Rand index computed from a contingency table of counts.
double ari_from_table(const Matrix& table);

/// Adjusted Rand index; throws InputError when lengths differ.
double ari(const Partition& a, const Partition& b);

struct MergeStep {
  int step = 0;                   // number of merges performed so far
  std::pair<int, int> merged{0, 0};  // 1-based groups joined at this step
  Partition labels;               // MAP labels of the merged solution
  double entropy = 0.0;           // -sum z log z after this step
  std::vector<std::vector<int>> groups;  // original components per group
};

struct MergeTree {
  std::vector<MergeStep> steps;  // steps[s] has g - s groups
};

/// Greedy entropy merging: at each step joins the pair of columns whose sum
/// gives the largest drop in -sum_j sum_i z_ij log z_ij; ties go to the
/// lexicographically smallest pair. A single-column input yields an empty
/// tree.
MergeTree merge_entropy(const Matrix& responsibilities);
MergeTree merge_entropy(const MixtureFit& fit);

/// Largest ARI against truth over the steps of a merge tree, with the step.
std::pair<double, int> best_ari_along(const MergeTree& tree,
                                      const Partition& truth);

struct HandMerge {
  Partition merged;
  double best_ari = 0.0;
  std::vector<std::vector<int>> blocks;  // 1-based predicted groups per block
};

/// Exhaustive column merging of pred against known truth: every set partition
/// of pred's groups into at most truth.k blocks, plus the unmerged partition.
/// Requires true labels, so it is an evaluation device only. Throws
/// InputError when pred.k > 12.
HandMerge merge_by_hand(const Partition& pred, const Partition& truth);

}  // namespace skewmix

#endif  // SKEWMIX_SELECTION_HPP
