#ifndef SKEWMIX_SCALE_MODELS_HPP
#define SKEWMIX_SCALE_MODELS_HPP

// Constrained estimators for eigen-decomposed component scale matrices
//
//   Omega_i = lambda_i D_i A_i D_i',   |A_i| = 1,
//
// minimizing  sum_i n_i log|Omega_i| + tr(W_i Omega_i^-1)  over the class
// selected by a three-letter model name (volume, shape, orientation), each
// letter being E (equal across components), V (varying) or I (identity).

#include "skewmix/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skewmix {

enum class ScaleModel {
  EII, VII, EEI, VEI, EVI, VVI, EEE, VEE, EVE, VVE, EEV, VEV, EVV, VVV
};

inline constexpr std::array<ScaleModel, 14> kAllScaleModels = {
    ScaleModel::EII, ScaleModel::VII, ScaleModel::EEI, ScaleModel::VEI,
    ScaleModel::EVI, ScaleModel::VVI, ScaleModel::EEE, ScaleModel::VEE,
    ScaleModel::EVE, ScaleModel::VVE, ScaleModel::EEV, ScaleModel::VEV,
    ScaleModel::EVV, ScaleModel::VVV};

/// The ten structures shared with mclust (all but VEE, EVE, VVE, EVV).
inline constexpr std::array<ScaleModel, 10> kMclustScaleModels = {
    ScaleModel::EII, ScaleModel::VII, ScaleModel::EEI, ScaleModel::VEI,
    ScaleModel::EVI, ScaleModel::VVI, ScaleModel::EEE, ScaleModel::EEV,
    ScaleModel::VEV, ScaleModel::VVV};

std::string_view to_string(ScaleModel model) noexcept;

/// Throws InputError for unknown names.
ScaleModel parse_scale_model(std::string_view name);

struct ScaleConstraint {
  char volume;       // lambda_i
  char shape;        // A_i
  char orientation;  // D_i
};

constexpr ScaleConstraint constraint_of(ScaleModel model) noexcept {
  constexpr std::array<ScaleConstraint, 14> table = {{
      {'E', 'I', 'I'}, {'V', 'I', 'I'}, {'E', 'E', 'I'}, {'V', 'E', 'I'},
      {'E', 'V', 'I'}, {'V', 'V', 'I'}, {'E', 'E', 'E'}, {'V', 'E', 'E'},
      {'E', 'V', 'E'}, {'V', 'V', 'E'}, {'E', 'E', 'V'}, {'V', 'E', 'V'},
      {'E', 'V', 'V'}, {'V', 'V', 'V'}}};
  return table[static_cast<std::size_t>(model)];
}

/// Free scale parameters for g components in p dimensions. EVE uses
/// p(p+1)/2 + (g-1)(p-1): one shared volume, a shared orientation with
/// p(p-1)/2 free entries, and g shape matrices with p-1 free entries each.
Index count_scale_params(ScaleModel model, Index g, Index p);

/// Weighted scatter matrices W_i and effective component sizes n_i.
struct ScatterSet {
  std::vector<Matrix> scatters;
  Vector sizes;

  Index components() const noexcept { return sizes.size(); }
  Index dim() const noexcept {
    return scatters.empty() ? 0 : scatters.front().rows();
  }
  double total_size() const { return sizes.sum(); }
  Matrix pooled() const;
};

/// Throws InputError on shape mismatch, asymmetry or non-positive sizes.
void validate(const ScatterSet& scatters);

struct ScaleDecomposition {
  double volume = 1.0;  // lambda_i
  Vector shape;         // diagonal of A_i, product 1
  Matrix orientation;   // D_i, orthogonal

  Matrix reconstruct() const;
};

struct ScaleSolution {
  std::vector<Matrix> omegas;
  std::vector<ScaleDecomposition> parts;
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct ScaleSolveOptions {
  double tol = 1e-8;
  int max_flipflop = 200;
  int max_mm = 500;
  /// Previous iterate; the returned solution never has a larger objective.
  const ScaleSolution* previous = nullptr;
  /// When false, an iterative sub-solver that runs out of iterations returns
  /// its last iterate with converged = false instead of throwing.
  bool throw_on_nonconvergence = true;
};

/// sum_i n_i log|Omega_i| + tr(W_i Omega_i^-1)
double scale_objective(const ScatterSet& scatters,
                       std::span<const Matrix> omegas);

/// Throws SingularScatterError naming the component whose estimate is not
/// positive definite and ConvergenceError when an iterative sub-solver fails.
ScaleSolution solve_scale(ScaleModel model, const ScatterSet& scatters,
                          const ScaleSolveOptions& options = {});

/// Symmetric eigendecomposition with eigenvalues in descending order (stable
/// in the solver's original index order for ties) and each eigenvector signed
/// so its largest-magnitude entry is positive.
void sorted_eigen(const Matrix& m, Vector& values, Matrix& vectors);

}  // namespace skewmix

#endif  // SKEWMIX_SCALE_MODELS_HPP
