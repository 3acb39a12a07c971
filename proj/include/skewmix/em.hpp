#ifndef SKEWMIX_EM_HPP
#define SKEWMIX_EM_HPP

#include "skewmix/distributions.hpp"
#include "skewmix/scale_models.hpp"
#include "skewmix/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skewmix {

// Gaussian and t are the zero-skewness members of the skew-normal and skew-t
// families; they share the engine with the skewness update switched off.
enum class Family { gaussian, t, skew_normal, skew_t };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);

constexpr bool has_skew(Family f) noexcept {
  return f == Family::skew_normal || f == Family::skew_t;
}
constexpr bool has_dof(Family f) noexcept {
  return f == Family::t || f == Family::skew_t;
}

enum class InitStrategy { kmeans, random_posterior, uniform, given_labels };

std::string_view to_string(InitStrategy s) noexcept;
InitStrategy parse_init_strategy(std::string_view name);

/// Label value marking an observation without a known class.
inline constexpr int kUnknownLabel = 0;

struct FitConfig {
  int max_iter = 1000;
  double tol = 1e-5;  // Aitken asymptotic-estimate tolerance
  int n_starts = 10;
  InitStrategy init = InitStrategy::kmeans;
  std::uint64_t rng_seed = 1;
  double dof_lo = kDofMin;
  double dof_hi = kDofMax;
  double dof_init = 50.0;
  bool constrain_dof_equal = false;
  /// Labels 1..g used by InitStrategy::given_labels.
  std::vector<int> init_labels;
  /// Latent moments are skipped for responsibilities below this value.
  double latent_cutoff = 1e-10;
  ScaleSolveOptions scale_options{.throw_on_nonconvergence = false};

  void validate() const;
};

/// Outcome of one EM start within a fit.
struct StartRecord {
  int start = 0;
  double loglik = 0.0;  // NaN when the start failed
  bool converged = false;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string error;  // empty on success
};

struct MixtureFit {
  Vector weights;
  std::vector<ComponentParams> components;
  Matrix responsibilities;  // n x g
  std::vector<double> loglik_trace;
  double loglik = 0.0;
  double bic = 0.0;
  ScaleModel model = ScaleModel::VVV;
  Family family = Family::skew_t;
  bool converged = false;
  Index n_params = 0;
  Index n_obs = 0;
  int iterations = 0;
  int start = 0;
  std::vector<std::string> warnings;
  std::vector<ScaleDecomposition> scale_parts;
  std::vector<StartRecord> starts;

  Index components_count() const noexcept { return weights.size(); }
};

/// Per-(observation, component) latent moments stored as n x g planes.
struct LatentTable {
  Matrix e_w;
  Matrix e_wu;
  Matrix e_wu2;
  Matrix e_logw;

  LatentMoments at(Index j, Index i) const {
    return {e_w(j, i), e_wu(j, i), e_wu2(j, i), e_logw(j, i)};
  }
};

struct EStepResult {
  Matrix responsibilities;
  LatentTable latents;
  double loglik = 0.0;
};

/// Posterior responsibilities, latent moments and the observed-data log-
/// likelihood. Rows with known labels (1..g) are fixed to one-hot and
/// contribute log(pi_l f_l(y)) instead of the mixture density. Latents are
/// left at their prior values where the responsibility is below
/// latent_cutoff. Throws NumericalError naming (row, component) on NaN.
EStepResult e_step(const Matrix& data, const Vector& weights,
                   const std::vector<ComponentParams>& components,
                   const std::vector<int>& known_labels = {},
                   double latent_cutoff = 0.0);

EStepResult e_step(const Matrix& data, const MixtureFit& fit);

struct MStepResult {
  Vector weights;
  std::vector<ComponentParams> components;
  ScaleSolution scale;
  std::vector<std::string> warnings;
};

/// Raised when a component's effective size drops below p + 1.
class CollapseError : public NumericalError {
 public:
  CollapseError(const std::string& what, Index component, int start = -1)
      : NumericalError(what), component_(component), start_(start) {}
  Index component() const noexcept { return component_; }
  int start() const noexcept { return start_; }

 private:
  Index component_;
  int start_;
};

/// One M-step. `previous` supplies the current dof values and a warm start for
/// iterative scale solvers; it may be null.
MStepResult m_step(const Matrix& data, const Matrix& responsibilities,
                   const LatentTable& latents, ScaleModel model, Family family,
                   const FitConfig& config,
                   const MStepResult* previous = nullptr);

/// Initial responsibilities (n x g). k-means keeps the best of
/// kmeans_restarts runs by within-cluster sum of squares.
Matrix initialize(const Matrix& data, Index g, InitStrategy strategy,
                  std::uint64_t seed, const std::vector<int>& labels = {},
                  int kmeans_restarts = 10);

/// Parameters implied by a responsibility matrix: weighted means, constrained
/// scales from weighted covariances, skewness 0.1 * sign(third moment) and
/// dof_init for families with these parameters.
MStepResult initial_parameters(const Matrix& data, const Matrix& responsibilities,
                               ScaleModel model, Family family,
                               const FitConfig& config);

/// (g - 1) + g p locations [+ g p skewness] [+ g or 1 dof] + scale parameters.
Index count_free_params(ScaleModel model, Family family, Index g, Index p,
                        bool constrain_dof_equal = false);

/// Best of config.n_starts EM runs: converged runs are preferred, then the
/// larger final log-likelihood.
MixtureFit fit(const Matrix& data, Index g, ScaleModel model, Family family,
               const FitConfig& config);

/// Semi-supervised fit. known_labels has n entries, 1..g or kUnknownLabel.
/// Uses uniform initialization for the unlabeled rows unless
/// config.init is given_labels.
MixtureFit classify(const Matrix& data, const std::vector<int>& known_labels,
                    Index g, ScaleModel model, Family family,
                    FitConfig config);

/// MAP labels (1-based); ties go to the lower index.
std::vector<int> map_labels(const MixtureFit& fit);
std::vector<int> map_labels(const Matrix& responsibilities);

/// True when successive Aitken-extrapolated limits (each from three
/// consecutive values) differ by less than tol.
bool aitken_converged(const std::vector<double>& trace, double tol);

/// Lloyd's algorithm with k-means++ seeding, best of `restarts`.
std::vector<int> kmeans_labels(const Matrix& data, Index g, std::uint64_t seed,
                               int restarts = 10);

}  // namespace skewmix

#endif  // SKEWMIX_EM_HPP
