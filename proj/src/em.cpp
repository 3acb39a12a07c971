#include "skewmix/em.hpp"

#include "skewmix/random.hpp"
#include "skewmix/selection.hpp"
#include "skewmix/special.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace skewmix {
namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kRidgeFactor = 1e-8;

void check_data(const Matrix& data) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw InputError("data matrix is empty");
  }
  if (!data.allFinite()) throw InputError("data contains non-finite values");
}

void add_warning(std::vector<std::string>& warnings, const std::string& w) {
  if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
    warnings.push_back(w);
  }
}

// Adds a small ridge to scatter matrices whose condition number exceeds
// kMaxCondition.
void regularize(ScatterSet& set, std::vector<std::string>& warnings) {
  const Index p = set.dim();
  for (Index i = 0; i < set.components(); ++i) {
    Matrix& w = set.scatters[i];
    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly)
            .eigenvalues();
    const double hi = ev.maxCoeff();
    const double lo = ev.minCoeff();
    if (lo > 0.0 && hi / lo <= kMaxCondition) continue;
    const double tr = w.trace();
    if (!(tr > 0.0)) {
      throw SingularScatterError(
          "scatter matrix of component " + std::to_string(i) + " is zero", i);
    }
    w.diagonal().array() += kRidgeFactor * tr / static_cast<double>(p);
    add_warning(warnings, "ridge-regularized ill-conditioned scatter");
  }
}

// Root of log(nu/2) + 1 - digamma(nu/2) + s = 0 on [lo, hi]. The left side
// decreases in nu, so a missing sign change means the optimum is a bound.
double solve_dof(double s, double lo, double hi, bool& clamped) {
  auto f = [s](double nu) {
    return std::log(0.5 * nu) + 1.0 - special::digamma(0.5 * nu) + s;
  };
  const double flo = f(lo);
  const double fhi = f(hi);
  clamped = false;
  if (flo <= 0.0) {
    clamped = true;
    return lo;
  }
  if (fhi >= 0.0) {
    clamped = true;
    return hi;
  }
  boost::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50),
      max_iter);
  return 0.5 * (a + b);
}

Matrix one_hot(const std::vector<int>& labels, Index g) {
  Matrix z = Matrix::Zero(static_cast<Index>(labels.size()), g);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const int l = labels[j];
    if (l < 1 || l > g) {
      throw InputError("label " + std::to_string(l) + " at row " +
                       std::to_string(j + 1) + " outside 1.." +
                       std::to_string(g));
    }
    z(static_cast<Index>(j), l - 1) = 1.0;
  }
  return z;
}

void check_known_labels(const std::vector<int>& labels, Index n, Index g) {
  if (labels.empty()) return;
  if (static_cast<Index>(labels.size()) != n) {
    throw InputError("label vector length does not match the data");
  }
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const int l = labels[j];
    if (l != kUnknownLabel && (l < 1 || l > g)) {
      throw InputError("label " + std::to_string(l) + " at row " +
                       std::to_string(j + 1) + " outside 1.." +
                       std::to_string(g));
    }
  }
}

MixtureFit run_em(const Matrix& data, const Matrix& init_resp, ScaleModel model,
                  Family family, const FitConfig& config,
                  const std::vector<int>& known_labels) {
  const Index g = init_resp.cols();
  const Index p = data.cols();
  MStepResult params =
      initial_parameters(data, init_resp, model, family, config);

  MixtureFit out;
  out.model = model;
  out.family = family;
  out.n_obs = data.rows();
  out.warnings = params.warnings;
  EStepResult e;
  for (int it = 1;; ++it) {
    e = e_step(data, params.weights, params.components, known_labels,
               config.latent_cutoff);
    if (!out.loglik_trace.empty() &&
        e.loglik < out.loglik_trace.back() - 1e-8) {
      add_warning(out.warnings, "log-likelihood decreased");
    }
    out.loglik_trace.push_back(e.loglik);
    if (aitken_converged(out.loglik_trace, config.tol)) {
      out.converged = true;
      break;
    }
    if (it >= config.max_iter) break;
    params = m_step(data, e.responsibilities, e.latents, model, family, config,
                    &params);
    for (const auto& w : params.warnings) add_warning(out.warnings, w);
  }

  out.weights = params.weights;
  out.components = params.components;
  out.responsibilities = std::move(e.responsibilities);
  out.loglik = out.loglik_trace.back();
  out.iterations = static_cast<int>(out.loglik_trace.size());
  out.scale_parts = params.scale.parts;
  out.n_params = count_free_params(model, family, g, p,
                                   config.constrain_dof_equal);
  out.bic = bic(out.loglik, out.n_params, data.rows());
  if (!out.converged) add_warning(out.warnings, "max_iter reached");
  return out;
}

MixtureFit best_of_starts(const Matrix& data, Index g, ScaleModel model,
                          Family family, const FitConfig& config,
                          const std::vector<int>& known_labels) {
  std::optional<MixtureFit> best;
  std::ostringstream diagnostics;
  std::vector<StartRecord> records;
  for (int s = 0; s < config.n_starts; ++s) {
    const std::uint64_t seed = derive_seed(config.rng_seed, s);
    const auto t0 = std::chrono::steady_clock::now();
    StartRecord rec;
    rec.start = s;
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
          .count();
    };
    try {
      // Start 0 takes the best of several k-means runs; later starts use a
      // single seeded run each so that they differ.
      Matrix resp = initialize(data, g, config.init, seed,
                               config.init == InitStrategy::given_labels
                                   ? config.init_labels
                                   : std::vector<int>{},
                               s == 0 ? 10 : 1);
      if (!known_labels.empty()) {
        for (Index j = 0; j < data.rows(); ++j) {
          const int l = known_labels[j];
          if (l == kUnknownLabel) continue;
          resp.row(j).setZero();
          resp(j, l - 1) = 1.0;
        }
      }
      MixtureFit f = run_em(data, resp, model, family, config, known_labels);
      f.start = s;
      rec.loglik = f.loglik;
      rec.converged = f.converged;
      rec.iterations = f.iterations;
      rec.wall_seconds = elapsed();
      const bool take =
          !best || (f.converged && !best->converged) ||
          (f.converged == best->converged && f.loglik > best->loglik);
      if (take) best = std::move(f);
    } catch (const CollapseError& err) {
      diagnostics << "start " << s << ": collapse of component "
                  << err.component() + 1 << " (" << err.what() << "); ";
      rec.error = err.what();
    } catch (const NumericalError& err) {
      diagnostics << "start " << s << ": " << err.what() << "; ";
      rec.error = err.what();
    }
    if (!rec.error.empty()) {
      rec.loglik = std::numeric_limits<double>::quiet_NaN();
      rec.wall_seconds = elapsed();
    }
    records.push_back(std::move(rec));
  }
  if (!best) {
    throw CollapseError("all starts failed: " + diagnostics.str(), -1);
  }
  best->starts = std::move(records);
  return *std::move(best);
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::t: return "t";
    case Family::skew_normal: return "skew-normal";
    case Family::skew_t: return "skew-t";
  }
  return "";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::gaussian, Family::t, Family::skew_normal,
                   Family::skew_t}) {
    if (to_string(f) == name) return f;
  }
  throw InputError("unknown family '" + std::string(name) + "'");
}

std::string_view to_string(InitStrategy s) noexcept {
  switch (s) {
    case InitStrategy::kmeans: return "kmeans";
    case InitStrategy::random_posterior: return "random-posterior";
    case InitStrategy::uniform: return "uniform";
    case InitStrategy::given_labels: return "given-labels";
  }
  return "";
}

InitStrategy parse_init_strategy(std::string_view name) {
  for (InitStrategy s : {InitStrategy::kmeans, InitStrategy::random_posterior,
                         InitStrategy::uniform, InitStrategy::given_labels}) {
    if (to_string(s) == name) return s;
  }
  throw InputError("unknown init strategy '" + std::string(name) + "'");
}

void FitConfig::validate() const {
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (n_starts < 1) throw InputError("n_starts must be at least 1");
  if (!(dof_lo >= kDofMin) || !(dof_hi >= dof_lo)) {
    throw InputError("invalid dof bounds");
  }
}

EStepResult e_step(const Matrix& data, const Vector& weights,
                   const std::vector<ComponentParams>& components,
                   const std::vector<int>& known_labels, double latent_cutoff) {
  const Index n = data.rows();
  const Index g = weights.size();
  if (static_cast<Index>(components.size()) != g) {
    throw InputError("weights and components disagree in length");
  }
  check_known_labels(known_labels, n, g);

  std::vector<ComponentKernel> kernels;
  std::vector<RowStats> stats;
  kernels.reserve(g);
  Matrix logf(n, g);
  for (Index i = 0; i < g; ++i) {
    kernels.emplace_back(components[i]);
    stats.push_back(kernels[i].row_stats(data));
    const double log_pi = std::log(weights(i));
    for (Index j = 0; j < n; ++j) {
      const double v = kernels[i].log_density_at(stats[i].mahalanobis(j),
                                                 stats[i].projection(j));
      if (std::isnan(v)) {
        throw NumericalError("NaN density at observation " +
                             std::to_string(j + 1) + ", component " +
                             std::to_string(i + 1));
      }
      logf(j, i) = log_pi + v;
    }
  }

  EStepResult out;
  out.responsibilities.resize(n, g);
  out.loglik = 0.0;
  for (Index j = 0; j < n; ++j) {
    const int label = known_labels.empty() ? kUnknownLabel : known_labels[j];
    if (label != kUnknownLabel) {
      out.responsibilities.row(j).setZero();
      out.responsibilities(j, label - 1) = 1.0;
      out.loglik += logf(j, label - 1);
      continue;
    }
    const double top = logf.row(j).maxCoeff();
    if (!std::isfinite(top)) {
      out.responsibilities.row(j).setConstant(1.0 / static_cast<double>(g));
      out.loglik += top;
      continue;
    }
    const RowVector e = (logf.row(j).array() - top).exp().matrix();
    const double sum = e.sum();
    out.responsibilities.row(j) = e / sum;
    out.loglik += top + std::log(sum);
  }

  LatentTable& lt = out.latents;
  lt.e_w = Matrix::Ones(n, g);
  lt.e_wu = Matrix::Constant(n, g, special::kSqrt2OverPi);
  lt.e_wu2 = Matrix::Ones(n, g);
  lt.e_logw = Matrix::Zero(n, g);
  for (Index i = 0; i < g; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (latent_cutoff > 0.0 && out.responsibilities(j, i) < latent_cutoff) {
        continue;
      }
      const LatentMoments m = kernels[i].latent_moments_at(
          stats[i].mahalanobis(j), stats[i].projection(j));
      lt.e_w(j, i) = m.e_w;
      lt.e_wu(j, i) = m.e_wu;
      lt.e_wu2(j, i) = m.e_wu2;
      lt.e_logw(j, i) = m.e_logw;
    }
  }
  return out;
}

EStepResult e_step(const Matrix& data, const MixtureFit& fit) {
  return e_step(data, fit.weights, fit.components);
}

MStepResult m_step(const Matrix& data, const Matrix& resp,
                   const LatentTable& latents, ScaleModel model, Family family,
                   const FitConfig& config, const MStepResult* previous) {
  const Index n = data.rows();
  const Index p = data.cols();
  const Index g = resp.cols();
  MStepResult out;

  const Vector sizes = resp.colwise().sum().transpose();
  for (Index i = 0; i < g; ++i) {
    if (sizes(i) < static_cast<double>(p + 1)) {
      throw CollapseError("component " + std::to_string(i + 1) +
                              " has effective size " +
                              std::to_string(sizes(i)),
                          i);
    }
  }
  out.weights = sizes / static_cast<double>(n);

  ScatterSet scat;
  scat.sizes = sizes;
  std::vector<Vector> xis(g);
  std::vector<Vector> skews(g);
  for (Index i = 0; i < g; ++i) {
    const Vector a = resp.col(i).cwiseProduct(latents.e_w.col(i));
    const Vector b = resp.col(i).cwiseProduct(latents.e_wu.col(i));
    const double s0 = a.sum();
    const double s1 = b.sum();
    const double s2 = resp.col(i).dot(latents.e_wu2.col(i));
    const Vector y0 = data.transpose() * a;
    const Vector y1 = data.transpose() * b;

    Vector skew = Vector::Zero(p);
    Vector xi;
    if (has_skew(family)) {
      // Stationarity of the expected complete-data log-likelihood in
      // (xi, skew): [s0 s1; s1 s2] [xi'; skew'] = [y0'; y1'].
      const double det = s0 * s2 - s1 * s1;
      if (det > 1e-12 * s0 * s2) {
        xi = (s2 * y0 - s1 * y1) / det;
        skew = (s0 * y1 - s1 * y0) / det;
      } else {
        if (previous) skew = previous->components[i].skew;
        xi = (y0 - s1 * skew) / s0;
        add_warning(out.warnings, "degenerate skewness system");
      }
    } else {
      xi = y0 / s0;
    }

    const Matrix centered = data.rowwise() - xi.transpose();
    const Vector cb = centered.transpose() * b;
    Matrix w = centered.transpose() * a.asDiagonal() * centered;
    if (has_skew(family)) {
      w -= cb * skew.transpose() + skew * cb.transpose();
      w += s2 * skew * skew.transpose();
    }
    scat.scatters.push_back(0.5 * (w + w.transpose()));
    xis[i] = std::move(xi);
    skews[i] = std::move(skew);
  }

  regularize(scat, out.warnings);
  ScaleSolveOptions opts = config.scale_options;
  opts.previous = previous ? &previous->scale : nullptr;
  out.scale = solve_scale(model, scat, opts);
  if (!out.scale.converged) {
    add_warning(out.warnings, "scale sub-solver hit its iteration limit");
  }

  std::vector<double> dofs(g, 0.0);
  if (has_dof(family)) {
    Vector s(g);
    for (Index i = 0; i < g; ++i) {
      s(i) = resp.col(i).dot(latents.e_logw.col(i) - latents.e_w.col(i));
    }
    bool clamped = false;
    if (config.constrain_dof_equal) {
      const double shared = solve_dof(s.sum() / sizes.sum(), config.dof_lo,
                                      config.dof_hi, clamped);
      std::fill(dofs.begin(), dofs.end(), shared);
    } else {
      for (Index i = 0; i < g; ++i) {
        bool c = false;
        dofs[i] = solve_dof(s(i) / sizes(i), config.dof_lo, config.dof_hi, c);
        clamped = clamped || c;
      }
    }
    if (clamped) add_warning(out.warnings, "dof clamped to bound");
  }

  for (Index i = 0; i < g; ++i) {
    ComponentParams c{std::move(xis[i]), out.scale.omegas[i],
                      std::move(skews[i]), std::nullopt};
    if (has_dof(family)) c.dof = dofs[i];
    out.components.push_back(std::move(c));
  }
  return out;
}

MStepResult initial_parameters(const Matrix& data, const Matrix& resp,
                               ScaleModel model, Family family,
                               const FitConfig& config) {
  const Index p = data.cols();
  const Index g = resp.cols();
  MStepResult out;
  const Vector sizes = resp.colwise().sum().transpose();
  for (Index i = 0; i < g; ++i) {
    if (sizes(i) < static_cast<double>(p + 1)) {
      throw CollapseError("initial component " + std::to_string(i + 1) +
                              " has effective size " +
                              std::to_string(sizes(i)),
                          i);
    }
  }
  out.weights = sizes / sizes.sum();
  ScatterSet scat;
  scat.sizes = sizes;
  std::vector<Vector> means(g);
  std::vector<Vector> skews(g);
  for (Index i = 0; i < g; ++i) {
    const Vector z = resp.col(i);
    means[i] = data.transpose() * z / sizes(i);
    const Matrix centered = data.rowwise() - means[i].transpose();
    Matrix w = centered.transpose() * z.asDiagonal() * centered;
    scat.scatters.push_back(0.5 * (w + w.transpose()));
    skews[i] = Vector::Zero(p);
    if (has_skew(family)) {
      const Vector third =
          centered.array().cube().matrix().transpose() * z;
      for (Index c = 0; c < p; ++c) {
        skews[i](c) = third(c) >= 0.0 ? 0.1 : -0.1;
      }
    }
  }
  regularize(scat, out.warnings);
  ScaleSolveOptions opts = config.scale_options;
  opts.previous = nullptr;
  out.scale = solve_scale(model, scat, opts);
  for (Index i = 0; i < g; ++i) {
    ComponentParams c{means[i], out.scale.omegas[i], skews[i], std::nullopt};
    if (has_dof(family)) {
      c.dof = std::clamp(config.dof_init, config.dof_lo, config.dof_hi);
    }
    out.components.push_back(std::move(c));
  }
  return out;
}

Index count_free_params(ScaleModel model, Family family, Index g, Index p,
                        bool constrain_dof_equal) {
  Index m = (g - 1) + g * p + count_scale_params(model, g, p);
  if (has_skew(family)) m += g * p;
  if (has_dof(family)) m += constrain_dof_equal ? 1 : g;
  return m;
}

namespace {

// Aitken-extrapolated limit from three consecutive values; nullopt when the
// increments are not contracting.
std::optional<double> aitken_limit(double l0, double l1, double l2) {
  const double step_prev = l1 - l0;
  const double step = l2 - l1;
  if (step_prev == 0.0) {
    if (step == 0.0) return l2;
    return std::nullopt;
  }
  const double accel = step / step_prev;
  if (!(accel < 1.0)) return std::nullopt;
  return l1 + step / (1.0 - accel);
}

}  // namespace

bool aitken_converged(const std::vector<double>& trace, double tol) {
  const std::size_t k = trace.size();
  if (k < 4) return false;
  const auto prev = aitken_limit(trace[k - 4], trace[k - 3], trace[k - 2]);
  const auto curr = aitken_limit(trace[k - 3], trace[k - 2], trace[k - 1]);
  if (!prev || !curr) return false;
  return std::abs(*curr - *prev) < tol;
}

std::vector<int> kmeans_labels(const Matrix& data, Index g, std::uint64_t seed,
                               int restarts) {
  const Index n = data.rows();
  if (g < 1 || g > n) throw InputError("kmeans needs 1 <= g <= n");
  std::vector<int> best;
  double best_sse = std::numeric_limits<double>::infinity();
  Rng rng(derive_seed(seed, 0x6b6d));
  boost::random::uniform_01<double> unif;

  int reseeds = 0;
  for (int r = 0; r < restarts; ++r) {
    // k-means++ seeding.
    Matrix centers(g, data.cols());
    boost::random::uniform_int_distribution<Index> pick(0, n - 1);
    centers.row(0) = data.row(pick(rng));
    Vector dist2 = (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Index c = 1; c < g; ++c) {
      const double total = dist2.sum();
      Index chosen = n - 1;
      if (total > 0.0) {
        double u = unif(rng) * total;
        for (Index j = 0; j < n; ++j) {
          u -= dist2(j);
          if (u <= 0.0) {
            chosen = j;
            break;
          }
        }
      } else {
        chosen = pick(rng);
      }
      centers.row(c) = data.row(chosen);
      dist2 = dist2.cwiseMin(
          (data.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<int> labels(n, -1);
    bool empty = false;
    for (int it = 0; it < 300; ++it) {
      bool changed = false;
      for (Index j = 0; j < n; ++j) {
        Index arg = 0;
        (centers.rowwise() - data.row(j)).rowwise().squaredNorm().minCoeff(&arg);
        if (labels[j] != static_cast<int>(arg)) {
          labels[j] = static_cast<int>(arg);
          changed = true;
        }
      }
      Matrix sums = Matrix::Zero(g, data.cols());
      Vector counts = Vector::Zero(g);
      for (Index j = 0; j < n; ++j) {
        sums.row(labels[j]) += data.row(j);
        counts(labels[j]) += 1.0;
      }
      if ((counts.array() == 0.0).any()) {
        empty = true;
        break;
      }
      for (Index c = 0; c < g; ++c) centers.row(c) = sums.row(c) / counts(c);
      if (!changed) break;
    }
    if (empty) {
      if (++reseeds > 10) {
        throw NumericalError("kmeans produced an empty cluster after 10 reseeds");
      }
      --r;
      continue;
    }
    double sse = 0.0;
    for (Index j = 0; j < n; ++j) {
      sse += (data.row(j) - centers.row(labels[j])).squaredNorm();
    }
    if (sse < best_sse) {
      best_sse = sse;
      best = labels;
    }
  }
  for (int& l : best) l += 1;
  return best;
}

Matrix initialize(const Matrix& data, Index g, InitStrategy strategy,
                  std::uint64_t seed, const std::vector<int>& labels,
                  int kmeans_restarts) {
  const Index n = data.rows();
  if (g < 1) throw InputError("g must be at least 1");
  switch (strategy) {
    case InitStrategy::kmeans:
      return one_hot(kmeans_labels(data, g, seed, kmeans_restarts), g);
    case InitStrategy::random_posterior: {
      Rng rng(derive_seed(seed, 0x6469));
      boost::random::exponential_distribution<double> expo(1.0);
      Matrix z(n, g);
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < g; ++i) z(j, i) = expo(rng);
        z.row(j) /= z.row(j).sum();
      }
      return z;
    }
    case InitStrategy::uniform:
      return Matrix::Constant(n, g, 1.0 / static_cast<double>(g));
    case InitStrategy::given_labels:
      if (static_cast<Index>(labels.size()) != n) {
        throw InputError("given-labels initialization needs n labels");
      }
      return one_hot(labels, g);
  }
  return {};
}

MixtureFit fit(const Matrix& data, Index g, ScaleModel model, Family family,
               const FitConfig& config) {
  config.validate();
  check_data(data);
  const Index n = data.rows();
  const Index p = data.cols();
  if (g < 1) throw InputError("g must be at least 1");
  if (n <= g * (p + 1)) {
    throw InputError("need n > g (p + 1) observations");
  }
  return best_of_starts(data, g, model, family, config, {});
}

MixtureFit classify(const Matrix& data, const std::vector<int>& known_labels,
                    Index g, ScaleModel model, Family family,
                    FitConfig config) {
  config.validate();
  check_data(data);
  const Index n = data.rows();
  check_known_labels(known_labels, n, g);
  if (static_cast<Index>(known_labels.size()) != n) {
    throw InputError("classify needs one label entry per observation");
  }
  std::vector<bool> seen(g, false);
  bool all_known = true;
  for (int l : known_labels) {
    if (l == kUnknownLabel) {
      all_known = false;
    } else {
      seen[l - 1] = true;
    }
  }
  for (Index i = 0; i < g; ++i) {
    if (!seen[i]) {
      throw InputError("class " + std::to_string(i + 1) +
                       " has no labeled observation");
    }
  }
  if (config.init != InitStrategy::given_labels) {
    config.init = InitStrategy::uniform;
  }
  // Uniform initialization is deterministic, as is a fully labeled problem.
  if (config.init == InitStrategy::uniform || all_known) config.n_starts = 1;
  return best_of_starts(data, g, model, family, config, known_labels);
}

std::vector<int> map_labels(const Matrix& resp) {
  std::vector<int> labels(resp.rows());
  for (Index j = 0; j < resp.rows(); ++j) {
    Index best = 0;
    for (Index i = 1; i < resp.cols(); ++i) {
      if (resp(j, i) > resp(j, best)) best = i;
    }
    labels[j] = static_cast<int>(best) + 1;
  }
  return labels;
}

std::vector<int> map_labels(const MixtureFit& fit) {
  return map_labels(fit.responsibilities);
}

}  // namespace skewmix
