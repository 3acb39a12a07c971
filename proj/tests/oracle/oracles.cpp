#include "oracles.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_randist.h>
#include <gsl/gsl_rng.h>
#include <gsl/gsl_sf_gamma.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace oracle {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct GslInit {
  GslInit() { gsl_set_error_handler_off(); }
};
const GslInit gsl_init;

using RngPtr = std::unique_ptr<gsl_rng, decltype(&gsl_rng_free)>;

RngPtr make_rng(std::uint64_t seed) {
  RngPtr r(gsl_rng_alloc(gsl_rng_mt19937), &gsl_rng_free);
  gsl_rng_set(r.get(), static_cast<unsigned long>(seed));
  return r;
}

using Workspace =
    std::unique_ptr<gsl_integration_workspace,
                    decltype(&gsl_integration_workspace_free)>;

Workspace workspace() {
  return {gsl_integration_workspace_alloc(2000),
          &gsl_integration_workspace_free};
}

template <class F>
double call(double x, void* p) {
  return (*static_cast<F*>(p))(x);
}

template <class F>
double qagi(F f, double epsabs, double epsrel = 1e-10) {
  auto ws = workspace();
  gsl_function fn{&call<F>, &f};
  double result = 0.0;
  double err = 0.0;
  gsl_integration_qagi(&fn, epsabs, epsrel, 2000, ws.get(), &result, &err);
  return result;
}

template <class F>
double qagiu(F f, double a, double epsabs, double epsrel = 1e-10) {
  auto ws = workspace();
  gsl_function fn{&call<F>, &f};
  double result = 0.0;
  double err = 0.0;
  gsl_integration_qagiu(&fn, a, epsabs, epsrel, 2000, ws.get(), &result, &err);
  return result;
}

// log N_p(y; mu, cov)
double log_gauss(const Vector& y, const Vector& mu, const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  const Vector z = llt.matrixL().solve(y - mu);
  const double logdet =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(y.size()) * std::log(2.0 * kPi) + logdet +
                 z.squaredNorm());
}

// Joint density of (y, w, t): gamma(w) * 2 N(t; 0, 1/w) * N_p(y; xi + skew t,
// Omega / w).
double joint(const Vector& y, const ComponentParams& par, double w, double t) {
  double log_w = 0.0;
  if (par.dof) {
    const double a = 0.5 * *par.dof;
    log_w = a * std::log(a) - gsl_sf_lngamma(a) + (a - 1.0) * std::log(w) -
            a * w;
  }
  const double log_t =
      std::log(2.0) + 0.5 * std::log(w / (2.0 * kPi)) - 0.5 * w * t * t;
  const double log_y = log_gauss(y, par.xi + par.skew * t, par.omega / w);
  return std::exp(log_w + log_t + log_y);
}

// Integral over (w, t) of h(w, t) times the joint density.
template <class H>
double posterior_integral(const Vector& y, const ComponentParams& par, H h) {
  if (!par.dof) {
    return qagiu([&](double t) { return h(1.0, t) * joint(y, par, 1.0, t); },
                 0.0, 0.0, 1e-11);
  }
  return qagiu(
      [&](double w) {
        if (w <= 0.0) return 0.0;
        return qagiu([&](double t) { return h(w, t) * joint(y, par, w, t); },
                     0.0, 0.0, 1e-11);
      },
      0.0, 0.0, 1e-10);
}

Matrix skew_symmetric(const double* x, Index p) {
  Matrix s = Matrix::Zero(p, p);
  Index k = 0;
  for (Index r = 0; r < p; ++r) {
    for (Index c = r + 1; c < p; ++c) {
      s(r, c) = x[k];
      s(c, r) = -x[k];
      ++k;
    }
  }
  return s;
}

struct ScaleProblem {
  const std::vector<Matrix>* scatters;
  const std::vector<double>* sizes;
  char vol, shape, orient;
  Index g, p;

  Index q() const { return p * (p - 1) / 2; }
  Index n_vol() const { return vol == 'V' ? g : 1; }
  Index n_shape() const {
    return shape == 'I' ? 0 : (shape == 'E' ? 1 : g) * (p - 1);
  }
  Index n_orient() const {
    return orient == 'I' ? 0 : (orient == 'E' ? 1 : g) * q();
  }
  Index size() const { return n_vol() + n_shape() + n_orient(); }

  double value(const double* x) const {
    double total = 0.0;
    for (Index i = 0; i < g; ++i) {
      const double log_vol = x[vol == 'V' ? i : 0];
      Vector a = Vector::Zero(p);
      if (shape != 'I') {
        const double* s = x + n_vol() + (shape == 'V' ? i * (p - 1) : 0);
        for (Index k = 0; k < p - 1; ++k) a(k) = s[k];
        a(p - 1) = -a.head(p - 1).sum();
      }
      Matrix d = Matrix::Identity(p, p);
      if (orient != 'I') {
        const double* o =
            x + n_vol() + n_shape() + (orient == 'V' ? i * q() : 0);
        d = skew_symmetric(o, p).exp();
      }
      const Matrix rotated = d.transpose() * (*scatters)[i] * d;
      const double trace =
          (rotated.diagonal().array() * (-a.array()).exp()).sum() *
          std::exp(-log_vol);
      total += (*sizes)[i] * static_cast<double>(p) * log_vol + trace;
    }
    return total;
  }
};

double f_value(const gsl_vector* v, void* params) {
  return static_cast<ScaleProblem*>(params)->value(v->data);
}

void f_grad(const gsl_vector* v, void* params, gsl_vector* grad) {
  auto* prob = static_cast<ScaleProblem*>(params);
  std::vector<double> x(v->data, v->data + v->size);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
    const double keep = x[k];
    x[k] = keep + h;
    const double up = prob->value(x.data());
    x[k] = keep - h;
    const double down = prob->value(x.data());
    x[k] = keep;
    gsl_vector_set(grad, k, (up - down) / (2.0 * h));
  }
}

void f_both(const gsl_vector* v, void* params, double* f, gsl_vector* grad) {
  *f = f_value(v, params);
  f_grad(v, params, grad);
}

double bfgs(ScaleProblem& prob, std::vector<double> x0) {
  const std::size_t n = x0.size();
  if (n == 0) return prob.value(nullptr);
  gsl_multimin_function_fdf fdf{&f_value, &f_grad, &f_both, n, &prob};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(
      gsl_vector_alloc(n), &gsl_vector_free);
  for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x.get(), k, x0[k]);
  std::unique_ptr<gsl_multimin_fdfminimizer,
                  decltype(&gsl_multimin_fdfminimizer_free)>
      m(gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2,
                                        n),
        &gsl_multimin_fdfminimizer_free);
  gsl_multimin_fdfminimizer_set(m.get(), &fdf, x.get(), 0.05, 0.1);
  for (int it = 0; it < 5000; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(m->gradient, 1e-9) == GSL_SUCCESS) break;
  }
  // Restarting clears stale curvature after a line-search stall.
  double best = m->f;
  for (int round = 0; round < 3; ++round) {
    gsl_vector_memcpy(x.get(), m->x);
    gsl_multimin_fdfminimizer_set(m.get(), &fdf, x.get(), 0.01, 0.1);
    for (int it = 0; it < 2000; ++it) {
      if (gsl_multimin_fdfminimizer_iterate(m.get()) != GSL_SUCCESS) break;
      if (gsl_multimin_test_gradient(m->gradient, 1e-9) == GSL_SUCCESS) break;
    }
    if (m->f >= best - 1e-12) {
      best = std::min(best, m->f);
      break;
    }
    best = m->f;
  }
  return best;
}

int count_pairs_same(const std::vector<int>& a, std::size_t i, std::size_t j) {
  return a[i] == a[j] ? 1 : 0;
}

double entropy_of(const Matrix& z) {
  double e = 0.0;
  for (Index r = 0; r < z.rows(); ++r) {
    for (Index c = 0; c < z.cols(); ++c) {
      if (z(r, c) > 0.0) e -= z(r, c) * std::log(z(r, c));
    }
  }
  return e;
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double epsabs) {
  return qagi([&](double x) { return f(x); }, epsabs);
}

double integrate_2d(const std::function<double(double, double)>& f,
                    double epsabs) {
  return qagi(
      [&](double x) {
        return qagi([&](double y) { return f(x, y); }, epsabs * 0.1);
      },
      epsabs);
}

double density_by_quadrature(const Vector& y, const ComponentParams& params) {
  return posterior_integral(y, params, [](double, double) { return 1.0; });
}

std::array<double, 4> latent_moments_by_quadrature(
    const Vector& y, const ComponentParams& params) {
  const double z = density_by_quadrature(y, params);
  const double ew =
      posterior_integral(y, params, [](double w, double) { return w; }) / z;
  const double ewt = posterior_integral(
                         y, params, [](double w, double t) { return w * t; }) /
                     z;
  const double ewt2 =
      posterior_integral(y, params,
                         [](double w, double t) { return w * t * t; }) /
      z;
  const double elogw =
      params.dof ? posterior_integral(
                       y, params,
                       [](double w, double) { return std::log(w); }) /
                       z
                 : 0.0;
  return {ew, ewt, ewt2, elogw};
}

McEstimate latent_moments_mc(const Vector& y, const ComponentParams& params,
                             int draws, std::uint64_t seed) {
  auto rng = make_rng(seed);
  const Index p = y.size();
  Eigen::LLT<Matrix> llt(params.omega);
  const Matrix l = llt.matrixL();
  std::vector<double> logw(draws);
  std::vector<std::array<double, 4>> h(draws);
  for (int k = 0; k < draws; ++k) {
    const double w =
        params.dof ? gsl_ran_gamma(rng.get(), 0.5 * *params.dof,
                                   2.0 / *params.dof)
                   : 1.0;
    const double t = std::abs(gsl_ran_gaussian(rng.get(), 1.0)) / std::sqrt(w);
    const Vector r = l.triangularView<Eigen::Lower>().solve(
        y - params.xi - params.skew * t);
    logw[k] = 0.5 * static_cast<double>(p) * std::log(w) -
              0.5 * w * r.squaredNorm();
    h[k] = {w, w * t, w * t * t, std::log(w)};
  }
  const double mx = *std::max_element(logw.begin(), logw.end());
  double sw = 0.0;
  double sw2 = 0.0;
  std::vector<double> wt(draws);
  for (int k = 0; k < draws; ++k) {
    wt[k] = std::exp(logw[k] - mx);
    sw += wt[k];
    sw2 += wt[k] * wt[k];
  }
  McEstimate est;
  est.ess = sw * sw / sw2;
  for (int c = 0; c < 4; ++c) {
    double m = 0.0;
    for (int k = 0; k < draws; ++k) m += wt[k] * h[k][c];
    m /= sw;
    double v = 0.0;
    for (int k = 0; k < draws; ++k) {
      const double d = wt[k] * (h[k][c] - m);
      v += d * d;
    }
    est.mean[c] = m;
    est.se[c] = std::sqrt(v) / sw;
  }
  return est;
}

Matrix sample(const ComponentParams& params, Index n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  const Index p = params.dim();
  const Matrix l = Eigen::LLT<Matrix>(params.omega).matrixL();
  Matrix out(n, p);
  Vector z(p);
  for (Index j = 0; j < n; ++j) {
    const double w =
        params.dof ? gsl_ran_gamma(rng.get(), 0.5 * *params.dof,
                                   2.0 / *params.dof)
                   : 1.0;
    const double t = std::abs(gsl_ran_gaussian(rng.get(), 1.0));
    for (Index c = 0; c < p; ++c) z(c) = gsl_ran_gaussian(rng.get(), 1.0);
    out.row(j) = (params.xi + (params.skew * t + l * z) / std::sqrt(w))
                     .transpose();
  }
  return out;
}

Matrix random_spd(Index p, std::uint64_t seed, double scale) {
  auto rng = make_rng(seed);
  Matrix a(p, p);
  for (Index r = 0; r < p; ++r) {
    for (Index c = 0; c < p; ++c) a(r, c) = gsl_ran_gaussian(rng.get(), 1.0);
  }
  Matrix s = a * a.transpose() / static_cast<double>(p) +
             0.3 * Matrix::Identity(p, p);
  s *= scale;
  return 0.5 * (s + s.transpose());
}

ComponentParams random_params(Index p, bool with_dof, std::uint64_t seed) {
  auto rng = make_rng(seed ^ 0x5eedULL);
  ComponentParams par;
  par.xi.resize(p);
  par.skew.resize(p);
  for (Index c = 0; c < p; ++c) {
    par.xi(c) = gsl_ran_gaussian(rng.get(), 1.0);
    par.skew(c) = gsl_ran_gaussian(rng.get(), 1.5);
  }
  par.omega = random_spd(p, seed + 17);
  if (with_dof) par.dof = gsl_ran_flat(rng.get(), 3.0, 30.0);
  return par;
}

double minimize_scale_objective(const std::vector<Matrix>& scatters,
                                const std::vector<double>& sizes,
                                const std::string& model, std::uint64_t seed,
                                int starts) {
  if (model.size() != 3) throw std::invalid_argument("model code");
  ScaleProblem prob{&scatters, &sizes, model[0], model[1], model[2],
                    static_cast<Index>(scatters.size()), scatters[0].rows()};
  auto rng = make_rng(seed);

  double total_n = 0.0;
  Matrix pooled = Matrix::Zero(prob.p, prob.p);
  for (std::size_t i = 0; i < scatters.size(); ++i) {
    total_n += sizes[i];
    pooled += scatters[i];
  }
  const double base_vol =
      std::log(pooled.trace() / (static_cast<double>(prob.p) * total_n));

  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x(prob.size(), 0.0);
    for (Index k = 0; k < prob.n_vol(); ++k) x[k] = base_vol;
    if (s > 0) {
      for (auto& v : x) v += gsl_ran_gaussian(rng.get(), 0.7);
    }
    best = std::min(best, bfgs(prob, x));
  }
  return best;
}

Index structural_param_count(const std::string& model, Index g, Index p) {
  const Index q = p * (p - 1) / 2;
  const Index vol = model[0] == 'V' ? g : 1;
  const Index shape =
      model[1] == 'I' ? 0 : (model[1] == 'E' ? 1 : g) * (p - 1);
  const Index orient = model[2] == 'I' ? 0 : (model[2] == 'E' ? 1 : g) * q;
  return vol + shape + orient;
}

double ari_by_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const int sa = count_pairs_same(a, i, j);
      const int sb = count_pairs_same(b, i, j);
      if (sa && sb) {
        ++both;
      } else if (sa) {
        ++only_a;
      } else if (sb) {
        ++only_b;
      } else {
        ++neither;
      }
    }
  }
  const double num = 2.0 * (both * neither - only_a * only_b);
  const double den = (both + only_a) * (only_a + neither) +
                     (both + only_b) * (only_b + neither);
  return den == 0.0 ? 1.0 : num / den;
}

std::vector<std::pair<std::pair<int, int>, double>> merge_entropy_bruteforce(
    const Matrix& responsibilities) {
  std::vector<std::pair<std::pair<int, int>, double>> out;
  Matrix z = responsibilities;
  while (z.cols() > 1) {
    double best = std::numeric_limits<double>::infinity();
    Matrix best_z;
    std::pair<int, int> best_pair;
    for (Index a = 0; a < z.cols(); ++a) {
      for (Index b = a + 1; b < z.cols(); ++b) {
        Matrix m(z.rows(), z.cols() - 1);
        Index c = 0;
        for (Index k = 0; k < z.cols(); ++k) {
          if (k == b) continue;
          m.col(c++) = k == a ? Vector(z.col(a) + z.col(b)) : Vector(z.col(k));
        }
        const double e = entropy_of(m);
        if (e < best - 1e-12) {
          best = e;
          best_z = m;
          best_pair = {static_cast<int>(a) + 1, static_cast<int>(b) + 1};
        }
      }
    }
    z = best_z;
    out.push_back({best_pair, best});
  }
  return out;
}

double merge_by_hand_bruteforce(const std::vector<int>& pred, int k_pred,
                                const std::vector<int>& truth, int k_truth) {
  double best = ari_by_pairs(pred, truth);
  std::vector<int> map(k_pred, 0);
  while (true) {
    std::vector<int> merged(pred.size());
    for (std::size_t j = 0; j < pred.size(); ++j) merged[j] = map[pred[j] - 1];
    best = std::max(best, ari_by_pairs(merged, truth));
    int pos = 0;
    while (pos < k_pred && ++map[pos] == k_truth) map[pos++] = 0;
    if (pos == k_pred) break;
  }
  return best;
}

}  // namespace oracle
