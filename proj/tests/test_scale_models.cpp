#include "oracle/oracles.hpp"
#include "skewmix/scale_models.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace skewmix;

namespace {

ScatterSet random_scatters(Index g, Index p, std::uint64_t seed) {
  ScatterSet s;
  s.sizes.resize(g);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> size(8.0, 60.0);
  std::uniform_real_distribution<double> spread(0.3, 3.0);
  for (Index i = 0; i < g; ++i) {
    s.sizes(i) = size(gen);
    s.scatters.push_back(s.sizes(i) *
                         oracle::random_spd(p, seed * 31 + i, spread(gen)));
  }
  return s;
}

double oracle_min(const ScatterSet& s, ScaleModel m, std::uint64_t seed) {
  std::vector<double> sizes(s.sizes.data(), s.sizes.data() + s.sizes.size());
  return oracle::minimize_scale_objective(s.scatters, sizes,
                                          std::string(to_string(m)), seed);
}

// Table 1 of the model family, transcribed row by row; the EVE row carries
// the corrected sign (+) because the printed "-" contradicts a direct count.
Index table_count(ScaleModel m, Index G, Index p) {
  const Index c = p * (p + 1) / 2;
  switch (m) {
    case ScaleModel::EII: return 1;
    case ScaleModel::VII: return G;
    case ScaleModel::EEI: return p;
    case ScaleModel::VEI: return G + (p - 1);
    case ScaleModel::EVI: return G * p - (G - 1);
    case ScaleModel::VVI: return G * p;
    case ScaleModel::EEE: return c;
    case ScaleModel::VEE: return c + (G - 1);
    case ScaleModel::EVE: return c + (G - 1) * (p - 1);
    case ScaleModel::VVE: return c + (G - 1) * p;
    case ScaleModel::EEV: return G * c - (G - 1) * p;
    case ScaleModel::VEV: return G * c - (G - 1) * (p - 1);
    case ScaleModel::EVV: return G * c - (G - 1);
    case ScaleModel::VVV: return G * c;
  }
  return -1;
}

}  // namespace

TEST(ScaleParamCount, SpecExamples) {
  EXPECT_EQ(count_scale_params(ScaleModel::EII, 3, 2), 1);
  EXPECT_EQ(count_scale_params(ScaleModel::VVV, 3, 2), 9);
  EXPECT_EQ(count_scale_params(ScaleModel::VVE, 2, 3), 9);
}

TEST(ScaleParamCount, MatchesTableAndStructuralCount) {
  for (ScaleModel m : kAllScaleModels) {
    for (Index g = 1; g <= 6; ++g) {
      for (Index p = 1; p <= 8; ++p) {
        const Index got = count_scale_params(m, g, p);
        EXPECT_EQ(got, table_count(m, g, p)) << to_string(m) << g << p;
        EXPECT_EQ(got, oracle::structural_param_count(
                           std::string(to_string(m)), g, p))
            << to_string(m) << g << p;
      }
    }
  }
  // The printed EVE formula differs from the structural count whenever
  // g > 1 and p > 1.
  const Index printed = 3 - (2 - 1) * (2 - 1);
  EXPECT_NE(count_scale_params(ScaleModel::EVE, 2, 2), printed);
}

TEST(ScaleModelNames, RoundTripAndPresets) {
  for (ScaleModel m : kAllScaleModels) {
    EXPECT_EQ(parse_scale_model(to_string(m)), m);
  }
  EXPECT_THROW(parse_scale_model("XYZ"), InputError);
  EXPECT_EQ(kMclustScaleModels.size(), 10u);
}

TEST(SolveScale, ClosedFormsFromSpec) {
  const ScatterSet s = random_scatters(3, 2, 4);
  const Matrix pooled = s.pooled();
  const double n = s.total_size();

  const ScaleSolution eee = solve_scale(ScaleModel::EEE, s);
  for (const auto& o : eee.omegas) EXPECT_TRUE(o.isApprox(pooled / n, 1e-12));
  const ScaleSolution vvv = solve_scale(ScaleModel::VVV, s);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_TRUE(vvv.omegas[i].isApprox(s.scatters[i] / s.sizes(i), 1e-12));
  }
  const ScaleSolution eii = solve_scale(ScaleModel::EII, s);
  const double lambda = pooled.trace() / (n * 2.0);
  for (const auto& o : eii.omegas) {
    EXPECT_TRUE(o.isApprox(lambda * Matrix::Identity(2, 2), 1e-12));
  }
  for (ScaleModel m : {ScaleModel::EEE, ScaleModel::VVV, ScaleModel::EII}) {
    EXPECT_NEAR(solve_scale(m, s).objective, oracle_min(s, m, 1), 1e-6)
        << to_string(m);
  }
}

TEST(SolveScale, NoWorseThanGenericOptimizer) {
  for (ScaleModel m : kAllScaleModels) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Index g = 2 + static_cast<Index>(seed % 2);
      const Index p = 2 + static_cast<Index>((seed / 2) % 2);
      const ScatterSet s = random_scatters(g, p, seed * 97 + 3);
      const ScaleSolution sol = solve_scale(m, s);
      const double ref = oracle_min(s, m, seed);
      EXPECT_LE(sol.objective, ref + 1e-5)
          << to_string(m) << " seed " << seed << " g=" << g << " p=" << p;
    }
  }
}

TEST(SolveScale, VevLocalOptimalityProbe) {
  // The generic optimizer restarted around the solution cannot improve it.
  const ScatterSet s = random_scatters(2, 3, 1234);
  const ScaleSolution sol = solve_scale(ScaleModel::VEV, s);
  std::vector<double> sizes{s.sizes(0), s.sizes(1)};
  const double ref =
      oracle::minimize_scale_objective(s.scatters, sizes, "VEV", 5, 100);
  EXPECT_LE(sol.objective, ref + 1e-6);
  EXPECT_GE(sol.objective, ref - 1e-6);
}

TEST(SolveScale, ConstraintConformanceAndReconstruction) {
  for (ScaleModel m : kAllScaleModels) {
    const ScaleConstraint c = constraint_of(m);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const Index g = 2 + static_cast<Index>(seed % 2);
      const Index p = 2 + static_cast<Index>(seed % 3);
      const ScatterSet s = random_scatters(g, p, seed * 7 + 11);
      const ScaleSolution sol = solve_scale(m, s);
      ASSERT_EQ(sol.parts.size(), static_cast<std::size_t>(g));
      for (Index i = 0; i < g; ++i) {
        const auto& part = sol.parts[i];
        EXPECT_TRUE(part.reconstruct().isApprox(sol.omegas[i], 1e-10));
        EXPECT_NEAR(part.shape.prod(), 1.0, 1e-8);
        EXPECT_TRUE((part.orientation.transpose() * part.orientation)
                        .isApprox(Matrix::Identity(p, p), 1e-10));
        if (c.shape == 'I') EXPECT_TRUE(part.shape.isOnes(0.0));
        if (c.orientation == 'I') {
          EXPECT_TRUE(part.orientation.isIdentity(0.0));
        }
        const auto& first = sol.parts[0];
        if (c.volume == 'E') EXPECT_EQ(part.volume, first.volume);
        if (c.shape == 'E') EXPECT_EQ(part.shape, first.shape);
        if (c.orientation == 'E') {
          EXPECT_EQ(part.orientation, first.orientation);
        }
      }
      EXPECT_NEAR(sol.objective, scale_objective(s, sol.omegas),
                  1e-9 * std::abs(sol.objective));
    }
  }
}

TEST(SolveScale, NestingOfObjectives) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScatterSet s = random_scatters(3, 3, seed + 500);
    const double vvv = solve_scale(ScaleModel::VVV, s).objective;
    const double eii = solve_scale(ScaleModel::EII, s).objective;
    for (ScaleModel m : kAllScaleModels) {
      const double obj = solve_scale(m, s).objective;
      EXPECT_LE(vvv, obj + 1e-8) << to_string(m);
      EXPECT_LE(obj, eii + 1e-8) << to_string(m);
    }
  }
}

TEST(SolveScale, NeverWorseThanPreviousIterate) {
  const ScatterSet s = random_scatters(3, 3, 77);
  for (ScaleModel m : {ScaleModel::VEI, ScaleModel::EVI, ScaleModel::VEE,
                       ScaleModel::EVE, ScaleModel::VVE, ScaleModel::VEV}) {
    const ScaleSolution first = solve_scale(m, s);
    ScaleSolveOptions opt;
    opt.previous = &first;
    const ScaleSolution second = solve_scale(m, s, opt);
    EXPECT_LE(second.objective, first.objective + 1e-12) << to_string(m);
  }
}

TEST(SolveScale, ErrorsCarryComponent) {
  ScatterSet s = random_scatters(2, 3, 9);
  s.scatters[1] = Matrix::Zero(3, 3);
  try {
    solve_scale(ScaleModel::VVV, s);
    FAIL() << "expected SingularScatterError";
  } catch (const SingularScatterError& e) {
    EXPECT_EQ(e.component(), 1);
  }
  ScatterSet bad = random_scatters(2, 2, 9);
  bad.sizes(0) = -1.0;
  EXPECT_THROW(solve_scale(ScaleModel::EEE, bad), InputError);
}

TEST(SortedEigen, DescendingWithSignConvention) {
  Matrix m(3, 3);
  m << 2, 0, 0, 0, 5, 0, 0, 0, 2;
  Vector values;
  Matrix vectors;
  sorted_eigen(m, values, vectors);
  EXPECT_DOUBLE_EQ(values(0), 5.0);
  EXPECT_GE(values(1), values(2));
  for (Index c = 0; c < 3; ++c) {
    Index at;
    vectors.col(c).cwiseAbs().maxCoeff(&at);
    EXPECT_GT(vectors(at, c), 0.0);
  }
}
