#include <gtest/gtest.h>

#include <cmath>

#include "gclm/analytic.hpp"
#include "gclm/dynamics.hpp"
#include "gclm/spectral.hpp"

using namespace gclm;

namespace {

SpectralField cosine(std::size_t n, double k = 1.0) {
  return sample_field([k](double x) { return std::cos(k * x); }, n);
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST(Hilbert, ConstantAndCosine) {
  const auto c = hilbert_fourier(sample_field([](double) { return 2.0; }, 64));
  for (double v : c.values) EXPECT_NEAR(v, 0.0, 1e-15);
  const auto h = hilbert_fourier(cosine(64));
  const auto s = sample_field([](double x) { return std::sin(x); }, 64);
  EXPECT_LT(max_diff(h.values, s.values), 1e-14);
}

TEST(Hilbert, TwiceIsMinusIdentityOffTheMean) {
  const auto f = sample_field([](double x) { return 0.3 + std::exp(std::cos(x)) * std::sin(2 * x); }, 256);
  const auto hh = hilbert_fourier(hilbert_fourier(f));
  double mean = 0.0;
  for (double v : f.values) mean += v / 256.0;
  std::vector<double> want(256);
  for (std::size_t j = 0; j < 256; ++j) want[j] = -(f.values[j] - mean);
  EXPECT_LT(max_diff(hh.values, want), 1e-13);
}

TEST(Lambda, Symbols) {
  EXPECT_LT(max_diff(lambda_sigma(cosine(64), 2.0).values, cosine(64).values), 1e-12);
  EXPECT_LT(max_diff(lambda_sigma(cosine(64, 3.0), 1.0).values, sample_field([](double x) { return 3.0 * std::cos(3 * x); }, 64).values), 1e-12);
  const auto c = sample_field([](double) { return 1.5; }, 32);
  EXPECT_LT(max_diff(lambda_sigma(c, 0.0).values, c.values), 1e-15);
  for (double v : lambda_sigma(c, 1.0).values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(GridNorms, TrivialFields) {
  const auto z = grid_norms(sample_field([](double) { return 4.0; }, 64));
  EXPECT_NEAR(z.l2, 0.0, 1e-14);
  EXPECT_NEAR(z.b0, 0.0, 1e-14);
  const auto c = grid_norms(cosine(64));
  EXPECT_NEAR(c.l2, std::sqrt(pi), 1e-14);
  EXPECT_NEAR(c.b0, 1.0, 1e-14);
}

TEST(Pde, MeanDecaysWithoutGradients) {
  const double nu = 0.7, t = 1.0;
  const auto run = simulate_pde(sample_field([](double) { return 2.0; }, 64), ModelParams{0.0, 0.0, nu}, t, 1e-2);
  for (double v : run.fields.back().values) EXPECT_NEAR(v, 2.0 * std::exp(-nu * t), 1e-12);
}

TEST(Pde, MatchesExactPoleSolution) {
  const PoleFamilyState s{0.0, {Pole{cplx(0.5, -0.25), cplx(0.5, -1.0)}}, 0.0};
  const ModelParams p{0.0, 0.0, 0.2};
  PdeOptions opt;
  opt.record_every = 1000;
  const auto run = simulate_pde(sample_state(s, 1024), p, 1.0, 1e-4, opt);
  ASSERT_GE(run.fields.size(), 2u);
  for (std::size_t i = 0; i < run.fields.size(); ++i) {
    const auto ref = sample_state(exact_a0_sigma0(s, p.nu, run.times[i]), 1024);
    EXPECT_LT(max_diff(run.fields[i].values, ref.values), 1e-6) << run.times[i];
  }
}

TEST(Pde, MatchesDoublePoleOde) {
  const DoublePoleState d{0.0, cplx(0.0, 0.2), 0.8, 0.0, 0.0};
  const ModelParams p{0.5, 1.0, 1.0};
  const auto run = simulate_pde(sample_state(d, 1024), p, 0.5, 1e-4);
  IntegratorOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  const auto ref = sample_state(integrate(d, p, 0.5, o).event.state, 1024);
  EXPECT_LT(max_diff(run.fields.back().values, ref.values), 1e-6);
}

TEST(Residual, PoleStatesSolveThePde) {
  const PoleFamilyState a{0.0, {Pole{cplx(0.5, -0.25), cplx(0.8, -0.4)}, Pole{cplx(-0.3, 0.1), cplx(1.2, 0.5)}}, 0.3};
  const DoublePoleState d{0.0, cplx(0.2, 0.3), cplx(0.8, 0.3), 0.4, 0.2};
  for (double sigma : {0.0, 1.0}) {
    EXPECT_LT(residual(a, ModelParams{0.0, sigma, 0.3}, 512), 1e-8);
    EXPECT_LT(residual(d, ModelParams{0.5, sigma, 0.3}, 512), 1e-8);
    EXPECT_GT(residual(d, ModelParams{0.5, sigma, 0.3}, 512, true), 1e-2);
  }
}

TEST(Pde, RejectsOversizedSteps) {
  const PoleFamilyState s{0.0, {Pole{cplx(2.0, 0.0), 0.05}}, 0.0};
  EXPECT_THROW(simulate_pde(sample_state(s, 256), ModelParams{0.0, 0.0, 0.0}, 1.0, 0.5), Error);
}
