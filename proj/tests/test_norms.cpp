#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gclm/norms.hpp"
#include "gclm/spectral.hpp"

using namespace gclm;

TEST(Norms, SingleRealPoleHandValues) {
  const PoleFamilyState s{0.0, {Pole{1.0, 1.0}}, 0.0};
  EXPECT_NEAR(l2_norm(s), std::sqrt(pi), 1e-14);
  EXPECT_NEAR(wiener_norm(s), 1.0, 1e-14);
}

TEST(Norms, RealDoublePoleHandValues) {
  const RealReducedState s{0.0, 1.0, 0.5};
  EXPECT_NEAR(l2_norm(s) * l2_norm(s), 320.0 * pi / 9.0, 1e-12);
  EXPECT_NEAR(wiener_norm(s), 32.0 / 3.0, 1e-12);
}

TEST(Norms, PFormMatchesDirectFormula) {
  // ||w||^2 = 2 pi w^2 (1 + v^2)/(v^3 (1 - v^2)^2)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uv(0.05, 4.0), uw(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double v = uv(rng), w = uw(rng);
    if (std::abs(v - 1.0) < 1e-3) continue;
    const double direct = 2.0 * pi * w * w * (1.0 + v * v) / (v * v * v * (1.0 - v * v) * (1.0 - v * v));
    const double l2 = l2_norm(RealReducedState{0.0, w, v});
    EXPECT_NEAR(l2 * l2, direct, 1e-11 * direct);
  }
}

TEST(Norms, ClosedFormsMatchGridNorms) {
  const std::size_t n = 1024;
  const PoleFamilyState a{0.0, {Pole{cplx(0.5, -0.25), cplx(0.7, -0.4)}, Pole{cplx(-0.3, 0.1), cplx(1.2, 0.5)}}, 0.3};
  auto g = grid_norms(sample_state(a, n));
  EXPECT_NEAR(l2_norm(a), g.l2, 1e-10);
  EXPECT_NEAR(wiener_norm(a), g.b0, 1e-10);
  const PoleFamilyState one{0.0, {Pole{cplx(0.2, 0.9), 1.0}}, 0.0};
  g = grid_norms(sample_state(one, n));
  EXPECT_NEAR(l2_norm(one), g.l2, 1e-10);
  EXPECT_NEAR(wiener_norm(one), g.b0, 1e-10);
  const DoublePoleState d{0.0, cplx(0.2, 0.3), cplx(0.8, 0.3), 0.0, 0.0};
  g = grid_norms(sample_state(d, n));
  EXPECT_NEAR(l2_norm(d), g.l2, 1e-10);
  EXPECT_NEAR(wiener_norm(d), g.b0, 1e-10);
  for (double v : {0.5, 1.7}) {
    const RealReducedState r{0.0, 0.7, v};
    g = grid_norms(sample_state(embed(r), n));
    EXPECT_NEAR(l2_norm(r), g.l2, 1e-10 * g.l2);
    EXPECT_NEAR(wiener_norm(r), g.b0, 1e-10 * g.b0);
  }
}

TEST(Norms, HomogeneousOfDegreeOne) {
  PoleFamilyState s{0.0, {Pole{cplx(0.3, 0.4), cplx(0.9, -0.2)}, Pole{cplx(-0.1, 0.2), cplx(1.5, 0.6)}}, 0.0};
  const double l = l2_norm(s), b = wiener_norm(s);
  for (auto& p : s.poles) p.amp *= -2.5;
  EXPECT_NEAR(l2_norm(s), 2.5 * l, 1e-12 * l);
  EXPECT_NEAR(wiener_norm(s), 2.5 * b, 1e-12 * b);
}

TEST(Norms, WienerDominatesScaledL2) {
  // ||w||_L2^2 = 2 pi sum |c_k|^2 <= 2 pi (sum |c_k|)^2
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0), re(0.3, 2.0);
  for (int i = 0; i < 50; ++i) {
    const PoleFamilyState s{0.0, {Pole{cplx(u(rng), u(rng)), cplx(re(rng), u(rng))}}, 0.0};
    EXPECT_LE(l2_norm(s), std::sqrt(2.0 * pi) * wiener_norm(s) * (1.0 + 1e-12));
  }
}
