#include <gtest/gtest.h>

#include <random>

#include "gclm/model.hpp"
#include "gclm/spectral.hpp"

using namespace gclm;

namespace {

PoleFamilyState random_family(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), re(0.3, 2.0);
  PoleFamilyState s;
  for (std::size_t k = 0; k < n; ++k) s.poles.push_back(Pole{cplx(u(rng), u(rng)), cplx(re(rng), u(rng))});
  s.omega_av = u(rng);
  return s;
}

}  // namespace

TEST(ConformalMap, FixedPoints) {
  EXPECT_EQ(x_to_X(0.0), cplx(0.0, 0.0));
  EXPECT_NEAR(std::abs(x_to_X(pi / 2) - 1.0), 0.0, 1e-15);
  EXPECT_TRUE(is_infinite(x_to_X(pi)));
}

TEST(ConformalMap, RoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-pi + 1e-6, pi - 1e-6);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(X_to_x(x_to_X(x)).real(), x, 1e-14);
  }
}

TEST(Omega, SinglePoleHandValue) {
  // 1/(0 - i) - 1/(-i - i) = i - i/2
  const PoleFamilyState s{0.0, {Pole{1.0, 1.0}}, 0.0};
  const cplx w = eval_omega_minus(s, 0.0);
  EXPECT_NEAR(w.real(), 0.0, 1e-15);
  EXPECT_NEAR(w.imag(), 0.5, 1e-15);
  EXPECT_NEAR(eval_omega(s, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(eval_hilbert(s, 0.0), -1.0, 1e-15);
}

TEST(Omega, ZeroAmplitudesGiveTheMean) {
  const PoleFamilyState s{0.0, {Pole{0.0, cplx(0.7, 0.2)}}, 3.0};
  for (double x : {-3.0, -1.0, 0.0, 2.5}) {
    EXPECT_EQ(eval_omega_minus(s, x), cplx(0.0, 0.0));
    EXPECT_EQ(eval_omega(s, x), 3.0);
    EXPECT_EQ(eval_hilbert(s, x), 0.0);
  }
}

TEST(Omega, MinusPartHasZeroMean) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_family(rng, 1 + trial % 3);
    const int n = 10000;
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) sum += eval_omega_minus(s, -pi + 2.0 * pi * j / n);
    EXPECT_LT(std::abs(sum / double(n)), 1e-10);
  }
}

TEST(Omega, RealOnTheRealLine) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_family(rng, 2);
    for (int i = 0; i < 100; ++i) {
      const double x = u(rng);
      const cplx total = eval_omega_minus(s, x) + eval_omega_plus(s, x);
      EXPECT_LT(std::abs(total.imag()), 1e-12 * std::max(1.0, std::abs(total)));
    }
  }
}

TEST(Omega, HilbertMatchesSpectralSymbol) {
  const PoleFamilyState s{0.0, {Pole{cplx(0.4, -0.3), 1.0}}, 0.2};
  const std::size_t n = 1024;
  const auto h = hilbert_fourier(sample_state(s, n));
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    err = std::max(err, std::abs(h.values[j] - eval_hilbert(s, -pi + 2.0 * pi * double(j) / double(n))));
  EXPECT_LT(err, 1e-10);
}

TEST(Omega, HilbertOfConstantIsZero) {
  const PoleFamilyState s{0.0, {Pole{0.0, 0.5}}, 7.0};
  EXPECT_EQ(eval_hilbert(s, 1.0), 0.0);
}

TEST(Constraint, HandValues) {
  EXPECT_EQ(apply_constraint(0.0, 0.3), cplx(0.0, 0.0));
  const cplx a = apply_constraint(1.0, I);
  EXPECT_NEAR(a.real(), -1.0, 1e-15);
  EXPECT_NEAR(a.imag(), 0.0, 1e-15);
  const cplx b = apply_constraint(I, 0.5);
  EXPECT_NEAR(b.real(), -4.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.imag(), 0.0, 1e-15);
  EXPECT_THROW(apply_constraint(1.0, 1.0), Error);
}

TEST(Velocity, ZeroAmplitudeIsTheGauge) {
  const DoublePoleState s{0.0, 0.0, 0.6, 0.0, 0.25};
  EXPECT_EQ(eval_velocity(s, 1.0), 0.25);
}

TEST(Velocity, MatchesIntegratedHilbertTransform) {
  // u_x = H(omega): Simpson antiderivative from x = 0, mean removed, against the pole formula.
  const DoublePoleState s{0.0, I, 0.8, 0.0, 0.0};
  const int n = 4000;
  const double h = 2.0 * pi / n;
  std::vector<double> xs(n + 1), u(n + 1, 0.0), ref(n + 1);
  for (int j = 0; j <= n; ++j) xs[j] = -pi + h * j;
  auto hw = [&](double x) { return eval_hilbert(s, x); };
  const int j0 = n / 2;  // x = 0
  for (int j = j0 + 1; j <= n; ++j) {
    const double a = xs[j - 1], b = xs[j];
    u[j] = u[j - 1] + (b - a) / 6.0 * (hw(a) + 4.0 * hw(0.5 * (a + b)) + hw(b));
  }
  for (int j = j0 - 1; j >= 0; --j) {
    const double a = xs[j], b = xs[j + 1];
    u[j] = u[j + 1] - (b - a) / 6.0 * (hw(a) + 4.0 * hw(0.5 * (a + b)) + hw(b));
  }
  double mu = 0.0, mr = 0.0;
  for (int j = 0; j < n; ++j) {
    ref[j] = eval_velocity(s, xs[j]);
    mu += u[j] / n;
    mr += ref[j] / n;
  }
  double err = 0.0;
  for (int j = 0; j < n; ++j) err = std::max(err, std::abs((u[j] - mu) - (ref[j] - mr)));
  EXPECT_LT(err, 1e-8);
}

TEST(Velocity, RealAtRandomPoints) {
  const DoublePoleState s{0.0, cplx(0.3, 0.7), cplx(0.9, 0.4), 0.0, 0.1};
  const cplx A = -2.0 * I * s.amp2 / (1.0 - s.loc * s.loc);
  for (double x : {-2.0, -0.3, 0.4, 3.0}) {
    const cplx X = x_to_X(x);
    const cplx half = A * detail::pole_term(X, s.loc, 1);
    const cplx full = half + std::conj(half) + s.gauge_q;
    EXPECT_LT(std::abs(full.imag()), 1e-12);
    EXPECT_NEAR(full.real(), eval_velocity(s, x), 1e-12);
  }
}

TEST(States, EmbedReduceIsIdentity) {
  const RealReducedState r{0.5, -1.25, 0.3};
  const auto back = reduce(embed(r));
  EXPECT_EQ(back.t, r.t);
  EXPECT_EQ(back.omega2i, r.omega2i);
  EXPECT_EQ(back.vc, r.vc);
}

TEST(States, ValidationRejectsBadLocations) {
  EXPECT_THROW(validate(PoleFamilyState{0.0, {Pole{1.0, cplx(-0.1, 0.0)}}, 0.0}), Error);
  EXPECT_THROW(validate(PoleFamilyState{0.0, {Pole{1.0, 0.5}, Pole{2.0, 0.5}}, 0.0}), Error);
  EXPECT_THROW(validate(PoleFamilyState{}), Error);
  EXPECT_THROW(validate(DoublePoleState{0.0, I, 1.0, 0.0, 0.0}), Error);
  EXPECT_THROW(validate(RealReducedState{0.0, 1.0, 0.0}), Error);
  EXPECT_NO_THROW(validate(RealReducedState{0.0, 1.0, 0.5}));
}

TEST(States, CollisionIsReported) {
  const PoleFamilyState s{0.0, {Pole{1.0, 0.5}}, 0.0};
  try {
    eval_omega_minus(s, X_to_x(I * 0.5));
    FAIL() << "expected PoleCollision";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleCollision);
  }
}

TEST(Params, PoleSystemsAreTheFourPairs) {
  EXPECT_TRUE(is_pole_system(ModelParams{0.0, 0.0, 1.0}));
  EXPECT_TRUE(is_pole_system(ModelParams{0.5, 1.0, 1.0}));
  EXPECT_FALSE(is_pole_system(ModelParams{1.0, 0.0, 1.0}));
  EXPECT_FALSE(is_pole_system(ModelParams{0.0, 2.0, 1.0}));
}
