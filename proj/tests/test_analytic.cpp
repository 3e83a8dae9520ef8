#include <gtest/gtest.h>

#include <cmath>

#include "gclm/analytic.hpp"
#include "gclm/dynamics.hpp"
#include "gclm/roots.hpp"

using namespace gclm;

namespace {

const PoleFamilyState kLoop{0.0, {Pole{cplx(0.5, -0.25), cplx(0.5, -1.0)}}, 0.0};

// Central difference of the closed form against the ODE right-hand side.
template <class Exact>
double ode_defect(Exact exact, const ModelParams& p, double t) {
  const double h = 1e-5;
  const auto a = exact(t + h), b = exact(t - h), c = exact(t);
  const auto d = rhs_a0(c, p);
  const cplx damp = (a.poles[0].amp - b.poles[0].amp) / (2.0 * h);
  const cplx dloc = (a.poles[0].loc - b.poles[0].loc) / (2.0 * h);
  return std::max(std::abs(damp - d.d_amp[0]), std::abs(dloc - d.d_loc[0]));
}

}  // namespace

TEST(ExactSigma0, InitialTimeIsIdentity) {
  const auto s = exact_a0_sigma0(kLoop, 0.2, 0.0);
  EXPECT_EQ(s.poles[0].loc, kLoop.poles[0].loc);
  EXPECT_EQ(s.poles[0].amp, kLoop.poles[0].amp);
}

TEST(ExactSigma0, InviscidCollapse) {
  // v(t) = (1 - t/2)/(1 + t/2), w(t) = -1/(1 + t/2)^2
  const PoleFamilyState s{0.0, {Pole{-1.0, 1.0}}, 0.0};
  for (double t : {0.5, 1.0, 1.5}) {
    const auto e = exact_a0_sigma0(s, 0.0, t);
    EXPECT_NEAR(std::abs(e.poles[0].loc - (1.0 - t / 2) / (1.0 + t / 2)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.poles[0].amp + 1.0 / ((1.0 + t / 2) * (1.0 + t / 2))), 0.0, 1e-14);
  }
  const auto end = exact_a0_sigma0(s, 0.0, 2.0);
  EXPECT_NEAR(std::abs(end.poles[0].loc), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(end.poles[0].amp + 0.25), 0.0, 1e-14);
}

TEST(ExactSigma0, SatisfiesTheOde) {
  for (double wav : {0.0, 0.3}) {
    PoleFamilyState s = kLoop;
    s.omega_av = wav;
    for (double nu : {0.0, 0.2}) {
      const ModelParams p{0.0, 0.0, nu};
      for (double t : {0.3, 1.0, 2.0})
        EXPECT_LT(ode_defect([&](double tt) { return exact_a0_sigma0(s, nu, tt); }, p, t), 1e-8);
    }
  }
}

TEST(ExactSigma0, MeanLimitIsContinuous) {
  PoleFamilyState s = kLoop;
  s.omega_av = 1e-8;
  for (double t = 0.0; t <= 1.0; t += 0.1) {
    const auto a = exact_a0_sigma0(s, 0.2, t), b = exact_a0_sigma0(kLoop, 0.2, t);
    EXPECT_LT(std::abs(a.poles[0].loc - b.poles[0].loc), 1e-6);
  }
}

TEST(ExactSigma1, InitialTimeAndSmallNuLimit) {
  const auto s = exact_a0_sigma1(kLoop, 0.2, 0.0);
  EXPECT_NEAR(std::abs(s.poles[0].loc - kLoop.poles[0].loc), 0.0, 1e-15);
  const PoleFamilyState r{0.0, {Pole{-1.0, 1.0}}, 0.0};
  for (double t : {0.5, 1.0, 1.5}) {
    const auto a = exact_a0_sigma1(r, 1e-8, t), b = exact_a0_sigma0(r, 0.0, t);
    EXPECT_LT(std::abs(a.poles[0].loc - b.poles[0].loc), 1e-6);
  }
}

TEST(ExactSigma1, SatisfiesTheOde) {
  const ModelParams p{0.0, 1.0, 0.2};
  for (double t : {0.3, 1.0, 2.0})
    EXPECT_LT(ode_defect([&](double tt) { return exact_a0_sigma1(kLoop, 0.2, tt); }, p, t), 1e-8);
}

TEST(Circle, RealDataGivesALine) {
  EXPECT_TRUE(circle_params(PoleFamilyState{0.0, {Pole{-1.0, 2.0}}, 0.0}, 0.1).degenerate_line);
}

TEST(Circle, ClosedFormStaysOnCircle) {
  for (double wav : {0.0, 0.4}) {
    PoleFamilyState s = kLoop;
    s.omega_av = wav;
    const auto g = circle_params(s, 0.1);
    ASSERT_FALSE(g.degenerate_line);
    for (double t = 0.0; t < 30.0; t += 0.37) {
      try {
        EXPECT_LT(std::abs(circle_deviation(g, exact_a0_sigma0(s, 0.1, t).poles[0].loc)), 1e-9) << t;
      } catch (const Error&) {
        break;
      }
    }
  }
}

TEST(AuxFunctions, ValuesAtOne) {
  EXPECT_NEAR(f0(1.0), 0.0, 1e-14);
  EXPECT_NEAR(f_inf(1.0), 0.0, 1e-14);
}

TEST(AuxFunctions, MinimumOfF0) {
  const auto m = find_minimum([](double v) { return f0(v); }, 0.05, 0.99);
  EXPECT_NEAR(m.x, 0.7211367, 1e-5);
  EXPECT_NEAR(m.value, -0.73040598, 1e-6);
}

TEST(AuxFunctions, FInfAtTwo) {
  // Frozen after agreement with direct quadrature below.
  EXPECT_NEAR(f_inf(2.0), -8.38679, 1e-4);
}

TEST(AuxFunctions, F1MatchesQuadratureOfItsDerivative) {
  // f1(b) - f1(a) = integral of f1' (Simpson, fine grid); checks series and reflection branches.
  for (auto [a, b] : {std::pair{0.05, 0.3}, std::pair{0.3, 0.9}, std::pair{1.2, 5.0}, std::pair{5.0, 30.0}}) {
    const int n = 20000;
    const double h = (b - a) / n;
    double s = f1_prime(a) + f1_prime(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f1_prime(a + i * h);
    EXPECT_NEAR(f1(b) - f1(a), s * h / 3.0, 1e-9) << a << " " << b;
  }
}

TEST(AuxFunctions, F1ContinuousAcrossBranches) {
  for (double v : {0.1, 10.0}) EXPECT_NEAR(f1(v * (1 + 1e-12)), f1(v * (1 - 1e-12)), 1e-9);
}

TEST(Implicit, InitialTimeAndCollapseTime) {
  const RealReducedState s{0.0, 1.0, 0.7211367};
  EXPECT_NEAR(implicit_a05_sigma0(s, 1.0, 0.0).vc, s.vc, 1e-12);
  // RHS vanishes at t_c = -ln(1 + f0/2) = -ln(1 - 0.36520299)
  const double tc = -std::log(1.0 + f0(0.7211367) / 2.0);
  EXPECT_NEAR(tc, 0.4544500, 1e-7);
  EXPECT_LT(implicit_a05_sigma0(s, 1.0, tc * (1.0 - 1e-9)).vc, 5e-2);
}

TEST(Implicit, SolvesTheOdeInEachSector) {
  for (const RealReducedState s : {RealReducedState{0.0, 0.4, 0.7211367}, RealReducedState{0.0, -3.0, 0.5},
                                   RealReducedState{0.0, 5.0, 2.0}, RealReducedState{0.0, 0.1, 0.5}}) {
    const auto tr = integrate(s, ModelParams{0.5, 0.0, 1.0}, 50.0);
    for (std::size_t k = 0; k < tr.samples.size(); k += std::max<std::size_t>(1, tr.samples.size() / 20)) {
      const auto& x = tr.samples[k];
      if (x.t > 0.9 * tr.event.t_event) break;
      EXPECT_LT(std::abs(implicit_a05_sigma0(s, 1.0, x.t).vc - x.vc) / x.vc, 1e-8);
    }
  }
}
