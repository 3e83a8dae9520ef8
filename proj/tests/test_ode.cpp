#include <gtest/gtest.h>

#include <cmath>

#include "gclm/dynamics.hpp"

using namespace gclm;

TEST(RhsA0, SigmaZeroHandValue) {
  const auto d = rhs_a0(PoleFamilyState{0.0, {Pole{1.0, 1.0}}, 0.0}, ModelParams{0.0, 0.0, 0.0});
  EXPECT_NEAR(std::abs(d.d_amp[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.d_loc[0] - 1.0), 0.0, 1e-15);
}

TEST(RhsA0, MeanDecaysForSigmaZero) {
  const auto d = rhs_a0(PoleFamilyState{0.0, {Pole{0.0, 1.0}}, 1.0}, ModelParams{0.0, 0.0, 0.5});
  EXPECT_DOUBLE_EQ(d.d_omega_av, -0.5);
}

TEST(RhsA0, SigmaOneHandValue) {
  const auto d = rhs_a0(PoleFamilyState{0.0, {Pole{0.0, 0.5}}, 0.0}, ModelParams{0.0, 1.0, 1.0});
  EXPECT_NEAR(std::abs(d.d_amp[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.d_loc[0] - 0.375), 0.0, 1e-15);
}

TEST(RhsA05, SigmaZeroHandValues) {
  // d w_i/dt = (1 - 0.5 + 0.3125)/(4 * 0.25 * 0.5625) - 1, dv/dt = -1.25/(4 * 0.5 * 0.75)
  const double dw = 0.8125 / 0.5625 - 1.0, dv = -1.25 / 1.5;
  const auto r = rhs_a05_real(RealReducedState{0.0, 1.0, 0.5}, ModelParams{0.5, 0.0, 1.0});
  EXPECT_NEAR(r.d_omega2i, dw, 1e-14);
  EXPECT_NEAR(r.d_vc, dv, 1e-14);
  const auto c = rhs_a05(DoublePoleState{0.0, I, 0.5, 0.0, 0.0}, ModelParams{0.5, 0.0, 1.0});
  // The complex system carries the gauge term; with q~ = 0 the real reduction still holds.
  EXPECT_NEAR(c.d_loc.real(), dv, 1e-14);
  EXPECT_NEAR(c.d_loc.imag(), 0.0, 1e-14);
  EXPECT_NEAR(c.d_amp2.real(), 0.0, 1e-14);
  EXPECT_NEAR(c.d_amp2.imag(), dw, 1e-14);
}

TEST(RhsA05, SigmaOneHandValues) {
  const double dv = -1.25 / 1.5 + 0.375;
  const double dw = 0.8125 / 0.5625 - 2.0 * 0.5 * 1.0;
  const auto r = rhs_a05_real(RealReducedState{0.0, 1.0, 0.5}, ModelParams{0.5, 1.0, 1.0});
  EXPECT_NEAR(r.d_vc, dv, 1e-14);
  EXPECT_NEAR(r.d_omega2i, dw, 1e-14);
}

TEST(RhsA05, ZeroAmplitude) {
  const auto r0 = rhs_a05_real(RealReducedState{0.0, 0.0, 0.4}, ModelParams{0.5, 0.0, 2.0});
  EXPECT_EQ(r0.d_omega2i, 0.0);
  EXPECT_EQ(r0.d_vc, 0.0);
  const auto r1 = rhs_a05_real(RealReducedState{0.0, 0.0, 0.4}, ModelParams{0.5, 1.0, 2.0});
  EXPECT_EQ(r1.d_omega2i, 0.0);
  EXPECT_NEAR(r1.d_vc, 2.0 * (1.0 - 0.16) / 2.0, 1e-15);
}

TEST(RhsLine, HandValuesAndCircleLimit) {
  ModelParams line{0.5, 0.0, 0.0, Domain::RealLine};
  const auto r = rhs_real_line(RealReducedState{0.0, 1.0, 0.1}, line);
  EXPECT_NEAR(r.d_omega2i, 25.0, 1e-12);
  EXPECT_NEAR(r.d_vc, -2.5, 1e-12);
  line.sigma = 1.0;
  line.nu = 1.0;
  EXPECT_NEAR(rhs_real_line(RealReducedState{0.0, 0.0, 0.3}, line).d_vc, 0.5, 1e-15);

  const RealReducedState s{0.0, 1.0, 1e-3};
  for (double sigma : {0.0, 1.0}) {
    const auto c = rhs_a05_real(s, ModelParams{0.5, sigma, 0.0});
    const auto l = rhs_real_line(s, ModelParams{0.5, sigma, 0.0, Domain::RealLine});
    EXPECT_LT(std::abs(c.d_vc - l.d_vc) / std::abs(l.d_vc), 1e-5);
    EXPECT_LT(std::abs(c.d_omega2i - l.d_omega2i) / std::abs(l.d_omega2i), 1e-5);
  }
}

TEST(Rhs, RejectsUnsupportedPairs) {
  EXPECT_THROW(rhs_a0(PoleFamilyState{0.0, {Pole{1.0, 1.0}}, 0.0}, ModelParams{0.0, 2.0, 1.0}), Error);
}

TEST(Integrator, SimplePoleCollapsesAtTwo) {
  const auto tr = integrate(PoleFamilyState{0.0, {Pole{-1.0, 1.0}}, 0.0}, ModelParams{0.0, 0.0, 0.0}, 10.0);
  EXPECT_EQ(tr.event.kind, EventKind::CollapseToZero);
  EXPECT_NEAR(tr.event.t_event, 2.0, 1e-6);
  ASSERT_TRUE(tr.event.x_c.has_value());
  EXPECT_NEAR(*tr.event.x_c, 0.0, 1e-12);
}

TEST(Integrator, EventStatesRespectThresholds) {
  IntegratorOptions opt;
  const auto a = integrate(PoleFamilyState{0.0, {Pole{-1.0, 1.0}}, 0.0}, ModelParams{0.0, 0.0, 0.0}, 10.0, opt);
  ASSERT_EQ(a.event.kind, EventKind::CollapseToZero);
  EXPECT_LE(a.event.state.poles[0].loc.real(), opt.eps_collapse * (1.0 + 1e-6));
  const auto b = integrate(PoleFamilyState{0.0, {Pole{1.0, 1.0}}, 0.0}, ModelParams{0.0, 0.0, 0.0}, 10.0, opt);
  ASSERT_EQ(b.event.kind, EventKind::CollapseToInfinity);
  EXPECT_GE(b.event.state.poles[0].loc.real(), (1.0 / opt.eps_collapse) * (1.0 - 1e-6));
}

TEST(Integrator, OutputTimesAreHitExactly) {
  IntegratorOptions opt;
  opt.output_times = {0.1, 0.25, 0.5};
  opt.record_steps = false;
  const auto tr = integrate(PoleFamilyState{0.0, {Pole{cplx(0.2, 0.1), cplx(0.8, 0.3)}}, 0.0},
                            ModelParams{0.0, 1.0, 0.5}, 0.75, opt);
  std::vector<double> ts;
  for (const auto& s : tr.samples) ts.push_back(s.t);
  for (double t : opt.output_times) EXPECT_NE(std::find(ts.begin(), ts.end(), t), ts.end()) << t;
  EXPECT_TRUE(std::is_sorted(ts.begin(), ts.end()));
}

TEST(Integrator, Deterministic) {
  const PoleFamilyState s{0.0, {Pole{cplx(0.5, -0.25), cplx(0.5, -1.0)}}, 0.0};
  const auto a = integrate(s, ModelParams{0.0, 0.0, 0.2}, 50.0);
  const auto b = integrate(s, ModelParams{0.0, 0.0, 0.2}, 50.0);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].poles[0].loc, b.samples[i].poles[0].loc);
}

TEST(PhaseFlow, MirrorSymmetry) {
  for (int sigma : {0, 1}) {
    IntegratorOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.record_steps = false;
    for (int i = 1; i <= 20; ++i) opt.output_times.push_back(0.05 * i);
    const auto a = integrate_phase(PhasePoint{0.0, 0.6, 0.8}, sigma, 1.0, opt);
    const auto b = integrate_phase(PhasePoint{0.0, 1.0 / 0.6, -0.8}, sigma, 1.0, opt);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
      EXPECT_NEAR(a.samples[k].t, b.samples[k].t, 1e-14);
      EXPECT_NEAR(1.0 / a.samples[k].vc, b.samples[k].vc, 1e-9);
      EXPECT_NEAR(-a.samples[k].p, b.samples[k].p, 1e-9);
    }
  }
}

TEST(PhaseFlow, GlobalRegionDecays) {
  const auto tr = integrate_phase(PhasePoint{0.0, 0.5, 0.9}, 1, 100.0);
  EXPECT_EQ(tr.event.kind, EventKind::HorizonReached);
  EXPECT_LT(std::abs(tr.event.state.p), 1e-3);
}
