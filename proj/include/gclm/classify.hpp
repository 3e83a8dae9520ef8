#pragma once

/*
 * Blowup classification and collapse-time prediction.
 *
 * a = 1/2, sigma = 0 (real data w = Im A_2, v):
 *   type A iff (v0 < 1, w0 > -nu f0(v0)/2) or (v0 > 1, w0 < -nu f0(v0)/2)
 *   type B iff (v0 < 1, w0 < -nu f_inf(v0)/2) or (v0 > 1, w0 > -nu f_inf(v0)/2)
 *   e^{-nu t_c} = 1 + nu f/(2 w0), f = f0 (A) or f_inf (B); t_c = -f/(2 w0) when nu = 0.
 *
 * a = 0, sigma = 1 thresholds at v0 (m = nu t_c, r = (1-v0)/(1+v0)):
 *   e^m (1 - m) = r  ->  w_l = -(nu/2)(1+v0)^2 e^m
 *   e^m (m - 1) = r  ->  w_s = +(nu/2)(1+v0)^2 e^m
 *
 * Self-similar fits: v ~ tau^s, |amp| ~ tau^g, tau = t_c - t;
 *   alpha = |s|, beta = n s - g with n the order of the pole.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gclm/analytic.hpp"
#include "gclm/dynamics.hpp"
#include "gclm/errors.hpp"
#include "gclm/model.hpp"
#include "gclm/ode.hpp"
#include "gclm/roots.hpp"

namespace gclm {

enum class Verdict { BlowupA, BlowupB, GlobalExistence, InfiniteTimeBlowup, Unclassified };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BlowupA: return "BlowupA";
    case Verdict::BlowupB: return "BlowupB";
    case Verdict::GlobalExistence: return "GlobalExistence";
    case Verdict::InfiniteTimeBlowup: return "InfiniteTimeBlowup";
    case Verdict::Unclassified: return "Unclassified";
  }
  return "Unknown";
}

struct ClassificationResult {
  Verdict verdict = Verdict::Unclassified;
  std::optional<double> t_c;
  std::optional<double> x_c;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> r_c;
  std::string note;
};

struct AuxValues {
  double f0;
  double f_inf;
  double f1;
  std::optional<double> f2;
};

inline AuxValues aux_functions(double v) {
  if (v == 0.0) return {0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "v must be > 0");
  AuxValues out{f0(v), f_inf(v), f1(v), std::nullopt};
  if (std::abs(v - 1.0) >= singular_location_tol) out.f2 = f2(v);
  return out;
}

inline constexpr double boundary_tol = 1e-12;

namespace detail {

inline bool near_boundary(double w, double bound) {
  return std::abs(w - bound) <= boundary_tol * std::max(1.0, std::abs(bound));
}

// Collapse time from e^{-nu t} = 1 + nu f/(2 w).
inline double collapse_time(double f, double w, double nu) {
  if (nu == 0.0) return -f / (2.0 * w);
  return -std::log1p(nu * f / (2.0 * w)) / nu;
}

}  // namespace detail

inline ClassificationResult classify_a05_sigma0(const RealReducedState& init, double nu) {
  if (!(nu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "nu must be >= 0");
  validate(init);
  const double v = init.vc, w = init.omega2i;
  ClassificationResult r;
  if (w == 0.0) {
    r.verdict = Verdict::GlobalExistence;
    r.note = "zero field";
    return r;
  }
  const double fa = f0(v), fb = f_inf(v);
  const double bound_a = -0.5 * nu * fa, bound_b = -0.5 * nu * fb;
  if (detail::near_boundary(w, bound_a) || detail::near_boundary(w, bound_b)) {
    r.verdict = Verdict::InfiniteTimeBlowup;
    return r;
  }
  const bool below = v < 1.0;
  const bool type_a = below ? w > bound_a : w < bound_a;
  const bool type_b = below ? w < bound_b : w > bound_b;
  if (!type_a && !type_b) {
    r.verdict = Verdict::GlobalExistence;
    return r;
  }
  r.verdict = type_a ? Verdict::BlowupA : Verdict::BlowupB;
  r.t_c = detail::collapse_time(type_a ? fa : fb, w, nu);
  r.x_c = type_a ? 0.0 : pi;
  r.alpha = 1.0 / 3.0;
  r.beta = 1.0;
  r.r_c = 0.0;
  return r;
}

struct CollapsePrediction {
  double t_c;
  double x_c;
  EventKind kind;
};

namespace detail {

inline bool is_real_data(const PoleFamilyState& s) {
  const Pole& p = s.poles[0];
  return p.amp.imag() == 0.0 && p.loc.imag() == 0.0 && s.omega_av == 0.0;
}

// First positive zero of a convex h with h(0) > 0 and minimiser tmin (or none).
template <class H>
std::optional<double> first_zero_convex(H h, std::optional<double> tmin, double scale) {
  if (!tmin || *tmin <= 0.0) return std::nullopt;
  const double hm = h(*tmin);
  if (std::abs(hm) <= 1e-12 * scale) return *tmin;
  if (hm > 0.0) return std::nullopt;
  return find_root(h, 0.0, *tmin);
}

// Scan Re v of the exact solution for its first sign change on [0, t_max].
template <class Exact>
std::optional<CollapsePrediction> scan_exact(Exact exact, double t0, double t_max, std::size_t n) {
  double tp = t0, rp = exact(t0).poles[0].loc.real();
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = t0 + (t_max - t0) * double(i) / double(n);
    double re;
    try {
      re = exact(t).poles[0].loc.real();
    } catch (const Error&) {
      return CollapsePrediction{t, pi, EventKind::CollapseToInfinity};
    }
    if (re <= 0.0 || !std::isfinite(re)) {
      const double tc = find_root([&](double s) { return exact(s).poles[0].loc.real(); }, tp, t);
      return CollapsePrediction{tc, collapse_location(exact(tc).poles[0].loc), EventKind::CollapseToZero};
    }
    if (std::abs(re) > 1e12) return CollapsePrediction{t, pi, EventKind::CollapseToInfinity};
    tp = t;
    rp = re;
  }
  (void)rp;
  return std::nullopt;
}

}  // namespace detail

// Earliest positive collapse of a single a = 0 pole.  Real data use closed forms;
// complex data fall back to scanning the exact solution up to t_max.
inline CollapsePrediction predict_tc_a0(const PoleFamilyState& init, const ModelParams& params,
                                        double t_max = 1e3) {
  require_pole_system(params);
  if (params.a != 0.0) throw Error(ErrorKind::InvalidArgument, "predict_tc_a0 needs a = 0");
  validate(init);
  const Pole& p0 = detail::single_pole(init);
  const double nu = params.nu;
  if (!detail::is_real_data(init)) {
    if (params.sigma == 0.0 && nu == 0.0 && init.omega_av == 0.0) {
      // v(t) = (v0+1)/(1 - Omega t) - 1 reaches Re v = 0 where |1 - Omega t - (v0+1)/2|^2 = |v0+1|^2/4.
      const cplx Om = p0.amp / (1.0 + p0.loc), c = 0.5 * (p0.loc + 1.0);
      const double A = std::norm(Om), B = -2.0 * (std::conj(Om) * (1.0 - c)).real(),
                   C = std::norm(1.0 - c) - std::norm(c);
      const double disc = B * B - 4.0 * A * C;
      if (A > 0.0 && disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double r1 = (-B - sq) / (2.0 * A), r2 = (-B + sq) / (2.0 * A);
        const double tc = r1 > 0.0 ? r1 : r2;
        if (tc > 0.0) {
          const cplx v = exact_a0_sigma0(init, 0.0, init.t + tc).poles[0].loc;
          return {init.t + tc, detail::collapse_location(cplx(0.0, v.imag())), EventKind::CollapseToZero};
        }
      }
      throw Error(ErrorKind::NotCollapsing, "trajectory does not reach the real line");
    }
    auto exact = [&](double t) {
      return params.sigma == 0.0 ? exact_a0_sigma0(init, nu, t) : exact_a0_sigma1(init, nu, t);
    };
    if (auto hit = detail::scan_exact(exact, init.t, init.t + t_max, 200000)) return *hit;
    throw Error(ErrorKind::NotCollapsing, "no collapse found before t_max");
  }
  const double v0 = p0.loc.real(), w0 = p0.amp.real();
  const double Om = w0 / (1.0 + v0);
  if (Om == 0.0) throw Error(ErrorKind::NotCollapsing, "zero amplitude");
  if (params.sigma == 0.0) {
    const double theta = Om < 0.0 ? -v0 / Om : 1.0 / Om;
    double tc;
    if (nu == 0.0) {
      tc = theta;
    } else {
      if (nu * theta >= 1.0) throw Error(ErrorKind::NotCollapsing, "dissipation wins");
      tc = -std::log1p(-nu * theta) / nu;
    }
    return Om < 0.0 ? CollapsePrediction{init.t + tc, 0.0, EventKind::CollapseToZero}
                    : CollapsePrediction{init.t + tc, pi, EventKind::CollapseToInfinity};
  }
  const double h1 = 0.5 * (1.0 + v0);
  if (Om < 0.0) {
    auto h = [&](double t) { return h1 * (std::exp(nu * t) + 1.0) - 1.0 + Om * t; };
    std::optional<double> tmin;
    if (nu == 0.0) {
      tmin = -v0 / Om;
    } else {
      const double e = -Om / (nu * h1);
      if (e > 1.0) tmin = std::log(e) / nu;
    }
    if (auto tc = detail::first_zero_convex(h, tmin, 1.0 + v0))
      return {init.t + *tc, 0.0, EventKind::CollapseToZero};
    throw Error(ErrorKind::NotCollapsing, "numerator stays positive");
  }
  auto g = [&](double t) { return 1.0 - Om * t + h1 * std::expm1(nu * t); };
  std::optional<double> tmin;
  if (nu == 0.0) {
    tmin = 1.0 / Om;
  } else {
    const double e = Om / (nu * h1);
    if (e > 1.0) tmin = std::log(e) / nu;
  }
  if (auto tc = detail::first_zero_convex(g, tmin, 1.0 + v0)) return {init.t + *tc, pi, EventKind::CollapseToInfinity};
  throw Error(ErrorKind::NotCollapsing, "denominator stays positive");
}

struct Thresholds {
  double omega_l;
  double omega_s;
  double m_l;  // nu t_c on the omega_l branch
  double m_s;
};

inline Thresholds thresholds_a0_sigma1(double v0, double nu) {
  if (!(v0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "v0 must be > 0");
  if (!(nu > 0.0)) throw Error(ErrorKind::InvalidArgument, "nu must be > 0");
  const double r = (1.0 - v0) / (1.0 + v0);
  // e^m (1-m) decreases from 1 on m > 0; e^m (m-1) increases from -1.
  auto fl = [r](double m) { return std::exp(m) * (1.0 - m) - r; };
  auto fs = [r](double m) { return std::exp(m) * (m - 1.0) - r; };
  double hi = 2.0;
  while (fl(hi) > 0.0 || fs(hi) < 0.0) hi *= 2.0;
  const double ml = r == 0.0 ? 1.0 : find_root(fl, 0.0, hi);
  const double ms = r == 0.0 ? 1.0 : find_root(fs, 0.0, hi);
  const double c = 0.5 * nu * (1.0 + v0) * (1.0 + v0);
  return {-c * std::exp(ml), c * std::exp(ms), ml, ms};
}

// Threshold norms of the single real pole at omega_l(v0): B0 and L2 in units of nu.
inline double threshold_b0(double v0, double nu) {
  const Thresholds th = thresholds_a0_sigma1(v0, nu);
  const double r = (1.0 - v0) / (1.0 + v0);
  return 2.0 * nu * std::exp(th.m_l) / (1.0 - std::abs(r));
}

inline double threshold_l2(double v0, double nu) {
  const Thresholds th = thresholds_a0_sigma1(v0, nu);
  const double r = (1.0 - v0) / (1.0 + v0);
  return 2.0 * std::sqrt(pi) * nu * std::exp(th.m_l) / std::sqrt(1.0 - r * r);
}

// Exponent fits.

struct ExponentFit {
  double alpha;
  double beta;
  double loc_slope;
  double amp_slope;
  double t_c;
  double tau_lo;
  double tau_hi;
  std::size_t samples;
};

struct ExponentFitOptions {
  std::optional<double> t_c;     // defaults to the event time
  std::optional<double> tau_lo;  // defaults to a gap-aware lower end
  double decades = 1.0;
};

namespace detail {

struct PoleView {
  cplx amp;
  cplx loc;
};

inline std::size_t pole_count(const PoleFamilyState& s) { return s.poles.size(); }
inline std::size_t pole_count(const DoublePoleState&) { return 1; }
inline std::size_t pole_count(const RealReducedState&) { return 1; }
inline PoleView pole_view(const PoleFamilyState& s, std::size_t k) { return {s.poles[k].amp, s.poles[k].loc}; }
inline PoleView pole_view(const DoublePoleState& s, std::size_t) { return {s.amp2, s.loc}; }
inline PoleView pole_view(const RealReducedState& s, std::size_t) { return {cplx(0.0, s.omega2i), s.vc}; }
inline int pole_order(const PoleFamilyState&) { return 1; }
inline int pole_order(const DoublePoleState&) { return 2; }
inline int pole_order(const RealReducedState&) { return 2; }

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

// Lower end of the fit window: far enough from t_c that the event offset and
// the rounding of t_c - t do not bias the slope.
template <class State>
double default_tau_lo(const Trajectory<State>& tr, double t_c) {
  const double floor = 1e5 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_c));
  const auto& s = tr.samples;
  if (s.size() < 2 || tr.event.kind == EventKind::HorizonReached) return floor;
  const bool to_zero = tr.event.kind == EventKind::CollapseToZero;
  auto key = [&](const State& x) {
    double best = to_zero ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t k = 0; k < detail::pole_count(x); ++k) {
      const double re = detail::pole_view(x, k).loc.real();
      best = to_zero ? std::min(best, re) : std::max(best, re);
    }
    return to_zero ? best : 1.0 / best;
  };
  const State& a = s[s.size() - 2];
  const State& b = s.back();
  const double ka = key(a), kb = key(b);
  if (!(ka > kb) || b.t <= a.t) return floor;
  const double gap = kb * (b.t - a.t) / (ka - kb);
  return std::max(floor, 100.0 * gap);
}

// Log-spaced sample times covering the fit window before t_c.
inline std::vector<double> approach_times(double t_c, double tau_lo, double decades, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = decades * (1.0 - double(i) / double(n - 1));
    out.push_back(t_c - tau_lo * std::pow(10.0, e));
  }
  return out;
}

template <class State>
ExponentFit estimate_exponents(const Trajectory<State>& tr, const ExponentFitOptions& opt = {}) {
  const bool collapsed =
      tr.event.kind == EventKind::CollapseToZero || tr.event.kind == EventKind::CollapseToInfinity;
  if (!opt.t_c && !collapsed) throw Error(ErrorKind::InsufficientData, "trajectory did not collapse");
  const double tc = opt.t_c.value_or(tr.event.t_event);
  const double lo = opt.tau_lo.value_or(default_tau_lo(tr, tc));
  const double hi = lo * std::pow(10.0, opt.decades);
  if (tr.samples.empty()) throw Error(ErrorKind::InsufficientData, "no samples");
  // Track the pole that ends up closest to the real line.
  const bool to_inf = tr.event.kind == EventKind::CollapseToInfinity && !opt.t_c;
  const State* ref = &tr.samples.back();
  for (const auto& s : tr.samples)
    if (std::abs(tc - s.t) < std::abs(tc - ref->t)) ref = &s;
  std::size_t k = 0;
  for (std::size_t j = 1; j < detail::pole_count(*ref); ++j) {
    const double a = detail::pole_view(*ref, j).loc.real(), b = detail::pole_view(*ref, k).loc.real();
    if (to_inf ? a > b : a < b) k = j;
  }
  std::vector<double> x, ly, la;
  for (const auto& s : tr.samples) {
    const double tau = tc - s.t;
    if (!(tau >= lo && tau <= hi)) continue;
    const auto pv = detail::pole_view(s, k);
    x.push_back(std::log(tau));
    ly.push_back(std::log(pv.loc.real()));
    la.push_back(std::log(std::abs(pv.amp)));
  }
  if (x.size() < 20) throw Error(ErrorKind::InsufficientData, "fewer than 20 samples in the fit window");
  const double sv = detail::slope(x, ly), sa = detail::slope(x, la);
  const int n = detail::pole_order(tr.samples.front());
  return {std::abs(sv), n * sv - sa, sv, sa, tc, lo, hi, x.size()};
}

// Integrates once to locate the event, then again with the fit window densely sampled.
template <class State>
Trajectory<State> resolve_approach(const State& s0, const ModelParams& p, double horizon,
                                   IntegratorOptions opt = {}, std::size_t n = 60, double decades = 1.0) {
  const auto first = integrate(s0, p, horizon, opt);
  if (first.event.kind != EventKind::CollapseToZero && first.event.kind != EventKind::CollapseToInfinity)
    return first;
  const double tc = first.event.t_event;
  const double lo = default_tau_lo(first, tc);
  auto times = approach_times(tc, lo, decades, n);
  times.erase(std::remove_if(times.begin(), times.end(), [&](double t) { return t <= s0.t; }), times.end());
  opt.output_times = times;
  return integrate(s0, p, horizon, opt);
}

// Two-scale speed r_c = 2 Im v'/(1 + (Im v)^2) at the collapsing pole.
inline double two_scale_params(const PoleFamilyState& s, const ModelParams& p) {
  const auto d = rhs_a0(s, p);
  std::size_t k = 0;
  for (std::size_t j = 1; j < s.poles.size(); ++j)
    if (s.poles[j].loc.real() < s.poles[k].loc.real()) k = j;
  const double im = s.poles[k].loc.imag();
  return 2.0 * d.d_loc[k].imag() / (1.0 + im * im);
}

inline double two_scale_params(const DoublePoleState& s, const ModelParams& p) {
  const auto d = rhs_a05(s, p);
  const double im = s.loc.imag();
  return 2.0 * d.d_loc.imag() / (1.0 + im * im);
}

// Collapse time of the real a = 1/2 system for any sigma: closed form for
// sigma = 0, otherwise the (v, p) phase system rescaled to nu = 1.
inline std::optional<CollapsePrediction> predict_tc_a05(const RealReducedState& init, const ModelParams& p,
                                                       double horizon, const IntegratorOptions& opt = {}) {
  require_pole_system(p);
  if (p.sigma == 0.0) {
    const auto c = classify_a05_sigma0(init, p.nu);
    if (c.verdict != Verdict::BlowupA && c.verdict != Verdict::BlowupB) return std::nullopt;
    return CollapsePrediction{init.t + *c.t_c, *c.x_c,
                              c.verdict == Verdict::BlowupA ? EventKind::CollapseToZero
                                                            : EventKind::CollapseToInfinity};
  }
  if (!(p.nu > 0.0)) throw Error(ErrorKind::InvalidArgument, "phase rescaling needs nu > 0");
  validate(init);
  const double v = init.vc;
  const PhasePoint pt{0.0, v, init.omega2i / (p.nu * v * (1.0 - v * v))};
  const auto tr = integrate_phase(pt, 1, p.nu * horizon, opt);
  if (tr.event.kind != EventKind::CollapseToZero && tr.event.kind != EventKind::CollapseToInfinity)
    return std::nullopt;
  return CollapsePrediction{init.t + tr.event.t_event / p.nu,
                            tr.event.kind == EventKind::CollapseToZero ? 0.0 : pi, tr.event.kind};
}

// Flow restricted to an infinite-time-blowup boundary w = -nu f(v)/2,
//   v' = nu f(v)(1+v^2)/(8 v (1-v^2)),  f = f0 (type A) or f_inf (type B).
struct BoundaryPoint {
  double t = 0.0;
  double vc = 1.0;
};

class BoundarySystem {
 public:
  using State = BoundaryPoint;
  BoundarySystem(double nu, bool type_a) : nu_(nu), type_a_(type_a) {}
  std::size_t dim() const { return 1; }
  void pack(const State& s, double* y) const { y[0] = std::log(s.vc); }
  State unpack(double t, const double* y) const { return {t, std::exp(y[0])}; }
  void rhs(const double* y, double* dy) const { dy[0] = log_rate(std::exp(y[0])); }
  double min_loc(const double* y) const { return std::exp(y[0]); }
  double max_loc(const double* y) const { return std::exp(y[0]); }
  std::optional<std::string> invalid(const double* y) const {
    if (!std::isfinite(y[0])) return "non-finite state";
    return std::nullopt;
  }
  std::optional<std::string> invalid_between(const double*, const double*) const { return std::nullopt; }
  std::optional<double> collapse_x(const double* y, bool) const { return detail::collapse_location(std::exp(y[0])); }

  // d(log v)/dt
  double log_rate(double v) const {
    const double v2 = v * v;
    if (std::abs(v - 1.0) < 1e-6) {
      // f(v)/(1 - v^2) is smooth through v = 1; use the symmetric difference.
      const double h = 1e-5;
      return 0.5 * (log_rate(1.0 - h) + log_rate(1.0 + h));
    }
    const double f = type_a_ ? f0(v) : f_inf(v);
    return nu_ * f * (1.0 + v2) / (8.0 * v2 * (1.0 - v2));
  }

 private:
  double nu_;
  bool type_a_;
};

// Limits of v e^{nu t/3} (type A) and v e^{-nu t/3} (type B) on the boundaries.
inline double boundary_constant_a(double v0) { return std::cbrt(3.0 * f1(v0) / 8.0); }
inline double boundary_constant_b(double v0) { return std::cbrt(8.0 / (3.0 * f1(1.0 / v0))); }

inline Trajectory<BoundaryPoint> integrate_boundary(double v0, double nu, bool type_a, double horizon,
                                                    const IntegratorOptions& opt = {}) {
  return integrate_system(BoundarySystem(nu, type_a), BoundaryPoint{0.0, v0}, horizon, opt);
}

}  // namespace gclm
