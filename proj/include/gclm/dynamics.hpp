#pragma once

/*
 * Pole dynamics right-hand sides.
 *
 * a = 0, N simple poles (A_k, v_k):
 *   A_k' = 2 A_k^2/(1+v_k) + 2 A_k sum_{l!=k} A_l (1/(v_k-v_l) + 1/(1+v_l)) + (i w_av - nu s_k) A_k
 *   v_k' = A_k + [sigma=1] nu (1 - v_k^2)/2
 *   s_k = 1 (sigma=0) or v_k (sigma=1);  w_av' = -nu w_av (sigma=0) or 0.
 *
 * a = 1/2, double pole (A_2, v), gauge q:
 *   v'   = -i(1-v^2) conj(A_2) / (2(1-conj v^2)(v+conj v)) + i v A_2/(2(1-v^2)) - i q (1-v^2)/4
 *          + [sigma=1] nu (1-v^2)/2
 *   A_2' = i(1-2v^2) A_2^2/(1-v^2)^2 + (-nu s + i q v + i w_av) A_2
 *          + i |A_2|^2 (1/(v+conj v)^2 + 1/(1-conj v^2)),   s = 1 or 2v.
 *
 * Real reduction A_2 = i w, v real, P = (1 - 2v^2 + 5v^4)/(4v^2(1-v^2)^2):
 *   w' = w^2 P - nu s w,   v' = -w(1+v^2)/(4v(1-v^2)) + [sigma=1] nu(1-v^2)/2.
 *
 * Phase variables p = w/(v(1-v^2)), nu = 1, R = (1/v - v)/2, Q = (1/v + v)/2:
 *   sigma=1: p' = p(pR - Q),  v' = -p(1+v^2)/4 + (1-v^2)/2
 *   sigma=0: p' = p(pR - 1),  v' = -p(1+v^2)/4
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gclm/model.hpp"
#include "gclm/ode.hpp"

namespace gclm {

struct PoleFamilyDerivative {
  std::vector<cplx> d_amp;
  std::vector<cplx> d_loc;
  double d_omega_av = 0.0;
};

struct DoublePoleDerivative {
  cplx d_amp2;
  cplx d_loc;
  double d_omega_av = 0.0;
};

struct RealReducedDerivative {
  double d_omega2i = 0.0;
  double d_vc = 0.0;
};

struct PhasePoint {
  double t = 0.0;
  double vc = 1.0;
  double p = 0.0;
};

namespace detail {

inline void rhs_a0_raw(std::size_t n, const cplx* amp, const cplx* loc, double wav, double sigma, double nu,
                       cplx* d_amp, cplx* d_loc, double& d_wav) {
  for (std::size_t k = 0; k < n; ++k) {
    const cplx w = amp[k], v = loc[k];
    cplx s = 2.0 * w * w / (1.0 + v);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == k) continue;
      const cplx dv = v - loc[l];
      if (std::abs(dv) < 1e-12) throw Error(ErrorKind::PoleCollision, "pole locations coincide");
      s += 2.0 * w * amp[l] * (1.0 / dv + 1.0 / (1.0 + loc[l]));
    }
    const cplx lin = sigma == 0.0 ? cplx(-nu) : -nu * v;
    d_amp[k] = s + (I * wav + lin) * w;
    d_loc[k] = w + (sigma == 0.0 ? cplx(0.0) : 0.5 * nu * (1.0 - v * v));
  }
  d_wav = sigma == 0.0 ? -nu * wav : 0.0;
}

inline void rhs_a05_raw(cplx w, cplx v, double wav, double q, double sigma, double nu, cplx& dw, cplx& dv,
                        double& dwav) {
  const cplx vb = std::conj(v), wb = std::conj(w);
  const cplx omv2 = 1.0 - v * v, omvb2 = 1.0 - vb * vb, vpvb = v + vb;
  dv = -I * omv2 * wb / (2.0 * omvb2 * vpvb) + w * I * v / (2.0 * omv2) - I * q * omv2 / 4.0;
  const cplx lin = sigma == 0.0 ? cplx(-nu) : -2.0 * nu * v;
  dw = I * (1.0 - 2.0 * v * v) * w * w / (omv2 * omv2) + (lin + I * q * v + I * wav) * w +
       I * std::norm(w) * (1.0 / (vpvb * vpvb) + 1.0 / omvb2);
  if (sigma != 0.0) dv += 0.5 * nu * omv2;
  dwav = sigma == 0.0 ? -nu * wav : 0.0;
}

inline void rhs_line_raw(cplx w, cplx v, double wav, double q, double sigma, double nu, cplx& dw, cplx& dv,
                         double& dwav) {
  const cplx vpvb = v + std::conj(v);
  dw = (sigma == 0.0 ? -nu : 0.0) * w + I * wav * w + I * std::norm(w) / (vpvb * vpvb);
  dv = -I * std::conj(w) / (2.0 * vpvb) - I * q / 4.0 + (sigma == 0.0 ? 0.0 : 0.5 * nu);
  dwav = sigma == 0.0 ? -nu * wav : 0.0;
}

inline void rhs_real_raw(double w, double v, double sigma, double nu, bool line, double& dw, double& dv) {
  if (line) {
    dw = w * w / (4.0 * v * v) - (sigma == 0.0 ? nu * w : 0.0);
    dv = -w / (4.0 * v) + (sigma == 0.0 ? 0.0 : 0.5 * nu);
    return;
  }
  const double v2 = v * v, om = 1.0 - v2;
  const double P = (1.0 - 2.0 * v2 + 5.0 * v2 * v2) / (4.0 * v2 * om * om);
  dw = w * w * P - (sigma == 0.0 ? nu : 2.0 * nu * v) * w;
  dv = -w * (1.0 + v2) / (4.0 * v * om) + (sigma == 0.0 ? 0.0 : 0.5 * nu * om);
}

inline void phase_raw(double v, double p, int sigma, double& dp, double& dv) {
  const double R = 0.5 * (1.0 / v - v), Q = 0.5 * (1.0 / v + v);
  if (sigma == 1) {
    dp = p * (p * R - Q);
    dv = -0.25 * p * (1.0 + v * v) + 0.5 * (1.0 - v * v);
  } else {
    dp = p * (p * R - 1.0);
    dv = -0.25 * p * (1.0 + v * v);
  }
}

inline void check_a05(cplx v) {
  if (!(v.real() > 0.0)) throw Error(ErrorKind::InvalidState, "Re v must be > 0");
  if (std::abs(1.0 - v * v) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "v = +-1");
}

inline double collapse_location(cplx v) { return (2.0 * std::atan(I * v)).real(); }

}  // namespace detail

inline PoleFamilyDerivative rhs_a0(const PoleFamilyState& s, const ModelParams& p) {
  require_pole_system(p);
  if (p.a != 0.0) throw Error(ErrorKind::InvalidArgument, "rhs_a0 needs a = 0");
  for (const auto& pole : s.poles)
    if (!(pole.loc.real() > 0.0)) throw Error(ErrorKind::InvalidState, "Re v must be > 0");
  const std::size_t n = s.poles.size();
  std::vector<cplx> amp(n), loc(n);
  for (std::size_t k = 0; k < n; ++k) {
    amp[k] = s.poles[k].amp;
    loc[k] = s.poles[k].loc;
  }
  PoleFamilyDerivative d{std::vector<cplx>(n), std::vector<cplx>(n), 0.0};
  detail::rhs_a0_raw(n, amp.data(), loc.data(), s.omega_av, p.sigma, p.nu, d.d_amp.data(), d.d_loc.data(),
                     d.d_omega_av);
  return d;
}

inline DoublePoleDerivative rhs_a05(const DoublePoleState& s, const ModelParams& p) {
  require_pole_system(p);
  if (p.a != 0.5) throw Error(ErrorKind::InvalidArgument, "rhs_a05 needs a = 1/2");
  detail::check_a05(s.loc);
  DoublePoleDerivative d;
  detail::rhs_a05_raw(s.amp2, s.loc, s.omega_av, gauge_q_effective(s), p.sigma, p.nu, d.d_amp2, d.d_loc,
                      d.d_omega_av);
  return d;
}

inline RealReducedDerivative rhs_a05_real(const RealReducedState& s, const ModelParams& p) {
  require_pole_system(p);
  validate(s);
  RealReducedDerivative d;
  detail::rhs_real_raw(s.omega2i, s.vc, p.sigma, p.nu, false, d.d_omega2i, d.d_vc);
  return d;
}

// Leading Laurent order in v about 0; the gauge on the line is q = gauge_q.
inline DoublePoleDerivative rhs_real_line(const DoublePoleState& s, const ModelParams& p) {
  require_pole_system(p);
  if (!(s.loc.real() > 0.0)) throw Error(ErrorKind::InvalidState, "Re v must be > 0");
  DoublePoleDerivative d;
  detail::rhs_line_raw(s.amp2, s.loc, s.omega_av, s.gauge_q, p.sigma, p.nu, d.d_amp2, d.d_loc, d.d_omega_av);
  return d;
}

inline RealReducedDerivative rhs_real_line(const RealReducedState& s, const ModelParams& p) {
  require_pole_system(p);
  if (!(s.vc > 0.0)) throw Error(ErrorKind::InvalidState, "vc must be > 0");
  RealReducedDerivative d;
  detail::rhs_real_raw(s.omega2i, s.vc, p.sigma, p.nu, true, d.d_omega2i, d.d_vc);
  return d;
}

// Integrator adapters.

class PoleFamilySystem {
 public:
  using State = PoleFamilyState;
  PoleFamilySystem(std::size_t n, const ModelParams& p) : n_(n), p_(p) {}
  std::size_t dim() const { return 4 * n_ + 1; }
  void pack(const State& s, double* y) const {
    for (std::size_t k = 0; k < n_; ++k) {
      y[4 * k] = s.poles[k].amp.real();
      y[4 * k + 1] = s.poles[k].amp.imag();
      y[4 * k + 2] = s.poles[k].loc.real();
      y[4 * k + 3] = s.poles[k].loc.imag();
    }
    y[4 * n_] = s.omega_av;
  }
  State unpack(double t, const double* y) const {
    State s;
    s.t = t;
    s.poles.resize(n_);
    for (std::size_t k = 0; k < n_; ++k)
      s.poles[k] = {cplx(y[4 * k], y[4 * k + 1]), cplx(y[4 * k + 2], y[4 * k + 3])};
    s.omega_av = y[4 * n_];
    return s;
  }
  void rhs(const double* y, double* dy) const {
    const auto* z = reinterpret_cast<const cplx*>(y);
    auto* dz = reinterpret_cast<cplx*>(dy);
    amp_.resize(n_);
    loc_.resize(n_);
    damp_.resize(n_);
    dloc_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      amp_[k] = z[2 * k];
      loc_[k] = z[2 * k + 1];
    }
    double dw = 0.0;
    detail::rhs_a0_raw(n_, amp_.data(), loc_.data(), y[4 * n_], p_.sigma, p_.nu, damp_.data(), dloc_.data(), dw);
    for (std::size_t k = 0; k < n_; ++k) {
      dz[2 * k] = damp_[k];
      dz[2 * k + 1] = dloc_[k];
    }
    dy[4 * n_] = dw;
  }
  double min_loc(const double* y) const {
    double m = y[2];
    for (std::size_t k = 1; k < n_; ++k) m = std::min(m, y[4 * k + 2]);
    return m;
  }
  double max_loc(const double* y) const {
    double m = y[2];
    for (std::size_t k = 1; k < n_; ++k) m = std::max(m, y[4 * k + 2]);
    return m;
  }
  std::optional<std::string> invalid(const double* y) const {
    for (std::size_t i = 0; i < dim(); ++i)
      if (!std::isfinite(y[i])) return "non-finite state";
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t l = 0; l < k; ++l)
        if (std::abs(cplx(y[4 * k + 2] - y[4 * l + 2], y[4 * k + 3] - y[4 * l + 3])) < 1e-12)
          return "PoleCollision";
    return std::nullopt;
  }
  std::optional<std::string> invalid_between(const double*, const double*) const { return std::nullopt; }
  std::optional<double> collapse_x(const double* y, bool to_zero) const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n_; ++k) {
      const bool better = to_zero ? y[4 * k + 2] < y[4 * best + 2] : y[4 * k + 2] > y[4 * best + 2];
      if (better) best = k;
    }
    return detail::collapse_location(cplx(y[4 * best + 2], y[4 * best + 3]));
  }

 private:
  std::size_t n_;
  ModelParams p_;
  mutable std::vector<cplx> amp_, loc_, damp_, dloc_;
};

inline constexpr double unit_ring_tol = 1e-6;

class DoublePoleSystem {
 public:
  using State = DoublePoleState;
  DoublePoleSystem(const ModelParams& p, double qtilde) : p_(p), qtilde_(qtilde) {}
  std::size_t dim() const { return 5; }
  void pack(const State& s, double* y) const {
    y[0] = s.amp2.real();
    y[1] = s.amp2.imag();
    y[2] = s.loc.real();
    y[3] = s.loc.imag();
    y[4] = s.omega_av;
  }
  State unpack(double t, const double* y) const {
    return State{t, cplx(y[0], y[1]), cplx(y[2], y[3]), y[4], qtilde_};
  }
  void rhs(const double* y, double* dy) const {
    const cplx w(y[0], y[1]), v(y[2], y[3]);
    cplx dw, dv;
    if (p_.domain == Domain::RealLine) {
      detail::rhs_line_raw(w, v, y[4], qtilde_, p_.sigma, p_.nu, dw, dv, dy[4]);
    } else {
      if (std::abs(1.0 - v * v) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "v = +-1");
      const double q = qtilde_ - 4.0 * (w / ((1.0 - v * v) * (1.0 + v))).real();
      detail::rhs_a05_raw(w, v, y[4], q, p_.sigma, p_.nu, dw, dv, dy[4]);
    }
    dy[0] = dw.real();
    dy[1] = dw.imag();
    dy[2] = dv.real();
    dy[3] = dv.imag();
  }
  double min_loc(const double* y) const { return y[2]; }
  double max_loc(const double* y) const { return y[2]; }
  std::optional<std::string> invalid(const double* y) const {
    for (int i = 0; i < 5; ++i)
      if (!std::isfinite(y[i])) return "non-finite state";
    if (p_.domain == Domain::Circle && std::abs(cplx(y[2] - 1.0, y[3])) < unit_ring_tol)
      return "location within 1e-6 of v = 1";
    return std::nullopt;
  }
  std::optional<std::string> invalid_between(const double* y0, const double* y1) const {
    if (p_.domain != Domain::Circle) return std::nullopt;
    const bool crossed = (y0[2] - 1.0) * (y1[2] - 1.0) <= 0.0;
    if (crossed && std::abs(y0[3]) < unit_ring_tol && std::abs(y1[3]) < unit_ring_tol)
      return "location crossed v = 1";
    return std::nullopt;
  }
  std::optional<double> collapse_x(const double* y, bool) const {
    return detail::collapse_location(cplx(y[2], y[3]));
  }

 private:
  ModelParams p_;
  double qtilde_;
};

class RealReducedSystem {
 public:
  using State = RealReducedState;
  explicit RealReducedSystem(const ModelParams& p) : p_(p) {}
  std::size_t dim() const { return 2; }
  void pack(const State& s, double* y) const {
    y[0] = s.omega2i;
    y[1] = s.vc;
  }
  State unpack(double t, const double* y) const { return State{t, y[0], y[1]}; }
  void rhs(const double* y, double* dy) const {
    if (!(y[1] > 0.0)) throw Error(ErrorKind::InvalidState, "vc must be > 0");
    const bool line = p_.domain == Domain::RealLine;
    if (!line && std::abs(y[1] - 1.0) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "vc = 1");
    detail::rhs_real_raw(y[0], y[1], p_.sigma, p_.nu, line, dy[0], dy[1]);
  }
  double min_loc(const double* y) const { return y[1]; }
  double max_loc(const double* y) const { return y[1]; }
  std::optional<std::string> invalid(const double* y) const {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) return "non-finite state";
    if (p_.domain == Domain::Circle && std::abs(y[1] - 1.0) < unit_ring_tol) return "location within 1e-6 of v = 1";
    return std::nullopt;
  }
  std::optional<std::string> invalid_between(const double* y0, const double* y1) const {
    if (p_.domain == Domain::Circle && (y0[1] - 1.0) * (y1[1] - 1.0) <= 0.0) return "location crossed v = 1";
    return std::nullopt;
  }
  std::optional<double> collapse_x(const double* y, bool) const { return detail::collapse_location(y[1]); }

 private:
  ModelParams p_;
};

// (v, p) phase variables, nu = 1.
class PhaseSystem {
 public:
  using State = PhasePoint;
  explicit PhaseSystem(int sigma) : sigma_(sigma) {}
  std::size_t dim() const { return 2; }
  void pack(const State& s, double* y) const {
    y[0] = s.vc;
    y[1] = s.p;
  }
  State unpack(double t, const double* y) const { return State{t, y[0], y[1]}; }
  void rhs(const double* y, double* dy) const {
    if (!(y[0] > 0.0)) throw Error(ErrorKind::InvalidState, "vc must be > 0");
    detail::phase_raw(y[0], y[1], sigma_, dy[1], dy[0]);
  }
  double min_loc(const double* y) const { return y[0]; }
  double max_loc(const double* y) const { return y[0]; }
  std::optional<std::string> invalid(const double* y) const {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) return "non-finite state";
    return std::nullopt;
  }
  std::optional<std::string> invalid_between(const double*, const double*) const { return std::nullopt; }
  std::optional<double> collapse_x(const double* y, bool) const { return detail::collapse_location(y[0]); }

 private:
  int sigma_;
};

inline Trajectory<PoleFamilyState> integrate(const PoleFamilyState& s0, const ModelParams& p, double horizon,
                                             const IntegratorOptions& opt = {}) {
  require_pole_system(p);
  if (p.a != 0.0) throw Error(ErrorKind::InvalidArgument, "simple-pole family needs a = 0");
  validate(s0);
  return integrate_system(PoleFamilySystem(s0.poles.size(), p), s0, horizon, opt);
}

inline Trajectory<DoublePoleState> integrate(const DoublePoleState& s0, const ModelParams& p, double horizon,
                                             const IntegratorOptions& opt = {}) {
  require_pole_system(p);
  if (p.a != 0.5) throw Error(ErrorKind::InvalidArgument, "double-pole state needs a = 1/2");
  if (!(s0.loc.real() > 0.0)) throw Error(ErrorKind::InvalidState, "Re v must be > 0");
  return integrate_system(DoublePoleSystem(p, s0.gauge_q), s0, horizon, opt);
}

inline Trajectory<RealReducedState> integrate(const RealReducedState& s0, const ModelParams& p, double horizon,
                                              const IntegratorOptions& opt = {}) {
  require_pole_system(p);
  if (p.a != 0.5) throw Error(ErrorKind::InvalidArgument, "real-reduced state needs a = 1/2");
  if (!(s0.vc > 0.0)) throw Error(ErrorKind::InvalidState, "vc must be > 0");
  return integrate_system(RealReducedSystem(p), s0, horizon, opt);
}

inline Trajectory<PhasePoint> integrate_phase(const PhasePoint& s0, int sigma, double horizon,
                                              const IntegratorOptions& opt = {}) {
  if (sigma != 0 && sigma != 1) throw Error(ErrorKind::InvalidArgument, "sigma must be 0 or 1");
  if (!(s0.vc > 0.0)) throw Error(ErrorKind::InvalidState, "vc must be > 0");
  return integrate_system(PhaseSystem(sigma), s0, horizon, opt);
}

}  // namespace gclm
