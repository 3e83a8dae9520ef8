#pragma once

/*
 * Exact single-pole solutions for a = 0 and the implicit solution for the
 * real-reduced a = 1/2, sigma = 0 system.
 *
 * a = 0, sigma = 0:  Omega = A(0)/(1+v0),  theta = (1 - e^{-nu t})/nu,
 *   E = theta                          (w_av = 0)
 *   E = (e^{i w_av theta} - 1)/(i w_av)  (w_av != 0)
 *   D = 1 - Omega E,  A(t) = A(0) e^{-nu t} e^{i w_av theta} / D^2,  v(t) = (v0+1)/D - 1.
 *
 * a = 0, sigma = 1:  E = (e^{i w_av t} - 1)/(i w_av),
 *   Z+- = 1 - Omega E + (+-e^{nu t} - 1)(1+v0)/2,
 *   A(t) = A(0) e^{(nu + i w_av) t} / Z+^2,  v(t) = -Z-/Z+.
 *
 * a = 1/2, sigma = 0 (real):  f1(v(t)) = f1(v0) + 2 w0 theta f2(v0),
 *   w(t) = w0 e^{-nu t} (v0/v) ((v^2-1)/(v0^2-1)) ((v^2+1)/(v0^2+1))^2.
 */

#include <cmath>
#include <complex>

#include "gclm/errors.hpp"
#include "gclm/model.hpp"
#include "gclm/roots.hpp"

namespace gclm {

struct CircleGeometry {
  cplx center;
  double radius = 0.0;
  bool degenerate_line = false;
  cplx line_point;
  cplx line_dir;
};

namespace detail {

// (e^z - 1)/z
inline cplx phi1(cplx z) {
  if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return (std::exp(z) - 1.0) / z;
}

inline double theta_of(double nu, double t) { return nu == 0.0 ? t : -std::expm1(-nu * t) / nu; }

inline const Pole& single_pole(const PoleFamilyState& s) {
  if (s.poles.size() != 1) throw Error(ErrorKind::InvalidArgument, "closed forms need exactly one pole");
  return s.poles[0];
}

}  // namespace detail

inline PoleFamilyState exact_a0_sigma0(const PoleFamilyState& init, double nu, double t) {
  const Pole& p0 = detail::single_pole(init);
  const double dt = t - init.t;
  if (dt == 0.0) return init;
  const cplx Om = p0.amp / (1.0 + p0.loc);
  const double th = detail::theta_of(nu, dt);
  const double wav = init.omega_av;
  const cplx phase = std::exp(I * wav * th);
  const cplx E = wav == 0.0 ? cplx(th) : th * detail::phi1(I * wav * th);
  const cplx D = 1.0 - Om * E;
  if (std::abs(D) < 1e-13) throw Error(ErrorKind::SolutionSingular, "denominator vanished");
  PoleFamilyState out;
  out.t = t;
  out.poles = {Pole{p0.amp * std::exp(-nu * dt) * phase / (D * D), (p0.loc + 1.0) / D - 1.0}};
  out.omega_av = wav * std::exp(-nu * dt);
  return out;
}

inline PoleFamilyState exact_a0_sigma1(const PoleFamilyState& init, double nu, double t) {
  const Pole& p0 = detail::single_pole(init);
  const double dt = t - init.t;
  if (dt == 0.0) return init;
  const cplx Om = p0.amp / (1.0 + p0.loc);
  const double wav = init.omega_av;
  const cplx E = dt * detail::phi1(I * wav * dt);
  const double ex = std::exp(nu * dt);
  const cplx Zp = 1.0 - Om * E + 0.5 * std::expm1(nu * dt) * (1.0 + p0.loc);
  const cplx Zm = 1.0 - Om * E - 0.5 * (ex + 1.0) * (1.0 + p0.loc);
  if (std::abs(Zp) < 1e-13) throw Error(ErrorKind::SolutionSingular, "Z+ vanished");
  PoleFamilyState out;
  out.t = t;
  out.poles = {Pole{p0.amp * std::exp(cplx(nu, wav) * dt) / (Zp * Zp), -Zm / Zp}};
  out.omega_av = wav;
  return out;
}

namespace detail {

inline CircleGeometry circle_through(cplx z1, cplx z2, cplx z3) {
  CircleGeometry g;
  const cplx w = (z3 - z1) / (z2 - z1);
  if (std::abs(w.imag()) < 1e-13 * std::max(1.0, std::abs(w))) {
    g.degenerate_line = true;
    g.line_point = z1;
    g.line_dir = (z2 - z1) / std::abs(z2 - z1);
    return g;
  }
  g.center = (z2 - z1) * (w - std::norm(w)) / (2.0 * I * w.imag()) + z1;
  g.radius = std::abs(z1 - g.center);
  return g;
}

}  // namespace detail

// Circle (or line) carrying the a = 0, sigma = 0 single-pole trajectory.
inline CircleGeometry circle_params(const PoleFamilyState& init, double /*nu*/) {
  const Pole& p0 = detail::single_pole(init);
  const cplx v0 = p0.loc;
  const cplx Om = p0.amp / (1.0 + v0);
  const double wav = init.omega_av;
  CircleGeometry g;
  if (wav == 0.0) {
    if (std::abs(Om.imag()) < 1e-13) {
      g.degenerate_line = true;
      g.line_point = v0;
      g.line_dir = (v0 + 1.0) / std::abs(v0 + 1.0);
      return g;
    }
    g.center = I * (Om + v0 * std::conj(Om)) / (2.0 * Om.imag());
    g.radius = std::abs((v0 + 1.0) * Om / (2.0 * Om.imag()));
    return g;
  }
  // E runs over the circle through 0 with centre i/w_av; v is a Moebius image of E.
  auto v_of = [&](double phase) {
    const cplx E = (std::exp(I * phase) - 1.0) / (I * wav);
    return (v0 + 1.0) / (1.0 - Om * E) - 1.0;
  };
  const cplx inv = 1.0 / Om;
  if (std::abs(std::abs(inv - I / wav) - 1.0 / std::abs(wav)) < 1e-13 * std::max(1.0, std::abs(inv))) {
    g.degenerate_line = true;
    const cplx a = v_of(0.0), b = v_of(2.0);
    g.line_point = a;
    g.line_dir = (b - a) / std::abs(b - a);
    return g;
  }
  return detail::circle_through(v_of(0.0), v_of(2.0 * pi / 3.0), v_of(4.0 * pi / 3.0));
}

// Signed distance from v to the circle, or distance to the line.
inline double circle_deviation(const CircleGeometry& g, cplx v) {
  if (g.degenerate_line) {
    const cplx d = v - g.line_point;
    return std::abs((d * std::conj(g.line_dir)).imag());
  }
  return std::abs(v - g.center) - g.radius;
}

// Auxiliary functions of the a = 1/2, sigma = 0 system.

// f1(v) = v(v^2-1)/(v^2+1)^2 + atan v,  f1' = 8v^2/(1+v^2)^3,  f1(v) + f1(1/v) = pi/2.
inline double f1(double v) {
  if (v < 0.1) {
    double sum = 0.0, pw = v * v * v;
    const double v2 = v * v;
    for (int m = 0; m < 16; ++m) {
      const double c = 0.5 * (m + 1) * (m + 2) / (2.0 * m + 3.0);
      sum += ((m % 2) ? -c : c) * pw;
      pw *= v2;
    }
    return 8.0 * sum;
  }
  if (v > 10.0) return 0.5 * pi - f1(1.0 / v);
  const double v2 = v * v;
  return v * (v2 - 1.0) / ((v2 + 1.0) * (v2 + 1.0)) + std::atan(v);
}

inline double f2(double v) {
  if (std::abs(v - 1.0) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "f2 at v = 1");
  const double v2 = v * v;
  return v / ((v2 - 1.0) * (v2 + 1.0) * (v2 + 1.0));
}

inline double f0(double v) {
  if (v == 0.0) return 0.0;
  if (v < 0.1) return f1(v) / f2(v);
  const double v2 = v * v;
  return (v2 - 1.0) * (v2 - 1.0) + (v2 + 1.0) * (v2 + 1.0) / v * (v2 - 1.0) * std::atan(v);
}

inline double f_inf(double v) {
  if (v > 10.0) return -f1(1.0 / v) / f2(v);
  const double v2 = v * v;
  const double shifted = v > 1.0 ? -std::atan(1.0 / v) : std::atan(v) - 0.5 * pi;
  return (v2 - 1.0) * (v2 - 1.0) + (v2 + 1.0) * (v2 + 1.0) / v * (v2 - 1.0) * shifted;
}

inline double f1_prime(double v) {
  const double d = 1.0 + v * v;
  return 8.0 * v * v / (d * d * d);
}

struct ImplicitTarget {
  double lower;  // f1(v(t))
  double upper;  // pi/2 - f1(v(t))
};

inline ImplicitTarget implicit_target(const RealReducedState& init, double nu, double t) {
  const double th = detail::theta_of(nu, t - init.t);
  const double shift = 2.0 * init.omega2i * th * f2(init.vc);
  return {f1(init.vc) + shift, f1(1.0 / init.vc) - shift};
}

inline RealReducedState implicit_a05_sigma0(const RealReducedState& init, double nu, double t) {
  validate(init);
  if (t == init.t) return init;
  const ImplicitTarget tg = implicit_target(init, nu, t);
  if (tg.lower <= 0.0) throw Error(ErrorKind::OutOfRange, "implicit solution past type A collapse");
  if (tg.upper <= 0.0) throw Error(ErrorKind::OutOfRange, "implicit solution past type B collapse");
  const double ulo = std::log(1e-12), uhi = std::log(1e12);
  double v;
  if (tg.lower <= tg.upper) {
    if (f1(std::exp(ulo)) >= tg.lower) throw Error(ErrorKind::NoConvergence, "root below bracket");
    v = std::exp(find_root([&](double u) { return f1(std::exp(u)) - tg.lower; }, ulo, uhi));
  } else {
    if (f1(std::exp(ulo)) >= tg.upper) throw Error(ErrorKind::NoConvergence, "root above bracket");
    v = std::exp(-find_root([&](double u) { return f1(std::exp(u)) - tg.upper; }, ulo, uhi));
  }
  if (std::abs(v - 1.0) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "v(t) = 1");
  const double v0 = init.vc, v2 = v * v, v02 = v0 * v0;
  const double ratio = (v2 + 1.0) / (v02 + 1.0);
  const double w = init.omega2i * std::exp(-nu * (t - init.t)) * (v0 / v) * ((v2 - 1.0) / (v02 - 1.0)) * ratio * ratio;
  return RealReducedState{t, w, v};
}

// Residual of the implicit relation along a (possibly numerical) state at time t.
inline double implicit_residual(const RealReducedState& init, double nu, const RealReducedState& s) {
  const ImplicitTarget tg = implicit_target(init, nu, s.t);
  return tg.lower <= tg.upper ? f1(s.vc) - tg.lower : f1(1.0 / s.vc) - tg.upper;
}

}  // namespace gclm
