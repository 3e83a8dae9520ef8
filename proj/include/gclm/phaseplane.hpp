#pragma once

/*
 * (v, p) phase plane of the real a = 1/2 systems with nu = 1.
 *
 *   sigma = 1:  J = p(pR - Q),  K = -p(1+v^2)/4 + (1-v^2)/2
 *   sigma = 0:  L = p(pR - 1),  M = -p(1+v^2)/4
 *   R = (1/v - v)/2,  Q = (1/v + v)/2,  p = w/(v(1-v^2))
 *
 * Both systems are invariant under (v, p) -> (1/v, -p).
 *
 * Regions:
 *   sigma = 1  Omega:   p2 < p < p1,  p1 = 1 + c1 H(v-1)(v-1),  p2 = -p1(1/v)
 *              Omega_b: v < sqrt(1-2 lambda), p >= (Q + mu)/(R - lambda)
 *   sigma = 0  Omega:   -1/v < p < v
 *              Omega_b: v < 1, p > 1/(R - rho), 0 < rho < R(v(0))
 * plus the mirror images of Omega_b.
 */

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gclm/classify.hpp"
#include "gclm/dynamics.hpp"
#include "gclm/errors.hpp"
#include "gclm/model.hpp"
#include "gclm/pool.hpp"

namespace gclm {

inline double to_p(double omega2i, double vc) {
  if (!(vc > 0.0)) throw Error(ErrorKind::InvalidArgument, "vc must be > 0");
  if (std::abs(vc - 1.0) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "vc = 1");
  return omega2i / (vc * (1.0 - vc * vc));
}

inline double from_p(double p, double vc) {
  if (!(vc > 0.0)) throw Error(ErrorKind::InvalidArgument, "vc must be > 0");
  if (std::abs(vc - 1.0) < singular_location_tol) throw Error(ErrorKind::SingularLocation, "vc = 1");
  return p * vc * (1.0 - vc * vc);
}

inline double phase_R(double v) { return 0.5 * (1.0 / v - v); }
inline double phase_Q(double v) { return 0.5 * (1.0 / v + v); }
inline double f_J(double v) { return (1.0 + v * v) / (1.0 - v * v); }
inline double f_K(double v) { return 2.0 * (1.0 - v * v) / (1.0 + v * v); }
inline double f_L(double v) { return 2.0 * v / (1.0 - v * v); }

struct PhaseVector {
  double dp;
  double dv;
};

inline PhaseVector vector_field(const PhasePoint& pt, int sigma) {
  if (sigma != 0 && sigma != 1) throw Error(ErrorKind::InvalidArgument, "sigma must be 0 or 1");
  if (!(pt.vc > 0.0)) throw Error(ErrorKind::InvalidArgument, "vc must be > 0");
  PhaseVector out{};
  detail::phase_raw(pt.vc, pt.p, sigma, out.dp, out.dv);
  return out;
}

inline double slope_S(const PhasePoint& pt, int sigma) {
  const auto f = vector_field(pt, sigma);
  if (f.dv == 0.0) throw Error(ErrorKind::VerticalSlope, "dv/dt = 0");
  return f.dp / f.dv;
}

struct RegionSpec {
  int sigma = 1;
  double c1 = 1.4;
  double lambda = 0.01;
  double mu = 0.2;
  std::optional<double> rho;  // sigma = 0; defaults to R(v)/2 at the queried point
  std::optional<double> vc0;
  double power_c = 1.0;       // optional p1 ~ c v^gamma family
  double power_gamma = 1.5;
};

inline void check_spec(const RegionSpec& s) {
  if (s.sigma != 0 && s.sigma != 1) throw Error(ErrorKind::InvalidArgument, "sigma must be 0 or 1");
  if (!(s.c1 > 0.0 && s.c1 < (3.0 + std::sqrt(73.0)) / 8.0 + 1.0))
    throw Error(ErrorKind::InvalidArgument, "c1 out of range");
  if (!(s.lambda > 0.0 && s.mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda, mu must be > 0");
  if (s.rho && s.vc0 && !(*s.rho > 0.0 && *s.rho < phase_R(*s.vc0)))
    throw Error(ErrorKind::InvalidArgument, "rho must lie in (0, R(vc0))");
}

enum class Curve { P1, P2, Pb, Q1, Q2, PbTilde, PowerLaw };

inline const char* to_string(Curve c) {
  switch (c) {
    case Curve::P1: return "p1";
    case Curve::P2: return "p2";
    case Curve::Pb: return "pb";
    case Curve::Q1: return "q1";
    case Curve::Q2: return "q2";
    case Curve::PbTilde: return "pb_tilde";
    case Curve::PowerLaw: return "power_law";
  }
  return "unknown";
}

namespace detail {

inline double rho_at(const RegionSpec& s, double v) { return s.rho ? *s.rho : 0.5 * phase_R(s.vc0.value_or(v)); }

struct CurveEval {
  double value;
  double d_left;
  double d_right;
};

inline CurveEval curve_eval(Curve c, double v, const RegionSpec& s) {
  const double R = phase_R(v), Q = phase_Q(v);
  const double dR = -0.5 * (1.0 / (v * v) + 1.0), dQ = 0.5 * (1.0 - 1.0 / (v * v));
  switch (c) {
    case Curve::P1: {
      const double val = 1.0 + (v > 1.0 ? s.c1 * (v - 1.0) : 0.0);
      return {val, v > 1.0 ? s.c1 : 0.0, v >= 1.0 ? s.c1 : 0.0};
    }
    case Curve::P2: {
      const double val = -1.0 - (v < 1.0 ? s.c1 * (1.0 / v - 1.0) : 0.0);
      return {val, v <= 1.0 ? s.c1 / (v * v) : 0.0, v < 1.0 ? s.c1 / (v * v) : 0.0};
    }
    case Curve::Pb: {
      const double den = R - s.lambda;
      const double d = (dQ * den - (Q + s.mu) * dR) / (den * den);
      return {(Q + s.mu) / den, d, d};
    }
    case Curve::Q1: return {v, 1.0, 1.0};
    case Curve::Q2: return {-1.0 / v, 1.0 / (v * v), 1.0 / (v * v)};
    case Curve::PbTilde: {
      const double den = R - rho_at(s, v);
      const double d = -dR / (den * den);
      return {1.0 / den, d, d};
    }
    case Curve::PowerLaw: {
      const double val = s.power_c * std::pow(v, s.power_gamma);
      const double d = s.power_gamma * val / v;
      return {val, d, d};
    }
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace detail

inline double curve_value(Curve c, double v, const RegionSpec& s) { return detail::curve_eval(c, v, s).value; }

// Upward-normal component of the flow on p = f(v); one-sided values are averaged at kinks.
inline double transversality(Curve c, double v, const RegionSpec& s) {
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "vc must be > 0");
  const auto e = detail::curve_eval(c, v, s);
  const auto f = vector_field(PhasePoint{0.0, v, e.value}, s.sigma);
  return f.dp - 0.5 * f.dv * (e.d_left + e.d_right);
}

// U(v) = sum A_n (v-1)^n with T(v, p1(v)) = -U(v)/(4v) for v > 1.
inline std::array<double, 5> u_coefficients(double c1) {
  return {4.0 - 2.0 * c1, 8.0 - 4.0 * c1 - 2.0 * c1 * c1, 4.0 + 3.0 * c1 - 4.0 * c1 * c1, 3.0 * c1 + c1 * c1,
          c1 * c1};
}

inline double critical_c1() { return (3.0 + std::sqrt(73.0)) / 8.0; }

enum class Region { Omega, OmegaB, OmegaBMirror, Outside };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::Omega: return "Omega";
    case Region::OmegaB: return "OmegaB";
    case Region::OmegaBMirror: return "OmegaBMirror";
    case Region::Outside: return "Outside";
  }
  return "unknown";
}

namespace detail {

inline constexpr double membership_tol = 1e-12;

inline bool in_omega_b(double v, double p, const RegionSpec& s) {
  if (s.sigma == 1) {
    if (!(v < std::sqrt(1.0 - 2.0 * s.lambda))) return false;
    const double pb = curve_value(Curve::Pb, v, s);
    return p >= pb - membership_tol * std::max(1.0, std::abs(pb));
  }
  if (!(v < 1.0)) return false;
  const double rho = rho_at(s, v);
  if (!(phase_R(v) > rho)) return false;
  const double pb = curve_value(Curve::PbTilde, v, s);
  return p > pb + membership_tol * std::max(1.0, std::abs(pb));
}

}  // namespace detail

inline Region region_membership(const PhasePoint& pt, const RegionSpec& s) {
  check_spec(s);
  const double v = pt.vc, p = pt.p;
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "vc must be > 0");
  const double hi = curve_value(s.sigma == 1 ? Curve::P1 : Curve::Q1, v, s);
  const double lo = curve_value(s.sigma == 1 ? Curve::P2 : Curve::Q2, v, s);
  const double tol = detail::membership_tol;
  if (p < hi - tol * std::max(1.0, std::abs(hi)) && p > lo + tol * std::max(1.0, std::abs(lo))) return Region::Omega;
  if (detail::in_omega_b(v, p, s)) return Region::OmegaB;
  if (detail::in_omega_b(1.0 / v, -p, s)) return Region::OmegaBMirror;
  return Region::Outside;
}

// Numerical region maps.

enum class Outcome { BlowupA, BlowupB, Global, Skipped, Failed };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::BlowupA: return "BlowupA";
    case Outcome::BlowupB: return "BlowupB";
    case Outcome::Global: return "Global";
    case Outcome::Skipped: return "Unclassified";
    case Outcome::Failed: return "Error";
  }
  return "unknown";
}

struct PhaseGrid {
  double v_min = 0.05;
  double v_max = 3.0;
  double y_min = -5.0;  // p, or w/nu when in_omega is set
  double y_max = 5.0;
  std::size_t nv = 60;
  std::size_t ny = 60;
  bool in_omega = false;
};

struct PhaseCell {
  std::size_t iv = 0;
  std::size_t iy = 0;
  double vc = 0.0;
  double y = 0.0;
  double p = 0.0;
  Region region = Region::Outside;
  bool boundary = false;  // analytic label changes within one cell
  Outcome outcome = Outcome::Skipped;
  double t_event = 0.0;
  std::string note;
};

inline double grid_coord(double lo, double hi, std::size_t i, std::size_t n) {
  return n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
}

inline constexpr double phase_skip_tol = 1e-4;

inline std::vector<PhaseCell> phase_map(const PhaseGrid& g, int sigma, double horizon, const RegionSpec& spec,
                                        std::size_t threads = 1, const IntegratorOptions& opt = {}) {
  RegionSpec s = spec;
  s.sigma = sigma;
  check_spec(s);
  if (g.nv < 1 || g.ny < 1 || !(g.v_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "bad grid");
  const double dv = g.nv > 1 ? (g.v_max - g.v_min) / double(g.nv - 1) : 0.0;
  const double dy = g.ny > 1 ? (g.y_max - g.y_min) / double(g.ny - 1) : 0.0;
  std::vector<PhaseCell> cells(g.nv * g.ny);
  auto label = [&](double v, double y) {
    if (!(v > 0.0) || std::abs(v - 1.0) < singular_location_tol) return Region::Outside;
    return region_membership(PhasePoint{0.0, v, g.in_omega ? to_p(y, v) : y}, s);
  };
  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    PhaseCell& c = cells[idx];
    c.iv = idx / g.ny;
    c.iy = idx % g.ny;
    c.vc = grid_coord(g.v_min, g.v_max, c.iv, g.nv);
    c.y = grid_coord(g.y_min, g.y_max, c.iy, g.ny);
    if (std::abs(c.vc - 1.0) < phase_skip_tol) {
      c.outcome = Outcome::Skipped;
      c.note = "vc within 1e-4 of 1";
      return;
    }
    c.p = g.in_omega ? to_p(c.y, c.vc) : c.y;
    c.region = region_membership(PhasePoint{0.0, c.vc, c.p}, s);
    for (int a = -1; a <= 1 && !c.boundary; ++a)
      for (int b = -1; b <= 1; ++b)
        if (label(c.vc + a * dv, c.y + b * dy) != c.region) {
          c.boundary = true;
          break;
        }
    try {
      const auto tr = integrate_phase(PhasePoint{0.0, c.vc, c.p}, sigma, horizon, opt);
      c.t_event = tr.event.t_event;
      switch (tr.event.kind) {
        case EventKind::CollapseToZero: c.outcome = Outcome::BlowupA; break;
        case EventKind::CollapseToInfinity: c.outcome = Outcome::BlowupB; break;
        case EventKind::HorizonReached: c.outcome = Outcome::Global; break;
        default:
          c.outcome = Outcome::Failed;
          c.note = tr.event.detail;
      }
    } catch (const Error& e) {
      c.outcome = Outcome::Failed;
      c.note = e.what();
    }
  });
  return cells;
}

}  // namespace gclm
