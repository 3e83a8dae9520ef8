#pragma once

/*
 * Pole ansatz for the periodic gCLM equation
 *
 *   w~_t = -a u w~_x + w~ H(w~) - nu Lambda^sigma w~,   u_x = H(w~),
 *
 * with w~ = w_av + w_+ + w_- and w_+(x) = conj(w_-(conj x)).  Fields are written
 * in X = tan(x/2); a pole of w_- sits at X = i v with Re v > 0.
 *
 *   a = 0   : w_- = sum_k A_k [1/(X - i v_k) - 1/(-i - i v_k)]
 *   a = 1/2 : w_- = A_1 [1/(X - i v) - 1/(-i - i v)] + A_2 [1/(X - i v)^2 - 1/(-i - i v)^2]
 *             with A_1 = 2 i v A_2 / (1 - v^2)
 *
 * The subtracted constants make w_- mean free.
 */

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gclm/errors.hpp"

namespace gclm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class Domain { Circle, RealLine };

struct ModelParams {
  double a = 0.0;
  double sigma = 0.0;
  double nu = 0.0;
  Domain domain = Domain::Circle;
};

struct Pole {
  cplx amp;
  cplx loc;
};

struct PoleFamilyState {
  double t = 0.0;
  std::vector<Pole> poles;
  double omega_av = 0.0;
};

// gauge_q holds the free gauge q~; the q entering the ODEs is gauge_q_effective().
struct DoublePoleState {
  double t = 0.0;
  cplx amp2;
  cplx loc;
  double omega_av = 0.0;
  double gauge_q = 0.0;
};

struct RealReducedState {
  double t = 0.0;
  double omega2i = 0.0;
  double vc = 1.0;
};

inline constexpr double pole_collision_tol = 1e-13;
inline constexpr double singular_location_tol = 1e-13;

inline bool is_pole_system(const ModelParams& p) {
  return (p.a == 0.0 || p.a == 0.5) && (p.sigma == 0.0 || p.sigma == 1.0) && p.nu >= 0.0;
}

inline void require_pole_system(const ModelParams& p) {
  if (!(p.nu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "nu must be >= 0");
  if (!is_pole_system(p))
    throw Error(ErrorKind::InvalidArgument, "pole dynamics needs a in {0, 1/2} and sigma in {0, 1}");
}

inline bool is_infinite(cplx X) { return std::isinf(X.real()) || std::isinf(X.imag()); }

// x = +-pi maps to the point at infinity.
inline cplx x_to_X(cplx x) {
  if (x.imag() == 0.0 && std::abs(x.real()) == pi)
    return {std::numeric_limits<double>::infinity(), 0.0};
  return std::tan(x / 2.0);
}

inline cplx X_to_x(cplx X) {
  if (is_infinite(X)) return {pi, 0.0};
  return 2.0 * std::atan(X);
}

inline cplx apply_constraint(cplx amp2, cplx loc) {
  const cplx d = 1.0 - loc * loc;
  if (std::abs(d) < singular_location_tol)
    throw Error(ErrorKind::SingularLocation, "constraint undefined at loc = +-1");
  return 2.0 * I * loc * amp2 / d;
}

namespace detail {

inline void check_collision(cplx X, cplx loc) {
  if (!is_infinite(X) && std::abs(X - I * loc) < pole_collision_tol)
    throw Error(ErrorKind::PoleCollision, "evaluation point coincides with a pole");
}

// 1/(X - i v)^n - 1/(-i - i v)^n, with the X = infinity limit.
inline cplx pole_term(cplx X, cplx loc, int n) {
  const cplx at_mean = std::pow(-I - I * loc, -n);
  if (is_infinite(X)) return -at_mean;
  return std::pow(X - I * loc, -n) - at_mean;
}

inline cplx double_pole_minus(cplx amp1, cplx amp2, cplx loc, cplx X) {
  check_collision(X, loc);
  return amp1 * pole_term(X, loc, 1) + amp2 * pole_term(X, loc, 2);
}

}  // namespace detail

inline cplx eval_omega_minus(const PoleFamilyState& s, cplx x) {
  const cplx X = x_to_X(x);
  cplx sum = 0.0;
  for (const auto& p : s.poles) {
    detail::check_collision(X, p.loc);
    sum += p.amp * detail::pole_term(X, p.loc, 1);
  }
  return sum;
}

inline cplx eval_omega_minus(const DoublePoleState& s, cplx x) {
  return detail::double_pole_minus(apply_constraint(s.amp2, s.loc), s.amp2, s.loc, x_to_X(x));
}

inline cplx eval_omega_plus(const PoleFamilyState& s, cplx x) {
  return std::conj(eval_omega_minus(s, std::conj(x)));
}

inline cplx eval_omega_plus(const DoublePoleState& s, cplx x) {
  return std::conj(eval_omega_minus(s, std::conj(x)));
}

template <class State>
double eval_omega(const State& s, double x) {
  return (eval_omega_minus(s, x) + eval_omega_plus(s, x)).real() + s.omega_av;
}

template <class State>
double eval_hilbert(const State& s, double x) {
  const cplx wm = eval_omega_minus(s, x);
  return (-I * (std::conj(wm) - wm)).real();
}

inline double eval_velocity(const DoublePoleState& s, double x) {
  const cplx X = x_to_X(x);
  detail::check_collision(X, s.loc);
  const cplx A = -2.0 * I * s.amp2 / (1.0 - s.loc * s.loc);
  return 2.0 * (A * detail::pole_term(X, s.loc, 1)).real() + s.gauge_q;
}

// q = q~ - [constant terms of u]; enters the a = 1/2 ODEs.
inline double gauge_q_effective(const DoublePoleState& s) {
  const cplx v = s.loc;
  return s.gauge_q - 4.0 * (s.amp2 / ((1.0 - v * v) * (1.0 + v))).real();
}

inline DoublePoleState embed(const RealReducedState& r) {
  return DoublePoleState{r.t, cplx(0.0, r.omega2i), cplx(r.vc, 0.0), 0.0, 0.0};
}

inline RealReducedState reduce(const DoublePoleState& s) {
  return RealReducedState{s.t, s.amp2.imag(), s.loc.real()};
}

inline void validate(const PoleFamilyState& s) {
  if (s.poles.empty()) throw Error(ErrorKind::InvalidState, "no poles");
  for (std::size_t k = 0; k < s.poles.size(); ++k) {
    if (!(s.poles[k].loc.real() > 0.0))
      throw Error(ErrorKind::InvalidState, "pole location needs Re v > 0");
    for (std::size_t l = 0; l < k; ++l)
      if (std::abs(s.poles[k].loc - s.poles[l].loc) < 1e-12)
        throw Error(ErrorKind::PoleCollision, "pole locations coincide");
  }
}

inline void validate(const DoublePoleState& s) {
  if (!(s.loc.real() > 0.0)) throw Error(ErrorKind::InvalidState, "pole location needs Re v > 0");
  if (std::abs(1.0 - s.loc * s.loc) < singular_location_tol)
    throw Error(ErrorKind::SingularLocation, "loc = +-1");
}

inline void validate(const RealReducedState& s) {
  if (!(s.vc > 0.0)) throw Error(ErrorKind::InvalidState, "vc must be > 0");
  if (std::abs(s.vc - 1.0) < singular_location_tol)
    throw Error(ErrorKind::SingularLocation, "vc = 1");
}

}  // namespace gclm
