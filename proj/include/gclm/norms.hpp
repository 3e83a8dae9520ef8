#pragma once

/*
 * Norms of omega = omega_+ + omega_- (the mean is excluded).
 *
 * With r = (1-v)/(1+v) the Fourier coefficients of omega_- for m >= 1 are
 *   simple pole A/(X - iv):    2i A r^{m-1}/(1+v)^2
 *   double pole A/(X - iv)^2:  -4A [r^{m-1}/(1+v)^3 + (m-1) r^{m-2}/(1+v)^4]
 * so ||w||_{L2}^2 = 4 pi sum |c_m|^2 and ||w||_{B0} = 2 sum |c_m|.
 */

#include <cmath>
#include <complex>
#include <vector>

#include "gclm/errors.hpp"
#include "gclm/model.hpp"

namespace gclm {

namespace detail {

inline cplx ratio_r(cplx v) { return (1.0 - v) / (1.0 + v); }

// c_m = alpha r^{m-1} + beta (m-1) r^{m-2}
struct CoeffTerm {
  cplx alpha;
  cplx beta;
  cplx r;
};

inline CoeffTerm simple_term(cplx amp, cplx v) {
  const cplx s = 1.0 + v;
  return {2.0 * I * amp / (s * s), 0.0, ratio_r(v)};
}

inline std::vector<CoeffTerm> double_pole_terms(const DoublePoleState& s) {
  const cplx v = s.loc, sv = 1.0 + v;
  const cplx a1 = apply_constraint(s.amp2, v);
  const cplx alpha = 2.0 * I * a1 / (sv * sv) - 4.0 * s.amp2 / (sv * sv * sv);
  const cplx beta = -4.0 * s.amp2 / (sv * sv * sv * sv);
  return {{alpha, beta, ratio_r(v)}};
}

inline std::vector<CoeffTerm> family_terms(const PoleFamilyState& s) {
  std::vector<CoeffTerm> out;
  for (const auto& p : s.poles) {
    if (!(p.loc.real() > 0.0)) throw Error(ErrorKind::InvalidState, "Re v must be > 0");
    out.push_back(simple_term(p.amp, p.loc));
  }
  return out;
}

// sum_{m>=1} c_m conj(d_m) for two terms, in closed form.
inline cplx gram(const CoeffTerm& a, const CoeffTerm& b) {
  const cplx z = a.r * std::conj(b.r), oz = 1.0 - z;
  const cplx s0 = 1.0 / oz;                 // sum z^j
  const cplx s1 = 1.0 / (oz * oz);          // sum j z^{j-1}
  const cplx s2 = (1.0 + z) / (oz * oz * oz);  // sum j^2 z^{j-1}
  return a.alpha * std::conj(b.alpha) * s0 + a.alpha * std::conj(b.beta) * a.r * s1 +
         a.beta * std::conj(b.alpha) * std::conj(b.r) * s1 + a.beta * std::conj(b.beta) * s2;
}

inline double l2_of(const std::vector<CoeffTerm>& terms) {
  cplx sum = 0.0;
  for (const auto& a : terms)
    for (const auto& b : terms) sum += gram(a, b);
  return std::sqrt(4.0 * pi * std::max(0.0, sum.real()));
}

inline constexpr std::size_t wiener_max_terms = 50'000'000;

inline double b0_of(const std::vector<CoeffTerm>& terms) {
  if (terms.size() == 1 && terms[0].beta == 0.0) return 2.0 * std::abs(terms[0].alpha) / (1.0 - std::abs(terms[0].r));
  double rmax = 0.0, total = 0.0;
  for (const auto& t : terms) {
    rmax = std::max(rmax, std::abs(t.r));
    total += std::abs(t.alpha) + std::abs(t.beta);
  }
  std::vector<cplx> pw(terms.size(), 1.0);  // r^{j}
  std::vector<cplx> pw1(terms.size(), 0.0); // j r^{j-1}
  double sum = 0.0;
  for (std::size_t j = 0; j < wiener_max_terms; ++j) {
    cplx c = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) c += terms[k].alpha * pw[k] + terms[k].beta * pw1[k];
    sum += std::abs(c);
    const double jj = double(j);
    const double tail = total * (2.0 + jj) * std::pow(rmax, jj) / ((1.0 - rmax) * (1.0 - rmax));
    if (tail < 1e-16 * sum) return 2.0 * sum;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      pw1[k] = pw1[k] * terms[k].r + pw[k];
      pw[k] *= terms[k].r;
    }
  }
  throw Error(ErrorKind::NoConvergence, "Wiener series did not converge; pole too close to the real line");
}

}  // namespace detail

inline double l2_norm(const PoleFamilyState& s) { return detail::l2_of(detail::family_terms(s)); }
inline double wiener_norm(const PoleFamilyState& s) { return detail::b0_of(detail::family_terms(s)); }

inline double l2_norm(const DoublePoleState& s) {
  validate(s);
  return detail::l2_of(detail::double_pole_terms(s));
}

inline double wiener_norm(const DoublePoleState& s) {
  validate(s);
  return detail::b0_of(detail::double_pole_terms(s));
}

// Real reduction: ||w||_{L2}^2 = 2 pi p^2 (1/v + v),  ||w||_{B0} = 2|p|/v (v <= 1) or 2|p| v (v > 1),
// with p = w/(v(1 - v^2)).
inline double l2_norm(const RealReducedState& s) {
  validate(s);
  const double v = s.vc, p = s.omega2i / (v * (1.0 - v * v));
  return std::sqrt(2.0 * pi * p * p * (1.0 / v + v));
}

inline double wiener_norm(const RealReducedState& s) {
  validate(s);
  const double v = s.vc, p = s.omega2i / (v * (1.0 - v * v));
  return v <= 1.0 ? 2.0 * std::abs(p) / v : 2.0 * std::abs(p) * v;
}

}  // namespace gclm
