#pragma once

/*
 * Pseudospectral gCLM solver on the circle.
 *
 *   w_t = -a u w_x + w H(w) - nu Lambda^sigma w,
 *   H: -i sgn k,  Lambda^sigma: |k|^sigma (k = 0 symbol 1 when sigma = 0),
 *   u_k = -sgn(k) w_k / k,  u_0 supplied by the caller.
 *
 * Grid x_j = -pi + 2 pi j/n; modes w_k for 0 <= k <= n/2 with
 * w(x) = sum_k w_k e^{ikx} over the full conjugate-symmetric spectrum.
 */

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "gclm/dynamics.hpp"
#include "gclm/errors.hpp"
#include "gclm/model.hpp"

namespace gclm {

struct SpectralField {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<cplx> modes;
};

namespace detail {

struct FftPlans {
  fftw_plan r2c;
  fftw_plan c2r;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
inline const FftPlans& fft_plans(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, FftPlans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> re(n);
  std::vector<cplx> sp(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(sp.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  FftPlans p{fftw_plan_dft_r2c_1d(int(n), re.data(), c, flags), fftw_plan_dft_c2r_1d(int(n), c, re.data(), flags)};
  return cache.emplace(n, p).first->second;
}

inline void check_size(std::size_t n) {
  if (n < 4 || (n & (n - 1)) != 0) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two >= 4");
}

inline double grid_x(std::size_t j, std::size_t n) { return -pi + 2.0 * pi * double(j) / double(n); }

}  // namespace detail

inline std::vector<cplx> forward_modes(const std::vector<double>& values) {
  const std::size_t n = values.size();
  detail::check_size(n);
  std::vector<double> in(values);
  std::vector<cplx> out(n / 2 + 1);
  fftw_execute_dft_r2c(detail::fft_plans(n).r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= ((k % 2) ? -1.0 : 1.0) / double(n);
  return out;
}

inline std::vector<double> inverse_values(const std::vector<cplx>& modes, std::size_t n) {
  detail::check_size(n);
  std::vector<cplx> in(modes);
  for (std::size_t k = 0; k < in.size(); ++k) in[k] *= (k % 2) ? -1.0 : 1.0;
  std::vector<double> out(n);
  fftw_execute_dft_c2r(detail::fft_plans(n).c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

inline SpectralField field_from_values(std::vector<double> values) {
  SpectralField f;
  f.n = values.size();
  f.modes = forward_modes(values);
  f.values = std::move(values);
  return f;
}

inline SpectralField field_from_modes(std::vector<cplx> modes, std::size_t n) {
  if (modes.size() != n / 2 + 1) throw Error(ErrorKind::InvalidArgument, "mode count must be n/2 + 1");
  modes[0] = modes[0].real();
  modes[n / 2] = modes[n / 2].real();
  SpectralField f;
  f.n = n;
  f.values = inverse_values(modes, n);
  f.modes = std::move(modes);
  return f;
}

template <class F>
SpectralField sample_field(F f, std::size_t n) {
  detail::check_size(n);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(detail::grid_x(j, n));
  return field_from_values(std::move(v));
}

template <class F>
SpectralField map_modes(const SpectralField& in, F symbol) {
  std::vector<cplx> m(in.modes);
  for (std::size_t k = 0; k < m.size(); ++k) m[k] *= symbol(k);
  return field_from_modes(std::move(m), in.n);
}

// Nyquist mode dropped: its sign is ambiguous.
inline SpectralField hilbert_fourier(const SpectralField& f) {
  const std::size_t nyq = f.n / 2;
  return map_modes(f, [nyq](std::size_t k) { return (k == 0 || k == nyq) ? cplx(0.0) : cplx(0.0, -1.0); });
}

inline double lambda_symbol(std::size_t k, double sigma) {
  if (k == 0) return sigma == 0.0 ? 1.0 : 0.0;
  return std::pow(double(k), sigma);
}

inline SpectralField lambda_sigma(const SpectralField& f, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
  return map_modes(f, [sigma](std::size_t k) { return cplx(lambda_symbol(k, sigma)); });
}

inline SpectralField derivative(const SpectralField& f) {
  const std::size_t nyq = f.n / 2;
  return map_modes(f, [nyq](std::size_t k) { return k == nyq ? cplx(0.0) : cplx(0.0, double(k)); });
}

inline SpectralField velocity_field(const SpectralField& f, double u0) {
  std::vector<cplx> m(f.modes.size());
  for (std::size_t k = 1; k + 1 < m.size(); ++k) m[k] = -f.modes[k] / double(k);
  m[0] = u0;
  return field_from_modes(std::move(m), f.n);
}

// Discrete norms of the non-mean part: L2 = sqrt(2 pi sum |w_k|^2), B0 = sum |w_k| over k != 0.
struct GridNorms {
  double l2;
  double b0;
};

inline GridNorms grid_norms(const SpectralField& f) {
  double s2 = 0.0, s1 = 0.0;
  const std::size_t nyq = f.n / 2;
  for (std::size_t k = 1; k <= nyq; ++k) {
    const double mult = k == nyq ? 1.0 : 2.0;
    s2 += mult * std::norm(f.modes[k]);
    s1 += mult * std::abs(f.modes[k]);
  }
  return {std::sqrt(2.0 * pi * s2), s1};
}

// Time stepping.

struct PdeOptions {
  std::size_t record_every = 0;                         // 0: only initial and final
  std::function<double(double)> u_mean;                 // u_0(t); zero when empty
  double cfl_limit = 2.5;
};

struct PdeRun {
  std::vector<double> times;
  std::vector<SpectralField> fields;
  std::size_t steps = 0;
};

namespace detail {

class PdeStepper {
 public:
  PdeStepper(std::size_t n, const ModelParams& p, const PdeOptions& opt) : n_(n), p_(p), opt_(opt) {
    cut_ = n / 3;
  }

  void dealias(std::vector<cplx>& m) const {
    for (std::size_t k = cut_ + 1; k < m.size(); ++k) m[k] = 0.0;
  }

  double lin(std::size_t k) const { return -p_.nu * lambda_symbol(k, p_.sigma); }

  // Nonlinear term -a u w_x + w H(w), dealiased.
  std::vector<cplx> nonlinear(const std::vector<cplx>& m, double t, double dt) const {
    const std::size_t h = m.size();
    std::vector<cplx> hw(h), dw(h), um(h);
    for (std::size_t k = 1; k + 1 < h; ++k) {
      hw[k] = cplx(0.0, -1.0) * m[k];
      dw[k] = cplx(0.0, double(k)) * m[k];
      um[k] = -m[k] / double(k);
    }
    um[0] = opt_.u_mean ? opt_.u_mean(t) : 0.0;
    const auto w = inverse_values(m, n_);
    const auto hv = inverse_values(hw, n_);
    std::vector<double> prod(n_);
    double speed = 0.0;
    if (p_.a != 0.0) {
      const auto wx = inverse_values(dw, n_);
      const auto u = inverse_values(um, n_);
      for (std::size_t j = 0; j < n_; ++j) {
        prod[j] = -p_.a * u[j] * wx[j] + w[j] * hv[j];
        speed = std::max(speed, std::abs(p_.a * u[j]) * double(cut_) + std::abs(hv[j]));
      }
    } else {
      for (std::size_t j = 0; j < n_; ++j) {
        prod[j] = w[j] * hv[j];
        speed = std::max(speed, std::abs(hv[j]));
      }
    }
    if (speed * dt > opt_.cfl_limit) throw Error(ErrorKind::CFLViolation, "time step too large for the nonlinear term");
    auto out = forward_modes(prod);
    dealias(out);
    return out;
  }

  // Integrating-factor RK4 in the variable e^{-L t} w.
  void step(std::vector<cplx>& m, double t, double dt) const {
    const std::size_t h = m.size();
    std::vector<double> e1(h), e2(h);
    for (std::size_t k = 0; k < h; ++k) {
      e1[k] = std::exp(lin(k) * dt * 0.5);
      e2[k] = e1[k] * e1[k];
    }
    std::vector<cplx> tmp(h);
    const auto k1 = nonlinear(m, t, dt);
    for (std::size_t k = 0; k < h; ++k) tmp[k] = e1[k] * (m[k] + 0.5 * dt * k1[k]);
    const auto k2 = nonlinear(tmp, t + 0.5 * dt, dt);
    for (std::size_t k = 0; k < h; ++k) tmp[k] = e1[k] * m[k] + 0.5 * dt * k2[k];
    const auto k3 = nonlinear(tmp, t + 0.5 * dt, dt);
    for (std::size_t k = 0; k < h; ++k) tmp[k] = e2[k] * m[k] + dt * e1[k] * k3[k];
    const auto k4 = nonlinear(tmp, t + dt, dt);
    for (std::size_t k = 0; k < h; ++k)
      m[k] = e2[k] * m[k] + dt / 6.0 * (e2[k] * k1[k] + 2.0 * e1[k] * (k2[k] + k3[k]) + k4[k]);
    dealias(m);
    m[0] = m[0].real();
    m[h - 1] = 0.0;
  }

 private:
  std::size_t n_;
  ModelParams p_;
  PdeOptions opt_;
  std::size_t cut_;
};

}  // namespace detail

inline PdeRun simulate_pde(const SpectralField& field0, const ModelParams& params, double horizon, double dt,
                           const PdeOptions& opt = {}) {
  detail::check_size(field0.n);
  if (!(params.nu >= 0.0) || !(params.sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need nu, sigma >= 0");
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need dt > 0 and horizon >= 0");
  detail::PdeStepper stepper(field0.n, params, opt);
  std::vector<cplx> m(field0.modes);
  stepper.dealias(m);
  PdeRun run;
  run.times.push_back(0.0);
  run.fields.push_back(field_from_modes(m, field0.n));
  const std::size_t nsteps = std::size_t(std::ceil(horizon / dt - 1e-9));
  const double h = nsteps ? horizon / double(nsteps) : 0.0;
  for (std::size_t s = 0; s < nsteps; ++s) {
    stepper.step(m, double(s) * h, h);
    ++run.steps;
    const bool last = s + 1 == nsteps;
    if (last || (opt.record_every && (s + 1) % opt.record_every == 0)) {
      run.times.push_back(double(s + 1) * h);
      run.fields.push_back(field_from_modes(m, field0.n));
    }
  }
  return run;
}

// Instantaneous residual of the pole ansatz: w_t from the ODE (chain rule) minus
// the PDE right-hand side evaluated spectrally, L-infinity over the grid.

inline SpectralField sample_state(const PoleFamilyState& s, std::size_t n) {
  return sample_field([&](double x) { return eval_omega(s, x); }, n);
}

inline SpectralField sample_state(const DoublePoleState& s, std::size_t n) {
  return sample_field([&](double x) { return eval_omega(s, x); }, n);
}

namespace detail {

inline double residual_from(const std::vector<double>& w, const std::vector<double>& wt, const ModelParams& p,
                            double u0) {
  const std::size_t n = w.size();
  const SpectralField f = field_from_values(w);
  const auto hw = hilbert_fourier(f).values;
  const auto lw = lambda_sigma(f, p.sigma).values;
  std::vector<double> wx, u;
  if (p.a != 0.0) {
    wx = derivative(f).values;
    u = velocity_field(f, u0).values;
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double rhs = w[j] * hw[j] - p.nu * lw[j];
    if (p.a != 0.0) rhs -= p.a * u[j] * wx[j];
    worst = std::max(worst, std::abs(wt[j] - rhs));
  }
  return worst;
}

}  // namespace detail

inline double residual(const PoleFamilyState& s, const ModelParams& p, std::size_t n) {
  const auto d = rhs_a0(s, p);
  std::vector<double> w(n), wt(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx X = x_to_X(detail::grid_x(j, n));
    cplx wm = 0.0, wmt = 0.0;
    for (std::size_t k = 0; k < s.poles.size(); ++k) {
      detail::check_collision(X, s.poles[k].loc);
      const cplx t1 = detail::pole_term(X, s.poles[k].loc, 1), t2 = detail::pole_term(X, s.poles[k].loc, 2);
      wm += s.poles[k].amp * t1;
      wmt += d.d_amp[k] * t1 + s.poles[k].amp * d.d_loc[k] * I * t2;
    }
    w[j] = 2.0 * wm.real() + s.omega_av;
    wt[j] = 2.0 * wmt.real() + d.d_omega_av;
  }
  return detail::residual_from(w, wt, p, 0.0);
}

// broken_constraint drops the simple-pole term while keeping the ODE derivatives.
inline double residual(const DoublePoleState& s, const ModelParams& p, std::size_t n, bool broken_constraint = false) {
  const auto d = rhs_a05(s, p);
  const cplx v = s.loc, A2 = s.amp2, om = 1.0 - v * v;
  const cplx A1 = broken_constraint ? cplx(0.0) : apply_constraint(A2, v);
  const cplx dA1 = broken_constraint
                       ? cplx(0.0)
                       : 2.0 * I * (d.d_loc * A2 + v * d.d_amp2) / om + 4.0 * I * v * v * A2 * d.d_loc / (om * om);
  std::vector<double> w(n), wt(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx X = x_to_X(detail::grid_x(j, n));
    detail::check_collision(X, v);
    const cplx t1 = detail::pole_term(X, v, 1), t2 = detail::pole_term(X, v, 2), t3 = detail::pole_term(X, v, 3);
    const cplx wm = A1 * t1 + A2 * t2;
    const cplx wmt = dA1 * t1 + A1 * d.d_loc * I * t2 + d.d_amp2 * t2 + A2 * d.d_loc * 2.0 * I * t3;
    w[j] = 2.0 * wm.real() + s.omega_av;
    wt[j] = 2.0 * wmt.real() + d.d_omega_av;
  }
  return detail::residual_from(w, wt, p, s.gauge_q);
}

}  // namespace gclm
