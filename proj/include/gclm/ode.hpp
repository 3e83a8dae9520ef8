#pragma once

/*
 * Dormand-Prince 5(4) with Hairer's continuous extension, driven in a rescaled
 * time s with dt/ds = 1/(1 + r), r = |f|_inf / (|y|_inf + 1).
 *
 * Power-law collapse (v ~ tau^(1/3), tau = t_c - t) becomes exponential in s, so
 * the event v <= eps_collapse stays reachable even when tau underflows the
 * resolution of t.  t is carried as component 0 of the augmented state.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gclm/errors.hpp"

namespace gclm {

enum class EventKind { CollapseToZero, CollapseToInfinity, HorizonReached, StepUnderflow, InvalidState };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::CollapseToZero: return "CollapseToZero";
    case EventKind::CollapseToInfinity: return "CollapseToInfinity";
    case EventKind::HorizonReached: return "HorizonReached";
    case EventKind::StepUnderflow: return "StepUnderflow";
    case EventKind::InvalidState: return "InvalidState";
  }
  return "Unknown";
}

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double eps_collapse = 1e-8;
  double eps_time = 1e-10;
  double h_min = 1e-14;
  double h_init = 1e-4;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
  bool rescale_time = true;
  bool record_steps = true;
  int dense_per_step = 0;
  std::vector<double> output_times;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

template <class State>
struct TerminationEvent {
  EventKind kind = EventKind::HorizonReached;
  double t_event = 0.0;
  State state{};
  std::optional<double> x_c;
  std::string detail;
};

template <class State>
struct Trajectory {
  std::vector<State> samples;
  TerminationEvent<State> event;
  IntegratorStats stats;
};

namespace detail {

struct DenseStep {
  std::vector<double> r1, r2, r3, r4, r5;
  void eval(double theta, std::vector<double>& out) const {
    const double th1 = 1.0 - theta;
    out.resize(r1.size());
    for (std::size_t i = 0; i < r1.size(); ++i)
      out[i] = r1[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
  }
};

/*
 * Sys provides:
 *   using State;  std::size_t dim();
 *   void pack(const State&, double*);  State unpack(double t, const double*);
 *   void rhs(const double* y, double* dy);            may throw gclm::Error
 *   double min_loc(const double*), max_loc(const double*);
 *   std::optional<std::string> invalid(const double* y);
 *   std::optional<std::string> invalid_between(const double* y0, const double* y1);
 *   std::optional<double> collapse_x(const double* y, bool to_zero);
 */
template <class Sys>
class Dopri5 {
 public:
  using State = typename Sys::State;

  Dopri5(const Sys& sys, const IntegratorOptions& opt) : sys_(sys), opt_(opt), n_(sys.dim() + 1) {}

  Trajectory<State> run(const State& s0, double horizon) {
    Trajectory<State> tr;
    std::vector<double> y(n_), y1(n_), yerr(n_), tmp(n_);
    std::vector<std::vector<double>> k(7, std::vector<double>(n_));
    y[0] = s0.t;
    sys_.pack(s0, y.data() + 1);
    tr.samples.push_back(sys_.unpack(y[0], y.data() + 1));
    if (!(horizon > s0.t)) throw Error(ErrorKind::InvalidArgument, "horizon must exceed initial time");

    if (auto bad = sys_.invalid(y.data() + 1)) {
      finish(tr, EventKind::InvalidState, y, *bad);
      return tr;
    }
    if (!augmented(y, k[0], tr.stats)) {
      finish(tr, EventKind::InvalidState, y, "right-hand side not finite at initial state");
      return tr;
    }

    std::vector<double> outs = opt_.output_times;
    std::sort(outs.begin(), outs.end());
    std::size_t next_out = 0;
    while (next_out < outs.size() && outs[next_out] <= s0.t) ++next_out;

    double h = std::min(opt_.h_init, opt_.max_step);
    bool last_rejected = false;
    DenseStep dense;
    std::vector<double> dv;

    while (true) {
      if (tr.stats.accepted + tr.stats.rejected >= opt_.max_steps) {
        finish(tr, EventKind::StepUnderflow, y, "step budget exhausted");
        return tr;
      }
      if (h < opt_.h_min) {
        finish(tr, EventKind::StepUnderflow, y, "step size below h_min");
        return tr;
      }
      double err = trial(y, h, k, y1, yerr, tmp, tr.stats);
      if (!std::isfinite(err) || err > 1.0) {
        ++tr.stats.rejected;
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
        h *= std::min(fac, 0.9);
        last_rejected = true;
        continue;
      }
      ++tr.stats.accepted;
      build_dense(y, y1, k, h, dense);

      const double t0 = y[0], t1 = y1[0];
      // Events ordered by position inside the step.
      double theta_ev = 2.0;
      EventKind kind_ev = EventKind::HorizonReached;
      std::string why;

      if (auto bad = sys_.invalid_between(y.data() + 1, y1.data() + 1)) {
        theta_ev = 1.0;
        kind_ev = EventKind::InvalidState;
        why = *bad;
      } else if (auto bad1 = sys_.invalid(y1.data() + 1)) {
        theta_ev = 1.0;
        kind_ev = EventKind::InvalidState;
        why = *bad1;
      }
      auto zero_phi = [&](const std::vector<double>& z) { return sys_.min_loc(z.data() + 1) - opt_.eps_collapse; };
      auto inf_phi = [&](const std::vector<double>& z) { return 1.0 / opt_.eps_collapse - sys_.max_loc(z.data() + 1); };
      if (zero_phi(y1) <= 0.0) {
        const double th = refine(dense, zero_phi);
        if (th <= theta_ev) { theta_ev = th; kind_ev = EventKind::CollapseToZero; }
      }
      if (inf_phi(y1) <= 0.0) {
        const double th = refine(dense, inf_phi);
        if (th < theta_ev) { theta_ev = th; kind_ev = EventKind::CollapseToInfinity; }
      }
      if (t1 >= horizon) {
        const double th = time_to_theta(dense, horizon, t0, t1);
        if (th < theta_ev) { theta_ev = th; kind_ev = EventKind::HorizonReached; }
      }

      const bool stop = theta_ev <= 1.0;
      const double t_stop = stop ? (kind_ev == EventKind::HorizonReached ? horizon : at(dense, theta_ev, dv)[0]) : t1;

      std::vector<std::pair<double, double>> extra;  // (t, theta)
      for (int j = 1; j <= opt_.dense_per_step; ++j) {
        const double th = double(j) / (opt_.dense_per_step + 1);
        if (stop && th >= theta_ev) break;
        dense.eval(th, dv);
        extra.emplace_back(dv[0], th);
      }
      while (next_out < outs.size() && outs[next_out] <= std::min(t_stop, t1)) {
        const double target = outs[next_out++];
        extra.emplace_back(target, time_to_theta(dense, target, t0, t1));
      }
      std::sort(extra.begin(), extra.end());
      for (const auto& [te, th] : extra) {
        dense.eval(th, dv);
        push(tr, te, dv);
      }

      if (stop) {
        dense.eval(theta_ev, dv);
        if (kind_ev == EventKind::HorizonReached) dv[0] = horizon;
        if (kind_ev == EventKind::InvalidState) dv = y1;
        finish(tr, kind_ev, dv, why);
        return tr;
      }
      if (opt_.record_steps) push(tr, t1, y1);

      y.swap(y1);
      k[0].swap(k[6]);  // FSAL
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
      h *= last_rejected ? std::min(fac, 1.0) : fac;
      h = std::min(h, opt_.max_step);
      last_rejected = false;
    }
  }

 private:
  const Sys& sys_;
  IntegratorOptions opt_;
  std::size_t n_;

  bool augmented(const std::vector<double>& Y, std::vector<double>& F, IntegratorStats& st) const {
    ++st.rhs_evals;
    try {
      sys_.rhs(Y.data() + 1, F.data() + 1);
    } catch (const Error&) {
      return false;
    }
    double fy = 0.0, yy = 0.0;
    for (std::size_t i = 1; i < n_; ++i) {
      if (!std::isfinite(F[i])) return false;
      fy = std::max(fy, std::abs(F[i]));
      yy = std::max(yy, std::abs(Y[i]));
    }
    const double g = opt_.rescale_time ? 1.0 / (1.0 + fy / (yy + 1.0)) : 1.0;
    F[0] = g;
    for (std::size_t i = 1; i < n_; ++i) F[i] *= g;
    return true;
  }

  double trial(const std::vector<double>& y, double h, std::vector<std::vector<double>>& k, std::vector<double>& y1,
               std::vector<double>& yerr, std::vector<double>& tmp, IntegratorStats& st) const {
    static constexpr double a21 = 0.2, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45, a42 = -56.0 / 15,
                            a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656, a71 = 35.0 / 384, a73 = 500.0 / 1113,
                            a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    const std::size_t n = n_;
    auto stage = [&](int idx) { return augmented(tmp, k[idx], st); };
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
    if (!stage(1)) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    if (!stage(2)) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    if (!stage(3)) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    if (!stage(4)) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i]);
    if (!stage(5)) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
    tmp = y1;
    if (!stage(6)) return std::numeric_limits<double>::infinity();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      yerr[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (yerr[i] / sc) * (yerr[i] / sc);
    }
    return std::sqrt(err / double(n));
  }

  void build_dense(const std::vector<double>& y, const std::vector<double>& y1,
                   const std::vector<std::vector<double>>& k, double h, DenseStep& d) const {
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    const std::size_t n = n_;
    d.r1 = y;
    d.r2.resize(n);
    d.r3.resize(n);
    d.r4.resize(n);
    d.r5.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = h * k[0][i] - ydiff;
      d.r2[i] = ydiff;
      d.r3[i] = bspl;
      d.r4[i] = ydiff - h * k[6][i] - bspl;
      d.r5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
    }
  }

  static const std::vector<double>& at(const DenseStep& d, double theta, std::vector<double>& buf) {
    d.eval(theta, buf);
    return buf;
  }

  // Smallest theta with phi <= 0, given phi(0) > 0 and phi(1) <= 0; width judged in t.
  template <class Phi>
  double refine(const DenseStep& d, Phi phi) const {
    std::vector<double> z;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      d.eval(lo, z);
      const double tlo = z[0];
      d.eval(hi, z);
      if (z[0] - tlo <= opt_.eps_time) break;
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      d.eval(mid, z);
      if (phi(z) <= 0.0) hi = mid;
      else lo = mid;
    }
    return hi;
  }

  static double time_to_theta(const DenseStep& d, double target, double t0, double t1) {
    if (target >= t1) return 1.0;
    if (target <= t0) return 0.0;
    std::vector<double> z;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      d.eval(mid, z);
      if (z[0] < target) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  void push(Trajectory<State>& tr, double t, const std::vector<double>& Y) const {
    if (!tr.samples.empty() && !(t > tr.samples.back().t)) return;
    tr.samples.push_back(sys_.unpack(t, Y.data() + 1));
  }

  void finish(Trajectory<State>& tr, EventKind kind, const std::vector<double>& Y, const std::string& why) const {
    tr.event.kind = kind;
    tr.event.t_event = Y[0];
    tr.event.state = sys_.unpack(Y[0], Y.data() + 1);
    tr.event.detail = why;
    if (kind == EventKind::CollapseToZero || kind == EventKind::CollapseToInfinity)
      tr.event.x_c = sys_.collapse_x(Y.data() + 1, kind == EventKind::CollapseToZero);
    push(tr, Y[0], Y);
  }
};

}  // namespace detail

template <class Sys>
Trajectory<typename Sys::State> integrate_system(const Sys& sys, const typename Sys::State& s0, double horizon,
                                                 const IntegratorOptions& opt = {}) {
  detail::Dopri5<Sys> solver(sys, opt);
  return solver.run(s0, horizon);
}

}  // namespace gclm
