#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "gclm/errors.hpp"

namespace gclm {

// Root of f on [lo, hi] where f(lo), f(hi) have opposite signs.
template <class F>
double find_root(F f, double lo, double hi, double xtol = 1e-15, std::uintmax_t max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(std::signbit(flo) != std::signbit(fhi)))
    throw Error(ErrorKind::NoConvergence, "root not bracketed");
  auto tol = [xtol](double a, double b) {
    return std::abs(b - a) <= xtol * std::max(1.0, std::min(std::abs(a), std::abs(b)));
  };
  std::uintmax_t it = max_iter;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
  if (it >= max_iter) throw Error(ErrorKind::NoConvergence, "root finder iteration limit");
  return 0.5 * (r.first + r.second);
}

struct Minimum {
  double x;
  double value;
};

template <class F>
Minimum find_minimum(F f, double lo, double hi) {
  std::uintmax_t it = 500;
  auto r = boost::math::tools::brent_find_minima(f, lo, hi, 52, it);
  return {r.first, r.second};
}

}  // namespace gclm
