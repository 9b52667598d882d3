#pragma once

#include <cmath>
#include <limits>

namespace levynet {

template <typename Scalar>
struct InverseResult {
  Scalar root;
  Scalar residual;
  int iterations;
  bool converged;
};

// Solves f(s) = x on [0, upper] for f increasing and convex with f(0) = 0 and
// f(upper) >= x. Newton from the upper end decreases monotonically for convex
// f; any step leaving the bracket falls back to bisection.
template <typename Scalar, typename F, typename DF>
InverseResult<Scalar> invert_convex_increasing(const F& f, const DF& df, Scalar x,
                                               Scalar upper, Scalar tol,
                                               int max_iter = 200) {
  using std::abs;
  if (x <= Scalar(0)) return {Scalar(0), Scalar(0), 0, true};
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar lo = 0;
  Scalar hi = upper;
  int grow = 0;
  while (f(hi) < x) {
    lo = hi;
    hi *= 2;
    if (++grow > 2000 || !std::isfinite(static_cast<double>(hi)))
      return {hi, f(hi) - x, grow, false};
  }
  Scalar s = hi;
  Scalar g = f(s) - x;
  int it = 0;
  while (it < max_iter) {
    ++it;
    if (g == Scalar(0)) break;
    if (g > 0)
      hi = s;
    else
      lo = s;
    Scalar d = df(s);
    Scalar next = d > Scalar(0) ? s - g / d : (lo + hi) / 2;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    Scalar step = abs(next - s);
    s = next;
    g = f(s) - x;
    if (step <= 4 * eps * abs(s) || hi - lo <= 4 * eps * hi) break;
  }
  Scalar scale = x > Scalar(1) ? x : Scalar(1);
  return {s, g, it, abs(g) <= tol * scale};
}

// Stable evaluation of x^a - y^a divided by x - y for x, y >= 0.
template <typename Scalar>
Scalar power_slope(Scalar a, Scalar x, Scalar y) {
  using std::expm1;
  using std::log1p;
  using std::pow;
  Scalar lo = x < y ? x : y;
  Scalar hi = x < y ? y : x;
  if (hi == Scalar(0)) return a == Scalar(1) ? Scalar(1) : Scalar(0);
  if (lo == Scalar(0)) return pow(hi, a - 1);
  Scalar t = (hi - lo) / lo;
  if (t == Scalar(0)) return a * pow(lo, a - 1);
  return pow(lo, a - 1) * expm1(a * log1p(t)) / t;
}

}  // namespace levynet
