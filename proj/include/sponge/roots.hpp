#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace sponge {

// Root of a strictly decreasing function: returns x in [lo, hi] with
// f(x) = target to within tol on x. Requires f(lo) >= target >= f(hi).
inline double bisect_decreasing(const std::function<double(double)>& f, double lo,
                                double hi, double target, double tol) {
  if (f(lo) < target || f(hi) > target)
    throw std::runtime_error("bisection bracket does not straddle the target");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sponge
