#pragma once

#include <cmath>
#include <concepts>
#include <functional>

#include "tunnel/units.hpp"

namespace tunnel::numdiff {

/// Default relative step for central differences: balances O(h^2)
/// truncation against O(eps/h) roundoff at double precision.
inline constexpr double kRelativeStep = 1e-6;

/// Absolute step h = rel * |x|, falling back to rel when x == 0.
double step_for(double x, double rel = kRelativeStep);

/// Second-order central difference (f(x+h) - f(x-h)) / 2h.
template <class F>
  requires std::invocable<F, double>
auto central(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// One Richardson step on the central difference: (4 D(h/2) - D(h)) / 3.
template <class F>
  requires std::invocable<F, double>
auto richardson(F&& f, double x, double h) {
  const auto coarse = central(f, x, h);
  const auto fine = central(f, x, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

/// d ln f / dx for a complex-valued f.
///
/// Re of the result is d ln|f|/dx and Im is d arg f/dx; the identity
/// Im[f'/f] = d arg f / dx sidesteps phase unwrapping entirely.
cplx log_derivative(const std::function<cplx(double)>& f, double x, double h);

}  // namespace tunnel::numdiff
