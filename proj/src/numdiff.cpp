#include "tunnel/numdiff.hpp"

namespace tunnel {

const char* to_string(Polarization pol) { return pol == Polarization::S ? "s" : "p"; }

namespace numdiff {

double step_for(double x, double rel) {
  const double ax = std::abs(x);
  return ax > 0.0 ? rel * ax : rel;
}

cplx log_derivative(const std::function<cplx(double)>& f, double x, double h) {
  const cplx value = f(x);
  const cplx slope = central(f, x, h);
  return slope / value;
}

}  // namespace numdiff
}  // namespace tunnel
