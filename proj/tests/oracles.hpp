#pragma once

// Independent reference solutions used by the unit tests and the acceptance
// checks. None of these share code with the library's solvers.

#include <functional>

#include "tunnel/optics.hpp"

namespace oracle {

using tunnel::cplx;

struct Amplitudes {
  cplx r;
  cplx t;  // tangential E at the exit plane
};

/// Boundary-value solve of the layered problem: forward and backward wave
/// amplitudes in every region, matched tangential E and H at each interface,
/// assembled into one dense linear system.
Amplitudes direct_solve(const tunnel::LayerStack& stack, double omega, double angle,
                        tunnel::Polarization pol);

/// Single-interface Fresnel coefficients (tangential-E convention for t).
Amplitudes fresnel(double n1, double n2, double angle, tunnel::Polarization pol);

/// Airy sum for one film at normal incidence.
cplx airy_film(double n0, double n1, double ns, double thickness, double wavelength);

/// Transmission amplitude t of a rectangular barrier from RK4 integration of
/// the Schrödinger equation across [0, d] (hbar = m = 1).
cplx rk4_barrier(double height, double width, double energy, int steps = 20000);

/// Closed-form phase time of a rectangular barrier for E < V0 (hbar = m = 1),
/// from differentiating arg transit = -atan(alpha tanh(kappa d)) by hand.
double barrier_phase_time(double height, double width, double energy);

/// Frustrated-TIR amplitude for S polarization, summed multiple reflections.
cplx ftir_s(double prism_index, double gap, double angle, double wavelength);

/// d(arg f)/dx from arg(f(x+h) / f(x-h)) / 2h: no log-derivative involved.
double phase_slope(const std::function<cplx(double)>& f, double x, double h);

}  // namespace oracle
