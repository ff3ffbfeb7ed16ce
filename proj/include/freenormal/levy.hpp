#pragma once

#include "freenormal/config.hpp"
#include "freenormal/scaled.hpp"

#include <vector>

namespace freenormal {

/// A value of the free Levy density h(|x|) / (pi x^2).
struct LevySample {
    double x = 0.0;
    double density = 0.0;
};

/// A value of the density of tau, h(|x|) / (pi (1 + x^2)).
struct TauSample {
    double x = 0.0;
    double tau_density = 0.0;
};

/// h(|x|) / (pi x^2); even in x. DomainError at x = 0.
double levy_density(double x, const CurveConfig& config = {});

/// h(|x|) / (pi (1 + x^2)); even in x. DomainError at x = 0.
double tau_density(double x, const CurveConfig& config = {});

/// Densities on a log grid of [x_min, x_max] (0 < x_min < x_max), from one
/// curve trace so the grid shares continuation seeds.
std::vector<LevySample> levy_density_table(double x_min, double x_max, int n,
                                           const CurveConfig& config = {});

/// phi(w) = F^{-1}(w) - w for w in the closed upper half-plane minus 0.
/// Real w uses the curve: F^{-1}(x) = sign(x) g(|x|) - i h(|x|). Otherwise
/// Newton on F(z) = w from z = w + 1/w, falling back to z = w; the root is
/// required to lie in Omega. DomainError at w = 0 or Im w < 0.
Complex voiculescu(Complex w, const CurveConfig& config = {});

struct TauMassReport {
    double mass = 0.0;
    double im_phi_i = 0.0;
    /// |mass + Im phi(i)|.
    double discrepancy = 0.0;
    /// Sum of quadrature error estimates and truncation bounds.
    double error_estimate = 0.0;
};

/// tau(R) = 2 int_0^inf h(x) / (pi (1 + x^2)) dx. The half-line is split at
/// x_lo and x_hi: below x_lo the substitution x = exp(-u) tames the slowly
/// growing h, the bulk uses solver values, and the tail uses the large-x
/// series. The three pieces run concurrently and are summed in fixed order.
/// QuadratureFailure when the error estimate exceeds the requested tolerance.
double tau_total_mass(double quad_tol, const CurveConfig& config = {});

/// tau_total_mass together with the independent value -Im phi(i).
TauMassReport tau_mass_report(double quad_tol, const CurveConfig& config = {});

/// |F(-iT) (-iT)|, which tends to 0 as T grows (no semicircular component).
double semicircular_component_check(double T);

}  // namespace freenormal
