#pragma once

#include "freenormal/scaled.hpp"

#include <string_view>

namespace freenormal {

/// Where a point sits relative to the pole-free domain Xi. In the lower
/// half-plane Xi is bounded by the hyperbolas x*y = +-pi/2 (the curves
/// r^2 sin 2theta = +-pi), and contains the negative imaginary axis.
enum class DomainTag { UpperHalfPlane, RealAxis, XiInterior, XiBoundary, OutsideXi };

std::string_view to_string(DomainTag tag) noexcept;

DomainTag classify_domain(Complex z);

/// True when z is in the closed upper half-plane or in Xi union its boundary,
/// the region where F = 1/G is guaranteed pole-free.
bool in_certified_region(Complex z);

/// Entire continuation of the Cauchy transform of N(0,1):
///   G(z) = exp(-z^2/2) [ -i sqrt(pi/2) + sqrt(2) int_0^{z/sqrt2} exp(t^2) dt ].
/// Agrees with the Cauchy integral on the upper half-plane and with
/// G(z) - i sqrt(2 pi) exp(-z^2/2) below the real axis.
ScaledComplex g_tilde(Complex z);

/// G'(z) = 1 - z G(z).
ScaledComplex g_tilde_prime(Complex z);

/// F = 1/G. Throws PoleProximity when |G| < 1e-300.
ScaledComplex f_tilde(Complex z);

/// F' = -G'/G^2, equivalently F (z - F).
ScaledComplex f_tilde_prime(Complex z);

/// rho(x) = i G(ix), positive and strictly decreasing on the real line.
ScaledReal rho(double x);

/// The ordinary Cauchy integral on the closed upper half-plane (Im z >= 0),
/// reflected for Im z < 0: returns conj(G(conj z)). Always O(1/|Im z|).
Complex cauchy_integral(Complex z);

/// Independent evaluation of G by Gauss-Kronrod quadrature along the rotated
/// rays arg w = -pi/4 + eta and arg w = 5pi/4 - eta, truncated at |w| = radius.
/// Valid for z in D_epsilon with epsilon > eta. Throws InvalidContour when z is
/// not strictly inside D_eta or the Gaussian tail at radius exceeds 1e-10.
Complex g_tilde_contour_oracle(Complex z, double eta, double radius);

/// Integral of w^n phi(w) along the same contour (moments of N(0,1)).
Complex contour_moment(int n, double eta, double radius);

namespace detail {

/// Dawson integral D(zeta) = exp(-zeta^2) int_0^zeta exp(t^2) dt, entire.
std::complex<long double> dawson(std::complex<long double> zeta);

/// Faddeeva w(zeta) by Laplace continued fraction; Im zeta > 0 expected.
Complex faddeeva_continued_fraction(Complex zeta);

}  // namespace detail

}  // namespace freenormal
