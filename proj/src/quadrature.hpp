#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <limits>

namespace freenormal::detail {

template <class T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;
};

/// Adaptive 21-point Gauss-Kronrod on [a, b]; b may be +inf.
template <class F>
auto integrate_gk(F&& f, double a, double b, double rel_tol, unsigned max_depth = 20) {
    using T = decltype(f(a));
    double error = 0.0;
    T v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol, &error);
    return QuadratureResult<T>{v, error};
}

}  // namespace freenormal::detail
