#pragma once

#include <complex>
#include <functional>

namespace normlab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth = 50);

struct ComplexQuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. `pieces` sets the
/// initial uniform partition (use about one piece per oscillation).
ComplexQuadratureResult gauss_kronrod(const std::function<std::complex<double>(double)>& f, double a, double b,
                                      double abs_tol, double rel_tol, int pieces = 1, int max_intervals = 200000);

}  // namespace normlab
