#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fbdiv::numerics {

/// Thrown when an iterative routine exhausts its budget without meeting
/// the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Accuracy request for adaptive quadrature.
struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_subdivisions = 200;

    void validate() const;
};

/// Gaussian tail probability Q(x) = P[N(0,1) > x], computed as erfc(x/sqrt(2))/2.
double q_function(double x);

/// Inverse of q_function on (0,1). Throws std::domain_error outside the open interval.
double q_inverse(double prob);

/// Regularized lower incomplete gamma P(shape, x).
/// Series expansion for x < shape+1, continued fraction otherwise.
double reg_lower_gamma(double shape, double x);

/// Adaptive Gauss-Kronrod (7-15) quadrature of f over [lo, hi].
/// hi may be +infinity; the tail is mapped onto [0,1) via x = lo + t/(1-t).
/// Throws ConvergenceError if the subdivision budget is exhausted.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Tolerance& tol = {});

struct ScalarMinimum {
    double argmin = 0.0;
    double min_value = 0.0;
};

/// Coarse grid scan (>= 64 points, log-spaced when lo > 0) followed by
/// golden-section refinement around the grid minimum. The result never
/// exceeds g at any probed point. `tol` is a relative width target for
/// the refinement bracket.
ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo,
                              double hi, double tol = 1e-8);

} // namespace fbdiv::numerics
