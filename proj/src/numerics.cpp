#include "fbdiv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace fbdiv::numerics {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Standard normal density.
double phi(double x) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Acklam's rational approximation to the inverse normal CDF, ~1.15e-9
// relative accuracy. Used as the seed for Newton polishing.
double inv_norm_cdf_acklam(double p) {
    static const double a1 = -39.69683028665376, a2 = 220.9460984245205,
                        a3 = -275.9285104469687, a4 = 138.3577518672690,
                        a5 = -30.66479806614716, a6 = 2.506628277459239;
    static const double b1 = -54.47609879822406, b2 = 161.5858368580409,
                        b3 = -155.6989798598866, b4 = 66.80131188771972,
                        b5 = -13.28068155288572;
    static const double c1 = -7.784894002430293e-03, c2 = -3.223964580411365e-01,
                        c3 = -2.400758277161838, c4 = -2.549732539343734,
                        c5 = 4.374664141464968, c6 = 2.938163982698783;
    static const double d1 = 7.784695709041462e-03, d2 = 3.224671290700398e-01,
                        d3 = 2.445134137142996, d4 = 3.754408661907416;
    const double plow = 0.02425, phigh = 1.0 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6) /
               ((((d1 * q + d2) * q + d3) * q + d4) * q + 1.0);
    }
    if (p > phigh) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6) /
               ((((d1 * q + d2) * q + d3) * q + d4) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a1 * r + a2) * r + a3) * r + a4) * r + a5) * r + a6) * q /
           (((((b1 * r + b2) * r + b3) * r + b4) * r + b5) * r + 1.0);
}

// Gauss-Kronrod 7-15 nodes/weights (positive half; QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 3; ++j) {
        const int idx = 2 * j + 1;
        const double dx = h * kXgk[idx];
        const double fsum = f(c - dx) + f(c + dx);
        resg += kWg[j] * fsum;
        resk += kWgk[idx] * fsum;
    }
    for (int j = 0; j < 4; ++j) {
        const int idx = 2 * j;
        const double dx = h * kXgk[idx];
        resk += kWgk[idx] * (f(c - dx) + f(c + dx));
    }
    return Panel{a, b, resk * h, std::abs((resk - resg) * h)};
}

} // namespace

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::domain_error("Tolerance: abs_tol and rel_tol must be > 0");
    if (max_subdivisions < 1)
        throw std::domain_error("Tolerance: max_subdivisions must be >= 1");
}

double q_function(double x) {
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double q_inverse(double prob) {
    if (!(prob > 0.0) || !(prob < 1.0))
        throw std::domain_error("q_inverse: probability must lie in (0, 1)");
    // Reduce to the lower tail, where Q is well conditioned. The complement
    // 1 - prob is exact for prob >= 0.5 (Sterbenz), so this loses nothing.
    if (prob > 0.5) return -q_inverse(1.0 - prob);
    // Acklam seed, then Newton on Q(x) - p with Q'(x) = -phi(x).
    double x = -inv_norm_cdf_acklam(prob);
    for (int it = 0; it < 4; ++it) {
        const double dens = phi(x);
        if (!(dens > 1e-300)) break;
        const double step = (q_function(x) - prob) / dens;
        x += step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

double reg_lower_gamma(double shape, double x) {
    if (!(shape > 0.0))
        throw std::domain_error("reg_lower_gamma: shape must be > 0");
    if (x < 0.0)
        throw std::domain_error("reg_lower_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;

    const double lg = std::lgamma(shape);
    const double log_prefix = shape * std::log(x) - x - lg;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_iter = 1000;

    if (x < shape + 1.0) {
        // Series: P(a,x) = x^a e^-x / Gamma(a) * sum_n x^n / (a (a+1) ... (a+n)).
        double ap = shape;
        double sum = 1.0 / shape;
        double del = sum;
        for (int n = 0; n < max_iter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * eps)
                return std::min(1.0, sum * std::exp(log_prefix));
        }
        throw ConvergenceError("reg_lower_gamma: series did not converge");
    }

    // Continued fraction for Q(a,x), modified Lentz.
    constexpr double fpmin = 1e-300;
    double b = x + 1.0 - shape;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - shape);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps) {
            const double q = std::exp(log_prefix) * h;
            return std::max(0.0, 1.0 - q);
        }
    }
    throw ConvergenceError("reg_lower_gamma: continued fraction did not converge");
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Tolerance& tol) {
    tol.validate();
    if (std::isinf(lo))
        throw std::domain_error("integrate: lower limit must be finite");
    if (!(lo < hi))
        throw std::domain_error("integrate: requires lo < hi");

    std::function<double(double)> g;
    double a = lo, b = hi;
    if (std::isinf(hi)) {
        // x = lo + t/(1-t) maps [0,1) onto [lo, inf); dx = dt/(1-t)^2.
        g = [&f, lo](double t) {
            const double om = 1.0 - t;
            return f(lo + t / om) / (om * om);
        };
        a = 0.0;
        b = 1.0;
    } else {
        g = f;
    }

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
    Panel whole = gauss_kronrod_15(g, a, b);
    double total_value = whole.value;
    double total_error = whole.error;
    heap.push(whole);

    for (int splits = 0; splits < tol.max_subdivisions; ++splits) {
        if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total_value)))
            return total_value;
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // Panel width at rounding limit; nothing more to gain here.
            heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
            total_error -= worst.error;
            continue;
        }
        Panel left = gauss_kronrod_15(g, worst.a, mid);
        Panel right = gauss_kronrod_15(g, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total_value)))
        return total_value;
    throw ConvergenceError("integrate: subdivision limit reached before tolerance");
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo,
                              double hi, double tol) {
    if (!(lo < hi))
        throw std::domain_error("minimize_scalar: requires lo < hi");

    constexpr int grid_points = 97;
    const bool log_spaced = lo > 0.0;
    const double ratio = log_spaced ? std::pow(hi / lo, 1.0 / (grid_points - 1)) : 0.0;
    const double step = log_spaced ? 0.0 : (hi - lo) / (grid_points - 1);

    ScalarMinimum best{lo, std::numeric_limits<double>::infinity()};
    auto probe = [&](double x) {
        const double v = g(x);
        if (v < best.min_value) best = {x, v};
        return v;
    };

    std::vector<double> xs(grid_points);
    int best_idx = 0;
    double best_grid_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        xs[i] = log_spaced ? lo * std::pow(ratio, i) : lo + step * i;
        if (i == grid_points - 1) xs[i] = hi;
        const double v = probe(xs[i]);
        if (v < best_grid_value) {
            best_grid_value = v;
            best_idx = i;
        }
    }

    // Golden-section refinement around the grid minimum.
    double a = xs[std::max(0, best_idx - 1)];
    double b = xs[std::min(grid_points - 1, best_idx + 1)];
    constexpr double inv_phi = 0.61803398874989484820;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = probe(c);
    double fd = probe(d);
    for (int it = 0; it < 200 && (b - a) > tol * (std::abs(a) + std::abs(b)) + 1e-300; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = probe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = probe(d);
        }
    }
    return best;
}

} // namespace fbdiv::numerics
