#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "yamabe/errors.hpp"
#include "yamabe/scaled_value.hpp"

namespace yamabe::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial profile f(r) with an asymptotic tail hint:
// |f(r)| = O(r^decay_exponent) as r -> infinity (negative for decay).
// Unbounded-domain integration in dimension N requires decay_exponent + N < 0.
struct RadialIntegrand {
    std::function<double(double)> eval;
    double decay_exponent = 0.0;
};

struct RadialInterval {
    double inner = 0.0;
    double outer = kInf;

    RadialInterval() = default;
    RadialInterval(double a, double b) : inner(a), outer(b) {
        if (!(inner >= 0.0) || !(inner < outer))
            throw std::invalid_argument("RadialInterval: need 0 <= inner < outer");
    }
    bool unbounded() const { return outer == kInf; }
    static RadialInterval whole() { return RadialInterval(0.0, kInf); }
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true; // false: refinement budget exhausted, best estimate returned
};

struct LogQuadratureResult {
    ScaledValue value;
    double rel_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    long max_panels = 4000;
    double scale_hint = 1.0;               // radius scale of the integrand's features
    std::vector<double> breakpoints = {};  // interior points forced onto panel edges
};

// ---- geometric constants ---------------------------------------------------

double sphere_area(int dim);          // |S^{N-1}|, area of the unit sphere in R^dim
double sphere_surface_area(int n);    // |S^n|, area of the unit n-sphere in R^{n+1}
double unit_ball_volume(int n);       // vol(B^n)

// Average over S^{dim-1} of prod_i |n_i|^{beta_i} (Dirichlet closed form).
double sphere_monomial_average(int dim, const std::vector<double>& beta);

// ---- scalar adaptive engine (Gauss-Kronrod 7/15, deterministic) ------------

// integral of w over [a, b] (b may be +inf).
QuadratureResult integrate_1d(const std::function<double(double)>& w, double a, double b,
                              const QuadratureOptions& opts = {});

// Positive integrand given as log_w(r) = ln w(r) (may be -inf where w = 0);
// result carried out of the double exponent range as a ScaledValue.
LogQuadratureResult integrate_1d_log(const std::function<double(double)>& log_w, double a,
                                     double b, const QuadratureOptions& opts = {});

// ---- N-dimensional radial integrals -----------------------------------------

// integral over the shell dom of f(|x|) dx in R^dim.
QuadratureResult integrate_radial(const RadialIntegrand& f, const RadialInterval& dom, int dim,
                                  double rel_tol);
QuadratureResult integrate_radial(const RadialIntegrand& f, const RadialInterval& dom, int dim,
                                  const QuadratureOptions& opts);

// (integral over dom of |h(|x|)|^q dx)^(1/q).
double lq_norm_shell(const std::function<double(double)>& radial_profile,
                     const RadialInterval& dom, double q, int dim, double rel_tol = 1e-10);

// Same for f(x) = x^alpha h(|x|) with the angular factor in closed form.
double lq_norm_shell_monomial(const std::vector<int>& alpha,
                              const std::function<double(double)>& radial_profile,
                              const RadialInterval& dom, double q, int dim,
                              double rel_tol = 1e-10);

// integral over R^dim of x^alpha g(|x|) dx, |alpha| <= 4. Odd parity in any
// coordinate short-circuits to exactly 0 with no quadrature.
using MultiIndex = std::vector<int>;
double moment_integral(const RadialIntegrand& g, const MultiIndex& alpha, int dim,
                       double rel_tol = 1e-10);

} // namespace yamabe::quad
