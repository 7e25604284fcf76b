#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "yamabe/bubbles.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/smallmat.hpp"

namespace yamabe::geom {

// A coordinate chart: either a closed-form metric g_ij(u) or an embedding
// whose analytic Jacobian induces g = J^T J (both may be present; when both
// are, they agree and the metric path is used for curvature).
struct Chart {
    int dim = 0;
    std::string name;
    std::vector<std::pair<double, double>> domain; // coordinate box
    std::function<SquareMat(const Vec&)> metric;
    std::function<Vec(const Vec&)> embed;          // optional
    int embed_dim = 0;

    bool in_domain(const Vec& u, double margin = 0.0) const;
};

// ---- chart builders ---------------------------------------------------------

// S^n(radius) in hyperspherical angles (theta_1..theta_n); induced metric in
// closed form; samples must stay >= 0.1 rad from the sin(theta_i) = 0 loci.
// An optional ambient rotation (applied to the embedding) yields genuinely
// different coordinates for chart-invariance tests.
Chart make_sphere_chart(int n, double radius, const SquareMat* ambient_rotation = nullptr);

// Angles of the (rotated) embedding point; inverse of the sphere chart map.
Vec sphere_angles_from_ambient(int n, double radius, const Vec& ambient,
                               const SquareMat* ambient_rotation = nullptr);

// S^1(radius) as a 1-D chart with metric [radius^2].
Chart make_circle_chart(double radius);

// Flat box chart with the identity metric.
Chart make_flat_chart(int n);

// n-dimensional ellipsoid sum x_i^2/a_i^2 = 1 in R^{n+1} as a graph chart
// over the first n coordinates near the top vertex; induced metric from the
// analytic Jacobian of u -> (u, h(u)).
Chart make_ellipsoid_graph_chart(const std::vector<double>& semi_axes);

// S^n(radius) in geodesic normal coordinates at a point (test oracle chart).
Chart make_sphere_normal_chart(int n, double radius);

// Warped product B x_f F with metric g_B + f(u_B)^2 g_F; f == 1 gives the
// plain product. The result is itself a Chart, so products iterate.
struct WarpedProductSpec {
    Chart base;
    Chart fiber;
    std::function<double(const Vec&)> warping; // positive on the base domain
    std::string name;
};

Chart make_warped_product(const WarpedProductSpec& spec);
Chart make_product(const Chart& a, const Chart& b); // f == 1

SquareMat metric_at(const Chart& chart, const Vec& u);

// ---- curvature --------------------------------------------------------------

struct CurvatureAtPoint {
    int dim = 0;
    SquareMat metric, inverse_metric;
    Tensor3 christoffel;  // Gamma^k_{ij} indexed (k,i,j)
    Tensor4 riemann;      // all indices down, R_{ijkl}: antisym (ij), (kl)
    SquareMat ricci;
    double scalar = 0.0;
    Tensor4 weyl;
    double weyl_norm_sq = 0.0;
    double fd_tolerance = 0.0; // symmetry checks ran against 10x this

    // Orthonormal-frame slice consumed by bubbles::solvability_nu:
    // frame Riemann in the paper's (i,a,b,j) slot order plus the
    // normal-coordinates identity sum_i d_l Gamma^k_{ii} = (2/3) sum_i R_{ilik}.
    bubbles::CurvatureData to_curvature_data() const;
};

struct CurvatureOptions {
    double fd_step_scale = 0.0;   // 0: automatic eps_machine^{1/6} per coordinate
    double fd_tolerance = 1e-6;   // symmetry-defect budget is 10x this
    bool check_invariants = true;
};

CurvatureAtPoint curvature_at(const Chart& chart, const Vec& u,
                              const CurvatureOptions& opts = {});

// |W|^2 with all four indices raised; n >= 4 required (Weyl vanishes below).
double weyl_norm_sq(const CurvatureAtPoint& c);

struct LcfReport {
    bool is_flat_candidate = false;
    double max_weyl = 0.0;
    bool ambiguous = false; // max landed in the (tol, nonzero-floor) gap band
    std::vector<double> weyl_per_sample;
};

// Numerical conformal-flatness oracle: flat iff max sampled |W|^2 <= tol.
// Values in (tol, nonzero_floor) are flagged ambiguous and treated as a
// failed test rather than a silent pass.
LcfReport lcf_check(const Chart& chart, const std::vector<Vec>& samples, double tol = 1e-6,
                    double nonzero_floor = 1e-3, const CurvatureOptions& opts = {});

// Batch |W|^2 evaluation, OpenMP-parallel across points with a serial
// reference path (identical output by construction).
std::vector<double> weyl_norms_at(const Chart& chart, const std::vector<Vec>& points,
                                  const CurvatureOptions& opts = {}, bool serial = false);

// ---- point symmetry ----------------------------------------------------------

struct SymmetryReport {
    double max_metric_defect = 0.0; // max |H^*g - g| over samples
    double dh_plus_id_norm = 0.0;   // ||dH_p + Id|| at the fixed point
    double fixed_point_error = 0.0;
    bool pass = false;
};

// Checks that H is an isometry fixing p with dH_p = -Id: metric pullback via
// the finite-difference differential of H at each sample, plus the fixed-point
// differential condition.
SymmetryReport symmetry_check(const Chart& chart, const std::function<Vec(const Vec&)>& map,
                              const Vec& fixed_point, const std::vector<Vec>& samples,
                              double fd_step = 1e-6, double tol = 1e-8);

// Uniform samples in the chart's domain box with the given margin, seeded.
std::vector<Vec> sample_domain(const Chart& chart, int count, unsigned seed,
                               double margin = 0.1);

} // namespace yamabe::geom
