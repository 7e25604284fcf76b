#include "yamabe/geometry.hpp"

#include <cmath>
#include <random>

#include "yamabe/parallel.hpp"

namespace yamabe::geom {

namespace {

double machine_step() { return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0); }

Vec apply_rotation(const SquareMat* rot, const Vec& x) {
    if (!rot) return x;
    Vec y(x.size(), 0.0);
    for (int i = 0; i < rot->n; ++i)
        for (int j = 0; j < rot->n; ++j) y[i] += (*rot)(i, j) * x[j];
    return y;
}

} // namespace

bool Chart::in_domain(const Vec& u, double margin) const {
    if (static_cast<int>(u.size()) != dim) return false;
    for (int i = 0; i < dim; ++i)
        if (u[i] < domain[i].first + margin || u[i] > domain[i].second - margin) return false;
    return true;
}

Chart make_sphere_chart(int n, double radius, const SquareMat* ambient_rotation) {
    if (n < 1) throw std::invalid_argument("make_sphere_chart: n must be >= 1");
    Chart c;
    c.dim = n;
    c.name = "sphere_S" + std::to_string(n);
    c.embed_dim = n + 1;
    for (int i = 0; i < n - 1; ++i) c.domain.emplace_back(0.0, M_PI);
    c.domain.emplace_back(0.0, 2.0 * M_PI);
    const double r2 = radius * radius;
    c.metric = [n, r2](const Vec& th) {
        SquareMat g(n);
        double prod = 1.0;
        for (int i = 0; i < n; ++i) {
            g(i, i) = r2 * prod;
            const double s = std::sin(th[i]);
            prod *= s * s;
        }
        return g;
    };
    SquareMat rot_copy;
    const bool has_rot = ambient_rotation != nullptr;
    if (has_rot) rot_copy = *ambient_rotation;
    c.embed = [n, radius, has_rot, rot_copy](const Vec& th) {
        Vec x(n + 1);
        double prod = radius;
        for (int i = 0; i < n; ++i) {
            x[i] = prod * std::cos(th[i]);
            prod *= std::sin(th[i]);
        }
        x[n] = prod;
        return has_rot ? apply_rotation(&rot_copy, x) : x;
    };
    return c;
}

Vec sphere_angles_from_ambient(int n, double radius, const Vec& ambient,
                               const SquareMat* ambient_rotation) {
    Vec x = ambient;
    if (ambient_rotation) {
        // undo the rotation: x = R^T ambient
        const SquareMat rt = ambient_rotation->transposed();
        x = apply_rotation(&rt, ambient);
    }
    (void)radius;
    Vec th(n);
    for (int i = 0; i < n - 1; ++i) {
        double rest = 0.0;
        for (int j = i + 1; j <= n; ++j) rest += x[j] * x[j];
        th[i] = std::atan2(std::sqrt(rest), x[i]); // in (0, pi)
    }
    th[n - 1] = std::atan2(x[n], x[n - 1]);
    if (th[n - 1] < 0.0) th[n - 1] += 2.0 * M_PI;
    return th;
}

Chart make_circle_chart(double radius) {
    Chart c;
    c.dim = 1;
    c.name = "circle";
    c.embed_dim = 2;
    c.domain.emplace_back(-M_PI, M_PI);
    const double r2 = radius * radius;
    c.metric = [r2](const Vec&) {
        SquareMat g(1);
        g(0, 0) = r2;
        return g;
    };
    c.embed = [radius](const Vec& th) {
        return Vec{radius * std::cos(th[0]), radius * std::sin(th[0])};
    };
    return c;
}

Chart make_flat_chart(int n) {
    Chart c;
    c.dim = n;
    c.name = "flat_R" + std::to_string(n);
    for (int i = 0; i < n; ++i) c.domain.emplace_back(-1.0, 1.0);
    c.metric = [n](const Vec&) { return SquareMat::identity(n); };
    return c;
}

Chart make_ellipsoid_graph_chart(const std::vector<double>& semi_axes) {
    const int n = static_cast<int>(semi_axes.size()) - 1;
    if (n < 2) throw std::invalid_argument("make_ellipsoid_graph_chart: need n >= 2");
    for (double a : semi_axes)
        if (!(a > 0.0)) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
    Chart c;
    c.dim = n;
    c.name = "ellipsoid_graph";
    c.embed_dim = n + 1;
    const std::vector<double> ax = semi_axes;
    const double half = 0.35 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) c.domain.emplace_back(-half * ax[i], half * ax[i]);
    auto height = [ax, n](const Vec& u) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += u[i] * u[i] / (ax[i] * ax[i]);
        if (s >= 1.0) throw OutOfDomainError("ellipsoid chart: outside the graph region");
        return ax[n] * std::sqrt(1.0 - s);
    };
    c.metric = [ax, n, height](const Vec& u) {
        // g = I + grad h grad h^T with dh/du_i = -a_{n+1}^2 u_i / (a_i^2 h)
        const double h = height(u);
        SquareMat g = SquareMat::identity(n);
        Vec dh(n);
        for (int i = 0; i < n; ++i) dh[i] = -ax[n] * ax[n] * u[i] / (ax[i] * ax[i] * h);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) += dh[i] * dh[j];
        return g;
    };
    c.embed = [n, height](const Vec& u) {
        Vec x(n + 1);
        for (int i = 0; i < n; ++i) x[i] = u[i];
        x[n] = height(u);
        return x;
    };
    return c;
}

Chart make_sphere_normal_chart(int n, double radius) {
    Chart c;
    c.dim = n;
    c.name = "sphere_normal_coords";
    const double lim = 0.45 * M_PI * radius;
    for (int i = 0; i < n; ++i) c.domain.emplace_back(-lim, lim);
    c.metric = [n, radius](const Vec& x) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        SquareMat g(n);
        if (r2 < 1e-60) return SquareMat::identity(n);
        const double r = std::sqrt(r2);
        const double t = r / radius;
        const double sc = std::sin(t) / t; // sin^2(r/R)/(r/R)^2 tangential factor
        const double tang = sc * sc;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double rad_part = x[i] * x[j] / r2;
                g(i, j) = rad_part + tang * ((i == j ? 1.0 : 0.0) - rad_part);
            }
        return g;
    };
    return c;
}

Chart make_warped_product(const WarpedProductSpec& spec) {
    Chart c;
    c.dim = spec.base.dim + spec.fiber.dim;
    c.name = spec.name.empty() ? (spec.base.name + "_x_" + spec.fiber.name) : spec.name;
    c.domain = spec.base.domain;
    c.domain.insert(c.domain.end(), spec.fiber.domain.begin(), spec.fiber.domain.end());
    const Chart base = spec.base;
    const Chart fiber = spec.fiber;
    const auto warp = spec.warping;
    const int nb = base.dim, nf = fiber.dim;
    c.metric = [base, fiber, warp, nb, nf](const Vec& u) {
        const Vec ub(u.begin(), u.begin() + nb);
        const Vec uf(u.begin() + nb, u.end());
        const double f = warp ? warp(ub) : 1.0;
        if (!(f > 0.0)) throw std::invalid_argument("warped product: warping must be positive");
        const SquareMat gb = base.metric(ub);
        const SquareMat gf = fiber.metric(uf);
        SquareMat g(nb + nf);
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) g(i, j) = gb(i, j);
        for (int i = 0; i < nf; ++i)
            for (int j = 0; j < nf; ++j) g(nb + i, nb + j) = f * f * gf(i, j);
        return g;
    };
    return c;
}

Chart make_product(const Chart& a, const Chart& b) {
    WarpedProductSpec spec{a, b, nullptr, a.name + "_x_" + b.name};
    return make_warped_product(spec);
}

SquareMat metric_at(const Chart& chart, const Vec& u) {
    if (!chart.in_domain(u)) throw OutOfDomainError("metric_at: point outside chart domain");
    return chart.metric(u);
}

namespace {

// 4th-order central differences of the metric, Richardson-extrapolated once.
struct MetricDerivs {
    SquareMat g;
    std::vector<SquareMat> dg;               // dg[k](i,j) = d_k g_ij
    std::vector<std::vector<SquareMat>> ddg; // ddg[k][l](i,j) = d_k d_l g_ij
};

SquareMat eval_shift(const Chart& chart, Vec u, int k, double dk, int l, double dl) {
    u[k] += dk;
    if (l >= 0) u[l] += dl;
    return chart.metric(u);
}

SquareMat mat_comb(std::initializer_list<std::pair<double, const SquareMat*>> terms, int n) {
    SquareMat out(n);
    for (const auto& [c, m] : terms)
        for (std::size_t idx = 0; idx < out.a.size(); ++idx) out.a[idx] += c * m->a[idx];
    return out;
}

SquareMat d1_once(const Chart& chart, const Vec& u, int k, double h) {
    const SquareMat p2 = eval_shift(chart, u, k, 2 * h, -1, 0);
    const SquareMat p1 = eval_shift(chart, u, k, h, -1, 0);
    const SquareMat m1 = eval_shift(chart, u, k, -h, -1, 0);
    const SquareMat m2 = eval_shift(chart, u, k, -2 * h, -1, 0);
    const int n = chart.dim;
    return mat_comb({{-1.0 / (12 * h), &p2},
                     {8.0 / (12 * h), &p1},
                     {-8.0 / (12 * h), &m1},
                     {1.0 / (12 * h), &m2}},
                    n);
}

SquareMat d2_diag_once(const Chart& chart, const Vec& u, int k, double h) {
    const SquareMat p2 = eval_shift(chart, u, k, 2 * h, -1, 0);
    const SquareMat p1 = eval_shift(chart, u, k, h, -1, 0);
    const SquareMat c0 = chart.metric(u);
    const SquareMat m1 = eval_shift(chart, u, k, -h, -1, 0);
    const SquareMat m2 = eval_shift(chart, u, k, -2 * h, -1, 0);
    const int n = chart.dim;
    const double h2 = h * h;
    return mat_comb({{-1.0 / (12 * h2), &p2},
                     {16.0 / (12 * h2), &p1},
                     {-30.0 / (12 * h2), &c0},
                     {16.0 / (12 * h2), &m1},
                     {-1.0 / (12 * h2), &m2}},
                    n);
}

SquareMat d2_mixed_once(const Chart& chart, const Vec& u, int k, int l, double hk, double hl) {
    // nested 4th-order first-derivative stencils
    const double ck[4] = {-1.0, 8.0, -8.0, 1.0};
    const double sk[4] = {2.0, 1.0, -1.0, -2.0};
    const int n = chart.dim;
    SquareMat acc(n);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const SquareMat m = eval_shift(chart, u, k, sk[a] * hk, l, sk[b] * hl);
            const double c = ck[a] * ck[b] / (144.0 * hk * hl);
            for (std::size_t idx = 0; idx < acc.a.size(); ++idx) acc.a[idx] += c * m.a[idx];
        }
    }
    return acc;
}

SquareMat richardson(const SquareMat& coarse, const SquareMat& fine) {
    // both 4th order: error(h) ~ c h^4, so (16 fine - coarse)/15 is 6th order
    SquareMat out(coarse.n);
    for (std::size_t i = 0; i < out.a.size(); ++i)
        out.a[i] = (16.0 * fine.a[i] - coarse.a[i]) / 15.0;
    return out;
}

MetricDerivs metric_derivatives(const Chart& chart, const Vec& u, double step_scale) {
    const int n = chart.dim;
    MetricDerivs md;
    md.g = chart.metric(u);
    md.dg.resize(n);
    md.ddg.assign(n, std::vector<SquareMat>(n));
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) h[i] = step_scale * (1.0 + std::fabs(u[i]));
    for (int k = 0; k < n; ++k)
        md.dg[k] = richardson(d1_once(chart, u, k, h[k]), d1_once(chart, u, k, 0.5 * h[k]));
    for (int k = 0; k < n; ++k) {
        md.ddg[k][k] = richardson(d2_diag_once(chart, u, k, h[k]),
                                  d2_diag_once(chart, u, k, 0.5 * h[k]));
        for (int l = k + 1; l < n; ++l) {
            md.ddg[k][l] = richardson(d2_mixed_once(chart, u, k, l, h[k], h[l]),
                                      d2_mixed_once(chart, u, k, l, 0.5 * h[k], 0.5 * h[l]));
            md.ddg[l][k] = md.ddg[k][l];
        }
    }
    return md;
}

} // namespace

CurvatureAtPoint curvature_at(const Chart& chart, const Vec& u, const CurvatureOptions& opts) {
    const int n = chart.dim;
    const double step = opts.fd_step_scale > 0 ? opts.fd_step_scale : machine_step();
    if (!chart.in_domain(u, 2.5 * step * 2.0))
        throw OutOfDomainError("curvature_at: point too close to the chart boundary");

    const MetricDerivs md = metric_derivatives(chart, u, step);
    CurvatureAtPoint c;
    c.dim = n;
    c.metric = md.g;
    c.fd_tolerance = opts.fd_tolerance;

    {
        const auto ev = symmetric_eigenvalues(md.g);
        if (ev.front() <= 1e-10)
            throw SingularMetricError("curvature_at: metric not positive definite at the point");
    }
    c.inverse_metric = inverse(md.g);
    const SquareMat& gi = c.inverse_metric;

    // Gamma^k_{ij} = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    c.christoffel = Tensor3(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += gi(k, l) * (md.dg[i](j, l) + md.dg[j](i, l) - md.dg[l](i, j));
                c.christoffel(k, i, j) = 0.5 * acc;
            }

    // d_m Gamma^k_{ij} from d g^{-1} = -g^{-1} (d g) g^{-1} and dd g
    Tensor4 dgamma(n); // (m, k, i, j)
    std::vector<SquareMat> dgi(n, SquareMat(n));
    for (int m = 0; m < n; ++m) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int r = 0; r < n; ++r)
                    for (int s2 = 0; s2 < n; ++s2) acc += gi(a, r) * md.dg[m](r, s2) * gi(s2, b);
                dgi[m](a, b) = -acc;
            }
    }
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l) {
                        acc += dgi[m](k, l) * (md.dg[i](j, l) + md.dg[j](i, l) - md.dg[l](i, j));
                        acc += gi(k, l) * (md.ddg[m][i](j, l) + md.ddg[m][j](i, l) -
                                           md.ddg[m][l](i, j));
                    }
                    dgamma(m, k, i, j) = 0.5 * acc;
                }

    // R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
    //                       + Gamma^rho_{mu l} Gamma^l_{nu sigma} - Gamma^rho_{nu l} Gamma^l_{mu sigma}
    Tensor4 rup(n); // (rho, sigma, mu, nu)
    for (int rho = 0; rho < n; ++rho)
        for (int sig = 0; sig < n; ++sig)
            for (int mu = 0; mu < n; ++mu)
                for (int nu = 0; nu < n; ++nu) {
                    double acc = dgamma(mu, rho, nu, sig) - dgamma(nu, rho, mu, sig);
                    for (int l = 0; l < n; ++l)
                        acc += c.christoffel(rho, mu, l) * c.christoffel(l, nu, sig) -
                               c.christoffel(rho, nu, l) * c.christoffel(l, mu, sig);
                    rup(rho, sig, mu, nu) = acc;
                }

    c.riemann = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int r = 0; r < n; ++r) acc += md.g(i, r) * rup(r, j, k, l);
                    c.riemann(i, j, k, l) = acc;
                }

    c.ricci = SquareMat(n);
    for (int s2 = 0; s2 < n; ++s2)
        for (int nu = 0; nu < n; ++nu) {
            double acc = 0.0;
            for (int m = 0; m < n; ++m) acc += rup(m, s2, m, nu);
            c.ricci(s2, nu) = acc;
        }
    c.scalar = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) c.scalar += gi(a, b) * c.ricci(a, b);

    if (n >= 4) {
        c.weyl = Tensor4(n);
        const double cn1 = 1.0 / (n - 2.0);
        const double cn2 = 1.0 / ((n - 1.0) * (n - 2.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double w = c.riemann(i, j, k, l);
                        w -= cn1 * (md.g(i, k) * c.ricci(j, l) - md.g(i, l) * c.ricci(j, k) +
                                    md.g(j, l) * c.ricci(i, k) - md.g(j, k) * c.ricci(i, l));
                        w += c.scalar * cn2 *
                             (md.g(i, k) * md.g(j, l) - md.g(i, l) * md.g(j, k));
                        c.weyl(i, j, k, l) = w;
                    }
        // raise indices one slot at a time
        Tensor4 t1(n), t2(n);
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double acc = 0.0;
                        for (int i = 0; i < n; ++i) acc += gi(a, i) * c.weyl(i, j, k, l);
                        t1(a, j, k, l) = acc;
                    }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double acc = 0.0;
                        for (int j = 0; j < n; ++j) acc += gi(b, j) * t1(a, j, k, l);
                        t2(a, b, k, l) = acc;
                    }
        Tensor4 t3(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cdx = 0; cdx < n; ++cdx)
                    for (int l = 0; l < n; ++l) {
                        double acc = 0.0;
                        for (int k = 0; k < n; ++k) acc += gi(cdx, k) * t2(a, b, k, l);
                        t3(a, b, cdx, l) = acc;
                    }
        double nrm = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cdx = 0; cdx < n; ++cdx)
                    for (int dd = 0; dd < n; ++dd) {
                        double up = 0.0;
                        for (int l = 0; l < n; ++l) up += gi(dd, l) * t3(a, b, cdx, l);
                        nrm += up * c.weyl(a, b, cdx, dd);
                    }
        c.weyl_norm_sq = nrm;
    }

    if (opts.check_invariants) {
        double max_r = 0.0;
        for (double v : c.riemann.a) max_r = std::max(max_r, std::fabs(v));
        const double budget = 10.0 * opts.fd_tolerance * std::max(1.0, max_r);
        double defect = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const double r = c.riemann(i, j, k, l);
                        defect = std::max(defect, std::fabs(r + c.riemann(j, i, k, l)));
                        defect = std::max(defect, std::fabs(r + c.riemann(i, j, l, k)));
                        defect = std::max(defect, std::fabs(r - c.riemann(k, l, i, j)));
                        defect = std::max(defect,
                                          std::fabs(r + c.riemann(i, k, l, j) +
                                                    c.riemann(i, l, j, k)));
                    }
        if (defect > budget)
            throw SingularMetricError("curvature_at: Riemann symmetry defect " +
                                      std::to_string(defect) + " exceeds budget " +
                                      std::to_string(budget));
        if (n >= 4) {
            double trace_defect = 0.0;
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int k = 0; k < n; ++k) acc += gi(i, k) * c.weyl(i, j, k, l);
                    trace_defect = std::max(trace_defect, std::fabs(acc));
                }
            if (trace_defect > budget)
                throw SingularMetricError("curvature_at: Weyl trace defect " +
                                          std::to_string(trace_defect) + " exceeds budget " +
                                          std::to_string(budget));
        }
    }
    return c;
}

double weyl_norm_sq(const CurvatureAtPoint& c) {
    if (c.dim < 4)
        throw DimensionTooLowError("weyl_norm_sq: Weyl vanishes identically for n < 4");
    return c.weyl_norm_sq;
}

bubbles::CurvatureData CurvatureAtPoint::to_curvature_data() const {
    const int n = dim;
    // orthonormal frame E = L^{-T} with g = L L^T, so E^T g E = I
    const SquareMat l = cholesky(metric);
    const SquareMat e = inverse(l).transposed();
    Tensor4 rf(n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int ii = 0; ii < n; ++ii)
                        for (int aa = 0; aa < n; ++aa)
                            for (int bb = 0; bb < n; ++bb)
                                for (int jj = 0; jj < n; ++jj)
                                    acc += riemann(ii, aa, bb, jj) * e(ii, i) * e(aa, a) *
                                           e(bb, b) * e(jj, j);
                    rf(i, a, b, j) = acc;
                }
    // normal coordinates at the point: sum_i d_l Gamma^k_{ii} = (2/3) sum_i R_{ilik}
    SquareMat dg(n);
    for (int l2 = 0; l2 < n; ++l2)
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += rf(i, l2, i, k);
            dg(l2, k) = (2.0 / 3.0) * acc;
        }
    return bubbles::CurvatureData(n, std::move(rf), std::move(dg), scalar, 1e-6);
}

LcfReport lcf_check(const Chart& chart, const std::vector<Vec>& samples, double tol,
                    double nonzero_floor, const CurvatureOptions& opts) {
    if (chart.dim < 4)
        throw DimensionTooLowError("lcf_check: Weyl criterion needs n >= 4");
    LcfReport rep;
    rep.weyl_per_sample = weyl_norms_at(chart, samples, opts);
    for (double w : rep.weyl_per_sample) rep.max_weyl = std::max(rep.max_weyl, w);
    rep.is_flat_candidate = rep.max_weyl <= tol;
    rep.ambiguous = !rep.is_flat_candidate && rep.max_weyl < nonzero_floor;
    return rep;
}

std::vector<double> weyl_norms_at(const Chart& chart, const std::vector<Vec>& points,
                                  const CurvatureOptions& opts, bool serial) {
    std::vector<double> out(points.size(), 0.0);
    parallel_for_indexed(
        points.size(),
        [&](std::size_t i) { out[i] = curvature_at(chart, points[i], opts).weyl_norm_sq; },
        serial);
    return out;
}

SymmetryReport symmetry_check(const Chart& chart, const std::function<Vec(const Vec&)>& map,
                              const Vec& fixed_point, const std::vector<Vec>& samples,
                              double fd_step, double tol) {
    const int n = chart.dim;
    SymmetryReport rep;
    const Vec image = map(fixed_point);
    for (int i = 0; i < n; ++i)
        rep.fixed_point_error = std::max(rep.fixed_point_error,
                                         std::fabs(image[i] - fixed_point[i]));
    if (rep.fixed_point_error > 1e-10)
        throw FixedPointViolationError("symmetry_check: H does not fix the base point");

    auto jacobian = [&](const Vec& u) {
        SquareMat j(n);
        for (int k = 0; k < n; ++k) {
            Vec up2 = u, up1 = u, um1 = u, um2 = u;
            const double h = fd_step * (1.0 + std::fabs(u[k]));
            up2[k] += 2 * h;
            up1[k] += h;
            um1[k] -= h;
            um2[k] -= 2 * h;
            const Vec f2 = map(up2), f1 = map(up1), g1 = map(um1), g2 = map(um2);
            for (int i = 0; i < n; ++i)
                j(i, k) = (-f2[i] + 8.0 * f1[i] - 8.0 * g1[i] + g2[i]) / (12.0 * h);
        }
        return j;
    };

    for (const Vec& u : samples) {
        const Vec hu = map(u);
        if (!chart.in_domain(hu)) throw OutOfDomainError("symmetry_check: H leaves the chart");
        const SquareMat g_here = chart.metric(u);
        const SquareMat g_there = chart.metric(hu);
        const SquareMat j = jacobian(u);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double pb = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int jj = 0; jj < n; ++jj) pb += g_there(i, jj) * j(i, a) * j(jj, b);
                rep.max_metric_defect =
                    std::max(rep.max_metric_defect, std::fabs(pb - g_here(a, b)));
            }
    }

    const SquareMat jp = jacobian(fixed_point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rep.dh_plus_id_norm = std::max(rep.dh_plus_id_norm,
                                           std::fabs(jp(i, j) + (i == j ? 1.0 : 0.0)));
    rep.pass = rep.max_metric_defect <= tol && rep.dh_plus_id_norm <= tol;
    return rep;
}

std::vector<Vec> sample_domain(const Chart& chart, int count, unsigned seed, double margin) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    std::vector<Vec> out;
    for (int s = 0; s < count; ++s) {
        Vec u(chart.dim);
        for (int i = 0; i < chart.dim; ++i) {
            const auto [lo, hi] = chart.domain[i];
            u[i] = lo + margin + (hi - lo - 2.0 * margin) * unit();
        }
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace yamabe::geom
