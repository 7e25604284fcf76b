#include "doctest.h"

#include <cmath>
#include <random>

#include "yamabe/geometry.hpp"
#include "yamabe/manifold_catalog.hpp"

using namespace yamabe;
using geom::Chart;

namespace {

// Dense-loop oracle for the Weyl norm of a product of unit spheres: the
// Riemann tensor is block constant-curvature with vanishing mixed components;
// everything contracted in the orthonormal frame, independent of the FD path.
double product_weyl_norm_oracle(const std::vector<int>& dims) {
    const int n = [&] {
        int acc = 0;
        for (int d : dims) acc += d;
        return acc;
    }();
    std::vector<int> block(n);
    int pos = 0, bi = 0;
    for (int d : dims) {
        for (int i = 0; i < d; ++i) block[pos++] = bi;
        ++bi;
    }
    Tensor4 riem(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    if (block[i] == block[j] && block[j] == block[k] && block[k] == block[l])
                        riem(i, j, k, l) = (i == k && j == l ? 1.0 : 0.0) -
                                           (i == l && j == k ? 1.0 : 0.0);
    SquareMat ric(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += riem(i, a, i, b);
            ric(a, b) = acc;
        }
    double scal = 0.0;
    for (int a = 0; a < n; ++a) scal += ric(a, a);
    double nrm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double w = riem(i, j, k, l);
                    w -= ((i == k ? ric(j, l) : 0.0) - (i == l ? ric(j, k) : 0.0) +
                          (j == l ? ric(i, k) : 0.0) - (j == k ? ric(i, l) : 0.0)) /
                         (n - 2.0);
                    w += scal / ((n - 1.0) * (n - 2.0)) *
                         ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
                    nrm += w * w;
                }
    return nrm;
}

geom::Chart make_sphere_stereographic(int n, double radius) {
    Chart c;
    c.dim = n;
    c.name = "sphere_stereo";
    for (int i = 0; i < n; ++i) c.domain.emplace_back(-2.0, 2.0);
    const double r2 = radius * radius;
    c.metric = [n, r2](const Vec& u) {
        double s = 0.0;
        for (double ui : u) s += ui * ui;
        const double conf = 4.0 * r2 / ((1.0 + s) * (1.0 + s));
        SquareMat g(n);
        for (int i = 0; i < n; ++i) g(i, i) = conf;
        return g;
    };
    return c;
}

// angles -> ambient -> stereographic coordinates (projection from the north pole)
Vec stereo_from_angles(const geom::Chart& sphere, double radius, const Vec& th) {
    const Vec x = sphere.embed(th);
    const int n = static_cast<int>(th.size());
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = x[i] / (radius - x[n]);
    return u;
}

} // namespace

TEST_CASE("metric_at: products, the classical S^2 chart, fiber scaling") {
    // unit S^2 in angles: diag(1, sin^2 theta)
    const auto s2 = geom::make_sphere_chart(2, 1.0);
    const Vec th{0.8, 1.1};
    const auto g = geom::metric_at(s2, th);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g(1, 1) == doctest::Approx(std::sin(0.8) * std::sin(0.8)).epsilon(1e-15));
    CHECK(g(0, 1) == 0.0);

    // block product metric with f == 1
    const auto s3 = geom::make_sphere_chart(3, 1.0);
    const auto prod = geom::make_product(s2, s3);
    const Vec u{0.8, 1.1, 0.9, 1.3, 2.0};
    const auto gp = geom::metric_at(prod, u);
    CHECK(gp(0, 0) == doctest::Approx(1.0));
    CHECK(gp(2, 2) == doctest::Approx(1.0));
    CHECK(gp(0, 2) == 0.0);

    // scaling the fiber radius by c multiplies the fiber block by c^2
    const auto s3c = geom::make_sphere_chart(3, 2.0);
    const auto prod_c = geom::make_product(s2, s3c);
    const auto gc = geom::metric_at(prod_c, u);
    for (int i = 2; i < 5; ++i)
        for (int j = 2; j < 5; ++j)
            CHECK(gc(i, j) == doctest::Approx(4.0 * gp(i, j)).epsilon(1e-14));

    // embedding-induced metric agrees with the closed form (J^T J check)
    {
        const double h = 1e-6;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                Vec tpa = th, tma = th, tpb = th, tmb = th;
                tpa[a] += h;
                tma[a] -= h;
                tpb[b] += h;
                tmb[b] -= h;
                const Vec xa_p = s2.embed(tpa), xa_m = s2.embed(tma);
                const Vec xb_p = s2.embed(tpb), xb_m = s2.embed(tmb);
                double dot = 0.0;
                for (int i = 0; i < 3; ++i)
                    dot += (xa_p[i] - xa_m[i]) / (2 * h) * (xb_p[i] - xb_m[i]) / (2 * h);
                CHECK(dot == doctest::Approx(g(a, b)).epsilon(1e-8));
            }
    }

    CHECK_THROWS_AS(geom::metric_at(s2, Vec{-1.0, 1.0}), OutOfDomainError);
}

TEST_CASE("curvature: flat chart, round spheres, constant-curvature nulls") {
    {
        const auto flat = geom::make_flat_chart(5);
        const auto c = geom::curvature_at(flat, Vec(5, 0.1));
        CHECK(std::fabs(c.scalar) <= 1e-9);
        double maxr = 0.0;
        for (double v : c.riemann.a) maxr = std::max(maxr, std::fabs(v));
        CHECK(maxr <= 1e-9);
        CHECK(c.weyl_norm_sq <= 1e-9);
    }
    for (int n : {4, 5, 6, 7, 8}) {
        const auto sph = geom::make_sphere_chart(n, 1.0);
        const auto pts = geom::sample_domain(sph, 2, 100 + n, 0.2);
        for (const auto& p : pts) {
            const auto c = geom::curvature_at(sph, p);
            CHECK(c.scalar == doctest::Approx(n * (n - 1.0)).epsilon(1e-8));
            CHECK(geom::weyl_norm_sq(c) <= 1e-6);
        }
    }
    // radius scaling: S^4(2) has scalar curvature 12/4 = 3
    {
        const auto sph = geom::make_sphere_chart(4, 2.0);
        const auto c = geom::curvature_at(sph, Vec{1.2, 1.4, 0.9, 2.2});
        CHECK(c.scalar == doctest::Approx(3.0).epsilon(1e-8));
    }
    // Weyl is undefined below n = 4
    {
        const auto s3 = geom::make_sphere_chart(3, 1.0);
        const auto c = geom::curvature_at(s3, Vec{1.0, 1.2, 1.4});
        CHECK_THROWS_AS(geom::weyl_norm_sq(c), DimensionTooLowError);
    }
}

TEST_CASE("products of spheres against the dense block oracle") {
    struct Case {
        const char* name;
        std::vector<int> dims;
    };
    for (const auto& tc : {Case{"s2xs5", {2, 5}}, Case{"s3xs4", {3, 4}}, Case{"s2xs2", {2, 2}}}) {
        const auto m = catalog::build_manifold(catalog::builtin_catalog().at(tc.name));
        const auto pts = geom::sample_domain(m.chart, 3, 5, 0.25);
        const double oracle = product_weyl_norm_oracle(tc.dims);
        for (const auto& p : pts) {
            const auto c = geom::curvature_at(m.chart, p);
            CHECK(c.weyl_norm_sq == doctest::Approx(oracle).epsilon(1e-6));
            CHECK(c.weyl_norm_sq > 1e-2);
        }
    }
    // frozen oracle values (computed before the build): 32/3, 96/5, 16/3
    CHECK(product_weyl_norm_oracle({2, 5}) == doctest::Approx(32.0 / 3.0).epsilon(1e-12));
    CHECK(product_weyl_norm_oracle({3, 4}) == doctest::Approx(96.0 / 5.0).epsilon(1e-12));
    CHECK(product_weyl_norm_oracle({2, 2}) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mixed Riemann components vanish for plain products") {
    const auto m = catalog::build_manifold(catalog::builtin_catalog().at("s2xs5"));
    const auto p = geom::sample_domain(m.chart, 1, 9, 0.25)[0];
    const auto c = geom::curvature_at(m.chart, p);
    double mixed = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int a = 2; a < 7; ++a)
            for (int j = 0; j < 2; ++j)
                for (int b = 2; b < 7; ++b)
                    mixed = std::max(mixed, std::fabs(c.riemann(i, a, j, b)));
    CHECK(mixed <= 1e-5); // 10x fd_tolerance
}

TEST_CASE("lcf_check: warped-product classification oracles") {
    const auto cat = catalog::builtin_catalog();
    // dim(B) = 1 over a constant-curvature fiber: conformally flat
    {
        const auto m = catalog::build_manifold(cat.at("s1xs6"));
        const auto pts = geom::sample_domain(m.chart, 6, 3, 0.2);
        const auto rep = geom::lcf_check(m.chart, pts);
        CHECK(rep.is_flat_candidate);
        CHECK_FALSE(rep.ambiguous);
    }
    // S^2 x S^2, f == 1: obstructed for any warping, so surely for f == 1
    {
        const auto m = catalog::build_manifold(cat.at("s2xs2"));
        const auto pts = geom::sample_domain(m.chart, 6, 3, 0.2);
        const auto rep = geom::lcf_check(m.chart, pts);
        CHECK_FALSE(rep.is_flat_candidate);
        CHECK(rep.max_weyl > 1e-3);
    }
    // 4-ellipsoid with three distinct semi-axes
    {
        const auto m = catalog::build_manifold(cat.at("ellipsoid4"));
        const auto pts = geom::sample_domain(m.chart, 6, 3, 0.02);
        const auto rep = geom::lcf_check(m.chart, pts);
        CHECK_FALSE(rep.is_flat_candidate);
        CHECK(rep.max_weyl > 1e-3);
    }
    // the gap band between "zero" and "nonzero" is reported, not silently passed
    {
        const auto m = catalog::build_manifold(cat.at("s7"));
        const auto pts = geom::sample_domain(m.chart, 3, 3, 0.2);
        const auto rep = geom::lcf_check(m.chart, pts, 1e-30, 1e3);
        CHECK(rep.ambiguous);
    }
}

TEST_CASE("coordinate invariance of the Weyl norm across chart types") {
    // warped S^2 x_f S^5 (inhomogeneous, nonzero Weyl): fiber in angles vs
    // fiber in stereographic coordinates at the same manifold point
    const auto s2 = geom::make_sphere_chart(2, 1.0);
    const auto s5 = geom::make_sphere_chart(5, 1.0);
    auto warp = [](const Vec& ub) {
        const double s = std::sin(ub[0]);
        return 1.0 + 0.2 * s * s;
    };
    const auto chart_a = geom::make_warped_product({s2, s5, warp, "warped_angles"});

    auto stereo = make_sphere_stereographic(5, 1.0);
    const auto chart_b = geom::make_warped_product({s2, stereo, warp, "warped_stereo"});

    const Vec th_base{1.1, 0.7};
    const Vec th_fiber{1.3, 0.9, 1.7, 1.2, 2.1};
    const Vec u_fiber = stereo_from_angles(s5, 1.0, th_fiber);

    Vec pa = th_base;
    pa.insert(pa.end(), th_fiber.begin(), th_fiber.end());
    Vec pb = th_base;
    pb.insert(pb.end(), u_fiber.begin(), u_fiber.end());

    const double wa = geom::curvature_at(chart_a, pa).weyl_norm_sq;
    const double wb = geom::curvature_at(chart_b, pb).weyl_norm_sq;
    CHECK(wa > 1e-2);
    CHECK(wa == doctest::Approx(wb).epsilon(1e-5));
}

TEST_CASE("isometry invariance of the Weyl norm under the point symmetry") {
    const auto m = catalog::build_manifold(catalog::builtin_catalog().at("s2xs5_warped"));
    geom::Chart boxed = m.chart;
    boxed.domain = m.symmetry_box;
    const auto pts = geom::sample_domain(boxed, 4, 21, 0.25);
    for (const auto& p : pts) {
        const double w1 = geom::curvature_at(m.chart, p).weyl_norm_sq;
        const double w2 = geom::curvature_at(m.chart, m.point_symmetry(p)).weyl_norm_sq;
        CHECK(w1 == doctest::Approx(w2).epsilon(1e-5));
        CHECK(w1 > 1e-3); // inhomogeneous but nowhere vanishing on the samples
    }
}

TEST_CASE("symmetry_check: passes for isometries, fails for a shear") {
    const auto cat = catalog::builtin_catalog();
    {
        const auto m = catalog::build_manifold(cat.at("s7"));
        geom::Chart boxed = m.chart;
        boxed.domain = m.symmetry_box;
        const auto pts = geom::sample_domain(boxed, 8, 2, 0.2);
        const auto rep =
            geom::symmetry_check(m.chart, m.point_symmetry, m.fixed_point, pts, 1e-5, 1e-8);
        CHECK(rep.pass);
        CHECK(rep.dh_plus_id_norm <= 1e-8);
    }
    {
        const auto m = catalog::build_manifold(cat.at("s2xs5_warped"));
        geom::Chart boxed = m.chart;
        boxed.domain = m.symmetry_box;
        const auto pts = geom::sample_domain(boxed, 8, 2, 0.2);
        const auto rep =
            geom::symmetry_check(m.chart, m.point_symmetry, m.fixed_point, pts, 1e-5, 1e-8);
        CHECK(rep.pass);
    }
    {
        const auto m = catalog::build_manifold(cat.at("s7"));
        geom::Chart boxed = m.chart;
        boxed.domain = m.symmetry_box;
        auto shear = [](const Vec& th) {
            Vec out = th;
            out[0] += 0.25 * (th[1] - 0.5 * M_PI);
            return out;
        };
        const auto pts = geom::sample_domain(boxed, 8, 2, 0.35);
        const auto rep = geom::symmetry_check(m.chart, shear, m.fixed_point, pts, 1e-5, 1e-8);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_metric_defect > 1e-8);
    }
    {
        const auto m = catalog::build_manifold(cat.at("s7"));
        auto not_fixing = [](const Vec& th) {
            Vec out = th;
            out[0] += 0.2;
            return out;
        };
        CHECK_THROWS_AS(geom::symmetry_check(m.chart, not_fixing, m.fixed_point, {}, 1e-5, 1e-8),
                        FixedPointViolationError);
    }
}

TEST_CASE("orthonormal-frame export matches the round-sphere closed form") {
    const auto s7 = geom::make_sphere_chart(7, 1.0);
    const auto p = geom::sample_domain(s7, 1, 42, 0.3)[0];
    const auto c = geom::curvature_at(s7, p);
    const auto data = c.to_curvature_data();
    // R_{iabj} = delta_ib delta_aj - delta_ij delta_ab in any orthonormal frame
    double defect = 0.0;
    for (int i = 0; i < 7; ++i)
        for (int a = 0; a < 7; ++a)
            for (int b = 0; b < 7; ++b)
                for (int j = 0; j < 7; ++j) {
                    const double want = (i == b && a == j ? 1.0 : 0.0) -
                                        (i == j && a == b ? 1.0 : 0.0);
                    defect = std::max(defect, std::fabs(data.riemann(i, a, b, j) - want));
                }
    CHECK(defect <= 1e-6);
    CHECK(data.scalar_curv == doctest::Approx(42.0).epsilon(1e-8));
    // sum_i d_l Gamma^k_{ii} = (2/3)(N-1) delta_lk for the unit sphere
    for (int l = 0; l < 7; ++l)
        for (int k = 0; k < 7; ++k)
            CHECK(data.dgamma(l, k) ==
                  doctest::Approx(l == k ? 4.0 : 0.0).epsilon(1e-6).scale(1.0));
}

TEST_CASE("normal-coordinates chart validates the Christoffel-derivative identity") {
    // independent check of sum_i d_l Gamma^k_{ii} = (2/3) sum_i R_{ilik}: finite
    // differences of Gamma on the exact geodesic normal chart of S^5
    const int n = 5;
    const auto chart = geom::make_sphere_normal_chart(n, 1.0);
    const Vec origin(n, 0.0);
    const double h = 1e-3;

    auto gamma_trace = [&](const Vec& x) {
        const auto c = geom::curvature_at(chart, x);
        Vec acc(n, 0.0);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) acc[k] += c.christoffel(k, i, i);
        return acc;
    };

    for (int l = 0; l < n; ++l) {
        Vec xp = origin, xm = origin;
        xp[l] += h;
        xm[l] -= h;
        const Vec gp = gamma_trace(xp), gm = gamma_trace(xm);
        for (int k = 0; k < n; ++k) {
            const double fd = (gp[k] - gm[k]) / (2.0 * h);
            const double want = (2.0 / 3.0) * (n - 1.0) * (l == k ? 1.0 : 0.0);
            CHECK(fd == doctest::Approx(want).epsilon(5e-3).scale(1.0));
        }
    }
    // and the normal chart reproduces the sphere's curvature at the center
    const auto c0 = geom::curvature_at(chart, Vec(n, 1e-3));
    CHECK(c0.scalar == doctest::Approx(n * (n - 1.0)).epsilon(1e-6));
}

TEST_CASE("error paths: singular metric, boundary, angle round trip") {
    Chart degenerate;
    degenerate.dim = 3;
    degenerate.name = "degenerate";
    degenerate.domain = {{-1, 1}, {-1, 1}, {-1, 1}};
    degenerate.metric = [](const Vec&) {
        SquareMat g(3);
        g(0, 0) = 1.0;
        g(1, 1) = 1.0; // g(2,2) stays 0
        return g;
    };
    CHECK_THROWS_AS(geom::curvature_at(degenerate, Vec(3, 0.0)), SingularMetricError);

    const auto s4 = geom::make_sphere_chart(4, 1.0);
    CHECK_THROWS_AS(geom::curvature_at(s4, Vec{1e-5, 1.0, 1.0, 1.0}), OutOfDomainError);

    const auto pts = geom::sample_domain(s4, 5, 3, 0.2);
    for (const auto& th : pts) {
        const Vec amb = s4.embed(th);
        const Vec back = geom::sphere_angles_from_ambient(4, 1.0, amb);
        for (int i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(th[i]).epsilon(1e-10));
    }
}

TEST_CASE("weyl batch: serial reference equals the parallel kernel") {
    const auto m = catalog::build_manifold(catalog::builtin_catalog().at("s2xs2"));
    const auto pts = geom::sample_domain(m.chart, 12, 31, 0.2);
    const auto a = geom::weyl_norms_at(m.chart, pts, {}, true);
    const auto b = geom::weyl_norms_at(m.chart, pts, {}, false);
    CHECK(a == b);
}
