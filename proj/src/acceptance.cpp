#include "yamabe/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "yamabe/bubbles.hpp"
#include "yamabe/energy_constants.hpp"
#include "yamabe/geometry.hpp"
#include "yamabe/manifold_catalog.hpp"
#include "yamabe/reduced_energy.hpp"
#include "yamabe/tower.hpp"

namespace yamabe::accept {

namespace {

using Clock = std::chrono::steady_clock;

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

struct Runner {
    Profile profile;
    bool serial;
    std::vector<CriterionResult> results;

    template <class F>
    void run(int id, const std::string& name, F&& body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        const auto t0 = Clock::now();
        std::ostringstream detail;
        try {
            r.pass = body(detail);
        } catch (const std::exception& e) {
            r.pass = false;
            detail << " exception: " << e.what();
        }
        r.runtime_sec = std::chrono::duration<double>(Clock::now() - t0).count();
        r.detail = detail.str();
        results.push_back(std::move(r));
    }
};

// relative-to-local-magnitude residual test; decaying quantities make a raw
// absolute 1e-9 meaningless (it is below one ulp of the N=11 magnitudes).
bool residual_small(double residual, double magnitude, double tol) {
    return std::fabs(residual) <= tol * (magnitude + 1e-30);
}

bool criterion_bubbles(std::ostringstream& out) {
    const int npts = 1000;
    double worst = 0.0;
    for (int N : {7, 9, 11}) {
        std::mt19937_64 rng(1000 + N);
        const double p = static_cast<double>(N + 2) / (N - 2);
        for (int t = 0; t < npts; ++t) {
            std::vector<double> x(N);
            for (int i = 0; i < N; ++i) x[i] = 8.0 * (unit_draw(rng) - 0.5);
            bubbles::Bubble b(N, 1.0);
            const double lap = bubbles::bubble_laplacian(b, x);
            const double val = bubbles::bubble_value(b, x);
            const double pot = std::pow(val, p);
            if (!residual_small(lap + pot, std::fabs(lap) + pot, 1e-9)) return false;
            worst = std::max(worst, std::fabs(lap + pot) / (std::fabs(lap) + pot));
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            const double upm1 = p * N * (N - 2) * std::pow(1.0 + r2, -2.0);
            for (int idx = 0; idx <= N; ++idx) {
                bubbles::KernelElement k(N, idx);
                const double res = bubbles::linearized_residual(k, x);
                const double scale = std::fabs(bubbles::kernel_laplacian(k, x)) +
                                     upm1 * std::fabs(bubbles::kernel_eval(k, x));
                if (!residual_small(res, scale, 1e-9)) return false;
                worst = std::max(worst, std::fabs(res) / (scale + 1e-30));
            }
        }
    }
    out << "max relative residual " << worst << " over 1000 points x {7,9,11}";
    return true;
}

bool criterion_constants(std::ostringstream& out) {
    const auto ec = constants::compute_constants(7, 1e-10);
    quad::RadialIntegrand grad{[](double r) {
                                   const double d = bubbles::u_profile_d1(7, r);
                                   return d * d;
                               },
                               -12.0};
    const double gsq =
        quad::integrate_radial(grad, quad::RadialInterval::whole(), 7, 1e-10).value;
    const double rel = std::fabs(gsq - ec.kn_pow) / ec.kn_pow;
    out << "kn_pow=" << ec.kn_pow << " vs int|gradU|^2 rel diff " << rel << "; c0=" << ec.c0
        << "; |b_hat/B_N - 1| = " << std::fabs(ec.b_hat / ec.b_n - 1.0);
    if (rel > 1e-8) return false;
    if (!(ec.c0 > 0.0)) return false;
    if (!ec.b_consistent) {
        out << "; CONVENTION DIAGNOSIS: " << ec.convention_note;
        return false;
    }
    return true;
}

tower::TowerConfig sweep_config(double eps) {
    tower::CutoffSpec cut;
    cut.r0 = 1.0;
    return tower::TowerConfig(7, 2, {1.0, 1.0}, eps, cut);
}

bool criterion_interaction(std::ostringstream& out, Profile profile, bool serial) {
    const int ppd = (profile == Profile::quick) ? 4 : 8;
    const auto grid = tower::log_grid(1e-6, 1e-3, ppd);
    const auto series = tower::run_sweep(sweep_config(1e-4), tower::Quantity::interaction, 2,
                                         grid, 1e-9, serial);
    const auto fit = tower::slope_fit(tower::trim_preasymptotic(series));
    const double expected = 2.5;
    const double c_hat = constants::compute_constants(7, 1e-10).c_hat;
    // prefactor at the smallest eps
    const ScaledValue last_v = series.values.back();
    const ScaledValue last_r = series.ratios.back();
    const double pref = (last_v / last_r.pow(expected)).to_double();
    const double pref_rel = std::fabs(pref / c_hat - 1.0);
    out << "slope " << fit.slope << " (want 2.5 +- 2%), prefactor " << pref << " vs C_hat "
        << c_hat << " rel " << pref_rel;
    return std::fabs(fit.slope - expected) <= 0.02 * expected && pref_rel <= 0.05;
}

bool criterion_norm_order(std::ostringstream& out, Profile profile, bool serial) {
    const int ppd = (profile == Profile::quick) ? 4 : 8;
    const auto grid = tower::log_grid(1e-6, 1e-3, ppd);
    const auto series = tower::run_sweep(sweep_config(1e-4),
                                         tower::Quantity::annulus_norm_critical, 2, grid, 1e-9,
                                         serial);
    const auto fit = tower::slope_fit(tower::trim_preasymptotic(series));
    const double expected = 1.25;
    out << "slope " << fit.slope << " (want 1.25 +- 3%)";
    return std::fabs(fit.slope - expected) <= 0.03 * expected;
}

bool criterion_error_order(std::ostringstream& out, Profile profile, bool serial) {
    const int ppd = (profile == Profile::quick) ? 4 : 8;
    const auto grid = tower::log_grid(1e-6, 1e-3, ppd);
    const auto series =
        tower::run_sweep(sweep_config(1e-4), tower::Quantity::error_ii, 2, grid, 1e-8, serial);
    const auto fit = tower::slope_fit(tower::trim_preasymptotic(series));
    out << "slope " << fit.slope << " (want >= 2.15, upper-bound semantics)";
    return fit.slope >= 2.15;
}

bool criterion_flat_energy(std::ostringstream& out) {
    // r0 = 4 keeps the O(mu^{N-2}) cutoff defect (~(r0/2)^{-(N-2)}) far below
    // the eps^2 term the model tracks at eps = 1e-5.
    tower::CutoffSpec cut;
    cut.r0 = 4.0;
    tower::TowerConfig cfg(7, 2, {1.0, 1.0}, 1e-5, cut);
    const auto ec = constants::compute_constants(7, 1e-10);
    const double excess = tower::flat_energy_excess(cfg, 1e-10);
    const auto th = cfg.schedule.theta_f;
    const double model = std::pow(cfg.eps, th[0]) * ec.b_hat * cfg.d[0] * cfg.d[0] +
                         std::pow(cfg.eps, th[1]) *
                             (-ec.c_hat * std::pow(cfg.d[1] / cfg.d[0], 2.5) +
                              ec.b_hat * cfg.d[1] * cfg.d[1]);
    const double rel = std::fabs(excess - model) / std::fabs(model);
    out << "excess " << excess << " vs model " << model << " rel diff " << rel
        << " (want <= 10%)";
    return rel <= 0.10;
}

bool criterion_maximize(std::ostringstream& out, Profile profile) {
    const int kmax = (profile == Profile::quick) ? 3 : 5;
    double worst_agree = 0.0;
    for (int N : {7, 9, 11}) {
        const auto ec = constants::compute_constants(N, 1e-10);
        reduced::ReducedModel m(N, kmax, ec, 1.0);
        const auto rep = reduced::maximize_sequential(m);
        for (double a : rep.golden_rel_agreement) worst_agree = std::max(worst_agree, a);
        if (worst_agree > 1e-8) {
            out << "N=" << N << " closed-vs-golden disagreement " << worst_agree;
            return false;
        }
        for (double s2 : rep.second_derivative)
            if (!(s2 < 0.0)) {
                out << "N=" << N << " second derivative not negative";
                return false;
            }
        // scaled Hessian at d*
        std::vector<double> dstar = rep.d_star;
        const auto hess = reduced::hessian_check(m, dstar, 1e-3, 1e-4);
        if (!hess.negdef) {
            out << "N=" << N << " scaled Hessian not negative definite at d*";
            return false;
        }
        // sequential-optimality probes, Eqs-style: per level, random d != d*
        std::mt19937_64 rng(40 + N);
        const double beta = 0.5 * (N - 2);
        for (int t = 0; t < 1000; ++t) {
            const int l = 1 + static_cast<int>(unit_draw(rng) * kmax) % kmax;
            const double eta = std::exp(2.0 * (unit_draw(rng) - 0.5)); // in [1/e, e]
            if (std::fabs(eta - 1.0) < 1e-6) continue;
            double probe, best;
            if (l == 1) {
                const double d1 = rep.d_star[0];
                probe = reduced::g1(m, eta * d1);
                best = reduced::g1(m, d1);
            } else {
                // scaled form: m(eta) = -lambda eta^beta + eta^2, lambda = 2/beta at d*
                const double lambda = 2.0 / beta;
                probe = -lambda * std::pow(eta, beta) + eta * eta;
                best = -lambda + 1.0;
            }
            if (!(probe < best)) {
                out << "N=" << N << " sequential optimality violated at level " << l;
                return false;
            }
        }
    }
    out << "closed-vs-golden max rel disagreement " << worst_agree
        << " (N in {7,9,11}, k=" << kmax << "); Hessian negdef; 1000 probes/level ok";
    return true;
}

bool criterion_exponents(std::ostringstream& out) {
    for (int N = 7; N <= 20; ++N) {
        const auto s = constants::exponent_schedule(N, 10);
        for (int l = 1; l <= 10; ++l) {
            const Rational theta = s.theta[l - 1];
            const Rational want = Rational(1) + Rational(2) * s.gamma[l - 1];
            if (!(theta == want)) {
                out << "theta != 1 + 2 gamma at N=" << N << " l=" << l;
                return false;
            }
            if (l >= 2) {
                const Rational chain =
                    (s.gamma[l - 1] - s.gamma[l - 2]) * Rational(N - 2, 2);
                if (!(theta == chain)) {
                    out << "theta != (gamma_l - gamma_{l-1})(N-2)/2 at N=" << N << " l=" << l;
                    return false;
                }
            }
        }
    }
    const auto s7 = constants::exponent_schedule(7, 3);
    const bool table = s7.theta[0] == Rational(2) && s7.theta[1] == Rational(10) &&
                       s7.theta[2] == Rational(50);
    out << "exact identities hold for N in 7..20, l <= 10; N=7 theta table = (2,10,50)";
    return table;
}

bool criterion_geometry(std::ostringstream& out, bool serial) {
    const auto cat = catalog::builtin_catalog();
    struct Case {
        const char* name;
        bool expect_flat;
    };
    for (const Case c : {Case{"s7", true}, Case{"s1xs6", true}, Case{"s3xs4", false},
                         Case{"s2xs5", false}, Case{"ellipsoid4", false}}) {
        const auto m = catalog::build_manifold(cat.at(c.name));
        const auto pts = geom::sample_domain(m.chart, m.samples, m.seed, 0.1);
        geom::LcfReport rep;
        rep.weyl_per_sample = geom::weyl_norms_at(m.chart, pts, {}, serial);
        for (double w : rep.weyl_per_sample) rep.max_weyl = std::max(rep.max_weyl, w);
        rep.is_flat_candidate = rep.max_weyl <= 1e-6;
        rep.ambiguous = !rep.is_flat_candidate && rep.max_weyl < 1e-3;
        out << c.name << " max|W|^2 " << rep.max_weyl << "; ";
        if (rep.ambiguous) {
            out << "ambiguous band hit at " << c.name;
            return false;
        }
        if (rep.is_flat_candidate != c.expect_flat) return false;
    }
    return true;
}

bool criterion_symmetry(std::ostringstream& out) {
    const auto cat = catalog::builtin_catalog();
    // sphere antipodal-in-tangent map
    {
        const auto m = catalog::build_manifold(cat.at("s7"));
        geom::Chart boxed = m.chart;
        boxed.domain = m.symmetry_box;
        const auto pts = geom::sample_domain(boxed, 10, 77, 0.15);
        const auto rep =
            geom::symmetry_check(m.chart, m.point_symmetry, m.fixed_point, pts, 1e-5, 1e-8);
        out << "sphere: defect " << rep.max_metric_defect << ", |dH+Id| " << rep.dh_plus_id_norm
            << "; ";
        if (!rep.pass) return false;
    }
    // product isometry on S2 x S5
    {
        const auto m = catalog::build_manifold(cat.at("s2xs5"));
        geom::Chart boxed = m.chart;
        boxed.domain = m.symmetry_box;
        const auto pts = geom::sample_domain(boxed, 10, 78, 0.15);
        const auto rep =
            geom::symmetry_check(m.chart, m.point_symmetry, m.fixed_point, pts, 1e-5, 1e-8);
        out << "product: defect " << rep.max_metric_defect << ", |dH+Id| "
            << rep.dh_plus_id_norm << "; ";
        if (!rep.pass) return false;
    }
    // deliberate non-isometry: chart shear on S2
    {
        const auto m = catalog::build_manifold(cat.at("s7"));
        geom::Chart boxed = m.chart;
        boxed.domain = m.symmetry_box;
        auto shear = [](const Vec& th) {
            Vec out_ = th;
            out_[0] += 0.3 * (th[1] - 0.5 * M_PI);
            return out_;
        };
        const auto pts = geom::sample_domain(boxed, 10, 79, 0.3);
        const auto rep = geom::symmetry_check(m.chart, shear, m.fixed_point, pts, 1e-5, 1e-8);
        out << "shear: defect " << rep.max_metric_defect << " (must fail)";
        if (rep.pass) return false;
        if (!(rep.max_metric_defect > 1e-8)) return false;
    }
    return true;
}

bubbles::CurvatureData random_curvature_data(int N, unsigned seed) {
    std::mt19937_64 rng(seed);
    Tensor4 t(N);
    for (double& v : t.a) v = 2.0 * unit_draw(rng) - 1.0;
    // impose antisymmetry in both pairs, then pair-exchange symmetry
    Tensor4 r(N);
    for (int i = 0; i < N; ++i)
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int j = 0; j < N; ++j)
                    r(i, a, b, j) = 0.25 * (t(i, a, b, j) - t(a, i, b, j) - t(i, a, j, b) +
                                            t(a, i, j, b));
    Tensor4 rr(N);
    for (int i = 0; i < N; ++i)
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int j = 0; j < N; ++j)
                    rr(i, a, b, j) = 0.5 * (r(i, a, b, j) + r(b, j, i, a));
    SquareMat dg(N);
    for (double& v : dg.a) v = 2.0 * unit_draw(rng) - 1.0;
    return bubbles::CurvatureData(N, std::move(rr), std::move(dg), 2.0 * unit_draw(rng) - 1.0);
}

bool criterion_solvability(std::ostringstream& out, bool serial) {
    (void)serial;
    // random symmetric curvature data
    for (unsigned seed : {11u, 12u, 13u}) {
        const auto c = random_curvature_data(7, seed);
        const double nu = bubbles::solvability_nu(c, 1e-10);
        const auto chk = bubbles::verify_fredholm(c, nu, 1e-10);
        if (!chk.ok) {
            out << "fredholm residual " << chk.residual << " > bound " << chk.bound
                << " (random data seed " << seed << ")";
            return false;
        }
        for (double proj : bubbles::rhs_kernel_orthogonality(c)) {
            if (std::fabs(proj) > 1e-9) {
                out << "kernel projection " << proj << " > 1e-9";
                return false;
            }
        }
    }
    // S2 x S5 curvature data through the geometry pipeline
    const auto cat = catalog::builtin_catalog();
    const auto m = catalog::build_manifold(cat.at("s2xs5"));
    const auto pts = geom::sample_domain(m.chart, 1, 99, 0.3);
    const auto cav = geom::curvature_at(m.chart, pts[0]);
    const auto cdata = cav.to_curvature_data();
    const double nu = bubbles::solvability_nu(cdata, 1e-10);
    const auto chk = bubbles::verify_fredholm(cdata, nu, 1e-10);
    out << "S2xS5: nu = " << nu << ", fredholm residual " << chk.residual << " (bound "
        << chk.bound << ")";
    if (!chk.ok) return false;
    for (double proj : bubbles::rhs_kernel_orthogonality(cdata))
        if (std::fabs(proj) > 1e-9) return false;
    return true;
}

} // namespace

std::vector<CriterionResult> run_all(Profile profile, bool serial) {
    Runner r{profile, serial, {}};
    r.run(1, "bubble identity suite", [&](std::ostringstream& o) { return criterion_bubbles(o); });
    r.run(2, "constant cross-identities",
          [&](std::ostringstream& o) { return criterion_constants(o); });
    r.run(3, "interaction order",
          [&](std::ostringstream& o) { return criterion_interaction(o, profile, serial); });
    r.run(4, "annulus norm order",
          [&](std::ostringstream& o) { return criterion_norm_order(o, profile, serial); });
    r.run(5, "nonlinear error order",
          [&](std::ostringstream& o) { return criterion_error_order(o, profile, serial); });
    r.run(6, "flat-energy expansion",
          [&](std::ostringstream& o) { return criterion_flat_energy(o); });
    r.run(7, "sequential maximization",
          [&](std::ostringstream& o) { return criterion_maximize(o, profile); });
    r.run(8, "exponent algebra", [&](std::ostringstream& o) { return criterion_exponents(o); });
    r.run(9, "geometry oracle",
          [&](std::ostringstream& o) { return criterion_geometry(o, serial); });
    r.run(10, "symmetry oracle", [&](std::ostringstream& o) { return criterion_symmetry(o); });
    r.run(11, "solvability pipeline",
          [&](std::ostringstream& o) { return criterion_solvability(o, serial); });
    return r.results;
}

nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        j["runtime_sec"] = r.runtime_sec;
        arr.push_back(j);
    }
    return arr;
}

std::string format_lines(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail
            << " (" << r.runtime_sec << " s)\n";
    }
    return out.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace yamabe::accept
