#include "doctest.h"

#include <cmath>
#include <random>

#include "yamabe/bubbles.hpp"
#include "yamabe/energy_constants.hpp"
#include "yamabe/tower.hpp"

using namespace yamabe;
using tower::CutoffSpec;
using tower::TowerConfig;

namespace {

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

TowerConfig make_cfg(int N, int k, std::vector<double> d, double eps, double r0 = 1.0) {
    CutoffSpec cut;
    cut.r0 = r0;
    return TowerConfig(N, k, std::move(d), eps, cut);
}

} // namespace

TEST_CASE("cutoff profiles: support, range, derivative") {
    for (auto profile : {CutoffSpec::Profile::smoothstep_quintic, CutoffSpec::Profile::exp_bump}) {
        CutoffSpec cut;
        cut.r0 = 1.0;
        cut.profile = profile;
        CHECK(cut.chi(0.0) == 1.0);
        CHECK(cut.chi(0.5) == 1.0);
        CHECK(cut.chi(1.0) == 0.0);
        CHECK(cut.chi(2.0) == 0.0);
        for (double r = 0.05; r < 1.3; r += 0.04) {
            const double c = cut.chi(r);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            const double h = 1e-6;
            const double fd = (cut.chi(r + h) - cut.chi(r - h)) / (2.0 * h);
            CHECK(cut.dchi(r) == doctest::Approx(fd).epsilon(1e-4));
        }
        // continuity at the junctions (C^2 for the quintic, C^inf for the bump)
        CHECK(cut.chi(0.5 + 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cut.chi(1.0 - 1e-7) == doctest::Approx(0.0).epsilon(1e-5));
    }
}

TEST_CASE("mu schedule examples") {
    {
        const auto cfg = make_cfg(7, 2, {1.0, 1.0}, 1e-4);
        const auto mu = tower::mu_schedule(cfg);
        CHECK(mu[0] == doctest::Approx(1e-2).epsilon(1e-12));
        CHECK(mu[1] == doctest::Approx(1e-18).epsilon(1e-12));
    }
    {
        const auto cfg = make_cfg(7, 3, {0.7, 1.3, 2.0}, 1.0 - 1e-16);
        const auto mu = tower::mu_schedule(cfg);
        CHECK(mu[0] == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(mu[1] == doctest::Approx(1.3).epsilon(1e-10));
        CHECK(mu[2] == doctest::Approx(2.0).epsilon(1e-10));
    }
    {
        const auto a = tower::mu_schedule(make_cfg(7, 2, {1.0, 1.0}, 1e-3));
        const auto b = tower::mu_schedule(make_cfg(7, 2, {1.0, 2.0}, 1e-3));
        CHECK(b[1] == doctest::Approx(2.0 * a[1]).epsilon(1e-13));
        CHECK(b[0] == a[0]);
    }
    // eps = 1 would break monotonicity (mu_1 = mu_2): rejected
    CHECK_THROWS_AS(make_cfg(7, 2, {1.0, 1.0}, 1.0), NonMonotoneScalesError);
    // warning flag when mu_1 is not small against r0
    CHECK_FALSE(make_cfg(7, 1, {1.0}, 0.9).mu1_small_enough);
    CHECK(make_cfg(7, 1, {1.0}, 1e-4).mu1_small_enough);
}

TEST_CASE("tower evaluation: center value, support, k = 1 reduction") {
    const auto cfg = make_cfg(7, 2, {1.0, 1.0}, 1e-3);
    const auto mu = tower::mu_schedule(cfg);
    const double alpha = bubbles::alpha_n(7);
    double expect = 0.0;
    for (double m : mu) expect += alpha * std::pow(m, -2.5);
    CHECK(tower::tower_eval(cfg, std::vector<double>(7, 0.0)) ==
          doctest::Approx(expect).epsilon(1e-13));

    CHECK(tower::tower_eval_radial(cfg, 2.0 * cfg.r0()) == 0.0);
    CHECK(tower::tower_eval_radial(cfg, cfg.r0()) == 0.0);

    // k = 1 equals the cut-off single bubble pointwise
    const auto one = make_cfg(7, 1, {1.0}, 1e-3);
    const double m1 = tower::mu_schedule(one)[0];
    bubbles::Bubble b(7, m1);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 40; ++t) {
        const double r = 1.2 * unit_draw(rng);
        std::vector<double> x(7, 0.0);
        x[0] = r;
        const double expect_pt = one.cutoff.chi(r) * bubbles::bubble_value(b, x);
        CHECK(tower::tower_eval_radial(one, r) == doctest::Approx(expect_pt).epsilon(1e-12));
    }
    // exact bubble sum below r0/2: identical arithmetic path, no cutoff call
    CHECK(tower::tower_eval_radial(one, 0.25) == bubbles::bubble_value(b, {0.25, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("annuli decomposition: shapes, containment, partition") {
    {
        // k = 1: single ball [0, r0)
        const auto cfg = make_cfg(7, 1, {1.0}, 1e-4);
        const auto dec = tower::annuli(cfg);
        REQUIRE(dec.shells.size() == 1);
        CHECK(dec.shells[0].inner == 0.0);
        CHECK(dec.shells[0].outer == doctest::Approx(cfg.r0()).epsilon(1e-12));
    }
    {
        const auto cfg = make_cfg(7, 3, {1.0, 0.8, 1.1}, 1e-3);
        const auto mu = tower::mu_schedule(cfg);
        const auto dec = tower::annuli(cfg);
        REQUIRE(dec.shells.size() == 3);
        // strictly decreasing boundary radii, each mu_h interior to its shell
        for (int h = 0; h < 3; ++h) {
            CHECK(dec.shells[h].inner < mu[h]);
            CHECK(mu[h] < dec.shells[h].outer);
            if (h > 0) CHECK(dec.shells[h].outer == doctest::Approx(dec.shells[h - 1].inner));
        }
        CHECK(dec.shells[0].outer == doctest::Approx(cfg.r0()).epsilon(1e-12));
        CHECK(dec.shells[2].inner == 0.0);

        // partition: sum over shells of a positive radial integrand = ball integral
        std::mt19937_64 rng(17);
        for (int t = 0; t < 3; ++t) {
            const double pw = 1.0 + 2.0 * unit_draw(rng);
            quad::RadialIntegrand g{
                [pw](double r) { return std::pow(1.0 + r * r, -pw) + 0.1; }, 0.0};
            const double tol = 1e-10;
            double acc = 0.0;
            for (const auto& shell : dec.shells)
                acc += quad::integrate_radial(g, shell, 7, tol).value;
            const double whole =
                quad::integrate_radial(g, quad::RadialInterval(0.0, cfg.r0()), 7, tol).value;
            CHECK(acc == doctest::Approx(whole).epsilon(2.0 * tol + 1e-11));
        }
    }
}

TEST_CASE("interaction integral: rejection, ratio dependence, deep-tower order chain") {
    const auto cfg = make_cfg(7, 2, {1.0, 1.0}, 1e-4);
    CHECK_THROWS_AS(tower::interaction_integral(cfg, 1), IndexOutOfRangeError);
    CHECK_THROWS_AS(tower::interaction_integral(cfg, 3), IndexOutOfRangeError);

    // ratio-only dependence: same mu_2/mu_1, different absolute scales
    {
        const auto a = make_cfg(7, 2, {1.0, 1.0}, 1e-4);
        // d = (2, 2) rescales both mu by 2: same ratio
        const auto b = make_cfg(7, 2, {2.0, 2.0}, 1e-4);
        const double va = tower::interaction_integral(a, 2, 1e-9).to_double();
        const double vb = tower::interaction_integral(b, 2, 1e-9).to_double();
        CHECK(std::fabs(vb / va - 1.0) < 0.01);
    }

    // order chain at k = 3: interaction(3) << interaction(2) << bubble energy
    {
        const auto deep = make_cfg(7, 3, {1.0, 1.0, 1.0}, 1e-4);
        const auto i2 = tower::interaction_integral(deep, 2, 1e-8);
        const auto i3 = tower::interaction_integral(deep, 3, 1e-8);
        const double kn_over_n = constants::compute_constants(7, 1e-10).d_n_per_bubble;
        CHECK(i3.log10_abs() < i2.log10_abs() - 1.0);
        CHECK(i2.log10_abs() < std::log10(kn_over_n) - 1.0);
        CHECK(i2.sign() > 0.0);
        CHECK(i3.sign() > 0.0);
    }
}

TEST_CASE("interaction sweep: slope in ratio, slope in eps, prefactor") {
    const auto grid = tower::log_grid(1e-6, 1e-3, 4);
    const auto series = tower::run_sweep(make_cfg(7, 2, {1.0, 1.3}, 1e-4),
                                         tower::Quantity::interaction, 2, grid, 1e-9, true);
    const auto trimmed = tower::trim_preasymptotic(series);
    const auto fit = tower::slope_fit(trimmed);
    CHECK(std::fabs(fit.slope - 2.5) <= 0.05);
    const auto fit_eps = tower::slope_fit_vs_eps(trimmed);
    CHECK(std::fabs(fit_eps.slope - 10.0) <= 0.03 * 10.0); // exponent law: theta_2 = 10
    // prefactor convergence to C_hat
    const double c_hat = constants::compute_constants(7, 1e-10).c_hat;
    const double pref =
        (series.values.back() / series.ratios.back().pow(2.5)).to_double();
    CHECK(std::fabs(pref / c_hat - 1.0) <= 0.05);
}

TEST_CASE("N = 8 interaction slope (log-factor case, widened tolerance)") {
    const auto grid = tower::log_grid(1e-6, 1e-3, 4);
    const auto series = tower::run_sweep(make_cfg(8, 2, {1.0, 1.0}, 1e-4),
                                         tower::Quantity::interaction, 2, grid, 1e-9, true);
    const auto fit = tower::slope_fit(tower::trim_preasymptotic(series));
    CHECK(std::fabs(fit.slope - 3.0) <= 0.05 * 3.0); // (N-2)/2 = 3, 5% at N = 8
}

TEST_CASE("annulus norms: own-shell mass is order one, off-shell follows ok1") {
    const auto grid = tower::log_grid(1e-5, 1e-3, 4);
    // |W_2|_{2N/(N-2), A_2}: the bubble's own shell, Theta(1) across the sweep
    std::vector<double> own;
    for (double eps : grid) {
        const auto cfg = make_cfg(7, 2, {1.0, 1.0}, eps);
        own.push_back(tower::annulus_norm(cfg, 2, 2.0 * 7 / 5.0, 2, 1e-8).to_double());
    }
    for (double v : own) {
        CHECK(v > 0.5 * own.front());
        CHECK(v < 2.0 * own.front());
    }
}

TEST_CASE("error component II: rejection and monotonicity in d_ell") {
    CHECK_THROWS_AS(tower::error_component_ii(make_cfg(7, 1, {1.0}, 1e-3), 1),
                    IndexOutOfRangeError);
    double prev = 0.0;
    for (double d2 : {0.7, 1.0, 1.4}) {
        const auto cfg = make_cfg(7, 2, {1.0, d2}, 1e-3);
        const double v = tower::error_component_ii(cfg, 2, 1e-8).to_double();
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("flat energy: single-bubble limit, eps-monotonicity, k = 2 expansion") {
    // k = 1, eps -> 0, mu_1 << r0 reproduces the per-bubble constant K^{-N}/N
    {
        const auto cfg = make_cfg(7, 1, {1.0}, 1e-12);
        const double e = tower::flat_energy(cfg, 1e-10);
        const double want = constants::compute_constants(7, 1e-10).d_n_per_bubble;
        CHECK(std::fabs(e / want - 1.0) <= 1e-6);
    }
    // monotone in eps
    {
        const double e1 = tower::flat_energy(make_cfg(7, 1, {1.0}, 1e-6), 1e-10);
        const double e2 = tower::flat_energy(make_cfg(7, 1, {1.0}, 4e-6), 1e-10);
        const double e3 = tower::flat_energy(make_cfg(7, 1, {1.0}, 2e-5), 1e-10);
        CHECK(e1 < e2);
        CHECK(e2 < e3);
    }
    // k = 2 excess against the two-level expansion with the Weyl term dropped
    {
        const auto cfg = make_cfg(7, 2, {1.1, 0.9}, 1e-5, 4.0);
        const auto ec = constants::compute_constants(7, 1e-10);
        const double excess = tower::flat_energy_excess(cfg, 1e-10);
        const double model =
            std::pow(cfg.eps, 2.0) * ec.b_hat * cfg.d[0] * cfg.d[0] +
            std::pow(cfg.eps, 10.0) * (-ec.c_hat * std::pow(cfg.d[1] / cfg.d[0], 2.5) +
                                       ec.b_hat * cfg.d[1] * cfg.d[1]);
        CHECK(std::fabs(excess - model) / std::fabs(model) <= 0.10);
    }
}

TEST_CASE("slope fit: exact powers, noisy powers, degenerate input") {
    using tower::SweepSeries;
    SweepSeries s;
    std::mt19937_64 rng(8);
    for (int i = 0; i < 8; ++i) {
        const double eps = std::pow(10.0, -1.0 - 0.4 * i);
        const double ratio = eps * eps;
        s.eps_grid.push_back(eps);
        s.ratios.push_back(ScaledValue::from_double(ratio));
        s.values.push_back(ScaledValue::from_double(ratio * ratio)); // value = ratio^2
    }
    const auto fit = tower::slope_fit(s);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.stderr_slope <= 1e-10);

    SweepSeries noisy = s;
    for (int i = 0; i < 8; ++i) {
        const double ratio = noisy.ratios[i].to_double();
        const double v = 3.7 * std::pow(ratio, 2.5) * (1.0 + 0.01 * (2.0 * unit_draw(rng) - 1.0));
        noisy.values[i] = ScaledValue::from_double(v);
    }
    const auto nfit = tower::slope_fit(noisy);
    CHECK(std::fabs(nfit.slope - 2.5) <= 0.05);

    SweepSeries flat = s;
    for (auto& v : flat.values) v = ScaledValue::from_double(4.2);
    CHECK(std::fabs(tower::slope_fit(flat).slope) <= 1e-12);

    SweepSeries bad = s;
    bad.values[3] = ScaledValue::from_double(-1.0);
    CHECK_THROWS_AS(tower::slope_fit(bad), NonPositiveValueError);

    SweepSeries short_series;
    short_series.eps_grid = {1e-1, 1e-2};
    short_series.values = {ScaledValue::from_double(1.0), ScaledValue::from_double(2.0)};
    short_series.ratios = short_series.values;
    CHECK_THROWS_AS(tower::slope_fit(short_series), std::invalid_argument);
}

TEST_CASE("sweeps are identical on the serial reference and parallel paths") {
    const auto grid = tower::log_grid(1e-5, 1e-3, 3);
    const auto base = make_cfg(7, 2, {1.0, 1.0}, 1e-4);
    const auto serial = tower::run_sweep(base, tower::Quantity::interaction, 2, grid, 1e-8, true);
    const auto parallel =
        tower::run_sweep(base, tower::Quantity::interaction, 2, grid, 1e-8, false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(serial.values[i].mantissa == parallel.values[i].mantissa);
        CHECK(serial.values[i].log10_scale == parallel.values[i].log10_scale);
    }
}

TEST_CASE("tower positivity: the positive part in f never activates") {
    const auto cfg = make_cfg(7, 3, {1.0, 1.0, 1.0}, 1e-3);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; ++t) {
        const double r = 1.5 * unit_draw(rng);
        CHECK(tower::tower_eval_radial(cfg, r) >= 0.0);
    }
}
