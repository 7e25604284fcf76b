#include "yamabe/cli.hpp"

#include <cmath>
#include <iostream>

#include "CLI11.hpp"

#include "yamabe/acceptance.hpp"
#include "yamabe/bubbles.hpp"
#include "yamabe/energy_constants.hpp"
#include "yamabe/manifold_catalog.hpp"
#include "yamabe/reduced_energy.hpp"
#include "yamabe/reports.hpp"
#include "yamabe/tower.hpp"

namespace yamabe::cli {

namespace {

struct CommonOpts {
    std::string out_json;
    std::string out_csv;
    bool serial = false;
    unsigned seed = 1;
};

void emit(const nlohmann::ordered_json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        reports::write_text_file(path, text);
}

nlohmann::ordered_json sweep_config_json(int dim, int k, const std::vector<double>& d,
                                         double eps_min, double eps_max, int ppd, double r0,
                                         double rel_tol, int ell) {
    nlohmann::ordered_json c;
    c["dim"] = dim;
    c["k"] = k;
    c["d"] = d;
    c["eps_min"] = eps_min;
    c["eps_max"] = eps_max;
    c["points_per_decade"] = ppd;
    c["r0"] = r0;
    c["rel_tol"] = rel_tol;
    c["ell"] = ell;
    return c;
}

int run_sweep_command(tower::Quantity what, double expected_order, bool lower_bound_only,
                      int dim, int k, std::vector<double> d, int ell, double eps_min,
                      double eps_max, int ppd, double r0, double rel_tol, double tol_rel,
                      const CommonOpts& common) {
    tower::CutoffSpec cut;
    cut.r0 = r0;
    tower::TowerConfig base(dim, k, d, eps_max, cut);
    const auto grid = tower::log_grid(eps_min, eps_max, ppd);
    const auto series = tower::run_sweep(base, what, ell, grid, rel_tol, common.serial);
    const auto trimmed = tower::trim_preasymptotic(series);
    const auto fit = tower::slope_fit(trimmed);
    const auto fit_eps = tower::slope_fit_vs_eps(trimmed);
    const bool pass = lower_bound_only
                          ? fit.slope >= expected_order - 0.1
                          : std::fabs(fit.slope - expected_order) <= tol_rel * expected_order;
    if (!common.out_csv.empty()) {
        const double pref = reports::model_log10_prefactor(trimmed, expected_order);
        reports::write_text_file(common.out_csv,
                                 reports::sweep_csv(series, expected_order, pref));
    }
    auto j = reports::report_base(
        sweep_config_json(dim, k, d, eps_min, eps_max, ppd, r0, rel_tol, ell));
    j["summary"] = reports::sweep_summary(series, fit, fit_eps, expected_order,
                                          lower_bound_only ? 0.1 : tol_rel, pass);
    emit(j, common.out_json);
    return pass ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"bubble-tower scaffolding for the linearly perturbed Yamabe equation"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--out", common.out_json, "write the JSON report here (default: stdout)");
    app.add_option("--out-csv", common.out_csv, "write sweep CSV here");
    app.add_flag("--serial", common.serial, "serial reference path (no OpenMP)");
    app.add_option("--seed", common.seed, "seed for sampled points");

    int dim = 7, k = 2, ell = 2, ppd = 8, samples = 0;
    double eps = 1e-5, eps_min = 1e-6, eps_max = 1e-3, r0 = 1.0, rel_tol = 1e-9;
    double weyl_sq = -1.0, fd_step = 1e-4;
    std::vector<double> d;
    std::string manifold, catalog_path, map_name = "point", profile = "quick";

    auto add_dim = [&](CLI::App* sub) { sub->add_option("--dim", dim, "dimension N"); };

    auto* c_constants = app.add_subcommand("constants", "energy constants + convention report");
    add_dim(c_constants);
    c_constants->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");

    auto* c_schedule = app.add_subcommand("schedule", "gamma/theta exponent table");
    add_dim(c_schedule);
    c_schedule->add_option("--k", k, "tower height");

    auto* c_sweep_i = app.add_subcommand("sweep-interaction", "consecutive-bubble interaction sweep");
    auto* c_sweep_e = app.add_subcommand("sweep-error", "nonlinear cross-term norm sweep");
    for (CLI::App* sub : {c_sweep_i, c_sweep_e}) {
        add_dim(sub);
        sub->add_option("--k", k, "tower height");
        sub->add_option("--ell", ell, "level (2..k)");
        sub->add_option("--d", d, "tower heights d_1..d_k");
        sub->add_option("--eps-min", eps_min, "smallest eps");
        sub->add_option("--eps-max", eps_max, "largest eps");
        sub->add_option("--points-per-decade", ppd, "grid density");
        sub->add_option("--r0", r0, "cutoff radius");
        sub->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    }

    auto* c_energy = app.add_subcommand("energy-check", "flat-model energy vs expansion");
    add_dim(c_energy);
    c_energy->add_option("--k", k, "tower height");
    c_energy->add_option("--d", d, "tower heights");
    c_energy->add_option("--eps", eps, "perturbation parameter");
    c_energy->add_option("--r0", r0, "cutoff radius");
    c_energy->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");

    auto* c_max = app.add_subcommand("maximize", "sequential reduced-energy maximization");
    add_dim(c_max);
    c_max->add_option("--k", k, "tower height");
    c_max->add_option("--weyl-sq", weyl_sq, "|Weyl(xi)|^2 (explicit value)");
    c_max->add_option("--manifold", manifold, "catalog manifold supplying |Weyl|^2");
    c_max->add_option("--catalog", catalog_path, "manifold catalog JSON file");
    c_max->add_option("--eps", eps, "eps for the scaled Hessian check");
    c_max->add_option("--fd-step", fd_step, "Hessian finite-difference step");

    auto* c_weyl = app.add_subcommand("weyl", "sampled |Weyl|^2 and flatness oracle");
    c_weyl->add_option("--manifold", manifold, "catalog manifold name")->required();
    c_weyl->add_option("--catalog", catalog_path, "manifold catalog JSON file");
    c_weyl->add_option("--samples", samples, "sample count override");

    auto* c_sym = app.add_subcommand("symmetry", "point-symmetry oracle");
    c_sym->add_option("--manifold", manifold, "catalog manifold name")->required();
    c_sym->add_option("--catalog", catalog_path, "manifold catalog JSON file");
    c_sym->add_option("--map", map_name, "point (canonical) or shear (deliberate failure)");
    c_sym->add_option("--samples", samples, "sample count override");

    auto* c_accept = app.add_subcommand("accept", "run the acceptance suite");
    c_accept->add_option("--profile", profile, "quick or full");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (c_constants->parsed()) {
            const auto ec = constants::compute_constants(dim, rel_tol);
            nlohmann::ordered_json cfg{{"dim", dim}, {"rel_tol", rel_tol}};
            auto j = reports::report_base(cfg);
            j["constants"] = ec.to_json();
            j["prefactor_report"] = constants::interaction_prefactor(dim, rel_tol).to_json();
            emit(j, common.out_json);
            return ec.b_consistent ? 0 : 1;
        }
        if (c_schedule->parsed()) {
            const auto s = constants::exponent_schedule(dim, k);
            auto j = reports::report_base(nlohmann::ordered_json{{"dim", dim}, {"k", k}});
            j["schedule"] = s.to_json();
            emit(j, common.out_json);
            return 0;
        }
        if (c_sweep_i->parsed() || c_sweep_e->parsed()) {
            if (d.empty()) d.assign(k, 1.0);
            if (static_cast<int>(d.size()) != k)
                throw ConfigInvalidError("sweep: need exactly k heights in --d");
            const double beta = 0.5 * (dim - 2);
            if (c_sweep_i->parsed())
                return run_sweep_command(tower::Quantity::interaction, beta, false, dim, k, d,
                                         ell, eps_min, eps_max, ppd, r0, rel_tol, 0.02, common);
            return run_sweep_command(tower::Quantity::error_ii, 0.25 * (dim + 2), true, dim, k,
                                     d, ell, eps_min, eps_max, ppd, r0, rel_tol, 0.0, common);
        }
        if (c_energy->parsed()) {
            if (d.empty()) d.assign(k, 1.0);
            if (static_cast<int>(d.size()) != k)
                throw ConfigInvalidError("energy-check: need exactly k heights in --d");
            tower::CutoffSpec cut;
            cut.r0 = r0;
            tower::TowerConfig cfg(dim, k, d, eps, cut);
            const auto ec = constants::compute_constants(dim, 1e-10);
            const double excess = tower::flat_energy_excess(cfg, rel_tol);
            const double total = cfg.k * ec.d_n_per_bubble + excess;
            double model = std::pow(eps, cfg.schedule.theta_f[0]) * ec.b_hat * d[0] * d[0];
            for (int l = 2; l <= k; ++l)
                model += std::pow(eps, cfg.schedule.theta_f[l - 1]) *
                         (-ec.c_hat * std::pow(d[l - 1] / d[l - 2], 0.5 * (dim - 2)) +
                          ec.b_hat * d[l - 1] * d[l - 1]);
            nlohmann::ordered_json cfgj{{"dim", dim}, {"k", k},   {"d", d},
                                        {"eps", eps}, {"r0", r0}, {"rel_tol", rel_tol}};
            auto j = reports::report_base(cfgj);
            j["flat_energy"] = total;
            j["excess"] = excess;
            j["model_excess"] = model;
            j["rel_diff"] = std::fabs(excess - model) / std::fabs(model);
            j["leading_term"] = cfg.k * ec.d_n_per_bubble;
            emit(j, common.out_json);
            return 0;
        }
        if (c_max->parsed()) {
            if (weyl_sq < 0.0 && manifold.empty())
                throw ConfigInvalidError("maximize: need --weyl-sq or --manifold");
            if (weyl_sq < 0.0) {
                const auto m = catalog_path.empty()
                                   ? catalog::build_manifold(
                                         catalog::builtin_catalog().at(manifold))
                                   : catalog::load_from_catalog(catalog_path, manifold);
                const auto pts = geom::sample_domain(m.chart, 1, common.seed, 0.3);
                weyl_sq = geom::curvature_at(m.chart, pts[0]).weyl_norm_sq;
            }
            const auto ec = constants::compute_constants(dim, 1e-10);
            reduced::ReducedModel model(dim, k, ec, weyl_sq);
            const auto rep = reduced::maximize_sequential(model);
            const auto hess = reduced::hessian_check(model, rep.d_star, eps, fd_step);
            nlohmann::ordered_json cfgj{{"dim", dim}, {"k", k}, {"weyl_sq", weyl_sq},
                                        {"eps", eps}, {"fd_step", fd_step}};
            auto j = reports::report_base(cfgj);
            j["maximize"] = rep.to_json();
            j["hessian"] = hess.to_json();
            emit(j, common.out_json);
            return hess.negdef ? 0 : 1;
        }
        if (c_weyl->parsed()) {
            const auto m = catalog_path.empty()
                               ? catalog::build_manifold(catalog::builtin_catalog().at(manifold))
                               : catalog::load_from_catalog(catalog_path, manifold);
            const int count = samples > 0 ? samples : m.samples;
            const auto pts = geom::sample_domain(m.chart, count, common.seed ? common.seed
                                                                             : m.seed, 0.1);
            const auto rep = geom::lcf_check(m.chart, pts);
            nlohmann::ordered_json cfgj{{"manifold", manifold}, {"samples", count},
                                        {"seed", common.seed}};
            auto j = reports::report_base(cfgj);
            j["max_weyl_sq"] = rep.max_weyl;
            j["is_flat_candidate"] = rep.is_flat_candidate;
            j["ambiguous_band"] = rep.ambiguous;
            j["weyl_sq_per_sample"] = rep.weyl_per_sample;
            emit(j, common.out_json);
            return rep.ambiguous ? 1 : 0;
        }
        if (c_sym->parsed()) {
            const auto m = catalog_path.empty()
                               ? catalog::build_manifold(catalog::builtin_catalog().at(manifold))
                               : catalog::load_from_catalog(catalog_path, manifold);
            if (!m.point_symmetry)
                throw ConfigInvalidError("symmetry: manifold has no canonical point symmetry");
            geom::Chart boxed = m.chart;
            boxed.domain = m.symmetry_box;
            const int count = samples > 0 ? samples : 10;
            const auto pts = geom::sample_domain(boxed, count, common.seed, 0.15);
            std::function<Vec(const Vec&)> map = m.point_symmetry;
            if (map_name == "shear") {
                const Vec p = m.fixed_point;
                map = [p](const Vec& u) {
                    Vec out = u;
                    if (u.size() > 1) out[0] += 0.3 * (u[1] - p[1]);
                    return out;
                };
            } else if (map_name != "point") {
                throw ConfigInvalidError("symmetry: unknown map " + map_name);
            }
            const auto rep =
                geom::symmetry_check(m.chart, map, m.fixed_point, pts, 1e-5, 1e-8);
            nlohmann::ordered_json cfgj{{"manifold", manifold}, {"map", map_name},
                                        {"samples", count},     {"seed", common.seed}};
            auto j = reports::report_base(cfgj);
            j["max_metric_defect"] = rep.max_metric_defect;
            j["dh_plus_id_norm"] = rep.dh_plus_id_norm;
            j["fixed_point_error"] = rep.fixed_point_error;
            j["pass"] = rep.pass;
            emit(j, common.out_json);
            return 0;
        }
        if (c_accept->parsed()) {
            if (profile != "quick" && profile != "full")
                throw ConfigInvalidError("accept: profile must be quick or full");
            const auto results = accept::run_all(
                profile == "quick" ? accept::Profile::quick : accept::Profile::full,
                common.serial);
            std::cout << accept::format_lines(results);
            if (!common.out_json.empty()) {
                auto j = reports::report_base(nlohmann::ordered_json{{"profile", profile}});
                j["criteria"] = accept::to_json(results);
                emit(j, common.out_json);
            }
            return accept::all_passed(results) ? 0 : 1;
        }
    } catch (const ConfigInvalidError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace yamabe::cli
