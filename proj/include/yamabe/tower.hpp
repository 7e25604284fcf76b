#pragma once

#include <functional>
#include <vector>

#include "yamabe/energy_constants.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/scaled_value.hpp"

namespace yamabe::tower {

struct CutoffSpec {
    enum class Profile { smoothstep_quintic, exp_bump };

    double r0 = 1.0;
    Profile profile = Profile::smoothstep_quintic;

    // chi == 1 on [0, r0/2] (early return, no transition arithmetic there),
    // chi == 0 on [r0, inf), C^2 transition in between.
    double chi(double r) const;
    double dchi(double r) const;
};

struct TowerConfig {
    int dim = 7;
    int k = 1;
    std::vector<double> d;         // k positive heights
    double eps = 1e-3;
    CutoffSpec cutoff;             // carries r0
    bool include_v_envelope = false;
    double env_c = 1.0;

    // derived data
    constants::ExponentSchedule schedule;
    bool mu1_small_enough = true;  // mu_1 < r0/2; a warning flag, not an error

    TowerConfig(int N, int height, std::vector<double> heights, double eps_,
                CutoffSpec cut = {}, bool with_envelope = false, double env_scale = 1.0);

    double r0() const { return cutoff.r0; }
};

// mu_j = d_j eps^{gamma_j}; both direct and log10 views (deep levels underflow
// doubles, all internal shell work runs off the logs).
std::vector<double> mu_schedule(const TowerConfig& cfg);
std::vector<double> mu_log10(const TowerConfig& cfg);

// W(x) = sum_j chi(|x|) mu_j^{-(N-2)/2} U(|x|/mu_j) (+ optional mu_j^2 envelope
// bookkeeping term). Radial; the point overload takes |x|.
double tower_eval(const TowerConfig& cfg, const std::vector<double>& x);
double tower_eval_radial(const TowerConfig& cfg, double r);

struct AnnuliDecomposition {
    // shells[h-1] = A_h = [sqrt(mu_h mu_{h+1}), sqrt(mu_{h-1} mu_h)), h = 1..k,
    // with mu_0 = r0^2/mu_1 and mu_{k+1} = 0; A_k is the innermost ball.
    std::vector<quad::RadialInterval> shells;
    std::vector<double> outer_edge_log10; // log10 of each shell's outer radius
};

AnnuliDecomposition annuli(const TowerConfig& cfg);

// integral over A_{ell-1} of W_{ell-1}^p W_ell dx (bubble interaction);
// ell = 1 is rejected: the consecutive ratio is zero by convention there.
ScaledValue interaction_integral(const TowerConfig& cfg, int ell, double rel_tol = 1e-8);

// |W_j|_{q, A_h}.
ScaledValue annulus_norm(const TowerConfig& cfg, int j, double q, int h,
                         double rel_tol = 1e-8);

// L^{2N/(N+2)} norm over B(0, r0) of f(sum_{i<=ell} W_i) - f(sum_{i<ell} W_i) - f(W_ell).
ScaledValue error_component_ii(const TowerConfig& cfg, int ell, double rel_tol = 1e-8);

// Flat-model functional (R_g = 0, no Weyl term):
//   (1/2)int|grad W|^2 + (eps/2)int W^2 - 1/(p+1) int W_+^{p+1}.
// flat_energy_excess is the same quantity minus k K_N^{-N}/N, assembled from
// small terms only (no large cancellations).
double flat_energy(const TowerConfig& cfg, double rel_tol = 1e-10);
double flat_energy_excess(const TowerConfig& cfg, double rel_tol = 1e-10);

struct SweepSeries {
    std::vector<double> eps_grid;      // strictly decreasing
    std::vector<ScaledValue> values;   // measured quantity per eps
    std::vector<ScaledValue> ratios;   // mu_ell / mu_{ell-1} per eps

    void validate() const;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

// OLS of log10(value) against log10(ratio). Requires >= 4 positive values.
SlopeFit slope_fit(const SweepSeries& s);
// Same fit against log10(eps) (the exponent-law view, slope -> theta_ell).
SlopeFit slope_fit_vs_eps(const SweepSeries& s);

// Drops the largest-eps quartile (preasymptotic points) before fitting.
SweepSeries trim_preasymptotic(const SweepSeries& s);

// log-spaced grid, points_per_decade apart, from eps_max down to eps_min.
std::vector<double> log_grid(double eps_min, double eps_max, int points_per_decade);

enum class Quantity { interaction, annulus_norm_critical, error_ii };

// Embarrassingly parallel over eps points; per-point results are deterministic
// and written by index, so the serial reference path gives identical output.
SweepSeries run_sweep(const TowerConfig& base, Quantity what, int ell,
                      const std::vector<double>& eps_grid, double rel_tol = 1e-8,
                      bool serial = false);

} // namespace yamabe::tower
