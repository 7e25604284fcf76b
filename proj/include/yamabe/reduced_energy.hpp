#pragma once

#include <vector>

#include "yamabe/energy_constants.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/smallmat.hpp"

#include "json.hpp"

namespace yamabe::reduced {

// Finite-dimensional reduced-energy model
//   J(d; eps) = D_N + eps^2 G_1(d_1) + sum_{l>=2} eps^{theta_l} G_l(d_{l-1}, d_l)
// with G_1(d) = -A_N W d^4 + B_N d^2 and G_l(a, d) = -C_N (d/a)^{(N-2)/2} + B_N d^2.
struct ReducedModel {
    int dim = 7;
    int k = 1;
    constants::EnergyConstants consts;
    double weyl_sq = 0.0; // |Weyl_g(xi)|_g^2
    constants::ExponentSchedule schedule;

    ReducedModel(int N, int height, constants::EnergyConstants ec, double weyl_squared);
};

double g1(const ReducedModel& m, double d1);
double g_ell(const ReducedModel& m, int ell, double d_prev, double d);
double reduced_energy_model(const ReducedModel& m, const std::vector<double>& d, double eps);

struct MaximizeReport {
    std::vector<double> d_star;
    std::vector<double> d_star_log10;
    std::vector<double> golden_rel_agreement; // |closed - numeric| / closed per level
    std::vector<double> second_derivative;    // scaled G'' at the maximizer, must be < 0
    std::vector<double> g_at_max_log10;       // log10 |G_l(d*)| (signed via g_at_max_sign)
    std::vector<double> g_at_max_sign;

    nlohmann::json to_json() const;
};

// d_1* = sqrt(B/(2 A W)); d_l* = ((N-2) C / (4 B))^{2/(6-N)} (d_{l-1}*)^{(N-2)/(N-6)}.
// Each closed form is cross-validated against a golden-section + parabolic
// refinement oracle on the bracket [1e-6 d, 1e3 d]; deep levels run in
// multiplicatively scaled variables so nothing underflows.
MaximizeReport maximize_sequential(const ReducedModel& m);

struct HessianReport {
    bool negdef = false;
    std::vector<double> eigenvalues; // of the per-level-scaled Hessian, ascending

    nlohmann::json to_json() const;
};

// Central-difference Hessian of the scale-separated model in per-level scaled
// variables eta_l = d_l / d_l^0, each level's block weighted by
// eps^{theta_j - (theta_l+theta_m)/2} (a congruence, so definiteness is that
// of the true Hessian).
HessianReport hessian_check(const ReducedModel& m, const std::vector<double>& d, double eps,
                            double fd_step = 1e-4);

// Derivative-free 1-D maximizer used as the oracle: golden section to the
// given bracket width, then one parabolic refinement.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double width_tol = 1e-12);

} // namespace yamabe::reduced
