#pragma once

#include <string>
#include <vector>

#include "yamabe/errors.hpp"
#include "yamabe/rational.hpp"

#include "json.hpp"

namespace yamabe::constants {

// Every constant of the reduced-energy expansion, quadrature-grounded.
// kn_pow is the ground truth for K_N^{-N}; the closed forms a_n, b_n are
// expressed through it, so no omega-convention enters them.
struct EnergyConstants {
    int dim = 0;
    double kn_pow = 0.0;          // K_N^{-N} = int U^{p+1} = int |grad U|^2
    double c0 = 0.0;              // int f'(U) (psi^0)^2
    double a_n = 0.0;             // kn_pow / (24 N (N-4)(N-6))
    double b_n = 0.0;             // 2(N-1) kn_pow / (N (N-2)(N-4))
    double c_n = 0.0;             // interaction prefactor, quadrature ground truth (= c_hat)
    double d_n_per_bubble = 0.0;  // kn_pow / N
    double b_hat = 0.0;           // (1/2) int U^2
    double c_hat = 0.0;           // alpha_N int U^p |y|^{2-N} dy
    bool b_consistent = true;     // |b_hat - b_n| within 1 percent
    std::string convention_note;

    nlohmann::json to_json() const;
};

EnergyConstants compute_constants(int dim, double rel_tol = 1e-10);

// Both candidate values of the consecutive-bubble interaction prefactor and
// how they compare with the closed form 2^{N-1} K_N^{-N} w_{N-1} / (N w_N)
// under the sphere-area convention w_m = |S^m|.
struct PrefactorReport {
    int dim = 0;
    double with_alpha = 0.0;    // alpha_N int U^p |y|^{2-N} dy
    double without_alpha = 0.0; // int U^p |y|^{2-N} dy
    double closed_form_sphere_convention = 0.0;
    std::string match_note;

    nlohmann::json to_json() const;
};

PrefactorReport interaction_prefactor(int dim, double rel_tol = 1e-10);

// Rational concentration exponents: gamma_j = ((N-2)/(N-6))^{j-1} - 1/2,
// theta_l = 2 ((N-2)/(N-6))^{l-1} = 1 + 2 gamma_l; exact plus float views.
struct ExponentSchedule {
    int dim = 0;
    int k = 0;
    std::vector<Rational> gamma;
    std::vector<Rational> theta;
    std::vector<double> gamma_f;
    std::vector<double> theta_f;

    nlohmann::json to_json() const;
};

ExponentSchedule exponent_schedule(int dim, int k);

} // namespace yamabe::constants
