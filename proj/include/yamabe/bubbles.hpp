#pragma once

#include <vector>

#include "yamabe/errors.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/smallmat.hpp"

#include "json.hpp"

namespace yamabe::bubbles {

// alpha_N = (N(N-2))^{(N-2)/4}; U(x) = alpha_N (1+|x|^2)^{-(N-2)/2}.
double alpha_n(int dim);

// Standard profile U and its radial derivatives, closed form.
double u_profile(int dim, double r);
double u_profile_d1(int dim, double r);
double u_profile_laplacian(int dim, double r);
// Smooth factors of the Hessian D^2U = h1(r) I + h2(r) x x^T.
double u_hess_h1(int dim, double r); // U'/r, finite at r = 0
double u_hess_h2(int dim, double r); // (U'' - U'/r)/r^2, finite at r = 0

struct Bubble {
    int dim = 7;
    double mu = 1.0;
    std::vector<double> center; // empty means origin

    Bubble(int N, double mu_, std::vector<double> y = {});
};

double bubble_value(const Bubble& b, const std::vector<double>& x);
std::vector<double> bubble_gradient(const Bubble& b, const std::vector<double>& x);
SquareMat bubble_hessian(const Bubble& b, const std::vector<double>& x);
double bubble_laplacian(const Bubble& b, const std::vector<double>& x);

enum class EvalOrder { value, gradient, hessian };

struct KernelElement {
    int dim = 7;
    int index = 0; // 0: dilation mode psi^0; 1..N: translation modes psi^i

    KernelElement(int N, int idx);
};

double kernel_eval(const KernelElement& k, const std::vector<double>& x);
double kernel_laplacian(const KernelElement& k, const std::vector<double>& x);
// psi^0 radial profile and its closed-form pieces (used by the nu assembly).
double psi0_profile(int dim, double r);

// residual of the linearized equation: -Delta psi - p U^{p-1} psi at x.
double linearized_residual(const KernelElement& k, const std::vector<double>& x);

// Pointwise curvature data at the blow-up point, in the normal-coordinates
// index convention (R_{iabj} contracts x_a x_b against the Hessian slots i,j).
struct CurvatureData {
    int dim = 0;
    Tensor4 riemann;       // R_{iabj}
    SquareMat dgamma;      // D(l,k) = sum_i d_l Gamma^k_{ii}
    double scalar_curv = 0.0;

    CurvatureData() = default;
    CurvatureData(int N, Tensor4 riem, SquareMat dg, double rg, double sym_tol = 1e-10);

    static CurvatureData zero(int N);
    // Verifies R_{iabj} = -R_{aibj} = -R_{iajb} and R_{iabj} = R_{bjia}.
    double max_symmetry_defect() const;

    nlohmann::json to_json() const;
    static CurvatureData from_json(const nlohmann::json& j);
};

// Fredholm constant of the correction equation: the unique nu with
// <RHS0 + nu psi^0, psi^0>_{L^2} = 0, where
// RHS0 = -(1/3) sum R_{iabj} x_a x_b d2_ij U + sum D_lk x_l d_k U + beta_N R_g U.
double solvability_nu(const CurvatureData& c, double rel_tol = 1e-10);

// Independent re-verification: quadrature of the angularly reduced combined
// integrand <RHS0 + nu psi^0, psi^0>; returns |value| (should be ~0) and the
// bound 10 * rel_tol * <psi^0, psi^0>.
struct FredholmCheck {
    double residual = 0.0;
    double bound = 0.0;
    bool ok = false;
};
FredholmCheck verify_fredholm(const CurvatureData& c, double nu, double rel_tol = 1e-10);

// Projections <RHS0, psi^i>, i = 1..N. Parity forces every component to zero;
// the operation assembles them through the moment pipeline as a plumbing test.
std::vector<double> rhs_kernel_orthogonality(const CurvatureData& c, double rel_tol = 1e-10);

// Bookkeeping bound for the (out-of-scope) correction term V, Eq-level decay
// envelope C_env (1+|x|^2)^{-(N-4)/2}. Requires N >= 7.
double v_decay_envelope(const std::vector<double>& x, int dim, double c_env = 1.0);
double v_decay_envelope_radial(double r, int dim, double c_env = 1.0);

} // namespace yamabe::bubbles
