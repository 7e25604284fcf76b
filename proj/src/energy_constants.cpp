#include "yamabe/energy_constants.hpp"

#include <cmath>
#include <sstream>

#include "yamabe/bubbles.hpp"
#include "yamabe/quadrature.hpp"

namespace yamabe::constants {

namespace {

using quad::RadialIntegrand;
using quad::RadialInterval;

double require_converged(const quad::QuadratureResult& r, const char* what) {
    if (!r.converged)
        throw ToleranceNotReachedError(std::string("compute_constants: ") + what +
                                       " did not reach tolerance");
    return r.value;
}

double integral_u_pow(int N, double expo, double rel_tol) {
    // int U^expo dx; tail r^{-(N-2) expo}
    RadialIntegrand f{[N, expo](double r) { return std::pow(bubbles::u_profile(N, r), expo); },
                      -(static_cast<double>(N) - 2.0) * expo};
    return require_converged(
        quad::integrate_radial(f, RadialInterval::whole(), N, rel_tol), "int U^q");
}

double integral_grad_u_sq(int N, double rel_tol) {
    RadialIntegrand f{[N](double r) {
                          const double d = bubbles::u_profile_d1(N, r);
                          return d * d;
                      },
                      -(2.0 * N - 2.0)};
    return require_converged(
        quad::integrate_radial(f, RadialInterval::whole(), N, rel_tol), "int |grad U|^2");
}

double integral_c0(int N, double rel_tol) {
    const double p = static_cast<double>(N + 2) / (N - 2);
    RadialIntegrand f{[N, p](double r) {
                          const double upm1 =
                              p * static_cast<double>(N) * (N - 2) * std::pow(1.0 + r * r, -2.0);
                          const double psi = bubbles::psi0_profile(N, r);
                          return upm1 * psi * psi;
                      },
                      -(2.0 * N)};
    return require_converged(
        quad::integrate_radial(f, RadialInterval::whole(), N, rel_tol), "c0");
}

// int U^p |y|^{2-N} dy reduced to sigma_{N-1} int r U^p(r) dr.
double integral_interaction_core(int N, double rel_tol) {
    quad::QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    const double area = quad::sphere_area(N);
    auto w = [N, area](double r) { return area * r * std::pow(bubbles::u_profile(N, r),
                                                              static_cast<double>(N + 2) / (N - 2)); };
    const auto res = quad::integrate_1d(w, 0.0, quad::kInf, opts);
    if (!res.converged)
        throw ToleranceNotReachedError("interaction_prefactor: tolerance not reached");
    return res.value;
}

} // namespace

nlohmann::json EnergyConstants::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim;
    j["kn_pow"] = kn_pow;
    j["c0"] = c0;
    j["a_n"] = a_n;
    j["b_n"] = b_n;
    j["c_n"] = c_n;
    j["d_n_per_bubble"] = d_n_per_bubble;
    j["b_hat"] = b_hat;
    j["c_hat"] = c_hat;
    j["b_consistent"] = b_consistent;
    j["convention_note"] = convention_note;
    return j;
}

nlohmann::json PrefactorReport::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim;
    j["with_alpha"] = with_alpha;
    j["without_alpha"] = without_alpha;
    j["closed_form_sphere_convention"] = closed_form_sphere_convention;
    j["match_note"] = match_note;
    return j;
}

EnergyConstants compute_constants(int dim, double rel_tol) {
    if (dim < 7) throw DimensionTooLowError("compute_constants: dimension must be >= 7");
    const int N = dim;
    EnergyConstants ec;
    ec.dim = N;
    const double p1 = 2.0 * N / (N - 2.0); // p+1
    ec.kn_pow = integral_u_pow(N, p1, rel_tol);
    const double grad_sq = integral_grad_u_sq(N, rel_tol);
    if (std::fabs(grad_sq - ec.kn_pow) > 100.0 * rel_tol * ec.kn_pow)
        throw ToleranceNotReachedError(
            "compute_constants: int U^{p+1} and int |grad U|^2 disagree beyond tolerance");
    ec.c0 = integral_c0(N, rel_tol);
    ec.b_hat = 0.5 * integral_u_pow(N, 2.0, rel_tol);
    ec.c_hat = bubbles::alpha_n(N) * integral_interaction_core(N, rel_tol);

    ec.a_n = ec.kn_pow / (24.0 * N * (N - 4.0) * (N - 6.0));
    ec.b_n = 2.0 * (N - 1.0) * ec.kn_pow / (N * (N - 2.0) * (N - 4.0));
    ec.c_n = ec.c_hat;
    ec.d_n_per_bubble = ec.kn_pow / N;
    ec.b_consistent = std::fabs(ec.b_hat - ec.b_n) <= 0.01 * ec.b_n;

    // Resolve which measure convention makes the closed forms match quadrature.
    std::ostringstream note;
    const double pref = std::pow(0.25 * N * (N - 2.0), 0.5 * N);
    const double cand_sphere_n = pref * quad::sphere_surface_area(N);   // w_N = |S^N|
    const double cand_sphere_nm1 = pref * quad::sphere_area(N);         // w_N = |S^{N-1}|
    const double cand_ball = pref * quad::unit_ball_volume(N);          // w_N = vol(B^N)
    note.precision(12);
    note << "K_N^{-N} quadrature = " << ec.kn_pow
         << "; closed form (N(N-2)/4)^{N/2} w_N matches only under w_N = |S^N| ("
         << cand_sphere_n << "; |S^{N-1}| gives " << cand_sphere_nm1 << ", vol(B^N) gives "
         << cand_ball << "). ";
    const double closed_c =
        std::pow(2.0, N - 1) * ec.kn_pow * quad::sphere_area(N) /
        (N * quad::sphere_surface_area(N));
    note << "Interaction prefactor: quadrature with the outer bubble's far-field factor alpha_N"
         << " gives " << ec.c_hat << "; without it " << ec.c_hat / bubbles::alpha_n(N)
         << "; the closed form 2^{N-1} K^{-N} w_{N-1}/(N w_N) under w_m = |S^m| gives "
         << closed_c << " = " << closed_c / ec.c_hat << " of the measured limit."
         << " The sweep-confirmed value (with alpha_N) is carried as c_n.";
    if (!ec.b_consistent) {
        note << " DISCREPANCY: b_hat = " << ec.b_hat << " vs closed-form B_N = " << ec.b_n
             << " differ by more than 1 percent; b_hat is used for flat-model tests.";
    } else {
        note << " b_hat and closed-form B_N agree to " << std::fabs(ec.b_hat / ec.b_n - 1.0)
             << " relative.";
    }
    ec.convention_note = note.str();
    return ec;
}

PrefactorReport interaction_prefactor(int dim, double rel_tol) {
    if (dim < 7) throw DimensionTooLowError("interaction_prefactor: dimension must be >= 7");
    const int N = dim;
    PrefactorReport r;
    r.dim = N;
    r.without_alpha = integral_interaction_core(N, rel_tol);
    r.with_alpha = bubbles::alpha_n(N) * r.without_alpha;
    r.closed_form_sphere_convention = std::pow(2.0, N - 1) *
                                      compute_constants(N, rel_tol).kn_pow *
                                      quad::sphere_area(N) /
                                      (N * quad::sphere_surface_area(N));
    std::ostringstream note;
    note.precision(12);
    note << "with_alpha/closed = " << r.with_alpha / r.closed_form_sphere_convention
         << ", without_alpha/closed = " << r.without_alpha / r.closed_form_sphere_convention
         << "; the tower sweep limit matches with_alpha.";
    r.match_note = note.str();
    return r;
}

nlohmann::json ExponentSchedule::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim;
    j["k"] = k;
    std::vector<std::string> gs, ts;
    for (const auto& g : gamma) gs.push_back(g.str());
    for (const auto& t : theta) ts.push_back(t.str());
    j["gamma"] = gs;
    j["theta"] = ts;
    j["gamma_float"] = gamma_f;
    j["theta_float"] = theta_f;
    return j;
}

ExponentSchedule exponent_schedule(int dim, int k) {
    if (dim < 7)
        throw DimensionTooLowError("exponent_schedule: undefined for N < 7 (N=6 singular)");
    if (k < 1) throw std::invalid_argument("exponent_schedule: k must be >= 1");
    ExponentSchedule s;
    s.dim = dim;
    s.k = k;
    const Rational rho(dim - 2, dim - 6);
    const Rational half(1, 2);
    for (int j = 1; j <= k; ++j) {
        const Rational pw = rho.pow(j - 1);
        const Rational gamma_j = pw - half;
        const Rational theta_j = Rational(2) * pw;
        s.gamma.push_back(gamma_j);
        s.theta.push_back(theta_j);
        s.gamma_f.push_back(gamma_j.to_double());
        s.theta_f.push_back(theta_j.to_double());
    }
    return s;
}

} // namespace yamabe::constants
