#include "yamabe/bubbles.hpp"

#include <cmath>

namespace yamabe::bubbles {

namespace {

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return s;
}

double shalf(int N) { return 0.5 * (N - 2); }

void require_dim(int N) {
    if (N < 3) throw DimensionTooLowError("bubbles: dimension must be >= 3");
}

} // namespace

double alpha_n(int dim) {
    require_dim(dim);
    return std::pow(static_cast<double>(dim) * (dim - 2), 0.25 * (dim - 2));
}

double u_profile(int dim, double r) {
    const double s = shalf(dim);
    return alpha_n(dim) * std::pow(1.0 + r * r, -s);
}

double u_profile_d1(int dim, double r) {
    const double s = shalf(dim);
    return -2.0 * s * alpha_n(dim) * r * std::pow(1.0 + r * r, -s - 1.0);
}

double u_profile_laplacian(int dim, double r) {
    // Delta U = -N(N-2) alpha_N (1+r^2)^{-s-2}
    const double s = shalf(dim);
    return -static_cast<double>(dim) * (dim - 2) * alpha_n(dim) * std::pow(1.0 + r * r, -s - 2.0);
}

double u_hess_h1(int dim, double r) {
    const double s = shalf(dim);
    return -2.0 * s * alpha_n(dim) * std::pow(1.0 + r * r, -s - 1.0);
}

double u_hess_h2(int dim, double r) {
    const double s = shalf(dim);
    return 4.0 * s * (s + 1.0) * alpha_n(dim) * std::pow(1.0 + r * r, -s - 2.0);
}

Bubble::Bubble(int N, double mu_, std::vector<double> y) : dim(N), mu(mu_), center(std::move(y)) {
    require_dim(N);
    if (!(mu > 0.0)) throw std::invalid_argument("Bubble: mu must be positive");
    if (!center.empty() && static_cast<int>(center.size()) != N)
        throw std::invalid_argument("Bubble: center dimension mismatch");
}

namespace {

std::vector<double> rescaled(const Bubble& b, const std::vector<double>& x) {
    std::vector<double> z(b.dim);
    for (int i = 0; i < b.dim; ++i) {
        const double yi = b.center.empty() ? 0.0 : b.center[i];
        z[i] = (x[i] - yi) / b.mu;
    }
    return z;
}

} // namespace

double bubble_value(const Bubble& b, const std::vector<double>& x) {
    const std::vector<double> z = rescaled(b, x);
    return std::pow(b.mu, -shalf(b.dim)) * u_profile(b.dim, std::sqrt(norm2(z)));
}

std::vector<double> bubble_gradient(const Bubble& b, const std::vector<double>& x) {
    const std::vector<double> z = rescaled(b, x);
    const double r = std::sqrt(norm2(z));
    const double h1 = u_hess_h1(b.dim, r); // U'/r factor: grad U = h1 * z
    const double pref = std::pow(b.mu, -shalf(b.dim) - 1.0);
    std::vector<double> g(b.dim);
    for (int i = 0; i < b.dim; ++i) g[i] = pref * h1 * z[i];
    return g;
}

SquareMat bubble_hessian(const Bubble& b, const std::vector<double>& x) {
    const std::vector<double> z = rescaled(b, x);
    const double r = std::sqrt(norm2(z));
    const double h1 = u_hess_h1(b.dim, r);
    const double h2 = u_hess_h2(b.dim, r);
    const double pref = std::pow(b.mu, -shalf(b.dim) - 2.0);
    SquareMat h(b.dim);
    for (int i = 0; i < b.dim; ++i) {
        for (int j = i; j < b.dim; ++j) {
            h(i, j) = pref * (h2 * z[i] * z[j] + (i == j ? h1 : 0.0));
            h(j, i) = h(i, j);
        }
    }
    return h;
}

double bubble_laplacian(const Bubble& b, const std::vector<double>& x) {
    const std::vector<double> z = rescaled(b, x);
    return std::pow(b.mu, -shalf(b.dim) - 2.0) * u_profile_laplacian(b.dim, std::sqrt(norm2(z)));
}

KernelElement::KernelElement(int N, int idx) : dim(N), index(idx) {
    require_dim(N);
    if (idx < 0 || idx > N) throw IndexOutOfRangeError("KernelElement: index must lie in 0..N");
}

double psi0_profile(int dim, double r) {
    // psi^0 = r U' + s U = s alpha (1-r^2)(1+r^2)^{-s-1}
    const double s = shalf(dim);
    return s * alpha_n(dim) * (1.0 - r * r) * std::pow(1.0 + r * r, -s - 1.0);
}

double kernel_eval(const KernelElement& k, const std::vector<double>& x) {
    const double r = std::sqrt(norm2(x));
    if (k.index == 0) return psi0_profile(k.dim, r);
    return u_hess_h1(k.dim, r) * x[k.index - 1]; // psi^i = d_i U = (U'/r) x_i
}

double kernel_laplacian(const KernelElement& k, const std::vector<double>& x) {
    const double s = shalf(k.dim);
    const double a = alpha_n(k.dim);
    const double r2 = norm2(x);
    if (k.index == 0) {
        // Delta psi^0 = 4 s (s+1)(s+2) alpha (r^2-1)(1+r^2)^{-s-3}
        return 4.0 * s * (s + 1.0) * (s + 2.0) * a * (r2 - 1.0) * std::pow(1.0 + r2, -s - 3.0);
    }
    // Delta psi^i = 8 s (s+1)(s+2) alpha x_i (1+r^2)^{-s-3}
    return 8.0 * s * (s + 1.0) * (s + 2.0) * a * x[k.index - 1] * std::pow(1.0 + r2, -s - 3.0);
}

double linearized_residual(const KernelElement& k, const std::vector<double>& x) {
    const int N = k.dim;
    const double p = static_cast<double>(N + 2) / (N - 2);
    const double r = std::sqrt(norm2(x));
    const double upm1 = p * static_cast<double>(N) * (N - 2) * std::pow(1.0 + r * r, -2.0);
    return -kernel_laplacian(k, x) - upm1 * kernel_eval(k, x);
}

CurvatureData::CurvatureData(int N, Tensor4 riem, SquareMat dg, double rg, double sym_tol)
    : dim(N), riemann(std::move(riem)), dgamma(std::move(dg)), scalar_curv(rg) {
    if (riemann.n != N || dgamma.n != N)
        throw std::invalid_argument("CurvatureData: tensor dimension mismatch");
    const double defect = max_symmetry_defect();
    double scale = 0.0;
    for (double v : riemann.a) scale = std::max(scale, std::fabs(v));
    if (defect > sym_tol * std::max(scale, 1.0))
        throw SymmetryViolationError("CurvatureData: Riemann symmetries violated, defect " +
                                     std::to_string(defect));
}

CurvatureData CurvatureData::zero(int N) {
    return CurvatureData(N, Tensor4(N), SquareMat(N), 0.0);
}

double CurvatureData::max_symmetry_defect() const {
    const int n = dim;
    double defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int j = 0; j < n; ++j) {
                    const double r = riemann(i, a, b, j);
                    defect = std::max(defect, std::fabs(r + riemann(a, i, b, j)));
                    defect = std::max(defect, std::fabs(r + riemann(i, a, j, b)));
                    defect = std::max(defect, std::fabs(r - riemann(b, j, i, a)));
                }
    return defect;
}

nlohmann::json CurvatureData::to_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["riemann"] = riemann.a;          // flat, row-major in (i,a,b,j)
    j["christoffel_derivs"] = dgamma.a; // flat, row-major D[l][k] = sum_i d_l Gamma^k_{ii}
    j["scalar_curv"] = scalar_curv;
    return j;
}

CurvatureData CurvatureData::from_json(const nlohmann::json& j) {
    const int N = j.at("dim").get<int>();
    Tensor4 riem(N);
    SquareMat dg(N);
    riem.a = j.at("riemann").get<std::vector<double>>();
    dg.a = j.at("christoffel_derivs").get<std::vector<double>>();
    if (riem.a.size() != static_cast<std::size_t>(N) * N * N * N ||
        dg.a.size() != static_cast<std::size_t>(N) * N)
        throw std::invalid_argument("CurvatureData: flat array size mismatch");
    return CurvatureData(N, std::move(riem), std::move(dg), j.at("scalar_curv").get<double>());
}

namespace {

struct NuMoments {
    double i2;      // int x_1^2 h1 psi0 dx = (1/N) int r^2 h1 psi0 dx
    double i4_all;  // int x_1^4 h2 psi0 dx
    double i4_pair; // int x_1^2 x_2^2 h2 psi0 dx
    double j0;      // int U psi0 dx
    double psi_sq;  // int (psi0)^2 dx
};

NuMoments nu_moments(int N, double rel_tol) {
    using quad::MultiIndex;
    using quad::RadialIntegrand;
    // All factors decay algebraically; tails: h1 psi0 ~ r^{-2N+2}, U psi0 ~ r^{-2N+4}.
    RadialIntegrand h1psi{[N](double r) { return u_hess_h1(N, r) * psi0_profile(N, r); },
                          -(2.0 * N - 2.0)};
    RadialIntegrand h2psi{[N](double r) { return u_hess_h2(N, r) * psi0_profile(N, r); },
                          -(2.0 * N)};
    RadialIntegrand upsi{[N](double r) { return u_profile(N, r) * psi0_profile(N, r); },
                         -(2.0 * N - 4.0)};
    RadialIntegrand psisq{[N](double r) {
                              const double v = psi0_profile(N, r);
                              return v * v;
                          },
                          -(2.0 * N - 4.0)};
    NuMoments m;
    m.i2 = quad::moment_integral(h1psi, MultiIndex{2}, N, rel_tol);
    m.i4_all = quad::moment_integral(h2psi, MultiIndex{4}, N, rel_tol);
    m.i4_pair = quad::moment_integral(h2psi, MultiIndex{2, 2}, N, rel_tol);
    m.j0 = quad::moment_integral(upsi, MultiIndex{}, N, rel_tol);
    m.psi_sq = quad::integrate_radial(psisq, quad::RadialInterval::whole(), N, rel_tol).value;
    return m;
}

// int x_a x_b x_i x_j h(r) dx from the two independent even moments.
double fourth_moment(int a, int b, int i, int j, double all, double pair) {
    if (a == b && b == i && i == j) return all;
    if (a == b && i == j && a != i) return pair;
    if (a == i && b == j && a != b) return pair;
    if (a == j && b == i && a != b) return pair;
    return 0.0;
}

double beta_coeff(int N) { return static_cast<double>(N - 2) / (4.0 * (N - 1)); }

} // namespace

double solvability_nu(const CurvatureData& c, double rel_tol) {
    const int N = c.dim;
    if (N < 7) throw DimensionTooLowError("solvability_nu: dimension must be >= 7");
    const NuMoments m = nu_moments(N, rel_tol);

    // Riemann block: -(1/3) sum R_{iabj} int x_a x_b d2_ij U psi0,
    // with d2_ij U = delta_ij h1 + x_i x_j h2.
    double contraction = 0.0;
    for (int i = 0; i < N; ++i)
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int j = 0; j < N; ++j) {
                    const double r = c.riemann(i, a, b, j);
                    if (r == 0.0) continue;
                    double mom = fourth_moment(a, b, i, j, m.i4_all, m.i4_pair);
                    if (i == j && a == b) mom += m.i2;
                    contraction += r * mom;
                }
    const double term_riemann = -contraction / 3.0;

    // Christoffel block: sum_lk D(l,k) int x_l x_k h1 psi0 = trace(D) * i2.
    double trace_d = 0.0;
    for (int l = 0; l < N; ++l) trace_d += c.dgamma(l, l);
    const double term_gamma = trace_d * m.i2;

    const double term_scalar = beta_coeff(N) * c.scalar_curv * m.j0;

    return -(term_riemann + term_gamma + term_scalar) / m.psi_sq;
}

FredholmCheck verify_fredholm(const CurvatureData& c, double nu, double rel_tol) {
    const int N = c.dim;
    // Angular average over S^{N-1} collapses the Riemann block to
    // (1/N) S1 r^2 h1(r), S1 = sum_{ia} R_{iaai}; the rank-4 moment terms cancel.
    double s1 = 0.0;
    for (int i = 0; i < N; ++i)
        for (int a = 0; a < N; ++a) s1 += c.riemann(i, a, a, i);
    double trace_d = 0.0;
    for (int l = 0; l < N; ++l) trace_d += c.dgamma(l, l);
    const double bn = beta_coeff(N);
    const double rg = c.scalar_curv;
    quad::RadialIntegrand joint{
        [N, s1, trace_d, bn, rg, nu](double r) {
            const double psi = psi0_profile(N, r);
            const double radial2 = r * r * u_hess_h1(N, r) / N;
            const double rhs =
                (-s1 / 3.0 + trace_d) * radial2 + bn * rg * u_profile(N, r) + nu * psi;
            return rhs * psi;
        },
        -(2.0 * N - 4.0)};
    quad::QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = 1e-14; // the integrand integrates to ~0 by construction
    const double val =
        quad::integrate_radial(joint, quad::RadialInterval::whole(), N, opts).value;

    quad::RadialIntegrand psisq{[N](double r) {
                                    const double v = psi0_profile(N, r);
                                    return v * v;
                                },
                                -(2.0 * N - 4.0)};
    const double nrm =
        quad::integrate_radial(psisq, quad::RadialInterval::whole(), N, rel_tol).value;
    FredholmCheck out;
    out.residual = std::fabs(val);
    out.bound = 10.0 * rel_tol * nrm;
    out.ok = out.residual <= out.bound;
    return out;
}

std::vector<double> rhs_kernel_orthogonality(const CurvatureData& c, double rel_tol) {
    const int N = c.dim;
    // psi^m = x_m phi(r). Every monomial below carries odd degree in at least
    // one coordinate, so each moment call short-circuits to an exact zero.
    quad::RadialIntegrand h1phi{[N](double r) { return u_hess_h1(N, r) * u_hess_h1(N, r); },
                                -(2.0 * N)};
    quad::RadialIntegrand h2phi{[N](double r) { return u_hess_h2(N, r) * u_hess_h1(N, r); },
                                -(2.0 * N + 2.0)};
    quad::RadialIntegrand uphi{[N](double r) { return u_profile(N, r) * u_hess_h1(N, r); },
                               -(2.0 * N - 2.0)};
    std::vector<double> out(N, 0.0);
    auto bump = [N](quad::MultiIndex& idx, int coord) {
        if (static_cast<int>(idx.size()) < N) idx.resize(N, 0);
        idx[coord] += 1;
    };
    for (int mth = 0; mth < N; ++mth) {
        double acc = 0.0;
        for (int i = 0; i < N; ++i)
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    for (int j = 0; j < N; ++j) {
                        const double r = c.riemann(i, a, b, j);
                        if (r == 0.0) continue;
                        if (i == j) {
                            quad::MultiIndex idx;
                            bump(idx, a);
                            bump(idx, b);
                            bump(idx, mth);
                            acc += -r / 3.0 * quad::moment_integral(h1phi, idx, N, rel_tol);
                        }
                        quad::MultiIndex idx;
                        bump(idx, a);
                        bump(idx, b);
                        bump(idx, i);
                        bump(idx, j);
                        bump(idx, mth);
                        acc += -r / 3.0 * quad::moment_integral(h2phi, idx, N, rel_tol);
                    }
        for (int l = 0; l < N; ++l)
            for (int k = 0; k < N; ++k) {
                const double d = c.dgamma(l, k);
                if (d == 0.0) continue;
                quad::MultiIndex idx;
                bump(idx, l);
                bump(idx, k);
                bump(idx, mth);
                acc += d * quad::moment_integral(h1phi, idx, N, rel_tol);
            }
        {
            quad::MultiIndex idx;
            bump(idx, mth);
            acc += beta_coeff(N) * c.scalar_curv * quad::moment_integral(uphi, idx, N, rel_tol);
        }
        out[mth] = acc;
    }
    return out;
}

double v_decay_envelope_radial(double r, int dim, double c_env) {
    if (dim < 7) throw DimensionTooLowError("v_decay_envelope: dimension must be >= 7");
    return c_env * std::pow(1.0 + r * r, -0.5 * (dim - 4));
}

double v_decay_envelope(const std::vector<double>& x, int dim, double c_env) {
    return v_decay_envelope_radial(std::sqrt(norm2(x)), dim, c_env);
}

} // namespace yamabe::bubbles
