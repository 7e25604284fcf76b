#include "yamabe/reduced_energy.hpp"

#include <cmath>
#include <functional>

namespace yamabe::reduced {

namespace {

double beta_exp(int N) { return 0.5 * (N - 2); }

} // namespace

ReducedModel::ReducedModel(int N, int height, constants::EnergyConstants ec, double weyl_squared)
    : dim(N), k(height), consts(std::move(ec)), weyl_sq(weyl_squared),
      schedule(constants::exponent_schedule(N, height)) {
    if (consts.dim != N) throw std::invalid_argument("ReducedModel: constants dimension mismatch");
    if (weyl_sq < 0.0) throw std::invalid_argument("ReducedModel: weyl_sq must be >= 0");
}

double g1(const ReducedModel& m, double d1) {
    const double d2 = d1 * d1;
    return -m.consts.a_n * m.weyl_sq * d2 * d2 + m.consts.b_n * d2;
}

double g_ell(const ReducedModel& m, int ell, double d_prev, double d) {
    if (ell < 2 || ell > m.k) throw IndexOutOfRangeError("g_ell: ell must lie in 2..k");
    if (!(d_prev > 0.0 && d > 0.0))
        throw std::invalid_argument("g_ell: heights must be positive");
    return -m.consts.c_n * std::pow(d / d_prev, beta_exp(m.dim)) + m.consts.b_n * d * d;
}

double reduced_energy_model(const ReducedModel& m, const std::vector<double>& d, double eps) {
    if (static_cast<int>(d.size()) != m.k)
        throw std::invalid_argument("reduced_energy_model: need k heights");
    if (!(eps > 0.0)) throw std::invalid_argument("reduced_energy_model: eps must be positive");
    if (m.schedule.theta_f[0] != 2.0)
        throw std::logic_error("reduced_energy_model: theta_1 != 2");
    double acc = m.k * m.consts.d_n_per_bubble; // D_N for a k-tower
    acc += eps * eps * g1(m, d[0]);
    for (int l = 2; l <= m.k; ++l)
        acc += std::pow(eps, m.schedule.theta_f[l - 1]) * g_ell(m, l, d[l - 2], d[l - 1]);
    return acc;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double width_tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > width_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    // Parabolic refinement: near a quadratic maximum, golden section alone
    // saturates at sqrt(machine-eps) localization.
    const double h = 1e-5 * std::max(std::fabs(x), 1e-30);
    const double f0 = f(x - h), f1 = f(x), f2 = f(x + h);
    const double denom = f0 - 2.0 * f1 + f2;
    if (denom < 0.0) {
        const double shift = 0.5 * h * (f0 - f2) / denom;
        if (std::fabs(shift) < h) x += shift;
    }
    return x;
}

nlohmann::json MaximizeReport::to_json() const {
    nlohmann::ordered_json j;
    j["d_star"] = d_star;
    j["d_star_log10"] = d_star_log10;
    j["golden_rel_agreement"] = golden_rel_agreement;
    j["second_derivative"] = second_derivative;
    j["g_at_max_log10"] = g_at_max_log10;
    j["g_at_max_sign"] = g_at_max_sign;
    return j;
}

MaximizeReport maximize_sequential(const ReducedModel& m) {
    if (!(m.weyl_sq > 0.0))
        throw DegenerateWeylError("maximize_sequential: weyl_sq must be positive (G_1 has no "
                                  "interior maximum otherwise)");
    const double A = m.consts.a_n, B = m.consts.b_n, C = m.consts.c_n;
    const int N = m.dim;
    const double beta = beta_exp(N);
    MaximizeReport rep;

    // level 1: G_1(d) = -A W d^4 + B d^2
    const double d1 = std::sqrt(B / (2.0 * A * m.weyl_sq));
    {
        auto f = [&](double x) { return g1(m, x); };
        const double numeric = golden_section_max(f, 1e-6 * d1, 1e3 * d1, 1e-12 * d1);
        rep.d_star.push_back(d1);
        rep.d_star_log10.push_back(std::log10(d1));
        rep.golden_rel_agreement.push_back(std::fabs(numeric - d1) / d1);
        rep.second_derivative.push_back(-12.0 * A * m.weyl_sq * d1 * d1 + 2.0 * B);
        const double gmax = g1(m, d1);
        rep.g_at_max_log10.push_back(std::log10(std::fabs(gmax)));
        rep.g_at_max_sign.push_back(gmax >= 0 ? 1.0 : -1.0);
    }

    // levels 2..k in multiplicatively scaled variables eta = d / d_closed:
    // G_l = B d_closed^2 [ -Lambda eta^beta + eta^2 ],
    // Lambda = (C/B) d_closed^{beta-2} / d_prev^beta (equals 2/beta at the
    // closed-form maximizer; kept in log10 so deep levels cannot underflow).
    const double log_kappa = (2.0 / (6.0 - N)) * std::log10((N - 2.0) * C / (4.0 * B));
    const double chain = (N - 2.0) / (N - 6.0);
    for (int l = 2; l <= m.k; ++l) {
        const double log_prev = rep.d_star_log10.back();
        const double log_d = log_kappa + chain * log_prev;
        const double log_lambda =
            std::log10(C / B) + (beta - 2.0) * log_d - beta * log_prev;
        const double lambda = std::pow(10.0, log_lambda);
        auto scaled = [&](double eta) { return -lambda * std::pow(eta, beta) + eta * eta; };
        const double eta_num = golden_section_max(scaled, 1e-6, 1e3, 1e-12);
        rep.d_star_log10.push_back(log_d);
        rep.d_star.push_back(std::pow(10.0, log_d)); // may underflow for deep towers
        rep.golden_rel_agreement.push_back(std::fabs(eta_num - 1.0));
        // scaled second derivative at eta = 1: -beta(beta-1)Lambda + 2 = 4 - 2 beta
        rep.second_derivative.push_back(-beta * (beta - 1.0) * lambda + 2.0);
        const double g_scaled = scaled(1.0); // G/(B d^2)
        const double log_g =
            std::log10(std::fabs(g_scaled)) + std::log10(B) + 2.0 * log_d;
        rep.g_at_max_log10.push_back(log_g);
        rep.g_at_max_sign.push_back(g_scaled >= 0 ? 1.0 : -1.0);
    }
    return rep;
}

nlohmann::json HessianReport::to_json() const {
    nlohmann::ordered_json j;
    j["negdef"] = negdef;
    j["eigenvalues"] = eigenvalues;
    return j;
}

HessianReport hessian_check(const ReducedModel& m, const std::vector<double>& d, double eps,
                            double fd_step) {
    if (static_cast<int>(d.size()) != m.k)
        throw std::invalid_argument("hessian_check: need k heights");
    for (double di : d)
        if (!(di > 0.0)) throw std::invalid_argument("hessian_check: heights must be positive");
    if (!(fd_step > 1e-10))
        throw StepTooSmallError("hessian_check: fd_step below the roundoff floor");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("hessian_check: eps must lie in (0,1)");

    const int k = m.k;
    const int N = m.dim;
    const double beta = beta_exp(N);
    const double B = m.consts.b_n, C = m.consts.c_n, A = m.consts.a_n;
    const double log10_eps = std::log10(eps);

    // per-level value scale S_l = B d_l^2 and variable scale d_l, in log10
    std::vector<double> log_d(k), log_s(k);
    for (int l = 0; l < k; ++l) {
        log_d[l] = std::log10(d[l]);
        log_s[l] = std::log10(B) + 2.0 * log_d[l];
    }

    // scaled per-level functions m_j(eta_{j-1}, eta_j) = G_j / S_j
    auto m_level = [&](int j, double eta_prev, double eta) {
        if (j == 1) {
            const double theta = (A * m.weyl_sq / B) * d[0] * d[0];
            return -theta * std::pow(eta, 4.0) + eta * eta;
        }
        const double log_lambda =
            std::log10(C / B) + (beta - 2.0) * log_d[j - 1] - beta * log_d[j - 2];
        const double lambda = std::pow(10.0, log_lambda);
        return -lambda * std::pow(eta / eta_prev, beta) + eta * eta;
    };

    // FD second derivatives of m_j around eta = 1 in the variables it touches
    auto d2 = [&](int j, int var_a, int var_b) {
        // var indexes within m_j: 0 = eta_{j-1}, 1 = eta_j (j = 1 only has var 1)
        const double h = fd_step;
        auto at = [&](double ea, double eb) {
            return (j == 1) ? m_level(1, 0.0, eb) : m_level(j, ea, eb);
        };
        if (var_a == var_b) {
            double f0, f1, f2;
            if (var_a == 1) {
                f0 = at(1.0, 1.0 - h);
                f1 = at(1.0, 1.0);
                f2 = at(1.0, 1.0 + h);
            } else {
                f0 = at(1.0 - h, 1.0);
                f1 = at(1.0, 1.0);
                f2 = at(1.0 + h, 1.0);
            }
            return (f0 - 2.0 * f1 + f2) / (h * h);
        }
        const double fpp = at(1.0 + h, 1.0 + h), fpm = at(1.0 + h, 1.0 - h);
        const double fmp = at(1.0 - h, 1.0 + h), fmm = at(1.0 - h, 1.0 - h);
        return (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    };

    // assemble the congruence-scaled Hessian
    SquareMat h(k);
    const std::vector<double>& theta = m.schedule.theta_f;
    for (int l = 1; l <= k; ++l) {
        for (int mm = l; mm <= k; ++mm) {
            if (mm - l > 1) continue;
            double acc = 0.0;
            for (int j = std::max(l, mm); j <= std::min(k, std::max(l, mm) + 1); ++j) {
                // m_j touches eta_{j-1}, eta_j
                const bool l_in = (l == j) || (l == j - 1);
                const bool m_in = (mm == j) || (mm == j - 1);
                if (!l_in || !m_in) continue;
                if (j == 1 && (l != 1 || mm != 1)) continue;
                const int va = (l == j) ? 1 : 0;
                const int vb = (mm == j) ? 1 : 0;
                const double log_w = (theta[j - 1] - 0.5 * (theta[l - 1] + theta[mm - 1])) *
                                         log10_eps +
                                     log_s[j - 1] - 0.5 * (log_s[l - 1] + log_s[mm - 1]);
                const double w = (log_w < -300.0) ? 0.0 : std::pow(10.0, log_w);
                if (w == 0.0) continue;
                acc += w * d2(j, std::min(va, vb), std::max(va, vb));
            }
            h(l - 1, mm - 1) = acc;
            h(mm - 1, l - 1) = acc;
        }
    }

    HessianReport rep;
    rep.eigenvalues = symmetric_eigenvalues(h);
    rep.negdef = rep.eigenvalues.back() < 0.0;
    return rep;
}

} // namespace yamabe::reduced
