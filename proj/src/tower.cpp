#include "yamabe/tower.hpp"

#include <algorithm>
#include <cmath>

#include "yamabe/bubbles.hpp"
#include "yamabe/parallel.hpp"

namespace yamabe::tower {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLn10 = std::log(10.0);

double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_d(double t) { return 30.0 * t * t * (t - 1.0) * (t - 1.0); }

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_d(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

} // namespace

double CutoffSpec::chi(double r) const {
    if (r <= 0.5 * r0) return 1.0;
    if (r >= r0) return 0.0;
    if (profile == Profile::smoothstep_quintic) {
        const double sigma = r * r / (r0 * r0);
        const double t = (sigma - 0.25) / 0.75;
        return 1.0 - smoothstep5(t);
    }
    const double s = (r - 0.5 * r0) / (0.5 * r0);
    const double bs = bump(s), bo = bump(1.0 - s);
    return bo / (bs + bo);
}

double CutoffSpec::dchi(double r) const {
    if (r <= 0.5 * r0 || r >= r0) return 0.0;
    if (profile == Profile::smoothstep_quintic) {
        const double sigma = r * r / (r0 * r0);
        const double t = (sigma - 0.25) / 0.75;
        return -smoothstep5_d(t) * (2.0 * r / (r0 * r0)) / 0.75;
    }
    const double s = (r - 0.5 * r0) / (0.5 * r0);
    const double bs = bump(s), bo = bump(1.0 - s);
    const double dbs = bump_d(s), dbo = -bump_d(1.0 - s);
    const double denom = (bs + bo) * (bs + bo);
    return ((dbo * (bs + bo) - bo * (dbs + dbo)) / denom) * (2.0 / r0);
}

TowerConfig::TowerConfig(int N, int height, std::vector<double> heights, double eps_,
                         CutoffSpec cut, bool with_envelope, double env_scale)
    : dim(N), k(height), d(std::move(heights)), eps(eps_), cutoff(cut),
      include_v_envelope(with_envelope), env_c(env_scale),
      schedule(constants::exponent_schedule(N, height)) {
    if (k < 1) throw std::invalid_argument("TowerConfig: k must be >= 1");
    if (static_cast<int>(d.size()) != k)
        throw std::invalid_argument("TowerConfig: need exactly k heights");
    for (double di : d)
        if (!(di > 0.0)) throw std::invalid_argument("TowerConfig: heights must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("TowerConfig: eps must be positive");
    if (!(cutoff.r0 > 0.0)) throw std::invalid_argument("TowerConfig: r0 must be positive");
    const std::vector<double> ml = mu_log10(*this);
    for (int j = 1; j < k; ++j)
        if (!(ml[j] < ml[j - 1]))
            throw NonMonotoneScalesError("TowerConfig: mu_j must be strictly decreasing");
    mu1_small_enough = ml[0] < std::log10(0.5 * cutoff.r0);
}

std::vector<double> mu_log10(const TowerConfig& cfg) {
    std::vector<double> out(cfg.k);
    const double le = std::log10(cfg.eps);
    for (int j = 0; j < cfg.k; ++j)
        out[j] = std::log10(cfg.d[j]) + cfg.schedule.gamma_f[j] * le;
    return out;
}

std::vector<double> mu_schedule(const TowerConfig& cfg) {
    std::vector<double> out(cfg.k);
    const std::vector<double> ml = mu_log10(cfg);
    for (int j = 0; j < cfg.k; ++j) out[j] = std::pow(10.0, ml[j]);
    return out;
}

namespace {

// log-magnitude bubble and tower arithmetic; radii are passed as natural logs
// so rescaled shells never force mu^{-s} style overflow.
struct LogEval {
    const TowerConfig& cfg;
    int N;
    double s;       // (N-2)/2
    double p;       // (N+2)/(N-2)
    double ln_alpha;
    std::vector<double> ln_mu;

    explicit LogEval(const TowerConfig& c)
        : cfg(c), N(c.dim), s(0.5 * (c.dim - 2)),
          p(static_cast<double>(c.dim + 2) / (c.dim - 2)),
          ln_alpha(std::log(bubbles::alpha_n(c.dim))) {
        for (double l10 : mu_log10(c)) ln_mu.push_back(l10 * kLn10);
    }

    static double ln1p_exp(double t) { return t > 700.0 ? t : std::log1p(std::exp(t)); }

    // ln U(rho) with ln rho given; ln U = ln_alpha - s ln(1+rho^2)
    double ln_u(double ln_rho) const { return ln_alpha - s * ln1p_exp(2.0 * ln_rho); }

    // ln of pure bubble j (no cutoff) at radius ln_r
    double ln_bubble(int j, double ln_r) const {
        return -s * ln_mu[j] + ln_u(ln_r - ln_mu[j]);
    }

    double chi_at(double ln_r) const {
        const double r = std::exp(ln_r); // underflow to 0 means chi = 1 region
        return cfg.cutoff.chi(r);
    }

    // ln W_j including cutoff (and optional envelope bookkeeping term)
    double ln_w(int j, double ln_r) const {
        const double chi = chi_at(ln_r);
        if (chi == 0.0) return kNegInf;
        double lw = ln_bubble(j, ln_r);
        if (cfg.include_v_envelope) {
            const double ln_env = std::log(cfg.env_c) -
                                  0.5 * (N - 4) * ln1p_exp(2.0 * (ln_r - ln_mu[j]));
            const double extra = 2.0 * ln_mu[j] + ln_env - (ln_bubble(j, ln_r) - (-s * ln_mu[j]))
                                 - ln_alpha; // relative size of envelope vs U, see below
            // additive form: W_j = chi mu^{-s} [U + mu^2 env]; fold via log-sum-exp
            const double la = ln_u(ln_r - ln_mu[j]);
            const double lb = 2.0 * ln_mu[j] + ln_env;
            (void)extra;
            lw = -s * ln_mu[j] + (la > lb ? la + std::log1p(std::exp(lb - la))
                                          : lb + std::log1p(std::exp(la - lb)));
        }
        return std::log(chi) + lw;
    }

    // ln of sum_{j in [j0, j1]} W_j  (0-based inclusive range)
    double ln_w_sum(int j0, int j1, double ln_r) const {
        double m = kNegInf;
        std::vector<double> ls;
        for (int j = j0; j <= j1; ++j) {
            const double l = ln_w(j, ln_r);
            ls.push_back(l);
            m = std::max(m, l);
        }
        if (m == kNegInf) return kNegInf;
        double acc = 0.0;
        for (double l : ls) acc += std::exp(l - m);
        return m + std::log(acc);
    }
};

// Stable ln of (S+T)^q - S^q - T^q for positive S, T given by logs (q > 1).
double ln_cross_term(double ln_s, double ln_t, double q) {
    if (ln_s == kNegInf && ln_t == kNegInf) return kNegInf;
    if (ln_s == kNegInf || ln_t == kNegInf) return kNegInf; // single term: no cross part
    const double lm = std::max(ln_s, ln_t);
    const double ls = std::min(ln_s, ln_t);
    const double du = ls - lm;
    if (du < -700.0) {
        // (S+T)^q - S^q ~ q S^{q-1} T dominates T^q
        return std::log(q) + (q - 1.0) * lm + ls;
    }
    const double u = std::exp(du);
    const double a = std::expm1(q * std::log1p(u)); // (1+u)^q - 1
    const double b = std::exp(q * du);               // u^q
    const double diff = a - b;
    if (diff <= 0.0) return std::log(q) + (q - 1.0) * lm + ls;
    return q * lm + std::log(diff);
}

struct ShellLog {
    double ln_inner; // -inf for a ball
    double ln_outer;
};

std::vector<ShellLog> shells_log(const TowerConfig& cfg) {
    const std::vector<double> ml = mu_log10(cfg);
    const double l_r0 = std::log10(cfg.r0());
    const double l_mu0 = 2.0 * l_r0 - ml[0]; // mu_0 = r0^2/mu_1
    auto edge = [&](int h) { // log10 of sqrt(mu_{h-1} mu_h), h = 1..k, 1-based
        const double a = (h == 1) ? l_mu0 : ml[h - 2];
        return 0.5 * (a + ml[h - 1]);
    };
    std::vector<ShellLog> out;
    for (int h = 1; h <= cfg.k; ++h) {
        ShellLog sh;
        sh.ln_outer = edge(h) * kLn10;
        sh.ln_inner = (h == cfg.k) ? kNegInf : edge(h + 1) * kLn10;
        out.push_back(sh);
    }
    return out;
}

// Integrate exp(ln_f(ln_r)) r^{N-1} sigma dr over a log-bounded shell,
// rescaled so the working variable y stays in double range.
ScaledValue shell_integral_log(const TowerConfig& cfg, const ShellLog& sh, double ln_scale,
                               const std::function<double(double)>& ln_f, double rel_tol,
                               bool* converged = nullptr) {
    const int N = cfg.dim;
    const double ln_sigma = std::log(quad::sphere_area(N));
    const double ymax = std::exp(sh.ln_outer - ln_scale);
    const double ymin = (sh.ln_inner == kNegInf) ? 0.0 : std::exp(sh.ln_inner - ln_scale);
    quad::QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.scale_hint = 1.0;
    // cutoff junctions as panel edges keep every panel analytic
    const double r0 = cfg.r0();
    for (double bp : {0.5 * r0, r0}) {
        const double y = bp * std::exp(-ln_scale);
        if (y > ymin && y < ymax) opts.breakpoints.push_back(y);
    }
    auto log_w = [&](double y) {
        const double ln_r = std::log(y) + ln_scale;
        const double lf = ln_f(ln_r);
        if (lf == kNegInf) return kNegInf;
        return lf + (N - 1) * std::log(y) + ln_sigma;
    };
    const auto res = quad::integrate_1d_log(log_w, ymin, ymax, opts);
    if (converged) *converged = res.converged;
    // measure factor from r = y * scale: r^{N-1} dr = scale^N y^{N-1} dy
    return res.value * ScaledValue::from_log(static_cast<double>(N) * ln_scale);
}

int require_ell(const TowerConfig& cfg, int ell, const char* who) {
    if (ell == 1)
        throw IndexOutOfRangeError(std::string(who) +
                                   ": ell = 1 has no consecutive-bubble ratio (it is zero "
                                   "by convention)");
    if (ell < 1 || ell > cfg.k)
        throw IndexOutOfRangeError(std::string(who) + ": ell out of range");
    return ell;
}

} // namespace

double tower_eval_radial(const TowerConfig& cfg, double r) {
    if (r >= cfg.r0()) return 0.0;
    const LogEval ev(cfg);
    if (r <= 0.5 * cfg.r0()) {
        // exact bubble sum, no cutoff arithmetic
        double acc = 0.0;
        const std::vector<double> mu = mu_schedule(cfg);
        for (int j = 0; j < cfg.k; ++j) {
            double term = std::pow(mu[j], -ev.s) * bubbles::u_profile(cfg.dim, r / mu[j]);
            if (cfg.include_v_envelope)
                term += mu[j] * mu[j] * std::pow(mu[j], -ev.s) *
                        bubbles::v_decay_envelope_radial(r / mu[j], cfg.dim, cfg.env_c);
            acc += term;
        }
        return acc;
    }
    const double lw = ev.ln_w_sum(0, cfg.k - 1, std::log(r));
    return lw == kNegInf ? 0.0 : std::exp(lw);
}

double tower_eval(const TowerConfig& cfg, const std::vector<double>& x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return tower_eval_radial(cfg, std::sqrt(r2));
}

AnnuliDecomposition annuli(const TowerConfig& cfg) {
    const std::vector<ShellLog> sl = shells_log(cfg);
    AnnuliDecomposition out;
    for (const ShellLog& sh : sl) {
        const double outer = std::exp(sh.ln_outer);
        const double inner = (sh.ln_inner == kNegInf) ? 0.0 : std::exp(sh.ln_inner);
        if (!(inner < outer))
            throw NonMonotoneScalesError("annuli: degenerate shell (scales too deep?)");
        out.shells.emplace_back(inner, outer);
        out.outer_edge_log10.push_back(sh.ln_outer / kLn10);
    }
    return out;
}

ScaledValue interaction_integral(const TowerConfig& cfg, int ell, double rel_tol) {
    require_ell(cfg, ell, "interaction_integral");
    const LogEval ev(cfg);
    const std::vector<ShellLog> sl = shells_log(cfg);
    const ShellLog& shell = sl[ell - 2]; // A_{ell-1}
    const int jm1 = ell - 2, jl = ell - 1;
    auto ln_f = [&](double ln_r) {
        const double la = ev.ln_w(jm1, ln_r);
        const double lb = ev.ln_w(jl, ln_r);
        if (la == kNegInf || lb == kNegInf) return kNegInf;
        return ev.p * la + lb;
    };
    // natural scale of A_{ell-1} is mu_{ell-1}
    return shell_integral_log(cfg, shell, ev.ln_mu[jm1], ln_f, rel_tol);
}

ScaledValue annulus_norm(const TowerConfig& cfg, int j, double q, int h, double rel_tol) {
    if (j < 1 || j > cfg.k || h < 1 || h > cfg.k)
        throw IndexOutOfRangeError("annulus_norm: index out of range");
    if (q < 1.0) throw std::invalid_argument("annulus_norm: q must be >= 1");
    const LogEval ev(cfg);
    const std::vector<ShellLog> sl = shells_log(cfg);
    const ShellLog& shell = sl[h - 1];
    auto ln_f = [&](double ln_r) {
        const double lw = ev.ln_w(j - 1, ln_r);
        return lw == kNegInf ? kNegInf : q * lw;
    };
    // dominant scale inside A_h: the shell's own bubble if j==h, else the
    // geometric midpoint of the shell
    const double ln_scale = (j == h) ? ev.ln_mu[j - 1]
                                     : 0.5 * (shell.ln_outer +
                                              ((shell.ln_inner == kNegInf) ? ev.ln_mu[cfg.k - 1]
                                                                           : shell.ln_inner));
    return shell_integral_log(cfg, shell, ln_scale, ln_f, rel_tol).pow(1.0 / q);
}

ScaledValue error_component_ii(const TowerConfig& cfg, int ell, double rel_tol) {
    if (cfg.k == 1) throw IndexOutOfRangeError("error_component_ii: no cross term for k = 1");
    require_ell(cfg, ell, "error_component_ii");
    const LogEval ev(cfg);
    const double q = 2.0 * cfg.dim / (cfg.dim + 2.0);
    const std::vector<ShellLog> sl = shells_log(cfg);
    auto ln_g = [&](double ln_r) {
        const double ln_s = ev.ln_w_sum(0, ell - 2, ln_r);
        const double ln_t = ev.ln_w(ell - 1, ln_r);
        return ln_cross_term(ln_s, ln_t, ev.p);
    };
    ScaledValue total;
    for (int h = 1; h <= cfg.k; ++h) {
        const ShellLog& shell = sl[h - 1];
        auto ln_f = [&](double ln_r) {
            const double lg = ln_g(ln_r);
            return lg == kNegInf ? kNegInf : q * lg;
        };
        const double ln_scale = ev.ln_mu[h - 1];
        total = total + shell_integral_log(cfg, shell, ln_scale, ln_f, rel_tol);
    }
    return total.pow(1.0 / q);
}

namespace {

// One bubble with cutoff, radial pieces in original coordinates.
struct CutBubble {
    const TowerConfig& cfg;
    double mu, s;
    double value(double r) const {
        return cfg.cutoff.chi(r) * std::pow(mu, -s) * bubbles::u_profile(cfg.dim, r / mu);
    }
    // (chi u)'(r) = chi' u + chi u' ; both addends are <= 0
    double deriv(double r) const {
        const double u = std::pow(mu, -s) * bubbles::u_profile(cfg.dim, r / mu);
        const double up = std::pow(mu, -s - 1.0) * bubbles::u_profile_d1(cfg.dim, r / mu);
        return cfg.cutoff.dchi(r) * u + cfg.cutoff.chi(r) * up;
    }
    double ln_abs_deriv(double r) const {
        // log-sum-exp of the two same-sign addends
        const double lu = -s * std::log(mu) + std::log(bubbles::u_profile(cfg.dim, r / mu));
        const double dchi = cfg.cutoff.dchi(r);
        const double la = (dchi == 0.0) ? kNegInf : std::log(-dchi) + lu;
        const double chi = cfg.cutoff.chi(r);
        const double upl = (-s - 1.0) * std::log(mu) +
                           std::log(-bubbles::u_profile_d1(cfg.dim, std::max(r / mu, 1e-300)));
        const double lb = (chi == 0.0 || r == 0.0) ? kNegInf : std::log(chi) + upl;
        if (la == kNegInf) return lb;
        if (lb == kNegInf) return la;
        const double m = std::max(la, lb);
        return m + std::log(std::exp(la - m) + std::exp(lb - m));
    }
};

} // namespace

double flat_energy_excess(const TowerConfig& cfg, double rel_tol) {
    const int N = cfg.dim;
    const LogEval ev(cfg);
    const double p1 = 2.0 * N / (N - 2.0); // p + 1
    const std::vector<double> mu = mu_log10(cfg);
    const double r0 = cfg.r0();
    const double area = quad::sphere_area(N);
    bool all_conv = true;

    // (a) per-bubble cutoff defect: D_j - K^{-N}/N, an integral over [r0/2, inf)
    // of pointwise-small differences (chi == 1 below r0/2 makes them vanish there).
    double d_defect = 0.0;
    for (int j = 0; j < cfg.k; ++j) {
        const double mu_j = std::pow(10.0, mu[j]);
        CutBubble cb{cfg, mu_j, ev.s};
        quad::QuadratureOptions opts;
        opts.rel_tol = std::min(rel_tol, 1e-10);
        opts.abs_tol = 1e-300;
        opts.breakpoints = {r0};
        auto w = [&](double r) {
            const double cu = cb.value(r);
            const double cup = cb.deriv(r);
            const double u = std::pow(mu_j, -ev.s) * bubbles::u_profile(N, r / mu_j);
            const double up = std::pow(mu_j, -ev.s - 1.0) * bubbles::u_profile_d1(N, r / mu_j);
            const double grad_diff = 0.5 * (cup * cup - up * up);
            const double pot_diff =
                (std::pow(cu, p1) - std::pow(u, p1)) / p1;
            return area * std::pow(r, N - 1) * (grad_diff - pot_diff);
        };
        const auto res = quad::integrate_1d(w, 0.5 * r0, quad::kInf, opts);
        all_conv = all_conv && res.converged;
        d_defect += res.value;
    }

    // (b) mass term (eps/2) int W^2, positive, shell-wise in log space
    const std::vector<ShellLog> sl = shells_log(cfg);
    ScaledValue mass;
    for (int h = 1; h <= cfg.k; ++h) {
        auto ln_f = [&](double ln_r) {
            const double lw = ev.ln_w_sum(0, cfg.k - 1, ln_r);
            return lw == kNegInf ? kNegInf : 2.0 * lw;
        };
        mass = mass + shell_integral_log(cfg, sl[h - 1], ev.ln_mu[h - 1], ln_f, rel_tol);
    }

    // (c) gradient cross terms: int (chi u_i)'(chi u_j)' over [0, r0], i < j;
    // both factors are nonpositive, so the product integrand is positive.
    ScaledValue grad_cross;
    for (int i = 0; i < cfg.k; ++i) {
        for (int j = i + 1; j < cfg.k; ++j) {
            CutBubble bi{cfg, std::pow(10.0, mu[i]), ev.s};
            CutBubble bj{cfg, std::pow(10.0, mu[j]), ev.s};
            ShellLog whole{kNegInf, std::log(r0)};
            auto ln_f = [&](double ln_r) {
                const double r = std::exp(ln_r);
                if (r >= r0 || r == 0.0) return kNegInf;
                return bi.ln_abs_deriv(r) + bj.ln_abs_deriv(r);
            };
            grad_cross =
                grad_cross + shell_integral_log(cfg, whole, mu[j] * kLn10, ln_f, rel_tol);
        }
    }

    // (d) nonlinear cross: 1/(p+1) int [(sum W)^{p+1} - sum W^{p+1}] via the
    // telescoped positive pieces (S_{l-1} + W_l)^{p+1} - S_{l-1}^{p+1} - W_l^{p+1}.
    ScaledValue pot_cross;
    for (int l = 2; l <= cfg.k; ++l) {
        for (int h = 1; h <= cfg.k; ++h) {
            auto ln_f = [&](double ln_r) {
                const double ln_s = ev.ln_w_sum(0, l - 2, ln_r);
                const double ln_t = ev.ln_w(l - 1, ln_r);
                return ln_cross_term(ln_s, ln_t, p1);
            };
            pot_cross = pot_cross + shell_integral_log(cfg, sl[h - 1], ev.ln_mu[h - 1], ln_f,
                                                       rel_tol);
        }
    }

    if (!all_conv)
        throw ToleranceNotReachedError("flat_energy: cutoff-defect quadrature not converged");

    const ScaledValue excess = ScaledValue::from_double(d_defect) + mass * (0.5 * cfg.eps) +
                               grad_cross - pot_cross * (1.0 / p1);
    return excess.to_double();
}

double flat_energy(const TowerConfig& cfg, double rel_tol) {
    const int N = cfg.dim;
    const double p1 = 2.0 * N / (N - 2.0);
    quad::RadialIntegrand f{[N, p1](double r) { return std::pow(bubbles::u_profile(N, r), p1); },
                            -2.0 * N};
    const auto kn = quad::integrate_radial(f, quad::RadialInterval::whole(), N, rel_tol);
    if (!kn.converged) throw ToleranceNotReachedError("flat_energy: K_N^{-N} not converged");
    return cfg.k * kn.value / N + flat_energy_excess(cfg, rel_tol);
}

void SweepSeries::validate() const {
    if (eps_grid.size() != values.size() || eps_grid.size() != ratios.size())
        throw std::invalid_argument("SweepSeries: ragged columns");
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (!(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("SweepSeries: eps grid must be strictly decreasing");
    for (const ScaledValue& v : values)
        if (!std::isfinite(v.mantissa))
            throw std::invalid_argument("SweepSeries: non-finite value");
}

namespace {

SlopeFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    if (n > 2) fit.stderr_slope = std::sqrt(ss / (n - 2) / sxx);
    return fit;
}

std::vector<double> log10_values(const std::vector<ScaledValue>& vs, const char* who) {
    std::vector<double> out;
    for (const ScaledValue& v : vs) {
        if (!(v.sign() > 0.0))
            throw NonPositiveValueError(std::string(who) + ": log-log fit needs positive values");
        out.push_back(v.log10_abs());
    }
    return out;
}

} // namespace

SlopeFit slope_fit(const SweepSeries& s) {
    s.validate();
    if (s.eps_grid.size() < 4)
        throw std::invalid_argument("slope_fit: need at least 4 points");
    return ols(log10_values(s.ratios, "slope_fit"), log10_values(s.values, "slope_fit"));
}

SlopeFit slope_fit_vs_eps(const SweepSeries& s) {
    s.validate();
    if (s.eps_grid.size() < 4)
        throw std::invalid_argument("slope_fit_vs_eps: need at least 4 points");
    std::vector<double> xs;
    for (double e : s.eps_grid) xs.push_back(std::log10(e));
    return ols(xs, log10_values(s.values, "slope_fit_vs_eps"));
}

SweepSeries trim_preasymptotic(const SweepSeries& s) {
    s.validate();
    const std::size_t n = s.eps_grid.size();
    const std::size_t drop = n / 4; // eps grid is decreasing: drop the head
    SweepSeries out;
    out.eps_grid.assign(s.eps_grid.begin() + drop, s.eps_grid.end());
    out.values.assign(s.values.begin() + drop, s.values.end());
    out.ratios.assign(s.ratios.begin() + drop, s.ratios.end());
    return out;
}

std::vector<double> log_grid(double eps_min, double eps_max, int points_per_decade) {
    if (!(eps_min > 0.0 && eps_min < eps_max))
        throw std::invalid_argument("log_grid: need 0 < eps_min < eps_max");
    const double l0 = std::log10(eps_max), l1 = std::log10(eps_min);
    const int n = std::max(2, static_cast<int>(std::round((l0 - l1) * points_per_decade)) + 1);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1));
    return out;
}

SweepSeries run_sweep(const TowerConfig& base, Quantity what, int ell,
                      const std::vector<double>& eps_grid, double rel_tol, bool serial) {
    SweepSeries out;
    out.eps_grid = eps_grid;
    out.values.resize(eps_grid.size());
    out.ratios.resize(eps_grid.size());
    parallel_for_indexed(
        eps_grid.size(),
        [&](std::size_t i) {
            TowerConfig cfg(base.dim, base.k, base.d, eps_grid[i], base.cutoff,
                            base.include_v_envelope, base.env_c);
            const std::vector<double> ml = mu_log10(cfg);
            out.ratios[i] = ScaledValue::from_log((ml[ell - 1] - ml[ell - 2]) * kLn10);
            switch (what) {
                case Quantity::interaction:
                    out.values[i] = interaction_integral(cfg, ell, rel_tol);
                    break;
                case Quantity::annulus_norm_critical:
                    out.values[i] = annulus_norm(cfg, ell, 2.0 * cfg.dim / (cfg.dim - 2.0),
                                                 ell - 1, rel_tol);
                    break;
                case Quantity::error_ii:
                    out.values[i] = error_component_ii(cfg, ell, rel_tol);
                    break;
            }
        },
        serial);
    out.validate();
    return out;
}

} // namespace yamabe::tower
