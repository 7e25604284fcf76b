#include "yamabe/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace yamabe::quad {

namespace {

// Gauss-Kronrod 7/15 on [-1,1] (QUADPACK dqk15 constants).
constexpr int kKron = 8; // nonnegative abscissae
constexpr double kXgk[kKron] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[kKron] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
    double a, b;
    double value, err;
    long index;
};

struct NeumaierSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double total() const { return s + c; }
};

// One GK15 evaluation on [a,b]; err = |K15 - G7|.
void gk15(const std::function<double(double)>& w, double a, double b, double& value,
          double& err, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < kKron; ++i) {
        const double x = kXgk[i];
        double fsum;
        if (x == 0.0) {
            fsum = w(c);
            evals += 1;
        } else {
            fsum = w(c - h * x) + w(c + h * x);
            evals += 2;
        }
        kron += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    value = kron * h;
    err = std::fabs((kron - gauss) * h);
}

// Initial panel edges: caller breakpoints plus a geometric ladder so that
// integrands peaked near scale_hint inside a wide interval are seen at once.
std::vector<double> initial_edges(double a, double b, const QuadratureOptions& opts) {
    std::vector<double> edges;
    edges.push_back(a);
    const double scale = opts.scale_hint > 0 ? opts.scale_hint : 1.0;
    double start = (a > 0.0) ? a : scale / 16.0;
    if (a == 0.0 && start < b) edges.push_back(start);
    if (start < b && b / start > 16.0) {
        double ratio = 2.0;
        const double n_doublings = std::log2(b / start);
        if (n_doublings > 256.0) ratio = std::pow(b / start, 1.0 / 256.0);
        for (double r = start * ratio; r < b * 0.999999; r *= ratio) edges.push_back(r);
    }
    for (double bp : opts.breakpoints)
        if (bp > a && bp < b) edges.push_back(bp);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

QuadratureResult adapt(const std::function<double(double)>& w, std::vector<double> edges,
                       const QuadratureOptions& opts) {
    std::vector<Panel> panels;
    long evals = 0;
    long next_index = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p{edges[i], edges[i + 1], 0.0, 0.0, next_index++};
        gk15(w, p.a, p.b, p.value, p.err, evals);
        panels.push_back(p);
    }

    auto totals = [&panels]() {
        NeumaierSum v, e;
        for (const Panel& p : panels) {
            v.add(p.value);
            e.add(p.err);
        }
        return std::pair<double, double>(v.total(), e.total());
    };

    QuadratureResult res;
    while (true) {
        auto [value, err] = totals();
        if (err <= opts.rel_tol * std::fabs(value) + opts.abs_tol) {
            res.converged = true;
            break;
        }
        if (static_cast<long>(panels.size()) >= opts.max_panels) {
            res.converged = false;
            break;
        }
        // max-error-first, smallest-index tie break: reproducible refinement order
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].err > panels[worst].err ||
                (panels[i].err == panels[worst].err && panels[i].index < panels[worst].index))
                worst = i;
        }
        Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) { // panel no longer splittable in doubles
            res.converged = false;
            break;
        }
        Panel left{p.a, mid, 0.0, 0.0, next_index++};
        Panel right{mid, p.b, 0.0, 0.0, next_index++};
        gk15(w, left.a, left.b, left.value, left.err, evals);
        gk15(w, right.a, right.b, right.value, right.err, evals);
        panels[worst] = left;
        panels.push_back(right);
    }

    // deterministic final accumulation in interval order
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    NeumaierSum v, e;
    for (const Panel& p : panels) {
        v.add(p.value);
        e.add(p.err);
    }
    res.value = v.total();
    res.abs_error_estimate = e.total();
    res.evaluations = evals;
    return res;
}

// Map [a, inf) to t in [0,1) via r = a + t/(1-t).
QuadratureResult integrate_tail(const std::function<double(double)>& w, double a,
                                const QuadratureOptions& opts) {
    const double scale = opts.scale_hint > 0 ? opts.scale_hint : 1.0;
    auto wt = [&w, a](double t) {
        const double om = 1.0 - t;
        const double r = a + t / om;
        return w(r) / (om * om);
    };
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int i = -4; i <= 40; ++i) {
        const double dr = std::ldexp(scale, i); // r - a
        const double t = dr / (1.0 + dr);
        if (t > 0.0 && t < 1.0) edges.push_back(t);
    }
    for (double bp : opts.breakpoints) {
        if (bp > a) {
            const double t = (bp - a) / (1.0 + bp - a);
            if (t > 0.0 && t < 1.0) edges.push_back(t);
        }
    }
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    QuadratureOptions inner = opts;
    inner.breakpoints.clear();
    return adapt(wt, edges, inner);
}

} // namespace

double sphere_area(int dim) {
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double sphere_surface_area(int n) { return sphere_area(n + 1); }

double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double sphere_monomial_average(int dim, const std::vector<double>& beta) {
    // integral over S^{dim-1} of prod |n_i|^{b_i} = 2 prod Gamma((b_i+1)/2) / Gamma(sum (b_i+1)/2)
    double log_num = std::log(2.0);
    double half_sum = 0.0;
    int provided = static_cast<int>(beta.size());
    for (int i = 0; i < dim; ++i) {
        const double bi = (i < provided) ? beta[i] : 0.0;
        log_num += std::lgamma(0.5 * (bi + 1.0));
        half_sum += 0.5 * (bi + 1.0);
    }
    const double integral = std::exp(log_num - std::lgamma(half_sum));
    return integral / sphere_area(dim);
}

QuadratureResult integrate_1d(const std::function<double(double)>& w, double a, double b,
                              const QuadratureOptions& opts) {
    if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0))
        throw std::invalid_argument("integrate_1d: rel_tol must lie in (0,1)");
    if (b == kInf) return integrate_tail(w, a, opts);
    return adapt(w, initial_edges(a, b, opts), opts);
}

LogQuadratureResult integrate_1d_log(const std::function<double(double)>& log_w, double a,
                                     double b, const QuadratureOptions& opts) {
    // Probe the initial panel edges (plus midpoints) for the magnitude offset.
    std::vector<double> probes;
    if (b == kInf) {
        const double scale = opts.scale_hint > 0 ? opts.scale_hint : 1.0;
        for (int i = -4; i <= 40; ++i) probes.push_back(a + std::ldexp(scale, i));
    } else {
        probes = initial_edges(a, b, opts);
        std::vector<double> mids;
        for (std::size_t i = 0; i + 1 < probes.size(); ++i)
            mids.push_back(0.5 * (probes[i] + probes[i + 1]));
        probes.insert(probes.end(), mids.begin(), mids.end());
    }
    double offset = -std::numeric_limits<double>::infinity();
    for (double r : probes) {
        if (r <= a || (b != kInf && r >= b)) continue;
        offset = std::max(offset, log_w(r));
    }
    LogQuadratureResult out;
    if (offset == -std::numeric_limits<double>::infinity()) {
        // integrand vanishes at every probe; fall back to direct evaluation
        QuadratureResult qr =
            integrate_1d([&log_w](double r) { return std::exp(log_w(r)); }, a, b, opts);
        out.value = ScaledValue::from_double(qr.value);
        out.rel_error_estimate =
            qr.value != 0.0 ? qr.abs_error_estimate / std::fabs(qr.value) : 0.0;
        out.evaluations = qr.evaluations;
        out.converged = qr.converged;
        return out;
    }
    auto w = [&log_w, offset](double r) { return std::exp(log_w(r) - offset); };
    QuadratureResult qr = integrate_1d(w, a, b, opts);
    out.value = ScaledValue::from_log(offset + std::log(std::fabs(qr.value)),
                                      qr.value >= 0 ? 1.0 : -1.0);
    if (qr.value == 0.0) out.value = ScaledValue{};
    out.rel_error_estimate = qr.value != 0.0 ? qr.abs_error_estimate / std::fabs(qr.value) : 0.0;
    out.evaluations = qr.evaluations;
    out.converged = qr.converged;
    return out;
}

QuadratureResult integrate_radial(const RadialIntegrand& f, const RadialInterval& dom, int dim,
                                  double rel_tol) {
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    return integrate_radial(f, dom, dim, opts);
}

QuadratureResult integrate_radial(const RadialIntegrand& f, const RadialInterval& dom, int dim,
                                  const QuadratureOptions& opts) {
    if (dim < 2) throw std::invalid_argument("integrate_radial: dim must be >= 2");
    if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0))
        throw std::invalid_argument("integrate_radial: rel_tol must lie in (0,1)");
    if (dom.unbounded() && !(f.decay_exponent + dim < 0.0))
        throw NonIntegrableError("integrate_radial: decay exponent " +
                                 std::to_string(f.decay_exponent) + " + N fails the tail test");
    const double area = sphere_area(dim);
    auto w = [&f, dim, area](double r) { return area * std::pow(r, dim - 1) * f.eval(r); };
    return integrate_1d(w, dom.inner, dom.outer, opts);
}

double lq_norm_shell(const std::function<double(double)>& radial_profile,
                     const RadialInterval& dom, double q, int dim, double rel_tol) {
    if (q < 1.0) throw std::invalid_argument("lq_norm_shell: q must be >= 1");
    const double area = sphere_area(dim);
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    auto w = [&radial_profile, dim, q, area](double r) {
        return area * std::pow(r, dim - 1) * std::pow(std::fabs(radial_profile(r)), q);
    };
    QuadratureResult qr = integrate_1d(w, dom.inner, dom.outer, opts);
    return std::pow(qr.value, 1.0 / q);
}

double lq_norm_shell_monomial(const std::vector<int>& alpha,
                              const std::function<double(double)>& radial_profile,
                              const RadialInterval& dom, double q, int dim, double rel_tol) {
    if (q < 1.0) throw std::invalid_argument("lq_norm_shell_monomial: q must be >= 1");
    int total = 0;
    std::vector<double> beta;
    for (int ai : alpha) {
        beta.push_back(q * ai);
        total += ai;
    }
    const double angular = sphere_monomial_average(dim, beta) * sphere_area(dim);
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    auto w = [&radial_profile, dim, q, total](double r) {
        return std::pow(r, dim - 1 + q * total) * std::pow(std::fabs(radial_profile(r)), q);
    };
    QuadratureResult qr = integrate_1d(w, dom.inner, dom.outer, opts);
    return std::pow(angular * qr.value, 1.0 / q);
}

double moment_integral(const RadialIntegrand& g, const MultiIndex& alpha, int dim,
                       double rel_tol) {
    int total = 0;
    for (int ai : alpha) {
        if (ai < 0) throw std::invalid_argument("moment_integral: negative exponent");
        if (ai % 2 == 1) return 0.0; // parity: exact zero, no quadrature
        total += ai;
    }
    if (static_cast<int>(alpha.size()) > dim)
        throw std::invalid_argument("moment_integral: multi-index longer than dimension");
    if (total > 4) throw UnsupportedDegreeError("moment_integral: |alpha| > 4 unsupported");
    std::vector<double> beta(alpha.begin(), alpha.end());
    const double angular = sphere_monomial_average(dim, beta) * sphere_area(dim);
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    auto w = [&g, dim, total](double r) { return std::pow(r, dim - 1 + total) * g.eval(r); };
    QuadratureResult qr = integrate_1d(w, 0.0, kInf, opts);
    return angular * qr.value;
}

} // namespace yamabe::quad
