#include "yamabe/smallmat.hpp"

#include <algorithm>
#include <cmath>

namespace yamabe {

namespace {

// Row-pivoted LU decomposition in place; returns permutation sign, fills perm.
double lu_decompose(SquareMat& m, std::vector<int>& perm) {
    const int n = m.n;
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double sign = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(m(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::fabs(m(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) throw std::runtime_error("smallmat: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.a[piv * n + j], m.a[col * n + j]);
            std::swap(perm[piv], perm[col]);
            sign = -sign;
        }
        const double d = m(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = m(r, col) / d;
            m(r, col) = f;
            for (int j = col + 1; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return sign;
}

} // namespace

SquareMat inverse(const SquareMat& m) {
    const int n = m.n;
    SquareMat lu = m;
    std::vector<int> perm;
    lu_decompose(lu, perm);
    SquareMat inv(n);
    std::vector<double> x(n), b(n);
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) b[i] = (perm[i] == col) ? 1.0 : 0.0;
        for (int i = 0; i < n; ++i) {
            double s = b[i];
            for (int j = 0; j < i; ++j) s -= lu(i, j) * x[j];
            x[i] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = x[i];
            for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
            x[i] = s / lu(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
}

double determinant(const SquareMat& m) {
    SquareMat lu = m;
    std::vector<int> perm;
    double det;
    try {
        det = lu_decompose(lu, perm);
    } catch (const std::runtime_error&) {
        return 0.0;
    }
    for (int i = 0; i < lu.n; ++i) det *= lu(i, i);
    return det;
}

SquareMat cholesky(const SquareMat& m) {
    const int n = m.n;
    SquareMat l(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw std::runtime_error("smallmat: matrix not SPD");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

std::vector<double> symmetric_eigenvalues(const SquareMat& m) {
    const int n = m.n;
    SquareMat a = m;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace yamabe
