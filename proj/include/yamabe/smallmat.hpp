#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace yamabe {

using Vec = std::vector<double>;

// Dense square matrix, row-major, sized for chart dimensions (n <= ~10).
struct SquareMat {
    int n = 0;
    std::vector<double> a;

    SquareMat() = default;
    explicit SquareMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static SquareMat identity(int dim) {
        SquareMat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    SquareMat transposed() const {
        SquareMat t(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend SquareMat operator*(const SquareMat& x, const SquareMat& y) {
        SquareMat r(x.n);
        for (int i = 0; i < x.n; ++i)
            for (int k = 0; k < x.n; ++k) {
                const double v = x(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < x.n; ++j) r(i, j) += v * y(k, j);
            }
        return r;
    }
};

// LU with partial pivoting. Throws on (numerically) singular input.
SquareMat inverse(const SquareMat& m);
double determinant(const SquareMat& m);

// Cholesky factor L (lower) of an SPD matrix: m = L L^T.
SquareMat cholesky(const SquareMat& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const SquareMat& m);

// Rank-4 tensor over a single n-dimensional index space, row-major.
struct Tensor4 {
    int n = 0;
    std::vector<double> a;

    Tensor4() = default;
    explicit Tensor4(int dim)
        : n(dim), a(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
};

struct Tensor3 {
    int n = 0;
    std::vector<double> a;

    Tensor3() = default;
    explicit Tensor3(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

    double& operator()(int i, int j, int k) {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    double operator()(int i, int j, int k) const {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

} // namespace yamabe
