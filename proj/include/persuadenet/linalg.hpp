#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace persuadenet {

// Dense square matrix, row major. Sized for the desk-scale solves in this
// library (supports of at most a few dozen nodes); no sparsity, no views.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> a_;
};

// LU factorization with partial pivoting. The determinant is tracked as the
// signed pivot product so integer-valued inputs get an exactly representable
// determinant for n small enough that |det| < 2^53.
struct LuResult {
    SquareMatrix lu;
    std::vector<std::size_t> perm;
    double det;
};

inline std::optional<LuResult> lu_factor(SquareMatrix m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(m(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(m(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return std::nullopt;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            std::swap(perm[piv], perm[col]);
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            m(r, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return LuResult{std::move(m), std::move(perm), det};
}

inline std::vector<double> lu_solve(const LuResult& f, const std::vector<double>& b) {
    const std::size_t n = f.lu.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

// Solves M x = b for an integer-valued M, treating |det| < 0.5 as singular.
// For 0/1 matrices the determinant is an exact integer, so the threshold is a
// bit-stable singularity test rather than a numerical guess.
inline std::optional<std::vector<double>> solve_integer_matrix(const SquareMatrix& m,
                                                               const std::vector<double>& b) {
    auto f = lu_factor(m);
    if (!f || std::fabs(f->det) < 0.5) return std::nullopt;
    return lu_solve(*f, b);
}

}  // namespace persuadenet
