#include "nikstar/linalg.hpp"

#include "nikstar/errors.hpp"

#include <numeric>

namespace nikstar {

using boost::multiprecision::abs;

std::vector<Real> solve_full_pivot(Matrix A, std::vector<Real> b) {
    const std::size_t n = b.size();
    if (A.size() != n) throw InputError("solve_full_pivot: dimension mismatch");
    if (n == 0) return {};
    std::vector<std::size_t> col(n);
    std::iota(col.begin(), col.end(), 0);

    Real scale = 0;
    for (const auto& row : A)
        for (const auto& v : row) scale = std::max(scale, Real(abs(v)));
    if (scale == 0) throw ConvergenceError("solve_full_pivot: zero matrix");
    const Real negligible = scale * pow2_neg(static_cast<int>(bits_of(scale)) - 8);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k, pc = k;
        Real best = -1;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (abs(A[i][j]) > best) best = abs(A[i][j]), pr = i, pc = j;
        if (!(best > negligible)) throw ConvergenceError("solve_full_pivot: matrix is numerically singular");
        std::swap(A[k], A[pr]);
        std::swap(b[k], b[pr]);
        if (pc != k) {
            for (auto& row : A) std::swap(row[k], row[pc]);
            std::swap(col[k], col[pc]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (A[i][k] == 0) continue;
            const Real f = A[i][k] / A[k][k];
            for (std::size_t j = k + 1; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
            A[i][k] = 0;
        }
    }
    std::vector<Real> y(n);
    for (std::size_t k = n; k-- > 0;) {
        Real s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * y[j];
        y[k] = s / A[k][k];
    }
    std::vector<Real> x(n);
    for (std::size_t k = 0; k < n; ++k) x[col[k]] = y[k];
    return x;
}

}  // namespace nikstar
