#ifndef BUSSGANG_LINALG_HPP
#define BUSSGANG_LINALG_HPP

#include <vector>

#include "bussgang/types.hpp"

namespace bussgang::linalg {

// Dense row-major complex matrix. Sized for M <= 64; everything here is O(M^3)
// with small constants and no allocations beyond the obvious ones.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {
        if (r < 1 || c < 1) fail(errc::invalid_argument, "matrix dimensions must be >= 1");
    }

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int r, int c);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    ComplexMatrix adjoint() const;
    double max_abs() const;           // max_ij |A_ij|
    cplx trace() const;
    bool all_finite() const;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cplx s);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianCheckReport {
    double max_asymmetry = 0.0;  // max_ij |A_ij - conj(A_ji)|
    double min_eigenvalue = 0.0;
};

HermitianCheckReport check_hermitian(const ComplexMatrix& a);

// (A + A^H)/2
ComplexMatrix symmetrize(const ComplexMatrix& a);

// Cholesky factor L with L L^H = A + jitter*I. Throws NotHermitian / NotPSD.
// jitter < 0 requests the default ladder: 0, 1e-12*tr(A)/M, 1e-9*tr(A)/M.
ComplexMatrix hermitian_factor(const ComplexMatrix& a, double jitter = -1.0);

struct EigDecomposition {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // columns, unitary
};

// Cyclic Jacobi for Hermitian matrices; iteration cap 100 sweeps.
EigDecomposition eig_hermitian(const ComplexMatrix& a);

// Moore-Penrose pseudo-inverse via eigendecomposition; eigenvalues below
// rank_tol * lambda_max are treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double rank_tol = 1e-10);

constexpr double kHermitianRelTol = 1e-10;
constexpr double kDefaultRankTol = 1e-10;

}  // namespace bussgang::linalg

#endif
