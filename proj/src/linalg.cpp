#include "bussgang/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bussgang::linalg {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int r, int c) { return ComplexMatrix(r, c); }

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

double ComplexMatrix::max_abs() const {
    double mx = 0.0;
    for (const cplx& v : a) mx = std::max(mx, std::abs(v));
    return mx;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
    return t;
}

bool ComplexMatrix::all_finite() const {
    for (const cplx& v : a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) fail(errc::invalid_argument, "multiply: dimension mismatch");
    ComplexMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) fail(errc::invalid_argument, "add: dimension mismatch");
    ComplexMatrix c = a;
    for (size_t i = 0; i < c.a.size(); ++i) c.a[i] += b.a[i];
    return c;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) fail(errc::invalid_argument, "subtract: dimension mismatch");
    ComplexMatrix c = a;
    for (size_t i = 0; i < c.a.size(); ++i) c.a[i] -= b.a[i];
    return c;
}

ComplexMatrix scale(const ComplexMatrix& a, cplx s) {
    ComplexMatrix c = a;
    for (cplx& v : c.a) v *= s;
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return subtract(a, b).max_abs();
}

ComplexMatrix symmetrize(const ComplexMatrix& a) {
    if (!a.square()) fail(errc::invalid_argument, "symmetrize: matrix must be square");
    ComplexMatrix s(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) s(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return s;
}

HermitianCheckReport check_hermitian(const ComplexMatrix& a) {
    if (!a.square()) fail(errc::invalid_argument, "check_hermitian: matrix must be square");
    HermitianCheckReport rep;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            rep.max_asymmetry = std::max(rep.max_asymmetry, std::abs(a(i, j) - std::conj(a(j, i))));
    return rep;
}

namespace {

void require_hermitian(const ComplexMatrix& a, const char* where) {
    if (!a.square()) fail(errc::not_hermitian, std::string(where) + ": matrix not square");
    if (!a.all_finite()) fail(errc::invalid_argument, std::string(where) + ": non-finite entries");
    const double tol = kHermitianRelTol * std::max(1.0, a.max_abs());
    if (check_hermitian(a).max_asymmetry > tol)
        fail(errc::not_hermitian, std::string(where) + ": matrix is not Hermitian within tolerance");
}

// Plain complex Cholesky; returns false if a pivot is non-positive.
bool try_cholesky(const ComplexMatrix& a, double jitter, ComplexMatrix& l) {
    const int n = a.rows;
    l = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = a(j, j).real() + jitter;
        for (int k = 0; k < j; ++k) diag -= std::norm(l(j, k));
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            // allow exact zero pivot for rank-deficient PSD input (zero column)
            if (std::abs(diag) <= 1e-14 * std::max(1.0, a.max_abs())) {
                bool column_zero = true;
                for (int i = j + 1; i < n && column_zero; ++i) {
                    cplx v = a(i, j);
                    for (int k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
                    if (std::abs(v) > 1e-10 * std::max(1.0, a.max_abs())) column_zero = false;
                }
                if (column_zero) continue;  // leave row j of L at zero
            }
            return false;
        }
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            cplx v = a(i, j);
            for (int k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
            l(i, j) = v / l(j, j).real();
        }
    }
    return true;
}

}  // namespace

ComplexMatrix hermitian_factor(const ComplexMatrix& a, double jitter) {
    require_hermitian(a, "hermitian_factor");
    const int n = a.rows;
    ComplexMatrix l;
    if (jitter >= 0.0) {
        if (try_cholesky(a, jitter, l)) return l;
        fail(errc::not_psd, "hermitian_factor: factorization failed at requested jitter");
    }
    const double base = a.trace().real() / n;
    for (double j : {0.0, 1e-12 * base, 1e-9 * base}) {
        if (try_cholesky(a, j, l)) return l;
    }
    fail(errc::not_psd, "hermitian_factor: matrix is not PSD (jitter ladder exhausted)");
}

EigDecomposition eig_hermitian(const ComplexMatrix& a_in) {
    require_hermitian(a_in, "eig_hermitian");
    const int n = a_in.rows;
    ComplexMatrix a = symmetrize(a_in);
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, a.max_abs());

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };

    const int max_sweeps = 100;
    int sweep = 0;
    while (off_norm() > 1e-13 * scale) {
        if (++sweep > max_sweeps) fail(errc::no_convergence, "eig_hermitian: Jacobi sweep cap exceeded");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double b = std::abs(a(p, q));
                if (b <= 1e-300) continue;
                const cplx u = a(p, q) / b;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * b);
                double t;
                if (tau == 0.0)
                    t = 1.0;
                else
                    t = (tau > 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G is identity except G(p,p)=c, G(p,q)=s*u, G(q,p)=-s*conj(u), G(q,q)=c.
                // A <- G^H A G, V <- V G.
                for (int k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(u) * akq;
                    a(k, q) = s * u * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * u * aqk;
                    a(q, k) = s * std::conj(u) * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(u) * vkq;
                    v(k, q) = s * u * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double rank_tol) {
    EigDecomposition e = eig_hermitian(a);
    const int n = a.rows;
    double lmax = 0.0;
    for (double l : e.eigenvalues) lmax = std::max(lmax, std::abs(l));
    const double cut = rank_tol * lmax;
    ComplexMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(e.eigenvalues[k]) <= cut) continue;
        const double inv = 1.0 / e.eigenvalues[k];
        for (int i = 0; i < n; ++i) {
            const cplx vik = e.eigenvectors(i, k) * inv;
            for (int j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.eigenvectors(j, k));
        }
    }
    return out;
}

}  // namespace bussgang::linalg
