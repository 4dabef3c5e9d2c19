#include "bussgang/mimo.hpp"

#include <cmath>

#include "bussgang/scalar.hpp"

namespace bussgang::mimo {

using linalg::ComplexMatrix;

VectorMap ElementwiseDistortion::as_map() const {
    std::vector<Nonlinearity> branches = per_antenna;
    return [branches](std::span<const cplx> in, std::span<cplx> out) {
        for (size_t m = 0; m < branches.size(); ++m) {
            const Nonlinearity& u = branches[m];
            out[m] = u.domain() == Domain::real_domain ? cplx(u.apply_real(in[m].real()))
                                                       : u.apply(in[m]);
        }
    };
}

namespace {

struct Moments {
    ComplexMatrix c_x_hat;
    ComplexMatrix c_z_hat;
    ComplexMatrix c_zx_hat;
    double se_zx_max = 0.0;
    size_t n = 0;
};

Moments accumulate(const VectorMap& dist, const std::vector<cplx>& x, int m) {
    const size_t n = x.size() / m;
    if (n < 1) fail(errc::invalid_argument, "mimo: empty sample");
    Moments mo;
    mo.n = n;
    mo.c_x_hat = ComplexMatrix(m, m);
    mo.c_z_hat = ComplexMatrix(m, m);
    mo.c_zx_hat = ComplexMatrix(m, m);
    std::vector<double> sum2_zx(static_cast<size_t>(m) * m, 0.0);
    std::vector<cplx> z(m);
    for (size_t i = 0; i < n; ++i) {
        const cplx* xi = x.data() + i * static_cast<size_t>(m);
        dist(std::span<const cplx>(xi, m), std::span<cplx>(z));
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                const cplx zx = z[r] * std::conj(xi[c]);
                mo.c_zx_hat(r, c) += zx;
                sum2_zx[static_cast<size_t>(r) * m + c] += std::norm(zx);
                mo.c_x_hat(r, c) += xi[r] * std::conj(xi[c]);
                mo.c_z_hat(r, c) += z[r] * std::conj(z[c]);
            }
    }
    const double dn = static_cast<double>(n);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            mo.c_x_hat(r, c) /= dn;
            mo.c_z_hat(r, c) /= dn;
            mo.c_zx_hat(r, c) /= dn;
            const double var =
                std::max(0.0, sum2_zx[static_cast<size_t>(r) * m + c] / dn -
                                  std::norm(mo.c_zx_hat(r, c)));
            mo.se_zx_max = std::max(mo.se_zx_max, std::sqrt(var / dn));
        }
    return mo;
}

MimoDecomposition finish(Moments mo, const ComplexMatrix& c_x_used, int m) {
    MimoDecomposition d;
    d.n_samples = mo.n;
    d.c_x = c_x_used;
    d.c_x_hat = std::move(mo.c_x_hat);
    d.c_z_hat = std::move(mo.c_z_hat);
    d.c_zx_hat = std::move(mo.c_zx_hat);
    d.std_error = mo.se_zx_max;

    const linalg::EigDecomposition e = linalg::eig_hermitian(c_x_used);
    const double lmax = e.eigenvalues.empty() ? 0.0 : std::abs(e.eigenvalues.front());
    double lmin = lmax;
    for (double l : e.eigenvalues) lmin = std::min(lmin, l);
    d.used_pseudo_inverse = lmin < linalg::kDefaultRankTol * lmax;
    const ComplexMatrix inv = linalg::pseudo_inverse(c_x_used);
    d.b = linalg::multiply(d.c_zx_hat, inv);

    // sample correlation of the residual eta = z - B x; equals
    // C_z - B C_x B^H in expectation but its estimation noise scales with the
    // distortion power instead of the output power
    const ComplexMatrix bx = linalg::multiply(d.b, d.c_zx_hat.adjoint());
    ComplexMatrix resid = linalg::subtract(d.c_z_hat, linalg::add(bx, bx.adjoint()));
    resid = linalg::add(resid,
                        linalg::multiply(linalg::multiply(d.b, d.c_x_hat), d.b.adjoint()));
    d.c_eta = linalg::symmetrize(resid);
    d.psd_margin = linalg::eig_hermitian(d.c_eta).eigenvalues.back();
    d.orthogonality_residual =
        linalg::max_abs_diff(d.c_zx_hat, linalg::multiply(d.b, d.c_x_hat));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            if (r != c) d.diagonality_defect = std::max(d.diagonality_defect, std::abs(d.b(r, c)));
    return d;
}

}  // namespace

MimoDecomposition gain_matrix(const VectorMap& dist, const ComplexMatrix& c_x, RandomStream stream,
                              size_t n) {
    if (n < 10000) fail(errc::invalid_argument, "gain_matrix: sample count too small");
    const int m = c_x.rows;
    const std::vector<cplx> x = sampling::draw_complex_gaussian_vector(stream, c_x, n);
    return finish(accumulate(dist, x, m), c_x, m);
}

MimoDecomposition gain_matrix(const ElementwiseDistortion& dist, const ComplexMatrix& c_x,
                              RandomStream stream, size_t n) {
    if (dist.dim() != c_x.rows) fail(errc::domain_mismatch, "gain_matrix: branch count != dim(C_x)");
    return gain_matrix(dist.as_map(), c_x, stream, n);
}

std::vector<cplx> elementwise_gain_diag(const ElementwiseDistortion& dist, const ComplexMatrix& c_x,
                                        RandomStream stream, size_t n) {
    if (dist.dim() != c_x.rows)
        fail(errc::domain_mismatch, "elementwise_gain_diag: branch count != dim(C_x)");
    std::vector<cplx> d(dist.per_antenna.size());
    for (size_t m = 0; m < dist.per_antenna.size(); ++m) {
        const double c_m = c_x(static_cast<int>(m), static_cast<int>(m)).real();
        if (!(c_m > 0.0)) fail(errc::invalid_argument, "elementwise_gain_diag: diagonal power <= 0");
        d[m] = scalar::gain_correlation(dist.per_antenna[m], c_m,
                                        stream.substream(static_cast<uint64_t>(m)), n)
                   .value;
    }
    return d;
}

MimoDecomposition distortion_correlation(const VectorMap& dist, const ComplexMatrix& c_x,
                                         RandomStream stream, size_t n) {
    return gain_matrix(dist, c_x, stream, n);
}

MimoDecomposition distortion_correlation(const ElementwiseDistortion& dist,
                                         const ComplexMatrix& c_x, RandomStream stream, size_t n) {
    return gain_matrix(dist, c_x, stream, n);
}

MimoDecomposition decompose_general(const VectorMap& dist, const sampling::SignalSource& source,
                                    RandomStream stream, size_t n) {
    if (n < 10000) fail(errc::invalid_argument, "decompose_general: sample count too small");
    const int m = source.dim();
    const std::vector<cplx> x = source.draw(stream, n);
    Moments mo = accumulate(dist, x, m);
    const ComplexMatrix c_x_hat = linalg::symmetrize(mo.c_x_hat);
    return finish(std::move(mo), c_x_hat, m);
}

MimoTheoremReport verify_mimo_theorem(const VectorMap& dist, const ComplexMatrix& c_x,
                                      const ComplexMatrix& c_y, const ComplexMatrix& c_xy,
                                      RandomStream stream, size_t n) {
    if (n < 10000) fail(errc::invalid_argument, "verify_mimo_theorem: sample count too small");
    const int m = c_x.rows;
    if (c_y.rows != m || c_xy.rows != m || c_xy.cols != m)
        fail(errc::invalid_argument, "verify_mimo_theorem: dimension mismatch");

    ComplexMatrix joint(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            joint(i, j) = c_x(i, j);
            joint(i, m + j) = c_xy(i, j);
            joint(m + i, j) = std::conj(c_xy(j, i));
            joint(m + i, m + j) = c_y(i, j);
        }
    const linalg::EigDecomposition je = linalg::eig_hermitian(joint);
    const double jmax = std::abs(je.eigenvalues.front());
    if (je.eigenvalues.back() < -1e-9 * std::max(1.0, jmax))
        fail(errc::joint_covariance_not_psd, "verify_mimo_theorem: joint covariance is not PSD");

    const std::vector<cplx> xy = sampling::draw_complex_gaussian_vector(stream, joint, n);
    ComplexMatrix sum_zy(m, m), sum_zx(m, m);
    std::vector<double> sum2_zy(static_cast<size_t>(m) * m, 0.0);
    std::vector<cplx> z(m);
    for (size_t i = 0; i < n; ++i) {
        const cplx* xi = xy.data() + i * static_cast<size_t>(2 * m);
        const cplx* yi = xi + m;
        dist(std::span<const cplx>(xi, m), std::span<cplx>(z));
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                const cplx zy = z[r] * std::conj(yi[c]);
                sum_zy(r, c) += zy;
                sum2_zy[static_cast<size_t>(r) * m + c] += std::norm(zy);
                sum_zx(r, c) += z[r] * std::conj(xi[c]);
            }
    }
    MimoTheoremReport rep;
    rep.n_samples = n;
    rep.lhs = linalg::scale(sum_zy, 1.0 / static_cast<double>(n));
    const ComplexMatrix c_zx_hat = linalg::scale(sum_zx, 1.0 / static_cast<double>(n));
    rep.rhs = linalg::multiply(linalg::multiply(c_zx_hat, linalg::pseudo_inverse(c_x)), c_xy);
    rep.max_dev = linalg::max_abs_diff(rep.lhs, rep.rhs);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            const double var = std::max(
                0.0, sum2_zy[static_cast<size_t>(r) * m + c] / n - std::norm(rep.lhs(r, c)));
            rep.std_error = std::max(rep.std_error, std::sqrt(var / n));
        }
    return rep;
}

}  // namespace bussgang::mimo
