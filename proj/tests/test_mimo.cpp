#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bussgang/mimo.hpp"
#include "bussgang/scalar.hpp"

using namespace bussgang;
using namespace bussgang::mimo;
using linalg::ComplexMatrix;

namespace {

constexpr size_t kN = 100000;

ElementwiseDistortion all(const Nonlinearity& u, int m) {
    ElementwiseDistortion d;
    for (int i = 0; i < m; ++i) d.per_antenna.push_back(u);
    return d;
}

ComplexMatrix corr2(double off) {
    ComplexMatrix c(2, 2);
    c(0, 0) = c(1, 1) = 1.0;
    c(0, 1) = c(1, 0) = off;
    return c;
}

}  // namespace

TEST_CASE("gain matrix: identity map gives B = I") {
    const auto d = gain_matrix(all(Nonlinearity::Identity(), 2), corr2(0.5), RandomStream(1, 1), kN);
    CHECK(linalg::max_abs_diff(d.b, ComplexMatrix::identity(2)) < 0.02);
    CHECK(!d.used_pseudo_inverse);
    CHECK(d.c_eta.max_abs() < 0.02);
}

TEST_CASE("gain matrix: per-antenna third-order over diagonal C_x is diag(2 c_m)") {
    ComplexMatrix c(2, 2);
    c(0, 0) = 0.5;
    c(1, 1) = 2.0;
    const auto d = gain_matrix(all(Nonlinearity::ThirdOrder(), 2), c, RandomStream(2, 1), kN);
    CHECK(std::abs(d.b(0, 0) - cplx(1.0)) < 0.05);
    CHECK(std::abs(d.b(1, 1) - cplx(4.0)) < 0.15);
    CHECK(d.diagonality_defect < 0.05);
}

TEST_CASE("diagonal specialization: element-wise quantizer over correlated C_x") {
    const auto q = Nonlinearity::UniformQuantizer(1, 2.0);  // sign per component
    const auto d = gain_matrix(all(q, 2), corr2(0.9), RandomStream(3, 1), 4 * kN);
    // B should be diagonal despite the strong input correlation
    CHECK(d.diagonality_defect < 4.0 * d.std_error * 3.0);
    // and it matches the per-marginal scalar gains
    const auto diag = elementwise_gain_diag(all(q, 2), corr2(0.9), RandomStream(3, 2), 4 * kN);
    CHECK(std::abs(d.b(0, 0) - diag[0]) < 0.02);
    CHECK(std::abs(d.b(1, 1) - diag[1]) < 0.02);
}

TEST_CASE("elementwise_gain_diag: identity / third_order composition") {
    ElementwiseDistortion mix;
    mix.per_antenna.push_back(Nonlinearity::Identity());
    mix.per_antenna.push_back(Nonlinearity::ThirdOrder());
    const auto d = elementwise_gain_diag(mix, ComplexMatrix::identity(2), RandomStream(4, 1), kN);
    CHECK(std::abs(d[0] - cplx(1.0)) < 0.02);
    CHECK(std::abs(d[1] - cplx(2.0)) < 0.05);
}

TEST_CASE("distortion correlation: independent inputs decorrelate the distortion") {
    const auto d = distortion_correlation(all(Nonlinearity::ThirdOrder(), 2),
                                          ComplexMatrix::identity(2), RandomStream(5, 1), 4 * kN);
    CHECK(d.c_eta(0, 0).real() == doctest::Approx(2.0).epsilon(0.1));
    CHECK(d.c_eta(1, 1).real() == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::abs(d.c_eta(0, 1)) < 0.05);
    CHECK(d.psd_margin > -4.0 * d.std_error);
}

TEST_CASE("distortion correlation: near-identical inputs give near-identical distortion") {
    const auto d = distortion_correlation(all(Nonlinearity::ThirdOrder(), 2), corr2(0.99),
                                          RandomStream(6, 1), 4 * kN);
    const double d11 = d.c_eta(0, 0).real();
    const double d12 = std::abs(d.c_eta(0, 1));
    CHECK(d12 > 0.9 * d11);
    CHECK(d12 < 1.1 * d11);
}

TEST_CASE("orthogonality residual small for gaussian and non-gaussian sources") {
    const auto dg = distortion_correlation(all(Nonlinearity::SoftClipper(1.0), 2), corr2(0.7),
                                           RandomStream(7, 1), kN);
    CHECK(dg.orthogonality_residual < 4.0 * dg.std_error);

    ComplexMatrix h(2, 2);
    h(0, 0) = 1.0;
    h(0, 1) = 0.9;
    h(1, 0) = cplx(0.0, 0.8);
    h(1, 1) = 1.0;
    const auto dq = decompose_general(all(Nonlinearity::ThirdOrder(), 2).as_map(),
                                      sampling::SignalSource::ChannelQpsk(h), RandomStream(7, 2), kN);
    CHECK(dq.orthogonality_residual < 4.0 * dq.std_error + 1e-9);
}

TEST_CASE("generalized decomposition agrees with the gaussian path for gaussian input") {
    const auto map = all(Nonlinearity::ThirdOrder(), 2).as_map();
    const auto dg = gain_matrix(map, corr2(0.5), RandomStream(8, 1), 4 * kN);
    const auto dn = decompose_general(map, sampling::SignalSource::ComplexGaussianVector(corr2(0.5)),
                                      RandomStream(8, 2), 4 * kN);
    CHECK(linalg::max_abs_diff(dg.b, dn.b) < 0.1);
}

TEST_CASE("qpsk scalar source: constant modulus gives B = C_x, zero residual") {
    const auto map = all(Nonlinearity::ThirdOrder(), 1).as_map();
    const auto d = decompose_general(map, sampling::SignalSource::Qpsk(2.0), RandomStream(9, 1), kN);
    // |x|^2 = C_x deterministically, so z = C_x x and B = C_x = 2
    CHECK(std::abs(d.b(0, 0) - cplx(2.0)) < 1e-9);
    CHECK(d.orthogonality_residual < 1e-9);
}

TEST_CASE("qpsk through a mixing channel: B is detectably non-diagonal") {
    ComplexMatrix h(2, 2);
    h(0, 0) = 1.0;
    h(0, 1) = 0.9;
    h(1, 0) = 0.9;
    h(1, 1) = 1.0;
    const auto d = decompose_general(all(Nonlinearity::ThirdOrder(), 2).as_map(),
                                     sampling::SignalSource::ChannelQpsk(h), RandomStream(10, 1),
                                     4 * kN);
    CHECK(d.diagonality_defect > 10.0 * d.std_error);
}

TEST_CASE("rank-deficient C_x switches to the pseudo-inverse") {
    // C_x = v v^H embeds a 1-D gaussian in 2 dims
    ComplexMatrix c(2, 2);
    c(0, 0) = c(0, 1) = c(1, 0) = c(1, 1) = 1.0;
    const auto d = gain_matrix(all(Nonlinearity::ThirdOrder(), 2).as_map(), c, RandomStream(11, 1),
                               4 * kN);
    CHECK(d.used_pseudo_inverse);
    CHECK(d.orthogonality_residual < 4.0 * d.std_error);
    // both antennas see the same x ~ CN(0,1); B x must reproduce the scalar gain action:
    // row sums of B equal the scalar gain 2
    CHECK(std::abs(d.b(0, 0) + d.b(0, 1) - cplx(2.0)) < 0.1);
    CHECK(std::abs(d.b(1, 0) + d.b(1, 1) - cplx(2.0)) < 0.1);
}

TEST_CASE("M = 1 gain matrix matches the scalar engine bit-for-bit at C_x = 1") {
    const auto dm = gain_matrix(all(Nonlinearity::ThirdOrder(), 1), ComplexMatrix::identity(1),
                                RandomStream(12, 5), kN);
    const auto ds = scalar::decompose(Nonlinearity::ThirdOrder(), 1.0, RandomStream(12, 5), kN);
    CHECK(dm.b(0, 0).real() == ds.b.real());
    CHECK(dm.b(0, 0).imag() == ds.b.imag());
}

TEST_CASE("mimo theorem: trivial and random-coupling cases") {
    const auto map = all(Nonlinearity::UniformQuantizer(1, 2.0), 2).as_map();

    // C_xy = 0: both sides vanish
    auto rep = verify_mimo_theorem(map, corr2(0.5), corr2(0.3), ComplexMatrix(2, 2),
                                   RandomStream(13, 1), kN);
    CHECK(rep.lhs.max_abs() < 4.0 * rep.std_error);
    CHECK(rep.max_dev < 4.0 * rep.std_error);

    // y = x: reduces to the C_zx identity
    rep = verify_mimo_theorem(map, corr2(0.5), corr2(0.5), corr2(0.5), RandomStream(13, 2), kN);
    CHECK(rep.max_dev < 6.0 * rep.std_error);

    // seeded PSD joint covariance with off-diagonal coupling
    ComplexMatrix cxy(2, 2);
    cxy(0, 0) = 0.4;
    cxy(0, 1) = cplx(0.1, 0.2);
    cxy(1, 0) = cplx(-0.1, 0.1);
    cxy(1, 1) = 0.3;
    rep = verify_mimo_theorem(map, corr2(0.5), corr2(0.2), cxy, RandomStream(13, 3), 4 * kN);
    CHECK(rep.max_dev < 6.0 * rep.std_error);

    // non-PSD joint covariance is rejected
    ComplexMatrix too_big(2, 2);
    too_big(0, 0) = too_big(1, 1) = 2.0;
    CHECK_THROWS_AS(verify_mimo_theorem(map, corr2(0.0), corr2(0.0), too_big, RandomStream(13, 4), kN),
                    Error);
}
