#include "bussgang/scalar.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bussgang/sampling.hpp"

namespace bussgang::scalar {

namespace {

// Real-domain nonlinearities see x ~ N(0, C_x) carried in the real part;
// complex-domain ones see x ~ CN(0, C_x).
std::vector<cplx> draw_input(const Nonlinearity& u, double c_x, RandomStream& stream, size_t n) {
    if (u.domain() == Domain::real_domain) {
        std::vector<double> r = sampling::draw_real_gaussian(stream, c_x, n);
        std::vector<cplx> out(n);
        for (size_t i = 0; i < n; ++i) out[i] = r[i];
        return out;
    }
    return sampling::draw_complex_gaussian(stream, c_x, n);
}

cplx eval(const Nonlinearity& u, cplx x) {
    return u.domain() == Domain::real_domain ? cplx(u.apply_real(x.real())) : u.apply(x);
}

void require_n(size_t n, size_t min_n, const char* where) {
    if (n < min_n) fail(errc::invalid_argument, std::string(where) + ": sample count too small");
}

}  // namespace

GainEstimate gain_closed_form(const Nonlinearity& u, double c_x) {
    GainEstimate g;
    g.value = u.closed_form_gain(c_x);
    g.method = "closed_form";
    return g;
}

GainEstimate gain_correlation(const Nonlinearity& u, double c_x, RandomStream stream, size_t n) {
    require_n(n, 1000, "gain_correlation");
    if (!(c_x > 0.0)) fail(errc::invalid_argument, "gain_correlation: C_x must be > 0");
    const std::vector<cplx> x = draw_input(u, c_x, stream, n);
    cplx sum_zx = 0.0;
    double sum_xx = 0.0, sum_g2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const cplx zx = eval(u, x[i]) * std::conj(x[i]);
        sum_zx += zx;
        sum_xx += std::norm(x[i]);
        sum_g2 += std::norm(zx / c_x);
    }
    GainEstimate g;
    g.value = sum_zx / sum_xx;
    g.method = "correlation_mc";
    g.n_samples = n;
    const double mean2 = std::norm(sum_zx / (c_x * static_cast<double>(n)));
    g.std_error = std::sqrt(std::max(0.0, sum_g2 / n - mean2) / n);
    return g;
}

GainEstimate gain_derivative(const Nonlinearity& u, double c_x, RandomStream stream, size_t n) {
    require_n(n, 1000, "gain_derivative");
    if (!u.has_derivative()) fail(errc::no_derivative, u.name() + ": no analytic derivative");
    const std::vector<cplx> x = draw_input(u, c_x, stream, n);
    cplx sum = 0.0;
    double sum2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const cplx d = u.derivative(x[i]);
        sum += d;
        sum2 += std::norm(d);
    }
    GainEstimate g;
    g.value = sum / static_cast<double>(n);
    g.method = "derivative_mc";
    g.n_samples = n;
    g.std_error = std::sqrt(std::max(0.0, sum2 / n - std::norm(g.value)) / n);
    return g;
}

ScalarDecomposition decompose(const Nonlinearity& u, double c_x, RandomStream stream, size_t n) {
    require_n(n, 1000, "decompose");
    if (!(c_x > 0.0)) fail(errc::invalid_argument, "decompose: C_x must be > 0");
    const std::vector<cplx> x = draw_input(u, c_x, stream, n);
    cplx sum_zx = 0.0;
    double sum_zz = 0.0, sum_xx = 0.0, sum_g2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const cplx z = eval(u, x[i]);
        const cplx zx = z * std::conj(x[i]);
        sum_zx += zx;
        sum_zz += std::norm(z);
        sum_xx += std::norm(x[i]);
        sum_g2 += std::norm(zx / c_x);
    }
    ScalarDecomposition d;
    d.c_x = c_x;
    d.n_samples = n;
    d.c_zx_hat = sum_zx / static_cast<double>(n);
    d.c_z_hat = sum_zz / n;
    d.b = d.c_zx_hat / c_x;
    d.std_error = std::sqrt(std::max(0.0, sum_g2 / n - std::norm(d.b)) / n);
    const double raw = d.c_z_hat - std::norm(d.b) * c_x;
    d.distortion_clamped = raw < 0.0;
    d.distortion_power = std::max(0.0, raw);
    d.orthogonality_residual = std::abs(d.c_zx_hat - d.b * (sum_xx / n));
    // flag SDR infinite when the distortion is at or below the MC noise floor
    const double floor = 4.0 * d.std_error * c_x * (1.0 + std::abs(d.b));
    d.sdr_infinite = d.distortion_power <= floor;
    d.sdr = d.sdr_infinite ? std::numeric_limits<double>::infinity()
                           : std::norm(d.b) * c_x / d.distortion_power;
    return d;
}

double sdr(const ScalarDecomposition& d) { return d.sdr; }

double rate_lower_bound(const ScalarDecomposition& d, double noise_power) {
    if (!(noise_power > 0.0)) fail(errc::invalid_argument, "rate_lower_bound: noise power must be > 0");
    return std::log2(1.0 + std::norm(d.b) * d.c_x / (d.distortion_power + noise_power));
}

CrossCorrReport verify_cross_correlation_theorem(const Nonlinearity& u, double c_x, double c_y,
                                                 cplx rho, RandomStream stream, size_t n) {
    require_n(n, 10000, "verify_cross_correlation_theorem");
    if (std::abs(rho) > 1.0 + 1e-12)
        fail(errc::invalid_argument, "verify_cross_correlation_theorem: |rho| must be <= 1");

    std::vector<cplx> x(n), y(n);
    if (u.domain() == Domain::real_domain) {
        sampling::RealGaussianPairs p =
            sampling::draw_jointly_gaussian_pair_real(stream, c_x, c_y, rho.real(), n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = p.x[i];
            y[i] = p.y[i];
        }
    } else {
        sampling::GaussianPairs p = sampling::draw_jointly_gaussian_pair(stream, c_x, c_y, rho, n);
        x = std::move(p.x);
        y = std::move(p.y);
    }

    cplx sum_zy = 0.0, sum_zx = 0.0, sum_xy = 0.0;
    double var_zy = 0.0, var_zx = 0.0, var_xy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const cplx z = eval(u, x[i]);
        const cplx zy = z * std::conj(y[i]);
        const cplx zx = z * std::conj(x[i]);
        const cplx xy = x[i] * std::conj(y[i]);
        sum_zy += zy;
        sum_zx += zx;
        sum_xy += xy;
        var_zy += std::norm(zy);
        var_zx += std::norm(zx);
        var_xy += std::norm(xy);
    }
    CrossCorrReport r;
    r.c_zy_hat = sum_zy / static_cast<double>(n);
    r.b_hat = sum_zx / (static_cast<double>(n) * c_x);
    r.c_xy_hat = sum_xy / static_cast<double>(n);
    r.rhs = r.b_hat * r.c_xy_hat;
    r.deviation = std::abs(r.c_zy_hat - r.rhs);
    const double se_zy = std::sqrt(std::max(0.0, var_zy / n - std::norm(r.c_zy_hat)) / n);
    const double se_b = std::sqrt(std::max(0.0, var_zx / n - std::norm(r.b_hat * c_x)) / n) / c_x;
    const double se_xy = std::sqrt(std::max(0.0, var_xy / n - std::norm(r.c_xy_hat)) / n);
    r.combined_std_error = std::sqrt(se_zy * se_zy + std::norm(r.c_xy_hat) * se_b * se_b +
                                     std::norm(r.b_hat) * se_xy * se_xy);
    r.within_tolerance = r.deviation < 4.0 * r.combined_std_error;
    return r;
}

AqnmReport aqnm_check(const Nonlinearity& q, double c_x, RandomStream stream, size_t n) {
    require_n(n, 1000, "aqnm_check");
    if (!q.satisfies_conditional_mean())
        fail(errc::conditional_mean_not_satisfied,
             q.name() + ": quantizer does not satisfy the conditional-mean property");
    const std::vector<cplx> x = sampling::draw_complex_gaussian(stream, c_x, n);
    cplx sum_zx = 0.0;
    double sum_zz = 0.0, sum_err = 0.0, sum_err2 = 0.0, sum_g2 = 0.0, sum_d2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const cplx z = q.apply(x[i]);
        const cplx zx = z * std::conj(x[i]);
        const double err = std::norm(x[i] - z);
        sum_zx += zx;
        sum_zz += std::norm(z);
        sum_err += err;
        sum_err2 += err * err;
        sum_g2 += std::norm(zx);
        const double diff = zx.real() - std::norm(z);  // per-sample C_zx - C_z term
        sum_d2 += diff * diff;
    }
    AqnmReport r;
    r.n_samples = n;
    r.c_zx_hat = sum_zx / static_cast<double>(n);
    r.c_z_hat = sum_zz / n;
    r.b_hat = r.c_zx_hat / c_x;
    r.beta_hat = sum_err / n / c_x;
    r.one_minus_beta = 1.0 - r.beta_hat;
    r.se_b = std::sqrt(std::max(0.0, sum_g2 / n - std::norm(r.c_zx_hat)) / n) / c_x;
    r.se_beta = std::sqrt(std::max(0.0, sum_err2 / n - (sum_err / n) * (sum_err / n)) / n) / c_x;
    const double mean_d = r.c_zx_hat.real() - r.c_z_hat;
    r.se_czx_cz = std::sqrt(std::max(0.0, sum_d2 / n - mean_d * mean_d) / n);
    return r;
}

double uniqueness_probe(const Nonlinearity& u, double c_x, cplx b_alt, RandomStream stream,
                        size_t n) {
    require_n(n, 10000, "uniqueness_probe");
    const std::vector<cplx> x = draw_input(u, c_x, stream, n);
    cplx sum = 0.0;
    for (size_t i = 0; i < n; ++i) sum += (eval(u, x[i]) - b_alt * x[i]) * std::conj(x[i]);
    return std::abs(sum / static_cast<double>(n));
}

}  // namespace bussgang::scalar
