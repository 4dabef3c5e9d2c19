#ifndef BUSSGANG_SCALAR_HPP
#define BUSSGANG_SCALAR_HPP

#include <cstddef>
#include <string>

#include "bussgang/nonlinearity.hpp"
#include "bussgang/rng.hpp"
#include "bussgang/types.hpp"

namespace bussgang::scalar {

struct GainEstimate {
    cplx value = 0.0;
    std::string method;  // closed_form | correlation_mc | derivative_mc
    size_t n_samples = 0;
    double std_error = 0.0;  // 0 for closed_form
};

GainEstimate gain_closed_form(const Nonlinearity& u, double c_x);

// B-hat = sum U(x_i) x_i* / sum |x_i|^2; std_error from the per-sample
// numerator scaled by 1/C_x
GainEstimate gain_correlation(const Nonlinearity& u, double c_x, RandomStream stream, size_t n);

// B-hat = mean of the analytic derivative over the Gaussian draw
GainEstimate gain_derivative(const Nonlinearity& u, double c_x, RandomStream stream, size_t n);

struct ScalarDecomposition {
    cplx b = 0.0;                        // C_zx_hat / C_x (population C_x)
    double c_x = 0.0;                    // configured input power
    double c_z_hat = 0.0;
    cplx c_zx_hat = 0.0;
    double distortion_power = 0.0;       // clamped at 0
    bool distortion_clamped = false;
    double sdr = 0.0;
    bool sdr_infinite = false;
    double orthogonality_residual = 0.0; // |mean (U(x)-Bx) x*|
    double std_error = 0.0;              // std error of C_zx_hat / C_x
    size_t n_samples = 0;
};

ScalarDecomposition decompose(const Nonlinearity& u, double c_x, RandomStream stream, size_t n);

double sdr(const ScalarDecomposition& d);

// log2(1 + |B|^2 C_x / (distortion_power + noise_power))
double rate_lower_bound(const ScalarDecomposition& d, double noise_power);

struct CrossCorrReport {
    cplx c_zy_hat = 0.0;
    cplx b_hat = 0.0;
    cplx c_xy_hat = 0.0;
    cplx rhs = 0.0;       // b_hat * c_xy_hat
    double deviation = 0.0;
    double combined_std_error = 0.0;
    bool within_tolerance = false;  // deviation < 4 * combined_std_error
};

CrossCorrReport verify_cross_correlation_theorem(const Nonlinearity& u, double c_x, double c_y,
                                                 cplx rho, RandomStream stream, size_t n);

struct AqnmReport {
    double beta_hat = 0.0;
    double one_minus_beta = 0.0;
    cplx b_hat = 0.0;
    cplx c_zx_hat = 0.0;
    double c_z_hat = 0.0;
    double se_b = 0.0;
    double se_beta = 0.0;
    double se_czx_cz = 0.0;  // std error of the C_zx - C_z comparison
    size_t n_samples = 0;
};

AqnmReport aqnm_check(const Nonlinearity& q, double c_x, RandomStream stream, size_t n);

// |mean (U(x) - B_alt x) x*|; vanishes only at the Bussgang gain
double uniqueness_probe(const Nonlinearity& u, double c_x, cplx b_alt, RandomStream stream,
                        size_t n);

}  // namespace bussgang::scalar

#endif
