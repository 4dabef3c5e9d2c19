#ifndef BUSSGANG_SAMPLING_HPP
#define BUSSGANG_SAMPLING_HPP

#include <vector>

#include "bussgang/linalg.hpp"
#include "bussgang/rng.hpp"
#include "bussgang/types.hpp"

namespace bussgang::sampling {

// n i.i.d. N(0, variance) samples
std::vector<double> draw_real_gaussian(RandomStream& stream, double variance, size_t n);

// n i.i.d. CN(0, c) samples; re and im parts are independent N(0, c/2)
std::vector<cplx> draw_complex_gaussian(RandomStream& stream, double c, size_t n);

// n draws of x = L w with L L^H = C_x and w i.i.d. CN(0,1); flattened n x M row-major
std::vector<cplx> draw_complex_gaussian_vector(RandomStream& stream, const linalg::ComplexMatrix& c_x,
                                               size_t n);

// jointly circularly symmetric pair with marginal powers (c_x, c_y) and
// E{x y*} = conj(rho) * sqrt(c_x c_y); built from the MMSE split
// y = conj(rho) sqrt(c_y/c_x) x + sqrt(c_y (1-|rho|^2)) w.
struct GaussianPairs {
    std::vector<cplx> x;
    std::vector<cplx> y;
};
GaussianPairs draw_jointly_gaussian_pair(RandomStream& stream, double c_x, double c_y, cplx rho,
                                         size_t n);

// real-valued analogue for real-domain nonlinearities
struct RealGaussianPairs {
    std::vector<double> x;
    std::vector<double> y;
};
RealGaussianPairs draw_jointly_gaussian_pair_real(RandomStream& stream, double c_x, double c_y,
                                                  double rho, size_t n);

// uniform over {+-sqrt(power/2) +- j sqrt(power/2)}
std::vector<cplx> draw_qpsk(RandomStream& stream, double power, size_t n);

// Signal sources for the generalized (possibly non-Gaussian) decomposition.
// draw() fills n vectors of dimension dim(), flattened row-major.
struct SignalSource {
    enum class Kind {
        real_gaussian,           // dim 1, power = variance
        complex_gaussian,        // dim 1, power = C_x
        complex_gaussian_vector, // dim M, covariance cov
        qpsk,                    // dim M, i.i.d. QPSK symbols of given power
        channel_qpsk,            // x = H s, s i.i.d. unit-power QPSK, dim = rows(H)
    };

    Kind kind = Kind::complex_gaussian;
    double power = 1.0;
    int dim_iid = 1;                 // dimension for qpsk kind
    linalg::ComplexMatrix cov;       // complex_gaussian_vector
    linalg::ComplexMatrix channel;   // channel_qpsk

    static SignalSource RealGaussian(double variance);
    static SignalSource ComplexGaussian(double c_x);
    static SignalSource ComplexGaussianVector(linalg::ComplexMatrix c_x);
    static SignalSource Qpsk(double power, int dim = 1);
    static SignalSource ChannelQpsk(linalg::ComplexMatrix h);

    int dim() const;
    bool real_valued() const { return kind == Kind::real_gaussian; }
    std::vector<cplx> draw(RandomStream& stream, size_t n) const;
};

}  // namespace bussgang::sampling

#endif
