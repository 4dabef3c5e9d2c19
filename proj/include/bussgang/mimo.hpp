#ifndef BUSSGANG_MIMO_HPP
#define BUSSGANG_MIMO_HPP

#include <functional>
#include <span>
#include <vector>

#include "bussgang/linalg.hpp"
#include "bussgang/nonlinearity.hpp"
#include "bussgang/rng.hpp"
#include "bussgang/sampling.hpp"
#include "bussgang/types.hpp"

namespace bussgang::mimo {

// General vector distortion; writes U(x) into out (same length as x).
using VectorMap = std::function<void(std::span<const cplx>, std::span<cplx>)>;

// Per-antenna distortion with no crosstalk.
struct ElementwiseDistortion {
    std::vector<Nonlinearity> per_antenna;

    int dim() const { return static_cast<int>(per_antenna.size()); }
    VectorMap as_map() const;
};

struct MimoDecomposition {
    linalg::ComplexMatrix b;         // gain matrix
    linalg::ComplexMatrix c_x;       // correlation used in the B formula
    linalg::ComplexMatrix c_x_hat;   // sample input correlation
    linalg::ComplexMatrix c_z_hat;
    linalg::ComplexMatrix c_zx_hat;
    linalg::ComplexMatrix c_eta;     // symmetrized C_z - B C_x B^H
    double diagonality_defect = 0.0;      // max off-diagonal |B_ij|
    double psd_margin = 0.0;              // min eigenvalue of C_eta
    double orthogonality_residual = 0.0;  // max|C_zx_hat - B C_x_hat|
    double std_error = 0.0;               // max entrywise std error of C_zx_hat
    bool used_pseudo_inverse = false;
    size_t n_samples = 0;
};

// B-hat = C_zx_hat * C_x^-1 for x ~ CN(0, C_x); pseudo-inverse (flagged) when
// C_x is rank-deficient.
MimoDecomposition gain_matrix(const VectorMap& dist, const linalg::ComplexMatrix& c_x,
                              RandomStream stream, size_t n);
MimoDecomposition gain_matrix(const ElementwiseDistortion& dist, const linalg::ComplexMatrix& c_x,
                              RandomStream stream, size_t n);

// d_m per scalar marginal x_m ~ CN(0, [C_x]_mm), via the scalar engine
std::vector<cplx> elementwise_gain_diag(const ElementwiseDistortion& dist,
                                        const linalg::ComplexMatrix& c_x, RandomStream stream,
                                        size_t n);

// Full decomposition with C_eta = C_z_hat - B C_x B^H
MimoDecomposition distortion_correlation(const ElementwiseDistortion& dist,
                                         const linalg::ComplexMatrix& c_x, RandomStream stream,
                                         size_t n);
MimoDecomposition distortion_correlation(const VectorMap& dist, const linalg::ComplexMatrix& c_x,
                                         RandomStream stream, size_t n);

// Generalized (possibly non-Gaussian) decomposition; B-hat = C_zx_hat * C_x_hat^+
// with the sample input correlation.
MimoDecomposition decompose_general(const VectorMap& dist, const sampling::SignalSource& source,
                                    RandomStream stream, size_t n);

struct MimoTheoremReport {
    linalg::ComplexMatrix lhs;  // C_zy_hat
    linalg::ComplexMatrix rhs;  // C_zx_hat C_x^-1 C_xy
    double max_dev = 0.0;
    double std_error = 0.0;  // max entrywise std error of C_zy_hat
    size_t n_samples = 0;
};

MimoTheoremReport verify_mimo_theorem(const VectorMap& dist, const linalg::ComplexMatrix& c_x,
                                      const linalg::ComplexMatrix& c_y,
                                      const linalg::ComplexMatrix& c_xy, RandomStream stream,
                                      size_t n);

}  // namespace bussgang::mimo

#endif
