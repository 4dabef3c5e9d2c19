#ifndef BUSSGANG_NONLINEARITY_HPP
#define BUSSGANG_NONLINEARITY_HPP

#include <string>
#include <vector>

#include "bussgang/types.hpp"

namespace bussgang {

enum class Domain { real_domain, complex_domain };

// Memoryless distortion function with optional analytic derivative (in the
// complex Wirtinger-style sense 0.5*(d/dRe - j d/dIm)) and optional
// closed-form Bussgang gain. Immutable after construction.
class Nonlinearity {
  public:
    enum class Kind {
        identity,
        linear,
        sign,
        third_order,
        soft_clipper,
        iq_imbalance,
        uniform_quantizer,
        lloyd_max,
    };

    static Nonlinearity Identity();
    static Nonlinearity Linear(cplx a);
    static Nonlinearity Sign();                      // real domain, one-bit
    static Nonlinearity ThirdOrder();                // |x|^2 x
    static Nonlinearity SoftClipper(double a_max);   // envelope limiter, phase preserved
    static Nonlinearity IqImbalance(cplx alpha, cplx beta);  // alpha x + beta conj(x)
    // mid-rise, 2^bits levels per component, saturating at +-2^(bits-1)*step
    static Nonlinearity UniformQuantizer(int bits, double step);
    // per-component Lloyd-Max quantizer for x ~ CN(0, variance); levels are the
    // conditional means of N(0, variance/2) over the decision intervals
    static Nonlinearity LloydMax(int bits, double variance, int max_iter = 500, double tol = 1e-12);

    // default step covering +-3 per-component standard deviations
    static double default_uniform_step(int bits, double c_x);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    Domain domain() const { return domain_; }
    bool has_derivative() const { return has_derivative_; }
    bool has_closed_form_gain() const { return has_closed_form_; }
    bool satisfies_conditional_mean() const { return conditional_mean_; }

    cplx apply(cplx x) const;
    double apply_real(double x) const;  // real-domain kinds and per-component quantizers
    void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const;

    cplx derivative(cplx x) const;            // throws NoDerivative
    cplx closed_form_gain(double c_x) const;  // throws NoClosedForm

    // quantizer internals (both quantizer kinds)
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    int bits() const { return bits_; }
    double step() const { return step_; }
    double design_variance() const { return design_variance_; }

  private:
    Nonlinearity() = default;
    double quantize_component(double u) const;

    Kind kind_ = Kind::identity;
    std::string name_ = "identity";
    Domain domain_ = Domain::complex_domain;
    bool has_derivative_ = false;
    bool has_closed_form_ = false;
    bool conditional_mean_ = false;

    cplx a_ = 1.0;      // linear
    double a_max_ = 1.0;
    cplx alpha_ = 1.0, beta_ = 0.0;
    int bits_ = 0;
    double step_ = 0.0;
    double design_variance_ = 0.0;
    double design_beta_ = 0.0;  // lloyd_max: E{|x-Q(x)|^2}/C_x at the design variance
    std::vector<double> levels_;
    std::vector<double> thresholds_;
};

// Alias for quantizer_design_lloyd_max in op terms.
Nonlinearity quantizer_design_lloyd_max(int bits, double variance, int max_iter = 500,
                                        double tol = 1e-12);

// CLI grammar `name(param=value,...)`; c_x_context supplies defaults for
// quantizer step / Lloyd-Max design variance when not given explicitly.
Nonlinearity parse_nonlinearity(const std::string& spec, double c_x_context = 1.0);

}  // namespace bussgang

#endif
