#include "bussgang/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bussgang {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi); }
double norm_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

}  // namespace

Nonlinearity Nonlinearity::Identity() {
    Nonlinearity u;
    u.kind_ = Kind::identity;
    u.name_ = "identity";
    u.has_derivative_ = true;
    u.has_closed_form_ = true;
    u.conditional_mean_ = true;  // trivially: E{x|x} = x
    return u;
}

Nonlinearity Nonlinearity::Linear(cplx a) {
    Nonlinearity u;
    u.kind_ = Kind::linear;
    u.name_ = "linear";
    u.a_ = a;
    u.has_derivative_ = true;
    u.has_closed_form_ = true;
    return u;
}

Nonlinearity Nonlinearity::Sign() {
    Nonlinearity u;
    u.kind_ = Kind::sign;
    u.name_ = "sign";
    u.domain_ = Domain::real_domain;
    u.has_closed_form_ = true;
    return u;
}

Nonlinearity Nonlinearity::ThirdOrder() {
    Nonlinearity u;
    u.kind_ = Kind::third_order;
    u.name_ = "third_order";
    u.has_derivative_ = true;
    u.has_closed_form_ = true;
    return u;
}

Nonlinearity Nonlinearity::SoftClipper(double a_max) {
    if (!(a_max > 0.0)) fail(errc::invalid_argument, "soft_clipper: a_max must be > 0");
    Nonlinearity u;
    u.kind_ = Kind::soft_clipper;
    u.name_ = "soft_clipper";
    u.a_max_ = a_max;
    u.has_derivative_ = true;
    return u;
}

Nonlinearity Nonlinearity::IqImbalance(cplx alpha, cplx beta) {
    Nonlinearity u;
    u.kind_ = Kind::iq_imbalance;
    u.name_ = "iq_imbalance";
    u.alpha_ = alpha;
    u.beta_ = beta;
    u.has_derivative_ = true;
    u.has_closed_form_ = true;
    return u;
}

double Nonlinearity::default_uniform_step(int bits, double c_x) {
    return 6.0 * std::sqrt(c_x / 2.0) / static_cast<double>(1 << bits);
}

Nonlinearity Nonlinearity::UniformQuantizer(int bits, double step) {
    if (bits < 1 || bits > 12) fail(errc::invalid_argument, "uniform_quantizer: bits must be in 1..12");
    if (!(step > 0.0)) fail(errc::invalid_argument, "uniform_quantizer: step must be > 0");
    Nonlinearity u;
    u.kind_ = Kind::uniform_quantizer;
    u.name_ = "uniform_quantizer";
    u.bits_ = bits;
    u.step_ = step;
    const int half = 1 << (bits - 1);
    for (int k = -half; k < half; ++k) u.levels_.push_back((k + 0.5) * step);
    for (int k = -half + 1; k < half; ++k) u.thresholds_.push_back(k * step);
    return u;
}

Nonlinearity Nonlinearity::LloydMax(int bits, double variance, int max_iter, double tol) {
    if (bits < 1 || bits > 12) fail(errc::invalid_argument, "lloyd_max: bits must be in 1..12");
    if (!(variance > 0.0)) fail(errc::invalid_argument, "lloyd_max: variance must be > 0");
    const int k = 1 << bits;
    const double sigma = std::sqrt(variance / 2.0);  // per-component deviation

    // init: midpoints of a uniform partition of +-4 sigma
    std::vector<double> levels(k);
    for (int i = 0; i < k; ++i) levels[i] = -4.0 * sigma + (i + 0.5) * 8.0 * sigma / k;

    std::vector<double> thr(k - 1);
    int it = 0;
    for (; it < max_iter; ++it) {
        for (int i = 0; i + 1 < k; ++i) thr[i] = 0.5 * (levels[i] + levels[i + 1]);
        double move = 0.0;
        for (int i = 0; i < k; ++i) {
            const double lo = (i == 0) ? -40.0 : thr[i - 1] / sigma;
            const double hi = (i == k - 1) ? 40.0 : thr[i] / sigma;
            const double p = norm_cdf(hi) - norm_cdf(lo);
            if (p <= 1e-300) continue;
            const double mean = sigma * (norm_pdf(lo) - norm_pdf(hi)) / p;
            move = std::max(move, std::abs(mean - levels[i]));
            levels[i] = mean;
        }
        if (move < tol) break;
    }
    if (it == max_iter) fail(errc::no_convergence, "lloyd_max: Lloyd iteration did not converge");
    for (int i = 0; i + 1 < k; ++i) thr[i] = 0.5 * (levels[i] + levels[i + 1]);

    // per-component MSE via exact Gaussian interval integrals
    double mse = 0.0;
    for (int i = 0; i < k; ++i) {
        const double lo = (i == 0) ? -40.0 : thr[i - 1] / sigma;
        const double hi = (i == k - 1) ? 40.0 : thr[i] / sigma;
        const double p = norm_cdf(hi) - norm_cdf(lo);
        if (p <= 1e-300) continue;
        const double e1 = norm_pdf(lo) - norm_pdf(hi);
        const double e2 = p + lo * norm_pdf(lo) - hi * norm_pdf(hi);
        mse += sigma * sigma * e2 - 2.0 * levels[i] * sigma * e1 + levels[i] * levels[i] * p;
    }

    Nonlinearity u;
    u.kind_ = Kind::lloyd_max;
    u.name_ = "lloyd_max";
    u.bits_ = bits;
    u.design_variance_ = variance;
    u.design_beta_ = (2.0 * mse) / variance;  // two components per complex sample
    u.has_closed_form_ = true;
    u.conditional_mean_ = true;
    u.levels_ = std::move(levels);
    u.thresholds_ = std::move(thr);
    return u;
}

Nonlinearity quantizer_design_lloyd_max(int bits, double variance, int max_iter, double tol) {
    return Nonlinearity::LloydMax(bits, variance, max_iter, tol);
}

double Nonlinearity::quantize_component(double u) const {
    if (kind_ == Kind::uniform_quantizer) {
        const int half = 1 << (bits_ - 1);
        double k = std::floor(u / step_);
        k = std::clamp(k, static_cast<double>(-half), static_cast<double>(half - 1));
        return (k + 0.5) * step_;
    }
    const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), u);
    return levels_[static_cast<size_t>(it - thresholds_.begin())];
}

cplx Nonlinearity::apply(cplx x) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::linear:
            return a_ * x;
        case Kind::sign:
            fail(errc::domain_mismatch, "sign: real-domain nonlinearity applied to complex input");
        case Kind::third_order:
            return std::norm(x) * x;
        case Kind::soft_clipper: {
            const double r = std::abs(x);
            return r <= a_max_ ? x : (a_max_ / r) * x;
        }
        case Kind::iq_imbalance:
            return alpha_ * x + beta_ * std::conj(x);
        case Kind::uniform_quantizer:
        case Kind::lloyd_max:
            return cplx(quantize_component(x.real()), quantize_component(x.imag()));
    }
    fail(errc::invalid_argument, "apply: unknown nonlinearity");
}

double Nonlinearity::apply_real(double x) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::linear:
            return a_.real() * x;
        case Kind::sign:
            return x < 0.0 ? -1.0 : 1.0;
        case Kind::uniform_quantizer:
        case Kind::lloyd_max:
            return quantize_component(x);
        default:
            fail(errc::domain_mismatch, name_ + ": no real-valued evaluation");
    }
}

void Nonlinearity::apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    out.resize(in.size());
    if (domain_ == Domain::real_domain) {
        for (size_t i = 0; i < in.size(); ++i) out[i] = apply_real(in[i].real());
    } else {
        for (size_t i = 0; i < in.size(); ++i) out[i] = apply(in[i]);
    }
}

cplx Nonlinearity::derivative(cplx x) const {
    if (!has_derivative_) fail(errc::no_derivative, name_ + ": no analytic derivative");
    switch (kind_) {
        case Kind::identity:
            return 1.0;
        case Kind::linear:
            return a_;
        case Kind::third_order:
            return 2.0 * std::norm(x);
        case Kind::soft_clipper: {
            const double r = std::abs(x);
            return r <= a_max_ ? cplx(1.0) : cplx(a_max_ / (2.0 * r));
        }
        case Kind::iq_imbalance:
            return alpha_;
        default:
            fail(errc::no_derivative, name_ + ": no analytic derivative");
    }
}

cplx Nonlinearity::closed_form_gain(double c_x) const {
    if (!has_closed_form_) fail(errc::no_closed_form, name_ + ": no closed-form gain");
    if (!(c_x > 0.0)) fail(errc::invalid_argument, "closed_form_gain: C_x must be > 0");
    switch (kind_) {
        case Kind::identity:
            return 1.0;
        case Kind::linear:
            return a_;
        case Kind::sign:
            return std::sqrt(2.0 / (kPi * c_x));
        case Kind::third_order:
            return 2.0 * c_x;
        case Kind::iq_imbalance:
            // E{conj(x) x*} is the pseudo-variance, zero for circularly symmetric x
            return alpha_;
        case Kind::lloyd_max:
            if (std::abs(c_x - design_variance_) > 1e-9 * design_variance_)
                fail(errc::no_closed_form,
                     "lloyd_max: closed-form gain only valid at the design variance");
            return 1.0 - design_beta_;
        default:
            fail(errc::no_closed_form, name_ + ": no closed-form gain");
    }
}

namespace {

std::map<std::string, double> parse_params(const std::string& s, const std::string& name) {
    std::map<std::string, double> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            fail(errc::invalid_argument, name + ": expected param=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        try {
            out[key] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            fail(errc::invalid_argument, name + ": bad numeric value in '" + item + "'");
        }
    }
    return out;
}

double take(std::map<std::string, double>& p, const std::string& key, double dflt) {
    const auto it = p.find(key);
    if (it == p.end()) return dflt;
    const double v = it->second;
    p.erase(it);
    return v;
}

}  // namespace

Nonlinearity parse_nonlinearity(const std::string& spec, double c_x_context) {
    std::string name = spec;
    std::string args;
    const auto open = spec.find('(');
    if (open != std::string::npos) {
        if (spec.back() != ')') fail(errc::invalid_argument, "nonlinearity spec: missing ')'");
        name = spec.substr(0, open);
        args = spec.substr(open + 1, spec.size() - open - 2);
    }
    auto p = parse_params(args, name);
    Nonlinearity u = [&] {
        if (name == "identity") return Nonlinearity::Identity();
        if (name == "linear")
            return Nonlinearity::Linear(cplx(take(p, "a", 1.0), take(p, "a_im", 0.0)));
        if (name == "sign") return Nonlinearity::Sign();
        if (name == "third_order") return Nonlinearity::ThirdOrder();
        if (name == "soft_clipper") return Nonlinearity::SoftClipper(take(p, "amax", 1.0));
        if (name == "iq_imbalance")
            return Nonlinearity::IqImbalance(cplx(take(p, "alpha", 1.0), take(p, "alpha_im", 0.0)),
                                             cplx(take(p, "beta", 0.1), take(p, "beta_im", 0.0)));
        if (name == "uniform_quantizer") {
            const int bits = static_cast<int>(take(p, "bits", 3.0));
            const double step = take(p, "step", Nonlinearity::default_uniform_step(bits, c_x_context));
            return Nonlinearity::UniformQuantizer(bits, step);
        }
        if (name == "lloyd_max") {
            const int bits = static_cast<int>(take(p, "bits", 3.0));
            return Nonlinearity::LloydMax(bits, take(p, "variance", c_x_context));
        }
        fail(errc::invalid_argument, "unknown nonlinearity '" + name + "'");
    }();
    if (!p.empty()) fail(errc::invalid_argument, name + ": unknown parameter '" + p.begin()->first + "'");
    return u;
}

}  // namespace bussgang
