#include "bussgang/sampling.hpp"

#include <cmath>

namespace bussgang::sampling {

std::vector<double> draw_real_gaussian(RandomStream& stream, double variance, size_t n) {
    if (!(variance > 0.0)) fail(errc::invalid_argument, "draw_real_gaussian: variance must be > 0");
    const double sigma = std::sqrt(variance);
    std::vector<double> out(n);
    size_t i = 0;
    while (i + 1 < n) {
        double a, b;
        stream.next_normal_pair(a, b);
        out[i++] = sigma * a;
        out[i++] = sigma * b;
    }
    if (i < n) out[i] = sigma * stream.next_normal();
    return out;
}

std::vector<cplx> draw_complex_gaussian(RandomStream& stream, double c, size_t n) {
    if (!(c > 0.0)) fail(errc::invalid_argument, "draw_complex_gaussian: power must be > 0");
    const double s = std::sqrt(c / 2.0);
    std::vector<cplx> out(n);
    for (size_t i = 0; i < n; ++i) {
        double a, b;
        stream.next_normal_pair(a, b);
        out[i] = cplx(s * a, s * b);
    }
    return out;
}

std::vector<cplx> draw_complex_gaussian_vector(RandomStream& stream, const linalg::ComplexMatrix& c_x,
                                               size_t n) {
    const linalg::ComplexMatrix l = linalg::hermitian_factor(c_x);
    const int m = c_x.rows;
    const double s = std::sqrt(0.5);
    std::vector<cplx> out(n * m);
    std::vector<cplx> w(m);
    for (size_t i = 0; i < n; ++i) {
        for (int k = 0; k < m; ++k) {
            double a, b;
            stream.next_normal_pair(a, b);
            w[k] = cplx(s * a, s * b);
        }
        cplx* xi = out.data() + i * m;
        for (int r = 0; r < m; ++r) {
            cplx acc = 0.0;
            for (int k = 0; k <= r; ++k) acc += l(r, k) * w[k];
            xi[r] = acc;
        }
    }
    return out;
}

GaussianPairs draw_jointly_gaussian_pair(RandomStream& stream, double c_x, double c_y, cplx rho,
                                         size_t n) {
    if (std::abs(rho) > 1.0 + 1e-12)
        fail(errc::invalid_argument, "draw_jointly_gaussian_pair: |rho| must be <= 1");
    if (!(c_x > 0.0) || !(c_y > 0.0))
        fail(errc::invalid_argument, "draw_jointly_gaussian_pair: powers must be > 0");
    GaussianPairs p;
    p.x = draw_complex_gaussian(stream, c_x, n);
    const double resid = std::max(0.0, c_y * (1.0 - std::norm(rho)));
    const cplx a = std::conj(rho) * std::sqrt(c_y / c_x);
    const double b = std::sqrt(resid);
    p.y.resize(n);
    const double s = std::sqrt(0.5);
    for (size_t i = 0; i < n; ++i) {
        double wr, wi;
        stream.next_normal_pair(wr, wi);
        p.y[i] = a * p.x[i] + b * cplx(s * wr, s * wi);
    }
    return p;
}

RealGaussianPairs draw_jointly_gaussian_pair_real(RandomStream& stream, double c_x, double c_y,
                                                  double rho, size_t n) {
    if (std::abs(rho) > 1.0 + 1e-12)
        fail(errc::invalid_argument, "draw_jointly_gaussian_pair_real: |rho| must be <= 1");
    RealGaussianPairs p;
    p.x = draw_real_gaussian(stream, c_x, n);
    const double resid = std::max(0.0, c_y * (1.0 - rho * rho));
    const double a = rho * std::sqrt(c_y / c_x);
    const double b = std::sqrt(resid);
    p.y.resize(n);
    for (size_t i = 0; i < n; ++i) p.y[i] = a * p.x[i] + b * stream.next_normal();
    return p;
}

std::vector<cplx> draw_qpsk(RandomStream& stream, double power, size_t n) {
    if (!(power > 0.0)) fail(errc::invalid_argument, "draw_qpsk: power must be > 0");
    const double s = std::sqrt(power / 2.0);
    std::vector<cplx> out(n);
    for (size_t i = 0; i < n; ++i) {
        const uint64_t bits = stream.next_u64();
        out[i] = cplx((bits & 1) ? s : -s, (bits & 2) ? s : -s);
    }
    return out;
}

SignalSource SignalSource::RealGaussian(double variance) {
    SignalSource s;
    s.kind = Kind::real_gaussian;
    s.power = variance;
    return s;
}

SignalSource SignalSource::ComplexGaussian(double c_x) {
    SignalSource s;
    s.kind = Kind::complex_gaussian;
    s.power = c_x;
    return s;
}

SignalSource SignalSource::ComplexGaussianVector(linalg::ComplexMatrix c_x) {
    SignalSource s;
    s.kind = Kind::complex_gaussian_vector;
    s.cov = std::move(c_x);
    return s;
}

SignalSource SignalSource::Qpsk(double power, int dim) {
    SignalSource s;
    s.kind = Kind::qpsk;
    s.power = power;
    s.dim_iid = dim;
    return s;
}

SignalSource SignalSource::ChannelQpsk(linalg::ComplexMatrix h) {
    SignalSource s;
    s.kind = Kind::channel_qpsk;
    s.channel = std::move(h);
    return s;
}

int SignalSource::dim() const {
    switch (kind) {
        case Kind::real_gaussian:
        case Kind::complex_gaussian:
            return 1;
        case Kind::complex_gaussian_vector:
            return cov.rows;
        case Kind::qpsk:
            return dim_iid;
        case Kind::channel_qpsk:
            return channel.rows;
    }
    return 1;
}

std::vector<cplx> SignalSource::draw(RandomStream& stream, size_t n) const {
    switch (kind) {
        case Kind::real_gaussian: {
            std::vector<double> r = draw_real_gaussian(stream, power, n);
            std::vector<cplx> out(n);
            for (size_t i = 0; i < n; ++i) out[i] = r[i];
            return out;
        }
        case Kind::complex_gaussian:
            return draw_complex_gaussian(stream, power, n);
        case Kind::complex_gaussian_vector:
            return draw_complex_gaussian_vector(stream, cov, n);
        case Kind::qpsk: {
            std::vector<cplx> out = draw_qpsk(stream, power, n * dim_iid);
            return out;
        }
        case Kind::channel_qpsk: {
            const int mt = channel.cols;
            const int mr = channel.rows;
            std::vector<cplx> s = draw_qpsk(stream, 1.0, n * mt);
            std::vector<cplx> out(n * mr);
            for (size_t i = 0; i < n; ++i) {
                const cplx* si = s.data() + i * mt;
                cplx* xi = out.data() + i * mr;
                for (int r = 0; r < mr; ++r) {
                    cplx acc = 0.0;
                    for (int c = 0; c < mt; ++c) acc += channel(r, c) * si[c];
                    xi[r] = acc;
                }
            }
            return out;
        }
    }
    fail(errc::invalid_argument, "SignalSource: unknown kind");
}

}  // namespace bussgang::sampling
