#ifndef BUSSGANG_RNG_HPP
#define BUSSGANG_RNG_HPP

#include <cmath>
#include <cstdint>

namespace bussgang {

namespace detail {
inline uint64_t mix64(uint64_t z) {
    // SplitMix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based stream: output i of stream (seed, stream_id) is a pure
// function of (seed, stream_id, i), so substreams can be handed to parallel
// workers without any sequential dependence and results stay bit-identical
// across platforms and worker counts.
struct RandomStream {
    uint64_t seed = 0;
    uint64_t stream_id = 0;
    uint64_t counter = 0;

    RandomStream() = default;
    RandomStream(uint64_t s, uint64_t id = 0) : seed(s), stream_id(id) {
        key_ = detail::mix64(seed ^ detail::mix64(stream_id + 0x6a09e667f3bcc909ULL));
    }

    RandomStream substream(uint64_t id) const {
        return RandomStream(seed, detail::mix64(stream_id * 0x2545f4914f6cdd1dULL + id + 1));
    }

    uint64_t next_u64() { return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * counter++); }

    // uniform in the open interval (0,1)
    double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // standard normal pair via Box-Muller
    void next_normal_pair(double& n0, double& n1) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        n0 = r * std::cos(a);
        n1 = r * std::sin(a);
    }

    double next_normal() {
        double a, b;
        next_normal_pair(a, b);
        return a;
    }

  private:
    uint64_t key_ = 0;
};

}  // namespace bussgang

#endif
