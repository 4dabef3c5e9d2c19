#ifndef BUSSGANG_TYPES_HPP
#define BUSSGANG_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace bussgang {

using cplx = std::complex<double>;

// Error classes map one-to-one onto CLI exit codes.
enum class errc {
    invalid_argument = 2,
    domain_mismatch = 3,
    no_derivative = 4,
    no_closed_form = 5,
    not_hermitian = 6,
    not_psd = 7,
    no_convergence = 8,
    io_error = 9,
    config_error = 10,
    conditional_mean_not_satisfied = 11,
    joint_covariance_not_psd = 12,
    degenerate = 13,
};

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bussgang

#endif
