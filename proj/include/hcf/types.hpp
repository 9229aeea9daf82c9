#ifndef HCF_TYPES_HPP
#define HCF_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace hcf {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

// Default numerical thresholds, shared across modules.
namespace tol {
inline constexpr double jacobi = 1e-10;        // relative to |mu|^2
inline constexpr double rank_cut = 1e-10;      // singular values below rank_cut * sigma_max count as zero
inline constexpr double two_step = 1e-10;      // relative to |mu|^2
inline constexpr double condition = 1e12;      // act() refuses worse-conditioned maps
inline constexpr double hermitian = 1e-12;
}  // namespace tol

enum class ErrorKind { validation, numerical, io };

// All library errors carry a stable code string; the CLI maps ErrorKind to
// exit codes (validation -> 2, numerical/io -> 3).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

struct ValidationError : Error {
    ValidationError(std::string code, const std::string& what)
        : Error(ErrorKind::validation, std::move(code), what) {}
};

struct NumericalError : Error {
    NumericalError(std::string code, const std::string& what)
        : Error(ErrorKind::numerical, std::move(code), what) {}
};

struct IoError : Error {
    IoError(const std::string& what) : Error(ErrorKind::io, "io_error", what) {}
};

inline bool is_hermitian(const MatC& a, double eps = tol::hermitian) {
    double scale = std::max(1.0, a.norm());
    return (a - a.adjoint()).norm() <= eps * scale;
}

}  // namespace hcf

#endif
