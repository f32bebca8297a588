#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sinespike {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
    InvalidArgument = 1,
    Infeasible = 2,
    Singular = 3,
    NotConverged = 4,
    Numerical = 5,
    Parse = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorCode::InvalidArgument, what);
}

// e^{i 2 pi x}
inline cplx cis2pi(double x) {
    const double a = kTwoPi * x;
    return {std::cos(a), std::sin(a)};
}

// Maps any real number into [0, 1).
inline double wrap_unit(double f) {
    double w = f - std::floor(f);
    if (w >= 1.0) w = 0.0;
    return w;
}

} // namespace sinespike
