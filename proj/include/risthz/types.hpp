#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace risthz {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CRowVec = Eigen::RowVectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// Error taxonomy. Every library failure derives from Error so callers can
// distinguish configuration problems from numerical ones.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// The input sits at a limit where the quantity is undefined (tau == 1, a zero
// entry whose phase is required, ...).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

// Bisection found the relaxation feasible at its upper bracket.
class UpperBoundTooLow : public SolverError {
public:
    using SolverError::SolverError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace risthz
