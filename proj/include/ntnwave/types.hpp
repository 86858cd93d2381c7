// types.hpp - shared numeric types and error classes for ntnwave.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ntnwave {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Thrown when matrix/vector sizes do not agree with what an operation needs.
class InvalidDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown for invalid or inconsistent simulation parameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// max |(M Mᴴ - I)_{ij}|; zero for an exactly unitary matrix.
double unitarity_error(const ComplexMatrix& m);

}  // namespace ntnwave
