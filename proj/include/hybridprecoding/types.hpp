#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// One matrix per subcarrier.
using PerCarrier = std::vector<CMatrix>;
/// Indexed [k][u].
using PerCarrierUser = std::vector<std::vector<CMatrix>>;

/// Random stream used by every sampling routine. Each concurrent caller owns one.
using Rng = std::mt19937_64;

// Error hierarchy. Everything thrown by the library derives from hp::Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct InfeasibleError : Error {
    using Error::Error;
};
struct SolverError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

}  // namespace hp
