// core.hpp - shared linear-algebra aliases and the error hierarchy.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace scrambling {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

using Seed = std::uint64_t;

// All library failures derive from Error so callers (the sweep runner in
// particular) can turn any of them into a failed row with a stable code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct InvalidDimension : Error {
    explicit InvalidDimension(const std::string& what) : Error("invalid_dimension", what) {}
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& what) : Error("numerical_failure", what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("invalid_config", what) {}
};

struct ValidationFailure : Error {
    explicit ValidationFailure(const std::string& what) : Error("validation_failed", what) {}
};

inline Eigen::Index as_index(std::size_t n) { return static_cast<Eigen::Index>(n); }

} // namespace scrambling
