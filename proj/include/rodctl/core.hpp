#ifndef RODCTL_CORE_HPP
#define RODCTL_CORE_HPP

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace rodctl {

using Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

// Exact arithmetic for the constraint elimination.
using Rational = boost::multiprecision::mpq_rational;
using RationalMatrix = MatrixX<Rational>;

// Default number of samples per characteristic piece [0, lambda].
inline constexpr int kDefaultSamples = 129;

class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class ConfigurationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when the requested horizon cannot steer arbitrary states.
class InfeasibleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A computed result broke one of the structural invariants (continuity,
/// feasibility, terminal matching). Usually signals an assembly bug.
class InvariantViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& q) { return q.str(); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Matrix to_double(const RationalMatrix& m) {
    Matrix out(m.rows(), m.cols());
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) out(i, j) = to_double(m(i, j));
    return out;
}

}  // namespace rodctl

#endif
