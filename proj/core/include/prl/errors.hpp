#pragma once

#include <stdexcept>

namespace prl {

/// Base class for all prl errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer observation periods than assets: the second-moment matrix of the
/// return history cannot be regular, so the optimal portfolio is not unique.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration (bad parameter file, unknown
/// distribution tag, malformed CSV, inconsistent vector lengths, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The risk matrix is numerically singular (Cholesky pivot underflow).
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Requested risk tolerance below 1: the risk budget is under the achievable
/// minimum, no feasible portfolio exists.
class InfeasibleRiskError : public Error {
 public:
  using Error::Error;
};

/// Effective returns are proportional to the all-ones vector in the inverse
/// risk metric; the extremal direction vanishes and the extremum is not unique.
class DegenerateReturnsError : public Error {
 public:
  using Error::Error;
};

/// Asymptotic formulas requested with alpha <= 1, outside their validity.
class AsymptoticRegimeError : public Error {
 public:
  using Error::Error;
};

/// The independent KKT Newton oracle failed to converge.
class OracleDivergenceError : public Error {
 public:
  using Error::Error;
};

/// A should-not-happen internal condition.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace prl
