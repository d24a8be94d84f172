#pragma once

#include <stdexcept>
#include <string>

namespace mcle {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter or argument outside its admissible domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Circulant embedding produced materially negative eigenvalues.
class EmbeddingError : public Error {
public:
    using Error::Error;
};

// Covariance matrix failed to factorize.
class CovarianceError : public Error {
public:
    using Error::Error;
};

// Objective evaluated to a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Input data malformed, empty or degenerate.
class DataError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Requested quantity not defined in the process's rate regime.
class RegimeError : public Error {
public:
    using Error::Error;
};

// Work requested exceeds a configured cap.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Bounded search settled on a bound; the parameter is not identified.
class IdentificationError : public Error {
public:
    using Error::Error;
};

// Lag truncation too short for the autocovariance tail.
class TruncationError : public Error {
public:
    using Error::Error;
};

}  // namespace mcle
