#pragma once

#include <stdexcept>
#include <string>

namespace signid {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- linear algebra ---

class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// The vectorized Lyapunov operator is singular; this happens exactly when
/// some pair of drift eigenvalues sums to zero, i.e. the drift is on the
/// stability boundary. Callers in the sampling pipeline treat it as a
/// non-Hurwitz draw and resample.
class SingularLyapunov : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// --- graphs ---

class UnknownNode : public Error {
public:
    using Error::Error;
};

class UnknownEdge : public Error {
public:
    using Error::Error;
};

class LatentNodesPresent : public Error {
public:
    using Error::Error;
};

class InvalidGraph : public Error {
public:
    using Error::Error;
};

// --- OU models and sampling ---

class NotHurwitz : public Error {
public:
    using Error::Error;
};

class NotMFaithful : public Error {
public:
    using Error::Error;
};

class ResampleBudgetExhausted : public Error {
public:
    using Error::Error;
};

// --- feasibility ---

class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

/// Raised when both sign systems are infeasible for a covariance matrix
/// that was claimed to lie in the possible set, or when a witness fails
/// validation. Surfaced to the caller, never silently repaired.
class InconsistentInput : public Error {
public:
    using Error::Error;
};

// --- closed-form checkers ---

class ZeroDenominatorEntry : public Error {
public:
    using Error::Error;
};

// --- I/O ---

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace signid
