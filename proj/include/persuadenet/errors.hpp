#pragma once

#include <stdexcept>
#include <string>

namespace persuadenet {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A graph exceeds the enumeration cap of the requested operation.
class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error(what) {}
};

// (A+I) stayed singular after twin reduction; the linear solve has no unique answer.
class SingularAfterReduction : public Error {
public:
    explicit SingularAfterReduction(const std::string& what) : Error(what) {}
};

// An operation that needs an interior unilateral effort was called where e* = 0.
class InteriorRequired : public Error {
public:
    explicit InteriorRequired(const std::string& what) : Error(what) {}
};

// A curvature ratio was requested with a vanishing denominator derivative.
class DegenerateDerivative : public Error {
public:
    explicit DegenerateDerivative(const std::string& what) : Error(what) {}
};

// The root bracket for the unilateral effort could not be expanded to a sign change.
class BracketFailure : public Error {
public:
    explicit BracketFailure(const std::string& what) : Error(what) {}
};

// A node set handed to specialized_from_mis is not a maximal independent set.
class NotMaximalIndependent : public Error {
public:
    explicit NotMaximalIndependent(const std::string& what) : Error(what) {}
};

// A profile handed to classify_equilibrium fails the equilibrium conditions.
class NotAnEquilibrium : public Error {
public:
    explicit NotAnEquilibrium(const std::string& what) : Error(what) {}
};

// The prior belief sits on {0, 1}, where no policy is identified.
class PriorOnBoundary : public Error {
public:
    explicit PriorOnBoundary(const std::string& what) : Error(what) {}
};

// Invalid configuration: bad values, malformed files, missing inputs.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace persuadenet
