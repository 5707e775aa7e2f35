#pragma once

#include <stdexcept>
#include <string>

namespace lfunc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SingularCurve : public Error {
public:
    SingularCurve() : Error("singular curve: discriminant is zero") {}
    using Error::Error;
};

class PointNotOnCurve : public Error {
public:
    PointNotOnCurve() : Error("point does not satisfy the Weierstrass equation") {}
    using Error::Error;
};

class NotPrime : public Error {
public:
    explicit NotPrime(const std::string& n) : Error("not a prime: " + n) {}
};

class BadReduction : public Error {
public:
    explicit BadReduction(const std::string& p)
        : Error("curve has bad reduction at p = " + p) {}
};

class OutsideConvergenceRegion : public Error {
public:
    using Error::Error;
};

class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class DependentGenerators : public Error {
public:
    DependentGenerators() : Error("generators are dependent modulo torsion") {}
};

class NotNilpotent : public Error {
public:
    NotNilpotent() : Error("matrix is not nilpotent") {}
};

class SingularBasis : public Error {
public:
    SingularBasis() : Error("lattice basis is singular") {}
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionViolation : public Error {
public:
    using Error::Error;
};

} // namespace lfunc
