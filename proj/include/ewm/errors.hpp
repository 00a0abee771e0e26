#pragma once

#include <stdexcept>
#include <string>

namespace ewm {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

// Branches on paths that the requested optical element cannot act on.
class WrongStage : public Error {
public:
    using Error::Error;
};

class ZeroNorm : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

// Pre- and post-selection are orthogonal, so the weak value does not exist.
class UndefinedWeakValue : public Error {
public:
    using Error::Error;
};

class ZeroProbability : public Error {
public:
    using Error::Error;
};

// Numerical guardrails: the discretization cannot represent the request
// to the promised accuracy.
class GuardrailError : public Error {
public:
    using Error::Error;
};

class GridTooNarrow : public GuardrailError {
public:
    using GuardrailError::GuardrailError;
};

class AlignmentError : public GuardrailError {
public:
    using GuardrailError::GuardrailError;
};

class TruncationError : public GuardrailError {
public:
    using GuardrailError::GuardrailError;
};

} // namespace ewm
