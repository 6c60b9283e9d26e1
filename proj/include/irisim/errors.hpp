#pragma once

#include <stdexcept>
#include <string>

namespace irisim {

/// Base class for every error raised by the library. The C API maps each
/// subclass onto one status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// N_S is neither 2^k nor 3*2^k, or the row index is out of range.
class UnsupportedSize : public Error {
public:
    using Error::Error;
};

/// Two distinct label vectors map to the same precoded point.
class InjectivityViolation : public Error {
public:
    using Error::Error;
};

/// A PNC mapping was evaluated outside its alphabet.
class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class UnknownFigure : public Error {
public:
    using Error::Error;
};

class NonPositiveDistance : public Error {
public:
    using Error::Error;
};

}  // namespace irisim
