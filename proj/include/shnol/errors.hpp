#ifndef SHNOL_ERRORS_HPP
#define SHNOL_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shnol {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CoefficientError : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public CoefficientError {
public:
    IndexOutOfRange(std::int64_t n, const std::string& what)
        : CoefficientError(what + " (n=" + std::to_string(n) + ")"), index(n) {}
    std::int64_t index;
};

class NonPositiveCoefficient : public CoefficientError {
public:
    NonPositiveCoefficient(std::int64_t n, double value)
        : CoefficientError("coefficient a_n is not positive at n=" + std::to_string(n) +
                           " (value " + std::to_string(value) + ")"),
          index(n) {}
    std::int64_t index;
};

class UnknownFamily : public CoefficientError {
public:
    using CoefficientError::CoefficientError;
};

class InvalidParams : public CoefficientError {
public:
    using CoefficientError::CoefficientError;
};

class NonPositiveWeight : public CoefficientError {
public:
    NonPositiveWeight(std::int64_t n)
        : CoefficientError("weight c_n must be positive (n=" + std::to_string(n) + ")"), index(n) {}
    std::int64_t index;
};

class Breakdown : public Error {
public:
    using Error::Error;
};

class DegenerateWindow : public Error {
public:
    using Error::Error;
};

class SupportOutOfRange : public Error {
public:
    using Error::Error;
};

class EmptySpectrum : public Error {
public:
    EmptySpectrum() : Error("spectrum approximation is empty") {}
};

class BadGeometry : public Error {
public:
    using Error::Error;
};

class ZeroVector : public Error {
public:
    ZeroVector() : Error("cutoff vector v*y vanishes identically") {}
};

class MarginTooSmall : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    HypothesisViolated(std::int64_t k, const std::string& what)
        : Error(what + " (k=" + std::to_string(k) + ")"), index(k) {}
    std::int64_t index;
};

class PositivityViolated : public Error {
public:
    PositivityViolated(std::int64_t n)
        : Error("a_n + eta_n must be positive (n=" + std::to_string(n) + ")"), index(n) {}
    std::int64_t index;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : Error("config key '" + key + "': " + what), key(key) {}
    std::string key;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace shnol

#endif  // SHNOL_ERRORS_HPP
