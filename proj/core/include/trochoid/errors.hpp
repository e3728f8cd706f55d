#pragma once

#include <stdexcept>
#include <string>

namespace trochoid {

// Base of every error the library throws. `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept = 0;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-spec"; }
};

class InvalidInput : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-input"; }
};

class GenerationFailure : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "generation-failure"; }
};

class EigensolverFailure : public Error {
public:
    EigensolverFailure(const std::string& what, int iterations)
        : Error(what), iterations_(iterations) {}
    const char* kind() const noexcept override { return "eigensolver-failure"; }
    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

// Raised by the mixed-cycle continuation; carries the last phi_1 at which a
// solution was accepted.
class ContinuationFailure : public Error {
public:
    ContinuationFailure(const std::string& what, double last_good_phi)
        : Error(what), last_good_phi_(last_good_phi) {}
    const char* kind() const noexcept override { return "continuation-failure"; }
    double last_good_phi() const noexcept { return last_good_phi_; }

private:
    double last_good_phi_;
};

class OutsideSupport : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "outside-support"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io-error"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    const char* kind() const noexcept override { return "parse-error"; }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace trochoid
