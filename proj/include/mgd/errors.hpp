#pragma once

#include <stdexcept>
#include <string>

namespace mgd {

// Every failure raised by the library derives from Error; the CLI maps the
// concrete type onto its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class ParseError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "parse"; }
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation"; }
};

class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

class InfeasibleError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "infeasible"; }
};

} // namespace mgd

namespace mgd {

class VoltageCollapseError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
    const char* kind() const noexcept override { return "voltage_collapse"; }
};

} // namespace mgd
