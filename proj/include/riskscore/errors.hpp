#pragma once

#include <stdexcept>
#include <string>

namespace riskscore {

// Base class for everything this library throws on purpose. The CLI maps
// UserError subclasses to exit code 2 and anything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problems caused by inputs under the caller's control (files, flags, configs,
// degenerate data) as opposed to internal failures.
class UserError : public Error {
public:
    using Error::Error;
};

class SchemaError : public UserError {
public:
    using UserError::UserError;
};

class ValueTypeError : public UserError {
public:
    using UserError::UserError;
};

class ParseError : public UserError {
public:
    ParseError(const std::string& what, int line)
        : UserError("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : UserError(what), line_(-1) {}
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public UserError {
public:
    using UserError::UserError;
};

class ConfigError : public UserError {
public:
    using UserError::UserError;
};

// Thrown by trainers when the labels contain a single class.
class DegenerateLabelError : public UserError {
public:
    using UserError::UserError;
};

// AUC is undefined without at least one positive and one negative.
class UndefinedAucError : public UserError {
public:
    using UserError::UserError;
};

class AuditError : public UserError {
public:
    using UserError::UserError;
};

// Integer search ran out of budget before producing any incumbent.
class NoModelError : public Error {
public:
    using Error::Error;
};

}  // namespace riskscore
