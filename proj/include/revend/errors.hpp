#pragma once

#include <stdexcept>
#include <string>

namespace revend {

// Every error raised by the library derives from Error so the CLI can map
// each class onto its documented exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: unknown names, bad parameters, points outside a model.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed text (expressions, curve files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not reach its requested accuracy.
class NumericError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public NumericError {
public:
    using NumericError::NumericError;
};

class ReparamError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace revend
