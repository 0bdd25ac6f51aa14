#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsq {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed potential text. `offset` is the byte offset into the source.
class ParseError : public Error
{
public:
    ParseError(std::size_t offset, std::string message, std::vector<std::string> expected = {});

    std::size_t offset() const noexcept { return offset_; }
    const std::string& message() const noexcept { return message_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string message_;
    std::vector<std::string> expected_;
};

// Expression evaluated outside its natural domain (log of non-positive value, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

// Turning points missing, degenerate, or the well hypothesis is violated.
class GeometryError : public Error
{
public:
    using Error::Error;
};

// Quadrature, root finding or eigen-solve failed to reach its tolerance.
class NumericError : public Error
{
public:
    using Error::Error;
};

} // namespace bsq
