#pragma once

#include <stdexcept>
#include <string>

namespace graphlim {

/// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind : int
{
    Parse = 2,
    Budget = 3,
    Precondition = 4,
    Invariant = 5,
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string & message) :
        std::runtime_error(message),
        kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

/// Malformed input: files, headers, out-of-range values.
class ParseError : public Error
{
public:
    explicit ParseError(const std::string & m) : Error(ErrorKind::Parse, m) {}
};

/// An enumeration guard or block cap was exceeded.
class BudgetExceeded : public Error
{
public:
    explicit BudgetExceeded(const std::string & m) : Error(ErrorKind::Budget, m) {}
};

/// A mathematical precondition does not hold for the given inputs.
class PreconditionError : public Error
{
public:
    explicit PreconditionError(const std::string & m) : Error(ErrorKind::Precondition, m) {}
};

/// An identity that must hold by construction was violated.
class InvariantError : public Error
{
public:
    explicit InvariantError(const std::string & m) : Error(ErrorKind::Invariant, m) {}
};

} // namespace graphlim
