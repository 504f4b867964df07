#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mechindep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// A full-column-rank (or invertibility) precondition does not hold.
class RankError : public Error {
public:
    using Error::Error;
};

/// Input exceeds an exhaustive-enumeration cap.
class SizeError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// A column with empty support reached a checker that needs nonempty supports.
class DegenerateColumn : public Error {
public:
    DegenerateColumn(std::size_t column, const std::string& what)
        : Error(what), column_(column) {}

    /// 1-based column index.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// Evaluation of a user-supplied function produced non-finite output.
class EvalError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

/// Two routes that must agree did not. Never expected; indicates a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

}  // namespace mechindep
