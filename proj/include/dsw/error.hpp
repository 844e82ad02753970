#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsw {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (ordinal literals, sequences, files, terms).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), message_(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }
    /// The message without the position suffix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t position_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A node set that is not a tree of decreasing sequences.
class InvalidTree : public Error {
public:
    using Error::Error;
};

/// A size cap or work budget would be exceeded. Never silently sampled around.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A colouring has no assignment for a tuple it is required to colour.
class TotalityError : public Error {
public:
    using Error::Error;
};

/// transform_colouring_d found two different colours for one class.
class NotEndUniform : public Error {
public:
    using Error::Error;
};

} // namespace dsw
