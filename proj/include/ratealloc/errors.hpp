#ifndef RATEALLOC_ERRORS_HPP
#define RATEALLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ratealloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its type invariant (raised at construction).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical solver or the auction loop failed.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A scenario document could not be parsed or validated.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Brute-force enumeration would exceed the configured point budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

} // namespace ratealloc

#endif
