#ifndef HECKE_ERRORS_HPP
#define HECKE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hecke {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Query beyond the range covered by a coefficient table or sieve.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Input that makes an exact computation degenerate (e.g. a zero Lucas term).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of a verification routine does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for coefficient cache parse/validation failures.
class TableFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class VersionMismatchError : public TableFormatError {
public:
    using TableFormatError::TableFormatError;
};

class ChecksumError : public TableFormatError {
public:
    using TableFormatError::TableFormatError;
};

class MalformedRowError : public TableFormatError {
public:
    using TableFormatError::TableFormatError;
};

class DescriptorMismatchError : public TableFormatError {
public:
    using TableFormatError::TableFormatError;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hecke

#endif // HECKE_ERRORS_HPP
