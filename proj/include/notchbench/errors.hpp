#pragma once

#include <stdexcept>
#include <string>

namespace notchbench {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// rating scale
class UnknownLabelError : public Error {
public:
    using Error::Error;
};
class ScaleMismatchError : public Error {
public:
    using Error::Error;
};

// dataset
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg), row_(0) {}
    ParseError(const std::string& msg, long row) : Error(msg + " (row " + std::to_string(row) + ")"), row_(row) {}
    long row() const { return row_; }

private:
    long row_;
};
class DuplicateKeyError : public Error {
public:
    using Error::Error;
};
class EmptyDatasetError : public Error {
public:
    using Error::Error;
};
class NotFittedError : public Error {
public:
    using Error::Error;
};
class DimensionMismatchError : public Error {
public:
    using Error::Error;
};
class BadFractionsError : public Error {
public:
    using Error::Error;
};
class BadKError : public Error {
public:
    using Error::Error;
};
class BadSpecError : public Error {
public:
    using Error::Error;
};

// trees and ensembles
class EmptyNodeError : public Error {
public:
    using Error::Error;
};
class BadParamsError : public Error {
public:
    using Error::Error;
};
class NoOobError : public Error {
public:
    using Error::Error;
};

// svm
class DegenerateLabelsError : public Error {
public:
    using Error::Error;
};
class SingleClassError : public Error {
public:
    using Error::Error;
};
class ModeMismatchError : public Error {
public:
    using Error::Error;
};

// evaluation
class LengthMismatchError : public Error {
public:
    using Error::Error;
};
class EmptyError : public Error {
public:
    using Error::Error;
};
class NoChangesError : public Error {
public:
    using Error::Error;
};
class EmptyJoinError : public Error {
public:
    using Error::Error;
};

// model persistence
class VersionMismatchError : public Error {
public:
    using Error::Error;
};
class CorruptModelError : public Error {
public:
    using Error::Error;
};

}  // namespace notchbench
