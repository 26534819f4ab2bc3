#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qes {

enum class ErrorKind {
    Syntax,
    UnknownFunction,
    UnboundParameter,
    Domain,
    InvalidArgument,
    NoSignChange,
    MultipleZeros,
    NonPositiveSlope,
    SignCondition,
    NonFiniteSample,
    NonFinitePotential,
    ToleranceNotReached,
    OverflowUnnormalizable,
    UnknownSeed,
    UnknownParameter,
    ConstraintViolation,
    MissingClosedForm,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoSignChange: return "NoZero";
    case ErrorKind::MultipleZeros: return "MultipleZeros";
    case ErrorKind::NonPositiveSlope: return "NonPositiveSlope";
    case ErrorKind::SignCondition: return "SignCondition";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::NonFinitePotential: return "NonFinitePotential";
    case ErrorKind::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorKind::OverflowUnnormalizable: return "OverflowUnnormalizable";
    case ErrorKind::UnknownSeed: return "UnknownSeed";
    case ErrorKind::UnknownParameter: return "UnknownParameter";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::MissingClosedForm: return "MissingClosedForm";
    }
    return "Error";
}

/// Every failure raised by the library. `kind()` is the stable, testable part;
/// the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with the character offset where the parser gave up.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& message)
        : Error(ErrorKind::Syntax, message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace qes
