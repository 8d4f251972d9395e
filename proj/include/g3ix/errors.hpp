#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace g3ix {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- linear algebra -------------------------------------------------------

struct SingularMatrixError : Error {
    using Error::Error;
};

/// Right-hand side has a component outside the column space.
struct InconsistentSystemError : Error {
    InconsistentSystemError(const std::string& msg, double violation_norm)
        : Error(msg), violation(violation_norm) {}
    double violation;
};

/// Pinned unknowns do not complement a full-rank pivot set.
struct SlotsNotFreeError : Error {
    using Error::Error;
};

// ---- expression language --------------------------------------------------

struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t byte_offset,
                std::vector<std::string> expected_tokens)
        : Error(msg), offset(byte_offset), expected(std::move(expected_tokens)) {}
    std::size_t offset;
    std::vector<std::string> expected;
};

struct UnboundParameterError : Error {
    UnboundParameterError(const std::string& msg, std::string param)
        : Error(msg), name(std::move(param)) {}
    std::string name;
};

struct DomainError : Error {
    using Error::Error;
};

// ---- geometry -------------------------------------------------------------

/// Coordinate chart degenerates (|sin u1| below the margin).
struct ChartSingularityError : Error {
    using Error::Error;
};

// ---- reduced system / classification ---------------------------------------

struct CasePatternUnstableError : Error {
    using Error::Error;
};

struct NoAdmissibleCaseError : Error {
    using Error::Error;
};

struct DenominatorVanishesError : Error {
    using Error::Error;
};

// ---- solution assembly / evaluation ----------------------------------------

struct DegenerateNError : Error {
    using Error::Error;
};

struct InvalidSampleError : Error {
    using Error::Error;
};

struct StencilOutOfChartError : Error {
    using Error::Error;
};

// ---- tooling ---------------------------------------------------------------

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace g3ix
