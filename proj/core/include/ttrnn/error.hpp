#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttrnn {

enum class ErrorKind {
    // tensor-core
    ElementCountMismatch,
    ModeSizeMismatch,
    ModeIndexOutOfRange,
    // tt-format
    RankMismatch,
    InvalidRank,
    LengthMismatch,
    // neural
    ShapeMismatch,
    EmptySequence,
    InvalidLabel,
    CacheMismatch,
    EmptyDataset,
    InvalidConfig,
    // features
    NonPositivePrice,
    InvalidBar,
    WindowTooLarge,
    MisalignedDates,
    InsufficientHistory,
    UnknownTarget,
    // backtest
    InvalidDistribution,
    ZeroVariance,
    // interpret
    ShapeDrift,
    // i/o
    IOFailure,
    ParseError,
};

/// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorCategory { Config, Data, Shape, Io, Numeric };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_of(kind_); }

private:
    ErrorKind kind_;
};

}  // namespace ttrnn
