#include "ttrnn/error.hpp"

namespace ttrnn {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ElementCountMismatch: return "ElementCountMismatch";
        case ErrorKind::ModeSizeMismatch: return "ModeSizeMismatch";
        case ErrorKind::ModeIndexOutOfRange: return "ModeIndexOutOfRange";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::InvalidRank: return "InvalidRank";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::EmptySequence: return "EmptySequence";
        case ErrorKind::InvalidLabel: return "InvalidLabel";
        case ErrorKind::CacheMismatch: return "CacheMismatch";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::NonPositivePrice: return "NonPositivePrice";
        case ErrorKind::InvalidBar: return "InvalidBar";
        case ErrorKind::WindowTooLarge: return "WindowTooLarge";
        case ErrorKind::MisalignedDates: return "MisalignedDates";
        case ErrorKind::InsufficientHistory: return "InsufficientHistory";
        case ErrorKind::UnknownTarget: return "UnknownTarget";
        case ErrorKind::InvalidDistribution: return "InvalidDistribution";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::ShapeDrift: return "ShapeDrift";
        case ErrorKind::IOFailure: return "IOFailure";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidConfig:
        case ErrorKind::InvalidRank:
        case ErrorKind::UnknownTarget:
            return ErrorCategory::Config;
        case ErrorKind::NonPositivePrice:
        case ErrorKind::InvalidBar:
        case ErrorKind::WindowTooLarge:
        case ErrorKind::MisalignedDates:
        case ErrorKind::InsufficientHistory:
        case ErrorKind::EmptyDataset:
        case ErrorKind::InvalidLabel:
        case ErrorKind::ParseError:
            return ErrorCategory::Data;
        case ErrorKind::ElementCountMismatch:
        case ErrorKind::ModeSizeMismatch:
        case ErrorKind::ModeIndexOutOfRange:
        case ErrorKind::RankMismatch:
        case ErrorKind::LengthMismatch:
        case ErrorKind::ShapeMismatch:
        case ErrorKind::EmptySequence:
        case ErrorKind::CacheMismatch:
        case ErrorKind::ShapeDrift:
            return ErrorCategory::Shape;
        case ErrorKind::IOFailure:
            return ErrorCategory::Io;
        case ErrorKind::InvalidDistribution:
        case ErrorKind::ZeroVariance:
            return ErrorCategory::Numeric;
    }
    return ErrorCategory::Numeric;
}

}  // namespace ttrnn
