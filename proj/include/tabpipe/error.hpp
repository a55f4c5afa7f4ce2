#pragma once

#include <stdexcept>
#include <string>

namespace tabpipe {

enum class ErrorCode {
    UnknownColumn,
    DuplicateColumn,
    LengthMismatch,
    SchemaMismatch,
    NotAStringColumn,
    NotADateTimeColumn,
    NonNumericColumn,
    ConstantColumn,
    InsufficientData,
    ZeroVariance,
    UnknownFunction,
    BadRegex,
    BadRangeSpec,
    BadFraction,
    BadParam,
    MalformedTokenList,
    EmptySelection,
    AmbiguousPredicate,
    ExprSyntax,
    SqlSyntax,
    WrongTable,
    TypeError,
    JsonSyntax,
    MissingStagesKey,
    EmptyPipeline,
    StageNotObject,
    MissingStageType,
    UnknownStageType,
    NoCurrentFrame,
    UnknownStoredFrame,
    FileNotFound,
    FileExists,
    IoError,
    CsvParse,
    RaggedRow,
    TooFewPoints,
    SingleCluster,
    MissingFeaturesVector,
    BadKRange,
    UnsupportedColumnType,
    EmptyMatrix,
    PairplotTooLarge,
    NoCategoricalColumns,
    NoNumericColumns,
    StageError,
};

inline const char* errorCodeName(ErrorCode c) {
    switch (c) {
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::DuplicateColumn: return "DuplicateColumn";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::NotAStringColumn: return "NotAStringColumn";
        case ErrorCode::NotADateTimeColumn: return "NotADateTimeColumn";
        case ErrorCode::NonNumericColumn: return "NonNumericColumn";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::UnknownFunction: return "UnknownFunction";
        case ErrorCode::BadRegex: return "BadRegex";
        case ErrorCode::BadRangeSpec: return "BadRangeSpec";
        case ErrorCode::BadFraction: return "BadFraction";
        case ErrorCode::BadParam: return "BadParam";
        case ErrorCode::MalformedTokenList: return "MalformedTokenList";
        case ErrorCode::EmptySelection: return "EmptySelection";
        case ErrorCode::AmbiguousPredicate: return "AmbiguousPredicate";
        case ErrorCode::ExprSyntax: return "ExprSyntax";
        case ErrorCode::SqlSyntax: return "SqlSyntax";
        case ErrorCode::WrongTable: return "WrongTable";
        case ErrorCode::TypeError: return "TypeError";
        case ErrorCode::JsonSyntax: return "JsonSyntax";
        case ErrorCode::MissingStagesKey: return "MissingStagesKey";
        case ErrorCode::EmptyPipeline: return "EmptyPipeline";
        case ErrorCode::StageNotObject: return "StageNotObject";
        case ErrorCode::MissingStageType: return "MissingStageType";
        case ErrorCode::UnknownStageType: return "UnknownStageType";
        case ErrorCode::NoCurrentFrame: return "NoCurrentFrame";
        case ErrorCode::UnknownStoredFrame: return "UnknownStoredFrame";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::FileExists: return "FileExists";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::CsvParse: return "CsvParse";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::SingleCluster: return "SingleCluster";
        case ErrorCode::MissingFeaturesVector: return "MissingFeaturesVector";
        case ErrorCode::BadKRange: return "BadKRange";
        case ErrorCode::UnsupportedColumnType: return "UnsupportedColumnType";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::PairplotTooLarge: return "PairplotTooLarge";
        case ErrorCode::NoCategoricalColumns: return "NoCategoricalColumns";
        case ErrorCode::NoNumericColumns: return "NoNumericColumns";
        case ErrorCode::StageError: return "StageError";
    }
    return "Unknown";
}

/// Single exception type carrying a machine-checkable code plus a message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tabpipe
