#pragma once

#include <stdexcept>
#include <string>

namespace statsim {

enum class Errc {
    NegativeWeight,
    SumNotOne,
    EmptyAlphabet,
    DimensionMismatch,
    SymbolOutOfRange,
    InvalidAccuracy,
    ValueAboveB,
    StateSpaceTooLarge,
    NonRationalInput,
    TooManyVariables,
    FeatureSpaceTooLarge,
    EmptyClause,
    InvalidParameter,
    ParseError,
};

/// Library-wide exception; carries a machine-checkable code plus a message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NegativeWeight: return "NegativeWeight";
        case Errc::SumNotOne: return "SumNotOne";
        case Errc::EmptyAlphabet: return "EmptyAlphabet";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::SymbolOutOfRange: return "SymbolOutOfRange";
        case Errc::InvalidAccuracy: return "InvalidAccuracy";
        case Errc::ValueAboveB: return "ValueAboveB";
        case Errc::StateSpaceTooLarge: return "StateSpaceTooLarge";
        case Errc::NonRationalInput: return "NonRationalInput";
        case Errc::TooManyVariables: return "TooManyVariables";
        case Errc::FeatureSpaceTooLarge: return "FeatureSpaceTooLarge";
        case Errc::EmptyClause: return "EmptyClause";
        case Errc::InvalidParameter: return "InvalidParameter";
        case Errc::ParseError: return "ParseError";
    }
    return "UnknownError";
}

/// Process exit code for a failure class: 1 bad input, 2 budget/cap exceeded,
/// 3 invalid accuracy parameter.
inline int errc_exit_code(Errc code) {
    switch (code) {
        case Errc::StateSpaceTooLarge:
        case Errc::TooManyVariables:
        case Errc::FeatureSpaceTooLarge:
            return 2;
        case Errc::InvalidAccuracy:
            return 3;
        default:
            return 1;
    }
}

}  // namespace statsim
