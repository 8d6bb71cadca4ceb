#pragma once

#include <stdexcept>
#include <string>

namespace cmendo {

enum class Errc {
    NotPrimePower,
    ReduciblePolynomial,
    NotWeil,
    NotOrdinary,
    DivisionByZero,
    FactorizationFailure,
    NotSubring,
    NotRMOrder,
    UndesirablePrime,
    OwnerMismatch,
    NotInvertible,
    FactorBaseTooSmall,
    DecompositionTimeout,
    NotNested,
    NoRelationFound,
    Precondition,
    NotDivisor,
    InadmissiblePrime,
    NotVolcanoPrime,
    OracleInconsistency,
    RequirementsViolated,
    ParseError,
    Internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

/// Parse failure in a structured-text document, with 1-based position.
class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& msg)
        : Error(Errc::ParseError, "line " + std::to_string(line) + ", column " +
                                      std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline void check(bool cond, Errc c, const std::string& msg) {
    if (!cond) throw Error(c, msg);
}

}  // namespace cmendo
