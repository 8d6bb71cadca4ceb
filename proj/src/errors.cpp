#include "cmendo/errors.hpp"

namespace cmendo {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrimePower: return "NotPrimePower";
        case Errc::ReduciblePolynomial: return "ReduciblePolynomial";
        case Errc::NotWeil: return "NotWeil";
        case Errc::NotOrdinary: return "NotOrdinary";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::FactorizationFailure: return "FactorizationFailure";
        case Errc::NotSubring: return "NotSubring";
        case Errc::NotRMOrder: return "NotRMOrder";
        case Errc::UndesirablePrime: return "UndesirablePrime";
        case Errc::OwnerMismatch: return "OwnerMismatch";
        case Errc::NotInvertible: return "NotInvertible";
        case Errc::FactorBaseTooSmall: return "FactorBaseTooSmall";
        case Errc::DecompositionTimeout: return "DecompositionTimeout";
        case Errc::NotNested: return "NotNested";
        case Errc::NoRelationFound: return "NoRelationFound";
        case Errc::Precondition: return "Precondition";
        case Errc::NotDivisor: return "NotDivisor";
        case Errc::InadmissiblePrime: return "InadmissiblePrime";
        case Errc::NotVolcanoPrime: return "NotVolcanoPrime";
        case Errc::OracleInconsistency: return "OracleInconsistency";
        case Errc::RequirementsViolated: return "RequirementsViolated";
        case Errc::ParseError: return "ParseError";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace cmendo
