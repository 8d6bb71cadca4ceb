#pragma once

#include "cmendo/certificate.hpp"
#include "cmendo/sim.hpp"

namespace cmendo {

struct DriverConfig {
    Int C_bound = 3;  // primes of norm below this are climbed
    RelationParams relation;
    std::uint64_t walk_seed = 1;
    bool force = false;  // skip the requirements check
};

struct ClimbResult {
    int valuation = 0;
    VarietyId top{};
};

// Level of A in the p-volcano of the given depth, found from non-backtracking
// walks to the floor.
int volcano_level(IsogenyOracle& oracle, const VarietyId& A, const RealPrime& p, int depth, std::uint64_t seed = 1);
ClimbResult isogeny_climb(IsogenyOracle& oracle, const VarietyId& A, const RealPrime& p, int depth,
                          std::uint64_t seed = 1);

// Whether the chain of isogenies attached to R returns to A.
bool relation_holds_for(IsogenyOracle& oracle, const VarietyId& A, const Relation& R);

struct EndoringStep {
    RealPrime prime;
    int k = 0;  // 0 for a climb
    bool divides = false;
    std::optional<Relation> relation;
};

struct EndoringResult {
    OFIdeal u;
    VarietyId top{};  // A after climbing the small primes
    std::vector<EndoringStep> steps;
};

// Identifying ideal of End A, from above.  Throws RequirementsViolated
// unless the requirements hold or cfg.force is set.
EndoringResult compute_endoring(ClassGroupCache& cache, IsogenyOracle& oracle, const VarietyId& A,
                                const DriverConfig& cfg = {});

// Certificate for the claim f(A) = u.  Primes of v with norm below
// cfg.C_bound get no relations; verify climbs them instead.
Certificate certify(ClassGroupCache& cache, const OFIdeal& u, const OFIdeal& v, const DriverConfig& cfg = {});

struct VerifyResult {
    bool ok = false;
    std::string reason;
    explicit operator bool() const { return ok; }
};

// Structural checks, then climbs the primes without relations (comparing
// the level with u for those in cert.v) and evaluates each relation
// through the oracle.  Never throws.
VerifyResult verify(const CMField& cm, IsogenyOracle& oracle, const VarietyId& A, const Certificate& cert,
                    std::uint64_t walk_seed = 1);

// Recomputes the class-group side of every entry (holds in O1, fails in O2).
VerifyResult audit_certificate(ClassGroupCache& cache, const Certificate& cert);

}  // namespace cmendo
