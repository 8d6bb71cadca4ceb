#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "cmendo/relations.hpp"

namespace fx {

struct Context {
    const char* name;
    long q, a1, a2;
};

// Main worked example: v = p11 p131, requirements fail only on the parity of
// [O_F : Z[pi + pibar]].
inline constexpr Context kMain{"q82307", 82307, 658, 263610};
// All requirements hold; v = p5 p13 (p5 inert, p13 ramified in K).
inline constexpr Context kTwoPrimes{"q61", 61, 3, 117};
// v = p5^2.
inline constexpr Context kDepth2{"q29", 29, 11, 73};
// v = p3^3.
inline constexpr Context kDepth3{"q19", 19, 1, 23};
// K is the fifth cyclotomic field.
inline constexpr Context kZeta5{"q11", 11, 1, -9};
// Trivial v, small discriminants: Cl(O_K) = Z/2 x Z/2, Z/4 and Z/5.
inline constexpr Context kKlein{"q7a", 7, 3, 13};
inline constexpr Context kCyclic4{"q7b", 7, 3, 12};
inline constexpr Context kCyclic5{"q7c", 7, 1, 1};

// Built once per process.
inline cmendo::CMFieldPtr field(const Context& c) {
    static std::map<std::string, cmendo::CMFieldPtr> memo;
    auto& f = memo[c.name];
    if (!f) f = cmendo::CMField::create(cmendo::build_weil_context(cmendo::Int(c.q), cmendo::Int(c.a1), cmendo::Int(c.a2)));
    return f;
}

inline std::shared_ptr<cmendo::ClassGroupCache> groups(const Context& c) {
    static std::map<std::string, std::shared_ptr<cmendo::ClassGroupCache>> memo;
    auto& g = memo[c.name];
    if (!g) g = std::make_shared<cmendo::ClassGroupCache>(field(c));
    return g;
}

inline std::filesystem::path dir() { return CMENDO_FIXTURE_DIR; }

std::string slurp(const std::filesystem::path& p);

// O_F ideal from its HNF entries.
cmendo::OFIdeal hnf(const cmendo::CMField& cm, long a, long b, long c);

}  // namespace fx
