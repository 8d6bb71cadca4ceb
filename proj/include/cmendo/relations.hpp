#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>

#include "cmendo/classgroup.hpp"

namespace cmendo {

/// One factor L^e of a relation.  `prime` is the prime actually used;
/// `conjugate` records that it replaced the conjugate of a drawn prime
/// whose net exponent was negative.
struct RelationTerm {
    PrimeOverL prime;
    bool conjugate = false;
    Int exponent;  // >= 1
    bool operator==(const RelationTerm&) const = default;
};

struct RelationMeta {
    Int B;               // smoothness and prime-norm bound
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    Int exponent_bound;  // equals B
    Int prime_count_bound;
    bool operator==(const RelationMeta&) const = default;
};

struct Relation {
    std::vector<RelationTerm> terms;  // sorted by prime
    RelationMeta meta;
    bool operator==(const Relation&) const = default;
};

struct RelationParams {
    double mu = 0.7071067811865476;  // 1/sqrt(2)
    int k0 = 16;
    std::optional<Int> B_override;
    std::uint64_t max_trials = 2000;
    std::uint64_t seed = 1;
};

// L[1/2, mu](disc^2), rounded.
Int relation_smoothness_bound(const Int& disc, double mu);
// k0 + 8 sqrt(log|disc|), rounded down.
Int relation_prime_count_bound(const Int& disc, int k0);

/// Class groups of the orders O(f) for one field, computed on demand with a
/// common factor-base bound and optionally persisted under a directory.
class ClassGroupCache {
public:
    ClassGroupCache(CMFieldPtr cm, ClassGroupParams params = {},
                    std::optional<std::filesystem::path> dir = std::nullopt);
    ClassGroupPtr get(const OFIdeal& f);
    const CMField& field() const { return *cm_; }
    const CMFieldPtr& field_ptr() const { return cm_; }
    const ClassGroupParams& params() const { return params_; }
    std::size_t computed() const { return computed_; }

private:
    CMFieldPtr cm_;
    ClassGroupParams params_;
    std::optional<std::filesystem::path> dir_;
    std::mutex mu_;
    std::map<std::vector<Int>, ClassGroupPtr> groups_;
    std::size_t computed_ = 0;
};

// Relation holding in G1.order and not in G2.order.
Relation find_relation(const CMField& cm, const ClassGroupData& G1, const ClassGroupData& G2,
                       const RelationParams& params = {});

// Class of the product of the relation's prime powers in G.order.
IntVec relation_class(const ClassGroupData& G, const Relation& R);
bool relation_holds_in_order(const ClassGroupData& G, const Relation& R);

// The orders O1 = O(p^(k-1-v_p(v)) v) and O2 = O(p^k) used to decide p^k | f.
std::pair<OFIdeal, OFIdeal> prime_power_test_orders(const CMField& cm, const OFIdeal& v, const RealPrime& p, int k);
Relation relation_for_prime_power(const OFIdeal& v, const RealPrime& p, int k, ClassGroupCache& cache,
                                  const RelationParams& params = {});

}  // namespace cmendo
