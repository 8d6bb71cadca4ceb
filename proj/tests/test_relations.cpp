#include <cmath>

#include "cmendo/errors.hpp"
#include "cmendo/relations.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cmendo;

namespace {

// The relation's ideal, multiplied out in O without any reduction.
KIdeal relation_ideal(const OrderPtr& O, const Relation& R) {
    KIdeal a = unit_ideal(O);
    for (const auto& t : R.terms) a = k_mul(a, k_from_prime_power(O, t.prime, static_cast<int>(t.exponent.get_si())));
    return a;
}

void check_bounds(const Relation& R, const Int& D1, const RelationParams& P) {
    double ln_n = 2 * std::log(std::fabs(D1.get_d()));
    Int B = static_cast<long>(std::llround(std::exp(P.mu * std::sqrt(ln_n * std::log(ln_n)))));
    Int count = P.k0 + static_cast<long>(std::floor(8 * std::sqrt(std::log(std::fabs(D1.get_d())))));
    CHECK(R.meta.B == B);
    CHECK(R.meta.exponent_bound == B);
    CHECK(R.meta.prime_count_bound == count);
    CHECK(Int(static_cast<long>(R.terms.size())) <= count);
    for (std::size_t i = 0; i < R.terms.size(); ++i) {
        const auto& t = R.terms[i];
        CHECK(t.exponent >= 1);
        CHECK(t.exponent <= B);
        CHECK(t.prime.norm() <= B);
        if (i > 0) CHECK(R.terms[i - 1].prime < t.prime);
    }
}

}  // namespace

TEST_CASE("smoothness and prime-count bounds") {
    Int D = 1000000;
    double ln = 2 * std::log(1e6);
    CHECK(relation_smoothness_bound(D, 0.5) == static_cast<long>(std::llround(std::exp(0.5 * std::sqrt(ln * std::log(ln))))));
    CHECK(relation_prime_count_bound(D, 16) == 16 + static_cast<long>(std::floor(8 * std::sqrt(std::log(1e6)))));
    CHECK(relation_smoothness_bound(-D, 0.5) == relation_smoothness_bound(D, 0.5));
}

TEST_CASE("decision rule on the order lattice of v = p5 p13") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto cache = fx::groups(fx::kTwoPrimes);
    RelationParams P;
    for (const auto& [p, e] : cm->v_factors) {
        Relation R = relation_for_prime_power(cm->v, p, 1, *cache, P);
        auto [f1, f2] = prime_power_test_orders(*cm, cm->v, p, 1);
        check_bounds(R, cache->get(f1)->order->disc(), P);
        for (const auto& f : of_divisors(*cm->OF, cm->v)) {
            auto G = cache->get(f);
            bool expect = !of_divides(p.ideal, f);
            CHECK(relation_holds_in_order(*G, R) == expect);
            CHECK(is_principal(*G, relation_ideal(G->order, R)) == expect);
        }
    }
}

TEST_CASE("prime-power tests on a depth-2 volcano") {
    auto cm = fx::field(fx::kDepth2);
    auto cache = fx::groups(fx::kDepth2);
    const RealPrime& p = cm->v_factors[0].prime;
    REQUIRE(cm->v_factors[0].e == 2);
    for (int k = 1; k <= 2; ++k) {
        auto [f1, f2] = prime_power_test_orders(*cm, cm->v, p, k);
        CHECK(f1 == of_pow(*cm->OF, p.ideal, k - 1));
        CHECK(f2 == of_pow(*cm->OF, p.ideal, k));
        Relation R = relation_for_prime_power(cm->v, p, k, *cache);
        for (const auto& f : of_divisors(*cm->OF, cm->v)) {
            bool expect = of_valuation(*cm->OF, f, p) < k;
            CHECK(relation_holds_in_order(*cache->get(f), R) == expect);
        }
    }
}

TEST_CASE("find_relation is deterministic in the seed and fails cleanly") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto cache = fx::groups(fx::kTwoPrimes);
    auto G1 = cache->get(OFIdeal::unit());
    auto G2 = cache->get(cm->v_factors[1].prime.ideal);
    RelationParams P;
    P.seed = 9;
    Relation a = find_relation(*cm, *G1, *G2, P), b = find_relation(*cm, *G1, *G2, P);
    CHECK(a == b);
    CHECK(a.meta.seed == 9);
    CHECK(relation_holds_in_order(*G1, a));
    CHECK_FALSE(relation_holds_in_order(*G2, a));

    P.max_trials = 0;
    CHECK_THROWS_AS(find_relation(*cm, *G1, *G2, P), Error);
    // Nothing separates an order from itself.
    P.max_trials = 30;
    CHECK_THROWS_AS(find_relation(*cm, *G1, *G1, P), Error);
}

TEST_CASE("explicit smoothness bound override") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto cache = fx::groups(fx::kTwoPrimes);
    RelationParams P;
    P.B_override = Int(400);
    Relation R = relation_for_prime_power(cm->v, cm->v_factors[0].prime, 1, *cache, P);
    CHECK(R.meta.B == 400);
    for (const auto& t : R.terms) CHECK(t.prime.norm() <= 400);
}
