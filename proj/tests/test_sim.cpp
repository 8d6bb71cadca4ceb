#include <map>
#include <set>

#include "cmendo/errors.hpp"
#include "cmendo/sim.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cmendo;

namespace {

// All vertices when the class groups are small, else the first `cap` classes per level vector.
std::vector<VarietyId> vertices(SimWorld& w, std::size_t cap = 40) {
    std::vector<VarietyId> out;
    std::vector<int> levels(w.volcano_primes().size(), 0);
    for (;;) {
        auto G = w.group_at(levels);
        IntVec c = G->zero();
        for (std::size_t n = 0; n < cap; ++n) {
            out.push_back(w.variety_at({levels, c}));
            std::size_t i = 0;
            while (i < c.size() && (c[i] += 1) == G->invariants[i]) c[i++] = 0;
            if (i == c.size()) break;
        }
        std::size_t i = 0;
        while (i < levels.size() && ++levels[i] > w.volcano_primes()[i].e) levels[i++] = 0;
        if (i == levels.size()) break;
    }
    return out;
}

std::vector<PrimeOverL> some_primes(const CMField& cm, std::size_t n) {
    std::vector<PrimeOverL> out;
    for (std::uint64_t ell : primes_up_to(200)) {
        if (cm.undesirable(Int(ell))) continue;
        for (const auto& P : primes_over(cm, Int(ell)))
            if (out.size() < n) out.push_back(P);
    }
    return out;
}

}  // namespace

TEST_CASE("volcano degrees, horizontal edges and edge directions") {
    for (const auto& c : {fx::kTwoPrimes, fx::kDepth2, fx::kDepth3}) {
        auto cm = fx::field(c);
        auto [w, A] = SimWorld::build(fx::groups(c), cm->v, OFIdeal::unit(), 1);
        for (const auto& X : vertices(*w)) {
            SimState s = w->hidden_state(X);
            for (std::size_t i = 0; i < w->volcano_primes().size(); ++i) {
                const auto& [p, d] = w->volcano_primes()[i];
                auto nb = w->list_l_neighbors(X, p);
                int chi = split_symbol(*cm, p);
                if (s.levels[i] == d) {
                    CHECK(nb.size() == 1);
                } else {
                    CHECK(nb.size() == p.norm().get_ui() + 1);
                }
                long horizontal = 0, up = 0;
                for (const auto& Y : nb) {
                    SimState t = w->hidden_state(Y);
                    for (std::size_t j = 0; j < t.levels.size(); ++j)
                        if (j != i) CHECK(t.levels[j] == s.levels[j]);
                    int step = t.levels[i] - s.levels[i];
                    CHECK(std::abs(step) <= 1);
                    horizontal += step == 0;
                    up += step == -1;
                    // Every edge can be walked back.
                    auto back = w->list_l_neighbors(Y, p);
                    CHECK(std::find(back.begin(), back.end(), X) != back.end());
                }
                CHECK(horizontal == (s.levels[i] == 0 ? 1 + chi : 0));
                CHECK(up == (s.levels[i] > 0 ? 1 : 0));
            }
        }
    }
}

TEST_CASE("each volcano has v_p(v) + 1 levels with h(O) vertices on each") {
    for (const auto& c : {fx::kDepth2, fx::kDepth3}) {
        auto cm = fx::field(c);
        auto [w, A] = SimWorld::build(fx::groups(c), cm->v, cm->v, 3);
        const auto& [p, d] = w->volcano_primes()[0];
        std::set<VarietyId> seen{A};
        std::vector<VarietyId> todo{A};
        while (!todo.empty()) {
            VarietyId X = todo.back();
            todo.pop_back();
            for (const auto& Y : w->list_l_neighbors(X, p))
                if (seen.insert(Y).second) todo.push_back(Y);
        }
        std::map<int, long> per_level;
        for (const auto& X : seen) ++per_level[w->hidden_state(X).levels[0]];
        REQUIRE(per_level.size() == static_cast<std::size_t>(d + 1));
        for (const auto& [level, n] : per_level) CHECK(Int(n) == w->group_at({level})->h);
    }
}

TEST_CASE("the class-group action is free and commutes with ascending isogenies") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto [w, A] = SimWorld::build(fx::groups(fx::kTwoPrimes), cm->v, cm->v, 5);
    auto G = w->group_at({1, 1});
    // Generators act with exactly their orders.
    for (std::size_t j = 0; j < G->rank(); ++j) {
        VarietyId X = A;
        for (Int k = 1; k <= G->invariants[j]; ++k) {
            for (std::size_t t = 0; t < G->fb.size(); ++t) X = w->apply_prime(X, G->fb[t], G->generators[j][t]);
            CHECK((X == A) == (k == G->invariants[j]));
        }
    }
    // Acting by L then ascending equals ascending then acting by L.
    const RealPrime& p = w->volcano_primes()[1].prime;
    for (const auto& L : some_primes(*cm, 12)) {
        VarietyId B = w->apply_prime(A, L, Int(3));
        auto upA = w->list_l_neighbors(A, p), upB = w->list_l_neighbors(B, p);
        REQUIRE(upA.size() == 1);
        REQUIRE(upB.size() == 1);
        CHECK(w->apply_prime(upA[0], L, Int(3)) == upB[0]);
        CHECK(w->apply_prime(B, L, Int(-3)) == A);
        CHECK(w->hidden_state(B).coords == G->add(w->hidden_state(A).coords, G->scale(dlog_prime(*G, L), Int(3))));
    }
}

TEST_CASE("simulator inputs are validated") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto groups = fx::groups(fx::kTwoPrimes);
    OFIdeal p5 = cm->v_factors[0].prime.ideal, p13 = cm->v_factors[1].prime.ideal;
    CHECK_THROWS_AS(SimWorld::build(groups, p5, p13, 1), Error);
    CHECK_THROWS_AS(SimWorld::build(groups, of_mul(*cm->OF, cm->v, cm->v), OFIdeal::unit(), 1), Error);
    auto [w, A] = SimWorld::build(groups, p5, p5, 1);
    try {
        w->list_l_neighbors(A, cm->v_factors[1].prime);
        FAIL("expected NotVolcanoPrime");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotVolcanoPrime);
    }
    try {
        w->apply_prime(A, PrimeOverL{Int(5), {Int(0), Int(1)}}, Int(1));
        FAIL("expected InadmissiblePrime");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InadmissiblePrime);
    }
    CHECK_THROWS_AS(w->hidden_state(VarietyId{}), Error);
    CHECK(w->hidden_fplus(A) == p5);
}

TEST_CASE("ids depend on the seed, states do not") {
    auto cm = fx::field(fx::kDepth2);
    auto groups = fx::groups(fx::kDepth2);
    auto [w1, A1] = SimWorld::build(groups, cm->v, cm->v, 4);
    auto [w2, A2] = SimWorld::build(groups, cm->v, cm->v, 4);
    auto [w3, A3] = SimWorld::build(groups, cm->v, cm->v, 5);
    CHECK(A1 == A2);
    CHECK(id_hex(A1).size() == 32);
    SimState s = w1->hidden_state(A1);
    CHECK(w3->variety_at(s) != A1);
    CHECK(w1->variety_at(s) == A1);
    (void)A3;
}

TEST_CASE("cost counters") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto [w, A] = SimWorld::build(fx::groups(fx::kTwoPrimes), cm->v, cm->v, 1);
    auto L = some_primes(*cm, 1)[0];
    w->reset_cost();
    w->apply_prime(A, L, Int(-4));
    w->list_l_neighbors(A, w->volcano_primes()[0].prime);
    SimCost c = w->cost();
    CHECK(c.apply_calls == 1);
    CHECK(c.neighbor_calls == 1);
    CHECK(c.isogeny_steps == 4);
    CHECK(c.weighted_steps == 4 * prime_below(*cm, L).norm());
}
