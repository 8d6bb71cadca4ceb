#include "cmendo/endoring.hpp"
#include "cmendo/errors.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cmendo;

TEST_CASE("level finding and climbing at every level of a depth-3 volcano") {
    auto cm = fx::field(fx::kDepth3);
    const auto& [p, d] = cm->v_factors[0];
    REQUIRE(d == 3);
    auto [w, A] = SimWorld::build(fx::groups(fx::kDepth3), cm->v, OFIdeal::unit(), 2);
    for (int level = 0; level <= d; ++level) {
        auto G = w->group_at({level});
        for (Int c = 0; c < G->h; c += 1) {
            IntVec coords = G->zero();
            if (!coords.empty()) coords[0] = c;
            VarietyId X = w->variety_at({{level}, coords});
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                CHECK(volcano_level(*w, X, p, d, seed) == level);
                ClimbResult r = isogeny_climb(*w, X, p, d, seed);
                CHECK(r.valuation == level);
                CHECK(w->hidden_state(r.top).levels[0] == 0);
            }
        }
    }
}

TEST_CASE("floor of a depth-1 volcano climbs to its unique neighbor") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto [w, A] = SimWorld::build(fx::groups(fx::kTwoPrimes), cm->v, cm->v, 2);
    for (const auto& [p, d] : cm->v_factors) {
        ClimbResult r = isogeny_climb(*w, A, p, d);
        CHECK(r.valuation == 1);
        CHECK(r.top == w->list_l_neighbors(A, p)[0]);
    }
}

TEST_CASE("compute_endoring recovers every hidden divisor, independent of C") {
    for (const auto& c : {fx::kTwoPrimes, fx::kDepth2}) {
        auto cm = fx::field(c);
        auto cache = fx::groups(c);
        for (const auto& hidden : of_divisors(*cm->OF, cm->v)) {
            auto [w, A] = SimWorld::build(cache, cm->v, hidden, 11);
            for (long C : {3L, 12L, 150L}) {
                DriverConfig cfg;
                cfg.C_bound = C;
                cfg.force = true;
                EndoringResult r = compute_endoring(*cache, *w, A, cfg);
                CHECK(r.u == hidden);
                for (const auto& s : r.steps) {
                    CHECK((s.k == 0) == (s.prime.norm() < C));
                    CHECK(s.relation.has_value() == (s.k > 0));
                }
            }
        }
    }
}

TEST_CASE("requirements gate the driver") {
    auto cm = fx::field(fx::kDepth2);
    auto cache = fx::groups(fx::kDepth2);
    auto [w, A] = SimWorld::build(cache, cm->v, cm->v, 1);
    DriverConfig cfg;
    CHECK_NOTHROW(compute_endoring(*cache, *w, A, cfg));
    cfg.C_bound = 2;
    CHECK_THROWS_AS(compute_endoring(*cache, *w, A, cfg), Error);

    auto z = fx::field(fx::kZeta5);
    auto zc = fx::groups(fx::kZeta5);
    auto [zw, Z] = SimWorld::build(zc, z->v, OFIdeal::unit(), 1);
    try {
        compute_endoring(*zc, *zw, Z, DriverConfig{});
        FAIL("expected RequirementsViolated");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RequirementsViolated);
    }
}

TEST_CASE("certify and verify across the divisor sweep") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto cache = fx::groups(fx::kTwoPrimes);
    auto ds = of_divisors(*cm->OF, cm->v);
    for (long C : {3L, 12L}) {
        DriverConfig cfg;
        cfg.C_bound = C;
        std::vector<Certificate> certs;
        for (const auto& u : ds) {
            certs.push_back(certify(*cache, u, cm->v, cfg));
            CHECK(audit_certificate(*cache, certs.back()).ok);
            CHECK(certs.back().u == u);
        }
        for (const auto& hidden : ds) {
            auto [w, A] = SimWorld::build(cache, cm->v, hidden, 13);
            for (std::size_t i = 0; i < ds.size(); ++i) {
                VerifyResult r = verify(*cm, *w, A, certs[i]);
                CHECK(r.ok == (ds[i] == hidden));
                if (!r.ok) CHECK(!r.reason.empty());
            }
        }
    }
}

TEST_CASE("tampered certificates are rejected without throwing") {
    auto cm = fx::field(fx::kTwoPrimes);
    auto cache = fx::groups(fx::kTwoPrimes);
    auto [w, A] = SimWorld::build(cache, cm->v, cm->v, 1);
    Certificate good = certify(*cache, cm->v, cm->v);
    REQUIRE(verify(*cm, *w, A, good).ok);
    REQUIRE(good.entries.size() == 2);

    // Without its entry a prime is climbed instead, which still pins its level.
    Certificate c = good;
    c.entries.pop_back();
    CHECK(verify(*cm, *w, A, c).ok);
    auto [w1, A1] = SimWorld::build(cache, cm->v, cm->v_factors[0].prime.ideal, 1);
    CHECK(verify(*cm, *w1, A1, c).reason.find("climbing finds valuation 0") != std::string::npos);

    c = good;
    c.entries[0].relation.terms[0].exponent += 1;
    CHECK_FALSE(audit_certificate(*cache, c).ok);

    c = good;
    c.entries[0].relation.terms[0].exponent = c.entries[0].relation.meta.exponent_bound + 1;
    CHECK(verify(*cm, *w, A, c).reason.find("exponent") != std::string::npos);

    c = good;
    c.a2 += 1;
    CHECK_FALSE(verify(*cm, *w, A, c).ok);

    c = good;
    c.entries[0].loop = 1;
    CHECK_FALSE(verify(*cm, *w, A, c).ok);

    c = good;
    c.v = cm->v_factors[0].prime.ideal;
    CHECK_FALSE(verify(*cm, *w, A, c).ok);

    c = good;
    std::swap(c.entries[0], c.entries[1]);
    CHECK_FALSE(verify(*cm, *w, A, c).ok);
}

TEST_CASE("certificates for a prime power") {
    auto cm = fx::field(fx::kDepth2);
    auto cache = fx::groups(fx::kDepth2);
    const RealPrime& p = cm->v_factors[0].prime;
    Certificate c = certify(*cache, p.ideal, cm->v);
    // u = p with v = p^2: p^2 must fail (loop 1) and p must hold (loop 2).
    REQUIRE(c.entries.size() == 2);
    CHECK(c.entries[0].loop == 1);
    CHECK(c.entries[0].k == 2);
    CHECK(c.entries[1].loop == 2);
    CHECK(c.entries[1].k == 1);
    for (const auto& hidden : of_divisors(*cm->OF, cm->v)) {
        auto [w, A] = SimWorld::build(cache, cm->v, hidden, 3);
        CHECK(verify(*cm, *w, A, c).ok == (hidden == p.ideal));
    }
}
