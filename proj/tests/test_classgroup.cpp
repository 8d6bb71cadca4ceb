#include "cmendo/classgroup.hpp"
#include "cmendo/errors.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cmendo;

namespace {

KIdeal as_kideal(const OrderPtr& O, const oracle::Ideal& a) {
    RatMatrix B(0, 4);
    for (std::size_t i = 0; i < 4; ++i) B.append_row(O->elem_from_coords(a.H.row(i)).vec());
    return KIdeal{O, Lattice::from_rows(B)};
}

long torsion_from_invariants(const ClassGroupData& G, long k) {
    long n = 1;
    for (const auto& d : G.invariants) n *= gcd(Int(k), d).get_si();
    return n;
}

}  // namespace

TEST_CASE("class groups of small maximal orders match brute-force enumeration") {
    for (const auto& c : {fx::kKlein, fx::kCyclic4}) {
        auto cm = fx::field(c);
        auto G = compute_class_group(*cm, OFIdeal::unit());
        auto B = oracle::class_group(*cm->OK, cm->OF->dF.get_si());
        CHECK(G->h == B.h());
        for (long k = 1; k <= B.h(); ++k) CHECK(torsion_from_invariants(*G, k) == B.torsion(k));
    }
}

TEST_CASE("dlog separates exactly the brute-force classes") {
    auto cm = fx::field(fx::kKlein);
    auto G = compute_class_group(*cm, OFIdeal::unit());
    auto B = oracle::class_group(*cm->OK, cm->OF->dF.get_si());
    std::vector<IntVec> logs;
    for (const auto& a : B.ideals) logs.push_back(dlog(*G, as_kideal(cm->OK, a)));
    for (std::size_t i = 0; i < logs.size(); ++i) {
        CHECK(is_principal(*G, as_kideal(cm->OK, B.ideals[i])) == (B.class_of[i] == 0));
        for (std::size_t j = 0; j < i; ++j) CHECK((logs[i] == logs[j]) == (B.class_of[i] == B.class_of[j]));
    }
}

TEST_CASE("dlog is a homomorphism") {
    auto cm = fx::field(fx::kCyclic4);
    auto G = compute_class_group(*cm, OFIdeal::unit());
    auto ideals = oracle::ideals_up_to(*cm->OK, 30);
    for (std::size_t i = 0; i < ideals.size(); i += 3)
        for (std::size_t j = 0; j < ideals.size(); j += 4) {
            KIdeal a = as_kideal(cm->OK, ideals[i]), b = as_kideal(cm->OK, ideals[j]);
            CHECK(dlog(*G, k_mul(a, b)) == G->add(dlog(*G, a), dlog(*G, b)));
        }
}

TEST_CASE("class numbers along the main example's order lattice") {
    auto cache = fx::groups(fx::kMain);
    auto cm = fx::field(fx::kMain);
    const auto& p11 = cm->v_factors[0].prime.ideal;
    const auto& p131 = cm->v_factors[1].prime.ideal;
    auto GK = cache->get(OFIdeal::unit());
    auto G11 = cache->get(p11);
    auto G131 = cache->get(p131);
    auto Gv = cache->get(cm->v);
    CHECK(GK->h == 10);
    CHECK(G11->h == 120);
    CHECK(G131->h == 1320);
    CHECK(Gv->h == 15840);
    CHECK(G11->invariants == std::vector<Int>{2, 60});
    CHECK(G131->invariants == std::vector<Int>{2, 660});
    CHECK(Gv->invariants == std::vector<Int>{2, 12, 660});
}

TEST_CASE("order of L1 = (7, pi^2 + pi + 6) agrees with a generator search") {
    auto cm = fx::field(fx::kMain);
    auto cache = fx::groups(fx::kMain);
    PrimeOverL L1 = primes_over(*cm, Int(7))[0];
    REQUIRE(L1.rpoly == std::vector<Int>{6, 1, 1});
    double eps = oracle::fundamental_unit(5);
    auto L1K = oracle::ideal_from_lattice(*cm->OK, k_prime(cm->OK, L1).lat);
    for (const auto& [p, e] : cm->v_factors) {
        auto G = cache->get(p.ideal);
        Int lib = element_order(*G, k_prime(G->order, L1));
        long brute = oracle::order_in_suborder(*cm->OK, *G->order, L1K, eps);
        CHECK(lib == brute);
        CHECK(G->h % lib == 0);
    }
    CHECK(element_order(*cache->get(cm->v_factors[0].prime.ideal), k_prime(cm->order_of(cm->v_factors[0].prime.ideal), L1)) == 60);
    CHECK(element_order(*cache->get(cm->v_factors[1].prime.ideal), k_prime(cm->order_of(cm->v_factors[1].prime.ideal), L1)) == 55);
}

TEST_CASE("maps between class groups are surjective with the expected kernel") {
    auto cache = fx::groups(fx::kDepth3);
    auto cm = fx::field(fx::kDepth3);
    auto ds = of_divisors(*cm->OF, cm->v);
    for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
        auto Gup = cache->get(ds[i]), Glow = cache->get(ds[i + 1]);
        IntMatrix M = class_group_hom(*Glow, *Gup);
        // The image of the generators spans the target.
        IntMatrix R(0, Gup->rank());
        for (std::size_t r = 0; r < M.rows(); ++r) R.append_row(M.row(r));
        for (std::size_t r = 0; r < Gup->rank(); ++r) {
            IntVec e(Gup->rank(), Int(0));
            e[r] = Gup->invariants[r];
            R.append_row(e);
        }
        if (Gup->rank() > 0) CHECK(abs(det(hnf_rows(R).H)) == 1);
        CHECK(Glow->h % Gup->h == 0);
        // p^k | f: the kernel has order N(p) - chi at the first step and N(p) after.
        Int N = cm->v_factors[0].prime.norm();
        int chi = split_symbol(*cm, cm->v_factors[0].prime);
        CHECK(Glow->h / Gup->h == (i == 0 ? N - chi : N));
    }
    CHECK_THROWS_AS(class_group_hom(*cache->get(ds[0]), *cache->get(ds[1])), Error);
}

TEST_CASE("SNF bookkeeping") {
    auto G = fx::groups(fx::kTwoPrimes)->get(fx::field(fx::kTwoPrimes)->v);
    CHECK(G->h == 78);
    Int prod = 1;
    for (std::size_t i = 0; i < G->rank(); ++i) {
        prod *= G->invariants[i];
        if (i > 0) CHECK(G->invariants[i] % G->invariants[i - 1] == 0);
        IntVec g = G->dlog_exponents(G->generators[i]);
        IntVec unit = G->zero();
        unit[i] = 1;
        CHECK(g == unit);
        CHECK(G->order_of(g) == G->invariants[i]);
    }
    CHECK(prod == G->h);
}
