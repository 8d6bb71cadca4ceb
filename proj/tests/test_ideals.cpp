#include <random>

#include "cmendo/errors.hpp"
#include "cmendo/ideals.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cmendo;

namespace {

KIdeal as_kideal(const OrderPtr& OK, const oracle::Ideal& a) {
    RatMatrix B(0, 4);
    for (std::size_t i = 0; i < 4; ++i) B.append_row(OK->elem_from_coords(a.H.row(i)).vec());
    return KIdeal{OK, Lattice::from_rows(B)};
}

}  // namespace

TEST_CASE("O_F ideal arithmetic") {
    auto cm = fx::field(fx::kTwoPrimes);
    const RealOrder& OF = *cm->OF;
    std::vector<RealPrime> ps;
    for (long ell : {2L, 3L, 5L, 7L, 13L})
        for (const auto& p : real_primes_over(OF, Int(ell))) ps.push_back(p);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        std::vector<RealPrimePower> want;
        OFIdeal a = OFIdeal::unit();
        for (const auto& p : ps) {
            int e = static_cast<int>(rng() % 3);
            if (e == 0) continue;
            want.push_back({p, e});
            a = of_mul(OF, a, of_pow(OF, p.ideal, e));
        }
        std::sort(want.begin(), want.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
        auto got = of_factor(OF, a);
        std::sort(got.begin(), got.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
        CHECK(got == want);
        CHECK(of_from_factors(OF, got) == a);
        Int n = 1;
        for (const auto& pp : want) n *= pow(pp.prime.norm(), static_cast<unsigned long>(pp.e));
        CHECK(a.norm() == n);
        for (const auto& pp : want) {
            CHECK(of_valuation(OF, a, pp.prime) == pp.e);
            CHECK(of_mul(OF, of_div(OF, a, pp.prime.ideal), pp.prime.ideal) == a);
        }
        CHECK(of_conj(OF, of_conj(OF, a)) == a);
    }
}

TEST_CASE("divisors of v") {
    auto cm = fx::field(fx::kMain);
    auto ds = of_divisors(*cm->OF, cm->v);
    REQUIRE(ds.size() == 4);
    CHECK(ds.front().is_unit());
    CHECK(ds.back() == cm->v);
    CHECK(ds[1].norm() == 11);
    CHECK(ds[2].norm() == 131);
    for (const auto& d : ds) CHECK(of_divides(d, cm->v));
    CHECK_FALSE(of_divides(cm->v, ds[1]));
}

TEST_CASE("real primes over ell have norms multiplying to ell^2") {
    auto cm = fx::field(fx::kTwoPrimes);
    for (std::uint64_t ell : primes_up_to(60)) {
        Int prod = 1;
        for (const auto& p : real_primes_over(*cm->OF, Int(ell))) {
            Int e = 1;
            for (const auto& pp : of_factor(*cm->OF, OFIdeal::from_generators(*cm->OF, {{Int(ell), Int(0)}})))
                if (pp.prime == p) e = pp.e;
            prod *= pow(p.norm(), e.get_ui());
        }
        CHECK(prod == Int(ell) * Int(ell));
    }
}

TEST_CASE("primes of O_F[pi] over ell: norms, conjugates, and the prime below") {
    auto cm = fx::field(fx::kTwoPrimes);
    for (std::uint64_t ell : primes_up_to(50)) {
        if (cm->undesirable(Int(ell))) {
            CHECK_THROWS_AS(primes_over(*cm, Int(ell)), Error);
            continue;
        }
        Int prod = 1;
        for (const auto& P : primes_over(*cm, Int(ell))) {
            prod *= P.norm();
            KIdeal L = k_prime(cm->OFpi, P);
            CHECK(k_norm(L) == P.norm());
            PrimeOverL c = prime_conjugate(*cm->ctx, P);
            CHECK(prime_conjugate(*cm->ctx, c) == P);
            CHECK(k_conj(L) == k_prime(cm->OFpi, c));
            RealPrime p = prime_below(*cm, P);
            CHECK(p.ell == Int(ell));
            CHECK(P.norm() % p.norm() == 0);
        }
        // Ramified primes appear once per distinct prime.
        if (cm->OK->disc() % Int(ell) != 0) CHECK(prod == pow(Int(ell), 4));
        else CHECK(pow(Int(ell), 4) % prod == 0);
    }
}

TEST_CASE("undesirable primes of the main example") {
    auto cm = fx::field(fx::kMain);
    CHECK(cm->undesirable_primes() == std::vector<Int>{2, 11, 43, 131, 82307});
    CHECK_THROWS_AS(primes_over(*cm, Int(11)), Error);
    CHECK_NOTHROW(primes_over(*cm, Int(7)));
}

TEST_CASE("split symbol matches a brute-force count of primes of O_K") {
    for (const auto& c : {fx::kTwoPrimes, fx::kDepth2, fx::kDepth3}) {
        auto cm = fx::field(c);
        for (const auto& [p, e] : cm->v_factors) {
            auto above = oracle::primes_above(*cm->OK, p.ell.get_si(), pow(p.norm(), 2).get_si());
            int same_norm = 0, containing = 0;
            for (const auto& P : above) {
                KIdeal K = as_kideal(cm->OK, P);
                bool over = K.lat.contains(cm->OF->to_K(p.ideal.a(), p.ideal.b()).vec()) &&
                            K.lat.contains(cm->OF->to_K(Int(0), p.ideal.c()).vec());
                if (!over) continue;
                ++containing;
                same_norm += P.norm == p.norm();
            }
            int chi = split_symbol(*cm, p);
            CHECK(containing == (chi == 1 ? 2 : 1));
            CHECK(same_norm == 1 + chi);
        }
    }
}

TEST_CASE("ideal reduction keeps the class and bounds the norm") {
    auto cm = fx::field(fx::kKlein);
    auto ideals = oracle::ideals_up_to(*cm->OK, 40);
    for (const auto& a : ideals) {
        KIdeal A = as_kideal(cm->OK, a);
        CHECK(k_norm(A) == a.norm);
        ReducedIdeal r = reduce_ideal(A);
        CHECK(k_scale(A, r.gamma) == r.b);
        CHECK(k_norm(r.b) <= cm->OK->disc() * cm->OK->disc());
    }
}

TEST_CASE("prime ideals agree with a brute-force search") {
    auto cm = fx::field(fx::kKlein);
    for (std::uint64_t ell : primes_up_to(23)) {
        auto lib = order_primes_over(*cm->OK, Int(ell));
        auto brute = oracle::primes_above(*cm->OK, static_cast<long>(ell), pow(Int(ell), 4).get_si());
        REQUIRE(lib.size() == brute.size());
        for (const auto& P : brute) {
            KIdeal K = as_kideal(cm->OK, P);
            bool found = false;
            for (const auto& Q : lib) found = found || Q.lat == K.lat;
            CHECK(found);
        }
    }
}
