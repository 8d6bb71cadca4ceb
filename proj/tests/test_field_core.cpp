#include <cmath>
#include <complex>
#include <random>

#include "cmendo/errors.hpp"
#include "cmendo/ideals.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cmendo;

namespace {

Errc build_error(long q, long a1, long a2) {
    try {
        build_weil_context(Int(q), Int(a1), Int(a2));
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

FieldElem random_elem(std::mt19937_64& rng, long span) {
    std::uniform_int_distribution<long> d(-span, span);
    FieldElem x;
    for (auto& c : x.c) {
        c = Rat(d(rng), 1 + std::abs(d(rng)) % 3);
        c.canonicalize();
    }
    return x;
}

// Numerical Weil test on t^2 + b t + c.
bool weil_by_roots(long q, long b, long c) {
    double disc = double(b) * b - 4.0 * c;
    if (disc <= 0) return false;
    double r1 = (-b + std::sqrt(disc)) / 2, r2 = (-b - std::sqrt(disc)) / 2, bound = 2 * std::sqrt(double(q));
    return std::fabs(r1) < bound && std::fabs(r2) < bound;
}

}  // namespace

TEST_CASE("Weil context of the main example") {
    auto ctx = build_weil_context(Int(82307), Int(658), Int(263610));
    CHECK(ctx->p == 82307);
    CHECK(ctx->n == 1);
    CHECK(ctx->real_b == 658);
    CHECK(ctx->real_c == 263610 - 2 * 82307);
    // 36980 = 5 * 86^2
    CHECK(ctx->real_poly_disc() == 36980);

    FieldElem pi = ctx->pi(), pibar = ctx->pibar();
    CHECK(ctx->mul(pi, pibar) == FieldElem::from_int(Int(82307)));
    CHECK(ctx->add(pi, pibar) == ctx->s());
    CHECK(ctx->conj(pi) == pibar);
    CHECK(ctx->norm(pi) == Rat(Int(82307) * 82307));
}

TEST_CASE("field arithmetic identities on random elements") {
    auto ctx = build_weil_context(Int(61), Int(3), Int(117));
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        FieldElem x = random_elem(rng, 9), y = random_elem(rng, 9);
        if (x.is_zero() || y.is_zero()) continue;
        CHECK(ctx->mul(x, ctx->inv(x)) == FieldElem::from_int(Int(1)));
        CHECK(ctx->norm(ctx->mul(x, y)) == ctx->norm(x) * ctx->norm(y));
        CHECK(ctx->conj(ctx->conj(x)) == x);
        CHECK(ctx->conj(ctx->mul(x, y)) == ctx->mul(ctx->conj(x), ctx->conj(y)));
        CHECK(ctx->trace(ctx->add(x, y)) == ctx->trace(x) + ctx->trace(y));
        CHECK(ctx->t2(x, x) > 0);
    }
    CHECK_THROWS_AS(ctx->inv(FieldElem{}), Error);
}

TEST_CASE("invalid Weil data is rejected with the matching error") {
    CHECK(build_error(6, 1, 1) == Errc::NotPrimePower);
    CHECK(build_error(82307, 658, 2 * 82307) == Errc::NotOrdinary);
    CHECK(build_error(5, 20, 1) == Errc::NotWeil);
    // (t^2 + t + 5)(t^2 + 2t + 5)
    CHECK(build_error(5, 3, 12) == Errc::ReduciblePolynomial);
    CHECK(build_error(61, 3, 117) == Errc::Internal);
}

TEST_CASE("exact Weil test agrees with floating-point roots away from the boundary") {
    for (long q : {5L, 13L, 29L}) {
        double r = 2 * std::sqrt(double(q));
        for (long b = -12; b <= 12; ++b)
            for (long c = -4 * q; c <= 4 * q; ++c) {
                double disc = double(b) * b - 4.0 * c;
                double worst = std::max(std::fabs((-b + std::sqrt(std::max(disc, 0.0))) / 2),
                                        std::fabs((-b - std::sqrt(std::max(disc, 0.0))) / 2));
                if (std::fabs(disc) < 1e-6 || std::fabs(worst - r) < 1e-6) continue;
                CHECK(weil_real_roots_ok(Int(q), Int(b), Int(c)) == weil_by_roots(q, b, c));
            }
    }
}

TEST_CASE("Weil polynomial mod 7 in the main example") {
    auto cm = fx::field(fx::kMain);
    Fp F(Int(7));
    const WeilContext& ctx = *cm->ctx;
    auto fac = F.factor(F.make({ctx.coeff(0), ctx.coeff(1), ctx.coeff(2), ctx.coeff(3), Int(1)}), 1);
    REQUIRE(fac.size() == 2);
    CHECK(fac[0].f.c == std::vector<Int>{6, 1, 1});
    CHECK(fac[1].f.c == std::vector<Int>{6, 6, 1});
    CHECK(fac[0].e == 1);
    CHECK(fac[1].e == 1);

    auto ps = primes_over(*cm, Int(7));
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].rpoly == std::vector<Int>{6, 1, 1});
    CHECK(ps[0].norm() == 49);
}

TEST_CASE("factorization mod p multiplies back") {
    std::mt19937_64 rng(3);
    for (long p : {2L, 3L, 101L, 7919L}) {
        Fp F{Int(p)};
        for (int t = 0; t < 20; ++t) {
            std::vector<Int> c;
            for (int i = 0; i < 6; ++i) c.push_back(random_below(rng, Int(p)));
            c.push_back(1);
            PolyP f = F.make(c);
            PolyP g = F.make({Int(1)});
            for (const auto& pf : F.factor(f, 1))
                for (int e = 0; e < pf.e; ++e) g = F.mul(g, pf.f);
            CHECK(g == f);
        }
    }
}
