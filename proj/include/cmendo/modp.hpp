#pragma once

#include <random>
#include <vector>

#include "cmendo/arith.hpp"
#include "cmendo/matrix.hpp"

namespace cmendo {

/// Dense polynomial over F_p, coefficients low degree first, no trailing zeros.
struct PolyP {
    std::vector<Int> c;
    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Int& lead() const { return c.back(); }
    bool operator==(const PolyP&) const = default;
    bool operator<(const PolyP& o) const;
};

struct PolyFactor {
    PolyP f;  // monic irreducible
    int e;
};

class Fp {
public:
    explicit Fp(Int p) : p_(std::move(p)) {}
    const Int& p() const { return p_; }

    PolyP make(std::vector<Int> c) const;
    PolyP add(const PolyP& a, const PolyP& b) const;
    PolyP sub(const PolyP& a, const PolyP& b) const;
    PolyP mul(const PolyP& a, const PolyP& b) const;
    PolyP scale(const PolyP& a, const Int& s) const;
    void divmod(const PolyP& a, const PolyP& b, PolyP& q, PolyP& r) const;
    PolyP rem(const PolyP& a, const PolyP& b) const;
    PolyP gcd(PolyP a, PolyP b) const;
    PolyP monic(const PolyP& a) const;
    PolyP powmod(const PolyP& a, const Int& e, const PolyP& m) const;
    PolyP derivative(const PolyP& a) const;
    Int eval(const PolyP& a, const Int& x) const;

    // Complete factorization into monic irreducibles with multiplicity,
    // sorted by (degree, coefficients).  Deterministic for a given seed.
    std::vector<PolyFactor> factor(const PolyP& f, std::uint64_t seed) const;
    // Factorization of a squarefree monic polynomial.
    std::vector<PolyP> factor_squarefree(const PolyP& f, std::uint64_t seed) const;

    // Rows form a basis of the left kernel {x : x A = 0} over F_p.
    IntMatrix left_kernel(const IntMatrix& A) const;
    std::size_t rank(const IntMatrix& A) const;

private:
    void irreducible_divisors(const PolyP& f, std::uint64_t seed, std::vector<PolyP>& out) const;
    std::vector<std::pair<PolyP, int>> distinct_degree(const PolyP& f) const;
    void equal_degree(const PolyP& f, int d, std::mt19937_64& rng, std::vector<PolyP>& out) const;

    Int p_;
};

}  // namespace cmendo
