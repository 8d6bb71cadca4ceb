#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cmendo {

using Int = mpz_class;
using Rat = mpq_class;

struct Factor {
    Int p;
    int e;
    bool operator==(const Factor&) const = default;
};
using Factorization = std::vector<Factor>;

struct FactorLimits {
    std::uint64_t trial_bound = 1000000;
    std::uint64_t rho_iterations = 2000000;
};

// Non-negative residue of a modulo m (m > 0).
Int mod(const Int& a, const Int& m);
// Floor division for any signs, m != 0.
Int fdiv(const Int& a, const Int& m);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
// g = s*a + t*b with g = gcd(a, b) >= 0.
Int xgcd(const Int& a, const Int& b, Int& s, Int& t);
Int inv_mod(const Int& a, const Int& m);
Int pow_mod(const Int& a, const Int& e, const Int& m);
Int pow(const Int& a, unsigned long e);
Int isqrt(const Int& n);
bool is_square(const Int& n, Int* root = nullptr);
bool is_prime(const Int& n);
int valuation(Int n, const Int& p);

// Trial division followed by Brent's variant of Pollard rho.
// Throws FactorizationFailure when a composite cofactor survives the caps.
Factorization factor(const Int& n, const FactorLimits& lim = {});
Int factorization_value(const Factorization& f);

// q = p^k with p prime, if any.
std::optional<std::pair<Int, int>> prime_power(const Int& q);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Uniform integer in [0, bound) drawn from a 64-bit engine.
Int random_below(std::mt19937_64& rng, const Int& bound);

std::string to_string(const Int& a);
std::string to_string(const Rat& a);
Int parse_int(const std::string& s);

double log_abs(const Int& a);

}  // namespace cmendo
