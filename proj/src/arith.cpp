#include "cmendo/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cmendo/errors.hpp"

namespace cmendo {

Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int fdiv(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int xgcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        fail(Errc::DivisionByZero, "no inverse of " + to_string(a) + " mod " + to_string(m));
    return r;
}

Int pow_mod(const Int& a, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int pow(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n, Int* root) {
    if (n < 0) return false;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    if (root) *root = isqrt(n);
    return true;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

int valuation(Int n, const Int& p) {
    if (n == 0) return 1 << 30;
    int v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

namespace {

const std::vector<std::uint64_t>& small_primes(std::uint64_t bound) {
    static std::uint64_t cached_bound = 0;
    static std::vector<std::uint64_t> cached;
    static std::mutex* mu = new std::mutex;
    std::lock_guard<std::mutex> lock(*mu);
    if (bound > cached_bound) {
        cached = primes_up_to(bound);
        cached_bound = bound;
    }
    return cached;
}

// Brent's cycle-finding variant, batching gcds every 128 steps.
std::optional<Int> rho(const Int& n, std::uint64_t cap, unsigned long c0) {
    Int c = c0, y = 2, x, ys, q = 1, g = 1, t;
    std::uint64_t r = 1, steps = 0;
    const std::uint64_t m = 128;
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) {
            y = (y * y + c) % n;
        }
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            std::uint64_t lim = std::min(m, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                t = x - y;
                q = (q * abs(t)) % n;
            }
            g = gcd(q, n);
            k += m;
            steps += lim;
            if (steps > cap) return std::nullopt;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = (ys * ys + c) % n;
            t = x - ys;
            g = gcd(abs(t), n);
        } while (g == 1);
    }
    if (g == n) return std::nullopt;
    return g;
}

void split(const Int& n, const FactorLimits& lim, std::map<Int, int>& acc) {
    if (n == 1) return;
    if (is_prime(n)) {
        acc[n] += 1;
        return;
    }
    Int r;
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k < 64; ++k) {
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::map<Int, int> sub;
                split(r, lim, sub);
                for (auto& [p, e] : sub) acc[p] += e * static_cast<int>(k);
                return;
            }
        }
    }
    for (unsigned long c = 1; c < 20; ++c) {
        auto d = rho(n, lim.rho_iterations, c);
        if (d) {
            split(*d, lim, acc);
            split(n / *d, lim, acc);
            return;
        }
    }
    fail(Errc::FactorizationFailure, "could not split " + to_string(n));
}

}  // namespace

Factorization factor(const Int& n0, const FactorLimits& lim) {
    Int n = abs(n0);
    if (n == 0) fail(Errc::FactorizationFailure, "cannot factor zero");
    std::map<Int, int> acc;
    const auto& ps = small_primes(std::min<std::uint64_t>(lim.trial_bound, 1000000));
    for (auto p : ps) {
        if (p > lim.trial_bound) break;
        if (Int(p) * p > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            int e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            acc[Int(p)] += e;
        }
    }
    split(n, lim, acc);
    Factorization out;
    for (auto& [p, e] : acc) out.push_back({p, e});
    return out;
}

Int factorization_value(const Factorization& f) {
    Int v = 1;
    for (const auto& [p, e] : f) v *= pow(p, static_cast<unsigned long>(e));
    return v;
}

std::optional<std::pair<Int, int>> prime_power(const Int& q) {
    if (q < 2) return std::nullopt;
    auto f = factor(q);
    if (f.size() != 1) return std::nullopt;
    return std::make_pair(f[0].p, f[0].e);
}

Int random_below(std::mt19937_64& rng, const Int& bound) {
    if (bound <= 1) return 0;
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 64;
    Int r = 0;
    for (size_t b = 0; b < bits; b += 64) {
        r <<= 64;
        std::uint64_t w = rng();
        r += Int(static_cast<unsigned long>(w >> 32)) * Int(4294967296UL) +
             Int(static_cast<unsigned long>(w & 0xffffffffULL));
    }
    return mod(r, bound);
}

std::string to_string(const Int& a) { return a.get_str(10); }
std::string to_string(const Rat& a) { return a.get_str(10); }

Int parse_int(const std::string& s) {
    Int r;
    if (s.empty() || r.set_str(s, 10) != 0)
        fail(Errc::ParseError, "not a decimal integer: '" + s + "'");
    return r;
}

double log_abs(const Int& a) {
    if (a == 0) return -INFINITY;
    long e;
    double d = mpz_get_d_2exp(&e, a.get_mpz_t());
    return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace cmendo
