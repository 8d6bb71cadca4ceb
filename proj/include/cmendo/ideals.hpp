#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cmendo/modp.hpp"
#include "cmendo/orders.hpp"

namespace cmendo {

/// Prime ideal of O_F.
struct RealPrime {
    Int ell;
    OFIdeal ideal;
    int residue_degree = 1;

    Int norm() const { return ideal.norm(); }
    bool operator==(const RealPrime& o) const { return ideal == o.ideal; }
    bool operator<(const RealPrime& o) const { return ideal < o.ideal; }
};

struct RealPrimePower {
    RealPrime prime;
    int e;
    bool operator==(const RealPrimePower&) const = default;
};

/// Prime of an order containing Z[pi], written (ell, r(pi)) with r a monic
/// irreducible factor of f mod ell.  The descriptor is order-independent.
struct PrimeOverL {
    Int ell;
    std::vector<Int> rpoly;  // monic, low degree first, coefficients in [0, ell)

    int degree() const { return static_cast<int>(rpoly.size()) - 1; }
    Int norm() const { return pow(ell, static_cast<unsigned long>(degree())); }
    bool operator==(const PrimeOverL& o) const { return ell == o.ell && rpoly == o.rpoly; }
    bool operator<(const PrimeOverL& o) const;
    std::string str() const;
};

/// Everything derived once from a Weil polynomial: the maximal orders,
/// O_F[pi], its identifying ideal v, and the undesirable primes.
class CMField {
public:
    static std::shared_ptr<const CMField> create(const Ctx& ctx, const FactorLimits& lim = {});

    Ctx ctx;
    OrderPtr OK, OFpi, Zpipibar, Zpi;
    RealOrderPtr OF;
    OFIdeal v;
    Int index_K;  // [O_K : Z[pi]]
    std::vector<RealPrimePower> v_factors;

    // Primes dividing [O_K : Z[pi]], [O_F : Z[s]] or N(v).
    bool undesirable(const Int& ell) const;
    const std::vector<Int>& undesirable_primes() const { return bad_; }
    // O_F + f O_K, cached.
    OrderPtr order_of(const OFIdeal& f) const;

private:
    std::vector<Int> bad_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<Int>, OrderPtr> orders_;
};

using CMFieldPtr = std::shared_ptr<const CMField>;

// ---------------------------------------------------------------- O_F ideals

OFIdeal of_mul(const RealOrder& OF, const OFIdeal& a, const OFIdeal& b);
OFIdeal of_pow(const RealOrder& OF, const OFIdeal& a, int e);
OFIdeal of_intersect(const OFIdeal& a, const OFIdeal& b);
OFIdeal of_conj(const RealOrder& OF, const OFIdeal& a);
// a / b, requiring b | a.
OFIdeal of_div(const RealOrder& OF, const OFIdeal& a, const OFIdeal& b);
// a divides b.
inline bool of_divides(const OFIdeal& a, const OFIdeal& b) { return a.contains(b); }
int of_valuation(const RealOrder& OF, const OFIdeal& a, const RealPrime& p);
std::vector<RealPrime> real_primes_over(const RealOrder& OF, const Int& ell);
std::vector<RealPrimePower> of_factor(const RealOrder& OF, const OFIdeal& a,
                                      const FactorLimits& lim = {});
OFIdeal of_from_factors(const RealOrder& OF, const std::vector<RealPrimePower>& f);
// All divisors of a, in ascending order.
std::vector<OFIdeal> of_divisors(const RealOrder& OF, const OFIdeal& a);

// ---------------------------------------------------------------- primes of K

struct KPrime {
    Lattice lat;  // maximal ideal of the order, power-basis coordinates
    Int norm;
    int residue_degree;
};
// Maximal ideals of O above ell via splitting O / rad(ell O).
std::vector<KPrime> order_primes_over(const Order& O, const Int& ell, std::uint64_t seed = 1);

int split_symbol(const CMField& cm, const RealPrime& l);

// Admissible primes over ell, sorted by (degree, rpoly).  Throws
// UndesirablePrime when ell divides one of the excluded indices.
std::vector<PrimeOverL> primes_over(const CMField& cm, const Int& ell, std::uint64_t seed = 1);
PrimeOverL prime_conjugate(const WeilContext& ctx, const PrimeOverL& P);
// The prime of O_F below P, as the O_F-ideal (ell, norm-form generator).
RealPrime prime_below(const CMField& cm, const PrimeOverL& P);

// ---------------------------------------------------------------- K ideals

KIdeal k_mul(const KIdeal& a, const KIdeal& b);
KIdeal k_conj(const KIdeal& a);
KIdeal k_prime(const OrderPtr& O, const PrimeOverL& P);
KIdeal k_from_prime_power(const OrderPtr& O, const PrimeOverL& P, int e);
Int k_norm(const KIdeal& a);  // integral ideals
KIdeal k_scale(const KIdeal& a, const FieldElem& g);
KIdeal push_to(const KIdeal& a, const OrderPtr& O2);

// ---------------------------------------------------------------- reduction

struct ReducedIdeal {
    KIdeal b;
    FieldElem gamma;  // b = gamma * a with gamma in a^{-1}
};

// LLL-reduce a^{-1} under Tr(x conj y) and return the ideal from the
// shortest vector.
ReducedIdeal reduce_ideal(const KIdeal& a);
// Several equivalent integral ideals from short vectors of a^{-1}.
std::vector<ReducedIdeal> reduce_candidates(const KIdeal& a, std::size_t max_count);

// Exact LLL on a positive definite rational Gram matrix; returns the
// unimodular U with rows giving the reduced basis.
IntMatrix lll_gram(const RatMatrix& G, const Rat& delta = Rat(99, 100));
// All nonzero integer vectors x with x G x^T <= bound (up to sign: one of each +-x pair).
std::vector<IntVec> short_vectors(const RatMatrix& G, const Rat& bound, std::size_t cap = 1000000);
RatMatrix t2_gram(const WeilContext& ctx, const RatMatrix& basis);

}  // namespace cmendo
