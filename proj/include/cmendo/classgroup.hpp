#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>

#include "cmendo/ideals.hpp"

namespace cmendo {

struct ClassGroupParams {
    Int bound = 0;  // 0 selects max(30, ceil(log|disc|^2))
    std::uint64_t seed = 1;
    int saturation = 50;
    std::size_t max_rounds = 200000;
    int decomposition_trials = 5000;
};

Int default_factor_base_bound(const Int& disc);

/// Powers of factor-base primes materialized in one order.
class PrimeCache {
public:
    PrimeCache(OrderPtr O, std::vector<PrimeOverL> fb);
    const Lattice& power(std::size_t i, int e);
    const std::vector<PrimeOverL>& fb() const { return fb_; }

private:
    OrderPtr O_;
    std::vector<PrimeOverL> fb_;
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, Lattice> powers_;
};

/// Cl(O) = Z^n / relations for the factor base, presented through its
/// Smith form: the class of sum e_j P_j has coordinates (e W)_i mod d_i.
struct ClassGroupData {
    OrderPtr order;
    OFIdeal fplus;
    Int bound;
    std::uint64_t seed = 0;
    std::vector<PrimeOverL> fb;
    std::vector<Int> invariants;     // d_1 | d_2 | ..., all > 1
    IntMatrix W;                     // fb.size() x invariants.size()
    std::vector<IntVec> generators;  // factor-base exponents mapping to unit vectors
    Int h = 1;
    std::size_t relations_used = 0;

    std::shared_ptr<PrimeCache> cache;

    std::size_t rank() const { return invariants.size(); }
    std::optional<std::size_t> fb_index(const PrimeOverL& P) const;
    IntVec reduce(IntVec c) const;
    IntVec zero() const { return IntVec(invariants.size(), Int(0)); }
    IntVec add(const IntVec& x, const IntVec& y) const;
    IntVec scale(const IntVec& x, const Int& k) const;
    // SNF coordinates of a factor-base exponent vector.
    IntVec dlog_exponents(const IntVec& e) const;
    Int order_of(const IntVec& c) const;
    bool operator==(const ClassGroupData& o) const;
};

using ClassGroupPtr = std::shared_ptr<const ClassGroupData>;

ClassGroupPtr compute_class_group(const CMField& cm, const OFIdeal& fplus, const ClassGroupParams& params = {});

// Exponents of b over the cached primes when b factors completely over them.
std::optional<IntVec> decompose(PrimeCache& primes, const KIdeal& b);
std::optional<IntVec> decompose(const ClassGroupData& G, const KIdeal& b);

// SNF coordinates of the class of an invertible ideal of G.order.
IntVec dlog(const ClassGroupData& G, const KIdeal& a, std::uint64_t seed = 1);
// Class of the prime given by a descriptor, materialized in G.order.
IntVec dlog_prime(const ClassGroupData& G, const PrimeOverL& P, std::uint64_t seed = 1);
bool is_principal(const ClassGroupData& G, const KIdeal& a);
Int element_order(const ClassGroupData& G, const KIdeal& a);

// a O2 for a in O1 with O1 contained in O2.
KIdeal push_ideal(const OrderPtr& O1, const OrderPtr& O2, const KIdeal& a);

// Matrix of Cl(G1.order) -> Cl(G2.order): row i is the image of generator i.
IntMatrix class_group_hom(const ClassGroupData& G1, const ClassGroupData& G2);
IntVec apply_hom(const ClassGroupData& G2, const IntMatrix& M, const IntVec& c);

}  // namespace cmendo
