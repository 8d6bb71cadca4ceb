#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>

#include "cmendo/relations.hpp"

namespace cmendo {

/// Opaque handle for a variety; equal handles mean isomorphic varieties.
using VarietyId = std::array<unsigned char, 16>;
std::string id_hex(const VarietyId& id);

/// What the drivers need from an isogeny backend.  A real backend would
/// evaluate isogenies and compare invariants; SimWorld fakes both exactly.
class IsogenyOracle {
public:
    virtual ~IsogenyOracle() = default;
    // Image of A under the isogeny attached to L^e (e may be negative).
    virtual VarietyId apply_prime(const VarietyId& A, const PrimeOverL& L, const Int& e) = 0;
    // Targets of all p-isogenies from A.
    virtual std::vector<VarietyId> list_l_neighbors(const VarietyId& A, const RealPrime& p) = 0;
    virtual bool same_variety(const VarietyId& A, const VarietyId& B) const = 0;
};

struct SimState {
    std::vector<int> levels;  // e_p for each navigated prime
    IntVec coords;            // class in Cl(O(prod p^e_p))
    auto operator<=>(const SimState&) const = default;
};

struct SimCost {
    std::uint64_t apply_calls = 0;
    std::uint64_t neighbor_calls = 0;
    Int isogeny_steps = 0;    // sum of |e|
    Int weighted_steps = 0;   // sum of |e| N(l)
};

class SimWorld : public IsogenyOracle {
public:
    // Throws NotDivisor unless hidden_f | v | identifying ideal of O_F[pi].
    static std::pair<std::shared_ptr<SimWorld>, VarietyId> build(std::shared_ptr<ClassGroupCache> groups,
                                                                 const OFIdeal& v, const OFIdeal& hidden_f,
                                                                 std::uint64_t seed);

    VarietyId apply_prime(const VarietyId& A, const PrimeOverL& L, const Int& e) override;
    std::vector<VarietyId> list_l_neighbors(const VarietyId& A, const RealPrime& p) override;
    bool same_variety(const VarietyId& A, const VarietyId& B) const override { return A == B; }

    // Hidden truth, for tests and the simulate command.
    SimState hidden_state(const VarietyId& A) const;
    OFIdeal hidden_fplus(const VarietyId& A) const;
    VarietyId variety_at(const SimState& s);
    ClassGroupPtr group_at(const std::vector<int>& levels);

    const CMField& field() const { return groups_->field(); }
    const OFIdeal& v() const { return v_; }
    const std::vector<RealPrimePower>& volcano_primes() const { return primes_; }
    SimCost cost() const;
    void reset_cost();

private:
    SimWorld(std::shared_ptr<ClassGroupCache> groups, OFIdeal v, std::uint64_t seed);

    OFIdeal fplus_of(const std::vector<int>& levels) const;
    VarietyId mint(const SimState& s);
    const std::vector<PrimeOverL>& admissible_over(const Int& ell);
    IntVec prime_class(const std::vector<int>& levels, const PrimeOverL& L);
    std::size_t prime_index(const RealPrime& p) const;

    struct Descent {
        IntMatrix hom;             // Cl(lower) -> Cl(upper)
        std::vector<IntVec> kernel;
    };
    const Descent& descent(const std::vector<int>& lower, const std::vector<int>& upper);
    const std::vector<IntVec>& horizontal(const std::vector<int>& levels, std::size_t i);

    std::shared_ptr<ClassGroupCache> groups_;
    OFIdeal v_;
    std::vector<RealPrimePower> primes_;
    std::array<unsigned char, 32> key_{};

    mutable std::mutex mu_;
    std::map<VarietyId, SimState> registry_;
    std::map<Int, std::vector<PrimeOverL>> admissible_;
    std::map<std::pair<std::vector<int>, PrimeOverL>, IntVec> prime_classes_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, Descent> descents_;
    std::map<std::pair<std::vector<int>, std::size_t>, std::vector<IntVec>> horizontals_;
    SimCost cost_;
};

}  // namespace cmendo
