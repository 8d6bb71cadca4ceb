#pragma once

#include <optional>

#include "cmendo/matrix.hpp"

namespace cmendo {

/// A lattice in Q^n stored canonically as (1/den) * H with H an integer row
/// HNF and den > 0 minimal.  Equal lattices have equal representations.
class Lattice {
public:
    Lattice() = default;
    static Lattice from_rows(const RatMatrix& gens);
    static Lattice from_int_rows(const IntMatrix& gens, const Int& den);
    static Lattice standard(std::size_t n);

    std::size_t dim() const { return n_; }
    std::size_t rank() const { return H_.rows(); }
    bool full_rank() const { return rank() == n_; }
    const Int& den() const { return den_; }
    const IntMatrix& hnf() const { return H_; }
    RatMatrix basis() const;
    RatVec basis_row(std::size_t i) const;

    // Integer coordinates of v in the basis, if v lies in the lattice.
    std::optional<IntVec> coords(const RatVec& v) const;
    bool contains(const RatVec& v) const { return coords(v).has_value(); }
    bool contains(const Lattice& o) const;

    // |det| of the basis; full-rank lattices only.
    Rat covolume() const;
    // [this : sub] for sub contained in this, both full rank.
    Int index_of(const Lattice& sub) const;

    Lattice operator+(const Lattice& o) const;
    Lattice intersect(const Lattice& o) const;
    // Dual with respect to the standard dot product (full rank).
    Lattice dual() const;
    Lattice scaled(const Rat& a) const;

    bool operator==(const Lattice& o) const {
        return n_ == o.n_ && den_ == o.den_ && H_ == o.H_;
    }
    bool operator!=(const Lattice& o) const { return !(*this == o); }

private:
    std::size_t n_ = 0;
    Int den_ = 1;
    IntMatrix H_;
};

}  // namespace cmendo
