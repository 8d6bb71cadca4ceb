#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmendo/field.hpp"
#include "cmendo/lattice.hpp"

namespace cmendo {

/// Full-rank subring of K, stored as a canonical lattice in power-basis
/// coordinates.  The Z-basis is the scaled HNF rows.
class Order {
public:
    Order(Ctx ctx, Lattice lat);

    const Ctx& ctx() const { return ctx_; }
    const WeilContext& field() const { return *ctx_; }
    const Lattice& lattice() const { return lat_; }
    const RatMatrix& basis() const { return basis_; }
    const RatMatrix& basis_inv() const { return inv_; }
    const Int& disc() const { return disc_; }
    FieldElem elem(std::size_t i) const;
    FieldElem elem_from_coords(const IntVec& c) const;

    // tau_i tau_j = sum_k c(i, j, k) tau_k
    const Int& structure(std::size_t i, std::size_t j, std::size_t k) const {
        return table_[(i * 4 + j) * 4 + k];
    }
    IntVec mul_coords(const IntVec& x, const IntVec& y) const;

    RatVec rat_coords(const FieldElem& x) const;
    std::optional<IntVec> coords(const FieldElem& x) const;
    bool contains(const FieldElem& x) const { return lat_.contains(x.vec()); }
    bool contains(const Order& o) const { return lat_.contains(o.lat_); }
    Rat covolume() const { return lat_.covolume(); }
    // [this : sub]
    Int index_of(const Order& sub) const { return lat_.index_of(sub.lat_); }

    bool operator==(const Order& o) const { return lat_ == o.lat_; }

private:
    Ctx ctx_;
    Lattice lat_;
    RatMatrix basis_, inv_;
    Int disc_;
    std::vector<Int> table_;
};

using OrderPtr = std::shared_ptr<const Order>;

OrderPtr make_order(const Ctx& ctx, const Lattice& lat);
// Smallest order containing the given elements (and 1).
OrderPtr ring_closure(const Ctx& ctx, const std::vector<FieldElem>& gens);
OrderPtr equation_order(const Ctx& ctx);

// Lattice products and colons inside K (power-basis coordinates).
Lattice lattice_product(const WeilContext& ctx, const Lattice& a, const Lattice& b);
// {x in K : x b subset a}; both full rank.
Lattice colon(const WeilContext& ctx, const Lattice& a, const Lattice& b);
Lattice element_times(const WeilContext& ctx, const FieldElem& g, const Lattice& a);

// p-radical of O: {x in O : x^(p^j) in pO} with p^j >= 4.
Lattice p_radical(const Order& O, const Int& p);
bool is_p_maximal(const Order& O, const Int& p);
OrderPtr maximal_order(const Ctx& ctx, const FactorLimits& lim = {});

/// Order of F = Q(s), with the maximal order described by the basis
/// {1, w}, w = (d + sqrt(d))/2 and d the fundamental discriminant.
struct RealOrder {
    Ctx ctx;
    RatMatrix basis;  // rows over {1, s}
    Int disc;
    // Maximal-order data
    Int dF;            // fundamental discriminant
    Int conductor;     // [O_F : Z[s]]
    Int omega_norm;    // (dF^2 - dF)/4, so w^2 = dF w - omega_norm
    FieldElem omega;   // w in the power basis of K

    FieldElem to_K(const Int& x, const Int& y) const;  // x + y w
    // Coordinates over {1, w} of an element of F given in K, if it lies in F.
    std::optional<std::pair<Rat, Rat>> from_K(const FieldElem& e) const;
    // (x1 + y1 w)(x2 + y2 w)
    std::pair<Int, Int> mul(const Int& x1, const Int& y1, const Int& x2, const Int& y2) const;
};

using RealOrderPtr = std::shared_ptr<const RealOrder>;

RealOrderPtr real_maximal_order(const Ctx& ctx);

/// Integral ideal of O_F, HNF over {1, w}: rows (a, b) and (0, c).
class OFIdeal {
public:
    OFIdeal() = default;
    explicit OFIdeal(Lattice lat);
    static OFIdeal unit();
    static OFIdeal from_hnf(const Int& a, const Int& b, const Int& c);
    // Ideal generated by the given elements (x + y w).
    static OFIdeal from_generators(const RealOrder& OF, const std::vector<std::pair<Int, Int>>& gens);

    const Lattice& lattice() const { return lat_; }
    IntMatrix hnf() const { return lat_.hnf(); }
    const Int& a() const { return lat_.hnf()(0, 0); }
    const Int& b() const { return lat_.hnf()(0, 1); }
    const Int& c() const { return lat_.hnf()(1, 1); }
    Int norm() const { return a() * c(); }
    bool is_unit() const { return norm() == 1; }
    bool contains(const Int& x, const Int& y) const { return lat_.contains(RatVec{Rat(x), Rat(y)}); }
    bool contains(const OFIdeal& o) const { return lat_.contains(o.lat_); }

    bool operator==(const OFIdeal& o) const { return lat_ == o.lat_; }
    bool operator!=(const OFIdeal& o) const { return !(lat_ == o.lat_); }
    // Ascending norm, then HNF lexicographic.
    bool operator<(const OFIdeal& o) const;
    std::string str() const;

private:
    Lattice lat_;
};

/// Fractional or integral ideal of an order of K, in power-basis coordinates.
struct KIdeal {
    OrderPtr owner;
    Lattice lat;

    // [owner : lat] for integral ideals, as a rational in general.
    Rat norm() const;
    IntMatrix hnf_in_owner() const;
    bool operator==(const KIdeal& o) const { return lat == o.lat && *owner == *o.owner; }
};

KIdeal unit_ideal(const OrderPtr& O);
KIdeal principal_ideal(const OrderPtr& O, const FieldElem& g);

struct SpecialOrders {
    RealOrderPtr OF;
    OrderPtr OFpi;
    OrderPtr Zpipibar;
};
SpecialOrders special_orders(const Ctx& ctx);

// Conductor {x : x OK subset O}, owned by OK.
KIdeal conductor_ideal(const OrderPtr& O, const OrderPtr& OK);
OFIdeal identifying_ideal(const Order& O, const Order& OK, const RealOrder& OF);
OrderPtr order_from_ideal(const OFIdeal& fplus, const OrderPtr& OK, const RealOrder& OF);

}  // namespace cmendo
