#pragma once

// Brute-force reference computations used to cross-check the library.  They
// share only generic pieces with it (HNF, the T2 form, short vectors) and
// avoid its ideal, prime and class-group code.

#include <optional>
#include <vector>

#include "cmendo/ideals.hpp"

namespace oracle {

using cmendo::Int;
using cmendo::IntMatrix;
using cmendo::IntVec;

// Ideals of O_K are row HNF matrices in the coordinates of the O_K basis.
struct Ideal {
    IntMatrix H;
    long norm = 0;
};

// Primes of O_K above ell with norm <= max_norm, found among all ideals
// between ell O_K and O_K.
std::vector<Ideal> primes_above(const cmendo::Order& OK, long ell, long max_norm);
// Every integral ideal of norm <= bound, as products of primes_above.
std::vector<Ideal> ideals_up_to(const cmendo::Order& OK, long bound);

Ideal ideal_mul(const cmendo::Order& OK, const Ideal& a, const Ideal& b);
Ideal ideal_conj(const cmendo::Order& OK, const Ideal& a);
Ideal ideal_from_lattice(const cmendo::Order& OK, const cmendo::Lattice& power_basis_lattice);

// (x + y sqrt d)/2 with x^2 - d y^2 = +-4 and y > 0 minimal.
double fundamental_unit(long d_F);
// (4!/4^4) (4/pi)^2 sqrt|d|, rounded down.
long minkowski_bound(const Int& disc);

// A generator of a when one exists.  Assumes O_K^* = O_F^* with fundamental
// unit eps, so a generator of trace form at most 2 sqrt(N)(eps + 1/eps) exists.
std::optional<cmendo::FieldElem> generator(const cmendo::Order& OK, const Ideal& a, double eps);

// Classes of ideals of norm up to the Minkowski bound; a ~ b iff a conj(b)
// is principal, which needs h(F) = 1.
struct ClassGroup {
    std::vector<Ideal> ideals;
    std::vector<int> class_of;  // per ideal
    std::vector<int> reps;      // index into ideals
    std::vector<std::vector<int>> mul;  // class multiplication table
    long h() const { return static_cast<long>(reps.size()); }
    // #{c : c^k = 1}
    long torsion(long k) const;
};
ClassGroup class_group(const cmendo::Order& OK, long d_F);
// Class of an arbitrary ideal in a computed table.
int classify(const cmendo::Order& OK, const ClassGroup& G, const Ideal& a, double eps);

// Order of the class of L in Cl(O) for O_F subset O subset O_K, L an
// invertible prime of O coprime to the conductor, given as the O_K ideal
// L O_K.  Uses a generator alpha of the m-th power in O_K (m the order in
// Cl(O_K)) and the least j with alpha^j in O; needs O^* = O_K^*.
long order_in_suborder(const cmendo::Order& OK, const cmendo::Order& O, const Ideal& L, double eps,
                       long max_j = 100000);

// Conductor membership of x: x O_K subset O.
bool in_conductor(const cmendo::Order& OK, const cmendo::Order& O, const cmendo::FieldElem& x);

}  // namespace oracle
