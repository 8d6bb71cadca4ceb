#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "cmendo/arith.hpp"
#include "cmendo/matrix.hpp"

namespace cmendo {

/// Element of K = Q[t]/(f) in the power basis {1, pi, pi^2, pi^3}.
struct FieldElem {
    std::array<Rat, 4> c{Rat(0), Rat(0), Rat(0), Rat(0)};

    static FieldElem from_int(const Int& a) {
        FieldElem e;
        e.c[0] = a;
        return e;
    }
    static FieldElem pi_power(int k) {
        FieldElem e;
        e.c[static_cast<std::size_t>(k)] = 1;
        return e;
    }
    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
    bool operator==(const FieldElem&) const = default;
    RatVec vec() const { return RatVec(c.begin(), c.end()); }
    static FieldElem from_vec(const RatVec& v);
};

using IntVec4 = std::array<Int, 4>;

struct BuildOptions {
    bool require_ordinary = true;
};

/// The quartic CM field of a Weil polynomial
///   f(t) = t^4 + a1 t^3 + a2 t^2 + a1 q t + q^2
/// together with its real subfield generated by s = pi + q/pi.
class WeilContext {
public:
    Int q, p;
    int n = 0;
    Int a1, a2;
    // (b, c) with s^2 + b s + c = 0.
    Int real_b, real_c;

    const Int& coeff(int k) const { return f_[static_cast<std::size_t>(k)]; }
    // pi^i * pi^j = sum_k mult_table(i, j, k) pi^k; integral since f is monic.
    const Int& mult_table(int i, int j, int k) const {
        return table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                     [static_cast<std::size_t>(k)];
    }

    FieldElem add(const FieldElem& x, const FieldElem& y) const;
    FieldElem sub(const FieldElem& x, const FieldElem& y) const;
    FieldElem neg(const FieldElem& x) const;
    FieldElem mul(const FieldElem& x, const FieldElem& y) const;
    FieldElem scale(const FieldElem& x, const Rat& a) const;
    FieldElem inv(const FieldElem& x) const;
    FieldElem pow(const FieldElem& x, unsigned long e) const;
    FieldElem conj(const FieldElem& x) const;
    Rat trace(const FieldElem& x) const;
    Rat norm(const FieldElem& x) const;
    // Rows are x * pi^i.
    RatMatrix mult_matrix(const FieldElem& x) const;

    // Products of integral power-basis coordinate vectors.
    IntVec4 mul_int(const IntVec4& x, const IntVec4& y) const;

    // Tr(x * conj(y)); positive definite on K.
    Rat t2(const FieldElem& x, const FieldElem& y) const;

    FieldElem pi() const { return FieldElem::pi_power(1); }
    FieldElem pibar() const { return pibar_; }
    FieldElem s() const { return s_; }
    const RatMatrix& conj_matrix() const { return conj_; }
    const Int& trace_pi_power(int k) const { return traces_[static_cast<std::size_t>(k)]; }
    // disc(Z[pi]) = det(Tr(pi^(i+j))).
    const Int& poly_disc() const { return poly_disc_; }
    // disc(Z[s]) = b^2 - 4c.
    Int real_poly_disc() const { return real_b * real_b - 4 * real_c; }

    std::string describe() const;

    friend std::shared_ptr<const WeilContext> build_weil_context(const Int&, const Int&,
                                                                 const Int&, BuildOptions);

private:
    std::array<Int, 5> f_;
    std::array<std::array<std::array<Int, 4>, 4>, 4> table_;
    std::array<IntVec4, 7> red_;  // pi^m for m = 0..6
    std::array<Int, 7> traces_;
    RatMatrix conj_;
    FieldElem pibar_, s_;
    Int poly_disc_;
};

using Ctx = std::shared_ptr<const WeilContext>;

Ctx build_weil_context(const Int& q, const Int& a1, const Int& a2, BuildOptions opt = {});

enum class ArithOp { Add, Sub, Mul, Inv };
FieldElem elem_arith(const WeilContext& ctx, ArithOp op, const FieldElem& x,
                     const FieldElem& y = FieldElem{});
FieldElem conjugate(const WeilContext& ctx, const FieldElem& x);

// Exact Weil test on the real polynomial t^2 + b t + c: both roots real,
// distinct, and of absolute value < 2 sqrt(q).
bool weil_real_roots_ok(const Int& q, const Int& b, const Int& c);
// Irreducibility of the quartic, assuming the Weil condition holds.
bool weil_quartic_irreducible(const Int& q, const Int& a1, const Int& a2);

}  // namespace cmendo
