#include "cmendo/field.hpp"

#include <sstream>

#include "cmendo/errors.hpp"

namespace cmendo {

FieldElem FieldElem::from_vec(const RatVec& v) {
    assert(v.size() == 4);
    FieldElem e;
    for (std::size_t i = 0; i < 4; ++i) e.c[i] = v[i];
    return e;
}

FieldElem WeilContext::add(const FieldElem& x, const FieldElem& y) const {
    FieldElem r;
    for (std::size_t i = 0; i < 4; ++i) r.c[i] = x.c[i] + y.c[i];
    return r;
}

FieldElem WeilContext::sub(const FieldElem& x, const FieldElem& y) const {
    FieldElem r;
    for (std::size_t i = 0; i < 4; ++i) r.c[i] = x.c[i] - y.c[i];
    return r;
}

FieldElem WeilContext::neg(const FieldElem& x) const {
    FieldElem r;
    for (std::size_t i = 0; i < 4; ++i) r.c[i] = -x.c[i];
    return r;
}

FieldElem WeilContext::scale(const FieldElem& x, const Rat& a) const {
    FieldElem r;
    for (std::size_t i = 0; i < 4; ++i) r.c[i] = x.c[i] * a;
    return r;
}

FieldElem WeilContext::mul(const FieldElem& x, const FieldElem& y) const {
    std::array<Rat, 7> prod;
    for (auto& v : prod) v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (x.c[i] == 0) continue;
        for (std::size_t j = 0; j < 4; ++j) prod[i + j] += x.c[i] * y.c[j];
    }
    FieldElem r;
    for (std::size_t i = 0; i < 4; ++i) r.c[i] = prod[i];
    for (std::size_t m = 4; m < 7; ++m) {
        if (prod[m] == 0) continue;
        for (std::size_t k = 0; k < 4; ++k) r.c[k] += prod[m] * red_[m][k];
    }
    return r;
}

IntVec4 WeilContext::mul_int(const IntVec4& x, const IntVec4& y) const {
    std::array<Int, 7> prod;
    for (auto& v : prod) v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < 4; ++j)
            mpz_addmul(prod[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
    }
    IntVec4 r{prod[0], prod[1], prod[2], prod[3]};
    for (std::size_t m = 4; m < 7; ++m) {
        if (prod[m] == 0) continue;
        for (std::size_t k = 0; k < 4; ++k)
            mpz_addmul(r[k].get_mpz_t(), prod[m].get_mpz_t(), red_[m][k].get_mpz_t());
    }
    return r;
}

RatMatrix WeilContext::mult_matrix(const FieldElem& x) const {
    RatMatrix M(4, 4);
    FieldElem cur = x;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) M(i, k) = cur.c[k];
        cur = mul(cur, pi());
    }
    return M;
}

FieldElem WeilContext::inv(const FieldElem& x) const {
    if (x.is_zero()) fail(Errc::DivisionByZero, "inverse of zero");
    RatMatrix Mi = inverse(mult_matrix(x));
    // y with y * M_x = e_0 gives x * y = 1.
    FieldElem y;
    for (std::size_t k = 0; k < 4; ++k) y.c[k] = Mi(0, k);
    return y;
}

FieldElem WeilContext::pow(const FieldElem& x, unsigned long e) const {
    FieldElem r = FieldElem::from_int(1), b = x;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

FieldElem WeilContext::conj(const FieldElem& x) const {
    return FieldElem::from_vec(vec_mul(x.vec(), conj_));
}

Rat WeilContext::trace(const FieldElem& x) const {
    Rat t = 0;
    for (std::size_t k = 0; k < 4; ++k) t += x.c[k] * traces_[k];
    return t;
}

Rat WeilContext::norm(const FieldElem& x) const { return det(mult_matrix(x)); }

Rat WeilContext::t2(const FieldElem& x, const FieldElem& y) const {
    return trace(mul(x, conj(y)));
}

std::string WeilContext::describe() const {
    std::ostringstream os;
    os << "t^4 + " << a1 << "*t^3 + " << a2 << "*t^2 + " << a1 * q << "*t + " << q * q;
    return os.str();
}

bool weil_real_roots_ok(const Int& q, const Int& b, const Int& c) {
    if (b * b - 4 * c <= 0) return false;
    if (b * b >= 16 * q) return false;
    Int u = 4 * q + c;
    if (u <= 0) return false;
    return u * u > 4 * b * b * q;
}

namespace {

// Remainder-free division of the quartic by t^2 + u t + w.
bool divides_quartic(const std::array<Int, 5>& f, const Int& u, const Int& w) {
    std::array<Int, 5> r = f;
    for (int d = 4; d >= 2; --d) {
        Int lead = r[static_cast<std::size_t>(d)];
        if (lead == 0) continue;
        r[static_cast<std::size_t>(d)] = 0;
        r[static_cast<std::size_t>(d - 1)] -= lead * u;
        r[static_cast<std::size_t>(d - 2)] -= lead * w;
    }
    return r[0] == 0 && r[1] == 0;
}

Int eval(const std::array<Int, 5>& f, const Int& t) {
    Int v = 0;
    for (int k = 4; k >= 0; --k) v = v * t + f[static_cast<std::size_t>(k)];
    return v;
}

}  // namespace

bool weil_quartic_irreducible(const Int& q, const Int& a1, const Int& a2) {
    std::array<Int, 5> f{q * q, a1 * q, a2, a1, Int(1)};
    // Roots have absolute value sqrt(q): rational roots are +-sqrt(q) and
    // monic rational quadratic factors are t^2 + u t + w with w = +-q, |u| <= 2 sqrt(q).
    Int r;
    if (is_square(q, &r) && (eval(f, r) == 0 || eval(f, -r) == 0)) return false;
    Int ub = isqrt(4 * q);
    for (Int u = -ub; u <= ub; ++u) {
        if (divides_quartic(f, u, q) || divides_quartic(f, u, -q)) return false;
    }
    return true;
}

Ctx build_weil_context(const Int& q, const Int& a1, const Int& a2, BuildOptions opt) {
    auto pp = prime_power(q);
    if (!pp) fail(Errc::NotPrimePower, "q = " + to_string(q) + " is not a prime power");
    auto ctx = std::make_shared<WeilContext>();
    ctx->q = q;
    ctx->p = pp->first;
    ctx->n = pp->second;
    ctx->a1 = a1;
    ctx->a2 = a2;
    ctx->real_b = a1;
    ctx->real_c = a2 - 2 * q;
    if (opt.require_ordinary && mpz_divisible_p(a2.get_mpz_t(), ctx->p.get_mpz_t()))
        fail(Errc::NotOrdinary, "p = " + to_string(ctx->p) + " divides a2");
    if (!weil_real_roots_ok(q, ctx->real_b, ctx->real_c))
        fail(Errc::NotWeil, "roots of the Weil polynomial are not all of absolute value sqrt(q)");
    if (!weil_quartic_irreducible(q, a1, a2))
        fail(Errc::ReduciblePolynomial, "the Weil polynomial factors over Q");

    ctx->f_ = {q * q, a1 * q, a2, a1, Int(1)};
    // pi^m reduced for m <= 6
    for (std::size_t m = 0; m < 4; ++m) {
        ctx->red_[m] = {Int(0), Int(0), Int(0), Int(0)};
        ctx->red_[m][m] = 1;
    }
    for (std::size_t m = 4; m < 7; ++m) {
        const IntVec4& prev = ctx->red_[m - 1];
        IntVec4 cur{Int(0), prev[0], prev[1], prev[2]};
        // prev[3] * pi^4 = -prev[3] * (c0 + c1 pi + c2 pi^2 + c3 pi^3)
        for (std::size_t k = 0; k < 4; ++k) cur[k] -= prev[3] * ctx->f_[k];
        ctx->red_[m] = cur;
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 4; ++k) ctx->table_[i][j][k] = ctx->red_[i + j][k];

    // Newton's identities for power sums of the roots.
    Int e1 = -ctx->f_[3], e2 = ctx->f_[2], e3 = -ctx->f_[1], e4 = ctx->f_[0];
    auto& t = ctx->traces_;
    t[0] = 4;
    t[1] = e1;
    t[2] = e1 * t[1] - 2 * e2;
    t[3] = e1 * t[2] - e2 * t[1] + 3 * e3;
    t[4] = e1 * t[3] - e2 * t[2] + e3 * t[1] - 4 * e4;
    for (std::size_t k = 5; k < 7; ++k)
        t[k] = e1 * t[k - 1] - e2 * t[k - 2] + e3 * t[k - 3] - e4 * t[k - 4];
    IntMatrix T(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) T(i, j) = t[i + j];
    ctx->poly_disc_ = det(T);

    // pibar = q / pi = -(pi^3 + a1 pi^2 + a2 pi + a1 q) / q
    FieldElem pb;
    pb.c[0] = Rat(Int(-a1 * q), q);
    pb.c[1] = Rat(Int(-a2), q);
    pb.c[2] = Rat(Int(-a1), q);
    pb.c[3] = Rat(Int(-1), q);
    for (auto& x : pb.c) x.canonicalize();
    ctx->pibar_ = pb;
    ctx->conj_ = RatMatrix(4, 4);
    FieldElem cur = FieldElem::from_int(1);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) ctx->conj_(i, k) = cur.c[k];
        cur = ctx->mul(cur, pb);
    }
    ctx->s_ = ctx->add(ctx->pi(), pb);
    return ctx;
}

FieldElem elem_arith(const WeilContext& ctx, ArithOp op, const FieldElem& x, const FieldElem& y) {
    switch (op) {
        case ArithOp::Add: return ctx.add(x, y);
        case ArithOp::Sub: return ctx.sub(x, y);
        case ArithOp::Mul: return ctx.mul(x, y);
        case ArithOp::Inv: return ctx.inv(x);
    }
    return x;
}

FieldElem conjugate(const WeilContext& ctx, const FieldElem& x) { return ctx.conj(x); }

}  // namespace cmendo
