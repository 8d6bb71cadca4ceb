#include "cmendo/orders.hpp"

#include <sstream>

#include "cmendo/errors.hpp"
#include "cmendo/modp.hpp"

namespace cmendo {

// ---------------------------------------------------------------- Order

Order::Order(Ctx ctx, Lattice lat) : ctx_(std::move(ctx)), lat_(std::move(lat)) {
    check(lat_.dim() == 4 && lat_.full_rank(), Errc::Internal, "order lattice must have rank 4");
    basis_ = lat_.basis();
    inv_ = inverse(basis_);
    check(lat_.contains(FieldElem::from_int(1).vec()), Errc::NotSubring, "lattice does not contain 1");
    table_.resize(64);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) {
            FieldElem p = ctx_->mul(elem(i), elem(j));
            auto c = lat_.coords(p.vec());
            check(c.has_value(), Errc::NotSubring, "lattice is not closed under multiplication");
            for (std::size_t k = 0; k < 4; ++k) {
                table_[(i * 4 + j) * 4 + k] = (*c)[k];
                table_[(j * 4 + i) * 4 + k] = (*c)[k];
            }
        }
    Rat d = Rat(ctx_->poly_disc()) * covolume() * covolume();
    check(d.get_den() == 1, Errc::Internal, "non-integral discriminant");
    disc_ = d.get_num();
}

FieldElem Order::elem(std::size_t i) const { return FieldElem::from_vec(lat_.basis_row(i)); }

FieldElem Order::elem_from_coords(const IntVec& c) const {
    RatVec v(4, Rat(0));
    for (std::size_t i = 0; i < 4; ++i) {
        if (c[i] == 0) continue;
        for (std::size_t k = 0; k < 4; ++k) v[k] += c[i] * basis_(i, k);
    }
    return FieldElem::from_vec(v);
}

IntVec Order::mul_coords(const IntVec& x, const IntVec& y) const {
    IntVec out(4, Int(0));
    for (std::size_t i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < 4; ++j) {
            if (y[j] == 0) continue;
            Int xy = x[i] * y[j];
            for (std::size_t k = 0; k < 4; ++k) out[k] += xy * structure(i, j, k);
        }
    }
    return out;
}

RatVec Order::rat_coords(const FieldElem& x) const { return vec_mul(x.vec(), inv_); }

std::optional<IntVec> Order::coords(const FieldElem& x) const { return lat_.coords(x.vec()); }

OrderPtr make_order(const Ctx& ctx, const Lattice& lat) { return std::make_shared<const Order>(ctx, lat); }

OrderPtr ring_closure(const Ctx& ctx, const std::vector<FieldElem>& gens) {
    RatMatrix G(0, 4);
    G.append_row(FieldElem::from_int(1).vec());
    for (const auto& g : gens) G.append_row(g.vec());
    Lattice L = Lattice::from_rows(G);
    while (true) {
        RatMatrix B = L.basis();
        RatMatrix P = B;
        for (std::size_t i = 0; i < B.rows(); ++i)
            for (std::size_t j = i; j < B.rows(); ++j) {
                FieldElem x = FieldElem::from_vec(B.row(i)), y = FieldElem::from_vec(B.row(j));
                P.append_row(ctx->mul(x, y).vec());
            }
        Lattice L2 = Lattice::from_rows(P);
        if (L2 == L) break;
        L = L2;
    }
    return make_order(ctx, L);
}

OrderPtr equation_order(const Ctx& ctx) { return make_order(ctx, Lattice::standard(4)); }

// ---------------------------------------------------------------- lattice products

Lattice lattice_product(const WeilContext& ctx, const Lattice& a, const Lattice& b) {
    const IntMatrix& A = a.hnf();
    const IntMatrix& B = b.hnf();
    IntMatrix P(A.rows() * B.rows(), 4);
    std::size_t r = 0;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        IntVec4 x{A(i, 0), A(i, 1), A(i, 2), A(i, 3)};
        for (std::size_t j = 0; j < B.rows(); ++j) {
            IntVec4 y{B(j, 0), B(j, 1), B(j, 2), B(j, 3)};
            IntVec4 z = ctx.mul_int(x, y);
            for (std::size_t k = 0; k < 4; ++k) P(r, k) = z[k];
            ++r;
        }
    }
    return Lattice::from_int_rows(P, a.den() * b.den());
}

Lattice element_times(const WeilContext& ctx, const FieldElem& g, const Lattice& a) {
    RatMatrix B = a.basis();
    RatMatrix P(B.rows(), 4);
    for (std::size_t i = 0; i < B.rows(); ++i) {
        FieldElem x = ctx.mul(g, FieldElem::from_vec(B.row(i)));
        for (std::size_t k = 0; k < 4; ++k) P(i, k) = x.c[k];
    }
    return Lattice::from_rows(P);
}

Lattice colon(const WeilContext& ctx, const Lattice& a, const Lattice& b) {
    // x b_j = x * Mult(b_j); its coordinates in a are x * Mult(b_j) * A^{-1}.
    RatMatrix Ainv = inverse(a.basis());
    RatMatrix M(4 * b.rank(), 4);
    for (std::size_t j = 0; j < b.rank(); ++j) {
        RatMatrix N = ctx.mult_matrix(FieldElem::from_vec(b.basis_row(j))) * Ainv;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) M(4 * j + r, c) = N(c, r);
    }
    return Lattice::from_rows(integral_solutions(M));
}

// ---------------------------------------------------------------- Round 2

namespace {

IntVec alg_mul(const Order& O, const IntVec& a, const IntVec& b, const Int& p) {
    IntVec out = O.mul_coords(a, b);
    for (auto& x : out) x = mod(x, p);
    return out;
}

IntVec alg_pow(const Order& O, IntVec a, const Int& e, const Int& p) {
    IntVec r(4, Int(0));
    r = *O.coords(FieldElem::from_int(1));
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = alg_mul(O, r, r, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = alg_mul(O, r, a, p);
    }
    return r;
}

}  // namespace

Lattice p_radical(const Order& O, const Int& p) {
    Int e = p;
    while (e < 4) e *= p;
    IntMatrix Phi(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        IntVec ei(4, Int(0));
        ei[i] = 1;
        Phi.set_row(i, alg_pow(O, ei, e, p));
    }
    Fp F(p);
    IntMatrix K = F.left_kernel(Phi);
    RatMatrix G(0, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        RatVec r = O.lattice().basis_row(i);
        for (auto& x : r) x *= p;
        G.append_row(r);
    }
    for (std::size_t i = 0; i < K.rows(); ++i) G.append_row(O.elem_from_coords(K.row(i)).vec());
    return Lattice::from_rows(G);
}

bool is_p_maximal(const Order& O, const Int& p) {
    Lattice I = p_radical(O, p);
    Lattice R = colon(O.field(), I, I);
    return R == O.lattice();
}

OrderPtr maximal_order(const Ctx& ctx, const FactorLimits& lim) {
    OrderPtr O = equation_order(ctx);
    for (const auto& [p, e] : factor(ctx->poly_disc(), lim)) {
        if (e < 2) continue;
        while (true) {
            Lattice I = p_radical(*O, p);
            Lattice R = colon(*ctx, I, I);
            if (R == O->lattice()) break;
            O = make_order(ctx, R);
        }
    }
    return O;
}

// ---------------------------------------------------------------- real subfield

FieldElem RealOrder::to_K(const Int& x, const Int& y) const {
    FieldElem r = ctx->scale(omega, Rat(y));
    r.c[0] += x;
    return r;
}

std::optional<std::pair<Rat, Rat>> RealOrder::from_K(const FieldElem& e) const {
    // e = x + y w; solve for y through a non-constant coordinate of w.
    std::size_t k = 1;
    while (k < 4 && omega.c[k] == 0) ++k;
    if (k == 4) return std::nullopt;
    Rat y = e.c[k] / omega.c[k];
    FieldElem rest = ctx->sub(e, ctx->scale(omega, y));
    if (rest.c[1] != 0 || rest.c[2] != 0 || rest.c[3] != 0) return std::nullopt;
    return std::make_pair(rest.c[0], y);
}

std::pair<Int, Int> RealOrder::mul(const Int& x1, const Int& y1, const Int& x2, const Int& y2) const {
    Int yy = y1 * y2;
    return {x1 * x2 - yy * omega_norm, x1 * y2 + x2 * y1 + yy * dF};
}

RealOrderPtr real_maximal_order(const Ctx& ctx) {
    auto R = std::make_shared<RealOrder>();
    R->ctx = ctx;
    Int D = ctx->real_poly_disc();
    check(D > 0, Errc::NotWeil, "real subfield is not real quadratic");
    Int m = 1, f = 1;
    for (const auto& [p, e] : factor(D)) {
        if (e % 2) m *= p;
        f *= pow(p, static_cast<unsigned long>(e / 2));
    }
    if (mod(m, 4) != 1) {
        m *= 4;
        check(mpz_divisible_ui_p(f.get_mpz_t(), 2), Errc::Internal, "inconsistent real discriminant");
        f /= 2;
    }
    R->dF = m;
    R->conductor = f;
    R->omega_norm = (m * m - m) / 4;
    // sqrt(D) = 2s + b, sqrt(dF) = (2s + b)/f, w = (dF + sqrt(dF))/2.
    Rat w0(Int(m * f + ctx->real_b), Int(2 * f));
    w0.canonicalize();
    Rat w1(Int(1), f);
    w1.canonicalize();
    FieldElem w = ctx->scale(ctx->s(), w1);
    w.c[0] += w0;
    R->omega = w;
    R->basis = RatMatrix(2, 2);
    R->basis(0, 0) = 1;
    R->basis(1, 0) = w0;
    R->basis(1, 1) = w1;
    R->disc = m;
    return R;
}

// ---------------------------------------------------------------- OF ideals

OFIdeal::OFIdeal(Lattice lat) : lat_(std::move(lat)) {
    check(lat_.dim() == 2 && lat_.full_rank() && lat_.den() == 1, Errc::Internal,
          "OF ideal must be an integral rank-2 lattice");
}

OFIdeal OFIdeal::unit() { return OFIdeal(Lattice::standard(2)); }

OFIdeal OFIdeal::from_hnf(const Int& a, const Int& b, const Int& c) {
    IntMatrix H(2, 2);
    H(0, 0) = a;
    H(0, 1) = b;
    H(1, 1) = c;
    return OFIdeal(Lattice::from_int_rows(H, Int(1)));
}

OFIdeal OFIdeal::from_generators(const RealOrder& OF, const std::vector<std::pair<Int, Int>>& gens) {
    IntMatrix G(0, 2);
    for (const auto& [x, y] : gens) {
        G.append_row({x, y});
        auto [u, v] = OF.mul(x, y, Int(0), Int(1));
        G.append_row({u, v});
    }
    return OFIdeal(Lattice::from_int_rows(G, Int(1)));
}

bool OFIdeal::operator<(const OFIdeal& o) const {
    Int n1 = norm(), n2 = o.norm();
    if (n1 != n2) return n1 < n2;
    if (a() != o.a()) return a() < o.a();
    if (b() != o.b()) return b() < o.b();
    return c() < o.c();
}

std::string OFIdeal::str() const {
    std::ostringstream os;
    os << "[" << a() << " " << b() << "; 0 " << c() << "]";
    return os.str();
}

// ---------------------------------------------------------------- K ideals

Rat KIdeal::norm() const { return lat.covolume() / owner->covolume(); }

IntMatrix KIdeal::hnf_in_owner() const {
    RatMatrix C = lat.basis() * owner->basis_inv();
    return hnf_rows(C).H;
}

KIdeal unit_ideal(const OrderPtr& O) { return KIdeal{O, O->lattice()}; }

KIdeal principal_ideal(const OrderPtr& O, const FieldElem& g) {
    return KIdeal{O, element_times(O->field(), g, O->lattice())};
}

// ---------------------------------------------------------------- special orders and the identifying ideal

SpecialOrders special_orders(const Ctx& ctx) {
    SpecialOrders S;
    S.OF = real_maximal_order(ctx);
    S.OFpi = ring_closure(ctx, {S.OF->omega, ctx->pi()});
    S.Zpipibar = ring_closure(ctx, {ctx->pi(), ctx->pibar()});
    return S;
}

KIdeal conductor_ideal(const OrderPtr& O, const OrderPtr& OK) {
    if (!OK->contains(*O)) fail(Errc::NotSubring, "order is not contained in the given overorder");
    return KIdeal{OK, colon(O->field(), O->lattice(), OK->lattice())};
}

OFIdeal identifying_ideal(const Order& O, const Order& OK, const RealOrder& OF) {
    const WeilContext& ctx = O.field();
    if (!O.contains(OF.omega)) fail(Errc::NotRMOrder, "order does not contain the maximal real order");
    const FieldElem alpha[2] = {FieldElem::from_int(1), OF.omega};
    // b_{i,j,k}: alpha_i omega_j = sum_k b_{i,j,k} tau_k; M_j(k, i) = b_{i,j,k}.
    RatMatrix M(16, 2);
    for (std::size_t j = 0; j < 4; ++j) {
        FieldElem wj = OK.elem(j);
        for (std::size_t i = 0; i < 2; ++i) {
            RatVec b = O.rat_coords(ctx.mul(alpha[i], wj));
            for (std::size_t k = 0; k < 4; ++k) M(4 * j + k, i) = b[k];
        }
    }
    Int d = common_denominator(M);
    IntMatrix dM(16, 2);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            Rat x = M(r, c) * d;
            dM(r, c) = x.get_num();
        }
    auto [H, rk] = hnf_rows(dM);
    check(rk == 2, Errc::Internal, "multiplication matrix does not have rank 2");
    RatMatrix X = inverse(to_rat(H));
    IntMatrix B(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            Rat x = X(r, c) * d;
            check(x.get_den() == 1, Errc::Internal, "d H^-1 is not integral");
            B(r, c) = x.get_num();
        }
    // Columns of d H^{-1} are the coordinates of beta_1, beta_2 over {1, w}.
    return OFIdeal(Lattice::from_int_rows(B.transpose(), Int(1)));
}

OrderPtr order_from_ideal(const OFIdeal& fplus, const OrderPtr& OK, const RealOrder& OF) {
    const WeilContext& ctx = OK->field();
    RatMatrix G(0, 4);
    G.append_row(FieldElem::from_int(1).vec());
    G.append_row(OF.omega.vec());
    IntMatrix H = fplus.hnf();
    for (std::size_t r = 0; r < 2; ++r) {
        FieldElem beta = OF.to_K(H(r, 0), H(r, 1));
        for (std::size_t j = 0; j < 4; ++j) G.append_row(ctx.mul(beta, OK->elem(j)).vec());
    }
    return make_order(OK->ctx(), Lattice::from_rows(G));
}

}  // namespace cmendo
