#include "cmendo/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "cmendo/errors.hpp"

namespace cmendo {

bool PrimeOverL::operator<(const PrimeOverL& o) const {
    if (ell != o.ell) return ell < o.ell;
    if (rpoly.size() != o.rpoly.size()) return rpoly.size() < o.rpoly.size();
    for (std::size_t i = rpoly.size(); i-- > 0;)
        if (rpoly[i] != o.rpoly[i]) return rpoly[i] < o.rpoly[i];
    return false;
}

std::string PrimeOverL::str() const {
    std::ostringstream os;
    os << "(" << ell << ", ";
    bool first = true;
    for (std::size_t i = rpoly.size(); i-- > 0;) {
        if (rpoly[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || rpoly[i] != 1) os << rpoly[i];
        if (i >= 1) os << "t";
        if (i >= 2) os << "^" << i;
    }
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------- CMField

std::shared_ptr<const CMField> CMField::create(const Ctx& ctx, const FactorLimits& lim) {
    auto cm = std::make_shared<CMField>();
    cm->ctx = ctx;
    cm->OK = maximal_order(ctx, lim);
    auto S = special_orders(ctx);
    cm->OF = S.OF;
    cm->OFpi = S.OFpi;
    cm->Zpipibar = S.Zpipibar;
    cm->Zpi = equation_order(ctx);
    cm->index_K = cm->OK->index_of(*cm->Zpi);
    cm->v = identifying_ideal(*cm->OFpi, *cm->OK, *cm->OF);
    cm->v_factors = of_factor(*cm->OF, cm->v, lim);
    std::set<Int> bad;
    for (const Int& n : {cm->index_K, cm->OF->conductor, cm->v.norm()})
        for (const auto& [p, e] : factor(n, lim)) bad.insert(p);
    cm->bad_.assign(bad.begin(), bad.end());
    return cm;
}

bool CMField::undesirable(const Int& ell) const {
    return std::binary_search(bad_.begin(), bad_.end(), ell);
}

OrderPtr CMField::order_of(const OFIdeal& f) const {
    IntMatrix H = f.hnf();
    std::vector<Int> key{H(0, 0), H(0, 1), H(1, 1)};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = orders_.find(key);
        if (it != orders_.end()) return it->second;
    }
    OrderPtr O = f.is_unit() ? OK : order_from_ideal(f, OK, *OF);
    std::lock_guard<std::mutex> lock(mu_);
    return orders_.emplace(key, O).first->second;
}

// ---------------------------------------------------------------- O_F ideals

namespace {

Lattice of_lattice_product(const RealOrder& OF, const Lattice& a, const Lattice& b) {
    IntMatrix P(0, 2);
    const IntMatrix& A = a.hnf();
    const IntMatrix& B = b.hnf();
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < B.rows(); ++j) {
            auto [x, y] = OF.mul(A(i, 0), A(i, 1), B(j, 0), B(j, 1));
            P.append_row({x, y});
        }
    return Lattice::from_int_rows(P, a.den() * b.den());
}

}  // namespace

OFIdeal of_mul(const RealOrder& OF, const OFIdeal& a, const OFIdeal& b) {
    return OFIdeal(of_lattice_product(OF, a.lattice(), b.lattice()));
}

OFIdeal of_pow(const RealOrder& OF, const OFIdeal& a, int e) {
    OFIdeal r = OFIdeal::unit();
    for (int i = 0; i < e; ++i) r = of_mul(OF, r, a);
    return r;
}

OFIdeal of_intersect(const OFIdeal& a, const OFIdeal& b) {
    return OFIdeal(a.lattice().intersect(b.lattice()));
}

OFIdeal of_conj(const RealOrder& OF, const OFIdeal& a) {
    // sigma(x + y w) = (x + y dF) - y w
    IntMatrix H = a.hnf(), G(2, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        G(i, 0) = H(i, 0) + H(i, 1) * OF.dF;
        G(i, 1) = -H(i, 1);
    }
    return OFIdeal(Lattice::from_int_rows(G, Int(1)));
}

OFIdeal of_div(const RealOrder& OF, const OFIdeal& a, const OFIdeal& b) {
    check(of_divides(b, a), Errc::NotDivisor, "ideal division: " + b.str() + " does not divide " + a.str());
    // b * sigma(b) = N(b) O_F
    Lattice P = of_lattice_product(OF, a.lattice(), of_conj(OF, b).lattice());
    return OFIdeal(P.scaled(Rat(Int(1), b.norm())));
}

int of_valuation(const RealOrder& OF, const OFIdeal& a, const RealPrime& p) {
    int v = 0;
    OFIdeal cur = a;
    while (of_divides(p.ideal, cur)) {
        cur = of_div(OF, cur, p.ideal);
        ++v;
    }
    return v;
}

std::vector<RealPrime> real_primes_over(const RealOrder& OF, const Int& ell) {
    Fp F(ell);
    PolyP g = F.make({OF.omega_norm, -OF.dF, Int(1)});
    auto fac = F.factor(g, 1);
    std::vector<RealPrime> out;
    if (fac.size() == 1 && fac[0].f.deg() == 2) {
        out.push_back({ell, OFIdeal::from_hnf(ell, Int(0), ell), 2});
        return out;
    }
    for (const auto& pf : fac) {
        // (ell, w - r) with pf.f = x - r
        Int r = mod(-pf.f.c[0], ell);
        out.push_back({ell, OFIdeal::from_generators(OF, {{ell, Int(0)}, {-r, Int(1)}}), 1});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RealPrimePower> of_factor(const RealOrder& OF, const OFIdeal& a, const FactorLimits& lim) {
    std::vector<RealPrimePower> out;
    if (a.is_unit()) return out;
    for (const auto& [ell, e] : factor(a.norm(), lim)) {
        for (const auto& P : real_primes_over(OF, ell)) {
            int v = of_valuation(OF, a, P);
            if (v > 0) out.push_back({P, v});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
    return out;
}

OFIdeal of_from_factors(const RealOrder& OF, const std::vector<RealPrimePower>& f) {
    OFIdeal r = OFIdeal::unit();
    for (const auto& [P, e] : f) r = of_mul(OF, r, of_pow(OF, P.ideal, e));
    return r;
}

std::vector<OFIdeal> of_divisors(const RealOrder& OF, const OFIdeal& a) {
    std::vector<OFIdeal> out{OFIdeal::unit()};
    for (const auto& [P, e] : of_factor(OF, a)) {
        std::vector<OFIdeal> next;
        for (const auto& d : out) {
            OFIdeal cur = d;
            for (int k = 0; k <= e; ++k) {
                next.push_back(cur);
                cur = of_mul(OF, cur, P.ideal);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- primes of an order

namespace {

// Basis of (J + ell O)/ell O inside F_ell^4 (O-coordinates).
IntMatrix quotient_subspace(const Order& O, const Lattice& J, const Int& ell) {
    IntMatrix S(0, 4);
    for (std::size_t i = 0; i < J.rank(); ++i) {
        RatVec c = vec_mul(J.basis_row(i), O.basis_inv());
        IntVec v(4);
        for (std::size_t k = 0; k < 4; ++k) {
            check(c[k].get_den() == 1, Errc::Internal, "ideal not contained in order");
            v[k] = mod(c[k].get_num(), ell);
        }
        S.append_row(v);
    }
    return S;
}

struct Splitter {
    const Order& O;
    Int ell;
    Fp F;
    std::mt19937_64 rng;

    IntVec power_coords(const IntVec& b, std::size_t k) {
        IntVec r = *O.coords(FieldElem::from_int(1));
        for (std::size_t i = 0; i < k; ++i) {
            r = O.mul_coords(r, b);
            for (auto& x : r) x = mod(x, ell);
        }
        return r;
    }

    void split(const Lattice& J, std::vector<KPrime>& out, int depth) {
        IntMatrix S = quotient_subspace(O, J, ell);
        std::size_t rJ = F.rank(S);
        std::size_t m = 4 - rJ;
        if (m == 0) return;
        for (int attempt = 0; attempt < 200; ++attempt) {
            IntVec beta(4);
            for (auto& x : beta) x = random_below(rng, ell);
            // minimal polynomial of beta in O/J
            IntMatrix rows = S;
            std::vector<IntVec> pw;
            std::size_t base_rank = rJ;
            PolyP g;
            for (std::size_t k = 0; k <= m; ++k) {
                IntVec vk = power_coords(beta, k);
                IntMatrix trial = rows;
                trial.append_row(vk);
                if (F.rank(trial) == base_rank) {
                    // dependency: find kernel vector with nonzero last coefficient
                    IntMatrix K = F.left_kernel(trial);
                    IntVec kv;
                    for (std::size_t r = 0; r < K.rows(); ++r)
                        if (mod(K(r, trial.rows() - 1), ell) != 0) {
                            kv = K.row(r);
                            break;
                        }
                    check(!kv.empty(), Errc::Internal, "minimal polynomial extraction failed");
                    std::vector<Int> coeffs;
                    for (std::size_t i = 0; i <= k; ++i) coeffs.push_back(kv[S.rows() + i]);
                    g = F.monic(F.make(coeffs));
                    break;
                }
                rows = trial;
                ++base_rank;
                pw.push_back(vk);
            }
            auto fac = F.factor(g, rng());
            if (fac.size() == 1) {
                if (fac[0].f.deg() == static_cast<int>(m)) {
                    Int norm = pow(ell, m);
                    out.push_back({J, norm, static_cast<int>(m)});
                    return;
                }
                continue;
            }
            PolyP g1 = fac[0].f, h = F.make({Int(1)});
            for (std::size_t i = 1; i < fac.size(); ++i) h = F.mul(h, fac[i].f);
            auto eval_at_beta = [&](const PolyP& poly) {
                IntVec acc(4, Int(0));
                for (std::size_t i = 0; i < poly.c.size(); ++i) {
                    IntVec p = power_coords(beta, i);
                    for (std::size_t k = 0; k < 4; ++k) acc[k] += poly.c[i] * p[k];
                }
                return O.elem_from_coords(acc);
            };
            const WeilContext& ctx = O.field();
            Lattice J1 = J + element_times(ctx, eval_at_beta(g1), O.lattice());
            Lattice J2 = J + element_times(ctx, eval_at_beta(h), O.lattice());
            check(depth < 8, Errc::Internal, "prime splitting recursion too deep");
            split(J1, out, depth + 1);
            split(J2, out, depth + 1);
            return;
        }
        fail(Errc::Internal, "could not split the residue algebra at " + to_string(ell));
    }
};

}  // namespace

std::vector<KPrime> order_primes_over(const Order& O, const Int& ell, std::uint64_t seed) {
    Splitter sp{O, ell, Fp(ell), std::mt19937_64(seed)};
    std::vector<KPrime> out;
    sp.split(p_radical(O, ell), out, 0);
    std::sort(out.begin(), out.end(), [](const KPrime& a, const KPrime& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        const IntMatrix& A = a.lat.hnf();
        const IntMatrix& B = b.lat.hnf();
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (A(i, j) != B(i, j)) return A(i, j) < B(i, j);
        return false;
    });
    return out;
}

int split_symbol(const CMField& cm, const RealPrime& l) {
    std::vector<KPrime> above;
    IntMatrix H = l.ideal.hnf();
    for (auto& P : order_primes_over(*cm.OK, l.ell)) {
        bool contains = true;
        for (std::size_t r = 0; r < 2 && contains; ++r)
            contains = P.lat.contains(cm.OF->to_K(H(r, 0), H(r, 1)).vec());
        if (contains) above.push_back(P);
    }
    if (above.size() == 2) return 1;
    check(above.size() == 1, Errc::Internal, "unexpected number of primes above a real prime");
    return above[0].residue_degree == 2 * l.residue_degree ? -1 : 0;
}

// ---------------------------------------------------------------- PrimeOverL

std::vector<PrimeOverL> primes_over(const CMField& cm, const Int& ell, std::uint64_t seed) {
    if (cm.undesirable(ell)) fail(Errc::UndesirablePrime, "ell = " + to_string(ell) + " is undesirable");
    const WeilContext& ctx = *cm.ctx;
    Fp F(ell);
    PolyP f = F.make({ctx.coeff(0), ctx.coeff(1), ctx.coeff(2), ctx.coeff(3), Int(1)});
    std::vector<PrimeOverL> out;
    for (const auto& pf : F.factor(f, seed)) out.push_back({ell, pf.f.c});
    std::sort(out.begin(), out.end());
    return out;
}

PrimeOverL prime_conjugate(const WeilContext& ctx, const PrimeOverL& P) {
    // roots q/x: coefficient of x^(d-i) is r_i q^i
    Fp F(P.ell);
    int d = P.degree();
    std::vector<Int> c(static_cast<std::size_t>(d + 1));
    Int qi = 1;
    for (int i = 0; i <= d; ++i) {
        c[static_cast<std::size_t>(d - i)] = P.rpoly[static_cast<std::size_t>(i)] * qi;
        qi = mod(qi * ctx.q, P.ell);
    }
    return {P.ell, F.monic(F.make(c)).c};
}

RealPrime prime_below(const CMField& cm, const PrimeOverL& P) {
    KIdeal L = k_prime(cm.OK, P);
    for (auto& l : real_primes_over(*cm.OF, P.ell)) {
        IntMatrix H = l.ideal.hnf();
        bool ok = true;
        for (std::size_t r = 0; r < 2 && ok; ++r) ok = L.lat.contains(cm.OF->to_K(H(r, 0), H(r, 1)).vec());
        if (ok) return l;
    }
    fail(Errc::Internal, "no real prime below " + P.str());
}

// ---------------------------------------------------------------- K ideals

KIdeal k_mul(const KIdeal& a, const KIdeal& b) {
    if (a.owner != b.owner && !(*a.owner == *b.owner))
        fail(Errc::OwnerMismatch, "ideals belong to different orders");
    return KIdeal{a.owner, lattice_product(a.owner->field(), a.lat, b.lat)};
}

KIdeal k_conj(const KIdeal& a) {
    RatMatrix B = a.lat.basis();
    const WeilContext& ctx = a.owner->field();
    RatMatrix C(B.rows(), 4);
    for (std::size_t i = 0; i < B.rows(); ++i) C.set_row(i, ctx.conj(FieldElem::from_vec(B.row(i))).vec());
    return KIdeal{a.owner, Lattice::from_rows(C)};
}

KIdeal k_prime(const OrderPtr& O, const PrimeOverL& P) {
    FieldElem r;
    for (std::size_t i = 0; i < P.rpoly.size(); ++i) {
        FieldElem t = O->field().pow(O->field().pi(), i);
        r = O->field().add(r, O->field().scale(t, Rat(P.rpoly[i])));
    }
    Lattice L = O->lattice().scaled(Rat(P.ell)) + element_times(O->field(), r, O->lattice());
    return KIdeal{O, L};
}

KIdeal k_from_prime_power(const OrderPtr& O, const PrimeOverL& P, int e) {
    KIdeal base = k_prime(O, P), r = unit_ideal(O);
    while (e > 0) {
        if (e & 1) r = k_mul(r, base);
        e >>= 1;
        if (e) base = k_mul(base, base);
    }
    return r;
}

Int k_norm(const KIdeal& a) {
    Rat n = a.norm();
    check(n.get_den() == 1, Errc::Internal, "norm of a non-integral ideal");
    return n.get_num();
}

KIdeal k_scale(const KIdeal& a, const FieldElem& g) {
    return KIdeal{a.owner, element_times(a.owner->field(), g, a.lat)};
}

KIdeal push_to(const KIdeal& a, const OrderPtr& O2) {
    return KIdeal{O2, lattice_product(O2->field(), a.lat, O2->lattice())};
}

// ---------------------------------------------------------------- LLL and enumeration

namespace {

Int round_rat(const Rat& x) {
    Rat h = x + Rat(1, 2);
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
    return r;
}

void gso(const RatMatrix& G, RatMatrix& mu, std::vector<Rat>& B) {
    std::size_t n = G.rows();
    mu = RatMatrix(n, n);
    B.assign(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Rat s = G(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * B[k];
            mu(i, j) = s / B[j];
        }
        Rat s = G(i, i);
        for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * B[k];
        B[i] = s;
    }
}

}  // namespace

IntMatrix lll_gram(const RatMatrix& G0, const Rat& delta) {
    std::size_t n = G0.rows();
    IntMatrix U = IntMatrix::identity(n);
    RatMatrix G = G0, mu;
    std::vector<Rat> B;
    gso(G, mu, B);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            Int r = round_rat(mu(k, jj));
            if (r == 0) continue;
            for (std::size_t c = 0; c < n; ++c) U(k, c) -= r * U(jj, c);
            for (std::size_t c = 0; c < n; ++c) G(k, c) -= r * G(jj, c);
            for (std::size_t c = 0; c < n; ++c)
                if (c != k) G(c, k) = G(k, c);
            G(k, k) -= r * G(k, jj);
            mu(k, jj) -= r;
            for (std::size_t i = 0; i < jj; ++i) mu(k, i) -= r * mu(jj, i);
        }
        if (B[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * B[k - 1]) {
            U.swap_rows(k, k - 1);
            G.swap_rows(k, k - 1);
            G.swap_cols(k, k - 1);
            gso(G, mu, B);
            if (k > 1) --k;
        } else {
            ++k;
        }
    }
    return U;
}

RatMatrix t2_gram(const WeilContext& ctx, const RatMatrix& basis) {
    std::size_t n = basis.rows();
    std::vector<FieldElem> e, ec;
    for (std::size_t i = 0; i < n; ++i) {
        e.push_back(FieldElem::from_vec(basis.row(i)));
        ec.push_back(ctx.conj(e.back()));
    }
    RatMatrix G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            G(i, j) = ctx.trace(ctx.mul(e[i], ec[j]));
            G(j, i) = G(i, j);
        }
    return G;
}

std::vector<IntVec> short_vectors(const RatMatrix& G0, const Rat& bound, std::size_t cap) {
    std::size_t n = G0.rows();
    IntMatrix U = lll_gram(G0);
    RatMatrix G = to_rat(U) * G0 * to_rat(U).transpose();
    RatMatrix mu;
    std::vector<Rat> B;
    gso(G, mu, B);
    std::vector<long double> Bd(n);
    std::vector<std::vector<long double>> mud(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        Bd[i] = static_cast<long double>(B[i].get_d());
        for (std::size_t j = 0; j < i; ++j) mud[i][j] = static_cast<long double>(mu(i, j).get_d());
    }
    long double C = static_cast<long double>(bound.get_d()) * (1 + 1e-9L) + 1e-12L;
    std::vector<IntVec> out;
    std::vector<long> x(n, 0);
    // depth-first enumeration from the last coordinate down
    std::function<void(std::size_t, long double, bool)> rec = [&](std::size_t lvl, long double used, bool upper_zero) {
        long double c = 0;
        for (std::size_t j = lvl + 1; j < n; ++j) c -= mud[j][lvl] * static_cast<long double>(x[j]);
        long double rem = C - used;
        if (rem < 0) return;
        long double w = std::sqrt(rem / Bd[lvl]);
        long lo = static_cast<long>(std::ceil(c - w - 1e-9L));
        long hi = static_cast<long>(std::floor(c + w + 1e-9L));
        if (upper_zero && lo < 0) lo = 0;
        for (long v = lo; v <= hi; ++v) {
            long double d = static_cast<long double>(v) - c;
            long double nu = used + d * d * Bd[lvl];
            if (nu > C) continue;
            x[lvl] = v;
            if (lvl == 0) {
                bool nz = false;
                for (auto xi : x) nz |= xi != 0;
                if (!nz) continue;
                // exact check
                Rat val = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if (x[i] && x[j]) val += G(i, j) * Rat(x[i]) * Rat(x[j]);
                if (val <= bound) {
                    IntVec y(n, Int(0));
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j) y[j] += Int(x[i]) * U(i, j);
                    out.push_back(y);
                    check(out.size() <= cap, Errc::Internal, "short vector enumeration exceeded its cap");
                }
            } else {
                rec(lvl - 1, nu, upper_zero && v == 0);
            }
        }
        x[lvl] = 0;
    };
    rec(n - 1, 0, true);
    return out;
}

std::vector<ReducedIdeal> reduce_candidates(const KIdeal& a, std::size_t max_count) {
    const Order& O = *a.owner;
    const WeilContext& ctx = O.field();
    Lattice inv = colon(ctx, O.lattice(), a.lat);
    RatMatrix basis = inv.basis();
    IntMatrix U = lll_gram(t2_gram(ctx, basis));
    RatMatrix red = to_rat(U) * basis;
    std::vector<FieldElem> v;
    for (std::size_t i = 0; i < 4; ++i) v.push_back(FieldElem::from_vec(red.row(i)));
    std::vector<FieldElem> cands = v;
    for (std::size_t i = 0; i < 4 && cands.size() < max_count + 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            cands.push_back(ctx.add(v[i], v[j]));
            cands.push_back(ctx.sub(v[i], v[j]));
        }
    std::vector<ReducedIdeal> out;
    std::set<std::vector<Int>> seen;
    for (const auto& g : cands) {
        if (out.size() >= max_count) break;
        KIdeal b{a.owner, element_times(ctx, g, a.lat)};
        std::vector<Int> key;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) key.push_back(b.lat.hnf()(i, j));
        key.push_back(b.lat.den());
        if (!seen.insert(key).second) continue;
        out.push_back({b, g});
    }
    return out;
}

ReducedIdeal reduce_ideal(const KIdeal& a) {
    auto c = reduce_candidates(a, 4);
    std::size_t best = 0;
    Rat bn = c[0].b.norm();
    for (std::size_t i = 1; i < c.size(); ++i) {
        Rat n = c[i].b.norm();
        if (n < bn) {
            bn = n;
            best = i;
        }
    }
    return c[best];
}

}  // namespace cmendo
