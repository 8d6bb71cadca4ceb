#include "cmendo/classgroup.hpp"

#include <algorithm>
#include <cmath>

#include "cmendo/errors.hpp"

namespace cmendo {

Int default_factor_base_bound(const Int& disc) {
    double l = log_abs(disc);
    Int b(static_cast<unsigned long>(std::ceil(l * l)));
    return b < 30 ? Int(30) : b;
}

PrimeCache::PrimeCache(OrderPtr O, std::vector<PrimeOverL> fb) : O_(std::move(O)), fb_(std::move(fb)) {}

const Lattice& PrimeCache::power(std::size_t i, int e) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(i, e);
    auto it = powers_.find(key);
    if (it != powers_.end()) return it->second;
    Lattice L;
    if (e == 1) {
        L = k_prime(O_, fb_[i]).lat;
    } else {
        auto base = powers_.find({i, 1});
        if (base == powers_.end()) base = powers_.emplace(std::make_pair(i, 1), k_prime(O_, fb_[i]).lat).first;
        auto prev = powers_.find({i, e - 1});
        check(prev != powers_.end(), Errc::Internal, "prime powers must be requested in order");
        L = lattice_product(O_->field(), prev->second, base->second);
    }
    return powers_.emplace(key, std::move(L)).first->second;
}

// ---------------------------------------------------------------- ClassGroupData

std::optional<std::size_t> ClassGroupData::fb_index(const PrimeOverL& P) const {
    auto it = std::lower_bound(fb.begin(), fb.end(), P);
    if (it == fb.end() || !(*it == P)) return std::nullopt;
    return static_cast<std::size_t>(it - fb.begin());
}

IntVec ClassGroupData::reduce(IntVec c) const {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod(c[i], invariants[i]);
    return c;
}

IntVec ClassGroupData::add(const IntVec& x, const IntVec& y) const {
    IntVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return reduce(std::move(r));
}

IntVec ClassGroupData::scale(const IntVec& x, const Int& k) const {
    IntVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] * k;
    return reduce(std::move(r));
}

IntVec ClassGroupData::dlog_exponents(const IntVec& e) const {
    IntVec c = zero();
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += e[j] * W(j, i);
    }
    return reduce(std::move(c));
}

Int ClassGroupData::order_of(const IntVec& c) const {
    Int r = 1;
    for (std::size_t i = 0; i < c.size(); ++i) r = lcm(r, invariants[i] / gcd(invariants[i], c[i]));
    return r;
}

bool ClassGroupData::operator==(const ClassGroupData& o) const {
    return fplus == o.fplus && bound == o.bound && seed == o.seed && fb == o.fb && invariants == o.invariants &&
           W == o.W && generators == o.generators && h == o.h;
}

// ---------------------------------------------------------------- decomposition

std::optional<IntVec> decompose(PrimeCache& primes, const KIdeal& b) {
    const auto& fb = primes.fb();
    IntVec e(fb.size(), Int(0));
    Int n = k_norm(b);
    std::size_t i = 0;
    while (i < fb.size() && n != 1) {
        const Int& ell = fb[i].ell;
        std::size_t j = i;
        while (j < fb.size() && fb[j].ell == ell) ++j;
        int k = 0;
        while (mpz_divisible_p(n.get_mpz_t(), ell.get_mpz_t())) {
            n /= ell;
            ++k;
        }
        if (k > 0) {
            int used = 0;
            for (std::size_t t = i; t < j; ++t) {
                int deg = fb[t].degree(), v = 0;
                while (used + deg * (v + 1) <= k && primes.power(t, v + 1).contains(b.lat)) ++v;
                used += deg * v;
                e[t] = v;
            }
            if (used != k) return std::nullopt;
        }
        i = j;
    }
    if (n != 1) return std::nullopt;
    return e;
}

std::optional<IntVec> decompose(const ClassGroupData& G, const KIdeal& b) { return decompose(*G.cache, b); }

namespace {

// Multiply a by one to three random factor-base primes, recording them in r.
KIdeal random_twist(const ClassGroupData& G, const KIdeal& a, IntVec& r, std::mt19937_64& rng, int count) {
    KIdeal x = a;
    for (int t = 0; t < count; ++t) {
        std::size_t j = static_cast<std::size_t>(rng() % G.fb.size());
        r[j] += 1;
        x = KIdeal{x.owner, lattice_product(x.owner->field(), x.lat, G.cache->power(j, 1))};
    }
    return x;
}

void finish_structure(ClassGroupData& G, const HnfBuilder& hb) {
    std::size_t n = G.fb.size();
    IntMatrix H = hb.matrix();
    G.h = hb.determinant();
    std::vector<std::size_t> J;
    std::vector<long> pos(n, -1);
    for (std::size_t j = 0; j < n; ++j)
        if (H(j, j) != 1) {
            pos[j] = static_cast<long>(J.size());
            J.push_back(j);
        }
    std::size_t m = J.size();
    // rho: Z^n -> Z^J eliminating the columns whose pivot is 1
    IntMatrix rho(n, m);
    for (std::size_t k = n; k-- > 0;) {
        if (pos[k] >= 0) {
            rho(k, static_cast<std::size_t>(pos[k])) = 1;
            continue;
        }
        for (std::size_t c = 0; c < m; ++c) {
            Int s = 0;
            for (std::size_t t = k + 1; t < n; ++t)
                if (H(k, t) != 0) s -= H(k, t) * rho(t, c);
            rho(k, c) = mod(s, G.h);
        }
    }
    IntMatrix L(0, m);
    for (std::size_t j : J) {
        IntVec r(m, Int(0));
        for (std::size_t t = j; t < n; ++t)
            if (H(j, t) != 0)
                for (std::size_t c = 0; c < m; ++c) r[c] += H(j, t) * rho(t, c);
        for (auto& x : r) x = mod(x, G.h);
        L.append_row(r);
    }
    for (std::size_t c = 0; c < m; ++c) {
        IntVec r(m, Int(0));
        r[c] = G.h;
        L.append_row(r);
    }
    IntMatrix Lh = m ? hnf_rows(L).H : IntMatrix(0, 0);
    SmithResult S = m ? smith(Lh) : SmithResult{};
    IntMatrix Vinv(m, m);
    if (m) {
        RatMatrix Vi = inverse(to_rat(S.V));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) Vinv(r, c) = Vi(r, c).get_num();
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m; ++i)
        if (S.diag[i] != 1) keep.push_back(i);
    G.invariants.clear();
    G.W = IntMatrix(n, keep.size());
    G.generators.clear();
    IntMatrix RV = m ? rho * S.V : IntMatrix(n, 0);
    Int prod = 1;
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const Int& d = S.diag[keep[c]];
        G.invariants.push_back(d);
        prod *= d;
        for (std::size_t r = 0; r < n; ++r) G.W(r, c) = mod(RV(r, keep[c]), d);
        IntVec g(n, Int(0));
        for (std::size_t t = 0; t < m; ++t) g[J[t]] = mod(Vinv(keep[c], t), G.h);
        G.generators.push_back(g);
    }
    check(prod == G.h, Errc::Internal, "Smith invariants do not multiply to the class number");
}

}  // namespace

ClassGroupPtr compute_class_group(const CMField& cm, const OFIdeal& fplus, const ClassGroupParams& params) {
    auto G = std::make_shared<ClassGroupData>();
    G->order = cm.order_of(fplus);
    G->fplus = fplus;
    G->seed = params.seed;
    G->bound = params.bound > 0 ? params.bound : default_factor_base_bound(G->order->disc());
    for (std::uint64_t ell : primes_up_to(G->bound.get_ui())) {
        if (cm.undesirable(Int(ell))) continue;
        for (auto& P : primes_over(cm, ell, params.seed))
            if (P.norm() <= G->bound) G->fb.push_back(P);
    }
    std::sort(G->fb.begin(), G->fb.end());
    std::size_t n = G->fb.size();
    if (n == 0) fail(Errc::FactorBaseTooSmall, "no admissible primes below " + to_string(G->bound));
    G->cache = std::make_shared<PrimeCache>(G->order, G->fb);

    std::mt19937_64 rng(params.seed);
    HnfBuilder hb(n, true);
    int quiet = 0;
    std::size_t next = 0, last_growth = 0;
    for (std::size_t round = 0;; ++round) {
        if (round >= params.max_rounds)
            fail(Errc::FactorBaseTooSmall, "relation search did not saturate with bound " + to_string(G->bound));
        std::size_t i = next++ % n;
        IntVec e(n, Int(0));
        e[i] = 1;
        KIdeal a = random_twist(*G, KIdeal{G->order, G->cache->power(i, 1)}, e, rng, 2);
        for (int step = 0; step < 6; ++step) {
            auto cands = reduce_candidates(a, 6);
            for (const auto& c : cands) {
                auto dec = decompose(*G, c.b);
                if (!dec) continue;
                IntVec rel(n);
                bool zero = true;
                for (std::size_t t = 0; t < n; ++t) {
                    rel[t] = e[t] - (*dec)[t];
                    zero &= rel[t] == 0;
                }
                if (zero) continue;
                ++G->relations_used;
                bool grew = hb.insert(rel);
                if (grew) last_growth = round;
                if (hb.full_rank()) quiet = grew ? 0 : quiet + 1;
                // Stop only after every factor-base prime has been the target
                // of two rounds without the lattice growing.
                if (hb.full_rank() && quiet >= params.saturation && round >= last_growth + 2 * n) {
                    finish_structure(*G, hb);
                    return G;
                }
            }
            a = random_twist(*G, cands[0].b, e, rng, 1);
        }
    }
}

// ---------------------------------------------------------------- queries

IntVec dlog(const ClassGroupData& G, const KIdeal& a, std::uint64_t seed) {
    if (a.owner != G.order && !(*a.owner == *G.order))
        fail(Errc::OwnerMismatch, "ideal does not belong to the class group's order");
    if (a.lat == G.order->lattice()) return G.zero();
    if (auto d = decompose(G, a)) return G.dlog_exponents(*d);
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 5000; ++t) {
        IntVec r(G.fb.size(), Int(0));
        KIdeal x = random_twist(G, a, r, rng, 1 + t % 3);
        for (const auto& c : reduce_candidates(x, 6)) {
            auto d = decompose(G, c.b);
            if (!d) continue;
            for (std::size_t j = 0; j < r.size(); ++j) (*d)[j] -= r[j];
            return G.dlog_exponents(*d);
        }
    }
    fail(Errc::DecompositionTimeout, "no smooth equivalent ideal found");
}

IntVec dlog_prime(const ClassGroupData& G, const PrimeOverL& P, std::uint64_t seed) {
    if (auto i = G.fb_index(P)) {
        IntVec c = G.zero();
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = G.W(*i, k);
        return c;
    }
    return dlog(G, k_prime(G.order, P), seed);
}

bool is_principal(const ClassGroupData& G, const KIdeal& a) {
    for (const auto& x : dlog(G, a))
        if (x != 0) return false;
    return true;
}

Int element_order(const ClassGroupData& G, const KIdeal& a) { return G.order_of(dlog(G, a)); }

KIdeal push_ideal(const OrderPtr& O1, const OrderPtr& O2, const KIdeal& a) {
    if (!O2->contains(*O1)) fail(Errc::NotNested, "target order does not contain the source order");
    if (a.owner != O1 && !(*a.owner == *O1)) fail(Errc::OwnerMismatch, "ideal does not belong to the source order");
    return KIdeal{O2, lattice_product(O2->field(), a.lat, O2->lattice())};
}

IntMatrix class_group_hom(const ClassGroupData& G1, const ClassGroupData& G2) {
    if (!G2.order->contains(*G1.order)) fail(Errc::NotNested, "class group map needs nested orders");
    std::vector<std::optional<IntVec>> img(G1.fb.size());
    IntMatrix M(G1.rank(), G2.rank());
    for (std::size_t i = 0; i < G1.rank(); ++i) {
        IntVec c = G2.zero();
        for (std::size_t j = 0; j < G1.fb.size(); ++j) {
            const Int& g = G1.generators[i][j];
            if (g == 0) continue;
            if (!img[j]) img[j] = dlog_prime(G2, G1.fb[j]);
            c = G2.add(c, G2.scale(*img[j], g));
        }
        M.set_row(i, c);
    }
    return M;
}

IntVec apply_hom(const ClassGroupData& G2, const IntMatrix& M, const IntVec& c) {
    IntVec r = G2.zero();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0)
            for (std::size_t k = 0; k < r.size(); ++k) r[k] += c[i] * M(i, k);
    return G2.reduce(std::move(r));
}

}  // namespace cmendo
