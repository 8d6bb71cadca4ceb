#include "cmendo/sim.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "cmendo/errors.hpp"

namespace cmendo {

std::string id_hex(const VarietyId& id) {
    std::string s;
    char buf[3];
    for (unsigned char b : id) {
        std::snprintf(buf, sizeof buf, "%02x", b);
        s += buf;
    }
    return s;
}

SimWorld::SimWorld(std::shared_ptr<ClassGroupCache> groups, OFIdeal v, std::uint64_t seed)
    : groups_(std::move(groups)), v_(std::move(v)) {
    check(sodium_init() >= 0, Errc::Internal, "libsodium failed to initialize");
    const RealOrder& OF = *field().OF;
    primes_ = of_factor(OF, v_);
    std::string s = "cmendo-sim:" + std::to_string(seed);
    crypto_generichash(key_.data(), key_.size(), reinterpret_cast<const unsigned char*>(s.data()), s.size(), nullptr, 0);
}

std::pair<std::shared_ptr<SimWorld>, VarietyId> SimWorld::build(std::shared_ptr<ClassGroupCache> groups,
                                                                const OFIdeal& v, const OFIdeal& hidden_f,
                                                                std::uint64_t seed) {
    const CMField& cm = groups->field();
    check(of_divides(v, cm.v), Errc::NotDivisor, v.str() + " does not divide " + cm.v.str());
    check(of_divides(hidden_f, v), Errc::NotDivisor, hidden_f.str() + " does not divide " + v.str());
    std::shared_ptr<SimWorld> w(new SimWorld(std::move(groups), v, seed));
    SimState s;
    for (const auto& pp : w->primes_) s.levels.push_back(of_valuation(*cm.OF, hidden_f, pp.prime));
    ClassGroupPtr G = w->group_at(s.levels);
    std::mt19937_64 rng(seed);
    for (const auto& d : G->invariants) s.coords.push_back(random_below(rng, d));
    VarietyId A0 = w->variety_at(s);
    return {w, A0};
}

OFIdeal SimWorld::fplus_of(const std::vector<int>& levels) const {
    std::vector<RealPrimePower> f;
    for (std::size_t i = 0; i < primes_.size(); ++i)
        if (levels[i] > 0) f.push_back({primes_[i].prime, levels[i]});
    return of_from_factors(*field().OF, f);
}

ClassGroupPtr SimWorld::group_at(const std::vector<int>& levels) { return groups_->get(fplus_of(levels)); }

VarietyId SimWorld::mint(const SimState& s) {
    std::string buf;
    for (int e : s.levels) buf += std::to_string(e) + ",";
    buf += "|";
    for (const auto& c : s.coords) buf += to_string(c) + ",";
    VarietyId id;
    crypto_generichash(id.data(), id.size(), reinterpret_cast<const unsigned char*>(buf.data()), buf.size(), key_.data(),
                       key_.size());
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, fresh] = registry_.emplace(id, s);
    check(fresh || it->second == s, Errc::Internal, "variety id collision");
    return id;
}

VarietyId SimWorld::variety_at(const SimState& s) {
    check(s.levels.size() == primes_.size(), Errc::Precondition, "level vector has the wrong length");
    for (std::size_t i = 0; i < primes_.size(); ++i)
        check(s.levels[i] >= 0 && s.levels[i] <= primes_[i].e, Errc::Precondition, "level outside the volcano");
    ClassGroupPtr G = group_at(s.levels);
    check(s.coords.size() == G->rank(), Errc::Precondition, "class coordinates have the wrong length");
    SimState r{s.levels, G->reduce(s.coords)};
    return mint(r);
}

SimState SimWorld::hidden_state(const VarietyId& A) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = registry_.find(A);
    check(it != registry_.end(), Errc::Precondition, "unknown variety " + id_hex(A));
    return it->second;
}

OFIdeal SimWorld::hidden_fplus(const VarietyId& A) const { return fplus_of(hidden_state(A).levels); }

SimCost SimWorld::cost() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cost_;
}

void SimWorld::reset_cost() {
    std::lock_guard<std::mutex> lock(mu_);
    cost_ = {};
}

const std::vector<PrimeOverL>& SimWorld::admissible_over(const Int& ell) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = admissible_.find(ell);
        if (it != admissible_.end()) return it->second;
    }
    std::vector<PrimeOverL> ps;
    if (is_prime(ell) && !field().undesirable(ell)) ps = primes_over(field(), ell);
    std::lock_guard<std::mutex> lock(mu_);
    return admissible_.emplace(ell, std::move(ps)).first->second;
}

IntVec SimWorld::prime_class(const std::vector<int>& levels, const PrimeOverL& L) {
    auto key = std::make_pair(levels, L);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = prime_classes_.find(key);
        if (it != prime_classes_.end()) return it->second;
    }
    IntVec c = dlog_prime(*group_at(levels), L);
    std::lock_guard<std::mutex> lock(mu_);
    return prime_classes_.emplace(key, c).first->second;
}

VarietyId SimWorld::apply_prime(const VarietyId& A, const PrimeOverL& L, const Int& e) {
    const auto& adm = admissible_over(L.ell);
    if (std::find(adm.begin(), adm.end(), L) == adm.end())
        fail(Errc::InadmissiblePrime, L.str() + " is not an admissible prime of O_F[pi]");
    SimState s = hidden_state(A);
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++cost_.apply_calls;
        Int n = abs(e);
        cost_.isogeny_steps += n;
        cost_.weighted_steps += n * prime_below(field(), L).norm();
    }
    if (e == 0) return A;
    ClassGroupPtr G = group_at(s.levels);
    s.coords = G->add(s.coords, G->scale(prime_class(s.levels, L), e));
    return mint(s);
}

std::size_t SimWorld::prime_index(const RealPrime& p) const {
    for (std::size_t i = 0; i < primes_.size(); ++i)
        if (primes_[i].prime == p) return i;
    fail(Errc::NotVolcanoPrime, p.ideal.str() + " does not divide " + v_.str());
}

const SimWorld::Descent& SimWorld::descent(const std::vector<int>& lower, const std::vector<int>& upper) {
    auto key = std::make_pair(lower, upper);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = descents_.find(key);
        if (it != descents_.end()) return it->second;
    }
    ClassGroupPtr Gl = group_at(lower), Gu = group_at(upper);
    Descent d;
    d.hom = class_group_hom(*Gl, *Gu);

    // x with x*hom = 0 mod the invariants of Gu, modulo those of Gl.
    std::size_t rl = Gl->rank(), ru = Gu->rank();
    IntMatrix stacked(rl + ru, ru);
    for (std::size_t i = 0; i < rl; ++i)
        for (std::size_t j = 0; j < ru; ++j) stacked(i, j) = d.hom(i, j);
    for (std::size_t j = 0; j < ru; ++j) stacked(rl + j, j) = Gu->invariants[j];
    IntMatrix K = left_kernel(stacked);
    std::vector<IntVec> gens;
    for (std::size_t i = 0; i < K.rows(); ++i) {
        IntVec row = K.row(i);
        IntVec g = Gl->reduce(IntVec(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(rl)));
        if (g != Gl->zero()) gens.push_back(g);
    }
    std::set<IntVec> seen{Gl->zero()};
    std::vector<IntVec> frontier{Gl->zero()};
    while (!frontier.empty()) {
        std::vector<IntVec> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                IntVec y = Gl->add(x, g);
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
        frontier = std::move(next);
    }
    d.kernel.assign(seen.begin(), seen.end());
    check(Gl->h == Gu->h * static_cast<long>(d.kernel.size()), Errc::Internal, "class group map is not surjective");
    std::lock_guard<std::mutex> lock(mu_);
    return descents_.emplace(key, std::move(d)).first->second;
}

const std::vector<IntVec>& SimWorld::horizontal(const std::vector<int>& levels, std::size_t i) {
    auto key = std::make_pair(levels, i);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = horizontals_.find(key);
        if (it != horizontals_.end()) return it->second;
    }
    const CMField& cm = field();
    const RealPrime& p = primes_[i].prime;
    ClassGroupPtr G = group_at(levels);
    std::vector<IntVec> out;
    RatVec g1 = cm.OF->to_K(p.ideal.a(), p.ideal.b()).vec(), g2 = cm.OF->to_K(Int(0), p.ideal.c()).vec();
    for (const auto& P : order_primes_over(*cm.OK, p.ell)) {
        // An inert p has a prime of norm N(p)^2 above it, which gives no p-isogeny.
        if (P.norm != p.norm() || !P.lat.contains(g1) || !P.lat.contains(g2)) continue;
        KIdeal a{G->order, P.lat.intersect(G->order->lattice())};
        out.push_back(dlog(*G, a));
    }
    std::sort(out.begin(), out.end());
    std::lock_guard<std::mutex> lock(mu_);
    return horizontals_.emplace(key, std::move(out)).first->second;
}

std::vector<VarietyId> SimWorld::list_l_neighbors(const VarietyId& A, const RealPrime& p) {
    std::size_t i = prime_index(p);
    SimState s = hidden_state(A);
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++cost_.neighbor_calls;
    }
    std::vector<VarietyId> out;
    int e = s.levels[i];
    ClassGroupPtr G = group_at(s.levels);
    if (e > 0) {
        std::vector<int> up = s.levels;
        --up[i];
        const Descent& d = descent(s.levels, up);
        out.push_back(mint({up, apply_hom(*group_at(up), d.hom, s.coords)}));
    } else {
        for (const auto& c : horizontal(s.levels, i)) out.push_back(mint({s.levels, G->add(s.coords, c)}));
    }
    if (e < primes_[i].e) {
        std::vector<int> down = s.levels;
        ++down[i];
        const Descent& d = descent(down, s.levels);
        ClassGroupPtr Gd = group_at(down);
        check(Gd->fb == G->fb, Errc::Internal, "factor bases of neighboring orders differ");
        IntVec x(G->fb.size(), Int(0));
        for (std::size_t j = 0; j < s.coords.size(); ++j)
            for (std::size_t t = 0; t < x.size(); ++t) x[t] += s.coords[j] * G->generators[j][t];
        IntVec c0 = Gd->dlog_exponents(x);
        for (const auto& k : d.kernel) out.push_back(mint({down, Gd->add(c0, k)}));
    }
    return out;
}

}  // namespace cmendo
