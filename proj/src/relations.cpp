#include "cmendo/relations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cmendo/errors.hpp"
#include "cmendo/serialize.hpp"

namespace cmendo {

Int relation_smoothness_bound(const Int& disc, double mu) {
    double ln = 2 * log_abs(disc);
    double b = std::exp(mu * std::sqrt(ln * std::log(ln)));
    return Int(static_cast<unsigned long>(std::llround(b)));
}

Int relation_prime_count_bound(const Int& disc, int k0) {
    return Int(k0 + static_cast<long>(std::floor(8 * std::sqrt(log_abs(disc)))));
}

// ---------------------------------------------------------------- cache

ClassGroupCache::ClassGroupCache(CMFieldPtr cm, ClassGroupParams params, std::optional<std::filesystem::path> dir)
    : cm_(std::move(cm)), params_(params), dir_(std::move(dir)) {
    if (params_.bound == 0) params_.bound = default_factor_base_bound(cm_->OFpi->disc());
}

ClassGroupPtr ClassGroupCache::get(const OFIdeal& f) {
    std::vector<Int> key{f.a(), f.b(), f.c()};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = groups_.find(key);
    if (it != groups_.end()) return it->second;
    std::optional<std::filesystem::path> file;
    if (dir_) {
        const WeilContext& ctx = *cm_->ctx;
        std::ostringstream name;
        name << "classgroup-" << ctx.q << "_" << ctx.a1 << "_" << ctx.a2 << "-" << f.a() << "_" << f.b() << "_"
             << f.c() << "-" << params_.bound << "-" << params_.seed << ".txt";
        file = *dir_ / name.str();
        std::ifstream in(*file);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            ClassGroupPtr G = read_class_group(ss.str(), *cm_);
            return groups_.emplace(key, G).first->second;
        }
    }
    ClassGroupPtr G = compute_class_group(*cm_, f, params_);
    ++computed_;
    if (file) {
        std::filesystem::create_directories(*dir_);
        std::ofstream out(*file);
        out << write_class_group(*G, *cm_->ctx);
    }
    return groups_.emplace(key, G).first->second;
}

// ---------------------------------------------------------------- relations

IntVec relation_class(const ClassGroupData& G, const Relation& R) {
    IntVec c = G.zero();
    for (const auto& t : R.terms) c = G.add(c, G.scale(dlog_prime(G, t.prime), t.exponent));
    return c;
}

bool relation_holds_in_order(const ClassGroupData& G, const Relation& R) {
    for (const auto& x : relation_class(G, R))
        if (x != 0) return false;
    return true;
}

namespace {

KIdeal reduced_product(const KIdeal& a, const KIdeal& b) { return reduce_ideal(k_mul(a, b)).b; }

KIdeal reduced_power(const OrderPtr& O, const Lattice& P, Int e) {
    KIdeal r = unit_ideal(O), base{O, P};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = reduced_product(r, base);
        e >>= 1;
        if (e > 0) base = reduced_product(base, base);
    }
    return r;
}

}  // namespace

Relation find_relation(const CMField& cm, const ClassGroupData& G1, const ClassGroupData& G2,
                       const RelationParams& params) {
    check(params.mu > 0 && params.k0 >= 1, Errc::Precondition, "relation parameters out of range");
    const Int& D1 = G1.order->disc();
    Int B = params.B_override ? *params.B_override : relation_smoothness_bound(D1, params.mu);
    Int n = D1 * D1;
    long y_cap = static_cast<long>(std::floor(8 * std::sqrt(log_abs(D1))));

    std::vector<PrimeOverL> primes;
    for (std::uint64_t ell : primes_up_to(B.get_ui())) {
        if (cm.undesirable(Int(ell))) continue;
        for (auto& P : primes_over(cm, Int(ell), params.seed))
            if (P.norm() <= B) primes.push_back(P);
    }
    std::sort(primes.begin(), primes.end());
    if (primes.empty()) fail(Errc::NoRelationFound, "no admissible primes below B = " + to_string(B));
    std::vector<std::size_t> conj(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        PrimeOverL c = prime_conjugate(*cm.ctx, primes[i]);
        auto it = std::lower_bound(primes.begin(), primes.end(), c);
        check(it != primes.end() && *it == c, Errc::Internal, "conjugate prime missing from the prime list");
        conj[i] = static_cast<std::size_t>(it - primes.begin());
    }
    PrimeCache cache(G1.order, primes);
    std::mt19937_64 rng(params.seed);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(params.k0), primes.size());

    for (std::uint64_t trial = 1; trial <= params.max_trials; ++trial) {
        std::vector<std::size_t> idx(primes.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(k);
        IntVec x(primes.size(), Int(0));
        Int prod = 1;
        for (std::size_t i : idx) {
            Int hi = B / primes[i].norm();
            x[i] = random_below(rng, hi + 1);
            prod *= pow(primes[i].norm(), x[i].get_ui());
        }
        if (prod <= n) continue;

        KIdeal b = unit_ideal(G1.order);
        for (std::size_t i : idx)
            if (x[i] > 0) b = reduced_product(b, reduced_power(G1.order, cache.power(i, 1), x[i]));
        auto y = decompose(cache, b);
        if (!y) continue;
        long nonzero = std::count_if(y->begin(), y->end(), [](const Int& v) { return v != 0; });
        if (nonzero > y_cap) continue;

        Relation R;
        bool within = true;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            std::size_t j = conj[i];
            if (j < i) continue;
            Int net = x[i] - (*y)[i];
            if (j != i) net -= x[j] - (*y)[j];
            if (net == 0) continue;
            RelationTerm t{net > 0 ? primes[i] : primes[j], net < 0, abs(net)};
            within &= t.exponent <= B;
            R.terms.push_back(std::move(t));
        }
        if (R.terms.empty() || !within) continue;
        std::sort(R.terms.begin(), R.terms.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
        R.meta = {B, params.seed, trial, B, relation_prime_count_bound(D1, params.k0)};
        check(relation_holds_in_order(G1, R), Errc::Internal, "reduction produced a relation that fails in O1");
        if (!relation_holds_in_order(G2, R)) return R;
    }
    fail(Errc::NoRelationFound, "no separating relation after " + std::to_string(params.max_trials) + " trials");
}

std::pair<OFIdeal, OFIdeal> prime_power_test_orders(const CMField& cm, const OFIdeal& v, const RealPrime& p, int k) {
    const RealOrder& OF = *cm.OF;
    int vp = of_valuation(OF, v, p);
    check(k >= 1 && k <= vp, Errc::Precondition,
          "exponent " + std::to_string(k) + " outside 1.." + std::to_string(vp) + " for " + p.ideal.str());
    check(p.norm() >= 3, Errc::Precondition, "prime of norm < 3 cannot be separated by relations");
    OFIdeal f1 = of_div(OF, v, of_pow(OF, p.ideal, vp - k + 1));
    OFIdeal f2 = of_pow(OF, p.ideal, k);
    return {f1, f2};
}

Relation relation_for_prime_power(const OFIdeal& v, const RealPrime& p, int k, ClassGroupCache& cache,
                                  const RelationParams& params) {
    auto [f1, f2] = prime_power_test_orders(cache.field(), v, p, k);
    ClassGroupPtr G1 = cache.get(f1);
    ClassGroupPtr G2 = cache.get(f2);
    return find_relation(cache.field(), *G1, *G2, params);
}

}  // namespace cmendo
