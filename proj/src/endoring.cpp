#include "cmendo/endoring.hpp"

#include <algorithm>
#include <climits>

#include "cmendo/errors.hpp"
#include "cmendo/requirements.hpp"

namespace cmendo {

// ---------------------------------------------------------------- climbing

namespace {

struct Walker {
    IsogenyOracle& oracle;
    const RealPrime& p;
    std::size_t degree;  // N(p) + 1 off the floor
    std::mt19937_64 rng;

    std::vector<VarietyId> neighbors(const VarietyId& A) {
        auto nb = oracle.list_l_neighbors(A, p);
        if (nb.size() != 1 && nb.size() != degree)
            fail(Errc::OracleInconsistency, "vertex with " + std::to_string(nb.size()) + " neighbors in a " +
                                                std::to_string(degree - 1) + "-volcano");
        return nb;
    }

    // Steps from cur to a floor vertex along a random non-backtracking walk,
    // or nullopt after `cap` steps.
    std::optional<int> walk(VarietyId prev, VarietyId cur, int cap) {
        for (int steps = 0;; ++steps) {
            auto nb = neighbors(cur);
            if (nb.size() == 1) return steps;
            if (steps == cap) return std::nullopt;
            auto it = std::find(nb.begin(), nb.end(), prev);
            if (it != nb.end()) nb.erase(it);
            std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
            prev = cur;
            cur = nb[pick(rng)];
        }
    }
};

}  // namespace

int volcano_level(IsogenyOracle& oracle, const VarietyId& A, const RealPrime& p, int depth, std::uint64_t seed) {
    if (depth == 0) return 0;
    Walker w{oracle, p, static_cast<std::size_t>(p.norm().get_ui()) + 1, std::mt19937_64(seed)};
    auto nb = w.neighbors(A);
    if (nb.size() == 1) return depth;
    std::shuffle(nb.begin(), nb.end(), w.rng);
    // At most two neighbors fail to descend, so three walks find the floor.
    int best = INT_MAX;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, nb.size()); ++i)
        if (auto s = w.walk(A, nb[i], depth - 1)) best = std::min(best, *s + 1);
    if (best == INT_MAX) fail(Errc::OracleInconsistency, "no walk reached the floor of the " + p.ideal.str() + "-volcano");
    return depth - best;
}

ClimbResult isogeny_climb(IsogenyOracle& oracle, const VarietyId& A, const RealPrime& p, int depth,
                          std::uint64_t seed) {
    ClimbResult r{volcano_level(oracle, A, p, depth, seed), A};
    Walker w{oracle, p, static_cast<std::size_t>(p.norm().get_ui()) + 1, std::mt19937_64(seed + 1)};
    for (int level = r.valuation; level > 0; --level) {
        auto nb = w.neighbors(r.top);
        std::optional<VarietyId> up;
        if (nb.size() == 1) {
            up = nb[0];
        } else {
            std::shuffle(nb.begin(), nb.end(), w.rng);
            // Children reach the floor in exactly depth - level - 1 steps.
            for (const auto& n : nb)
                if (!w.walk(r.top, n, depth - level - 1)) {
                    up = n;
                    break;
                }
        }
        if (!up) fail(Errc::OracleInconsistency, "no ascending edge at level " + std::to_string(level));
        r.top = *up;
    }
    return r;
}

bool relation_holds_for(IsogenyOracle& oracle, const VarietyId& A, const Relation& R) {
    VarietyId X = A;
    for (const auto& t : R.terms) X = oracle.apply_prime(X, t.prime, t.exponent);
    return oracle.same_variety(X, A);
}

// ---------------------------------------------------------------- from above

EndoringResult compute_endoring(ClassGroupCache& cache, IsogenyOracle& oracle, const VarietyId& A,
                                const DriverConfig& cfg) {
    const CMField& cm = cache.field();
    const RealOrder& OF = *cm.OF;
    check(cfg.C_bound >= 3, Errc::Precondition, "C must be at least 3");
    if (!cfg.force) {
        RequirementsReport rep = validate_requirements(cm.ctx, cm.OK);
        if (!rep.all()) {
            std::string msg = "requirements not met";
            for (const auto& m : rep.messages) msg += "; " + m;
            fail(Errc::RequirementsViolated, msg);
        }
    }
    EndoringResult res{OFIdeal::unit(), A, {}};
    OFIdeal v = cm.v;
    for (const auto& [p, d] : cm.v_factors) {
        if (p.norm() >= cfg.C_bound) continue;
        auto c = isogeny_climb(oracle, res.top, p, d, cfg.walk_seed);
        res.top = c.top;
        if (c.valuation > 0) res.u = of_mul(OF, res.u, of_pow(OF, p.ideal, c.valuation));
        v = of_div(OF, v, of_pow(OF, p.ideal, d));
        res.steps.push_back({p, 0, c.valuation > 0, std::nullopt});
    }
    for (const auto& [p, d] : cm.v_factors) {
        if (p.norm() < cfg.C_bound) continue;
        for (int k = 1; k <= d; ++k) {
            Relation R = relation_for_prime_power(v, p, k, cache, cfg.relation);
            bool divides = !relation_holds_for(oracle, res.top, R);
            res.steps.push_back({p, k, divides, R});
            if (!divides) break;
            res.u = of_mul(OF, res.u, p.ideal);
        }
    }
    return res;
}

// ---------------------------------------------------------------- certificates

namespace {

struct Requirement {
    RealPrime prime;
    int k;
    int loop;
};

std::vector<Requirement> required_entries(const RealOrder& OF, const OFIdeal& u, const OFIdeal& v) {
    std::vector<Requirement> out;
    for (const auto& [p, vv] : of_factor(OF, v)) {
        int vu = of_valuation(OF, u, p);
        if (vv > vu) out.push_back({p, vu + 1, 1});
        if (vu > 0) out.push_back({p, vu, 2});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
    return out;
}

// O1 where the relation must hold and O2 where it must fail.
std::pair<OFIdeal, OFIdeal> entry_orders(const RealOrder& OF, const OFIdeal& u, const Requirement& r) {
    if (r.loop == 1) return {u, of_pow(OF, r.prime.ideal, r.k)};
    return {of_div(OF, u, r.prime.ideal), of_pow(OF, r.prime.ideal, r.k)};
}

OFIdeal strip(const RealOrder& OF, const OFIdeal& a, const std::vector<RealPrime>& drop) {
    std::vector<RealPrimePower> keep;
    for (const auto& pp : of_factor(OF, a))
        if (std::find(drop.begin(), drop.end(), pp.prime) == drop.end()) keep.push_back(pp);
    return of_from_factors(OF, keep);
}

// Primes of cert.v without relations; verify settles these by climbing.
std::vector<RealPrime> climbed_primes(const RealOrder& OF, const Certificate& cert) {
    std::vector<RealPrime> out;
    for (const auto& pp : of_factor(OF, cert.v)) {
        bool listed = false;
        for (const auto& e : cert.entries) listed = listed || e.prime == pp.prime;
        if (!listed) out.push_back(pp.prime);
    }
    return out;
}

std::string entry_name(const Requirement& r) {
    return r.prime.ideal.str() + "^" + std::to_string(r.k) + " (loop " + std::to_string(r.loop) + ")";
}

std::optional<std::string> relation_defect(const CMField& cm, const Relation& R) {
    for (std::size_t i = 0; i < R.terms.size(); ++i) {
        const auto& t = R.terms[i];
        if (!is_prime(t.prime.ell) || cm.undesirable(t.prime.ell))
            return "inadmissible prime " + t.prime.str();
        auto ps = primes_over(cm, t.prime.ell);
        if (std::find(ps.begin(), ps.end(), t.prime) == ps.end()) return t.prime.str() + " is not a prime of O_F[pi]";
        if (t.exponent < 1 || t.exponent > R.meta.exponent_bound) return "exponent out of range at " + t.prime.str();
        if (t.prime.norm() > R.meta.B) return "prime norm above B at " + t.prime.str();
        PrimeOverL c = prime_conjugate(*cm.ctx, t.prime);
        if (!(c == t.prime))
            for (const auto& o : R.terms)
                if (o.prime == c) return "conjugate pair " + t.prime.str() + " and " + c.str();
    }
    if (Int(static_cast<unsigned long>(R.terms.size())) > R.meta.prime_count_bound) return "too many distinct primes";
    return std::nullopt;
}

}  // namespace

Certificate certify(ClassGroupCache& cache, const OFIdeal& u, const OFIdeal& v, const DriverConfig& cfg) {
    const CMField& cm = cache.field();
    const RealOrder& OF = *cm.OF;
    check(cfg.C_bound >= 3, Errc::Precondition, "C must be at least 3");
    check(of_divides(u, v), Errc::NotDivisor, u.str() + " does not divide " + v.str());
    std::vector<RealPrime> small;
    for (const auto& pp : of_factor(OF, v))
        if (pp.prime.norm() < cfg.C_bound) small.push_back(pp.prime);
    Certificate c;
    c.u = u;
    c.v = v;
    c.q = cm.ctx->q;
    c.a1 = cm.ctx->a1;
    c.a2 = cm.ctx->a2;
    OFIdeal uL = strip(OF, u, small);
    for (const auto& r : required_entries(OF, uL, strip(OF, v, small))) {
        auto [f1, f2] = entry_orders(OF, uL, r);
        Relation R = find_relation(cm, *cache.get(f1), *cache.get(f2), cfg.relation);
        c.entries.push_back({r.prime, r.k, r.loop, std::move(R)});
    }
    return c;
}

namespace {

VerifyResult structural_check(const CMField& cm, const Certificate& cert) {
    const RealOrder& OF = *cm.OF;
    if (cert.q != cm.ctx->q || cert.a1 != cm.ctx->a1 || cert.a2 != cm.ctx->a2)
        return {false, "certificate is for a different Weil polynomial"};
    if (!of_divides(cert.u, cert.v)) return {false, "u does not divide v"};
    if (!of_divides(cert.v, cm.v)) return {false, "v does not divide the identifying ideal of O_F[pi]"};
    for (const auto& [p, e] : of_factor(OF, cert.v))
        if (of_valuation(OF, cm.v, p) != e) return {false, "v must carry the full power of " + p.ideal.str()};
    for (const auto& e : cert.entries)
        if (e.prime.norm() < 3) return {false, "relation for " + e.prime.ideal.str() + " of norm < 3"};
    auto climbed = climbed_primes(OF, cert);
    auto req = required_entries(OF, strip(OF, cert.u, climbed), strip(OF, cert.v, climbed));
    if (req.size() != cert.entries.size())
        return {false, "expected " + std::to_string(req.size()) + " relations, found " +
                           std::to_string(cert.entries.size())};
    for (std::size_t i = 0; i < req.size(); ++i) {
        const auto& e = cert.entries[i];
        if (!(e.prime == req[i].prime) || e.k != req[i].k || e.loop != req[i].loop)
            return {false, "entry " + std::to_string(i + 1) + " should be " + entry_name(req[i])};
        if (auto d = relation_defect(cm, e.relation)) return {false, entry_name(req[i]) + ": " + *d};
    }
    return {true, ""};
}

}  // namespace

VerifyResult verify(const CMField& cm, IsogenyOracle& oracle, const VarietyId& A, const Certificate& cert,
                    std::uint64_t walk_seed) {
    try {
        VerifyResult s = structural_check(cm, cert);
        if (!s) return s;
        const RealOrder& OF = *cm.OF;
        auto climbed = climbed_primes(OF, cert);
        VarietyId top = A;
        for (const auto& [p, d] : cm.v_factors) {
            if (of_valuation(OF, cert.v, p) == 0) {
                top = isogeny_climb(oracle, top, p, d, walk_seed).top;
            } else if (std::find(climbed.begin(), climbed.end(), p) != climbed.end()) {
                auto c = isogeny_climb(oracle, top, p, d, walk_seed);
                if (c.valuation != of_valuation(OF, cert.u, p))
                    return {false, "climbing finds valuation " + std::to_string(c.valuation) + " at " +
                                       p.ideal.str() + ", u claims " + std::to_string(of_valuation(OF, cert.u, p))};
                top = c.top;
            }
        }
        for (const auto& e : cert.entries) {
            bool holds = relation_holds_for(oracle, top, e.relation);
            Requirement r{e.prime, e.k, e.loop};
            if (e.loop == 1 && !holds) return {false, entry_name(r) + ": relation does not fix A"};
            if (e.loop == 2 && holds) return {false, entry_name(r) + ": relation fixes A"};
        }
        return {true, "ok"};
    } catch (const std::exception& ex) {
        return {false, ex.what()};
    }
}

VerifyResult audit_certificate(ClassGroupCache& cache, const Certificate& cert) {
    try {
        const CMField& cm = cache.field();
        VerifyResult s = structural_check(cm, cert);
        if (!s) return s;
        for (const auto& e : cert.entries) {
            Requirement r{e.prime, e.k, e.loop};
            auto [f1, f2] = entry_orders(*cm.OF, strip(*cm.OF, cert.u, climbed_primes(*cm.OF, cert)), r);
            if (!relation_holds_in_order(*cache.get(f1), e.relation))
                return {false, entry_name(r) + ": relation fails in O(" + f1.str() + ")"};
            if (relation_holds_in_order(*cache.get(f2), e.relation))
                return {false, entry_name(r) + ": relation holds in O(" + f2.str() + ")"};
        }
        return {true, "ok"};
    } catch (const std::exception& ex) {
        return {false, ex.what()};
    }
}

}  // namespace cmendo
