#include "cmendo/modp.hpp"

#include <algorithm>

#include "cmendo/errors.hpp"

namespace cmendo {

bool PolyP::operator<(const PolyP& o) const {
    if (c.size() != o.c.size()) return c.size() < o.c.size();
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
}

PolyP Fp::make(std::vector<Int> c) const {
    for (auto& x : c) x = mod(x, p_);
    while (!c.empty() && c.back() == 0) c.pop_back();
    return PolyP{std::move(c)};
}

PolyP Fp::add(const PolyP& a, const PolyP& b) const {
    std::vector<Int> c(std::max(a.c.size(), b.c.size()), Int(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
    return make(std::move(c));
}

PolyP Fp::sub(const PolyP& a, const PolyP& b) const {
    std::vector<Int> c(std::max(a.c.size(), b.c.size()), Int(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) c[i] -= b.c[i];
    return make(std::move(c));
}

PolyP Fp::mul(const PolyP& a, const PolyP& b) const {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> c(a.c.size() + b.c.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            mpz_addmul(c[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
    return make(std::move(c));
}

PolyP Fp::scale(const PolyP& a, const Int& s) const {
    std::vector<Int> c = a.c;
    for (auto& x : c) x *= s;
    return make(std::move(c));
}

void Fp::divmod(const PolyP& a, const PolyP& b, PolyP& q, PolyP& r) const {
    if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    std::vector<Int> rc = a.c;
    int db = b.deg();
    Int li = inv_mod(b.lead(), p_);
    std::vector<Int> qc(rc.size() > b.c.size() ? rc.size() - b.c.size() + 1 : 1, Int(0));
    for (int d = static_cast<int>(rc.size()) - 1; d >= db; --d) {
        Int coef = mod(rc[static_cast<std::size_t>(d)] * li, p_);
        if (coef == 0) continue;
        qc[static_cast<std::size_t>(d - db)] = coef;
        for (int k = 0; k <= db; ++k) {
            auto idx = static_cast<std::size_t>(d - db + k);
            rc[idx] = mod(rc[idx] - coef * b.c[static_cast<std::size_t>(k)], p_);
        }
    }
    q = make(std::move(qc));
    r = make(std::move(rc));
}

PolyP Fp::rem(const PolyP& a, const PolyP& b) const {
    PolyP q, r;
    divmod(a, b, q, r);
    return r;
}

PolyP Fp::monic(const PolyP& a) const {
    if (a.is_zero()) return a;
    return scale(a, inv_mod(a.lead(), p_));
}

PolyP Fp::gcd(PolyP a, PolyP b) const {
    while (!b.is_zero()) {
        PolyP r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

PolyP Fp::powmod(const PolyP& a, const Int& e, const PolyP& m) const {
    PolyP result = make({Int(1)});
    PolyP base = rem(a, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = rem(mul(result, result), m);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, base), m);
    }
    return result;
}

PolyP Fp::derivative(const PolyP& a) const {
    if (a.c.size() <= 1) return {};
    std::vector<Int> c(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i) c[i - 1] = a.c[i] * static_cast<unsigned long>(i);
    return make(std::move(c));
}

Int Fp::eval(const PolyP& a, const Int& x) const {
    Int v = 0;
    for (std::size_t i = a.c.size(); i-- > 0;) v = mod(v * x + a.c[i], p_);
    return v;
}

void Fp::irreducible_divisors(const PolyP& f0, std::uint64_t seed, std::vector<PolyP>& out) const {
    PolyP f = monic(f0);
    if (f.deg() <= 0) return;
    PolyP d = derivative(f);
    if (d.is_zero()) {
        // f = g(x^p) = g(x)^p since coefficients lie in F_p
        unsigned long pp = p_.get_ui();
        std::vector<Int> gc;
        for (std::size_t i = 0; i < f.c.size(); i += pp) gc.push_back(f.c[i]);
        irreducible_divisors(make(gc), seed, out);
        return;
    }
    PolyP a = gcd(f, d), s, r;
    divmod(f, a, s, r);
    // s is squarefree and carries every factor whose multiplicity is prime to p
    for (auto& h : factor_squarefree(monic(s), seed)) out.push_back(h);
    irreducible_divisors(a, seed, out);
}

std::vector<std::pair<PolyP, int>> Fp::distinct_degree(const PolyP& f0) const {
    std::vector<std::pair<PolyP, int>> out;
    PolyP f = monic(f0);
    PolyP x = make({Int(0), Int(1)});
    PolyP h = x;
    int d = 0;
    while (f.deg() >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, p_, f);
        PolyP g = gcd(f, sub(h, x));
        if (g.deg() > 0) {
            out.push_back({g, d});
            PolyP q, r;
            divmod(f, g, q, r);
            f = monic(q);
            h = rem(h, f);
        }
    }
    if (f.deg() > 0) out.push_back({f, f.deg()});
    return out;
}

void Fp::equal_degree(const PolyP& f, int d, std::mt19937_64& rng, std::vector<PolyP>& out) const {
    if (f.deg() == d) {
        out.push_back(monic(f));
        return;
    }
    while (true) {
        std::vector<Int> rc(static_cast<std::size_t>(f.deg()));
        for (auto& x : rc) x = random_below(rng, p_);
        PolyP a = make(rc);
        if (a.deg() <= 0) continue;
        PolyP g = gcd(f, a);
        if (g.deg() <= 0) {
            if (p_ == 2) {
                // trace map a + a^2 + ... + a^(2^(d-1))
                PolyP t = a, s = a;
                for (int k = 1; k < d; ++k) {
                    s = rem(mul(s, s), f);
                    t = add(t, s);
                }
                g = gcd(f, t);
            } else {
                Int e = (pow(p_, static_cast<unsigned long>(d)) - 1) / 2;
                PolyP b = powmod(a, e, f);
                g = gcd(f, sub(b, make({Int(1)})));
            }
        }
        if (g.deg() > 0 && g.deg() < f.deg()) {
            PolyP q, r;
            divmod(f, g, q, r);
            equal_degree(g, d, rng, out);
            equal_degree(monic(q), d, rng, out);
            return;
        }
    }
}

std::vector<PolyP> Fp::factor_squarefree(const PolyP& f, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<PolyP> out;
    for (auto& [g, d] : distinct_degree(f)) equal_degree(g, d, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PolyFactor> Fp::factor(const PolyP& f, std::uint64_t seed) const {
    std::vector<PolyP> irr;
    irreducible_divisors(f, seed, irr);
    std::sort(irr.begin(), irr.end());
    irr.erase(std::unique(irr.begin(), irr.end()), irr.end());
    std::vector<PolyFactor> out;
    PolyP rest = monic(f);
    for (auto& g : irr) {
        int e = 0;
        PolyP q, r;
        while (true) {
            divmod(rest, g, q, r);
            if (!r.is_zero()) break;
            rest = q;
            ++e;
        }
        out.push_back({g, e});
    }
    return out;
}

namespace {

// Reduced row echelon form mod p; returns pivot columns.
std::vector<std::size_t> rref(IntMatrix& A, const Int& p) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
        std::size_t k = r;
        while (k < A.rows() && mod(A(k, c), p) == 0) ++k;
        if (k == A.rows()) continue;
        A.swap_rows(k, r);
        Int inv = inv_mod(A(r, c), p);
        for (std::size_t j = 0; j < A.cols(); ++j) A(r, j) = mod(A(r, j) * inv, p);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            if (i == r) continue;
            Int f = mod(A(i, c), p);
            if (f == 0) continue;
            for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = mod(A(i, j) - f * A(r, j), p);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

}  // namespace

std::size_t Fp::rank(const IntMatrix& A0) const {
    IntMatrix A = A0;
    return rref(A, p_).size();
}

IntMatrix Fp::left_kernel(const IntMatrix& A) const {
    // x A = 0  <=>  A^T x^T = 0
    IntMatrix T = A.transpose();
    auto piv = rref(T, p_);
    std::size_t n = T.cols();
    std::vector<bool> is_piv(n, false);
    for (auto c : piv) is_piv[c] = true;
    IntMatrix K(0, n);
    for (std::size_t free = 0; free < n; ++free) {
        if (is_piv[free]) continue;
        IntVec v(n, Int(0));
        v[free] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = mod(-T(r, free), p_);
        K.append_row(v);
    }
    return K;
}

}  // namespace cmendo
