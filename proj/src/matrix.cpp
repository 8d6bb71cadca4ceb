#include "cmendo/matrix.hpp"

#include "cmendo/errors.hpp"

namespace cmendo {

RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

RatVec vec_mul(const RatVec& v, const RatMatrix& m) {
    assert(v.size() == m.rows());
    RatVec out(m.cols(), Rat(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

IntVec vec_mul(const IntVec& v, const IntMatrix& m) {
    assert(v.size() == m.rows());
    IntVec out(m.cols(), Int(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

// ---------------------------------------------------------------- HNF

HnfBuilder::HnfBuilder(std::size_t ncols, bool use_modulus)
    : n_(ncols), use_modulus_(use_modulus), rows_(ncols) {}

void HnfBuilder::reduce_mod(IntVec& v) const {
    if (modulus_ == 0) return;
    for (auto& x : v) x = mod(x, modulus_);
}

bool HnfBuilder::insert(IntVec v) {
    assert(v.size() == n_);
    reduce_mod(v);
    bool changed = false;
    Int s, t, a, b, g;
    for (std::size_t j = 0; j < n_; ++j) {
        if (v[j] == 0) continue;
        IntVec& r = rows_[j];
        if (r.empty()) {
            if (v[j] < 0)
                for (auto& x : v) x = -x;
            r = std::move(v);
            ++rank_;
            changed = true;
            break;
        }
        if (mpz_divisible_p(v[j].get_mpz_t(), r[j].get_mpz_t())) {
            Int qq = v[j] / r[j];
            for (std::size_t k = j; k < n_; ++k) v[k] -= qq * r[k];
        } else {
            g = xgcd(r[j], v[j], s, t);
            a = r[j] / g;
            b = v[j] / g;
            IntVec nr(n_);
            for (std::size_t k = j; k < n_; ++k) {
                nr[k] = s * r[k] + t * v[k];
                v[k] = a * v[k] - b * r[k];
            }
            r = std::move(nr);
            changed = true;
        }
        reduce_mod(v);
    }
    if (changed) {
        normalize();
        if (use_modulus_ && full_rank()) modulus_ = determinant();
    }
    return changed;
}

void HnfBuilder::normalize() {
    Int qq;
    for (std::size_t j = 0; j < n_; ++j) {
        const IntVec& pj = rows_[j];
        if (pj.empty()) continue;
        if (modulus_ != 0)
            for (std::size_t k = j + 1; k < n_; ++k) rows_[j][k] = mod(rows_[j][k], modulus_);
        for (std::size_t i = 0; i < j; ++i) {
            IntVec& ri = rows_[i];
            if (ri.empty() || ri[j] == 0) continue;
            qq = fdiv(ri[j], pj[j]);
            if (qq == 0) continue;
            for (std::size_t k = j; k < n_; ++k) ri[k] -= qq * pj[k];
        }
    }
}

Int HnfBuilder::determinant() const {
    Int d = 1;
    for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[j].empty()) return 0;
        d *= rows_[j][j];
    }
    return d;
}

IntMatrix HnfBuilder::matrix() const {
    IntMatrix H(rank_, n_);
    std::size_t i = 0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[j].empty()) continue;
        for (std::size_t k = 0; k < n_; ++k) H(i, k) = k < j ? Int(0) : rows_[j][k];
        ++i;
    }
    return H;
}

std::vector<std::size_t> HnfBuilder::pivots() const {
    std::vector<std::size_t> p;
    for (std::size_t j = 0; j < n_; ++j)
        if (!rows_[j].empty()) p.push_back(j);
    return p;
}

HnfResult hnf_rows(const IntMatrix& M) {
    HnfBuilder b(M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i) b.insert(M.row(i));
    return {b.matrix(), b.rank()};
}

Int common_denominator(const RatMatrix& M) {
    Int d = 1;
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) d = lcm(d, M(i, j).get_den());
    return d;
}

HnfResult hnf_rows(const RatMatrix& M) {
    Int d = common_denominator(M);
    IntMatrix A(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) {
            Rat x = M(i, j) * d;
            A(i, j) = x.get_num();
        }
    return hnf_rows(A);
}

IntMatrix left_kernel(const IntMatrix& A) {
    std::size_t m = A.rows(), n = A.cols();
    HnfBuilder b(n + m);
    for (std::size_t i = 0; i < m; ++i) {
        IntVec v(n + m, Int(0));
        for (std::size_t j = 0; j < n; ++j) v[j] = A(i, j);
        v[n + i] = 1;
        b.insert(v);
    }
    IntMatrix H = b.matrix();
    auto piv = b.pivots();
    IntMatrix K;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        if (piv[i] < n) continue;
        IntVec r(m);
        for (std::size_t k = 0; k < m; ++k) r[k] = H(i, n + k);
        K.append_row(r);
    }
    if (K.rows() == 0) return IntMatrix(0, m);
    return K;
}

// ---------------------------------------------------------------- SNF

SmithResult smith(const IntMatrix& M0) {
    IntMatrix M = M0;
    std::size_t m = M.rows(), n = M.cols();
    IntMatrix U = IntMatrix::identity(m), V = IntMatrix::identity(n);
    std::size_t r = std::min(m, n);
    Int q;
    for (std::size_t t = 0; t < r; ++t) {
        while (true) {
            // pivot on the smallest nonzero entry of the trailing block
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (M(i, j) != 0 && (pi == m || abs(M(i, j)) < abs(M(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m) break;
            M.swap_rows(t, pi);
            U.swap_rows(t, pi);
            M.swap_cols(t, pj);
            V.swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (M(i, t) == 0) continue;
                q = fdiv(M(i, t), M(t, t));
                for (std::size_t k = t; k < n; ++k) M(i, k) -= q * M(t, k);
                for (std::size_t k = 0; k < m; ++k) U(i, k) -= q * U(t, k);
                if (M(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (M(t, j) == 0) continue;
                q = fdiv(M(t, j), M(t, t));
                for (std::size_t k = t; k < m; ++k) M(k, j) -= q * M(k, t);
                for (std::size_t k = 0; k < n; ++k) V(k, j) -= q * V(k, t);
                if (M(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block by the pivot
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(M(i, j).get_mpz_t(), M(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            for (std::size_t k = t; k < n; ++k) M(t, k) += M(bad, k);
            for (std::size_t k = 0; k < m; ++k) U(t, k) += U(bad, k);
        }
        if (M(t, t) < 0) {
            for (std::size_t k = t; k < n; ++k) M(t, k) = -M(t, k);
            for (std::size_t k = 0; k < m; ++k) U(t, k) = -U(t, k);
        }
    }
    SmithResult res;
    for (std::size_t t = 0; t < r; ++t) res.diag.push_back(M(t, t));
    res.U = std::move(U);
    res.V = std::move(V);
    return res;
}

// ---------------------------------------------------------------- rational linear algebra

Rat det(const RatMatrix& M0) {
    RatMatrix M = M0;
    std::size_t n = M.rows();
    assert(n == M.cols());
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            M.swap_rows(p, c);
            d = -d;
        }
        d *= M(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (M(i, c) == 0) continue;
            Rat f = M(i, c) / M(c, c);
            for (std::size_t k = c; k < n; ++k) M(i, k) -= f * M(c, k);
        }
    }
    return d;
}

Int det(const IntMatrix& M0) {
    // Bareiss fraction-free elimination.
    IntMatrix M = M0;
    std::size_t n = M.rows();
    assert(n == M.cols());
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && M(p, k) == 0) ++p;
            if (p == n) return 0;
            M.swap_rows(p, k);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int x = M(i, j) * M(k, k) - M(i, k) * M(k, j);
                mpz_divexact(M(i, j).get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
            }
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

RatMatrix inverse(const RatMatrix& M0) {
    std::size_t n = M0.rows();
    assert(n == M0.cols());
    RatMatrix M = M0, I = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M(p, c) == 0) ++p;
        if (p == n) fail(Errc::DivisionByZero, "singular matrix");
        M.swap_rows(p, c);
        I.swap_rows(p, c);
        Rat inv = 1 / M(c, c);
        for (std::size_t k = 0; k < n; ++k) {
            M(c, k) *= inv;
            I(c, k) *= inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || M(i, c) == 0) continue;
            Rat f = M(i, c);
            for (std::size_t k = 0; k < n; ++k) {
                M(i, k) -= f * M(c, k);
                I(i, k) -= f * I(c, k);
            }
        }
    }
    return I;
}

std::size_t rank(const RatMatrix& M0) {
    RatMatrix M = M0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
        std::size_t p = r;
        while (p < M.rows() && M(p, c) == 0) ++p;
        if (p == M.rows()) continue;
        M.swap_rows(p, r);
        for (std::size_t i = r + 1; i < M.rows(); ++i) {
            if (M(i, c) == 0) continue;
            Rat f = M(i, c) / M(r, c);
            for (std::size_t k = c; k < M.cols(); ++k) M(i, k) -= f * M(r, k);
        }
        ++r;
    }
    return r;
}

RatMatrix integral_solutions(const RatMatrix& M) {
    std::size_t k = M.cols();
    Int d = common_denominator(M);
    IntMatrix A(M.rows(), k);
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Rat x = M(i, j) * d;
            A(i, j) = x.get_num();
        }
    auto [H, r] = hnf_rows(A);
    check(r == k, Errc::Internal, "integral_solutions: matrix does not have full column rank");
    RatMatrix X = inverse(to_rat(H));
    RatMatrix out(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out(j, i) = X(i, j) * d;
    return out;
}

}  // namespace cmendo
