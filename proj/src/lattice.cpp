#include "cmendo/lattice.hpp"

#include "cmendo/errors.hpp"

namespace cmendo {

Lattice Lattice::from_int_rows(const IntMatrix& gens, const Int& den) {
    assert(den > 0);
    Lattice L;
    L.n_ = gens.cols();
    auto res = hnf_rows(gens);
    Int g = den;
    for (std::size_t i = 0; i < res.H.rows(); ++i)
        for (std::size_t j = 0; j < res.H.cols(); ++j) {
            if (g == 1) break;
            if (res.H(i, j) != 0) g = gcd(g, res.H(i, j));
        }
    if (g != 1) {
        for (std::size_t i = 0; i < res.H.rows(); ++i)
            for (std::size_t j = 0; j < res.H.cols(); ++j)
                mpz_divexact(res.H(i, j).get_mpz_t(), res.H(i, j).get_mpz_t(), g.get_mpz_t());
    }
    L.den_ = den / g;
    L.H_ = std::move(res.H);
    return L;
}

Lattice Lattice::from_rows(const RatMatrix& gens) {
    Int d = common_denominator(gens);
    IntMatrix A(gens.rows(), gens.cols());
    for (std::size_t i = 0; i < gens.rows(); ++i)
        for (std::size_t j = 0; j < gens.cols(); ++j) {
            Rat x = gens(i, j) * d;
            A(i, j) = x.get_num();
        }
    return from_int_rows(A, d);
}

Lattice Lattice::standard(std::size_t n) { return from_int_rows(IntMatrix::identity(n), Int(1)); }

RatMatrix Lattice::basis() const {
    RatMatrix B(H_.rows(), n_);
    for (std::size_t i = 0; i < H_.rows(); ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            B(i, j) = Rat(H_(i, j), den_);
            B(i, j).canonicalize();
        }
    return B;
}

RatVec Lattice::basis_row(std::size_t i) const {
    RatVec r(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        r[j] = Rat(H_(i, j), den_);
        r[j].canonicalize();
    }
    return r;
}

std::optional<IntVec> Lattice::coords(const RatVec& v) const {
    assert(v.size() == n_);
    IntVec w(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        Rat x = v[j] * den_;
        if (x.get_den() != 1) return std::nullopt;
        w[j] = x.get_num();
    }
    IntVec c(H_.rows());
    std::size_t col = 0;
    for (std::size_t i = 0; i < H_.rows(); ++i) {
        while (H_(i, col) == 0) ++col;
        if (!mpz_divisible_p(w[col].get_mpz_t(), H_(i, col).get_mpz_t())) return std::nullopt;
        c[i] = w[col] / H_(i, col);
        if (c[i] != 0)
            for (std::size_t k = col; k < n_; ++k) w[k] -= c[i] * H_(i, k);
    }
    for (const auto& x : w)
        if (x != 0) return std::nullopt;
    return c;
}

bool Lattice::contains(const Lattice& o) const {
    for (std::size_t i = 0; i < o.rank(); ++i)
        if (!contains(o.basis_row(i))) return false;
    return true;
}

Rat Lattice::covolume() const {
    check(full_rank(), Errc::Internal, "covolume of a degenerate lattice");
    Int d = 1;
    for (std::size_t i = 0; i < n_; ++i) d *= H_(i, i);
    Rat r(d, pow(den_, static_cast<unsigned long>(n_)));
    r.canonicalize();
    return r;
}

Int Lattice::index_of(const Lattice& sub) const {
    Rat r = sub.covolume() / covolume();
    check(r.get_den() == 1, Errc::Internal, "index of a non-sublattice");
    return r.get_num();
}

Lattice Lattice::operator+(const Lattice& o) const {
    assert(n_ == o.n_);
    Int d = lcm(den_, o.den_);
    Int f1 = d / den_, f2 = d / o.den_;
    IntMatrix A(H_.rows() + o.H_.rows(), n_);
    for (std::size_t i = 0; i < H_.rows(); ++i)
        for (std::size_t j = 0; j < n_; ++j) A(i, j) = H_(i, j) * f1;
    for (std::size_t i = 0; i < o.H_.rows(); ++i)
        for (std::size_t j = 0; j < n_; ++j) A(H_.rows() + i, j) = o.H_(i, j) * f2;
    return from_int_rows(A, d);
}

Lattice Lattice::dual() const {
    check(full_rank(), Errc::Internal, "dual of a degenerate lattice");
    return from_rows(inverse(basis()).transpose());
}

Lattice Lattice::intersect(const Lattice& o) const { return (dual() + o.dual()).dual(); }

Lattice Lattice::scaled(const Rat& a) const {
    RatMatrix B = basis();
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) B(i, j) *= a;
    return from_rows(B);
}

}  // namespace cmendo
