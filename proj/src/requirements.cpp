#include "cmendo/requirements.hpp"

#include <set>
#include <tuple>

#include "cmendo/errors.hpp"
#include "cmendo/ideals.hpp"

namespace cmendo {

namespace {

struct Form {
    Int a, b, c;
    bool operator<(const Form& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
};

bool is_reduced(const Form& f, const Int& D, const Int& s) {
    // 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b
    if (f.b <= 0 || f.b > s) return false;
    Int a2 = 2 * abs(f.a);
    Int lo = a2 + f.b;
    if (lo * lo <= D) return false;
    Int hi = a2 - f.b;
    return hi <= 0 || hi * hi < D;
}

Form rho(const Form& f, const Int& D, const Int& s) {
    Int m = 2 * abs(f.c);
    // largest b' <= s with b' = -b mod 2|c|
    Int b = s - mod(s + f.b, m);
    return {f.c, b, (b * b - D) / (4 * f.c)};
}

}  // namespace

QuadraticClassInfo real_quadratic_class_info(const Int& D) {
    check(D > 0 && !is_square(D) && (mod(D, 4) == 0 || mod(D, 4) == 1), Errc::Precondition,
          "not a real quadratic discriminant: " + to_string(D));
    Int s = isqrt(D);
    std::set<Form> reduced;
    for (Int b = mod(D, 2) == 0 ? Int(2) : Int(1); b <= s; b += 2) {
        Int ac = (b * b - D) / 4;  // negative
        Int n = -ac;
        for (Int a = 1; a * a <= n; ++a) {
            if (n % a != 0) continue;
            for (const Int& x : {a, Int(n / a)})
                for (int sg : {1, -1}) {
                    Form f{sg * x, b, ac / (sg * x)};
                    if (gcd(gcd(f.a, f.b), f.c) != 1) continue;
                    if (is_reduced(f, D, s)) reduced.insert(f);
                }
        }
    }
    QuadraticClassInfo info{D, 0, 0, 1};
    std::set<Form> seen;
    for (const Form& f0 : reduced) {
        if (seen.count(f0)) continue;
        ++info.narrow_class_number;
        bool principal = false, minus_one = false;
        Form f = f0;
        do {
            seen.insert(f);
            principal |= f.a == 1;
            minus_one |= f.a == -1;
            f = rho(f, D, s);
            check(reduced.count(f) == 1, Errc::Internal, "reduction cycle left the reduced forms");
        } while (!(f.a == f0.a && f.b == f0.b && f.c == f0.c));
        if (principal) info.unit_norm = minus_one ? -1 : 1;
    }
    info.class_number = info.unit_norm == -1 ? info.narrow_class_number : info.narrow_class_number / 2;
    return info;
}

bool contains_fifth_roots_of_unity(const Order& OK) {
    const WeilContext& ctx = OK.field();
    RatMatrix G = t2_gram(ctx, OK.basis());
    for (const IntVec& x : short_vectors(G, Rat(4))) {
        FieldElem z = OK.elem_from_coords(x);
        FieldElem sum;
        FieldElem p = FieldElem::from_int(1);
        for (int k = 0; k < 5; ++k) {
            sum = ctx.add(sum, p);
            p = ctx.mul(p, z);
        }
        // +-z are both checked since short_vectors returns one of each pair
        FieldElem nz = ctx.neg(z), sum2, p2 = FieldElem::from_int(1);
        for (int k = 0; k < 5; ++k) {
            sum2 = ctx.add(sum2, p2);
            p2 = ctx.mul(p2, nz);
        }
        if (sum.is_zero() || sum2.is_zero()) return true;
    }
    return false;
}

RequirementsReport validate_requirements(const Ctx& ctx, const OrderPtr& OK_in) {
    RequirementsReport r;
    try {
        r.ordinary = mod(ctx->a2, ctx->p) != 0;
        if (!r.ordinary) r.messages.push_back("p divides a2: not ordinary");
        r.irreducible = weil_quartic_irreducible(ctx->q, ctx->a1, ctx->a2);
        if (!r.irreducible) r.messages.push_back("Weil polynomial is reducible");

        OrderPtr OK = OK_in ? OK_in : maximal_order(ctx);
        r.units_equal = !contains_fifth_roots_of_unity(*OK);
        if (!r.units_equal) r.messages.push_back("K is the fifth cyclotomic field: unit groups differ");

        RealOrderPtr OF = real_maximal_order(ctx);
        QuadraticClassInfo info = real_quadratic_class_info(OF->dF);
        r.narrow_class_one = info.narrow_class_number == 1;
        r.messages.push_back("real subfield: disc " + to_string(info.disc) + ", class number " +
                             to_string(info.class_number) + ", narrow class number " +
                             to_string(info.narrow_class_number) + ", fundamental unit norm " +
                             std::to_string(info.unit_norm));
        r.odd_conductor_gap = mod(OF->conductor, 2) == 1;
        r.messages.push_back("[O_F : Z[pi + pibar]] = " + to_string(OF->conductor) +
                             (r.odd_conductor_gap ? " (odd)" : " (even)"));
    } catch (const std::exception& e) {
        r.messages.push_back(std::string("check aborted: ") + e.what());
    }
    return r;
}

}  // namespace cmendo
