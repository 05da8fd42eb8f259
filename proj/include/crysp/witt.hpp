#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <vector>

#include "crysp/finite_algebra.hpp"
#include "crysp/zmod.hpp"

namespace crysp {

/* Integer polynomial in 2*len variables x_0..x_{len-1}, y_0..y_{len-1}
 * (y-slots unused for unary laws). */
struct UPoly {
    std::map<std::vector<int>, mpz_class> terms;

    static UPoly zero() { return UPoly{}; }
    static UPoly var(int idx, int nvars);
    static UPoly constant(const mpz_class& c, int nvars);

    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    UPoly pow(unsigned long e) const;
    UPoly divexact_int(const mpz_class& d) const;
    bool is_zero() const { return terms.empty(); }
};

/* Universal p-typical Witt addition/multiplication/negation laws of a given
 * length, derived once from the ghost components by exact integer recursion
 * and cached per (p, len). */
struct WittLaws {
    long long p;
    int len;
    std::vector<UPoly> ghost;  // ghost_i in x-slots
    std::vector<UPoly> sum;
    std::vector<UPoly> prod;
    std::vector<UPoly> neg;

    /* Witt coordinates of an integer m (solves ghost(c) = (m, m, ...)). */
    std::vector<mpz_class> int_coords(const mpz_class& m) const;
};

const WittLaws& witt_laws(long long p, int len);

/* Evaluate a universal polynomial in a commutative ring: vals supplies the
 * 2*len slot values, make_const embeds integers. */
template <class R, class MakeConst>
R eval_upoly(const UPoly& f, const std::vector<R>& vals, MakeConst make_const) {
    R acc = make_const(mpz_class(0));
    for (const auto& [e, c] : f.terms) {
        R t = make_const(c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t = t * vals[i];
        acc = acc + t;
    }
    return acc;
}

/* Length-n Witt vector over a finite F_p-algebra. */
struct WittRing {
    FiniteAlgebraPtr R;  // must have n() == 1
    int len;

    bool operator==(const WittRing& o) const { return len == o.len && R->same_presentation(*o.R); }
};
using WittRingPtr = std::shared_ptr<const WittRing>;

WittRingPtr make_witt_ring(FiniteAlgebraPtr R, int len);

class WittVec {
  public:
    WittVec() = default;
    WittVec(WittRingPtr W, std::vector<AlgebraElement> comps);

    static WittVec zero(WittRingPtr W);
    static WittVec one(WittRingPtr W);
    static WittVec teichmuller(WittRingPtr W, const AlgebraElement& x);
    static WittVec from_int(WittRingPtr W, const mpz_class& m);

    const WittRingPtr& ring() const { return W_; }
    const std::vector<AlgebraElement>& comps() const { return c_; }
    bool is_zero() const;
    bool is_teichmuller() const;

    friend WittVec operator+(const WittVec& a, const WittVec& b);
    friend WittVec operator-(const WittVec& a, const WittVec& b);
    friend WittVec operator*(const WittVec& a, const WittVec& b);
    WittVec operator-() const;
    friend bool operator==(const WittVec& a, const WittVec& b);
    friend bool operator!=(const WittVec& a, const WittVec& b) { return !(a == b); }

    WittVec pow(long long e) const;

    /* Verschiebung (length-preserving shift; top component drops) */
    WittVec verschiebung() const;
    /* Witt Frobenius W_len -> W_{len-1}: componentwise p-th power in char p */
    WittVec frobenius_drop() const;
    /* W(Frob): length-preserving componentwise p-th power (the crystalline
     * Frobenius of the truncated A_inf model) */
    WittVec frobenius_endo() const;

    std::string str() const;

  private:
    WittRingPtr W_;
    std::vector<AlgebraElement> c_;
};

/* Exact division u / v by V-adic peeling; throws DivisionFailed if u is not a
 * multiple of v in the truncated model. */
WittVec witt_div_exact(const WittVec& u, const WittVec& v);

/* Division in the coefficient algebra: solve c * b = a over F_p. */
AlgebraElement algebra_div(const AlgebraElement& a, const AlgebraElement& b);

}  // namespace crysp
