#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>

#include "crysp/error.hpp"
#include "crysp/rational.hpp"

namespace crysp {

inline bool is_prime_small(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/* Modulus p^n, shared between all scalars of one ring. */
struct Modulus {
    long long p;
    int n;
    mpz_class pn;  // p^n

    Modulus(long long p_, int n_) : p(p_), n(n_) {
        if (!is_prime_small(p)) throw err("NotPrime", "p = " + std::to_string(p) + " is not prime");
        if (n < 1) throw err("BadPrecision", "precision exponent must be >= 1");
        mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    }
    bool operator==(const Modulus& o) const { return p == o.p && n == o.n; }
};

using ModulusPtr = std::shared_ptr<const Modulus>;

inline ModulusPtr make_modulus(long long p, int n) { return std::make_shared<const Modulus>(p, n); }

/* Exact scalar in Z/p^n. Value kept reduced to [0, p^n). */
class Zmod {
  public:
    Zmod() = default;
    Zmod(ModulusPtr m, const mpz_class& v) : mod_(std::move(m)), v_(v) { reduce(); }
    Zmod(ModulusPtr m, long long v) : mod_(std::move(m)), v_(v) { reduce(); }

    static Zmod zero(ModulusPtr m) { return Zmod(std::move(m), 0); }
    static Zmod one(ModulusPtr m) { return Zmod(std::move(m), 1); }

    const ModulusPtr& modulus() const { return mod_; }
    const mpz_class& value() const { return v_; }
    long long p() const { return mod_->p; }
    int n() const { return mod_->n; }
    bool is_zero() const { return v_ == 0; }

    friend Zmod operator+(const Zmod& a, const Zmod& b) { a.check(b); return Zmod(a.mod_, a.v_ + b.v_); }
    friend Zmod operator-(const Zmod& a, const Zmod& b) { a.check(b); return Zmod(a.mod_, a.v_ - b.v_); }
    friend Zmod operator*(const Zmod& a, const Zmod& b) { a.check(b); return Zmod(a.mod_, a.v_ * b.v_); }
    Zmod operator-() const { return Zmod(mod_, -v_); }
    Zmod& operator+=(const Zmod& b) { *this = *this + b; return *this; }
    Zmod& operator-=(const Zmod& b) { *this = *this - b; return *this; }
    Zmod& operator*=(const Zmod& b) { *this = *this * b; return *this; }
    friend bool operator==(const Zmod& a, const Zmod& b) { return a.v_ == b.v_ && *a.mod_ == *b.mod_; }
    friend bool operator!=(const Zmod& a, const Zmod& b) { return !(a == b); }

    Zmod scaled(const mpz_class& c) const { return Zmod(mod_, v_ * c); }

    bool is_unit() const { return v_ != 0 && mpz_divisible_ui_p(v_.get_mpz_t(), static_cast<unsigned long>(mod_->p)) == 0; }

    Zmod inverse() const {
        if (!is_unit()) throw err("NotAUnit", "inverse of non-unit in Z/p^n");
        mpz_class r;
        if (!mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), mod_->pn.get_mpz_t()))
            throw err("NotAUnit", "inverse failed");
        return Zmod(mod_, r);
    }

    Zmod pow(unsigned long e) const {
        mpz_class r;
        mpz_powm_ui(r.get_mpz_t(), v_.get_mpz_t(), e, mod_->pn.get_mpz_t());
        return Zmod(mod_, r);
    }

    /* p-adic valuation, capped at n for the zero residue. */
    Valuation valuation() const {
        if (v_ == 0) return Valuation::at_least(Rational(mod_->n));
        mpz_class t = v_;
        long long v = 0;
        while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(mod_->p))) {
            mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(mod_->p));
            ++v;
        }
        return Valuation::exact(Rational(v));
    }

    std::string str() const { return v_.get_str(); }

  private:
    ModulusPtr mod_;
    mpz_class v_;

    void reduce() {
        if (!mod_) throw err("NoModulus", "Zmod without modulus");
        mpz_mod(v_.get_mpz_t(), v_.get_mpz_t(), mod_->pn.get_mpz_t());
    }
    void check(const Zmod& b) const {
        if (!(*mod_ == *b.mod_)) throw err("MixedRings", "Zmod arguments over different moduli");
    }
};

/* Exact quotient c = a / b over Z (aborts on non-divisibility: such a failure
 * indicates a broken integrality claim upstream, never a user input error). */
inline mpz_class divexact(const mpz_class& a, const mpz_class& b) {
    if (b == 0 || !mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
        throw err("DivisibilityViolated", "exact integer division failed");
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline mpz_class factorial(unsigned long k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

inline mpz_class binomial(unsigned long nn, unsigned long kk) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), nn, kk);
    return b;
}

/* Value of p^a / u with u the unit part; computes c = p^a * unit^{-1} mod p^n
 * for a p-adic number given as numerator/denominator pair of integers whose
 * quotient is a p-adic integer. Used for coefficients like p^i / i!. */
inline Zmod padic_fraction(const ModulusPtr& m, mpz_class num, mpz_class den) {
    long long p = m->p;
    long long vnum = 0, vden = 0;
    if (num == 0) return Zmod::zero(m);
    while (mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(p));
        ++vnum;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p));
        ++vden;
    }
    if (vnum < vden) throw err("NotPAdicIntegral", "p-adic fraction has negative valuation");
    Zmod u = Zmod(m, num) * Zmod(m, den).inverse();
    for (long long i = 0; i < vnum - vden; ++i) u = u * Zmod(m, p);
    return u;
}

}  // namespace crysp
