#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crysp/zmod.hpp"

namespace crysp {

/* Graded-lex order on exponent numerator vectors. */
struct GradedLex {
    bool operator()(const std::vector<long long>& a, const std::vector<long long>& b) const {
        long long da = 0, db = 0;
        for (long long x : a) da += x;
        for (long long x : b) db += x;
        if (da != db) return da < db;
        return a < b;
    }
};

/* Ring handle for multivariate polynomials over Z/p^n. Exponents are stored
 * as integer numerators over the fixed denominator p^root_depth (root_depth 0
 * for ordinary polynomials); the monoid of allowed exponents is (1/p^k) N.
 * degree_cap, when set, truncates by total degree (in whole units). */
struct PolyRing {
    ModulusPtr mod;
    std::vector<std::string> vars;
    int root_depth = 0;     // exponent denominator = p^root_depth
    long long denom = 1;    // p^root_depth
    std::optional<long long> degree_cap;  // total degree cap (whole units)
    int twist_level = 0;    // Frobenius-twist bookkeeping

    bool compatible(const PolyRing& o) const {
        return *mod == *o.mod && vars == o.vars && denom == o.denom && twist_level == o.twist_level;
    }
};

using PolyRingPtr = std::shared_ptr<const PolyRing>;

PolyRingPtr make_poly_ring(long long p, int n, std::vector<std::string> vars, int root_depth = 0,
                           std::optional<long long> degree_cap = std::nullopt);

class Poly {
  public:
    Poly() = default;
    explicit Poly(PolyRingPtr ring) : ring_(std::move(ring)) {}

    static Poly zero(PolyRingPtr ring) { return Poly(std::move(ring)); }
    static Poly constant(PolyRingPtr ring, const Zmod& c);
    static Poly constant(PolyRingPtr ring, long long c);
    static Poly variable(PolyRingPtr ring, const std::string& name, long long num = -1, long long den = 1);

    const PolyRingPtr& ring() const { return ring_; }
    const std::map<std::vector<long long>, Zmod, GradedLex>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const std::vector<long long>& exps, const Zmod& c);

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;
    Poly& operator+=(const Poly& b) { *this = *this + b; return *this; }
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly scaled(const Zmod& c) const;
    Poly pow(long long e) const;

    long long total_degree_numerator() const;  // max over terms; -1 for zero

    std::string str() const;

  private:
    PolyRingPtr ring_;
    std::map<std::vector<long long>, Zmod, GradedLex> terms_;

    void truncate();
};

/* Ring homomorphism given by variable assignments; assignments must cover
 * every variable occurring in f. A variable carrying fractional exponents may
 * only be sent to a scaled power of a single variable whose exponents stay in
 * the target monoid. */
Poly substitute(const Poly& f, const std::map<std::string, Poly>& assignments, PolyRingPtr target);

/* Frobenius twist of a mod-p polynomial ring / polynomial. */
enum class TwistStyle { Variable, Coefficient };
PolyRingPtr twist_ring(const PolyRingPtr& ring);
Poly frobenius_twist(const Poly& f, TwistStyle style);

/* Relative Frobenius: polynomial on the twist -> polynomial on the source,
 * sending each twisted variable to its p-th power (coefficients through the
 * p-th power map, which is the identity on F_p). Target cap applies. */
Poly relative_frobenius(const Poly& f, PolyRingPtr target);

}  // namespace crysp
