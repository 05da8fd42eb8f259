#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crysp/linalg.hpp"
#include "crysp/rational.hpp"
#include "crysp/zmod.hpp"

namespace crysp {

/* One monomial of a relation polynomial: exponents over all generators
 * (indices into FiniteAlgebra::gens), integer coefficient. */
struct RelTerm {
    std::vector<int> exps;
    mpz_class coeff;
};

/* Monic triangular relation for generator `var`: poly of degree `deg` in that
 * generator, lower-order terms may involve earlier generators only. */
struct Relation {
    int var = 0;
    int deg = 1;
    std::vector<RelTerm> lower;  // the relation is g_var^deg + sum(lower) = 0
};

class FiniteAlgebra;
using FiniteAlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

/* Element of a finite free Z/p^n-algebra, stored on the monomial basis. */
class AlgebraElement {
  public:
    AlgebraElement() = default;
    AlgebraElement(FiniteAlgebraPtr parent, std::vector<Zmod> coords);

    const FiniteAlgebraPtr& parent() const { return parent_; }
    const std::vector<Zmod>& coords() const { return coords_; }
    bool is_zero() const;

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
    AlgebraElement operator-() const;
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

    AlgebraElement scaled(const Zmod& c) const;
    AlgebraElement pow(const mpz_class& e) const;
    std::string str() const;

  private:
    FiniteAlgebraPtr parent_;
    std::vector<Zmod> coords_;
};

/* Finite free Z/p^n-algebra presented by monic triangular relations.
 * Basis: monomials prod g_i^{c_i}, c_i < deg_i, ordered degree-lex. */
class FiniteAlgebra : public std::enable_shared_from_this<FiniteAlgebra> {
  public:
    static FiniteAlgebraPtr make(long long p, int n, std::vector<std::string> gens,
                                 std::vector<Relation> relations,
                                 std::optional<long long> ramification = std::nullopt);

    /* Convenience: univariate integer-coefficient relations, one per
     * generator; coeffs[i] = {c_0,...,c_d} with c_d = 1. */
    static FiniteAlgebraPtr make_univariate(long long p, int n, std::vector<std::string> gens,
                                            std::vector<std::vector<mpz_class>> coeffs,
                                            std::optional<long long> ramification = std::nullopt);

    long long p() const { return mod_->p; }
    int n() const { return mod_->n; }
    const ModulusPtr& modulus() const { return mod_; }
    const std::vector<std::string>& gens() const { return gens_; }
    const std::vector<Relation>& relations() const { return relations_; }
    int rank() const { return rank_; }
    long long ramification_index() const { return e_; }
    const std::vector<std::vector<int>>& basis() const { return basis_; }

    AlgebraElement zero() const;
    AlgebraElement one() const;
    AlgebraElement from_int(const mpz_class& c) const;
    AlgebraElement generator(int i) const;
    AlgebraElement generator(const std::string& name) const;
    AlgebraElement from_coords(std::vector<Zmod> coords) const;

    /* Normal form of an arbitrary monomial in the generators. */
    std::vector<Zmod> monomial_normal_form(const std::vector<int>& exps) const;

    /* reduce: polynomial (list of exponent-vector/coefficient terms) to the
     * unique basis normal form. */
    AlgebraElement reduce(const std::vector<std::pair<std::vector<int>, Zmod>>& terms) const;

    /* Normalized valuation: val(p) = 1, values in (1/e)Z, computed on the
     * shifted integral basis (cyclotomic generators contribute powers of
     * g - 1). Exact on presentations whose shifted-basis valuations are
     * pairwise distinct mod 1; the paper-relevant models are of this kind. */
    Valuation valuation(const AlgebraElement& x) const;

    /* Same algebra with precision lowered to n' < n (e.g. the mod-p fibre). */
    FiniteAlgebraPtr change_precision(int n2) const;

    /* Ring map determined by generator images; throws NotAnAutomorphism if
     * images violate a relation or the induced matrix is singular. */
    std::vector<AlgebraElement> check_automorphism(const std::vector<AlgebraElement>& images) const;
    AlgebraElement apply_map(const std::vector<AlgebraElement>& images, const AlgebraElement& x) const;

    /* Per-generator data used by valuation(). */
    struct GenVal {
        mpz_class shift;   // adapted generator = g - shift (shift 0 or 1)
        Rational val;      // valuation of the adapted generator
    };
    const std::vector<GenVal>& gen_vals() const { return gen_vals_; }
    Rational basis_monomial_valuation(const std::vector<int>& exps) const;

    bool same_presentation(const FiniteAlgebra& o) const;

  private:
    FiniteAlgebra() = default;
    void build();

    ModulusPtr mod_;
    std::vector<std::string> gens_;
    std::vector<Relation> relations_;
    std::vector<int> degs_;
    int rank_ = 1;
    long long e_ = 1;
    std::vector<std::vector<int>> basis_;
    std::map<std::vector<int>, int> basis_index_;
    std::vector<GenVal> gen_vals_;
    bool valuation_ok_ = false;

    mutable std::map<std::vector<int>, std::vector<Zmod>> nf_cache_;

    friend class AlgebraElement;
};

}  // namespace crysp
