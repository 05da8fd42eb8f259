#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crysp/linalg.hpp"
#include "crysp/poly.hpp"

namespace crysp {

/* Truncated divided-power polynomial algebra A<x_1..x_r>: A-linear span of
 * prod_i gamma_{e_i}(x_i) with total pd-weight sum(e_i) <= weight_cap. */
struct PDRing {
    PolyRingPtr ambient;            // A
    std::vector<std::string> pd_vars;
    int weight_cap = 0;

    bool compatible(const PDRing& o) const {
        return ambient->compatible(*o.ambient) && pd_vars == o.pd_vars && weight_cap == o.weight_cap;
    }
};
using PDRingPtr = std::shared_ptr<const PDRing>;

PDRingPtr make_pd_ring(PolyRingPtr ambient, std::vector<std::string> pd_vars, int weight_cap);

class PDElement {
  public:
    PDElement() = default;
    explicit PDElement(PDRingPtr ring) : ring_(std::move(ring)) {}

    static PDElement zero(PDRingPtr r) { return PDElement(std::move(r)); }
    static PDElement from_ambient(PDRingPtr r, const Poly& c);
    /* gamma_k(x_i) as a basis element */
    static PDElement gamma_var(PDRingPtr r, int var, int k);

    const PDRingPtr& ring() const { return ring_; }
    const std::map<std::vector<int>, Poly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool truncated() const { return truncated_; }

    void add_term(const std::vector<int>& pd_exps, const Poly& c);

    friend PDElement operator+(const PDElement& a, const PDElement& b);
    friend PDElement operator-(const PDElement& a, const PDElement& b);
    friend PDElement operator*(const PDElement& a, const PDElement& b);
    PDElement operator-() const;
    friend bool operator==(const PDElement& a, const PDElement& b);
    friend bool operator!=(const PDElement& a, const PDElement& b) { return !(a == b); }

    PDElement scaled(const Poly& c) const;
    PDElement scaled(const Zmod& c) const;
    PDElement pow(int e) const;

    /* weight-0 component (coefficient of the empty pd-monomial) */
    Poly constant_part() const;

    std::string str() const;

  private:
    PDRingPtr ring_;
    std::map<std::vector<int>, Poly> terms_;
    bool truncated_ = false;

    friend PDElement gamma(int k, const PDElement& u);
};

/* Divided power gamma_k of an element of the pd-ideal (zero weight-0 part).
 * Coefficients like (ke)!/(k!(e!)^k) are computed exactly over Z and then
 * reduced. */
PDElement gamma(int k, const PDElement& u);

/* gamma_k(gamma_j(x)) composition coefficient (kj)!/(k!(j!)^k) over Z. */
mpz_class gamma_composition_coeff(int k, int j);

/* pd-envelope of (f_1..f_r) in the ambient ring A, presented as the
 * weight-capped quotient A<x_1..x_r>/(x_i - f_i), with normal forms computed
 * by Howell elimination over Z/p^n on the truncated flat basis. */
class PDEnvelope {
  public:
    static PDEnvelope build(PolyRingPtr ambient, std::vector<Poly> sequence, int weight_cap,
                            bool assert_regular = false);

    const PDRingPtr& pd_ring() const { return pdring_; }
    const std::vector<Poly>& sequence() const { return seq_; }
    int weight_cap() const { return pdring_->weight_cap; }

    /* flat coordinates: basis of (ambient monomial, pd exponent) pairs */
    int flat_dim() const { return static_cast<int>(flat_basis_.size()); }
    const std::vector<std::pair<std::vector<long long>, std::vector<int>>>& flat_basis() const {
        return flat_basis_;
    }
    std::vector<mpz_class> coords(const PDElement& x) const;
    PDElement from_coords(const std::vector<mpz_class>& v) const;

    /* canonical representative modulo the envelope relations */
    PDElement normal_form(const PDElement& x) const;
    bool is_zero_in_envelope(const PDElement& x) const;
    bool equal_in_envelope(const PDElement& a, const PDElement& b) const;

    /* log_p of the cardinality of the truncated envelope */
    long long size_log() const;

    /* F_p-dimension of the truncated envelope per total degree (ambient degree
     * plus pd-weight); requires n == 1. */
    std::vector<long long> graded_dimensions(int max_degree) const;

    /* dims of the conjugate filtration Fil_i: span of pd-monomials with all
     * exponents multiples of p and sum(e)/p <= i (n == 1 only). Returns
     * per-total-degree dims for each filtration level 0..max_level. */
    std::vector<std::vector<long long>> conjugate_filtration_dims(int max_level, int max_degree) const;

  private:
    PDRingPtr pdring_;
    std::vector<Poly> seq_;
    HowellForm rel_;
    std::vector<std::pair<std::vector<long long>, std::vector<int>>> flat_basis_;
    std::map<std::pair<std::vector<long long>, std::vector<int>>, int> flat_index_;

    std::vector<std::vector<mpz_class>> relation_rows() const;
};

/* Truncated Koszul H_1 check (mod p) used as the regular-sequence heuristic:
 * returns true if H_1 vanishes in all total degrees <= safe_degree. */
bool koszul_h1_vanishes_mod_p(const PolyRingPtr& ambient, const std::vector<Poly>& seq);

/* The algebra map F_p[x_0..x_r]/(x_i^p) -> F_p<x> sending x_i to the i-fold
 * composite gamma_p(...gamma_p(x)); certifies bijectivity onto pd-weight
 * < p^{r+1} by a rank computation. */
struct IteratedGammaIso {
    PDRingPtr target;                  // F_p<x>, weight cap >= p^{r+1}-1
    std::vector<PDElement> var_images;
    bool bijective = false;
    int matrix_size = 0;
};
IteratedGammaIso iterated_gamma_iso(int r, long long p, int cap);

/* Envelope of (E(x)) inside Z/p^n[x] for an Eisenstein E; the Hodge
 * filtration is the pd-filtration. */
PDEnvelope faltings_breuil(long long p, int n, const std::vector<mpz_class>& eisenstein_coeffs,
                           int ambient_degree_cap, int weight_cap);

bool is_eisenstein(long long p, const std::vector<mpz_class>& coeffs);

}  // namespace crysp
