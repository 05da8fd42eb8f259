#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crysp/linalg.hpp"
#include "crysp/poly.hpp"

namespace crysp {

/* Variable classes of a free prelog algebra T(X, Y) over a base:
 *   Coefficient: base variables, d kills them (relative forms)
 *   Monoid:      dlog generators, d(x^a . w) = a x^a dlog(x) ^ w
 *   Polynomial:  dy generators, d(y^b . w) = b y^{b-1} dy ^ w
 * The grading counts dy as degree 1 and dlog(x) as degree 0, so the
 * differential is degree-preserving and every window computation is exact. */
enum class VarClass { Coefficient, Monoid, Polynomial };

struct FormRing {
    PolyRingPtr poly;
    std::vector<VarClass> cls;

    bool compatible(const FormRing& o) const { return poly->compatible(*o.poly) && cls == o.cls; }
    int max_form_degree() const {
        int k = 0;
        for (auto c : cls)
            if (c != VarClass::Coefficient) ++k;
        return k;
    }
};
using FormRingPtr = std::shared_ptr<const FormRing>;

FormRingPtr make_form_ring(PolyRingPtr poly, std::vector<VarClass> cls);

/* Free prelog algebra on monoid generators X and polynomial generators Y. */
FormRingPtr free_prelog_algebra(long long p, int n, const std::vector<std::string>& monoid_gens,
                                const std::vector<std::string>& poly_gens,
                                std::optional<long long> degree_cap);

/* Differential form: wedge components indexed by strictly ascending variable
 * index lists (only non-coefficient variables may appear). */
class Form {
  public:
    Form() = default;
    Form(FormRingPtr ring, int degree) : ring_(std::move(ring)), degree_(degree) {}

    static Form from_poly(FormRingPtr r, const Poly& c);

    const FormRingPtr& ring() const { return ring_; }
    int degree() const { return degree_; }
    const std::map<std::vector<int>, Poly>& comps() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    void add_comp(const std::vector<int>& wedge, const Poly& c);

    friend Form operator+(const Form& a, const Form& b);
    friend Form operator-(const Form& a, const Form& b);
    Form operator-() const;
    friend bool operator==(const Form& a, const Form& b);
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }
    Form scaled(const Zmod& c) const;

    std::string str() const;

  private:
    FormRingPtr ring_;
    int degree_ = 0;
    std::map<std::vector<int>, Poly> comps_;
};

/* Exterior derivative (Leibniz, d(dlog x) = 0, d . d = 0). */
Form de_rham_differential(const Form& w);

/* Wedge product with the usual Koszul sign. */
Form wedge(const Form& a, const Form& b);

/* Pullback along the algebra map fixing coefficient variables and sending
 * each differentiating variable to the given polynomial image. */
Form pullback(const Form& w, const std::vector<Poly>& images, FormRingPtr target);

/* Basis bookkeeping: all degree-i forms of total degree exactly d within the
 * ring's cap (total degree = monomial degree + #Polynomial wedge factors). */
struct FormBasis {
    std::vector<std::pair<std::vector<int>, std::vector<long long>>> elems;  // (wedge, monomial)
    std::map<std::pair<std::vector<int>, std::vector<long long>>, int> index;
};
FormBasis form_basis(const FormRingPtr& r, int form_degree, long long total_degree);

std::vector<long long> form_to_vec(const Form& w, const FormBasis& basis, long long total_degree);
Form form_from_vec(const FormRingPtr& r, int degree, const FormBasis& basis,
                   const std::vector<long long>& v);

/* Cohomology of the truncated de Rham complex over F_p, per total degree.
 * Returns dimensions and chosen cocycle representatives. */
struct CohomologyTable {
    /* dim_h[i][d] = dim of H^i in total degree d (0 <= d <= window) */
    std::vector<std::vector<long long>> dim_h;
    long long window = 0;
    std::vector<Form> representatives;  // one representative per (i, d) class, flattened
};
CohomologyTable cohomology(const FormRingPtr& r, int max_form_degree, long long window,
                           bool want_representatives = false);

/* Inverse Cartier map on a form over the Frobenius twist: dlog x -> dlog x,
 * dy -> y^{p-1} dy, coefficients through the relative Frobenius. Returns a
 * cocycle representative on the base ring. */
Form cartier_inverse(const Form& twist_form, FormRingPtr base);

/* Check that cartier_inverse induces degreewise bijections
 * Omega^i(twist, deg <= D') -> H^i(base, deg <= p D' + i). */
struct CartierReport {
    bool pass = true;
    bool truncation_unstable = false;
    struct Row {
        int i;
        long long twist_dim;
        long long h_dim;
        long long image_rank;
        bool ok;
    };
    std::vector<Row> rows;
};
CartierReport verify_cartier(const FormRingPtr& base, long long D);

}  // namespace crysp
