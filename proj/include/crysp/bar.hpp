#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crysp/derham.hpp"
#include "crysp/pd.hpp"
#include "crysp/poly.hpp"

namespace crysp {

/* Bar resolution of B = A/(f) as an A-algebra: level s is A[t_1..t_s], the
 * faces come from the nerve of the additive monoid N after the affine change
 * of variables that turns the augmentation into t -> 0. Level-1 faces are
 * t -> f and t -> 0. */
class BarResolution {
  public:
    /* base_vars: variables of A; n = 1 or 2 (mod p, or its Z/p^2 lift) */
    static BarResolution make(long long p, int n, const std::vector<std::string>& base_vars,
                              const Poly& f, int s_max, long long degree_cap);

    long long p() const { return p_; }
    int n() const { return n_; }
    int s_max() const { return s_max_; }
    long long degree_cap() const { return degree_cap_; }
    const Poly& f() const { return f_; }
    int base_var_count() const { return static_cast<int>(base_vars_.size()); }

    const FormRingPtr& level(int s) const { return levels_.at(s); }

    /* images of every level-s variable under the face d_j : P_s -> P_{s-1} */
    std::vector<Poly> face_images(int s, int j) const;
    /* images under the degeneracy sigma_j : P_s -> P_{s+1} */
    std::vector<Poly> degeneracy_images(int s, int j) const;

    Poly apply_face(int s, int j, const Poly& g) const;

    /* alternating-sum horizontal differential on forms: C^{s,i} -> C^{s-1,i} */
    Form horizontal(int s, const Form& w) const;

  private:
    long long p_ = 2;
    int n_ = 1;
    int s_max_ = 1;
    long long degree_cap_ = 0;
    std::vector<std::string> base_vars_;
    Poly f_;
    std::vector<FormRingPtr> levels_;
};

/* Homology dimensions of the bar chain complex (alternating face sums) on the
 * degree-truncated underlying modules; H_0 should be B and H_{1..s_max-1}
 * should vanish inside the safe degree window. */
std::vector<long long> bar_chain_homology_dims(const BarResolution& bar, long long safe_degree);

/* Totalization data for d_tot = d_v + (-1)^i d_h over a window of total
 * degrees [lo, hi]; basis elements are (s, form-degree i = total + s, wedge,
 * monomial) tuples with polynomial grading <= degree cap. */
struct Totalization {
    const BarResolution* bar;
    int lo, hi;
    struct Item {
        int s;
        int i;
        std::vector<int> wedge;
        std::vector<long long> mono;
    };
    std::vector<std::vector<Item>> basis;          // per total degree offset
    std::vector<std::map<std::tuple<int, std::vector<int>, std::vector<long long>>, int>> index;
    std::vector<GFpMat> d;                         // d[k]: degree lo+k -> lo+k+1
};
Totalization totalize(const BarResolution& bar, int total_lo, int total_hi);

/* H^0 of the totalization with the conjugate filtration (by simplicial level)
 * and its graded dimensions, certified by a recheck at s_max+1 / cap+p. */
struct H0Report {
    long long h0_dim = 0;                 // within the degree window
    std::vector<long long> gr_dims;       // gr_0 .. gr_{max_level}
    std::vector<long long> gr_dims_recheck;
    std::vector<bool> certified;
    bool gr1_generated_by_split = false;  // Fil_1 = Fil_0 + B-span of the split generator
};
H0Report derived_dr_h0(long long p, const std::string& var, int s_max, long long deg_cap,
                       int max_level);

/* E_1 entry of the conjugate spectral sequence for B = A/(f), f = x: the
 * divided-power functor of the free rank-1 twist module. Entries live on the
 * line q = -p_idx; dimensions are cross-checked against derived_dr_h0 by the
 * caller. */
long long conjugate_e1(long long p, long long deg_cap, int p_idx, int q);

/* Liftable Cartier splitting in degree 1 for f = x: the Frobenius-lift map
 * (1/p) Omega^1(g~*) evaluated on the twist generator, plus the
 * pd-normalized generator of gr_1 whose comparison image is -gamma_p(x). */
struct SplitReport {
    Form lift_image;   // t^{p-1} dt at level 1 (mod p)
    Form generator;    // ((p-1)!)^{-1} t^{p-1} dt = gamma_{p-1}(t) dt
    bool cocycle = false;
    bool generates_gr1 = false;
};
SplitReport liftable_cartier_split(long long p, int s_max, long long deg_cap);

/* Divided-power form: wedge of dt's with coefficients in the levelwise
 * pd-envelope F_p<x, t_1..t_s> (relative to A = F_p[x], so d_v treats the
 * x-divided-powers as constants). */
struct PDForm {
    PDRingPtr ring;  // pd vars: index 0 = x, 1..s = t_1..t_s; trivial ambient
    int degree = 0;
    std::map<std::vector<int>, PDElement> comps;  // ascending t-index wedges
};

/* Comparison map to the crystalline side for the base quotient A = F_p[x],
 * B = A/(x): evaluates the zig-zag (adjoin divided powers levelwise, replace
 * each vertically exact term by minus its horizontal image) on a
 * total-degree-0 cocycle given by polynomial forms per level. Returns the
 * image in F_p<x> = D_A((x)). */
PDElement comp_to_crystalline(const BarResolution& bar, const std::vector<Form>& components,
                              int weight_cap);

/* The pd ring F_p<x> that comparison images land in. */
PDRingPtr crystalline_target(long long p, int weight_cap);

}  // namespace crysp
