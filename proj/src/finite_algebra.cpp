#include "crysp/finite_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace crysp {

namespace {

/* degree-lex order on exponent vectors */
bool deglex_less(const std::vector<int>& a, const std::vector<int>& b) {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a < b;
}

}  // namespace

AlgebraElement::AlgebraElement(FiniteAlgebraPtr parent, std::vector<Zmod> coords)
    : parent_(std::move(parent)), coords_(std::move(coords)) {
    if (static_cast<int>(coords_.size()) != parent_->rank())
        throw err("ShapeMismatch", "coordinate vector length != rank");
}

bool AlgebraElement::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    if (!a.parent_->same_presentation(*b.parent_)) throw err("MixedRings", "elements of different algebras");
    std::vector<Zmod> c = a.coords_;
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
    return AlgebraElement(a.parent_, std::move(c));
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return a + (-b); }

AlgebraElement AlgebraElement::operator-() const {
    std::vector<Zmod> c = coords_;
    for (auto& x : c) x = -x;
    return AlgebraElement(parent_, std::move(c));
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    if (!a.parent_->same_presentation(*b.parent_)) throw err("MixedRings", "elements of different algebras");
    const FiniteAlgebra& A = *a.parent_;
    std::vector<Zmod> out(A.rank(), Zmod::zero(A.modulus()));
    const auto& basis = A.basis();
    for (int i = 0; i < A.rank(); ++i) {
        if (a.coords_[i].is_zero()) continue;
        for (int j = 0; j < A.rank(); ++j) {
            if (b.coords_[j].is_zero()) continue;
            std::vector<int> e(basis[i].size());
            for (size_t t = 0; t < e.size(); ++t) e[t] = basis[i][t] + basis[j][t];
            const std::vector<Zmod>& nf = A.monomial_normal_form(e);
            Zmod f = a.coords_[i] * b.coords_[j];
            for (int t = 0; t < A.rank(); ++t)
                if (!nf[t].is_zero()) out[t] += nf[t] * f;
        }
    }
    return AlgebraElement(a.parent_, std::move(out));
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    if (!a.parent_->same_presentation(*b.parent_)) return false;
    return a.coords_ == b.coords_;
}

AlgebraElement AlgebraElement::scaled(const Zmod& c) const {
    std::vector<Zmod> out = coords_;
    for (auto& x : out) x *= c;
    return AlgebraElement(parent_, std::move(out));
}

AlgebraElement AlgebraElement::pow(const mpz_class& e) const {
    if (e < 0) throw err("NegativePower", "negative exponent");
    AlgebraElement r = parent_->one();
    AlgebraElement base = *this;
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = r * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return r;
}

std::string AlgebraElement::str() const {
    std::ostringstream os;
    bool first = true;
    const auto& basis = parent_->basis();
    for (int i = 0; i < parent_->rank(); ++i) {
        if (coords_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << coords_[i].str();
        for (size_t g = 0; g < basis[i].size(); ++g)
            if (basis[i][g] > 0) {
                os << "*" << parent_->gens()[g];
                if (basis[i][g] > 1) os << "^" << basis[i][g];
            }
    }
    if (first) os << "0";
    return os.str();
}

FiniteAlgebraPtr FiniteAlgebra::make(long long p, int n, std::vector<std::string> gens,
                                     std::vector<Relation> relations,
                                     std::optional<long long> ramification) {
    auto A = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
    A->mod_ = make_modulus(p, n);
    A->gens_ = std::move(gens);
    A->relations_ = std::move(relations);
    if (A->gens_.size() != A->relations_.size())
        throw err("NonTriangularPresentation", "need one relation per generator");
    A->build();
    if (ramification) A->e_ = *ramification;
    return A;
}

FiniteAlgebraPtr FiniteAlgebra::make_univariate(long long p, int n, std::vector<std::string> gens,
                                                std::vector<std::vector<mpz_class>> coeffs,
                                                std::optional<long long> ramification) {
    std::vector<Relation> rels;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        const auto& c = coeffs[i];
        if (c.size() < 2) throw err("NonMonicRelation", "relation needs degree >= 1");
        if (c.back() != 1) throw err("NonMonicRelation", "leading coefficient must be 1");
        Relation r;
        r.var = static_cast<int>(i);
        r.deg = static_cast<int>(c.size()) - 1;
        for (int d = 0; d < r.deg; ++d) {
            if (c[d] == 0) continue;
            RelTerm t;
            t.exps.assign(gens.size(), 0);
            t.exps[i] = d;
            t.coeff = c[d];
            r.lower.push_back(std::move(t));
        }
        rels.push_back(std::move(r));
    }
    return make(p, n, std::move(gens), std::move(rels), ramification);
}

void FiniteAlgebra::build() {
    int ng = static_cast<int>(gens_.size());
    degs_.assign(ng, 1);
    for (int i = 0; i < ng; ++i) {
        const Relation& r = relations_[i];
        if (r.var != i) throw err("NonTriangularPresentation", "relations must follow generator order");
        if (r.deg < 1) throw err("NonMonicRelation", "relation degree must be >= 1");
        degs_[i] = r.deg;
        for (const auto& t : r.lower) {
            if (static_cast<int>(t.exps.size()) != ng)
                throw err("ShapeMismatch", "relation term exponent length");
            if (t.exps[i] >= r.deg)
                throw err("NonMonicRelation", "lower term reaches leading degree");
            for (int j = i + 1; j < ng; ++j)
                if (t.exps[j] != 0)
                    throw err("NonTriangularPresentation",
                              "relation for " + gens_[i] + " involves later generator " + gens_[j]);
        }
    }

    rank_ = 1;
    for (int d : degs_) {
        rank_ *= d;
        if (rank_ > 100000) throw err("RankTooLarge", "presentation rank exceeds guard");
    }
    std::vector<int> cur(ng, 0);
    basis_.clear();
    for (int k = 0; k < rank_; ++k) {
        basis_.push_back(cur);
        for (int i = ng - 1; i >= 0; --i) {
            if (++cur[i] < degs_[i]) break;
            cur[i] = 0;
        }
    }
    std::sort(basis_.begin(), basis_.end(), deglex_less);
    basis_index_.clear();
    for (int k = 0; k < rank_; ++k) basis_index_[basis_[k]] = k;

    /* classify generators for the valuation rule */
    gen_vals_.assign(ng, GenVal{0, Rational(0)});
    valuation_ok_ = true;
    long long p = mod_->p;
    for (int i = 0; i < ng; ++i) {
        const Relation& r = relations_[i];
        if (r.deg == 1) { gen_vals_[i] = GenVal{0, Rational(0)}; continue; }
        /* univariate in g_i with integer coefficients? */
        bool univ = true;
        std::vector<mpz_class> c(r.deg, 0);
        for (const auto& t : r.lower) {
            for (int j = 0; j < ng; ++j)
                if (j != i && t.exps[j] != 0) univ = false;
            if (univ) c[t.exps[i]] += t.coeff;
        }
        if (!univ) { valuation_ok_ = false; continue; }
        /* cyclotomic Phi_{p^j}(x) = sum_{a<p} x^{a p^{j-1}}, deg = p^{j-1}(p-1) */
        {
            long long pj1 = 1;
            bool cyc = false;
            for (int j = 1; j <= 40 && !cyc; ++j) {
                long long d = pj1 * (p - 1);
                if (d > r.deg) break;
                if (d == r.deg) {
                    bool match = true;
                    for (int a = 0; a < r.deg; ++a) {
                        mpz_class want = 0;
                        if (a % pj1 == 0 && (a / pj1) < p) want = 1;
                        if (c[a] != want) { match = false; break; }
                    }
                    if (match) {
                        gen_vals_[i] = GenVal{1, Rational(1, d)};
                        cyc = true;
                    }
                }
                pj1 *= p;
            }
            if (cyc) continue;
        }
        /* Eisenstein-type: val(g) = val_p(c_0)/deg, all middle terms dominated */
        if (c[0] == 0) { valuation_ok_ = false; continue; }
        mpz_class c0 = c[0];
        long long v0 = 0;
        while (mpz_divisible_ui_p(c0.get_mpz_t(), static_cast<unsigned long>(p))) {
            mpz_divexact_ui(c0.get_mpz_t(), c0.get_mpz_t(), static_cast<unsigned long>(p));
            ++v0;
        }
        if (v0 == 0) { valuation_ok_ = false; continue; }
        Rational vg(v0, r.deg);
        bool dominated = true;
        for (int a = 1; a < r.deg; ++a) {
            if (c[a] == 0) continue;
            mpz_class ca = c[a];
            long long va = 0;
            while (mpz_divisible_ui_p(ca.get_mpz_t(), static_cast<unsigned long>(p))) {
                mpz_divexact_ui(ca.get_mpz_t(), ca.get_mpz_t(), static_cast<unsigned long>(p));
                ++va;
            }
            if (!(Rational(va) + vg * Rational(a) > Rational(v0))) dominated = false;
        }
        if (!dominated) { valuation_ok_ = false; continue; }
        gen_vals_[i] = GenVal{0, vg};
    }
    long long e = 1;
    for (const auto& gv : gen_vals_) e = std::lcm(e, gv.val.den);
    e_ = e;
}

AlgebraElement FiniteAlgebra::zero() const {
    return AlgebraElement(shared_from_this(), std::vector<Zmod>(rank_, Zmod::zero(mod_)));
}

AlgebraElement FiniteAlgebra::one() const { return from_int(1); }

AlgebraElement FiniteAlgebra::from_int(const mpz_class& c) const {
    std::vector<Zmod> v(rank_, Zmod::zero(mod_));
    std::vector<int> e(gens_.size(), 0);
    v[basis_index_.at(e)] = Zmod(mod_, c);
    return AlgebraElement(shared_from_this(), std::move(v));
}

AlgebraElement FiniteAlgebra::generator(int i) const {
    if (i < 0 || i >= static_cast<int>(gens_.size())) throw err("UnknownGenerator", "generator index");
    std::vector<int> e(gens_.size(), 0);
    e[i] = 1;
    std::vector<Zmod> v(rank_, Zmod::zero(mod_));
    auto nf = monomial_normal_form(e);
    return AlgebraElement(shared_from_this(), nf);
}

AlgebraElement FiniteAlgebra::generator(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i] == name) return generator(static_cast<int>(i));
    throw err("UnknownGenerator", "no generator named " + name);
}

AlgebraElement FiniteAlgebra::from_coords(std::vector<Zmod> coords) const {
    return AlgebraElement(shared_from_this(), std::move(coords));
}

std::vector<Zmod> FiniteAlgebra::monomial_normal_form(const std::vector<int>& exps) const {
    auto it = nf_cache_.find(exps);
    if (it != nf_cache_.end()) return it->second;

    std::vector<Zmod> out(rank_, Zmod::zero(mod_));
    /* find the highest generator exceeding its degree bound */
    int hi = -1;
    for (int i = static_cast<int>(gens_.size()) - 1; i >= 0; --i)
        if (exps[i] >= degs_[i]) { hi = i; break; }
    if (hi < 0) {
        out[basis_index_.at(exps)] = Zmod::one(mod_);
        nf_cache_[exps] = out;
        return out;
    }
    /* g_hi^{deg} = -sum(lower);  exps = rest * g_hi^{deg} */
    std::vector<int> rest = exps;
    rest[hi] -= degs_[hi];
    for (const auto& t : relations_[hi].lower) {
        std::vector<int> e(exps.size());
        for (size_t j = 0; j < e.size(); ++j) e[j] = rest[j] + t.exps[j];
        const std::vector<Zmod> sub = monomial_normal_form(e);
        Zmod f = Zmod(mod_, -t.coeff);
        for (int j = 0; j < rank_; ++j)
            if (!sub[j].is_zero()) out[j] += sub[j] * f;
    }
    nf_cache_[exps] = out;
    return out;
}

AlgebraElement FiniteAlgebra::reduce(const std::vector<std::pair<std::vector<int>, Zmod>>& terms) const {
    std::vector<Zmod> out(rank_, Zmod::zero(mod_));
    for (const auto& [e, c] : terms) {
        if (static_cast<int>(e.size()) != static_cast<int>(gens_.size()))
            throw err("UnknownGenerator", "term exponent length != generator count");
        const auto nf = monomial_normal_form(e);
        for (int j = 0; j < rank_; ++j)
            if (!nf[j].is_zero()) out[j] += nf[j] * c;
    }
    return AlgebraElement(shared_from_this(), std::move(out));
}

Rational FiniteAlgebra::basis_monomial_valuation(const std::vector<int>& exps) const {
    Rational v(0);
    for (size_t i = 0; i < exps.size(); ++i)
        v = v + gen_vals_[i].val * Rational(exps[i]);
    return v;
}

Valuation FiniteAlgebra::valuation(const AlgebraElement& x) const {
    if (!valuation_ok_)
        throw err("ValuationUndefined", "presentation is not Eisenstein/cyclotomic shaped");
    if (x.is_zero()) return Valuation::at_least(Rational(mod_->n));
    /* expand standard monomials into the shifted basis prod (g_i - shift_i)^b */
    std::vector<Zmod> shifted(rank_, Zmod::zero(mod_));
    const auto& coords = x.coords();
    for (int c = 0; c < rank_; ++c) {
        if (coords[c].is_zero()) continue;
        const auto& ce = basis_[c];
        /* iterate over all b <= ce componentwise */
        std::vector<int> b(ce.size(), 0);
        while (true) {
            mpz_class coef = 1;
            for (size_t i = 0; i < ce.size(); ++i) {
                if (gen_vals_[i].shift == 0) {
                    if (b[i] != ce[i]) { coef = 0; break; }
                    continue;
                }
                mpz_class bin = binomial(ce[i], b[i]);
                mpz_class sp;
                mpz_pow_ui(sp.get_mpz_t(), gen_vals_[i].shift.get_mpz_t(),
                           static_cast<unsigned long>(ce[i] - b[i]));
                coef *= bin * sp;
            }
            if (coef != 0) shifted[basis_index_.at(b)] += coords[c].scaled(coef);
            /* next b */
            int i = static_cast<int>(ce.size()) - 1;
            while (i >= 0) {
                if (++b[i] <= ce[i]) break;
                b[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }
    bool found = false;
    Rational best(0);
    for (int k = 0; k < rank_; ++k) {
        if (shifted[k].is_zero()) continue;
        Valuation vc = shifted[k].valuation();
        Rational v = vc.value + basis_monomial_valuation(basis_[k]);
        if (!found || v < best) { best = v; found = true; }
    }
    if (!found) return Valuation::at_least(Rational(mod_->n));
    return Valuation::exact(best);
}

FiniteAlgebraPtr FiniteAlgebra::change_precision(int n2) const {
    auto A = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
    A->mod_ = make_modulus(mod_->p, n2);
    A->gens_ = gens_;
    A->relations_ = relations_;
    A->build();
    A->e_ = e_;
    return A;
}

bool FiniteAlgebra::same_presentation(const FiniteAlgebra& o) const {
    if (this == &o) return true;
    if (!(*mod_ == *o.mod_) || gens_ != o.gens_) return false;
    if (relations_.size() != o.relations_.size()) return false;
    for (size_t i = 0; i < relations_.size(); ++i) {
        if (relations_[i].deg != o.relations_[i].deg) return false;
        if (relations_[i].lower.size() != o.relations_[i].lower.size()) return false;
        for (size_t t = 0; t < relations_[i].lower.size(); ++t)
            if (relations_[i].lower[t].exps != o.relations_[i].lower[t].exps ||
                relations_[i].lower[t].coeff != o.relations_[i].lower[t].coeff)
                return false;
    }
    return true;
}

AlgebraElement FiniteAlgebra::apply_map(const std::vector<AlgebraElement>& images,
                                        const AlgebraElement& x) const {
    AlgebraElement out = images[0].parent()->zero();
    for (int k = 0; k < rank_; ++k) {
        if (x.coords()[k].is_zero()) continue;
        AlgebraElement m = images[0].parent()->one();
        for (size_t i = 0; i < gens_.size(); ++i)
            if (basis_[k][i] > 0) m = m * images[i].pow(basis_[k][i]);
        out = out + m.scaled(x.coords()[k]);
    }
    return out;
}

std::vector<AlgebraElement> FiniteAlgebra::check_automorphism(
    const std::vector<AlgebraElement>& images) const {
    if (images.size() != gens_.size()) throw err("NotAnAutomorphism", "need one image per generator");
    /* relations must map to zero */
    for (size_t i = 0; i < relations_.size(); ++i) {
        AlgebraElement v = images[i].pow(relations_[i].deg);
        for (const auto& t : relations_[i].lower) {
            AlgebraElement m = images[0].parent()->one();
            for (size_t j = 0; j < gens_.size(); ++j)
                if (t.exps[j] > 0) m = m * images[j].pow(t.exps[j]);
            v = v + m.scaled(Zmod(mod_, t.coeff));
        }
        if (!v.is_zero())
            throw err("NotAnAutomorphism", "image violates relation for " + gens_[i]);
    }
    /* induced matrix must be invertible (equivalently: invertible mod p) */
    GFpMat M(mod_->p, rank_, rank_);
    for (int k = 0; k < rank_; ++k) {
        AlgebraElement m = images[0].parent()->one();
        for (size_t i = 0; i < gens_.size(); ++i)
            if (basis_[k][i] > 0) m = m * images[i].pow(basis_[k][i]);
        for (int r = 0; r < rank_; ++r) {
            mpz_class red = m.coords()[r].value() % mod_->p;
            M.set(r, k, red.get_si());
        }
    }
    if (gfp_rank(M) != rank_) throw err("NotAnAutomorphism", "induced matrix is singular");
    return images;
}

}  // namespace crysp
