#include "crysp/derham.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace crysp {

FormRingPtr make_form_ring(PolyRingPtr poly, std::vector<VarClass> cls) {
    if (poly->denom != 1) throw err("FractionalExponentOnNonMonoidVariable",
                                    "de Rham forms need integer exponents");
    if (cls.size() != poly->vars.size()) throw err("ShapeMismatch", "one class per variable");
    auto r = std::make_shared<FormRing>();
    r->poly = std::move(poly);
    r->cls = std::move(cls);
    return r;
}

FormRingPtr free_prelog_algebra(long long p, int n, const std::vector<std::string>& monoid_gens,
                                const std::vector<std::string>& poly_gens,
                                std::optional<long long> degree_cap) {
    std::vector<std::string> vars = monoid_gens;
    vars.insert(vars.end(), poly_gens.begin(), poly_gens.end());
    std::vector<VarClass> cls(monoid_gens.size(), VarClass::Monoid);
    cls.insert(cls.end(), poly_gens.size(), VarClass::Polynomial);
    return make_form_ring(make_poly_ring(p, n, vars, 0, degree_cap), cls);
}

Form Form::from_poly(FormRingPtr r, const Poly& c) {
    Form w(std::move(r), 0);
    if (!c.is_zero()) w.comps_[{}] = c;
    return w;
}

void Form::add_comp(const std::vector<int>& wedge, const Poly& c) {
    if (static_cast<int>(wedge.size()) != degree_) throw err("ShapeMismatch", "wedge length != degree");
    for (size_t i = 0; i < wedge.size(); ++i) {
        if (wedge[i] < 0 || wedge[i] >= static_cast<int>(ring_->cls.size()))
            throw err("UnknownGenerator", "wedge index out of range");
        if (ring_->cls[wedge[i]] == VarClass::Coefficient)
            throw err("UnknownGenerator", "coefficient variable in a wedge");
        if (i + 1 < wedge.size() && wedge[i] >= wedge[i + 1])
            throw err("ShapeMismatch", "wedge indices must be strictly ascending");
    }
    auto it = comps_.find(wedge);
    if (it == comps_.end()) {
        if (!c.is_zero()) comps_[wedge] = c;
    } else {
        Poly s = it->second + c;
        if (s.is_zero())
            comps_.erase(it);
        else
            it->second = std::move(s);
    }
}

Form operator+(const Form& a, const Form& b) {
    if (!a.ring_->compatible(*b.ring_) || a.degree_ != b.degree_)
        throw err("MixedRings", "form addition shape mismatch");
    Form c = a;
    for (const auto& [w, v] : b.comps_) c.add_comp(w, v);
    return c;
}

Form Form::operator-() const {
    Form c = *this;
    for (auto& [w, v] : c.comps_) v = -v;
    return c;
}

Form operator-(const Form& a, const Form& b) { return a + (-b); }

bool operator==(const Form& a, const Form& b) {
    return a.degree_ == b.degree_ && a.ring_->compatible(*b.ring_) && a.comps_ == b.comps_;
}

Form Form::scaled(const Zmod& c) const {
    Form r(ring_, degree_);
    for (const auto& [w, v] : comps_) {
        Poly s = v.scaled(c);
        if (!s.is_zero()) r.comps_[w] = s;
    }
    return r;
}

std::string Form::str() const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, v] : comps_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.str() << ")";
        for (int j : w) {
            os << (ring_->cls[j] == VarClass::Monoid ? "*dlog(" : "*d(") << ring_->poly->vars[j] << ")";
        }
    }
    return os.str();
}

Form de_rham_differential(const Form& w) {
    const FormRingPtr& R = w.ring();
    Form out(R, w.degree() + 1);
    const ModulusPtr& mod = R->poly->mod;
    for (const auto& [wed, c] : w.comps()) {
        for (const auto& [e, z] : c.terms()) {
            for (int j = 0; j < static_cast<int>(R->cls.size()); ++j) {
                if (R->cls[j] == VarClass::Coefficient) continue;
                if (e[j] == 0) continue;
                if (std::binary_search(wed.begin(), wed.end(), j)) continue;
                Zmod coef = z * Zmod(mod, e[j]);
                if (coef.is_zero()) continue;
                std::vector<long long> mono = e;
                if (R->cls[j] == VarClass::Polynomial) mono[j] -= 1;
                /* insert dj into the wedge with the transposition sign */
                std::vector<int> nw;
                nw.reserve(wed.size() + 1);
                int before = 0;
                bool placed = false;
                for (int x : wed) {
                    if (!placed && j < x) { nw.push_back(j); placed = true; }
                    if (!placed) ++before;
                    nw.push_back(x);
                }
                if (!placed) nw.push_back(j);
                if (before % 2) coef = -coef;
                Poly pc(R->poly);
                pc.add_term(mono, coef);
                out.add_comp(nw, pc);
            }
        }
    }
    return out;
}

Form wedge(const Form& a, const Form& b) {
    if (!a.ring()->compatible(*b.ring())) throw err("MixedRings", "wedge over different rings");
    Form out(a.ring(), a.degree() + b.degree());
    for (const auto& [w1, c1] : a.comps())
        for (const auto& [w2, c2] : b.comps()) {
            bool shared = false;
            for (int x : w1)
                if (std::binary_search(w2.begin(), w2.end(), x)) { shared = true; break; }
            if (shared) continue;
            /* merge sort with inversion count */
            std::vector<int> m;
            m.reserve(w1.size() + w2.size());
            size_t i = 0, j = 0;
            long long inversions = 0;
            while (i < w1.size() || j < w2.size()) {
                if (j == w2.size() || (i < w1.size() && w1[i] < w2[j])) {
                    m.push_back(w1[i++]);
                } else {
                    inversions += static_cast<long long>(w1.size() - i);
                    m.push_back(w2[j++]);
                }
            }
            Poly c = c1 * c2;
            if (inversions % 2) c = -c;
            out.add_comp(m, c);
        }
    return out;
}

Form pullback(const Form& w, const std::vector<Poly>& images, FormRingPtr target) {
    if (images.size() != w.ring()->cls.size()) throw err("ShapeMismatch", "one image per variable");
    Form out(target, w.degree());
    for (const auto& [wed, c] : w.comps()) {
        /* phi(c) */
        Form acc = Form::from_poly(target, Poly::constant(target->poly, 1));
        {
            Poly pc(target->poly);
            for (const auto& [e, z] : c.terms()) {
                Poly t = Poly::constant(target->poly, z);
                for (size_t v = 0; v < e.size(); ++v)
                    if (e[v] != 0) t = t * images[v].pow(e[v]);
                pc = pc + t;
            }
            acc = Form::from_poly(target, pc);
        }
        for (int j : wed) {
            Form dj = de_rham_differential(Form::from_poly(target, images[j]));
            acc = wedge(acc, dj);
            if (acc.is_zero()) break;
        }
        out = out + acc;
    }
    return out;
}

FormBasis form_basis(const FormRingPtr& r, int form_degree, long long total_degree) {
    FormBasis B;
    int nv = static_cast<int>(r->cls.size());
    std::vector<int> diffvars;
    for (int j = 0; j < nv; ++j)
        if (r->cls[j] != VarClass::Coefficient) diffvars.push_back(j);
    /* all ascending subsets of size form_degree */
    std::vector<std::vector<int>> wedges;
    std::vector<int> comb(form_degree);
    std::function<void(int, int)> rec = [&](int start, int k) {
        if (k == form_degree) {
            std::vector<int> ww;
            for (int t = 0; t < form_degree; ++t) ww.push_back(diffvars[comb[t]]);
            wedges.push_back(ww);
            return;
        }
        for (int i = start; i < static_cast<int>(diffvars.size()); ++i) {
            comb[k] = i;
            rec(i + 1, k + 1);
        }
    };
    rec(0, 0);
    for (const auto& ww : wedges) {
        long long dy = 0;
        for (int j : ww)
            if (r->cls[j] == VarClass::Polynomial) ++dy;
        long long mdeg = total_degree - dy;
        if (mdeg < 0) continue;
        /* monomials of exact degree mdeg in nv variables */
        std::vector<long long> e(nv, 0);
        std::function<void(int, long long)> mon = [&](int v, long long rem) {
            if (v == nv - 1) {
                e[v] = rem;
                B.index[{ww, e}] = static_cast<int>(B.elems.size());
                B.elems.push_back({ww, e});
                e[v] = 0;
                return;
            }
            for (long long x = 0; x <= rem; ++x) {
                e[v] = x;
                mon(v + 1, rem - x);
            }
            e[v] = 0;
        };
        if (nv == 0) {
            if (mdeg == 0) {
                B.index[{ww, e}] = static_cast<int>(B.elems.size());
                B.elems.push_back({ww, e});
            }
        } else {
            mon(0, mdeg);
        }
    }
    return B;
}

std::vector<long long> form_to_vec(const Form& w, const FormBasis& basis, long long total_degree) {
    long long p = w.ring()->poly->mod->p;
    std::vector<long long> v(basis.elems.size(), 0);
    for (const auto& [wed, c] : w.comps())
        for (const auto& [e, z] : c.terms()) {
            auto it = basis.index.find({wed, e});
            if (it == basis.index.end()) {
                /* component outside the requested degree slice */
                long long d = std::accumulate(e.begin(), e.end(), 0LL);
                for (int j : wed)
                    if (w.ring()->cls[j] == VarClass::Polynomial) ++d;
                if (d == total_degree) throw err("ShapeMismatch", "basis lookup failed in degree slice");
                continue;
            }
            mpz_class red = z.value() % p;
            v[it->second] = red.get_si();
        }
    return v;
}

Form form_from_vec(const FormRingPtr& r, int degree, const FormBasis& basis,
                   const std::vector<long long>& v) {
    Form w(r, degree);
    for (size_t i = 0; i < basis.elems.size(); ++i) {
        if (v[i] % r->poly->mod->p == 0) continue;
        Poly c(r->poly);
        c.add_term(basis.elems[i].second, Zmod(r->poly->mod, v[i]));
        w.add_comp(basis.elems[i].first, c);
    }
    return w;
}

namespace {

/* matrix of d : Omega^i_d -> Omega^{i+1}_d on the degree-d slice */
GFpMat diff_matrix(const FormRingPtr& r, int i, long long d, const FormBasis& dom,
                   const FormBasis& cod) {
    long long p = r->poly->mod->p;
    GFpMat M(p, static_cast<int>(cod.elems.size()), static_cast<int>(dom.elems.size()));
    for (size_t c = 0; c < dom.elems.size(); ++c) {
        Form w(r, i);
        Poly pc(r->poly);
        pc.add_term(dom.elems[c].second, Zmod::one(r->poly->mod));
        w.add_comp(dom.elems[c].first, pc);
        Form dw = de_rham_differential(w);
        auto vec = form_to_vec(dw, cod, d);
        for (size_t rr = 0; rr < vec.size(); ++rr)
            if (vec[rr]) M.a[rr][c] = vec[rr];
    }
    return M;
}

}  // namespace

CohomologyTable cohomology(const FormRingPtr& r, int max_form_degree, long long window,
                           bool want_representatives) {
    if (r->poly->mod->n != 1) throw err("NotField", "cohomology requires mod-p coefficients");
    CohomologyTable T;
    T.window = window;
    T.dim_h.assign(max_form_degree + 1, std::vector<long long>(window + 1, 0));
    for (long long d = 0; d <= window; ++d) {
        std::vector<FormBasis> bases;
        for (int i = 0; i <= max_form_degree + 1; ++i) bases.push_back(form_basis(r, i, d));
        for (int i = 0; i <= max_form_degree; ++i) {
            GFpMat Mi = diff_matrix(r, i, d, bases[i], bases[i + 1]);
            long long nullity = static_cast<long long>(bases[i].elems.size()) - gfp_rank(Mi);
            long long rank_prev = 0;
            GFpMat Mprev(r->poly->mod->p, 0, 0);
            if (i >= 1) {
                Mprev = diff_matrix(r, i - 1, d, bases[i - 1], bases[i]);
                rank_prev = gfp_rank(Mprev);
            }
            T.dim_h[i][d] = nullity - rank_prev;
            if (want_representatives && T.dim_h[i][d] > 0) {
                /* nullspace vectors reduced against the image rows */
                auto null_basis = gfp_nullspace(Mi);
                std::vector<std::vector<long long>> image_rows;
                if (i >= 1)
                    for (int c = 0; c < Mprev.cols; ++c) {
                        std::vector<long long> col(Mprev.rows);
                        for (int rr = 0; rr < Mprev.rows; ++rr) col[rr] = Mprev.a[rr][c];
                        image_rows.push_back(std::move(col));
                    }
                GFpMat span(r->poly->mod->p, static_cast<int>(image_rows.size()),
                            static_cast<int>(bases[i].elems.size()));
                for (size_t rr = 0; rr < image_rows.size(); ++rr)
                    for (size_t cc = 0; cc < image_rows[rr].size(); ++cc)
                        span.a[rr][cc] = image_rows[rr][cc];
                auto piv = gfp_rref(span);
                int have = 0;
                GFpMat acc(r->poly->mod->p, 0, static_cast<int>(bases[i].elems.size()));
                for (const auto& nv : null_basis) {
                    auto res = gfp_reduce_against(span, piv, nv);
                    bool zero = std::all_of(res.begin(), res.end(), [](long long x) { return x == 0; });
                    if (zero) continue;
                    acc.a.push_back(nv);
                    acc.rows += 1;
                    if (gfp_rank(acc) < acc.rows) {
                        acc.a.pop_back();
                        acc.rows -= 1;
                        continue;
                    }
                    T.representatives.push_back(form_from_vec(r, i, bases[i], nv));
                    if (++have >= T.dim_h[i][d]) break;
                }
            }
        }
    }
    return T;
}

Form cartier_inverse(const Form& tw, FormRingPtr base) {
    const FormRingPtr& twr = tw.ring();
    if (twr->poly->twist_level != base->poly->twist_level + 1 || twr->cls != base->cls ||
        twr->poly->vars != base->poly->vars)
        throw err("NotOnTwist", "input form does not live on the Frobenius twist of the base");
    long long p = base->poly->mod->p;
    Form out(base, tw.degree());
    for (const auto& [wed, c] : tw.comps()) {
        Poly pc = relative_frobenius(c, base->poly);
        for (int j : wed)
            if (base->cls[j] == VarClass::Polynomial) {
                Poly y = Poly::variable(base->poly, base->poly->vars[j]);
                pc = pc * y.pow(p - 1);
            }
        if (!pc.is_zero()) out.add_comp(wed, pc);
    }
    return out;
}

CartierReport verify_cartier(const FormRingPtr& base, long long D) {
    long long p = base->poly->mod->p;
    CartierReport rep;
    FormRingPtr twr = make_form_ring(twist_ring(base->poly), base->cls);
    int maxi = base->max_form_degree();

    auto run = [&](long long window) {
        std::vector<CartierReport::Row> rows;
        CohomologyTable T = cohomology(base, maxi, window);
        for (int i = 0; i <= maxi; ++i) {
            long long Dp = (window - i) / p;
            if (Dp < 0) Dp = -1;
            long long hw = p * Dp + i;
            long long twist_dim = 0;
            long long h_dim = 0;
            for (long long d = 0; d <= Dp; ++d)
                twist_dim += static_cast<long long>(form_basis(twr, i, d).elems.size());
            for (long long d = 0; d <= hw && d <= window; ++d) h_dim += T.dim_h[i][d];

            /* rank of images of the twist basis inside H^i(deg <= hw): stack
             * boundaries and images per degree slice */
            long long image_rank = 0;
            for (long long d = 0; d <= Dp; ++d) {
                FormBasis tb = form_basis(twr, i, d);
                if (tb.elems.empty()) continue;
                long long target_d = p * d + i - i;  /* monomial degree scales by p, dy adds p-1+1 per factor */
                /* the image of a twist form of total degree d has total degree p*d */
                target_d = p * d;
                FormBasis bb = form_basis(base, i, target_d);
                FormBasis bb1 = form_basis(base, i + 1, target_d);
                FormBasis bprev = form_basis(base, i - 1 >= 0 ? i - 1 : 0, target_d);
                GFpMat bnd(p, 0, static_cast<int>(bb.elems.size()));
                if (i >= 1) {
                    GFpMat Mprev = diff_matrix(base, i - 1, target_d, bprev, bb);
                    for (int c = 0; c < Mprev.cols; ++c) {
                        std::vector<long long> col(Mprev.rows);
                        for (int rr = 0; rr < Mprev.rows; ++rr) col[rr] = Mprev.a[rr][c];
                        bnd.a.push_back(std::move(col));
                        bnd.rows += 1;
                    }
                }
                int rank_bnd = gfp_rank(bnd);
                GFpMat all = bnd;
                for (const auto& el : tb.elems) {
                    Form w(twr, i);
                    Poly c(twr->poly);
                    c.add_term(el.second, Zmod::one(twr->poly->mod));
                    w.add_comp(el.first, c);
                    Form img = cartier_inverse(w, base);
                    if (!de_rham_differential(img).is_zero())
                        throw err("NotOnTwist", "Cartier image fails to be a cocycle");
                    all.a.push_back(form_to_vec(img, bb, target_d));
                    all.rows += 1;
                }
                image_rank += gfp_rank(all) - rank_bnd;
                (void)bb1;
            }
            bool ok = (twist_dim == h_dim) && (image_rank == twist_dim);
            rows.push_back({i, twist_dim, h_dim, image_rank, ok});
        }
        return rows;
    };

    rep.rows = run(D);
    auto rows2 = run(D + p);
    for (const auto& r0 : rep.rows) {
        rep.pass = rep.pass && r0.ok;
        for (const auto& r2 : rows2)
            if (r2.i == r0.i) {
                /* windows grow with D; dims for the shared smaller window must
                 * agree, which they do by degreewise exactness. Compare the
                 * degreewise H dims directly. */
                (void)r2;
            }
    }
    /* truncation stability: degreewise H dims at D and D+p agree on shared degrees */
    CohomologyTable TA = cohomology(base, maxi, D);
    CohomologyTable TB = cohomology(base, maxi, D + p);
    for (int i = 0; i <= maxi; ++i)
        for (long long d = 0; d <= D; ++d)
            if (TA.dim_h[i][d] != TB.dim_h[i][d]) rep.truncation_unstable = true;
    return rep;
}

}  // namespace crysp
