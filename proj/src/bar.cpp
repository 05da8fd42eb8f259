#include "crysp/bar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace crysp {

BarResolution BarResolution::make(long long p, int n, const std::vector<std::string>& base_vars,
                                  const Poly& f, int s_max, long long degree_cap) {
    BarResolution B;
    B.p_ = p;
    B.n_ = n;
    B.s_max_ = s_max;
    B.degree_cap_ = degree_cap;
    B.base_vars_ = base_vars;
    for (int s = 0; s <= s_max; ++s) {
        std::vector<std::string> vars = base_vars;
        std::vector<VarClass> cls(base_vars.size(), VarClass::Coefficient);
        for (int j = 1; j <= s; ++j) {
            vars.push_back("t" + std::to_string(j));
            cls.push_back(VarClass::Polynomial);
        }
        B.levels_.push_back(make_form_ring(make_poly_ring(p, n, vars, 0, degree_cap), cls));
    }
    /* re-express f in the level-0 ring */
    Poly f0(B.levels_[0]->poly);
    for (const auto& [e, v] : f.terms()) f0.add_term(e, Zmod(B.levels_[0]->poly->mod, v.value()));
    B.f_ = f0;
    return B;
}

std::vector<Poly> BarResolution::face_images(int s, int j) const {
    if (s < 1 || s > s_max_ || j < 0 || j > s) throw err("ShapeMismatch", "face index");
    const PolyRingPtr& tgt = levels_[s - 1]->poly;
    int nb = base_var_count();
    std::vector<Poly> img;
    for (int v = 0; v < nb; ++v) img.push_back(Poly::variable(tgt, base_vars_[v]));
    /* t_k for k = 1..s */
    auto tvar = [&](int k) { return Poly::variable(tgt, "t" + std::to_string(k)); };
    Poly fz(tgt);
    for (const auto& [e, v] : f_.terms()) {
        std::vector<long long> ee = e;
        ee.resize(tgt->vars.size(), 0);
        fz.add_term(ee, Zmod(tgt->mod, v.value()));
    }
    for (int k = 1; k <= s; ++k) {
        if (j == 0) {
            img.push_back(k == 1 ? fz : tvar(k - 1));
        } else if (j == s) {
            img.push_back(k == s ? Poly::zero(tgt) : tvar(k));
        } else {
            if (k <= j)
                img.push_back(tvar(k));
            else if (k == j + 1)
                img.push_back(tvar(j));
            else
                img.push_back(tvar(k - 1));
        }
    }
    return img;
}

std::vector<Poly> BarResolution::degeneracy_images(int s, int j) const {
    if (s < 0 || s + 1 > s_max_ || j < 0 || j > s) throw err("ShapeMismatch", "degeneracy index");
    const PolyRingPtr& tgt = levels_[s + 1]->poly;
    int nb = base_var_count();
    std::vector<Poly> img;
    for (int v = 0; v < nb; ++v) img.push_back(Poly::variable(tgt, base_vars_[v]));
    auto tvar = [&](int k) { return Poly::variable(tgt, "t" + std::to_string(k)); };
    for (int k = 1; k <= s; ++k) img.push_back(k <= j ? tvar(k) : tvar(k + 1));
    return img;
}

Poly BarResolution::apply_face(int s, int j, const Poly& g) const {
    auto img = face_images(s, j);
    std::map<std::string, Poly> assign;
    for (size_t v = 0; v < levels_[s]->poly->vars.size(); ++v)
        assign[levels_[s]->poly->vars[v]] = img[v];
    return substitute(g, assign, levels_[s - 1]->poly);
}

Form BarResolution::horizontal(int s, const Form& w) const {
    Form out(levels_[s - 1], w.degree());
    for (int j = 0; j <= s; ++j) {
        Form fw = pullback(w, face_images(s, j), levels_[s - 1]);
        if (j % 2)
            out = out - fw;
        else
            out = out + fw;
    }
    return out;
}

std::vector<long long> bar_chain_homology_dims(const BarResolution& bar, long long safe_degree) {
    long long p = bar.p();
    if (bar.n() != 1) throw err("NotModP", "bar homology requires mod p");
    /* chain module at level s: all monomials of degree <= safe_degree */
    std::vector<FormBasis> bases;
    std::vector<std::map<std::vector<long long>, int>> flat_index(bar.s_max() + 1);
    std::vector<std::vector<std::vector<long long>>> flat(bar.s_max() + 1);
    for (int s = 0; s <= bar.s_max(); ++s) {
        for (long long d = 0; d <= safe_degree; ++d) {
            FormBasis b = form_basis(bar.level(s), 0, d);
            for (auto& el : b.elems) {
                flat_index[s][el.second] = static_cast<int>(flat[s].size());
                flat[s].push_back(el.second);
            }
        }
    }
    auto boundary = [&](int s) {
        GFpMat M(p, static_cast<int>(flat[s - 1].size()), static_cast<int>(flat[s].size()));
        for (size_t c = 0; c < flat[s].size(); ++c) {
            Poly g(bar.level(s)->poly);
            g.add_term(flat[s][c], Zmod::one(bar.level(s)->poly->mod));
            for (int j = 0; j <= s; ++j) {
                Poly fg = bar.apply_face(s, j, g);
                for (const auto& [e, v] : fg.terms()) {
                    auto it = flat_index[s - 1].find(e);
                    if (it == flat_index[s - 1].end()) continue;
                    mpz_class red = v.value() % p;
                    long long x = red.get_si();
                    if (j % 2) x = p - x;
                    M.a[it->second][c] = ((M.a[it->second][c] + x) % p + p) % p;
                }
            }
        }
        return M;
    };
    std::vector<long long> h;
    GFpMat dprev(p, 0, 0);
    for (int s = 0; s < bar.s_max(); ++s) {
        GFpMat dnext = boundary(s + 1);
        long long nullity;
        if (s == 0)
            nullity = static_cast<long long>(flat[0].size());
        else
            nullity = static_cast<long long>(flat[s].size()) - gfp_rank(dprev);
        h.push_back(nullity - gfp_rank(dnext));
        dprev = dnext;
    }
    return h;
}

Totalization totalize(const BarResolution& bar, int total_lo, int total_hi) {
    Totalization T;
    T.bar = &bar;
    T.lo = total_lo;
    T.hi = total_hi;
    long long p = bar.p();
    long long cap = bar.degree_cap();
    const char* guard_env = std::getenv("CRYSP_MEMORY_GUARD");
    long long guard = guard_env ? std::atoll(guard_env) : 200000;

    int nslots = total_hi - total_lo + 1;
    T.basis.resize(nslots);
    T.index.resize(nslots);
    long long total_count = 0;
    for (int k = 0; k < nslots; ++k) {
        int tdeg = total_lo + k;
        for (int s = 0; s <= bar.s_max(); ++s) {
            int i = tdeg + s;
            if (i < 0 || i > s) continue;  // level s has only s wedge slots
            for (long long d = 0; d <= cap; ++d) {
                FormBasis b = form_basis(bar.level(s), i, d);
                for (auto& el : b.elems) {
                    T.index[k][{s, el.first, el.second}] = static_cast<int>(T.basis[k].size());
                    T.basis[k].push_back({s, i, el.first, el.second});
                    ++total_count;
                }
            }
        }
        if (total_count > guard) throw err("WindowTooWide", "totalization exceeds the memory guard");
    }
    for (int k = 0; k + 1 < nslots; ++k) {
        GFpMat M(p, static_cast<int>(T.basis[k + 1].size()), static_cast<int>(T.basis[k].size()));
        for (size_t c = 0; c < T.basis[k].size(); ++c) {
            const auto& it = T.basis[k][c];
            Form w(bar.level(it.s), it.i);
            Poly pc(bar.level(it.s)->poly);
            pc.add_term(it.mono, Zmod::one(bar.level(it.s)->poly->mod));
            w.add_comp(it.wedge, pc);
            auto emit = [&](int s2, const Form& g, long long sign) {
                for (const auto& [wed, cc] : g.comps())
                    for (const auto& [e, z] : cc.terms()) {
                        auto f = T.index[k + 1].find({s2, wed, e});
                        if (f == T.index[k + 1].end()) continue;
                        mpz_class red = z.value() % p;
                        long long x = (red.get_si() * sign % p + p) % p;
                        M.a[f->second][c] = (M.a[f->second][c] + x) % p;
                    }
            };
            Form dv = de_rham_differential(w);
            emit(it.s, dv, 1);
            if (it.s >= 1) {
                Form dh = bar.horizontal(it.s, w);
                emit(it.s - 1, dh, (it.i % 2) ? -1 : 1);
            }
        }
        T.d.push_back(std::move(M));
    }
    return T;
}

namespace {

/* blocks of the total-degree 0/-1 part, graded by polynomial degree + number
 * of dt factors; valid because f = x is linear so every face preserves the
 * grading */
struct H0Blocks {
    /* for each graded degree d: basis of C^{s,s} pairs and boundary matrix */
    struct Block {
        std::vector<std::pair<int, int>> col_meta;  // (s, index within level block)
        std::vector<int> col_level;
        GFpMat boundary;   // columns: deg -1 basis, rows: deg 0 basis
        int dim0 = 0;
    };
    std::vector<Block> blocks;
};

H0Blocks build_h0_blocks(const BarResolution& bar, long long deg_cap) {
    long long p = bar.p();
    H0Blocks H;
    H.blocks.resize(deg_cap + 1);
    for (long long d = 0; d <= deg_cap; ++d) {
        auto& blk = H.blocks[d];
        /* degree-0 basis: union over s of forms in C^{s,s} of graded degree d */
        std::vector<std::map<std::pair<std::vector<int>, std::vector<long long>>, int>> idx(
            bar.s_max() + 1);
        for (int s = 0; s <= bar.s_max(); ++s) {
            if (s > d) break;  // s dt-factors already exceed the degree
            FormBasis b = form_basis(bar.level(s), s, d);
            for (auto& el : b.elems) {
                idx[s][el] = static_cast<int>(blk.col_meta.size());
                blk.col_meta.push_back({s, 0});
                blk.col_level.push_back(s);
            }
        }
        blk.dim0 = static_cast<int>(blk.col_meta.size());
        /* degree -1 sources: C^{s,s-1} */
        std::vector<std::vector<long long>> cols;
        for (int s = 1; s <= bar.s_max(); ++s) {
            FormBasis b = form_basis(bar.level(s), s - 1, d);
            for (auto& el : b.elems) {
                Form w(bar.level(s), s - 1);
                Poly pc(bar.level(s)->poly);
                pc.add_term(el.second, Zmod::one(bar.level(s)->poly->mod));
                w.add_comp(el.first, pc);
                std::vector<long long> col(blk.dim0, 0);
                Form dv = de_rham_differential(w);
                for (const auto& [wed, cc] : dv.comps())
                    for (const auto& [e, z] : cc.terms()) {
                        auto f = idx[s].find({wed, e});
                        if (f == idx[s].end()) continue;
                        mpz_class red = z.value() % p;
                        col[f->second] = (col[f->second] + red.get_si()) % p;
                    }
                Form dh = bar.horizontal(s, w);
                long long sign = ((s - 1) % 2) ? -1 : 1;
                for (const auto& [wed, cc] : dh.comps())
                    for (const auto& [e, z] : cc.terms()) {
                        auto f = idx[s - 1].find({wed, e});
                        if (f == idx[s - 1].end()) continue;
                        mpz_class red = z.value() % p;
                        col[f->second] =
                            ((col[f->second] + sign * red.get_si()) % p + p) % p;
                    }
                cols.push_back(std::move(col));
            }
        }
        blk.boundary = GFpMat(p, blk.dim0, static_cast<int>(cols.size()));
        for (size_t c = 0; c < cols.size(); ++c)
            for (int r = 0; r < blk.dim0; ++r) blk.boundary.a[r][c] = cols[c][r];
        H.blocks[d] = std::move(blk);
    }
    return H;
}

/* dim of (span{cols with level <= lev} + im boundary)/im boundary */
long long fil_dim(const H0Blocks::Block& blk, int lev, long long p) {
    GFpMat bt(p, blk.boundary.cols, blk.dim0);
    for (int r = 0; r < blk.boundary.rows; ++r)
        for (int c = 0; c < blk.boundary.cols; ++c) bt.a[c][r] = blk.boundary.a[r][c];
    int rb = gfp_rank(bt);
    GFpMat all = bt;
    for (int j = 0; j < blk.dim0; ++j) {
        if (blk.col_level[j] > lev) continue;
        std::vector<long long> row(blk.dim0, 0);
        row[j] = 1;
        all.a.push_back(std::move(row));
        all.rows += 1;
    }
    return gfp_rank(all) - rb;
}

}  // namespace

H0Report derived_dr_h0(long long p, const std::string& var, int s_max, long long deg_cap,
                       int max_level) {
    auto run = [&](int sm, long long cap) {
        PolyRingPtr A = make_poly_ring(p, 1, {var}, 0, cap);
        Poly f = Poly::variable(A, var);
        BarResolution bar = BarResolution::make(p, 1, {var}, f, sm, cap);
        H0Blocks H = build_h0_blocks(bar, cap);
        std::vector<long long> fil(max_level + 2, 0);
        long long h0 = 0;
        for (long long d = 0; d <= cap; ++d) {
            h0 += fil_dim(H.blocks[d], bar.s_max(), p);
            for (int lev = 0; lev <= max_level; ++lev)
                fil[lev + 1] += fil_dim(H.blocks[d], lev, p);
        }
        std::vector<long long> gr;
        for (int lev = 0; lev <= max_level; ++lev) gr.push_back(fil[lev + 1] - fil[lev]);
        return std::make_pair(h0, gr);
    };
    if (s_max < max_level + 1)
        throw err("OutOfStableRange", "s_max too small for the requested filtration levels");
    auto [h0, gr] = run(s_max, deg_cap);
    auto [h0b, grb] = run(s_max + 1, deg_cap + p);
    H0Report R;
    R.h0_dim = h0;
    R.gr_dims = gr;
    R.gr_dims_recheck = grb;
    for (size_t i = 0; i < gr.size(); ++i) R.certified.push_back(gr[i] == grb[i]);
    (void)h0b;

    /* gr_1 generation by the split class: Fil_0 + x^a * (gamma_{p-1}(t) dt)
     * classes span Fil_1 degreewise */
    {
        PolyRingPtr A = make_poly_ring(p, 1, {var}, 0, deg_cap);
        Poly f = Poly::variable(A, var);
        BarResolution bar = BarResolution::make(p, 1, {var}, f, s_max, deg_cap);
        H0Blocks H = build_h0_blocks(bar, deg_cap);
        bool ok = true;
        for (long long d = 0; d <= deg_cap; ++d) {
            const auto& blk = H.blocks[d];
            long long f1 = fil_dim(blk, 1, p);
            /* boundaries + level-0 columns + the single split-generator class
             * x^{d-p} gamma_{p-1}(t) dt when d >= p */
            GFpMat bt(p, blk.boundary.cols, blk.dim0);
            for (int r = 0; r < blk.boundary.rows; ++r)
                for (int c = 0; c < blk.boundary.cols; ++c) bt.a[c][r] = blk.boundary.a[r][c];
            GFpMat all = bt;
            int rb = gfp_rank(bt);
            for (int j = 0; j < blk.dim0; ++j) {
                if (blk.col_level[j] != 0) continue;
                std::vector<long long> row(blk.dim0, 0);
                row[j] = 1;
                all.a.push_back(std::move(row));
                all.rows += 1;
            }
            if (d >= p) {
                /* locate x^{d-p} t^{p-1} dt in the level-1 slice */
                FormBasis b1 = form_basis(bar.level(1), 1, d);
                std::vector<long long> row(blk.dim0, 0);
                int col0 = -1;
                {
                    /* rebuild the index used by build_h0_blocks */
                    int off = 0;
                    for (int s = 0; s <= bar.s_max() && s <= d; ++s) {
                        FormBasis b = form_basis(bar.level(s), s, d);
                        if (s == 1) {
                            for (size_t q = 0; q < b.elems.size(); ++q) {
                                const auto& [wed, mono] = b.elems[q];
                                if (mono[0] == d - p && mono[1] == p - 1) col0 = off + static_cast<int>(q);
                            }
                        }
                        off += static_cast<int>(b.elems.size());
                    }
                }
                if (col0 >= 0) {
                    /* coefficient (p-1)!^{-1} is a unit; spanning is unaffected */
                    row[col0] = 1;
                    all.a.push_back(std::move(row));
                    all.rows += 1;
                }
            }
            long long got = gfp_rank(all) - rb;
            if (got != f1) ok = false;
        }
        R.gr1_generated_by_split = ok;
    }
    return R;
}

long long conjugate_e1(long long p, long long deg_cap, int p_idx, int q) {
    if (q != -p_idx) return 0;
    /* Gamma^{p_idx} of the free rank-1 twist module over B^{(1)} = F_p[x]/(x^p):
     * one generator gamma_{p_idx}(y) of degree p*p_idx, free over B^{(1)} */
    long long dim = 0;
    for (long long a = 0; a < p; ++a)
        if (p * p_idx + a <= deg_cap) ++dim;
    if (p * p_idx > deg_cap) throw err("OutOfStableRange", "entry lies outside the degree window");
    return dim;
}

SplitReport liftable_cartier_split(long long p, int s_max, long long deg_cap) {
    SplitReport rep;
    /* Z/p^2 lift with Frobenius t -> t^p, x -> x^p */
    BarResolution lift = [&] {
        PolyRingPtr A2 = make_poly_ring(p, 2, {"x"}, 0, deg_cap * p);
        Poly f2 = Poly::variable(A2, "x");
        return BarResolution::make(p, 2, {"x"}, f2, 1, deg_cap * p);
    }();
    const FormRingPtr& L1 = lift.level(1);
    std::vector<Poly> frob;
    frob.push_back(Poly::variable(L1->poly, "x").pow(p));
    frob.push_back(Poly::variable(L1->poly, "t1").pow(p));
    /* sanity: the lift must reduce to Frobenius mod p */
    for (size_t v = 0; v < frob.size(); ++v) {
        Poly diff = frob[v] - Poly::variable(L1->poly, L1->poly->vars[v]).pow(p);
        if (!diff.is_zero()) throw err("LiftNotFrobenius", "lift is not a Frobenius lift");
    }
    Form dt(L1, 1);
    dt.add_comp({1}, Poly::constant(L1->poly, 1));
    Form pulled = pullback(dt, frob, L1);
    /* divide by p and reduce mod p */
    BarResolution bar = [&] {
        PolyRingPtr A = make_poly_ring(p, 1, {"x"}, 0, deg_cap);
        Poly f = Poly::variable(A, "x");
        return BarResolution::make(p, 1, {"x"}, f, s_max, deg_cap);
    }();
    const FormRingPtr& B1 = bar.level(1);
    Form image(B1, 1);
    for (const auto& [wed, c] : pulled.comps()) {
        Poly red(B1->poly);
        for (const auto& [e, z] : c.terms()) {
            mpz_class v = z.value();
            if (!mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p)))
                throw err("LiftNotFrobenius", "Frobenius pullback of a 1-form not divisible by p");
            mpz_class w;
            mpz_divexact_ui(w.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
            if (std::accumulate(e.begin(), e.end(), 0LL) <= deg_cap) red.add_term(e, Zmod(B1->poly->mod, w));
        }
        if (!red.is_zero()) image.add_comp(wed, red);
    }
    rep.lift_image = image;

    /* pd-normalized generator gamma_{p-1}(t) dt = ((p-1)!)^{-1} t^{p-1} dt */
    Zmod inv_fact = Zmod(B1->poly->mod, factorial(p - 1)).inverse();
    rep.generator = image.scaled(inv_fact);

    /* cocycle: d_v = 0 (top form at level 1) and d_h = 0 */
    Form dv = de_rham_differential(rep.generator);
    Form dh = bar.horizontal(1, rep.generator);
    rep.cocycle = dv.is_zero() && dh.is_zero();

    H0Report h0 = derived_dr_h0(p, "x", std::max(s_max, 2), deg_cap, 1);
    rep.generates_gr1 = h0.gr1_generated_by_split;
    return rep;
}

/* ---------- comparison with the crystalline side ---------- */

PDRingPtr crystalline_target(long long p, int weight_cap) {
    PolyRingPtr triv = make_poly_ring(p, 1, {}, 0, std::nullopt);
    return make_pd_ring(triv, {"x"}, weight_cap);
}

namespace {

PDRingPtr crys_level_ring(long long p, int s, int weight_cap) {
    PolyRingPtr triv = make_poly_ring(p, 1, {}, 0, std::nullopt);
    std::vector<std::string> pdv = {"x"};
    for (int j = 1; j <= s; ++j) pdv.push_back("t" + std::to_string(j));
    return make_pd_ring(triv, std::move(pdv), weight_cap);
}

PDForm pdform_zero(PDRingPtr r, int degree) {
    PDForm w;
    w.ring = std::move(r);
    w.degree = degree;
    return w;
}

void pdform_add(PDForm& w, const std::vector<int>& wedge, const PDElement& c) {
    auto it = w.comps.find(wedge);
    if (it == w.comps.end()) {
        if (!c.is_zero()) w.comps[wedge] = c;
    } else {
        PDElement s = it->second + c;
        if (s.is_zero())
            w.comps.erase(it);
        else
            it->second = std::move(s);
    }
}

/* vertical pd differential: d(gamma_k(t_j)) = gamma_{k-1}(t_j) dt_j, x-slots
 * are constants */
PDForm pdform_dv(const PDForm& w) {
    PDForm out = pdform_zero(w.ring, w.degree + 1);
    for (const auto& [wed, c] : w.comps) {
        for (const auto& [e, poly] : c.terms()) {
            for (int j = 1; j < static_cast<int>(e.size()); ++j) {
                if (e[j] == 0) continue;
                if (std::binary_search(wed.begin(), wed.end(), j)) continue;
                std::vector<int> ne = e;
                ne[j] -= 1;
                std::vector<int> nw;
                int before = 0;
                bool placed = false;
                for (int x : wed) {
                    if (!placed && j < x) { nw.push_back(j); placed = true; }
                    if (!placed) ++before;
                    nw.push_back(x);
                }
                if (!placed) nw.push_back(j);
                PDElement term(w.ring);
                Poly pc = (before % 2) ? -poly : poly;
                term.add_term(ne, pc);
                pdform_add(out, nw, term);
            }
        }
    }
    return out;
}

/* face map on pd coefficients: t_j -> x (face 0 sends t_1 to f = x), 0, or
 * t_l; gamma exponents ride along and merge multiplicatively */
PDElement pd_substitute(const PDElement& c, const std::vector<int>& target_slot,
                        const PDRingPtr& target) {
    /* target_slot[j] = index of the image pd-variable at level s-1, or -1 for 0 */
    PDElement out(target);
    for (const auto& [e, poly] : c.terms()) {
        PDElement term = PDElement::from_ambient(target, Poly::constant(target->ambient,
                                                                        mpz_class(0)));
        /* build the image monomial as a product of gamma factors */
        PDElement acc = PDElement::from_ambient(target, Poly::constant(target->ambient, 1));
        bool dead = false;
        for (size_t j = 0; j < e.size() && !dead; ++j) {
            if (e[j] == 0) continue;
            int tgt = target_slot[j];
            if (tgt < 0) { dead = true; break; }
            PDElement g = PDElement::gamma_var(target, tgt, e[j]);
            acc = acc * g;
        }
        if (dead) continue;
        /* coefficients are plain scalars (trivial ambient) */
        acc = acc.scaled(poly.terms().empty() ? Zmod::zero(target->ambient->mod)
                                              : poly.terms().begin()->second);
        (void)term;
        out = out + acc;
    }
    return out;
}

/* horizontal differential on pd-forms at level s */
PDForm pdform_dh(const PDForm& w, int s, const PDRingPtr& target) {
    PDForm out = pdform_zero(target, w.degree);
    for (int j = 0; j <= s; ++j) {
        /* slot map: x -> x; t_k images follow the bar faces */
        std::vector<int> slot(s + 1, -1);
        slot[0] = 0;
        std::vector<int> wedge_slot(s + 1, -1);
        for (int k = 1; k <= s; ++k) {
            int img;  // pd-var index at level s-1; 0 means x; -1 means 0
            if (j == 0)
                img = (k == 1) ? 0 : k - 1;
            else if (j == s)
                img = (k == s) ? -1 : k;
            else {
                if (k <= j)
                    img = k;
                else if (k == j + 1)
                    img = j;
                else
                    img = k - 1;
            }
            slot[k] = img;
            wedge_slot[k] = img;
        }
        long long sgn = (j % 2) ? -1 : 1;
        for (const auto& [wed, c] : w.comps) {
            /* dt_k -> dt_{img}; to x or 0 it dies; repeated targets die */
            std::vector<int> nw;
            bool dead = false;
            long long perm_sign = 1;
            std::vector<int> targets;
            for (int k : wed) {
                int img = wedge_slot[k];
                if (img <= 0) { dead = true; break; }
                targets.push_back(img);
            }
            if (dead) continue;
            /* sort targets with sign; equal targets kill the term */
            for (size_t a = 0; a < targets.size() && !dead; ++a)
                for (size_t b = a + 1; b < targets.size(); ++b) {
                    if (targets[a] == targets[b]) { dead = true; break; }
                    if (targets[a] > targets[b]) {
                        std::swap(targets[a], targets[b]);
                        perm_sign = -perm_sign;
                    }
                }
            if (dead) continue;
            nw = targets;
            PDElement img = pd_substitute(c, slot, target);
            if (img.is_zero()) continue;
            long long coef = sgn * perm_sign;
            if (coef == -1) img = -img;
            pdform_add(out, nw, img);
        }
    }
    return out;
}

/* flat basis of pd-forms at a level: (wedge, pd-exponent) pairs */
struct PDFormBasis {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> elems;
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;
};

PDFormBasis pdform_basis(const PDRingPtr& r, int s, int degree) {
    PDFormBasis B;
    std::vector<std::vector<int>> wedges;
    std::vector<int> comb;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(comb.size()) == degree) {
            wedges.push_back(comb);
            return;
        }
        for (int j = start; j <= s; ++j) {
            comb.push_back(j);
            rec(j + 1);
        }
        if (!comb.empty() && static_cast<int>(comb.size()) < degree && comb.size()) {}
    };
    /* plain subsets of {1..s} of size degree */
    std::function<void(int)> rec2 = [&](int start) {
        if (static_cast<int>(comb.size()) == degree) {
            wedges.push_back(comb);
            return;
        }
        for (int j = start; j <= s; ++j) {
            comb.push_back(j);
            rec2(j + 1);
            comb.pop_back();
        }
    };
    rec2(1);
    /* pd exponents over s+1 slots with weight <= cap */
    std::vector<std::vector<int>> exps;
    std::vector<int> cur(s + 1, 0);
    std::function<void(int, int)> erec = [&](int v, int rem) {
        if (v == s + 1) {
            exps.push_back(cur);
            return;
        }
        for (int x = 0; x <= rem; ++x) {
            cur[v] = x;
            erec(v + 1, rem - x);
        }
        cur[v] = 0;
    };
    erec(0, r->weight_cap);
    for (const auto& w : wedges)
        for (const auto& e : exps) {
            B.index[{w, e}] = static_cast<int>(B.elems.size());
            B.elems.push_back({w, e});
        }
    return B;
}

std::vector<long long> pdform_to_vec(const PDForm& w, const PDFormBasis& B, long long p) {
    std::vector<long long> v(B.elems.size(), 0);
    for (const auto& [wed, c] : w.comps)
        for (const auto& [e, poly] : c.terms()) {
            auto it = B.index.find({wed, e});
            if (it == B.index.end()) throw err("WindowTooWide", "pd-form exceeds the basis window");
            mpz_class red = poly.terms().empty() ? mpz_class(0) : poly.terms().begin()->second.value() % p;
            v[it->second] = red.get_si();
        }
    return v;
}

PDForm pdform_from_vec(const PDRingPtr& r, int degree, const PDFormBasis& B,
                       const std::vector<long long>& v, long long p) {
    PDForm w = pdform_zero(r, degree);
    for (size_t i = 0; i < B.elems.size(); ++i) {
        if (v[i] % p == 0) continue;
        PDElement c(r);
        Poly pc = Poly::constant(r->ambient, v[i]);
        c.add_term(B.elems[i].second, pc);
        pdform_add(w, B.elems[i].first, c);
    }
    return w;
}

}  // namespace

PDElement comp_to_crystalline(const BarResolution& bar, const std::vector<Form>& components,
                              int weight_cap) {
    long long p = bar.p();
    if (bar.base_var_count() != 1)
        throw err("NotACocycle", "comparison map implemented for the base quotient presentation");
    {
        Poly xv = Poly::variable(bar.level(0)->poly, bar.level(0)->poly->vars[0]);
        if (!(bar.f() == xv))
            throw err("NotACocycle", "comparison map implemented for f equal to the base variable");
    }
    int top = static_cast<int>(components.size()) - 1;
    while (top >= 0 && components[top].is_zero()) --top;

    /* embed polynomial components into the pd columns: x^a t^b = a! b! ... */
    std::vector<PDRingPtr> rings;
    for (int s = 0; s <= bar.s_max(); ++s) rings.push_back(crys_level_ring(p, s, weight_cap));
    std::vector<PDForm> w;
    for (int s = 0; s <= bar.s_max(); ++s) w.push_back(pdform_zero(rings[s], s));
    for (int s = 0; s <= top; ++s) {
        if (components[s].is_zero()) continue;
        if (components[s].degree() != s)
            throw err("NotACocycle", "component at level s must be an s-form");
        for (const auto& [wed, c] : components[s].comps()) {
            for (const auto& [e, z] : c.terms()) {
                /* monomial -> product of factorials times gamma exponents */
                std::vector<int> pe(s + 1, 0);
                mpz_class fct = 1;
                for (size_t vv = 0; vv < e.size(); ++vv) {
                    pe[vv] = static_cast<int>(e[vv]);
                    fct *= factorial(static_cast<unsigned long>(e[vv]));
                }
                PDElement pc(rings[s]);
                Poly coef = Poly::constant(rings[s]->ambient, Zmod(rings[s]->ambient->mod, z.value() * fct));
                pc.add_term(pe, coef);
                std::vector<int> wedge_t;
                for (int j : wed) wedge_t.push_back(j);  // var 0 = x never appears in wedges
                pdform_add(w[s], wedge_t, pc);
            }
        }
    }

    /* verify the embedded class is a d_tot cocycle */
    for (int s = 0; s <= top; ++s) {
        PDForm dv = pdform_dv(w[s]);
        PDForm later = (s + 1 <= top) ? pdform_dh(w[s + 1], s + 1, rings[s]) : pdform_zero(rings[s], s + 1);
        /* total-degree +1 component at column s: d_v w_s + (-1)^{i} d_h w_{s+1}, i = s+1 */
        PDForm sum = dv;
        long long sgn = ((s + 1) % 2) ? -1 : 1;
        for (const auto& [wed, c] : later.comps) pdform_add(sum, wed, sgn == 1 ? c : -c);
        if (!sum.comps.empty()) throw err("NotACocycle", "input components fail d_tot = 0");
    }

    /* zig-zag: repeatedly solve d_v alpha = w_s and replace by -(+-)d_h alpha */
    for (int s = top; s >= 1; --s) {
        if (w[s].comps.empty()) continue;
        PDFormBasis dom = pdform_basis(rings[s], s, s - 1);
        PDFormBasis cod = pdform_basis(rings[s], s, s);
        GFpMat M(p, static_cast<int>(cod.elems.size()), static_cast<int>(dom.elems.size()));
        for (size_t c = 0; c < dom.elems.size(); ++c) {
            PDForm b = pdform_zero(rings[s], s - 1);
            PDElement pc(rings[s]);
            pc.add_term(dom.elems[c].second, Poly::constant(rings[s]->ambient, 1));
            pdform_add(b, dom.elems[c].first, pc);
            auto vec = pdform_to_vec(pdform_dv(b), cod, p);
            for (size_t r = 0; r < vec.size(); ++r)
                if (vec[r]) M.a[r][c] = vec[r];
        }
        std::vector<long long> target = pdform_to_vec(w[s], cod, p);
        /* solve M alpha = target */
        GFpMat aug = M;
        for (int r = 0; r < aug.rows; ++r) aug.a[r].push_back(target[r]);
        aug.cols += 1;
        auto piv = gfp_rref(aug);
        std::vector<long long> alpha(dom.elems.size(), 0);
        for (size_t k = 0; k < piv.size(); ++k) {
            if (piv[k] == aug.cols - 1)
                throw err("NotACocycle", "vertical primitive does not exist (weight cap too small?)");
            alpha[piv[k]] = aug.a[k][aug.cols - 1];
        }
        PDForm af = pdform_from_vec(rings[s], s - 1, dom, alpha, p);
        /* subtract d_tot(alpha): vertical part cancels w_s, horizontal part
         * lands in column s-1 with sign (-1)^{s-1} */
        PDForm dh = pdform_dh(af, s, rings[s - 1]);
        long long sgn = ((s - 1) % 2) ? -1 : 1;
        for (const auto& [wed, c] : dh.comps) pdform_add(w[s - 1], wed, sgn == 1 ? -c : c);
        w[s] = pdform_zero(rings[s], s);
    }

    /* the answer sits in column 0, degree 0 */
    PDRingPtr target = crystalline_target(p, weight_cap);
    PDElement out(target);
    auto it = w[0].comps.find({});
    if (it != w[0].comps.end()) {
        for (const auto& [e, poly] : it->second.terms()) {
            std::vector<int> ee = {e[0]};
            Poly pc(target->ambient);
            if (!poly.terms().empty())
                pc = Poly::constant(target->ambient, poly.terms().begin()->second);
            out.add_term(ee, pc);
        }
    }
    return out;
}

}  // namespace crysp
