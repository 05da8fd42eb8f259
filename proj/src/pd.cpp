#include "crysp/pd.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace crysp {

PDRingPtr make_pd_ring(PolyRingPtr ambient, std::vector<std::string> pd_vars, int weight_cap) {
    auto r = std::make_shared<PDRing>();
    r->ambient = std::move(ambient);
    r->pd_vars = std::move(pd_vars);
    r->weight_cap = weight_cap;
    return r;
}

PDElement PDElement::from_ambient(PDRingPtr r, const Poly& c) {
    PDElement x(r);
    if (!c.is_zero()) x.terms_[std::vector<int>(r->pd_vars.size(), 0)] = c;
    return x;
}

PDElement PDElement::gamma_var(PDRingPtr r, int var, int k) {
    PDElement x(r);
    if (k < 0) throw err("BadGammaIndex", "gamma index must be >= 0");
    std::vector<int> e(r->pd_vars.size(), 0);
    e[var] = k;
    if (k <= r->weight_cap)
        x.terms_[e] = Poly::constant(r->ambient, 1);
    else
        x.truncated_ = true;
    return x;
}

void PDElement::add_term(const std::vector<int>& pd_exps, const Poly& c) {
    if (pd_exps.size() != ring_->pd_vars.size()) throw err("ShapeMismatch", "pd exponent length");
    int w = std::accumulate(pd_exps.begin(), pd_exps.end(), 0);
    if (w > ring_->weight_cap) {
        if (!c.is_zero()) truncated_ = true;
        return;
    }
    auto it = terms_.find(pd_exps);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_[pd_exps] = c;
    } else {
        Poly s = it->second + c;
        if (s.is_zero())
            terms_.erase(it);
        else
            it->second = std::move(s);
    }
}

PDElement operator+(const PDElement& a, const PDElement& b) {
    if (!a.ring_->compatible(*b.ring_)) throw err("MixedParents", "pd elements of different rings");
    PDElement c = a;
    c.truncated_ = a.truncated_ || b.truncated_;
    for (const auto& [e, v] : b.terms_) c.add_term(e, v);
    return c;
}

PDElement PDElement::operator-() const {
    PDElement c = *this;
    for (auto& [e, v] : c.terms_) v = -v;
    return c;
}

PDElement operator-(const PDElement& a, const PDElement& b) { return a + (-b); }

PDElement operator*(const PDElement& a, const PDElement& b) {
    if (!a.ring_->compatible(*b.ring_)) throw err("MixedParents", "pd elements of different rings");
    PDElement c(a.ring_);
    c.truncated_ = a.truncated_ || b.truncated_;
    const ModulusPtr& mod = a.ring_->ambient->mod;
    for (const auto& [ea, va] : a.terms_)
        for (const auto& [eb, vb] : b.terms_) {
            std::vector<int> e(ea.size());
            mpz_class coef = 1;
            for (size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
                if (ea[i] && eb[i]) coef *= binomial(ea[i] + eb[i], ea[i]);
            }
            Poly v = (va * vb).scaled(Zmod(mod, coef));
            c.add_term(e, v);
        }
    return c;
}

bool operator==(const PDElement& a, const PDElement& b) {
    if (!a.ring_->compatible(*b.ring_)) return false;
    return a.terms_ == b.terms_;
}

PDElement PDElement::scaled(const Poly& c) const {
    PDElement r(ring_);
    r.truncated_ = truncated_;
    for (const auto& [e, v] : terms_) {
        Poly w = v * c;
        if (!w.is_zero()) r.terms_[e] = w;
    }
    return r;
}

PDElement PDElement::scaled(const Zmod& c) const {
    return scaled(Poly::constant(ring_->ambient, c));
}

PDElement PDElement::pow(int e) const {
    PDElement r = PDElement::from_ambient(ring_, Poly::constant(ring_->ambient, 1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

Poly PDElement::constant_part() const {
    std::vector<int> z(ring_->pd_vars.size(), 0);
    auto it = terms_.find(z);
    return it == terms_.end() ? Poly::zero(ring_->ambient) : it->second;
}

std::string PDElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, v] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.str() << ")";
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) os << "*g" << e[i] << "(" << ring_->pd_vars[i] << ")";
    }
    return os.str();
}

mpz_class gamma_composition_coeff(int k, int j) {
    /* (kj)! / (k! (j!)^k), an integer */
    mpz_class num = factorial(static_cast<unsigned long>(k) * j);
    mpz_class den = factorial(k);
    mpz_class jf = factorial(j);
    mpz_class jfk;
    mpz_pow_ui(jfk.get_mpz_t(), jf.get_mpz_t(), static_cast<unsigned long>(k));
    den *= jfk;
    return divexact(num, den);
}

namespace {

/* gamma_k of a single term c * prod_i gamma_{e_i}(x_i) with |e| >= 1 */
PDElement gamma_of_term(int k, const PDRingPtr& ring, const std::vector<int>& e, const Poly& c) {
    const ModulusPtr& mod = ring->ambient->mod;
    if (k == 0) return PDElement::from_ambient(ring, Poly::constant(ring->ambient, 1));
    /* first pd-variable with nonzero exponent plays the ideal slot; the rest
     * of the monomial is a ring element and scales by its k-th power */
    int slot = -1;
    for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) { slot = static_cast<int>(i); break; }
    if (slot < 0) throw err("NonzeroConstantTerm", "gamma of a weight-0 term");

    mpz_class coef = gamma_composition_coeff(k, e[slot]);
    std::vector<int> out(e.size(), 0);
    out[slot] = k * e[slot];
    for (size_t i = slot + 1; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        /* gamma_{e_i}(x_i)^k = ((k e_i)! / (e_i!)^k) gamma_{k e_i}(x_i) */
        mpz_class jf = factorial(e[i]);
        mpz_class jfk;
        mpz_pow_ui(jfk.get_mpz_t(), jf.get_mpz_t(), static_cast<unsigned long>(k));
        coef *= divexact(factorial(static_cast<unsigned long>(k) * e[i]), jfk);
        out[i] = k * e[i];
    }
    PDElement r(ring);
    r.add_term(out, c.pow(k).scaled(Zmod(mod, coef)));
    return r;
}

void compositions(int k, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(k);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int i = 0; i <= k; ++i) {
        cur.push_back(i);
        compositions(k - i, parts - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

PDElement gamma(int k, const PDElement& u) {
    if (k < 0) throw err("BadGammaIndex", "gamma index must be >= 0");
    const PDRingPtr& ring = u.ring();
    if (!u.constant_part().is_zero())
        throw err("NonzeroConstantTerm", "gamma of an element with nonzero weight-0 part");
    if (k == 0) return PDElement::from_ambient(ring, Poly::constant(ring->ambient, 1));

    std::vector<std::pair<std::vector<int>, Poly>> ts(u.terms().begin(), u.terms().end());
    int s = static_cast<int>(ts.size());
    if (s == 0) return PDElement::zero(ring);

    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(k, s, cur, comps);

    PDElement acc(ring);
    for (const auto& comp : comps) {
        PDElement prod = PDElement::from_ambient(ring, Poly::constant(ring->ambient, 1));
        bool dead = false;
        for (int i = 0; i < s && !dead; ++i) {
            if (comp[i] == 0) continue;
            PDElement g = gamma_of_term(comp[i], ring, ts[i].first, ts[i].second);
            prod = prod * g;
            if (prod.is_zero() && !prod.truncated()) dead = true;
        }
        if (!dead) acc = acc + prod;
    }
    return acc;
}

/* ---------- envelopes ---------- */

bool is_eisenstein(long long p, const std::vector<mpz_class>& coeffs) {
    if (coeffs.size() < 2 || coeffs.back() != 1) return false;
    for (size_t i = 0; i + 1 < coeffs.size(); ++i)
        if (!mpz_divisible_ui_p(coeffs[i].get_mpz_t(), static_cast<unsigned long>(p))) return false;
    mpz_class c0 = coeffs[0];
    mpz_divexact_ui(c0.get_mpz_t(), c0.get_mpz_t(), static_cast<unsigned long>(p));
    return !mpz_divisible_ui_p(c0.get_mpz_t(), static_cast<unsigned long>(p));
}

bool koszul_h1_vanishes_mod_p(const PolyRingPtr& ambient, const std::vector<Poly>& seq) {
    long long p = ambient->mod->p;
    int r = static_cast<int>(seq.size());
    if (!ambient->degree_cap) throw err("WindowTooWide", "Koszul check needs a degree cap");
    long long D = *ambient->degree_cap;
    long long maxdeg = 0;
    for (const auto& f : seq) maxdeg = std::max(maxdeg, f.total_degree_numerator());
    long long safe = D - 2 * maxdeg;
    if (safe < 1) return true;  // window too small to detect anything

    /* monomial basis of A modulo p, graded */
    std::vector<std::vector<long long>> mons;
    std::map<std::vector<long long>, int> idx;
    {
        std::vector<long long> cur(ambient->vars.size(), 0);
        /* enumerate all monomials with total degree <= D */
        while (true) {
            long long d = std::accumulate(cur.begin(), cur.end(), 0LL);
            if (d <= D) {
                idx[cur] = static_cast<int>(mons.size());
                mons.push_back(cur);
            }
            int i = static_cast<int>(cur.size()) - 1;
            while (i >= 0) {
                if (++cur[i] <= D) {
                    long long dd = std::accumulate(cur.begin(), cur.end(), 0LL);
                    if (dd <= D) break;
                }
                cur[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }
    int M = static_cast<int>(mons.size());

    auto mul_matrix = [&](const Poly& f) {
        /* multiplication by f as an M x M matrix mod p (truncating beyond D) */
        GFpMat A(p, M, M);
        for (int c = 0; c < M; ++c)
            for (const auto& [e, v] : f.terms()) {
                std::vector<long long> m(e.size());
                for (size_t i = 0; i < e.size(); ++i) m[i] = mons[c][i] + e[i];
                auto it = idx.find(m);
                if (it == idx.end()) continue;
                mpz_class red = v.value() % p;
                A.a[it->second][c] = (A.a[it->second][c] + red.get_si()) % p;
            }
        return A;
    };
    std::vector<GFpMat> mul;
    for (const auto& f : seq) mul.push_back(mul_matrix(f));

    /* d1 : A^r -> A, (g_i) -> sum g_i f_i           (rM columns, M rows)
     * d2 : A^{r(r-1)/2} -> A^r, Koszul differential  */
    GFpMat d1(p, M, r * M);
    for (int i = 0; i < r; ++i)
        for (int rr = 0; rr < M; ++rr)
            for (int cc = 0; cc < M; ++cc)
                d1.a[rr][i * M + cc] = (d1.a[rr][i * M + cc] + mul[i].a[rr][cc]) % p;

    int pairs = r * (r - 1) / 2;
    GFpMat d2(p, r * M, std::max(1, pairs * M));
    int pc = 0;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            /* e_i ^ e_j -> f_j e_i - f_i e_j */
            for (int rr = 0; rr < M; ++rr)
                for (int cc = 0; cc < M; ++cc) {
                    d2.a[i * M + rr][pc * M + cc] = (d2.a[i * M + rr][pc * M + cc] + mul[j].a[rr][cc]) % p;
                    d2.a[j * M + rr][pc * M + cc] =
                        ((d2.a[j * M + rr][pc * M + cc] - mul[i].a[rr][cc]) % p + p) % p;
                }
            ++pc;
        }

    /* compare dim ker(d1) with rank(d2) inside the safe degree window: an
     * element of ker(d1) supported in degrees <= safe must lie in im(d2). */
    auto null_d1 = gfp_nullspace(d1);
    GFpMat d2r = d2;
    auto piv2 = gfp_rref(d2r);
    for (const auto& v : null_d1) {
        long long vdeg = 0;
        bool in_window = true;
        for (int i = 0; i < r * M && in_window; ++i) {
            if (v[i] == 0) continue;
            long long d = std::accumulate(mons[i % M].begin(), mons[i % M].end(), 0LL);
            vdeg = std::max(vdeg, d + maxdeg);
            if (vdeg > safe) in_window = false;
        }
        if (!in_window) continue;
        auto res = gfp_reduce_against(d2r, piv2, v);
        for (long long x : res)
            if (x != 0) return false;
    }
    return true;
}

PDEnvelope PDEnvelope::build(PolyRingPtr ambient, std::vector<Poly> sequence, int weight_cap,
                             bool assert_regular) {
    if (!ambient->degree_cap)
        throw err("WindowTooWide", "pd-envelope needs an ambient degree cap");
    if (!assert_regular && !koszul_h1_vanishes_mod_p(ambient, sequence))
        throw err("NotRegularSequence", "truncated Koszul H1 is nonzero mod p");

    PDEnvelope E;
    std::vector<std::string> pdv;
    for (size_t i = 0; i < sequence.size(); ++i) pdv.push_back("pd" + std::to_string(i));
    E.pdring_ = make_pd_ring(ambient, pdv, weight_cap);
    E.seq_ = std::move(sequence);

    /* flat basis: ambient monomials (within cap) x pd exponents (within cap) */
    long long D = *ambient->degree_cap * ambient->denom;
    std::vector<std::vector<long long>> mons;
    {
        std::vector<long long> cur(ambient->vars.size(), 0);
        while (true) {
            long long d = std::accumulate(cur.begin(), cur.end(), 0LL);
            if (d <= D) mons.push_back(cur);
            int i = static_cast<int>(cur.size()) - 1;
            while (i >= 0) {
                if (++cur[i] <= D) {
                    long long dd = std::accumulate(cur.begin(), cur.end(), 0LL);
                    if (dd <= D) break;
                }
                cur[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
        std::sort(mons.begin(), mons.end(), [](const auto& a, const auto& b) { return GradedLex()(a, b); });
    }
    std::vector<std::vector<int>> pdes;
    {
        int r = static_cast<int>(pdv.size());
        std::vector<int> cur(r, 0);
        while (true) {
            int w = std::accumulate(cur.begin(), cur.end(), 0);
            if (w <= weight_cap) pdes.push_back(cur);
            int i = r - 1;
            while (i >= 0) {
                if (++cur[i] <= weight_cap) {
                    int ww = std::accumulate(cur.begin(), cur.end(), 0);
                    if (ww <= weight_cap) break;
                }
                cur[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
        std::sort(pdes.begin(), pdes.end(), [](const auto& a, const auto& b) {
            int da = std::accumulate(a.begin(), a.end(), 0);
            int db = std::accumulate(b.begin(), b.end(), 0);
            if (da != db) return da < db;
            return a < b;
        });
    }
    const char* guard_env = std::getenv("CRYSP_MEMORY_GUARD");
    long long guard = guard_env ? std::atoll(guard_env) : 200000;
    if (static_cast<long long>(mons.size()) * static_cast<long long>(pdes.size()) > guard)
        throw err("WindowTooWide", "truncated envelope basis exceeds the memory guard");

    for (const auto& m : mons)
        for (const auto& e : pdes) {
            E.flat_index_[{m, e}] = static_cast<int>(E.flat_basis_.size());
            E.flat_basis_.push_back({m, e});
        }

    E.rel_ = howell(ambient->mod->p, ambient->mod->n, E.flat_dim(), E.relation_rows());
    return E;
}

std::vector<std::vector<mpz_class>> PDEnvelope::relation_rows() const {
    std::vector<std::vector<mpz_class>> rows;
    int r = static_cast<int>(seq_.size());
    for (const auto& [mon, pde] : flat_basis_) {
        Poly mp(pdring_->ambient);
        mp.add_term(mon, Zmod::one(pdring_->ambient->mod));
        for (int i = 0; i < r; ++i) {
            /* (x_i - f_i) * mon*gamma_{pde}(x): x_i charges the pd slot */
            PDElement rel(pdring_);
            std::vector<int> up = pde;
            up[i] += 1;
            rel.add_term(up, mp.scaled(Zmod(pdring_->ambient->mod, pde[i] + 1)));
            rel.add_term(pde, -(mp * seq_[i]));
            if (rel.is_zero()) continue;
            rows.push_back(coords(rel));
        }
    }
    return rows;
}

std::vector<mpz_class> PDEnvelope::coords(const PDElement& x) const {
    std::vector<mpz_class> v(flat_dim(), 0);
    for (const auto& [e, c] : x.terms())
        for (const auto& [mon, z] : c.terms()) {
            auto it = flat_index_.find({mon, e});
            if (it == flat_index_.end())
                throw err("WindowTooWide", "element exceeds the envelope truncation window");
            v[it->second] = z.value();
        }
    return v;
}

PDElement PDEnvelope::from_coords(const std::vector<mpz_class>& v) const {
    PDElement x(pdring_);
    for (int i = 0; i < flat_dim(); ++i) {
        if (v[i] == 0) continue;
        Poly c(pdring_->ambient);
        c.add_term(flat_basis_[i].first, Zmod(pdring_->ambient->mod, v[i]));
        x.add_term(flat_basis_[i].second, c);
    }
    return x;
}

PDElement PDEnvelope::normal_form(const PDElement& x) const { return from_coords(rel_.reduce(coords(x))); }

bool PDEnvelope::is_zero_in_envelope(const PDElement& x) const { return rel_.contains(coords(x)); }

bool PDEnvelope::equal_in_envelope(const PDElement& a, const PDElement& b) const {
    return is_zero_in_envelope(a - b);
}

long long PDEnvelope::size_log() const {
    return static_cast<long long>(flat_dim()) * rel_.n - rel_.size_log();
}

std::vector<long long> PDEnvelope::graded_dimensions(int max_degree) const {
    if (pdring_->ambient->mod->n != 1) throw err("NotModP", "graded dimensions need n == 1");
    long long p = pdring_->ambient->mod->p;
    /* group flat basis and relations by total degree (ambient + pd weight) */
    auto deg_of = [&](int i) {
        const auto& [m, e] = flat_basis_[i];
        long long d = std::accumulate(m.begin(), m.end(), 0LL) / pdring_->ambient->denom;
        d += std::accumulate(e.begin(), e.end(), 0);
        return d;
    };
    std::vector<long long> dims(max_degree + 1, 0);
    std::vector<std::vector<int>> bydeg(max_degree + 1);
    for (int i = 0; i < flat_dim(); ++i) {
        long long d = deg_of(i);
        if (d <= max_degree) bydeg[d].push_back(i);
    }
    for (int d = 0; d <= max_degree; ++d) {
        /* relation rows supported in this degree block */
        std::map<int, int> col;
        for (int i : bydeg[d]) col[i] = static_cast<int>(col.size());
        std::vector<std::vector<long long>> rows;
        for (const auto& row : rel_.rows) {
            std::vector<long long> rr(col.size(), 0);
            bool touches = false, pure = true;
            for (int i = 0; i < flat_dim(); ++i) {
                if (row[i] == 0) continue;
                auto it = col.find(i);
                if (it == col.end()) { pure = false; continue; }
                touches = true;
                mpz_class red = row[i] % p;
                rr[it->second] = red.get_si();
            }
            if (touches && pure) rows.push_back(std::move(rr));
            /* rows straddling degrees only occur for inhomogeneous sequences;
             * those are handled by the flat (ungraded) path in callers */
        }
        GFpMat M(p, static_cast<int>(rows.size()), static_cast<int>(col.size()));
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < rows[i].size(); ++j) M.a[i][j] = rows[i][j];
        dims[d] = static_cast<long long>(col.size()) - gfp_rank(M);
    }
    return dims;
}

std::vector<std::vector<long long>> PDEnvelope::conjugate_filtration_dims(int max_level,
                                                                          int max_degree) const {
    if (pdring_->ambient->mod->n != 1) throw err("NotModP", "conjugate filtration needs n == 1");
    long long p = pdring_->ambient->mod->p;
    auto deg_of = [&](int i) {
        const auto& [m, e] = flat_basis_[i];
        long long d = std::accumulate(m.begin(), m.end(), 0LL) / pdring_->ambient->denom;
        d += std::accumulate(e.begin(), e.end(), 0);
        return d;
    };
    std::vector<std::vector<long long>> out;
    for (int lev = 0; lev <= max_level; ++lev) {
        std::vector<long long> dims(max_degree + 1, 0);
        for (int d = 0; d <= max_degree; ++d) {
            /* columns: all flat basis elements of this degree */
            std::map<int, int> col;
            for (int i = 0; i < flat_dim(); ++i)
                if (deg_of(i) == d) col[i] = static_cast<int>(col.size());
            if (col.empty()) continue;
            auto extract = [&](const std::vector<mpz_class>& row, std::vector<long long>& rr) {
                bool touches = false;
                for (const auto& [i, j] : col)
                    if (row[i] != 0) {
                        mpz_class red = row[i] % p;
                        rr[j] = red.get_si();
                        touches = true;
                    }
                return touches;
            };
            std::vector<std::vector<long long>> relrows, filrows;
            for (const auto& row : rel_.rows) {
                std::vector<long long> rr(col.size(), 0);
                if (extract(row, rr)) relrows.push_back(rr);
            }
            /* generators of Fil_lev: monomial basis elements whose pd part is
             * p*(b_1..b_r) with sum(b) <= lev */
            for (const auto& [i, j] : col) {
                const auto& e = flat_basis_[i].second;
                int s = 0;
                bool mult = true;
                for (int x : e) {
                    if (x % p != 0) { mult = false; break; }
                    s += x / p;
                }
                if (!mult || s > lev) continue;
                std::vector<long long> rr(col.size(), 0);
                rr[j] = 1;
                filrows.push_back(rr);
            }
            int nrel = static_cast<int>(relrows.size());
            GFpMat R(p, nrel, static_cast<int>(col.size()));
            for (int i = 0; i < nrel; ++i)
                for (size_t j = 0; j < col.size(); ++j) R.a[i][j] = relrows[i][j];
            int rank_rel = gfp_rank(R);
            GFpMat RF(p, nrel + static_cast<int>(filrows.size()), static_cast<int>(col.size()));
            for (int i = 0; i < nrel; ++i)
                for (size_t j = 0; j < col.size(); ++j) RF.a[i][j] = relrows[i][j];
            for (size_t i = 0; i < filrows.size(); ++i)
                for (size_t j = 0; j < col.size(); ++j) RF.a[nrel + i][j] = filrows[i][j];
            dims[d] = gfp_rank(RF) - rank_rel;
        }
        out.push_back(std::move(dims));
    }
    return out;
}

IteratedGammaIso iterated_gamma_iso(int r, long long p, int cap) {
    long long need = 1;
    for (int i = 0; i <= r; ++i) need *= p;
    if (cap < need - 1) throw err("CapTooSmall", "cap must be at least p^{r+1}-1");

    IteratedGammaIso out;
    PolyRingPtr triv = make_poly_ring(p, 1, {}, 0, std::nullopt);
    out.target = make_pd_ring(triv, {"x"}, cap);

    /* x_i -> gamma_p^{(i)}(x) */
    PDElement g = PDElement::gamma_var(out.target, 0, 1);
    out.var_images.push_back(g);
    for (int i = 1; i <= r; ++i) {
        g = gamma(static_cast<int>(p), g);
        out.var_images.push_back(g);
    }

    /* matrix: monomials prod x_i^{c_i} (c_i < p) -> pd-weight < p^{r+1} */
    int N = static_cast<int>(need);
    out.matrix_size = N;
    GFpMat M(p, N, N);
    std::vector<int> c(r + 1, 0);
    for (int colidx = 0; colidx < N; ++colidx) {
        PDElement m = PDElement::from_ambient(out.target, Poly::constant(triv, 1));
        for (int i = 0; i <= r; ++i)
            for (int t = 0; t < c[i]; ++t) m = m * out.var_images[i];
        for (const auto& [e, v] : m.terms()) {
            if (e[0] >= N) continue;
            mpz_class red = v.terms().empty() ? mpz_class(0) : v.terms().begin()->second.value() % p;
            M.a[e[0]][colidx] = red.get_si();
        }
        for (int i = r; i >= 0; --i) {
            if (++c[i] < p) break;
            c[i] = 0;
        }
    }
    out.bijective = (gfp_rank(M) == N);
    return out;
}

PDEnvelope faltings_breuil(long long p, int n, const std::vector<mpz_class>& eisenstein_coeffs,
                           int ambient_degree_cap, int weight_cap) {
    if (!is_eisenstein(p, eisenstein_coeffs))
        throw err("NotEisenstein", "polynomial is not Eisenstein at p");
    PolyRingPtr A = make_poly_ring(p, n, {"x"}, 0, ambient_degree_cap);
    Poly E(A);
    for (size_t i = 0; i < eisenstein_coeffs.size(); ++i) {
        if (eisenstein_coeffs[i] == 0) continue;
        std::vector<long long> e = {static_cast<long long>(i)};
        E.add_term(e, Zmod(A->mod, eisenstein_coeffs[i]));
    }
    return PDEnvelope::build(A, {E}, weight_cap, /*assert_regular=*/true);
}

}  // namespace crysp
