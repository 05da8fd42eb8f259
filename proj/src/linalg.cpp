#include "crysp/linalg.hpp"

#include <algorithm>

namespace crysp {

long long gfp_inv(long long x, long long p) {
    x = ((x % p) + p) % p;
    if (x == 0) throw err("NotAUnit", "inverse of 0 mod p");
    long long t = 0, newt = 1, r = p, newr = x;
    while (newr != 0) {
        long long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    return ((t % p) + p) % p;
}

std::vector<int> gfp_rref(GFpMat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int sel = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.a[i][c] != 0) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(m.a[sel], m.a[r]);
        long long inv = gfp_inv(m.a[r][c], m.p);
        for (int j = c; j < m.cols; ++j) m.a[r][j] = (m.a[r][j] * inv) % m.p;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.a[i][c] == 0) continue;
            long long f = m.a[i][c];
            for (int j = c; j < m.cols; ++j)
                m.a[i][j] = ((m.a[i][j] - f * m.a[r][j]) % m.p + m.p) % m.p;
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int gfp_rank(GFpMat m) { return static_cast<int>(gfp_rref(m).size()); }

std::vector<std::vector<long long>> gfp_nullspace(const GFpMat& m) {
    GFpMat r = m;
    std::vector<int> piv = gfp_rref(r);
    std::vector<bool> is_piv(m.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<long long>> basis;
    for (int c = 0; c < m.cols; ++c) {
        if (is_piv[c]) continue;
        std::vector<long long> v(m.cols, 0);
        v[c] = 1;
        for (size_t i = 0; i < piv.size(); ++i)
            v[piv[i]] = ((-r.a[i][c]) % m.p + m.p) % m.p;
        basis.push_back(std::move(v));
    }
    return basis;
}

GFpMat gfp_mul(const GFpMat& a, const GFpMat& b) {
    if (a.cols != b.rows || a.p != b.p) throw err("ShapeMismatch", "matrix product shapes");
    GFpMat c(a.p, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            long long f = a.a[i][k];
            if (f == 0) continue;
            for (int j = 0; j < b.cols; ++j)
                c.a[i][j] = (c.a[i][j] + f * b.a[k][j]) % a.p;
        }
    return c;
}

std::vector<long long> gfp_reduce_against(const GFpMat& rref, const std::vector<int>& pivots,
                                          std::vector<long long> v) {
    for (size_t i = 0; i < pivots.size(); ++i) {
        long long f = v[pivots[i]] % rref.p;
        if (f == 0) continue;
        for (int j = 0; j < rref.cols; ++j)
            v[j] = ((v[j] - f * rref.a[i][j]) % rref.p + rref.p) % rref.p;
    }
    return v;
}

namespace {

int val_of(const mpz_class& x, long long p, int n) {
    if (x == 0) return n;
    mpz_class t = x;
    int v = 0;
    while (v < n && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

}  // namespace

HowellForm howell(long long p, int n, int cols, std::vector<std::vector<mpz_class>> gen) {
    HowellForm H;
    H.p = p;
    H.n = n;
    H.cols = cols;
    mpz_ui_pow_ui(H.pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    const mpz_class& pn = H.pn;

    auto modreduce = [&](std::vector<mpz_class>& v) {
        for (auto& x : v) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pn.get_mpz_t()); }
    };
    for (auto& g : gen) {
        if (static_cast<int>(g.size()) != cols) throw err("ShapeMismatch", "howell generator length");
        modreduce(g);
    }

    /* echelon[c] = row with leftmost nonzero entry at column c, pivot = p^v * unit
     * normalized to p^v. Insertion reduces an incoming row against existing
     * pivots; leftover annihilator shadows p^{n-v} * row are queued so the row
     * span stays closed under the Howell condition. */
    std::vector<std::vector<mpz_class>> echelon(cols);
    std::vector<int> eval(cols, -1);
    std::vector<std::vector<mpz_class>> queue = std::move(gen);

    while (!queue.empty()) {
        std::vector<mpz_class> row = std::move(queue.back());
        queue.pop_back();
        int c = 0;
        while (c < cols) {
            while (c < cols && row[c] == 0) ++c;
            if (c == cols) break;
            int v = val_of(row[c], p, n);
            if (eval[c] < 0) {
                /* normalize leading entry to p^v */
                mpz_class unit = row[c];
                mpz_class pv;
                mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v));
                mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), pv.get_mpz_t());
                mpz_class uinv;
                mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), pn.get_mpz_t());
                for (auto& x : row) { x *= uinv; mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pn.get_mpz_t()); }
                echelon[c] = row;
                eval[c] = v;
                if (v > 0) {
                    /* shadow: p^{n-v} times the row kills the pivot */
                    std::vector<mpz_class> sh = echelon[c];
                    mpz_class f;
                    mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(p),
                                  static_cast<unsigned long>(n - v));
                    for (auto& x : sh) { x *= f; mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pn.get_mpz_t()); }
                    sh[c] = 0;
                    queue.push_back(std::move(sh));
                }
                break;
            }
            if (v >= eval[c]) {
                /* entry divisible by pivot p^{eval[c]}: cancel and keep going */
                mpz_class pv;
                mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p),
                              static_cast<unsigned long>(eval[c]));
                mpz_class q = row[c] / pv;
                for (int j = c; j < cols; ++j) {
                    row[j] -= q * echelon[c][j];
                    mpz_mod(row[j].get_mpz_t(), row[j].get_mpz_t(), pn.get_mpz_t());
                }
            } else {
                /* incoming row has the better pivot: swap, requeue old */
                std::swap(row, echelon[c]);
                int oldv = eval[c];
                eval[c] = v;
                (void)oldv;
                mpz_class unit = echelon[c][c];
                mpz_class pv;
                mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v));
                mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), pv.get_mpz_t());
                mpz_class uinv;
                mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), pn.get_mpz_t());
                for (auto& x : echelon[c]) { x *= uinv; mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pn.get_mpz_t()); }
                if (v > 0) {
                    std::vector<mpz_class> sh = echelon[c];
                    mpz_class f;
                    mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(p),
                                  static_cast<unsigned long>(n - v));
                    for (auto& x : sh) { x *= f; mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pn.get_mpz_t()); }
                    sh[c] = 0;
                    queue.push_back(std::move(sh));
                }
                /* continue reducing the displaced row */
            }
        }
    }

    /* back-substitution: reduce entries above each pivot modulo the pivot */
    for (int c = cols - 1; c >= 0; --c) {
        if (eval[c] < 0) continue;
        mpz_class pv;
        mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(eval[c]));
        for (int c2 = 0; c2 < cols; ++c2) {
            if (c2 == c || eval[c2] < 0) continue;
            mpz_class q = echelon[c2][c] / pv;
            if (q == 0) continue;
            for (int j = c; j < cols; ++j) {
                echelon[c2][j] -= q * echelon[c][j];
                mpz_mod(echelon[c2][j].get_mpz_t(), echelon[c2][j].get_mpz_t(), pn.get_mpz_t());
            }
        }
    }

    for (int c = 0; c < cols; ++c) {
        if (eval[c] < 0) continue;
        H.rows.push_back(std::move(echelon[c]));
        H.pivot_col.push_back(c);
        H.pivot_val.push_back(eval[c]);
    }
    return H;
}

std::vector<mpz_class> HowellForm::reduce(std::vector<mpz_class> v) const {
    if (static_cast<int>(v.size()) != cols) throw err("ShapeMismatch", "howell reduce length");
    for (auto& x : v) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pn.get_mpz_t());
    for (size_t i = 0; i < rows.size(); ++i) {
        int c = pivot_col[i];
        mpz_class pv;
        mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(pivot_val[i]));
        mpz_class q = v[c] / pv;
        if (q == 0) continue;
        for (int j = c; j < cols; ++j) {
            v[j] -= q * rows[i][j];
            mpz_mod(v[j].get_mpz_t(), v[j].get_mpz_t(), pn.get_mpz_t());
        }
    }
    return v;
}

}  // namespace crysp
