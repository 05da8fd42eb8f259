#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "crysp/error.hpp"

namespace crysp {

/* Dense matrix over F_p, p a small prime. Deterministic elimination only:
 * pivots are chosen by (column, lowest row index). */
struct GFpMat {
    long long p = 2;
    int rows = 0, cols = 0;
    std::vector<std::vector<long long>> a;  // entries reduced to [0, p)

    GFpMat() = default;
    GFpMat(long long p_, int r, int c) : p(p_), rows(r), cols(c), a(r, std::vector<long long>(c, 0)) {}

    long long& at(int r, int c) { return a[r][c]; }
    long long get(int r, int c) const { return a[r][c]; }
    void set(int r, int c, long long v) { a[r][c] = ((v % p) + p) % p; }
};

long long gfp_inv(long long x, long long p);

/* Reduced row echelon form in place; returns pivot columns. */
std::vector<int> gfp_rref(GFpMat& m);

int gfp_rank(GFpMat m);

/* Basis of the right nullspace (each vector length = cols). */
std::vector<std::vector<long long>> gfp_nullspace(const GFpMat& m);

/* Matrix product. */
GFpMat gfp_mul(const GFpMat& a, const GFpMat& b);

/* Row-space membership oracle: after rref, reduce v against the rows.
 * Returns the residual (zero iff v lies in the row space). */
std::vector<long long> gfp_reduce_against(const GFpMat& rref, const std::vector<int>& pivots,
                                          std::vector<long long> v);

/* Howell normal form of a row set over Z/p^n. The row span is canonical:
 * two generating sets of the same submodule of (Z/p^n)^cols produce identical
 * forms. Every pivot entry is a power of p; entries above a pivot are reduced
 * modulo that power. */
struct HowellForm {
    long long p = 2;
    int n = 1;
    mpz_class pn;
    int cols = 0;
    std::vector<std::vector<mpz_class>> rows;  // echelon rows, pivot cols increasing
    std::vector<int> pivot_col;
    std::vector<int> pivot_val;  // valuation v of pivot p^v

    /* log_p of the cardinality of the row span. */
    long long size_log() const {
        long long s = 0;
        for (int v : pivot_val) s += n - v;
        return s;
    }

    /* Canonical coset representative of v modulo the row span. */
    std::vector<mpz_class> reduce(std::vector<mpz_class> v) const;

    bool contains(const std::vector<mpz_class>& v) const {
        for (const auto& x : reduce(v))
            if (x != 0) return false;
        return true;
    }
};

HowellForm howell(long long p, int n, int cols, std::vector<std::vector<mpz_class>> gen);

}  // namespace crysp
