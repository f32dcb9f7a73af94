#pragma once

// Exact linear algebra over Z and Z/M: streamed kernel/solve via generator
// elimination, Howell canonical forms, and Smith normal form with transforms.
// M == 0 everywhere means "over Z".

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "cliffcat/errors.hpp"

namespace cliffcat {

using i64 = long long;
using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

namespace detail {

inline i64 checked(__int128 v) {
    if (v > ((__int128)1 << 62) || v < -((__int128)1 << 62))
        throw Error("integer overflow in exact arithmetic");
    return (i64)v;
}

}  // namespace detail

inline i64 mod_reduce(i64 v, i64 M) {
    if (M == 0) return v;
    if (M == 1) return 0;
    v %= M;
    return v < 0 ? v + M : v;
}

inline i64 egcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = a < 0 ? -1 : 1;
        y = 0;
        return a < 0 ? -a : a;
    }
    i64 x1, y1;
    i64 g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline i64 mod_inverse(i64 a, i64 M) {
    if (M == 1) return 0;
    i64 x, y;
    i64 g = egcd(mod_reduce(a, M), M, x, y);
    if (g != 1) throw Error("not invertible");
    return mod_reduce(x, M);
}

// unit u of Z/M with u*a == gcd(a,M) (mod M); requires a != 0 mod M
inline i64 unit_for(i64 a, i64 M) {
    a = mod_reduce(a, M);
    i64 g = std::gcd(a, M);
    i64 ap = a / g, Mp = M / g;
    i64 u = mod_inverse(ap % Mp, Mp);
    if (u == 0) u = 1;
    while (std::gcd(u, M) != 1) u += Mp;
    return u % M;
}

struct SparseTerm {
    int col;
    i64 coef;
};
using SparseRow = std::vector<SparseTerm>;

// Howell form over Z/M (M>=2), or Hermite form over Z (M==0), of the row span.
// Unique for a given span; rows have strictly increasing pivot columns.
inline Mat howell_form(Mat rows, i64 M) {
    if (M == 1) return {};
    Mat work;
    for (auto& r : rows) {
        bool nz = false;
        for (auto& v : r) {
            v = mod_reduce(v, M);
            if (v) nz = true;
        }
        if (nz) work.push_back(std::move(r));
    }
    if (work.empty()) return {};
    const int C = (int)work[0].size();
    Mat res;
    for (int c = 0; c < C && !work.empty(); ++c) {
        int piv = -1;
        Mat rest;
        rest.reserve(work.size());
        for (auto& r : work) {
            if (r[c] == 0) {
                rest.push_back(std::move(r));
                continue;
            }
            if (piv < 0) {
                res.push_back(std::move(r));
                piv = (int)res.size() - 1;
                continue;
            }
            Vec& p = res[piv];
            i64 x, y;
            i64 g = egcd(p[c], r[c], x, y);
            i64 alpha = -(r[c] / g), beta = p[c] / g;
            Vec fold(C), zero(C);
            bool nz = false;
            for (int j = 0; j < C; ++j) {
                __int128 f = (__int128)x * p[j] + (__int128)y * r[j];
                __int128 z = (__int128)alpha * p[j] + (__int128)beta * r[j];
                fold[j] = mod_reduce(detail::checked(f), M);
                zero[j] = mod_reduce(detail::checked(z), M);
                if (zero[j]) nz = true;
            }
            p = std::move(fold);
            if (nz) rest.push_back(std::move(zero));
        }
        if (piv >= 0) {
            Vec& p = res[piv];
            if (M) {
                i64 u = unit_for(p[c], M);
                if (u != 1)
                    for (auto& v : p) v = mod_reduce(detail::checked((__int128)u * v), M);
                i64 ann = M / p[c];
                if (ann != 1) {
                    Vec a(C);
                    bool nz = false;
                    for (int j = 0; j < C; ++j) {
                        a[j] = mod_reduce(detail::checked((__int128)ann * p[j]), M);
                        if (a[j]) nz = true;
                    }
                    if (nz) rest.push_back(std::move(a));
                }
            } else if (p[c] < 0) {
                for (auto& v : p) v = -v;
            }
        }
        work = std::move(rest);
    }
    // entries above each pivot reduced into [0, pivot)
    for (int i = (int)res.size() - 1; i >= 0; --i) {
        int c = 0;
        while (res[i][c] == 0) ++c;
        i64 d = res[i][c];
        for (int j = 0; j < i; ++j) {
            i64 q = res[j][c] / d;
            if (M == 0 && res[j][c] % d < 0) --q;
            if (!q) continue;
            for (int t = c; t < C; ++t)
                res[j][t] = mod_reduce(detail::checked(res[j][t] - (__int128)q * res[i][t]), M);
        }
    }
    return res;
}

// canonical (lexicographically least) representative of v + row span(basis);
// basis must be a Howell/Hermite form
inline Vec reduce_by_span(Vec v, const Mat& basis, i64 M) {
    for (auto& x : v) x = mod_reduce(x, M);
    for (const auto& h : basis) {
        int c = 0;
        while (c < (int)h.size() && h[c] == 0) ++c;
        if (c == (int)h.size()) continue;
        i64 q = v[c] / h[c];
        if (M == 0 && v[c] % h[c] < 0) --q;
        if (!q) continue;
        for (int t = c; t < (int)v.size(); ++t)
            v[t] = mod_reduce(detail::checked(v[t] - (__int128)q * h[t]), M);
    }
    return v;
}

inline bool in_span(const Vec& v, const Mat& basis, i64 M) {
    Vec r = reduce_by_span(v, basis, M);
    for (i64 x : r)
        if (x != 0) return false;
    return true;
}

// |row span| over Z/M for a Howell basis
inline i64 span_size(const Mat& howell, i64 M, i64 limit = (i64)1 << 62) {
    if (M == 1) return 1;
    __int128 s = 1;
    for (const auto& h : howell) {
        int c = 0;
        while (h[c] == 0) ++c;
        s *= M / h[c];
        if (s > limit) throw TooLargeError("span size exceeds limit");
    }
    return (i64)s;
}

// all elements of the span, in mixed-radix order of the Howell basis
inline Mat enumerate_span(const Mat& howell, int k, i64 M, i64 limit) {
    span_size(howell, M, limit);
    Mat out;
    out.emplace_back(k, 0);
    for (const auto& h : howell) {
        int c = 0;
        while (h[c] == 0) ++c;
        i64 reps = M / h[c];
        size_t base = out.size();
        out.reserve(base * reps);
        for (i64 q = 1; q < reps; ++q)
            for (size_t i = 0; i < base; ++i) {
                Vec v(k);
                for (int j = 0; j < k; ++j) v[j] = mod_reduce(out[i][j] + q * h[j], M);
                out.push_back(std::move(v));
            }
    }
    return out;
}

// Affine solution set x0 + span(gens) of a streamed linear system over Z/M
// (or over Z when M == 0). Constraints are imposed one row at a time; each
// satisfied row costs O(#gens * nnz(row)).
class SolutionModule {
public:
    SolutionModule(int k, i64 M) : k_(k), M_(M), feasible_(true), x0_(k, 0) {
        if (M != 1) {
            gens_.reserve(k);
            for (int i = 0; i < k; ++i) {
                Vec g(k, 0);
                g[i] = 1;
                gens_.push_back(std::move(g));
            }
        }
    }

    bool feasible() const { return feasible_; }
    i64 modulus() const { return M_; }
    int dim() const { return k_; }

    // impose  row . x == rhs ;  returns feasibility
    bool impose(const SparseRow& row, i64 rhs) {
        if (!feasible_) return false;
        if (M_ == 1) return true;
        i64 c0 = -rhs;
        for (const auto& t : row) c0 += detail::checked((__int128)t.coef * x0_[t.col]);
        c0 = mod_reduce(c0, M_);
        std::vector<i64> c(gens_.size());
        int pivot = -1;
        for (size_t i = 0; i < gens_.size(); ++i) {
            __int128 s = 0;
            for (const auto& t : row) s += (__int128)t.coef * gens_[i][t.col];
            c[i] = mod_reduce(detail::checked(s), M_);
            if (c[i] != 0 && pivot < 0) pivot = (int)i;
        }
        if (pivot < 0) {
            if (c0 != 0) feasible_ = false;
            return feasible_;
        }
        i64 d = c[pivot];
        for (size_t i = pivot + 1; i < gens_.size(); ++i) {
            if (c[i] == 0) continue;
            i64 x, y;
            i64 g = egcd(d, c[i], x, y);
            combine(gens_[pivot], gens_[i], x, y, -(c[i] / g), d / g);
            d = g;
        }
        if (M_ == 0) {
            if (c0 % d != 0) {
                feasible_ = false;
                return false;
            }
            axpy(x0_, gens_[pivot], -c0 / d);
            gens_.erase(gens_.begin() + pivot);
        } else {
            i64 g = std::gcd(d, M_);
            if (c0 % g != 0) {
                feasible_ = false;
                return false;
            }
            i64 a = mod_reduce(detail::checked((__int128)mod_reduce(-c0 / g, M_ / g) *
                                               mod_inverse(d / g, M_ / g)),
                               M_ / g);
            axpy(x0_, gens_[pivot], a);
            scale(gens_[pivot], M_ / g);
            compact();
        }
        return true;
    }

    const Mat& generators() const { return gens_; }
    const Vec& particular() const { return x0_; }

    // Howell/Hermite basis + canonical particular solution
    void canonicalize() {
        gens_ = howell_form(std::move(gens_), M_);
        x0_ = reduce_by_span(std::move(x0_), gens_, M_);
    }

private:
    void combine(Vec& gp, Vec& gi, i64 x, i64 y, i64 alpha, i64 beta) {
        for (int j = 0; j < k_; ++j) {
            i64 np = mod_reduce(detail::checked((__int128)x * gp[j] + (__int128)y * gi[j]), M_);
            i64 no =
                mod_reduce(detail::checked((__int128)alpha * gp[j] + (__int128)beta * gi[j]), M_);
            gp[j] = np;
            gi[j] = no;
        }
    }

    void axpy(Vec& dst, const Vec& src, i64 a) {
        if (a == 0) return;
        for (int j = 0; j < k_; ++j)
            dst[j] = mod_reduce(detail::checked(dst[j] + (__int128)a * src[j]), M_);
    }

    void scale(Vec& g, i64 a) {
        for (int j = 0; j < k_; ++j) g[j] = mod_reduce(detail::checked((__int128)a * g[j]), M_);
    }

    void compact() {
        size_t w = 0;
        for (size_t i = 0; i < gens_.size(); ++i) {
            bool nz = false;
            for (i64 v : gens_[i])
                if (v != 0) {
                    nz = true;
                    break;
                }
            if (nz) {
                if (w != i) gens_[w] = std::move(gens_[i]);
                ++w;
            }
        }
        gens_.resize(w);
    }

    int k_;
    i64 M_;
    bool feasible_;
    Mat gens_;
    Vec x0_;
};

// ---- Smith normal form with transforms (small dense integral matrices) ----

struct Smith {
    Mat U, Uinv, V;  // U*A*V = diag(d);  Uinv = U^{-1}
    Vec diag;        // nonzero invariant factors d1 | d2 | ...
    int rows = 0, cols = 0;
    int rank() const { return (int)diag.size(); }
};

inline Smith smith_form(Mat A) {
    Smith s;
    int m = (int)A.size();
    int k = m ? (int)A[0].size() : 0;
    s.rows = m;
    s.cols = k;
    auto ident = [](int n) {
        Mat I(n, Vec(n, 0));
        for (int i = 0; i < n; ++i) I[i][i] = 1;
        return I;
    };
    s.U = ident(m);
    s.Uinv = ident(m);
    s.V = ident(k);
    auto row_axpy = [&](int dst, int src, i64 q) {  // row dst -= q*row src
        for (int j = 0; j < k; ++j)
            A[dst][j] = detail::checked(A[dst][j] - (__int128)q * A[src][j]);
        for (int j = 0; j < m; ++j) {
            s.U[dst][j] = detail::checked(s.U[dst][j] - (__int128)q * s.U[src][j]);
            s.Uinv[j][src] = detail::checked(s.Uinv[j][src] + (__int128)q * s.Uinv[j][dst]);
        }
    };
    auto col_axpy = [&](int dst, int src, i64 q) {
        for (int i = 0; i < m; ++i)
            A[i][dst] = detail::checked(A[i][dst] - (__int128)q * A[i][src]);
        for (int i = 0; i < k; ++i)
            s.V[i][dst] = detail::checked(s.V[i][dst] - (__int128)q * s.V[i][src]);
    };
    auto row_swap = [&](int a, int b) {
        if (a == b) return;
        std::swap(A[a], A[b]);
        std::swap(s.U[a], s.U[b]);
        for (int j = 0; j < m; ++j) std::swap(s.Uinv[j][a], s.Uinv[j][b]);
    };
    auto col_swap = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < m; ++i) std::swap(A[i][a], A[i][b]);
        for (int i = 0; i < k; ++i) std::swap(s.V[i][a], s.V[i][b]);
    };
    auto row_neg = [&](int a) {
        for (int j = 0; j < k; ++j) A[a][j] = -A[a][j];
        for (int j = 0; j < m; ++j) s.U[a][j] = -s.U[a][j];
        for (int j = 0; j < m; ++j) s.Uinv[j][a] = -s.Uinv[j][a];
    };

    int t = 0;
    while (t < m && t < k) {
        int pi = -1, pj = -1;
        i64 best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < k; ++j)
                if (A[i][j] != 0) {
                    i64 a = A[i][j] < 0 ? -A[i][j] : A[i][j];
                    if (pi < 0 || a < best) {
                        pi = i;
                        pj = j;
                        best = a;
                    }
                }
        if (pi < 0) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < m; ++i)
                while (A[i][t] != 0) {
                    i64 q = A[i][t] / A[t][t];
                    row_axpy(i, t, q);
                    if (A[i][t] != 0) {
                        row_swap(t, i);
                        clean = false;
                    }
                }
            for (int j = t + 1; j < k; ++j)
                while (A[t][j] != 0) {
                    i64 q = A[t][j] / A[t][t];
                    col_axpy(j, t, q);
                    if (A[t][j] != 0) {
                        col_swap(t, j);
                        clean = false;
                    }
                }
        }
        if (A[t][t] < 0) row_neg(t);
        ++t;
    }
    // divisibility chain d1 | d2 | ...
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < t; ++i)
            if (A[i][i] < 0) row_neg(i);
        for (int i = 0; i + 1 < t && !changed; ++i)
            for (int j = i + 1; j < t && !changed; ++j)
                if (A[j][j] % A[i][i] != 0) {
                    changed = true;
                    col_axpy(i, j, -1);  // puts d_j into entry (j,i)
                    while (A[j][i] != 0) {
                        i64 q = A[j][i] / A[i][i];
                        row_axpy(j, i, q);
                        if (A[j][i] != 0) row_swap(i, j);
                    }
                    if (A[i][j] != 0) col_axpy(j, i, A[i][j] / A[i][i]);
                }
    }
    for (int i = 0; i < t; ++i)
        if (A[i][i] != 0) s.diag.push_back(A[i][i]);
    return s;
}

}  // namespace cliffcat
