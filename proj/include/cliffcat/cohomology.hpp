#pragma once

// Normalized bar cochains on a finite group with values in Z/M, standing for
// k*-valued cochains via additive exponents of roots of unity (value v at
// modulus M means exp(2*pi*i*v/M)). Coboundary, cocycle spaces, coboundary
// solving at lifted moduli, restriction, and exact cohomology groups.

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cliffcat/groups.hpp"
#include "cliffcat/linalg.hpp"

namespace cliffcat {

class Cochain {
public:
    Cochain(FiniteGroup group, int degree, i64 modulus)
        : group_(std::move(group)), degree_(degree), modulus_(modulus) {
        if (degree < 0) throw InputError("cochain degree must be nonnegative");
        if (modulus < 1) throw InputError("cochain modulus must be positive");
        values_.assign(tuple_count(group_.order(), degree), 0);
    }

    Cochain(FiniteGroup group, int degree, i64 modulus, Vec values)
        : group_(std::move(group)), degree_(degree), modulus_(modulus),
          values_(std::move(values)) {
        if (degree < 0) throw InputError("cochain degree must be nonnegative");
        if (modulus < 1) throw InputError("cochain modulus must be positive");
        if ((i64)values_.size() != tuple_count(group_.order(), degree))
            throw InputError("cochain value table has the wrong size");
        for (auto& v : values_) v = mod_reduce(v, modulus_);
        size_t idx = 0;
        for (auto& v : values_) {
            if (v != 0 && !tuple_is_free(group_, degree_, idx))
                throw InputError("cochain is not normalized");
            ++idx;
        }
    }

    static i64 tuple_count(int n, int degree) {
        i64 c = 1;
        for (int i = 0; i < degree; ++i) c *= n;
        return c;
    }

    static bool tuple_is_free(const FiniteGroup& g, int degree, size_t idx) {
        int n = g.order(), e = g.identity();
        for (int i = 0; i < degree; ++i) {
            if ((int)(idx % n) == e) return false;
            idx /= n;
        }
        return true;
    }

    const FiniteGroup& group() const { return group_; }
    int degree() const { return degree_; }
    i64 modulus() const { return modulus_; }
    const Vec& values() const { return values_; }

    i64 at_index(size_t idx) const { return values_[idx]; }

    i64 operator()(const std::vector<int>& args) const {
        size_t idx = 0;
        for (int a : args) idx = idx * group_.order() + a;
        return values_[idx];
    }

    bool is_zero() const {
        for (i64 v : values_)
            if (v) return false;
        return true;
    }

    bool same_shape(const Cochain& o) const {
        return degree_ == o.degree_ && modulus_ == o.modulus_ && group_.same_table(o.group_);
    }

    bool operator==(const Cochain& o) const {
        return same_shape(o) && values_ == o.values_;
    }
    bool operator!=(const Cochain& o) const { return !(*this == o); }

    Cochain embedded(i64 new_modulus) const {
        if (new_modulus % modulus_ != 0)
            throw InputError("cochain embedding requires a modulus multiple");
        i64 r = new_modulus / modulus_;
        Vec v = values_;
        for (auto& x : v) x = mod_reduce(x * r, new_modulus);
        return Cochain(group_, degree_, new_modulus, std::move(v));
    }

    Cochain operator+(const Cochain& o) const {
        if (!same_shape(o)) throw InputError("cochain shape mismatch in +");
        Vec v = values_;
        for (size_t i = 0; i < v.size(); ++i) v[i] = mod_reduce(v[i] + o.values_[i], modulus_);
        return Cochain(group_, degree_, modulus_, std::move(v));
    }

    Cochain operator-(const Cochain& o) const {
        if (!same_shape(o)) throw InputError("cochain shape mismatch in -");
        Vec v = values_;
        for (size_t i = 0; i < v.size(); ++i) v[i] = mod_reduce(v[i] - o.values_[i], modulus_);
        return Cochain(group_, degree_, modulus_, std::move(v));
    }

private:
    FiniteGroup group_;
    int degree_;
    i64 modulus_;
    Vec values_;
};

// free (identity-less) slot bookkeeping for the normalized complex
struct FreeSlots {
    std::vector<i64> tuples;     // free index -> full tuple index
    std::vector<int> free_of;    // full tuple index -> free index or -1
    int count = 0;
};

inline FreeSlots free_slots(const FiniteGroup& g, int degree) {
    FreeSlots fs;
    i64 total = Cochain::tuple_count(g.order(), degree);
    fs.free_of.assign(total, -1);
    for (i64 idx = 0; idx < total; ++idx)
        if (Cochain::tuple_is_free(g, degree, idx)) {
            fs.free_of[idx] = fs.count++;
            fs.tuples.push_back(idx);
        }
    return fs;
}

inline void decode_tuple(i64 idx, int n, int degree, std::vector<int>& out) {
    out.resize(degree);
    for (int i = degree - 1; i >= 0; --i) {
        out[i] = (int)(idx % n);
        idx /= n;
    }
}

// (delta c)(g1..g_{n+1}) = c(g2..) + sum_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{n+1} c(..g_n)
inline Cochain coboundary(const Cochain& c) {
    const FiniteGroup& g = c.group();
    int n = g.order(), deg = c.degree();
    i64 M = c.modulus();
    Vec out(Cochain::tuple_count(n, deg + 1), 0);
    std::vector<int> t;
    for (i64 idx = 0; idx < (i64)out.size(); ++idx) {
        decode_tuple(idx, n, deg + 1, t);
        i64 v = 0;
        {
            i64 sub = 0;
            for (int i = 1; i <= deg; ++i) sub = sub * n + t[i];
            v += c.at_index(sub);
        }
        int sign = 1;
        for (int i = 1; i <= deg; ++i) {
            sign = -sign;
            i64 sub = 0;
            for (int j = 0; j < i - 1; ++j) sub = sub * n + t[j];
            sub = sub * n + g.mul(t[i - 1], t[i]);
            for (int j = i + 1; j <= deg; ++j) sub = sub * n + t[j];
            v += sign * c.at_index(sub);
        }
        sign = -sign;
        {
            i64 sub = 0;
            for (int i = 0; i < deg; ++i) sub = sub * n + t[i];
            v += sign * c.at_index(sub);
        }
        out[idx] = mod_reduce(v, M);
    }
    return Cochain(g, deg + 1, M, std::move(out));
}

inline bool is_cocycle(const Cochain& c) { return coboundary(c).is_zero(); }

// standard degree-3 representative on Z/n: values q*n*a*floor((b+c)/n) mod n^2
inline Cochain cyclic_generator(int n, i64 q) {
    FiniteGroup g = FiniteGroup::cyclic(n);
    i64 M = (i64)n * n;
    if (n == 1) return Cochain(g, 3, 1);
    Vec v(Cochain::tuple_count(n, 3), 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                v[(i64)(a * n + b) * n + c] = mod_reduce(q * n * a * ((b + c) / n), M);
    return Cochain(g, 3, M, std::move(v));
}

inline Cochain restrict_cochain(const Cochain& c, const Subgroup& L) {
    if (!c.group().same_table(L.parent()))
        throw InputError("restriction subgroup is not in the cochain's group");
    FiniteGroup S = L.as_group();
    int m = S.order(), deg = c.degree();
    Vec v(Cochain::tuple_count(m, deg), 0);
    std::vector<int> t;
    for (i64 idx = 0; idx < (i64)v.size(); ++idx) {
        decode_tuple(idx, m, deg, t);
        i64 big = 0;
        for (int i = 0; i < deg; ++i) big = big * c.group().order() + L.elements()[t[i]];
        v[idx] = c.at_index(big);
    }
    return Cochain(std::move(S), deg, c.modulus(), std::move(v));
}

namespace detail {

// stream the delta rows (one per free (deg+1)-tuple) over free deg-slots
template <typename Fn>
void for_each_delta_row(const FiniteGroup& g, int deg, const FreeSlots& lo, Fn&& fn) {
    int n = g.order();
    i64 total = Cochain::tuple_count(n, deg + 1);
    std::vector<int> t;
    SparseRow row;
    for (i64 idx = 0; idx < total; ++idx) {
        if (!Cochain::tuple_is_free(g, deg + 1, idx)) continue;
        decode_tuple(idx, n, deg + 1, t);
        row.clear();
        auto add = [&](i64 sub, i64 coef) {
            int f = lo.free_of[sub];
            if (f < 0) return;  // normalized slot, contributes 0
            for (auto& term : row)
                if (term.col == f) {
                    term.coef += coef;
                    return;
                }
            row.push_back({f, coef});
        };
        {
            i64 sub = 0;
            for (int i = 1; i <= deg; ++i) sub = sub * n + t[i];
            add(sub, 1);
        }
        i64 sign = 1;
        for (int i = 1; i <= deg; ++i) {
            sign = -sign;
            i64 sub = 0;
            for (int j = 0; j < i - 1; ++j) sub = sub * n + t[j];
            sub = sub * n + g.mul(t[i - 1], t[i]);
            for (int j = i + 1; j <= deg; ++j) sub = sub * n + t[j];
            add(sub, sign);
        }
        sign = -sign;
        {
            i64 sub = 0;
            for (int i = 0; i < deg; ++i) sub = sub * n + t[i];
            add(sub, sign);
        }
        fn(idx, row);
    }
}

inline Cochain from_free_vector(const FiniteGroup& g, int deg, i64 M, const FreeSlots& fs,
                                const Vec& fv) {
    Vec full(Cochain::tuple_count(g.order(), deg), 0);
    for (int i = 0; i < fs.count; ++i) full[fs.tuples[i]] = mod_reduce(fv[i], M);
    return Cochain(g, deg, M, std::move(full));
}

inline Vec to_free_vector(const Cochain& c, const FreeSlots& fs) {
    Vec fv(fs.count);
    for (int i = 0; i < fs.count; ++i) fv[i] = c.at_index(fs.tuples[i]);
    return fv;
}

}  // namespace detail

// solve  delta(b) == target  at modulus target.modulus()*lift_factor, where the
// target is embedded by multiplication with lift_factor. Returns the canonical
// (lexicographically least) solution, or nullopt.
inline std::optional<Cochain> solve_coboundary(const Cochain& target, i64 lift_factor) {
    if (target.degree() == 0) throw DegreeZeroError("cannot solve for a (-1)-cochain");
    if (lift_factor < 1) throw InputError("lift factor must be positive");
    const FiniteGroup& g = target.group();
    int deg = target.degree() - 1;
    i64 M = target.modulus() * lift_factor;
    FreeSlots lo = free_slots(g, deg);
    SolutionModule sm(lo.count, M);
    bool ok = true;
    detail::for_each_delta_row(g, deg, lo, [&](i64 idx, const SparseRow& row) {
        if (!ok) return;
        ok = sm.impose(row, mod_reduce(target.at_index(idx) * lift_factor, M));
    });
    if (!ok || !sm.feasible()) return std::nullopt;
    sm.canonicalize();
    return detail::from_free_vector(g, deg, M, lo, sm.particular());
}

// Howell basis (over free slots) of the n-cocycles mod M
inline Mat cocycle_space(const FiniteGroup& g, int deg, i64 M) {
    FreeSlots lo = free_slots(g, deg);
    SolutionModule sm(lo.count, M);
    detail::for_each_delta_row(g, deg, lo, [&](i64, const SparseRow& row) { sm.impose(row, 0); });
    sm.canonicalize();
    return sm.generators();
}

// Howell basis (over free slots) of the coboundaries delta(C^{deg-1}) mod M
inline Mat coboundary_space(const FiniteGroup& g, int deg, i64 M) {
    if (deg == 0) return {};
    FreeSlots lo = free_slots(g, deg - 1);
    FreeSlots hi = free_slots(g, deg);
    Mat gens;
    for (int b = 0; b < lo.count; ++b) gens.emplace_back(hi.count, 0);
    detail::for_each_delta_row(g, deg - 1, lo, [&](i64 idx, const SparseRow& row) {
        int f = hi.free_of[idx];
        for (const auto& t : row) gens[t.col][f] = mod_reduce(t.coef, M);
    });
    return howell_form(std::move(gens), M);
}

// Howell basis of { d in C^deg(G, Z/M) : d is a coboundary of a k*-cochain },
// realized as lift*d in im(delta) mod M*lift
inline Mat kstar_coboundary_lattice(const FiniteGroup& g, int deg, i64 M, i64 lift) {
    if (deg == 0) return {};
    FreeSlots lo = free_slots(g, deg - 1);
    FreeSlots hi = free_slots(g, deg);
    i64 MM = M * lift;
    SolutionModule sm(hi.count + lo.count, MM);
    detail::for_each_delta_row(g, deg - 1, lo, [&](i64 idx, const SparseRow& row) {
        int f = hi.free_of[idx];
        SparseRow r;
        r.push_back({f, lift});
        for (const auto& t : row) r.push_back({hi.count + t.col, -t.coef});
        sm.impose(r, 0);
    });
    // project kernel generators onto the d-part, mod M
    Mat proj;
    for (const auto& gen : sm.generators()) {
        Vec d(gen.begin(), gen.begin() + hi.count);
        bool nz = false;
        for (auto& v : d) {
            v = mod_reduce(v, M);
            if (v) nz = true;
        }
        if (nz) proj.push_back(std::move(d));
    }
    return howell_form(std::move(proj), M);
}

namespace detail {

// cached degree-2 k*-coboundary lattice, keyed by (group, modulus, lift)
inline const Mat& kstar_lattice_for(const FiniteGroup& g, i64 M, i64 lift) {
    static std::mutex mu;
    static std::map<std::vector<i64>, Mat> cache;
    std::vector<i64> key;
    key.reserve(g.flat_table().size() + 2);
    for (int v : g.flat_table()) key.push_back(v);
    key.push_back(M);
    key.push_back(lift);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Mat D = kstar_coboundary_lattice(g, 2, M, lift);
    return cache.emplace(std::move(key), std::move(D)).first->second;
}

}  // namespace detail

// all normalized deg-cocycles mod M, lexicographically sorted
inline std::vector<Cochain> enumerate_cocycles(const FiniteGroup& g, int deg, i64 M,
                                               i64 limit = 1 << 20) {
    FreeSlots fs = free_slots(g, deg);
    Mat basis = cocycle_space(g, deg, M);
    i64 size = span_size(basis, M);
    if (size > limit) throw TooLargeError("cocycle enumeration of size " + std::to_string(size));
    Mat all = enumerate_span(basis, fs.count, M, limit);
    std::sort(all.begin(), all.end());
    std::vector<Cochain> out;
    out.reserve(all.size());
    for (const auto& fv : all) out.push_back(detail::from_free_vector(g, deg, M, fs, fv));
    return out;
}

inline i64 cocycle_count(const FiniteGroup& g, int deg, i64 M) {
    return span_size(cocycle_space(g, deg, M), M);
}

struct CohomologyGroup {
    FiniteGroup group;
    int degree = 0;
    Vec invariant_factors;                // d1 | d2 | ..., all > 1
    std::vector<Cochain> representatives; // modulus |G|, one per factor
};

inline i64 cohomology_order(const CohomologyGroup& h) {
    i64 o = 1;
    for (i64 d : h.invariant_factors) o *= d;
    return o;
}

namespace detail {

// H^deg(G,k*) as H^{deg+1}(G,Z): integral kernel/image quotient
inline CohomologyGroup cohomology_integral(const FiniteGroup& g, int deg) {
    int d1 = deg + 1;
    FreeSlots lo = free_slots(g, d1);
    // integral cocycles in degree deg+1
    SolutionModule ker(lo.count, 0);
    detail::for_each_delta_row(g, d1, lo, [&](i64, const SparseRow& row) { ker.impose(row, 0); });
    ker.canonicalize();
    const Mat& K = ker.generators();
    int r = (int)K.size();
    // integral coboundaries from degree deg
    FreeSlots lo0 = free_slots(g, deg);
    Mat img(lo0.count, Vec(lo.count, 0));
    detail::for_each_delta_row(g, deg, lo0, [&](i64 idx, const SparseRow& row) {
        int f = lo.free_of[idx];
        for (const auto& t : row) img[t.col][f] = t.coef;
    });
    // express each image generator in the kernel basis: K^T x = img_j
    Mat X(r, Vec(img.size(), 0));
    for (size_t j = 0; j < img.size(); ++j) {
        SolutionModule solve(r, 0);
        for (int coord = 0; coord < lo.count; ++coord) {
            SparseRow row;
            for (int i = 0; i < r; ++i)
                if (K[i][coord]) row.push_back({i, K[i][coord]});
            if (!solve.impose(row, img[j][coord]))
                throw ConsistencyError("coboundary outside the cocycle lattice");
        }
        solve.canonicalize();
        for (int i = 0; i < r; ++i) X[i][j] = solve.particular()[i];
    }
    Smith sm = smith_form(X);
    if (sm.rank() != r)
        throw ConsistencyError("cohomology of a finite group must be finite");
    CohomologyGroup out{g, deg, {}, {}};
    i64 n = g.order();
    for (int i = 0; i < r; ++i) {
        i64 di = sm.diag[i];
        if (di <= 1) continue;
        out.invariant_factors.push_back(di);
        // integral cocycle z = K^T * (Uinv e_i); k*-rep: solve delta c = |G| z
        Vec z(lo.count, 0);
        for (int t = 0; t < r; ++t)
            for (int coord = 0; coord < lo.count; ++coord)
                z[coord] = detail::checked(z[coord] + (__int128)sm.Uinv[t][i] * K[t][coord]);
        SolutionModule lift(lo0.count, 0);
        bool ok = true;
        detail::for_each_delta_row(g, deg, lo0, [&](i64 idx, const SparseRow& row) {
            if (!ok) return;
            ok = lift.impose(row, detail::checked((__int128)n * z[lo.free_of[idx]]));
        });
        if (!ok) throw ConsistencyError("class order does not divide the group order");
        lift.canonicalize();
        Vec fv = lift.particular();
        out.representatives.push_back(detail::from_free_vector(g, deg, n, lo0, fv));
    }
    std::sort(out.invariant_factors.begin(), out.invariant_factors.end());
    return out;
}

// H^deg(G,k*) as Z^deg(G, mu_|G|) / (k*-coboundaries), presented over Z
inline CohomologyGroup cohomology_modular(const FiniteGroup& g, int deg) {
    i64 M = g.order();
    FreeSlots fs = free_slots(g, deg);
    Mat Z = cocycle_space(g, deg, M);
    int s = (int)Z.size();
    Mat D = kstar_coboundary_lattice(g, deg, M, g.order());
    Mat rel;
    // coefficient relations: { c : sum c_i Z_i == 0 mod M }  plus  M e_i
    {
        SolutionModule sm(s, M);
        for (int coord = 0; coord < fs.count; ++coord) {
            SparseRow row;
            for (int i = 0; i < s; ++i)
                if (Z[i][coord]) row.push_back({i, Z[i][coord]});
            sm.impose(row, 0);
        }
        sm.canonicalize();
        for (const auto& gen : sm.generators()) rel.push_back(gen);
        for (int i = 0; i < s; ++i) {
            Vec e(s, 0);
            e[i] = M;
            rel.push_back(std::move(e));
        }
    }
    // each k*-coboundary generator expressed in the cocycle basis
    for (const auto& h : D) {
        SolutionModule sm(s, M);
        for (int coord = 0; coord < fs.count; ++coord) {
            SparseRow row;
            for (int i = 0; i < s; ++i)
                if (Z[i][coord]) row.push_back({i, Z[i][coord]});
            if (!sm.impose(row, h[coord]))
                throw ConsistencyError("k*-coboundary outside the cocycle span");
        }
        sm.canonicalize();
        rel.push_back(sm.particular());
    }
    // quotient Z^s / columns(rel^T)
    Mat R(s, Vec(rel.size(), 0));
    for (size_t j = 0; j < rel.size(); ++j)
        for (int i = 0; i < s; ++i) R[i][j] = rel[j][i];
    Smith sm = smith_form(R);
    if (sm.rank() != s) throw ConsistencyError("cohomology of a finite group must be finite");
    CohomologyGroup out{g, deg, {}, {}};
    for (int i = 0; i < s; ++i) {
        i64 di = sm.diag[i];
        if (di <= 1) continue;
        out.invariant_factors.push_back(di);
        Vec fv(fs.count, 0);
        for (int t = 0; t < s; ++t)
            for (int coord = 0; coord < fs.count; ++coord)
                fv[coord] = mod_reduce(
                    detail::checked(fv[coord] + (__int128)sm.Uinv[t][i] * Z[t][coord]), M);
        out.representatives.push_back(detail::from_free_vector(g, deg, M, fs, fv));
    }
    std::sort(out.invariant_factors.begin(), out.invariant_factors.end());
    return out;
}

}  // namespace detail

// H^deg(G, k*), exactly. Small instances take the integral route through
// H^{deg+1}(G, Z); larger ones the modulus-|G| route with the k*-coboundary
// lattice. Both are exact and agree (cross-checked in the test suite).
inline CohomologyGroup cohomology_group(const FiniteGroup& g, int deg,
                                        i64 max_cells = 300000) {
    if (deg < 1) throw InputError("cohomology degree must be >= 1");
    i64 base = g.order() > 1 ? g.order() - 1 : 1;
    i64 f1 = 1;
    for (int i = 0; i < deg + 1; ++i) f1 *= base;  // free slots in degree deg+1
    if (f1 * base * f1 <= max_cells) return detail::cohomology_integral(g, deg);
    if (f1 <= 3500) return detail::cohomology_modular(g, deg);
    throw TooLargeError("cohomology computation beyond the configured bound");
}

// first k*-nontrivial 3-cocycle mod |G| in the canonical kernel basis, reduced
// modulo coboundaries; nullopt exactly when H^3(G,k*) = 0
inline std::optional<Cochain> nontrivial_three_cocycle(const FiniteGroup& g) {
    static std::mutex mu;
    static std::map<std::vector<int>, std::optional<Cochain>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(g.flat_table());
        if (it != cache.end()) return it->second;
    }
    i64 M = g.order();
    std::optional<Cochain> result;
    if (M > 1) {
        FreeSlots fs = free_slots(g, 3);
        Mat basis = cocycle_space(g, 3, M);
        Mat cob = coboundary_space(g, 3, M);
        for (const auto& fv : basis) {
            Cochain c = detail::from_free_vector(g, 3, M, fs, fv);
            if (!solve_coboundary(c, g.order()).has_value()) {
                Vec red = reduce_by_span(fv, cob, M);
                result = detail::from_free_vector(g, 3, M, fs, red);
                break;
            }
        }
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(g.flat_table(), result);
    return result;
}

}  // namespace cliffcat
