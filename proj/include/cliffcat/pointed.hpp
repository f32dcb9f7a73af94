#pragma once

// Pointed categories (K, omega) and their indecomposable module data (L, psi)
// with delta(psi) = omega|_L. Conjugation transport, equivalence testing and
// the direct classification oracle.

#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cliffcat/cohomology.hpp"
#include "cliffcat/groups.hpp"

namespace cliffcat {

class PointedCategory {
public:
    PointedCategory(FiniteGroup group, Cochain omega, std::string label = "")
        : group_(std::move(group)), omega_(std::move(omega)), label_(std::move(label)) {
        if (!omega_.group().same_table(group_))
            throw InputError("associator lives on the wrong group");
        if (omega_.degree() != 3) throw InputError("associator must be a 3-cochain");
        if (!is_cocycle(omega_)) throw NotCocycleError("associator fails the cocycle condition");
        if (label_.empty()) label_ = "Vec[" + group_.label() + "]";
    }

    static PointedCategory untwisted(FiniteGroup group, std::string label = "") {
        Cochain zero(group, 3, 1);
        return PointedCategory(std::move(group), std::move(zero), std::move(label));
    }

    const FiniteGroup& group() const { return group_; }
    const Cochain& omega() const { return omega_; }
    const std::string& label() const { return label_; }

    // modulus at which module 2-cochains are stored
    i64 psi_modulus() const { return std::lcm(omega_.modulus(), (i64)group_.order()); }

    bool same_category(const PointedCategory& o) const {
        return group_.same_table(o.group_) && omega_.modulus() == o.omega_.modulus() &&
               omega_.values() == o.omega_.values();
    }

    // embedded associator value at psi_modulus()
    i64 omega_at(int a, int b, int c) const {
        int n = group_.order();
        i64 v = omega_.at_index(((i64)a * n + b) * n + c);
        return mod_reduce(v * (psi_modulus() / omega_.modulus()), psi_modulus());
    }

    std::vector<i64> cache_key() const {
        std::vector<i64> k;
        for (int v : group_.flat_table()) k.push_back(v);
        k.push_back(-1);
        k.push_back(omega_.modulus());
        for (i64 v : omega_.values()) k.push_back(v);
        return k;
    }

private:
    FiniteGroup group_;
    Cochain omega_;
    std::string label_;
};

class ModuleData {
public:
    ModuleData(PointedCategory category, Subgroup subgroup, Cochain psi)
        : category_(std::move(category)), subgroup_(std::move(subgroup)), psi_(std::move(psi)) {
        if (!subgroup_.parent().same_table(category_.group()))
            throw InputError("module subgroup lives in the wrong group");
        if (psi_.degree() != 2) throw InputError("module cochain must have degree 2");
        if (psi_.modulus() != category_.psi_modulus())
            throw InputError("module cochain stored at the wrong modulus");
        if (psi_.group().order() != subgroup_.size())
            throw InputError("module cochain lives on the wrong group");
        Cochain expected =
            restrict_cochain(category_.omega(), subgroup_).embedded(category_.psi_modulus());
        if (coboundary(psi_) != expected)
            throw InvariantBrokenError("delta(psi) differs from the restricted associator");
    }

    const PointedCategory& category() const { return category_; }
    const Subgroup& subgroup() const { return subgroup_; }
    const Cochain& psi() const { return psi_; }

    bool operator==(const ModuleData& o) const {
        return category_.same_category(o.category_) &&
               subgroup_.elements() == o.subgroup_.elements() && psi_.values() == o.psi_.values();
    }

private:
    PointedCategory category_;
    Subgroup subgroup_;
    Cochain psi_;
};

// conjugation transport of (L, psi) along x: subgroup xLx^-1 and
// psi'(xax^-1, xbx^-1) = psi(a,b) - w(a',b',x) - w(x,a,b) + w(a',x,b)
// at the common modulus. The result's invariant is asserted by construction.
inline ModuleData transport(int x, const ModuleData& m) {
    const PointedCategory& C = m.category();
    const FiniteGroup& K = C.group();
    const Subgroup& L = m.subgroup();
    Subgroup Lp = L.conjugate(x);
    FiniteGroup Sp = Lp.as_group();
    i64 M = C.psi_modulus();
    Vec vals(Cochain::tuple_count(Sp.order(), 2), 0);
    int sz = L.size();
    for (int ia = 0; ia < sz; ++ia)
        for (int ib = 0; ib < sz; ++ib) {
            int a = L.elements()[ia], b = L.elements()[ib];
            int ap = K.conj(x, a), bp = K.conj(x, b);
            i64 v = m.psi().at_index((i64)ia * sz + ib);
            v -= C.omega_at(ap, bp, x);
            v -= C.omega_at(x, a, b);
            v += C.omega_at(ap, x, b);
            vals[(i64)Lp.position_of(ap) * sz + Lp.position_of(bp)] = mod_reduce(v, M);
        }
    return ModuleData(C, std::move(Lp), Cochain(std::move(Sp), 2, M, std::move(vals)));
}

namespace detail {

// Howell basis of the mod-M_psi differences that are k*-coboundaries on L
inline const Mat& kstar_lattice(const PointedCategory& C, const Subgroup& L) {
    static std::mutex mu;
    static std::map<std::vector<i64>, Mat> cache;
    std::vector<i64> key;
    FiniteGroup S = L.as_group();
    for (int v : S.flat_table()) key.push_back(v);
    key.push_back(C.psi_modulus());
    key.push_back(C.group().order());
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Mat D = kstar_coboundary_lattice(S, 2, C.psi_modulus(), C.group().order());
    return cache.emplace(std::move(key), std::move(D)).first->second;
}

struct ClassKey {
    std::vector<int> subgroup;
    Vec psi;
    bool operator<(const ClassKey& o) const {
        if (subgroup != o.subgroup) return subgroup < o.subgroup;
        return psi < o.psi;
    }
    bool operator==(const ClassKey& o) const {
        return subgroup == o.subgroup && psi == o.psi;
    }
};

inline ClassKey reduced_state(const PointedCategory& C, const ModuleData& m) {
    FreeSlots fs = free_slots(m.psi().group(), 2);
    Vec fv = to_free_vector(m.psi(), fs);
    fv = reduce_by_span(std::move(fv), kstar_lattice(C, m.subgroup()), C.psi_modulus());
    return {m.subgroup().elements(), std::move(fv)};
}

inline ModuleData from_state(const PointedCategory& C, const ClassKey& key) {
    Subgroup L(C.group(), key.subgroup);
    FiniteGroup S = L.as_group();
    FreeSlots fs = free_slots(S, 2);
    return ModuleData(C, L, from_free_vector(S, 2, C.psi_modulus(), fs, key.psi));
}

// canonical class key: closure of the data under one-step transports followed
// by reduction modulo the k*-coboundary lattice; the minimum state is the key
inline ClassKey canonical_key(const ModuleData& m) {
    const PointedCategory& C = m.category();
    std::set<ClassKey> seen;
    std::vector<ClassKey> frontier;
    ClassKey start = reduced_state(C, m);
    seen.insert(start);
    frontier.push_back(start);
    while (!frontier.empty()) {
        std::vector<ClassKey> next;
        for (const auto& st : frontier) {
            ModuleData cur = from_state(C, st);
            for (int x = 0; x < C.group().order(); ++x) {
                ClassKey k = reduced_state(C, transport(x, cur));
                if (seen.insert(k).second) next.push_back(k);
            }
        }
        frontier = std::move(next);
    }
    return *seen.begin();
}

}  // namespace detail

inline ModuleData canonical_representative(const ModuleData& m) {
    return detail::from_state(m.category(), detail::canonical_key(m));
}

// spec relation: some transport matches the subgroup and shifts psi by a
// k*-coboundary (decided at lift_factor |K|)
inline bool modules_equivalent(const ModuleData& m1, const ModuleData& m2) {
    if (!m1.category().same_category(m2.category()))
        throw CategoryMismatchError("module data over different categories");
    const PointedCategory& C = m1.category();
    FreeSlots fs = free_slots(m2.psi().group(), 2);
    const Mat& D = detail::kstar_lattice(C, m2.subgroup());
    for (int x = 0; x < C.group().order(); ++x) {
        ModuleData t = transport(x, m1);
        if (t.subgroup().elements() != m2.subgroup().elements()) continue;
        Vec diff = to_free_vector(m2.psi() - t.psi(), fs);
        if (in_span(diff, D, C.psi_modulus())) return true;
    }
    return false;
}

// trivialization of omega|_X at lift_factor |U|, or nullopt when obstructed
inline std::optional<Cochain> pointed_obstruction(const FiniteGroup& U, const Cochain& omega,
                                                  const Subgroup& X) {
    if (!omega.group().same_table(U)) throw InputError("associator lives on the wrong group");
    return solve_coboundary(restrict_cochain(omega, X), U.order());
}

namespace detail {

inline const std::vector<ClassKey>& class_keys(const PointedCategory& C, int max_order) {
    static std::mutex mu;
    static std::map<std::vector<i64>, std::vector<ClassKey>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(C.cache_key());
        if (it != cache.end()) return it->second;
    }
    const FiniteGroup& K = C.group();
    i64 M = C.psi_modulus();
    std::set<detail::ClassKey> classes;
    for (const Subgroup& L : subgroups(K, max_order)) {
        FiniteGroup S = L.as_group();
        FreeSlots lo = free_slots(S, 2);
        Cochain target = restrict_cochain(C.omega(), L).embedded(M);
        SolutionModule sm(lo.count, M);
        bool ok = true;
        detail::for_each_delta_row(S, 2, lo, [&](i64 idx, const SparseRow& row) {
            if (!ok) return;
            ok = sm.impose(row, target.at_index(idx));
        });
        if (!ok || !sm.feasible()) {
            // the subgroup contributes nothing; guard the modulus choice
            if (pointed_obstruction(K, C.omega(), L).has_value())
                throw ConsistencyError(
                    "psi modulus too small: omega|_L trivializes in k* but not at lcm(M,|K|)");
            continue;
        }
        sm.canonicalize();
        Vec psi0 = sm.particular();
        Mat z2 = cocycle_space(S, 2, M);
        const Mat& D = detail::kstar_lattice(C, L);
        // representatives of Z^2 modulo the k*-coboundary lattice
        std::set<Vec> reps;
        std::vector<Vec> frontier;
        Vec zero = reduce_by_span(Vec(lo.count, 0), D, M);
        reps.insert(zero);
        frontier.push_back(zero);
        while (!frontier.empty()) {
            std::vector<Vec> next;
            for (const auto& r : frontier)
                for (const auto& g : z2) {
                    Vec s(lo.count);
                    for (int i = 0; i < lo.count; ++i) s[i] = mod_reduce(r[i] + g[i], M);
                    s = reduce_by_span(std::move(s), D, M);
                    if (reps.insert(s).second) next.push_back(std::move(s));
                }
            frontier = std::move(next);
        }
        for (const auto& r : reps) {
            Vec fv(lo.count);
            for (int i = 0; i < lo.count; ++i) fv[i] = mod_reduce(psi0[i] + r[i], M);
            ModuleData cand(C, L, detail::from_free_vector(S, 2, M, lo, fv));
            classes.insert(detail::canonical_key(cand));
        }
    }
    std::vector<ClassKey> keys(classes.begin(), classes.end());
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(C.cache_key(), std::move(keys)).first->second;
}

}  // namespace detail

// one canonical representative per equivalence class of module data
inline std::vector<ModuleData> module_classes(const PointedCategory& C, int max_order = 16) {
    const auto& keys = detail::class_keys(C, max_order);
    std::vector<ModuleData> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(detail::from_state(C, k));
    return out;
}

// index of the class of m in the canonical class list
inline int class_index(const ModuleData& m, int max_order = 16) {
    const auto& keys = detail::class_keys(m.category(), max_order);
    detail::ClassKey k = detail::canonical_key(m);
    auto it = std::lower_bound(keys.begin(), keys.end(), k);
    if (it == keys.end() || !(*it == k))
        throw Error("module class not found in the classification");
    return (int)(it - keys.begin());
}

}  // namespace cliffcat
