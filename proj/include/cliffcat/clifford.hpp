#pragma once

// The Clifford engine for graded pointed categories: the induced action of
// the grading group on trivial-component module classes, orbits, stabilizers,
// invariance, restriction pieces, and the annotated classification.

#include <map>
#include <mutex>
#include <set>
#include <vector>

#include "cliffcat/pointed.hpp"

namespace cliffcat {

class GradedPointedCategory {
public:
    GradedPointedCategory(PointedCategory category, Subgroup kernel)
        : category_(std::move(category)),
          kernel_(std::move(kernel)),
          qmap_(make_quotient(category_, kernel_)),
          trivial_component_(make_trivial_component(category_, kernel_)) {}

    const PointedCategory& category() const { return category_; }
    const Subgroup& kernel() const { return kernel_; }
    const QuotientMap& quotient_map() const { return qmap_; }
    const FiniteGroup& grading_group() const { return qmap_.quotient(); }
    const PointedCategory& trivial_component() const { return trivial_component_; }

    // module data over the trivial component, moved into full-category coords
    ModuleData embed(const ModuleData& ce) const {
        if (!ce.category().same_category(trivial_component_))
            throw CategoryMismatchError("data is not over the trivial component");
        std::vector<int> elems;
        for (int p : ce.subgroup().elements()) elems.push_back(kernel_.elements()[p]);
        Subgroup L(category_.group(), std::move(elems));
        Cochain psi = ce.psi().embedded(category_.psi_modulus());
        // same sorted order, so the value table carries over verbatim
        return ModuleData(category_, L,
                          Cochain(L.as_group(), 2, category_.psi_modulus(), psi.values()));
    }

    // full-category data with subgroup inside the kernel, moved to C_e coords
    ModuleData project(const ModuleData& full) const {
        if (!full.category().same_category(category_))
            throw CategoryMismatchError("data is not over the graded category");
        std::vector<int> pos;
        for (int e : full.subgroup().elements()) {
            if (!kernel_.contains(e))
                throw InputError("subgroup does not lie in the trivial component");
            pos.push_back(kernel_.position_of(e));
        }
        Subgroup L(kernel_.as_group(), std::move(pos));
        i64 Me = trivial_component_.psi_modulus();
        i64 r = category_.psi_modulus() / Me;
        Vec vals = full.psi().values();
        for (auto& v : vals) {
            if (v % r != 0)
                throw ConsistencyError("transported data does not descend to the C_e modulus");
            v /= r;
        }
        return ModuleData(trivial_component_, L, Cochain(L.as_group(), 2, Me, std::move(vals)));
    }

    std::vector<i64> cache_key() const {
        std::vector<i64> k = category_.cache_key();
        k.push_back(-2);
        for (int e : kernel_.elements()) k.push_back(e);
        return k;
    }

private:
    static QuotientMap make_quotient(const PointedCategory& c, const Subgroup& n) {
        if (!n.parent().same_table(c.group()))
            throw InputError("grading kernel lives in the wrong group");
        return quotient(c.group(), n);  // throws NotNormal when appropriate
    }

    static PointedCategory make_trivial_component(const PointedCategory& c, const Subgroup& n) {
        return PointedCategory(n.as_group(), restrict_cochain(c.omega(), n),
                               c.label() + "_e");
    }

    PointedCategory category_;
    Subgroup kernel_;
    QuotientMap qmap_;
    PointedCategory trivial_component_;
};

namespace detail {

struct GradedContext {
    std::vector<ModuleData> ce_classes;
    std::vector<std::vector<int>> act;  // act[sigma][i] = class index
};

// transports the C_e class by every lift of sigma, asserting lift independence,
// and returns the class index of the least-lift result
inline int g_action_index(const GradedPointedCategory& gc, int sigma, const ModuleData& ce) {
    ModuleData full = gc.embed(ce);
    int result = -1;
    bool first = true;
    for (int x = 0; x < gc.category().group().order(); ++x) {
        if (gc.quotient_map().project(x) != sigma) continue;
        ModuleData moved = gc.project(transport(x, full));
        int idx = class_index(moved);
        if (first) {
            result = idx;
            first = false;
        } else if (idx != result) {
            throw LiftDependenceError("two lifts of a grading element act differently");
        }
    }
    return result;
}

inline const GradedContext& graded_context(const GradedPointedCategory& gc) {
    static std::mutex mu;
    static std::map<std::vector<i64>, GradedContext> cache;
    std::vector<i64> key = gc.cache_key();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    GradedContext ctx;
    ctx.ce_classes = module_classes(gc.trivial_component());
    const FiniteGroup& G = gc.grading_group();
    ctx.act.assign(G.order(), std::vector<int>(ctx.ce_classes.size()));
    for (int s = 0; s < G.order(); ++s)
        for (size_t i = 0; i < ctx.ce_classes.size(); ++i)
            ctx.act[s][i] = g_action_index(gc, s, ctx.ce_classes[i]);
    // G-action laws on indices
    for (size_t i = 0; i < ctx.ce_classes.size(); ++i)
        if (ctx.act[G.identity()][i] != (int)i)
            throw ConsistencyError("identity grading element does not act trivially");
    for (int s = 0; s < G.order(); ++s)
        for (int t = 0; t < G.order(); ++t)
            for (size_t i = 0; i < ctx.ce_classes.size(); ++i)
                if (ctx.act[G.mul(s, t)][i] != ctx.act[s][ctx.act[t][i]])
                    throw ConsistencyError("grading action fails the composition law");
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(std::move(key), std::move(ctx)).first->second;
}

}  // namespace detail

// class of  C_sigma ⊠ m  as a trivial-component class; every lift of sigma is
// transported and lift independence is asserted
inline ModuleData g_action(const GradedPointedCategory& gc, int sigma, const ModuleData& m) {
    const auto& ctx = detail::graded_context(gc);
    return ctx.ce_classes[detail::g_action_index(gc, sigma, m)];
}

inline Subgroup stabilizer(const GradedPointedCategory& gc, const ModuleData& m) {
    const auto& ctx = detail::graded_context(gc);
    int i = class_index(m);
    std::vector<int> elems;
    for (int s = 0; s < gc.grading_group().order(); ++s)
        if (ctx.act[s][i] == i) elems.push_back(s);
    return Subgroup(gc.grading_group(), std::move(elems));
}

// classes of the trivial component fixed by every element of S
inline std::vector<ModuleData> invariant_classes(const GradedPointedCategory& gc,
                                                 const Subgroup& S) {
    if (!S.parent().same_table(gc.grading_group()))
        throw InputError("invariance subgroup lives in the wrong group");
    const auto& ctx = detail::graded_context(gc);
    std::vector<ModuleData> out;
    for (size_t i = 0; i < ctx.ce_classes.size(); ++i) {
        bool fixed = true;
        for (int s : S.elements())
            if (ctx.act[s][i] != (int)i) {
                fixed = false;
                break;
            }
        if (fixed) out.push_back(ctx.ce_classes[i]);
    }
    return out;
}

struct OmegaAction {
    std::vector<ModuleData> classes;     // the orbit, canonical order
    std::vector<std::vector<int>> action;  // action[sigma][j] within the orbit
};

// the G-set of trivial-component classes of the category induced from m
inline OmegaAction omega_of_induced(const GradedPointedCategory& gc, const ModuleData& m) {
    const auto& ctx = detail::graded_context(gc);
    int seed = class_index(m);
    std::set<int> orbit = {seed};
    std::vector<int> frontier = {seed};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int i : frontier)
            for (int s = 0; s < gc.grading_group().order(); ++s) {
                int j = ctx.act[s][i];
                if (orbit.insert(j).second) next.push_back(j);
            }
        frontier = std::move(next);
    }
    std::vector<int> idx(orbit.begin(), orbit.end());
    std::map<int, int> where;
    for (size_t i = 0; i < idx.size(); ++i) where[idx[i]] = (int)i;
    OmegaAction out;
    for (int i : idx) out.classes.push_back(ctx.ce_classes[i]);
    out.action.assign(gc.grading_group().order(), std::vector<int>(idx.size()));
    for (int s = 0; s < gc.grading_group().order(); ++s)
        for (size_t j = 0; j < idx.size(); ++j) out.action[s][j] = where.at(ctx.act[s][idx[j]]);
    return out;
}

// the C_e pieces of the module category of a full-category witness (L, psi):
// one per coset of S = projection(L), plus S itself
inline std::pair<std::vector<ModuleData>, Subgroup> restriction_decomposition(
    const GradedPointedCategory& gc, const ModuleData& witness) {
    if (!witness.category().same_category(gc.category()))
        throw CategoryMismatchError("witness is not over the graded category");
    const FiniteGroup& G = gc.grading_group();
    std::set<int> img;
    for (int e : witness.subgroup().elements()) img.insert(gc.quotient_map().project(e));
    Subgroup S(G, std::vector<int>(img.begin(), img.end()));
    // base piece: (L ∩ N, psi|) as a trivial-component class
    Subgroup LN = intersect(witness.subgroup(), gc.kernel());
    std::vector<int> pos;
    for (int e : LN.elements()) pos.push_back(witness.subgroup().position_of(e));
    Subgroup sub_in_L(witness.psi().group(), pos);
    Cochain psiLN = restrict_cochain(witness.psi(), sub_in_L);
    ModuleData base_full(gc.category(), LN,
                         Cochain(LN.as_group(), 2, gc.category().psi_modulus(), psiLN.values()));
    ModuleData base = gc.project(base_full);
    const auto& ctx = detail::graded_context(gc);
    int base_idx = class_index(base);
    // cosets of S ordered by least element
    std::set<std::vector<int>> cosets;
    for (int s = 0; s < G.order(); ++s) {
        std::vector<int> cs;
        for (int t : S.elements()) cs.push_back(G.mul(s, t));
        std::sort(cs.begin(), cs.end());
        cosets.insert(std::move(cs));
    }
    std::vector<std::vector<int>> ordered(cosets.begin(), cosets.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    std::vector<ModuleData> pieces;
    for (const auto& cs : ordered) pieces.push_back(ctx.ce_classes[ctx.act[cs[0]][base_idx]]);
    return {std::move(pieces), std::move(S)};
}

struct CliffordClass {
    Subgroup stabilizer;          // S = projection of the witness subgroup
    ModuleData base;              // canonical C_e class of the identity piece
    std::vector<int> pieces;      // class index per coset of S (repeats allowed)
    std::vector<int> orbit;       // distinct class indices, sorted
    ModuleData witness;           // the oracle class over the full category
};

// annotate every oracle class of the graded category with its Clifford data,
// verifying the theorem-level consistency assertions
inline std::vector<CliffordClass> classify_graded(const GradedPointedCategory& gc,
                                                  int max_order = 16) {
    const auto& ctx = detail::graded_context(gc);
    const FiniteGroup& G = gc.grading_group();
    std::vector<CliffordClass> out;
    for (const ModuleData& w : module_classes(gc.category(), max_order)) {
        auto [pieces, S] = restriction_decomposition(gc, w);
        std::vector<int> piece_idx;
        for (const auto& p : pieces) piece_idx.push_back(class_index(p));
        int base_idx = piece_idx.empty() ? -1 : piece_idx[0];
        if ((int)pieces.size() != G.order() / S.size())
            throw ConsistencyError("piece count differs from the coset count");
        // (a) transitivity: the distinct pieces are one orbit of the action
        std::set<int> distinct(piece_idx.begin(), piece_idx.end());
        std::set<int> orbit;
        for (int s = 0; s < G.order(); ++s) orbit.insert(ctx.act[s][base_idx]);
        if (distinct != orbit)
            throw ConsistencyError("restriction pieces do not form a single orbit");
        // (b) orbit-stabilizer at class level
        Subgroup st = stabilizer(gc, ctx.ce_classes[base_idx]);
        if ((int)orbit.size() * st.size() != G.order())
            throw ConsistencyError("orbit size times stabilizer order differs from |G|");
        // (c) the projection stabilizes the base class, and the piece map is
        //     a morphism of G-sets on cosets of S
        for (int s : S.elements())
            if (ctx.act[s][base_idx] != base_idx)
                throw ConsistencyError("projection of the witness subgroup moves the base class");
        {
            std::vector<std::vector<int>> ordered;
            for (int s = 0; s < G.order(); ++s) {
                std::vector<int> cs;
                for (int t : S.elements()) cs.push_back(G.mul(s, t));
                std::sort(cs.begin(), cs.end());
                ordered.push_back(std::move(cs));
            }
            std::sort(ordered.begin(), ordered.end());
            ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a[0] < b[0]; });
            auto coset_of = [&](int g) {
                for (size_t c = 0; c < ordered.size(); ++c)
                    if (std::binary_search(ordered[c].begin(), ordered[c].end(), g))
                        return (int)c;
                throw Error("coset lookup failed");
            };
            for (int s = 0; s < G.order(); ++s)
                for (size_t c = 0; c < ordered.size(); ++c) {
                    int tgt = coset_of(G.mul(s, ordered[c][0]));
                    if (ctx.act[s][piece_idx[c]] != piece_idx[tgt])
                        throw ConsistencyError("piece assignment is not a G-set morphism");
                }
        }
        out.push_back(CliffordClass{S, ctx.ce_classes[base_idx], piece_idx,
                                    std::vector<int>(orbit.begin(), orbit.end()), w});
    }
    return out;
}

// classes of the trivial component, with the action table (for reports)
inline OmegaAction full_action(const GradedPointedCategory& gc) {
    const auto& ctx = detail::graded_context(gc);
    return {ctx.ce_classes, ctx.act};
}

}  // namespace cliffcat
