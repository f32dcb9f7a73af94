#pragma once

// Extension classification for graded pointed categories in the split case:
// splittings of deg as nonabelian 1-cocycles, their obstructions, the torsor
// of compatible 2-cochains, and the pairwise equivalence of extension data.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "cliffcat/clifford.hpp"
#include "cliffcat/cohomology.hpp"
#include "cliffcat/groups.hpp"

namespace cliffcat {

// the exact sequence U(C_e) -> U(C) -> G realized by a quotient map
struct DegSequence {
    FiniteGroup total;  // U(C)
    Subgroup fiber;     // U(C_e), the kernel of deg
    QuotientMap deg;

    DegSequence(FiniteGroup U, Subgroup Ue)
        : total(std::move(U)), fiber(std::move(Ue)), deg(quotient(total, fiber)) {}
};

class OneCocycle {
public:
    OneCocycle(GroupAction action, std::vector<int> theta)
        : action_(std::move(action)), theta_(std::move(theta)) {
        const FiniteGroup& G = action_.actor();
        const FiniteGroup& N = action_.target();
        if ((int)theta_.size() != G.order()) throw InputError("1-cocycle size mismatch");
        if (theta_[G.identity()] != N.identity())
            throw InputError("1-cocycle must be normalized at the identity");
        for (int s = 0; s < G.order(); ++s)
            for (int t = 0; t < G.order(); ++t)
                if (theta_[G.mul(s, t)] != N.mul(theta_[s], action_.apply(s, theta_[t])))
                    throw InputError("1-cocycle law theta(st) = theta(s)*s(theta(t)) fails");
    }

    const GroupAction& action() const { return action_; }
    const std::vector<int>& values() const { return theta_; }
    int at(int sigma) const { return theta_[sigma]; }

    // (u . theta)_s = u * theta_s * s(u^-1)
    OneCocycle acted_by(int u) const {
        const FiniteGroup& G = action_.actor();
        const FiniteGroup& N = action_.target();
        std::vector<int> v(G.order());
        for (int s = 0; s < G.order(); ++s)
            v[s] = N.mul(N.mul(u, theta_[s]), action_.apply(s, N.inv(u)));
        return OneCocycle(action_, std::move(v));
    }

    bool operator==(const OneCocycle& o) const { return theta_ == o.theta_; }
    bool operator<(const OneCocycle& o) const { return theta_ < o.theta_; }

private:
    GroupAction action_;
    std::vector<int> theta_;
};

// all 1-cocycles G -> N for the action, canonically ordered
inline std::vector<OneCocycle> z1_cocycles(const GroupAction& act, i64 bound = 1 << 20) {
    const FiniteGroup& G = act.actor();
    const FiniteGroup& N = act.target();
    // greedy generating sequence of G with BFS words
    std::vector<int> gens;
    Subgroup cur = Subgroup::trivial(G);
    while (cur.size() < G.order())
        for (int g = 0; g < G.order(); ++g)
            if (!cur.contains(g)) {
                gens.push_back(g);
                cur = Subgroup::generated(G, gens);
                break;
            }
    i64 count = 1;
    for (size_t i = 0; i < gens.size(); ++i) {
        count *= N.order();
        if (count > bound) throw TooLargeError("1-cocycle search space");
    }
    std::vector<std::pair<int, int>> word(G.order(), {-1, -1});
    std::vector<int> bfs = {G.identity()};
    std::vector<bool> seen(G.order(), false);
    seen[G.identity()] = true;
    for (size_t h = 0; h < bfs.size(); ++h)
        for (int gi = 0; gi < (int)gens.size(); ++gi) {
            int x = G.mul(bfs[h], gens[gi]);
            if (!seen[x]) {
                seen[x] = true;
                word[x] = {bfs[h], gi};
                bfs.push_back(x);
            }
        }
    std::set<std::vector<int>> found;
    std::vector<int> pick(gens.size(), 0);
    while (true) {
        std::vector<int> th(G.order(), -1);
        th[G.identity()] = N.identity();
        for (int x : bfs)
            if (word[x].first >= 0) {
                int prev = word[x].first, gi = word[x].second;
                // theta(prev * gen) = theta(prev) * prev(theta(gen))
                th[x] = N.mul(th[prev], act.apply(prev, pick[gi]));
            }
        bool ok = true;
        for (int s = 0; s < G.order() && ok; ++s)
            for (int t = 0; t < G.order() && ok; ++t)
                if (th[G.mul(s, t)] != N.mul(th[s], act.apply(s, th[t]))) ok = false;
        if (ok) found.insert(th);
        int i = (int)pick.size() - 1;
        while (i >= 0 && pick[i] + 1 == N.order()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    std::vector<OneCocycle> out;
    for (const auto& th : found) out.emplace_back(act, th);
    return out;
}

// orbits of the N-action on Z^1, as sorted index lists sorted by least member
inline std::vector<std::vector<int>> h1_orbits(const std::vector<OneCocycle>& cocycles) {
    std::vector<std::vector<int>> orbits;
    std::vector<bool> used(cocycles.size(), false);
    auto find_index = [&](const OneCocycle& c) {
        for (size_t i = 0; i < cocycles.size(); ++i)
            if (cocycles[i] == c) return (int)i;
        throw Error("acted 1-cocycle missing from the list");
    };
    for (size_t i = 0; i < cocycles.size(); ++i) {
        if (used[i]) continue;
        std::set<int> orbit;
        for (int u = 0; u < cocycles[i].action().target().order(); ++u)
            orbit.insert(find_index(cocycles[i].acted_by(u)));
        for (int j : orbit) used[j] = true;
        orbits.emplace_back(orbit.begin(), orbit.end());
    }
    std::sort(orbits.begin(), orbits.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return orbits;
}

enum class EquivalenceOrientation {
    kDerived,   // gamma' = gamma + d(kappa) + w(x_s,x_t,u) - w(x_s,u,y_t) + w(u,y_s,y_t)
    kInverted,  // the three associator factors with opposite exponent
};

// split graded context: U with normal Ue, a designated complement, the induced
// conjugation action, and the working modulus for all gamma solves
class ExtensionContext {
public:
    ExtensionContext(FiniteGroup U, Subgroup Ue, Cochain omega, int max_order = 16)
        : seq_(std::move(U), std::move(Ue)), omega_(std::move(omega)) {
        if (!omega_.group().same_table(seq_.total))
            throw InputError("associator lives on the wrong group");
        if (omega_.degree() != 3 || !is_cocycle(omega_))
            throw NotCocycleError("extension context needs a 3-cocycle");
        auto comps = complements(seq_.total, seq_.fiber, max_order);
        if (comps.empty()) return;
        complement_ = comps.front();
        const FiniteGroup& G = seq_.deg.quotient();
        FiniteGroup N = seq_.fiber.as_group();
        tmap_.assign(G.order(), -1);
        for (int t : complement_->elements()) tmap_[seq_.deg.project(t)] = t;
        std::vector<std::vector<int>> perms(G.order(), std::vector<int>(N.order()));
        for (int s = 0; s < G.order(); ++s)
            for (int u = 0; u < N.order(); ++u)
                perms[s][u] = seq_.fiber.position_of(
                    seq_.total.conj(tmap_[s], seq_.fiber.elements()[u]));
        action_.emplace(G, std::move(N), std::move(perms));
    }

    const DegSequence& sequence() const { return seq_; }
    const FiniteGroup& total() const { return seq_.total; }
    const Subgroup& fiber() const { return seq_.fiber; }
    const FiniteGroup& grading_group() const { return seq_.deg.quotient(); }
    const Cochain& omega() const { return omega_; }
    bool semidirect() const { return action_.has_value(); }

    const Subgroup& complement() const {
        require_split();
        return *complement_;
    }
    const GroupAction& action() const {
        require_split();
        return *action_;
    }

    // lcm(M_w * |G|, |U| * |G|): large enough for every gamma solve and for
    // deciding k*-triviality of the pullbacks
    i64 working_modulus() const {
        i64 g = grading_group().order();
        return std::lcm(omega_.modulus() * g, (i64)total().order() * g);
    }

    // [theta_sigma, sigma] as an element of U
    int lift(const OneCocycle& th, int sigma) const {
        require_split();
        return total().mul(fiber().elements()[th.at(sigma)], tmap_[sigma]);
    }

    // embedded associator value at the working modulus
    i64 omega_at(int a, int b, int c) const {
        int n = total().order();
        i64 v = omega_.at_index(((i64)a * n + b) * n + c);
        return mod_reduce(v * (working_modulus() / omega_.modulus()), working_modulus());
    }

private:
    void require_split() const {
        if (!action_) throw ObstructedError("the sequence does not split");
    }

    DegSequence seq_;
    Cochain omega_;
    std::optional<Subgroup> complement_;
    std::optional<GroupAction> action_;
    std::vector<int> tmap_;
};

struct ExtensionDatum {
    OneCocycle theta;
    Cochain gamma;  // degree 2 on G at the working modulus
};

// pullback of omega along sigma -> [theta_sigma, sigma], at the working modulus
inline Cochain theta_pullback(const ExtensionContext& ctx, const OneCocycle& th) {
    const FiniteGroup& G = ctx.grading_group();
    int n = G.order();
    // X_theta must be a subgroup of U
    {
        std::vector<int> xs;
        for (int s = 0; s < n; ++s) xs.push_back(ctx.lift(th, s));
        Subgroup X(ctx.total(), xs);  // throws if not closed
        if (X.size() != n) throw NotCocycleError("X_theta is not a section");
    }
    Vec vals(Cochain::tuple_count(n, 3), 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                vals[((i64)a * n + b) * n + c] =
                    ctx.omega_at(ctx.lift(th, a), ctx.lift(th, b), ctx.lift(th, c));
    Cochain out(G, 3, ctx.working_modulus(), std::move(vals));
    if (!is_cocycle(out)) throw NotCocycleError("theta pullback fails the cocycle test");
    return out;
}

// canonical trivializing gamma of the theta-pullback, or nullopt if obstructed
inline std::optional<Cochain> theta_obstruction(const ExtensionContext& ctx,
                                                const OneCocycle& th) {
    Cochain wt = theta_pullback(ctx, th);
    return solve_coboundary(wt, 1);  // already at the working modulus
}

// the full solution set { gamma : delta gamma = omega|_X_theta } at the
// working modulus: particular solution plus all 2-cocycles
inline std::vector<Cochain> l_omega_theta(const ExtensionContext& ctx, const OneCocycle& th,
                                          i64 limit = 1 << 20) {
    auto g0 = theta_obstruction(ctx, th);
    if (!g0) throw ObstructedError("theta is obstructed; L is empty");
    const FiniteGroup& G = ctx.grading_group();
    i64 M = ctx.working_modulus();
    FreeSlots fs = free_slots(G, 2);
    Mat z2 = cocycle_space(G, 2, M);
    Mat all = enumerate_span(z2, fs.count, M, limit);
    Vec base = detail::to_free_vector(*g0, fs);
    std::vector<Vec> sums;
    sums.reserve(all.size());
    for (const auto& z : all) {
        Vec v(fs.count);
        for (int i = 0; i < fs.count; ++i) v[i] = mod_reduce(base[i] + z[i], M);
        sums.push_back(std::move(v));
    }
    std::sort(sums.begin(), sums.end());
    std::vector<Cochain> out;
    out.reserve(sums.size());
    for (const auto& v : sums) out.push_back(detail::from_free_vector(G, 2, M, fs, v));
    return out;
}

// equivalence of extension data: theta = u . nu for some u, and the gamma
// difference corrected by the three associator factors is a k*-coboundary
inline bool extensions_equivalent(const ExtensionContext& ctx, const ExtensionDatum& d1,
                                  const ExtensionDatum& d2,
                                  EquivalenceOrientation orientation =
                                      EquivalenceOrientation::kDerived) {
    const FiniteGroup& G = ctx.grading_group();
    const FiniteGroup& N = d1.theta.action().target();
    i64 M = ctx.working_modulus();
    if (d1.gamma.modulus() != M || d2.gamma.modulus() != M)
        throw ContextMismatchError("extension data at the wrong modulus");
    FreeSlots fs = free_slots(G, 2);
    const Mat& D = detail::kstar_lattice_for(G, M, G.order());
    i64 sign = orientation == EquivalenceOrientation::kDerived ? 1 : -1;
    for (int u = 0; u < N.order(); ++u) {
        if (!(d2.theta.acted_by(u) == d1.theta)) continue;
        int ue = ctx.fiber().elements()[u];
        Vec diff(fs.count);
        bool any = true;
        for (int i = 0; i < fs.count; ++i) {
            std::vector<int> st;
            decode_tuple(fs.tuples[i], G.order(), 2, st);
            int s = st[0], t = st[1];
            i64 w1 = ctx.omega_at(ctx.lift(d1.theta, s), ctx.lift(d1.theta, t), ue);
            i64 w2 = ctx.omega_at(ctx.lift(d1.theta, s), ue, ctx.lift(d2.theta, t));
            i64 w3 = ctx.omega_at(ue, ctx.lift(d2.theta, s), ctx.lift(d2.theta, t));
            i64 corr = mod_reduce(w1 - w2 + w3, M);
            diff[i] = mod_reduce(d2.gamma.at_index(fs.tuples[i]) -
                                     d1.gamma.at_index(fs.tuples[i]) - sign * corr,
                                 M);
        }
        (void)any;
        if (in_span(diff, D, M)) return true;
    }
    return false;
}

// all extension classes of the regular trivial-component module category:
// unobstructed theta paired with gamma representatives, deduplicated
inline std::vector<ExtensionDatum> extension_classes(const ExtensionContext& ctx,
                                                     EquivalenceOrientation orientation =
                                                         EquivalenceOrientation::kDerived,
                                                     i64 bound = 1 << 20) {
    std::vector<ExtensionDatum> cands;
    if (!ctx.semidirect()) return cands;
    const FiniteGroup& G = ctx.grading_group();
    i64 M = ctx.working_modulus();
    FreeSlots fs = free_slots(G, 2);
    Mat z2 = cocycle_space(G, 2, M);
    const Mat& D = detail::kstar_lattice_for(G, M, G.order());
    // gamma shifts: Z^2 modulo the k*-coboundary lattice
    std::set<Vec> shifts;
    {
        Vec zero = reduce_by_span(Vec(fs.count, 0), D, M);
        shifts.insert(zero);
        std::vector<Vec> frontier = {zero};
        while (!frontier.empty()) {
            std::vector<Vec> next;
            for (const auto& r : frontier)
                for (const auto& g : z2) {
                    Vec s(fs.count);
                    for (int i = 0; i < fs.count; ++i) s[i] = mod_reduce(r[i] + g[i], M);
                    s = reduce_by_span(std::move(s), D, M);
                    if (shifts.insert(s).second) next.push_back(std::move(s));
                }
            frontier = std::move(next);
        }
    }
    for (const OneCocycle& th : z1_cocycles(ctx.action(), bound)) {
        auto g0 = theta_obstruction(ctx, th);
        if (!g0) continue;
        Vec base = detail::to_free_vector(*g0, fs);
        for (const auto& r : shifts) {
            Vec v(fs.count);
            for (int i = 0; i < fs.count; ++i) v[i] = mod_reduce(base[i] + r[i], M);
            cands.push_back({th, detail::from_free_vector(G, 2, M, fs, v)});
        }
    }
    // union-find dedup by pairwise equivalence
    std::vector<int> parent(cands.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < cands.size(); ++i)
        for (size_t j = i + 1; j < cands.size(); ++j)
            if (find((int)i) != find((int)j) &&
                extensions_equivalent(ctx, cands[i], cands[j], orientation)) {
                int a = find((int)i), b = find((int)j);
                parent[std::max(a, b)] = std::min(a, b);
            }
    std::vector<ExtensionDatum> out;
    for (size_t i = 0; i < cands.size(); ++i)
        if (find((int)i) == (int)i) out.push_back(cands[i]);
    std::sort(out.begin(), out.end(), [](const ExtensionDatum& a, const ExtensionDatum& b) {
        if (a.theta.values() != b.theta.values()) return a.theta.values() < b.theta.values();
        return a.gamma.values() < b.gamma.values();
    });
    return out;
}

}  // namespace cliffcat
