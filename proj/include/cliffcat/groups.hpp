#pragma once

// Finite groups as validated multiplication tables over element indices
// 0..n-1, plus subgroups, quotients, automorphisms, actions and semidirect
// products. Everything is immutable after construction.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cliffcat/errors.hpp"

namespace cliffcat {

class FiniteGroup {
public:
    static FiniteGroup from_table(const std::vector<std::vector<int>>& table,
                                  std::string label = "",
                                  std::map<std::string, std::vector<int>> named = {}) {
        auto d = std::make_shared<Data>();
        int n = (int)table.size();
        if (n == 0) throw InputError("empty multiplication table");
        d->n = n;
        d->table.resize(n * n);
        for (int i = 0; i < n; ++i) {
            if ((int)table[i].size() != n) throw InputError("table is not square");
            for (int j = 0; j < n; ++j) {
                int v = table[i][j];
                if (v < 0 || v >= n) throw InputError("table entry out of range");
                d->table[i * n + j] = v;
            }
        }
        d->label = std::move(label);
        d->named = std::move(named);
        validate(*d);
        return FiniteGroup(std::move(d));
    }

    static FiniteGroup trivial() { return cyclic(1); }

    static FiniteGroup cyclic(int n) {
        if (n < 1) throw InputError("cyclic order must be positive");
        std::vector<std::vector<int>> t(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
        return from_table(t, "Z" + std::to_string(n));
    }

    // order 2n; indices i<n are rotations r^i, i>=n are reflections r^(i-n)s
    static FiniteGroup dihedral(int n) {
        if (n < 1) throw InputError("dihedral parameter must be positive");
        int N = 2 * n;
        std::vector<std::vector<int>> t(N, std::vector<int>(N));
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                int ra = a % n, fa = a / n, rb = b % n, fb = b / n;
                t[a][b] = fa == 0 ? ((ra + rb) % n) + n * fb
                                  : ((ra - rb + n) % n) + n * (1 - fb);
            }
        std::map<std::string, std::vector<int>> named;
        std::vector<int> rot(n);
        std::iota(rot.begin(), rot.end(), 0);
        named["rotations"] = rot;
        if (n % 2 == 0) named["center"] = {0, n / 2};
        return from_table(t, "D" + std::to_string(n), std::move(named));
    }

    static FiniteGroup klein() {
        FiniteGroup g = direct_product(cyclic(2), cyclic(2));
        auto named = g.d_->named;
        named["diagonal"] = {0, 3};
        return from_table(g.tables(), "V4", std::move(named));
    }

    // indices: sign*4 + x with x in {1,i,j,k}; 0 is the identity, 4 is -1
    static FiniteGroup quaternion() {
        static const int sg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
        static const int xs[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        std::vector<std::vector<int>> t(8, std::vector<int>(8));
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) {
                int sa = a / 4, xa = a % 4, sb = b / 4, xb = b % 4;
                t[a][b] = ((sa + sb + sg[xa][xb]) % 2) * 4 + xs[xa][xb];
            }
        return from_table(t, "Q8", {{"center", {0, 4}}});
    }

    static FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B) {
        int na = A.order(), nb = B.order(), n = na * nb;
        std::vector<std::vector<int>> t(n, std::vector<int>(n));
        for (int a1 = 0; a1 < na; ++a1)
            for (int b1 = 0; b1 < nb; ++b1)
                for (int a2 = 0; a2 < na; ++a2)
                    for (int b2 = 0; b2 < nb; ++b2)
                        t[a1 * nb + b1][a2 * nb + b2] = A.mul(a1, a2) * nb + B.mul(b1, b2);
        std::map<std::string, std::vector<int>> named;
        std::vector<int> first, second;
        for (int a = 0; a < na; ++a) first.push_back(a * nb);
        for (int b = 0; b < nb; ++b) second.push_back(b);
        named["first"] = first;
        named["second"] = second;
        return from_table(t, A.label() + "x" + B.label(), std::move(named));
    }

    int order() const { return d_->n; }
    int mul(int a, int b) const { return d_->table[a * d_->n + b]; }
    int inv(int a) const { return d_->inverse[a]; }
    int identity() const { return d_->identity; }
    int conj(int x, int a) const { return mul(mul(x, a), inv(x)); }
    const std::string& label() const { return d_->label; }

    int element_order(int a) const {
        int k = 1, x = a;
        while (x != identity()) {
            x = mul(x, a);
            ++k;
        }
        return k;
    }

    bool is_abelian() const {
        for (int a = 0; a < order(); ++a)
            for (int b = 0; b < a; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    int exponent() const {
        int e = 1;
        for (int a = 0; a < order(); ++a) e = std::lcm(e, element_order(a));
        return e;
    }

    bool same_table(const FiniteGroup& o) const {
        return d_ == o.d_ || d_->table == o.d_->table;
    }

    const std::vector<int>& flat_table() const { return d_->table; }

    std::vector<std::vector<int>> tables() const {
        std::vector<std::vector<int>> t(d_->n, std::vector<int>(d_->n));
        for (int i = 0; i < d_->n; ++i)
            for (int j = 0; j < d_->n; ++j) t[i][j] = mul(i, j);
        return t;
    }

    const std::map<std::string, std::vector<int>>& named_subgroups() const { return d_->named; }

private:
    struct Data {
        int n = 0;
        std::vector<int> table;
        int identity = 0;
        std::vector<int> inverse;
        std::string label;
        std::map<std::string, std::vector<int>> named;
    };

    static void validate(Data& d) {
        int n = d.n;
        auto mul = [&](int a, int b) { return d.table[a * n + b]; };
        // rows and columns are permutations
        for (int i = 0; i < n; ++i) {
            std::vector<bool> row(n, false), col(n, false);
            for (int j = 0; j < n; ++j) {
                if (row[mul(i, j)]) throw InputError("row is not a permutation");
                row[mul(i, j)] = true;
                if (col[mul(j, i)]) throw InputError("column is not a permutation");
                col[mul(j, i)] = true;
            }
        }
        int e = -1;
        for (int i = 0; i < n && e < 0; ++i) {
            bool ok = true;
            for (int j = 0; j < n; ++j)
                if (mul(i, j) != j || mul(j, i) != j) {
                    ok = false;
                    break;
                }
            if (ok) e = i;
        }
        if (e < 0) throw InputError("no identity element");
        d.identity = e;
        d.inverse.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                if (mul(i, j) == e && mul(j, i) == e) {
                    d.inverse[i] = j;
                    break;
                }
            if (d.inverse[i] < 0) throw InputError("element without two-sided inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw InputError("table is not associative");
    }

    explicit FiniteGroup(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

class Subgroup {
public:
    Subgroup(FiniteGroup parent, std::vector<int> elements)
        : parent_(std::move(parent)), elements_(std::move(elements)) {
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        validate();
    }

    static Subgroup generated(const FiniteGroup& G, const std::vector<int>& gens) {
        std::set<int> s = {G.identity()};
        std::vector<int> frontier = {G.identity()};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int a : frontier)
                for (int g : gens) {
                    int x = G.mul(a, g);
                    if (s.insert(x).second) next.push_back(x);
                }
            frontier = std::move(next);
        }
        return Subgroup(G, std::vector<int>(s.begin(), s.end()));
    }

    static Subgroup trivial(const FiniteGroup& G) { return Subgroup(G, {G.identity()}); }

    static Subgroup full(const FiniteGroup& G) {
        std::vector<int> all(G.order());
        std::iota(all.begin(), all.end(), 0);
        return Subgroup(G, std::move(all));
    }

    const FiniteGroup& parent() const { return parent_; }
    const std::vector<int>& elements() const { return elements_; }
    int size() const { return (int)elements_.size(); }

    bool contains(int x) const {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    int position_of(int x) const {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
        if (it == elements_.end() || *it != x) throw Error("element not in subgroup");
        return (int)(it - elements_.begin());
    }

    bool is_normal() const {
        for (int x = 0; x < parent_.order(); ++x)
            for (int h : elements_)
                if (!contains(parent_.conj(x, h))) return false;
        return true;
    }

    Subgroup conjugate(int x) const {
        std::vector<int> e;
        e.reserve(elements_.size());
        for (int h : elements_) e.push_back(parent_.conj(x, h));
        return Subgroup(parent_, std::move(e));
    }

    // the subgroup as a group in its own right; element i of the result is
    // elements()[i], so nested sorted subgroups restrict coherently
    FiniteGroup as_group() const {
        int m = size();
        std::vector<std::vector<int>> t(m, std::vector<int>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                t[i][j] = position_of(parent_.mul(elements_[i], elements_[j]));
        return FiniteGroup::from_table(t, parent_.label() + "<" + std::to_string(m) + ">");
    }

    bool operator==(const Subgroup& o) const {
        return elements_ == o.elements_ && parent_.same_table(o.parent_);
    }
    bool operator!=(const Subgroup& o) const { return !(*this == o); }
    bool operator<(const Subgroup& o) const { return elements_ < o.elements_; }

private:
    void validate() {
        if (elements_.empty() || !contains(parent_.identity()))
            throw InputError("subgroup must contain the identity");
        for (int a : elements_) {
            if (a < 0 || a >= parent_.order()) throw InputError("subgroup element out of range");
            if (!contains(parent_.inv(a))) throw InputError("subgroup not closed under inverse");
            for (int b : elements_)
                if (!contains(parent_.mul(a, b)))
                    throw InputError("subgroup not closed under multiplication");
        }
    }

    FiniteGroup parent_;
    std::vector<int> elements_;
};

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    std::vector<int> e;
    for (int x : a.elements())
        if (b.contains(x)) e.push_back(x);
    return Subgroup(a.parent(), std::move(e));
}

// all subgroups, canonical (sorted element lists, list sorted lexicographically)
inline std::vector<Subgroup> subgroups(const FiniteGroup& G, int max_order = 16) {
    if (G.order() > max_order)
        throw TooLargeError("subgroup enumeration bounded to order " + std::to_string(max_order));
    std::set<std::vector<int>> found;
    std::vector<std::vector<int>> queue;
    std::vector<int> triv = {G.identity()};
    found.insert(triv);
    queue.push_back(triv);
    while (!queue.empty()) {
        std::vector<int> H = std::move(queue.back());
        queue.pop_back();
        for (int g = 0; g < G.order(); ++g) {
            if (std::binary_search(H.begin(), H.end(), g)) continue;
            std::vector<int> gens = H;
            gens.push_back(g);
            Subgroup ext = Subgroup::generated(G, gens);
            if (found.insert(ext.elements()).second) queue.push_back(ext.elements());
        }
    }
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (const auto& e : found) out.emplace_back(G, e);
    return out;
}

class QuotientMap {
public:
    QuotientMap(FiniteGroup source, Subgroup kernel, FiniteGroup quotient,
                std::vector<int> projection)
        : source_(std::move(source)),
          kernel_(std::move(kernel)),
          quotient_(std::move(quotient)),
          projection_(std::move(projection)) {}

    const FiniteGroup& source() const { return source_; }
    const Subgroup& kernel() const { return kernel_; }
    const FiniteGroup& quotient() const { return quotient_; }
    int project(int k) const { return projection_[k]; }
    const std::vector<int>& projection() const { return projection_; }

    std::vector<int> fiber(int sigma) const {
        std::vector<int> f;
        for (int k = 0; k < source_.order(); ++k)
            if (projection_[k] == sigma) f.push_back(k);
        return f;
    }

    int least_lift(int sigma) const {
        for (int k = 0; k < source_.order(); ++k)
            if (projection_[k] == sigma) return k;
        throw Error("projection not surjective");
    }

private:
    FiniteGroup source_;
    Subgroup kernel_;
    FiniteGroup quotient_;
    std::vector<int> projection_;
};

// quotient K/N with cosets ordered by least element; identity coset is first
inline QuotientMap quotient(const FiniteGroup& K, const Subgroup& N) {
    if (!N.is_normal()) throw NotNormalError("kernel of a quotient must be normal");
    std::map<std::vector<int>, int> seen;
    std::vector<std::vector<int>> cosets;
    for (int k = 0; k < K.order(); ++k) {
        std::vector<int> cs;
        cs.reserve(N.size());
        for (int h : N.elements()) cs.push_back(K.mul(k, h));
        std::sort(cs.begin(), cs.end());
        if (!seen.count(cs)) {
            seen.emplace(cs, 0);
            cosets.push_back(std::move(cs));
        }
    }
    std::sort(cosets.begin(), cosets.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    for (int i = 0; i < (int)cosets.size(); ++i) seen[cosets[i]] = i;
    std::vector<int> proj(K.order());
    for (int k = 0; k < K.order(); ++k) {
        std::vector<int> cs;
        cs.reserve(N.size());
        for (int h : N.elements()) cs.push_back(K.mul(k, h));
        std::sort(cs.begin(), cs.end());
        proj[k] = seen[cs];
    }
    int q = (int)cosets.size();
    std::vector<std::vector<int>> t(q, std::vector<int>(q));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) t[i][j] = proj[K.mul(cosets[i][0], cosets[j][0])];
    FiniteGroup Q = FiniteGroup::from_table(t, K.label() + "/" + std::to_string(N.size()));
    // homomorphism is exhaustively implied by construction; verify anyway
    for (int a = 0; a < K.order(); ++a)
        for (int b = 0; b < K.order(); ++b)
            if (proj[K.mul(a, b)] != Q.mul(proj[a], proj[b]))
                throw ConsistencyError("quotient projection is not a homomorphism");
    return QuotientMap(K, N, Q, std::move(proj));
}

class GroupAction {
public:
    GroupAction(FiniteGroup actor, FiniteGroup target, std::vector<std::vector<int>> perms)
        : actor_(std::move(actor)), target_(std::move(target)), perms_(std::move(perms)) {
        validate();
    }

    static GroupAction trivial(const FiniteGroup& actor, const FiniteGroup& target) {
        std::vector<int> id(target.order());
        std::iota(id.begin(), id.end(), 0);
        return GroupAction(actor, target, std::vector<std::vector<int>>(actor.order(), id));
    }

    const FiniteGroup& actor() const { return actor_; }
    const FiniteGroup& target() const { return target_; }
    int apply(int sigma, int x) const { return perms_[sigma][x]; }
    const std::vector<std::vector<int>>& maps() const { return perms_; }

private:
    void validate() {
        if ((int)perms_.size() != actor_.order()) throw InputError("action size mismatch");
        int n = target_.order();
        for (const auto& p : perms_) {
            if ((int)p.size() != n) throw InputError("action permutation size mismatch");
            std::vector<bool> hit(n, false);
            for (int v : p) {
                if (v < 0 || v >= n || hit[v]) throw InputError("action map is not a permutation");
                hit[v] = true;
            }
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (p[target_.mul(a, b)] != target_.mul(p[a], p[b]))
                        throw InputError("action map is not an automorphism");
        }
        for (int x = 0; x < n; ++x)
            if (perms_[actor_.identity()][x] != x)
                throw InputError("action of identity is not trivial");
        for (int s = 0; s < actor_.order(); ++s)
            for (int t = 0; t < actor_.order(); ++t)
                for (int x = 0; x < n; ++x)
                    if (perms_[actor_.mul(s, t)][x] != perms_[s][perms_[t][x]])
                        throw InputError("action is not a homomorphism");
    }

    FiniteGroup actor_, target_;
    std::vector<std::vector<int>> perms_;
};

struct AutomorphismGroup {
    FiniteGroup group;                     // abstract Aut(N)
    std::vector<std::vector<int>> perms;   // realization on N's elements
};

// brute force over generator images, pruned by element orders
inline AutomorphismGroup automorphism_group(const FiniteGroup& N, int max_order = 16) {
    if (N.order() > max_order)
        throw TooLargeError("automorphism enumeration bounded to order " +
                            std::to_string(max_order));
    int n = N.order();
    // greedy generating sequence
    std::vector<int> gens;
    Subgroup cur = Subgroup::trivial(N);
    while (cur.size() < n) {
        for (int g = 0; g < n; ++g)
            if (!cur.contains(g)) {
                gens.push_back(g);
                cur = Subgroup::generated(N, gens);
                break;
            }
    }
    // BFS words: each element as (previous, generator index)
    std::vector<std::pair<int, int>> word(n, {-1, -1});
    std::vector<int> bfs = {N.identity()};
    std::vector<bool> seen(n, false);
    seen[N.identity()] = true;
    for (size_t h = 0; h < bfs.size(); ++h)
        for (int gi = 0; gi < (int)gens.size(); ++gi) {
            int x = N.mul(bfs[h], gens[gi]);
            if (!seen[x]) {
                seen[x] = true;
                word[x] = {bfs[h], gi};
                bfs.push_back(x);
            }
        }
    std::vector<std::vector<int>> cands(gens.size());
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        int o = N.element_order(gens[gi]);
        for (int x = 0; x < n; ++x)
            if (N.element_order(x) == o) cands[gi].push_back(x);
    }
    std::set<std::vector<int>> perms;
    std::vector<int> pick(gens.size(), 0);
    while (true) {
        std::vector<int> phi(n, -1);
        phi[N.identity()] = N.identity();
        for (int x : bfs)
            if (word[x].first >= 0) phi[x] = N.mul(phi[word[x].first], cands[word[x].second][pick[word[x].second]]);
        bool ok = true;
        std::vector<bool> hit(n, false);
        for (int x = 0; x < n && ok; ++x) {
            if (phi[x] < 0 || hit[phi[x]]) ok = false;
            else hit[phi[x]] = true;
        }
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                if (phi[N.mul(a, b)] != N.mul(phi[a], phi[b])) ok = false;
        if (ok) perms.insert(phi);
        int i = (int)pick.size() - 1;
        while (i >= 0 && pick[i] + 1 == (int)cands[i].size()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    std::vector<std::vector<int>> plist(perms.begin(), perms.end());
    int m = (int)plist.size();
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < m; ++i) index[plist[i]] = i;
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<int> comp(n);
            for (int x = 0; x < n; ++x) comp[x] = plist[i][plist[j][x]];
            t[i][j] = index.at(comp);
        }
    return {FiniteGroup::from_table(t, "Aut(" + N.label() + ")"), std::move(plist)};
}

// pairs (u, sigma) indexed u*|G|+sigma with  (u,s)(v,t) = (u * s(v), s t)
inline FiniteGroup semidirect_product(const FiniteGroup& N, const FiniteGroup& G,
                                      const GroupAction& act) {
    if (!act.actor().same_table(G) || !act.target().same_table(N))
        throw InputError("semidirect action actor/target mismatch");
    int nn = N.order(), ng = G.order(), n = nn * ng;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int u = 0; u < nn; ++u)
        for (int s = 0; s < ng; ++s)
            for (int v = 0; v < nn; ++v)
                for (int r = 0; r < ng; ++r)
                    t[u * ng + s][v * ng + r] = N.mul(u, act.apply(s, v)) * ng + G.mul(s, r);
    std::map<std::string, std::vector<int>> named;
    std::vector<int> kernel, comp;
    for (int u = 0; u < nn; ++u) kernel.push_back(u * ng);
    for (int s = 0; s < ng; ++s) comp.push_back(s);
    named["kernel"] = kernel;
    named["complement"] = comp;
    return FiniteGroup::from_table(t, N.label() + ":" + G.label(), std::move(named));
}

// subgroups T with T ∩ N = {e} and |T|*|N| = |K|
inline std::vector<Subgroup> complements(const FiniteGroup& K, const Subgroup& N,
                                         int max_order = 16) {
    if (!N.is_normal()) throw NotNormalError("complements computed against a normal subgroup");
    std::vector<Subgroup> out;
    for (const auto& T : subgroups(K, max_order))
        if (T.size() * N.size() == K.order() && intersect(T, N).size() == 1) out.push_back(T);
    return out;
}

}  // namespace cliffcat
