#pragma once

#include <string>

#include "enum_op.hpp"

namespace selfenc {

struct IterateHat {
    NatSet set;
    std::optional<nat> cycle_at;   // first repeated iterate
    std::optional<nat> cycle_len;  // m with f^m(c) = c
};

// f^0(a), f^1(a), ... up to f^bound(a), stopping where f is undefined or an iterate repeats.
inline IterateHat iterate_hat(const PartialFnTable& f, nat a, nat bound) {
    IterateHat h;
    std::map<nat, nat> seen;  // value -> step
    nat x = a;
    for (nat step = 0; step <= bound; ++step) {
        if (auto it = seen.find(x); it != seen.end()) {
            h.cycle_at = x;
            h.cycle_len = step - it->second;
            break;
        }
        seen.emplace(x, step);
        h.set.insert(x);
        auto next = f.value(x);
        if (!next) break;
        x = *next;
    }
    return h;
}

// Number of applications taking a to a0, if a0 is among the first bound iterates.
inline std::optional<nat> steps_to(const PartialFnTable& f, nat a, nat a0, nat bound) {
    nat x = a;
    for (nat step = 0; step <= bound; ++step) {
        if (x == a0) return step;
        auto next = f.value(x);
        if (!next) return std::nullopt;
        x = *next;
    }
    return std::nullopt;
}

inline bool is_special(const PartialFnTable& f, nat a0, nat bound) {
    for (auto& [a, e] : f.entries())
        if (!steps_to(f, a, a0, bound)) return false;
    if (f.rule())
        for (nat a = 0; a <= bound; ++a)
            if (f.defined(a) && !steps_to(f, a, a0, bound)) return false;
    return true;
}

// f must be total on [0, N]; the anchor is 0.
inline PartialFnTable specialize_total(const PartialFnTable& f, nat N) {
    PartialFnTable g;
    for (nat n = 0; n <= N; ++n) {
        auto v = f.value(n);
        if (!v) throw FixtureError("specialize_total: f undefined at " + std::to_string(n));
        nat out = (n > 0 && *v < n) ? *v : 0;
        g.define(n, out, *f.stage_of(n));
    }
    return g;
}

inline PartialFnTable specialize_partial(const PartialFnTable& f, nat a0, nat bound) {
    PartialFnTable g;
    for (auto& [n, e] : f.entries())
        if (auto k = steps_to(f, n, a0, bound)) g.define(n, e.out, *k + e.stage);
    return g;
}

struct RegTree {
    nat root = 0;
    nat depth = 0;  // largest index n of a node (b_0, ..., b_n)
    std::set<std::vector<nat>> nodes;

    bool on(nat b) const {
        for (auto& v : nodes)
            for (nat x : v)
                if (x == b) return true;
        return false;
    }
    std::vector<std::vector<nat>> deepest() const {
        std::vector<std::vector<nat>> out;
        for (auto& v : nodes)
            if (v.size() == depth + 1) out.push_back(v);
        return out;
    }
};

// The anchor's own fixed point f(a0) = a0 is not followed, so chains never revisit a0.
inline RegTree build_regressing_tree(const PartialFnTable& f, nat a0, nat depth) {
    std::map<nat, std::vector<nat>> preimages;
    for (auto& [x, e] : f.entries())
        if (x != a0) preimages[e.out].push_back(x);
    RegTree t{a0, depth, {}};
    std::vector<std::vector<nat>> frontier{{a0}};
    while (!frontier.empty()) {
        auto node = std::move(frontier.back());
        frontier.pop_back();
        t.nodes.insert(node);
        if (node.size() > depth) continue;
        if (auto it = preimages.find(node.back()); it != preimages.end())
            for (nat b : it->second) {
                auto child = node;
                child.push_back(b);
                frontier.push_back(std::move(child));
            }
    }
    return t;
}

// Binary strings over {'0','1'}, read as the set of positions holding '1'.
using BinString = std::string;
using BinTree = std::set<BinString>;

inline NatSet as_set(const BinString& s) {
    NatSet out;
    for (nat i = 0; i < s.size(); ++i)
        if (s[i] == '1') out.insert(i);
    return out;
}

inline bool is_prefix(const BinString& p, const BinString& s) {
    return p.size() <= s.size() && s.compare(0, p.size(), p) == 0;
}

inline bool compatible(const BinString& a, const BinString& b) { return is_prefix(a, b) || is_prefix(b, a); }

inline std::set<BinString> branches(const BinTree& t, nat depth) {
    std::set<BinString> out;
    for (auto& s : t)
        if (s.size() == depth) out.insert(s);
    return out;
}

// A finite stand-in for A: its members below universe, every other m <= universe is outside.
struct SetPrefix {
    NatSet members;
    nat universe = 0;
    bool contains(nat m) const { return members.count(m) > 0; }
};

struct PruneResult {
    BinTree tree;
    std::size_t index;
};

// Length-then-lexicographic order on strings.
inline bool shortlex_less(const BinString& a, const BinString& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

inline PruneResult prune_to_uniform(BinTree T, nat depth, const std::vector<EnumOperator>& ops,
                                    const SetPrefix& A) {
    auto outside = [&](const NatSet& out) -> std::optional<nat> {
        for (nat m : out)
            if (m <= A.universe && !A.contains(m)) return m;
        return std::nullopt;
    };
    for (std::size_t n = 0; n < ops.size(); ++n) {
        auto deep = branches(T, depth);
        if (deep.empty()) throw PremiseError("prune_to_uniform: tree has no branch of full depth");
        auto live = [&](const BinString& tau) {
            auto it = deep.lower_bound(tau);
            return it != deep.end() && is_prefix(tau, *it);
        };

        std::optional<BinString> tau;
        for (auto& s : T) {
            if (tau && !shortlex_less(s, *tau)) continue;
            if (live(s) && outside(apply(ops[n], as_set(s), A.universe))) tau = s;
        }
        if (tau) {
            BinTree cone;
            for (auto& s : T)
                if (compatible(s, *tau)) cone.insert(s);
            T = std::move(cone);
            continue;
        }

        std::optional<nat> missing;
        for (nat m : A.members) {
            for (auto& X : deep)
                if (!apply(ops[n], as_set(X), A.universe).count(m)) { missing = m; break; }
            if (missing) break;
        }
        if (missing) {
            BinTree kept;
            for (auto& s : T)
                if (!apply_staged(ops[n], as_set(s), s.size(), A.universe).count(*missing)) kept.insert(s);
            T = std::move(kept);
            continue;
        }
        return {std::move(T), n};
    }
    throw PremiseError("prune_to_uniform: operator list exhausted before a uniform operator was found");
}

inline bool cocelower_node_ok(const BinString& sigma, const std::vector<nat>& fvals, const NatSet& W_es) {
    NatSet s = as_set(sigma);
    if (!s.empty()) {
        nat top = *s.rbegin();
        for (nat n = 0; n < fvals.size(); ++n) {
            if (fvals[n] >= top) continue;
            auto count = std::distance(s.begin(), s.upper_bound(fvals[n]));
            if (static_cast<nat>(count) < n + 1) return false;
        }
    }
    for (nat x : s)
        if (W_es.count(x)) return false;
    return true;
}

}  // namespace selfenc
