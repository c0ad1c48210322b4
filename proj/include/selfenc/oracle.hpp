#pragma once

#include <set>
#include <string>

#include "enum_op.hpp"

namespace selfenc {

struct OracleResult {
    std::size_t index;
    std::set<std::string> branches;  // full-depth branches of the surviving tree
};

// Reference answer for the pruning loop, phrased branch by branch. It only ever looks at the
// full-depth branches and their prefixes:
//  - a branch is bad for op n when some prefix already outputs a number outside A; the
//    survivors are the branches through the shortlex-least such prefix;
//  - otherwise, for the first m in A some branch misses, keep the branches whose stage-|X|
//    output avoids m;
//  - otherwise op n is correct on every survivor.
inline OracleResult brute_force_prune_oracle(const std::set<std::string>& tree, nat depth,
                                             const std::vector<EnumOperator>& ops, const NatSet& A, nat universe) {
    auto members = [](const std::string& s) {
        NatSet out;
        for (nat i = 0; i < s.size(); ++i)
            if (s[i] == '1') out.insert(i);
        return out;
    };
    auto shortlex = [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    };
    auto bad = [&](const NatSet& out) {
        for (nat m : out)
            if (m <= universe && !A.count(m)) return true;
        return false;
    };

    std::vector<std::string> live;
    for (auto& s : tree)
        if (s.size() == depth) live.push_back(s);

    for (std::size_t n = 0; n < ops.size(); ++n) {
        if (live.empty()) throw PremiseError("oracle: no branch of full depth is left");
        std::optional<std::string> tau;
        for (auto& X : live)
            for (nat len = 0; len <= depth; ++len) {
                std::string p = X.substr(0, len);
                if (!tree.count(p)) continue;
                if (bad(apply(ops[n], members(p), universe))) {
                    if (!tau || shortlex(p, *tau)) tau = p;
                    break;
                }
            }
        if (tau) {
            std::vector<std::string> kept;
            for (auto& X : live)
                if (X.compare(0, tau->size(), *tau) == 0) kept.push_back(X);
            live = std::move(kept);
            continue;
        }
        std::optional<nat> missing;
        for (nat m : A) {
            for (auto& X : live)
                if (!apply(ops[n], members(X), universe).count(m)) {
                    missing = m;
                    break;
                }
            if (missing) break;
        }
        if (missing) {
            std::vector<std::string> kept;
            for (auto& X : live) {
                bool hit = false;
                for (nat len = 0; len <= depth && !hit; ++len)
                    hit = apply_staged(ops[n], members(X.substr(0, len)), len, universe).count(*missing) > 0;
                if (!hit) kept.push_back(X);
            }
            live = std::move(kept);
            continue;
        }
        return {n, std::set<std::string>(live.begin(), live.end())};
    }
    throw PremiseError("oracle: no operator is correct on a nonempty cone");
}

}  // namespace selfenc
