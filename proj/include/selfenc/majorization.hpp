#pragma once

#include <functional>

#include "trees.hpp"

namespace selfenc {

// Recovers a_{n+1} from a special total f, a majorizer G of p_A and the known a_0..a_n by
// discarding candidates whose subtree dies out within `depth` further levels.
class MajorizerDecoder {
public:
    MajorizerDecoder(const PartialFnTable& f, std::vector<nat> G, nat depth, bool regressive)
        : f_(f), G_(std::move(G)), depth_(depth), regressive_(regressive) {}

    nat next(const std::vector<nat>& seed) const {
        if (seed.empty()) throw std::invalid_argument("decoder seed must contain a_0");
        std::vector<nat> survivors;
        auto path = seed;
        for (nat b : children(path)) {
            path.push_back(b);
            if (!bad(path, depth_)) survivors.push_back(b);
            path.pop_back();
        }
        if (survivors.size() != 1)
            throw FixtureError("decoder: " + std::to_string(survivors.size()) + " candidates survive for a_" +
                               std::to_string(seed.size()));
        return survivors.front();
    }

    std::vector<nat> decode(nat a0, nat count) const {
        std::vector<nat> a{a0};
        while (a.size() < count) a.push_back(next(a));
        return a;
    }

    // b is in A iff b = a_m, where m is the number of steps f takes from b to a_0.
    bool membership(nat a0, nat b) const {
        auto m = steps_to(f_, b, a0, G_.size());
        if (!m) return false;
        return decode(a0, *m + 1).back() == b;
    }

private:
    nat G(std::size_t i) const {
        if (i >= G_.size()) throw FixtureError("decoder: majorizer too short for the lookahead depth");
        return G_[i];
    }

    nat f_at(nat x) const {
        auto v = f_.value(x);
        if (!v) throw FixtureError("decoder: f is not total at " + std::to_string(x));
        return *v;
    }

    // Candidates for a_{m+1} below the node path = (a_0, ..., a_m).
    std::vector<nat> children(const std::vector<nat>& path) const {
        nat x = path.back();
        nat top = G(path.size());
        std::vector<nat> out;
        if (!regressive_) {
            for (nat y = x + 1; y <= top; ++y)
                if (f_at(y) == x) out.push_back(y);
            return out;
        }
        // Some element of A in [0, G(m+1)] lies beyond the path; its f-chain enters x right
        // after a_{m+1}. The interval is closed: with G = p_A the only such element may be G(m+1).
        NatSet on_path(path.begin(), path.end());
        NatSet found;
        for (nat z = 0; z <= top; ++z) {
            if (on_path.count(z)) continue;
            nat prev = z, cur = z;
            for (nat step = 0; step <= G_.size() + top && cur != x && cur != path.front(); ++step) {
                prev = cur;
                cur = f_at(cur);
            }
            if (cur == x && prev != x && !on_path.count(prev)) found.insert(prev);
        }
        return {found.begin(), found.end()};
    }

    bool bad(std::vector<nat>& path, nat remaining) const {
        auto kids = children(path);
        if (kids.empty()) return true;
        if (remaining == 0) return false;
        for (nat y : kids) {
            path.push_back(y);
            bool b = bad(path, remaining - 1);
            path.pop_back();
            if (!b) return false;
        }
        return true;
    }

    const PartialFnTable& f_;
    std::vector<nat> G_;
    nat depth_;
    bool regressive_;
};

inline nat decode_retraceable(const PartialFnTable& f, const std::vector<nat>& G, const std::vector<nat>& seed,
                              nat depth) {
    return MajorizerDecoder(f, G, depth, false).next(seed);
}

inline nat decode_regressive(const PartialFnTable& f, const std::vector<nat>& G, const std::vector<nat>& seed,
                             nat depth) {
    return MajorizerDecoder(f, G, depth, true).next(seed);
}

using FnString = std::vector<nat>;

inline bool majorizes(const FnString& sigma, const std::vector<nat>& pA) {
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (i >= pA.size() || sigma[i] < pA[i]) return false;
    return true;
}

struct DiagonalStep {
    enum class Clause { disagreement, blocking, uniform_candidate };
    Clause clause;
    FnString sigma;                // sigma_{n+1}, or sigma_n for a candidate report
    FnString blocking;             // the blocking string of the second clause
    std::optional<nat> input;      // the disagreeing input, or the blocked m
};

// Every extension of base of length <= max_len with sigma(i) in [pA(i), max(pA(i), cap)],
// shortest first and lexicographic within a length.
inline void for_each_extension(const FnString& base, const std::vector<nat>& pA, nat cap, nat max_len,
                               const std::function<bool(const FnString&)>& visit) {
    for (nat len = base.size(); len <= max_len; ++len) {
        FnString s = base;
        s.resize(len);
        for (nat i = base.size(); i < len; ++i) s[i] = pA[i];
        while (true) {
            if (visit(s)) return;
            nat i = len;
            bool wrapped = true;
            while (wrapped && i > base.size()) {
                --i;
                if (s[i] < std::max(pA[i], cap)) {
                    ++s[i];
                    wrapped = false;
                } else {
                    s[i] = pA[i];
                }
            }
            if (wrapped) break;
        }
    }
}

inline std::vector<DiagonalStep> diagonalize_major(const std::vector<OracleFnTable>& functionals,
                                                   const std::vector<nat>& pA, nat budget) {
    if (budget > pA.size()) throw FixtureError("diagonalize_major: p_A prefix shorter than the budget");
    NatSet A(pA.begin(), pA.end());
    nat universe = pA.empty() ? 0 : pA.back();
    nat cap = universe;
    for (auto& phi : functionals)
        for (auto& ax : phi.axioms)
            for (auto* s : {&ax.pos, &ax.neg})
                for (nat c : *s) cap = std::max(cap, cantor_unpair(c).second);

    std::vector<DiagonalStep> out;
    FnString current;
    for (auto& phi : functionals) {
        std::optional<DiagonalStep> step;
        for_each_extension(current, pA, cap, budget, [&](const FnString& s) {
            if (s.size() == current.size()) return false;
            for (nat m = 0; m <= universe; ++m)
                if (auto v = phi.eval_string(s, m); v && *v != (A.count(m) ? 1u : 0u)) {
                    step = DiagonalStep{DiagonalStep::Clause::disagreement, s, {}, m};
                    return true;
                }
            return false;
        });
        if (!step) {
            for_each_extension(current, pA, cap, budget, [&](const FnString& s) {
                for (nat m : pA) {
                    bool converges = false;
                    for_each_extension(s, pA, cap, budget, [&](const FnString& t) {
                        converges = phi.eval_string(t, m).has_value();
                        return converges;
                    });
                    if (!converges) {
                        FnString next = s;
                        if (next.size() == current.size()) {
                            if (next.size() >= pA.size()) return false;
                            next.push_back(pA[next.size()]);
                        }
                        step = DiagonalStep{DiagonalStep::Clause::blocking, next, s, m};
                        return true;
                    }
                }
                return false;
            });
        }
        if (!step) {
            out.push_back({DiagonalStep::Clause::uniform_candidate, current, {}, std::nullopt});
            break;
        }
        current = step->sigma;
        out.push_back(*step);
    }
    return out;
}

}  // namespace selfenc
