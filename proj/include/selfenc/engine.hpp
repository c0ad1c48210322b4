#pragma once

#include "trace.hpp"

namespace selfenc {

// Runs stage s+1 of a priority construction C, where C exposes:
//   nat stage;                               completed stages
//   std::size_t rank_count() const;          requirements open at this stage, highest priority first
//   std::string name(std::size_t) const;
//   bool requires_attention(std::size_t);
//   void act(std::size_t, Trace&);           includes injuring whatever the rule injures
//   void end_stage(std::optional<std::size_t>, Trace&);
//   nat snapshot_hash() const;
// and optionally void begin_stage(Trace&), run before any requirement is examined.
// Returns the rank that acted, if any.
template <class C>
std::optional<std::size_t> run_stage(C& c, Trace& tr) {
    nat s1 = c.stage + 1;
    std::optional<std::size_t> acted;
    if constexpr (requires { c.begin_stage(tr); }) c.begin_stage(tr);
    for (std::size_t r = 0, n = c.rank_count(); r < n; ++r)
        if (c.requires_attention(r)) {
            acted = r;
            break;
        }
    if (acted) {
        tr.emit(s1, c.name(*acted), EventKind::requires_attention);
        c.act(*acted, tr);
    }
    c.end_stage(acted, tr);
    tr.emit(s1, "stage", EventKind::finalize, c.snapshot_hash());
    ++c.stage;
    return acted;
}

template <class C>
void run_stages(C& c, Trace& tr, nat stages) {
    while (c.stage < stages) run_stage(c, tr);
}

// Smallest even number larger than every number mentioned so far, whose odd predecessor is
// also unmentioned.
inline nat fresh_even(nat mentioned) {
    nat e = mentioned + 2;
    return e % 2 == 0 ? e : e + 1;
}

inline nat chain_hash(const std::vector<nat>& a) {
    Fnv1a h;
    for (nat x : a) h.add(x);
    return h.h;
}

inline nat fn_hash(const PartialFnTable& f) {
    Fnv1a h;
    for (auto& [x, e] : f.entries()) {
        h.add(x);
        h.add(e.out);
    }
    return h.h;
}

// f-iterates of x back to the anchor 0, listed from the anchor outward.
inline std::vector<nat> chain_to_anchor(const PartialFnTable& f, nat x, nat limit) {
    std::vector<nat> c{x};
    while (c.back() != 0 && c.size() <= limit) {
        auto v = f.value(c.back());
        if (!v) return {};
        c.push_back(*v);
    }
    if (c.back() != 0) return {};
    std::reverse(c.begin(), c.end());
    return c;
}

}  // namespace selfenc
