#pragma once

#include "engine.hpp"

namespace selfenc {

// Builds a total f regressing the halting set. Each number n that has not converged yet is
// pointed at a fresh mirror index, which converges exactly when n does; once n converges, the
// whole chain hanging off n is appended to A in one go.
class TotalRegressor {
public:
    nat stage = 0;

    TotalRegressor(MockRegistry reg, nat search_cap = 100000) : reg_(std::move(reg)), cap_(search_cap) {
        f_.define(0, 0, 1);
        a_ = {0};
        in_a_ = {0};
    }

    std::size_t rank_count() const { return 0; }
    std::string name(std::size_t) const { return "step"; }
    bool requires_attention(std::size_t) { return false; }
    void act(std::size_t, Trace&) {}

    void end_stage(std::optional<std::size_t>, Trace& tr) {
        nat s = stage, s1 = s + 1;
        mention(s1);
        if (!f_.defined(s1)) {
            nat S = mentioned_ + 1;
            PartialFnTable mirror;
            if (auto t = reg_.at(s1).stage_of(s1)) mirror.define(S, 0, *t);
            reg_.bind(S, std::move(mirror));
            f_.define(s1, S, s1);
            pending_.insert(s1);
            mention(S);
            tr.emit(s1, "step1", EventKind::witness_assigned, S, std::to_string(s1));
        }

        nat N = mentioned_ + 1;
        while (!reg_.at(N).stage_of(N)) {
            if (N > mentioned_ + cap_) throw FixtureError("no fresh index with a convergent diagonal computation");
            ++N;
        }
        mention(N);
        append(N, tr);

        std::vector<nat> ready;
        for (nat n : pending_)
            if (reg_.eval_step(n, n, s)) ready.push_back(n);
        for (nat n : ready) {
            if (in_a_.count(n)) continue;
            // n, f(n), f(f(n)), ... up to the first number outside Dom(f).
            std::vector<nat> chain{n};
            while (f_.defined(chain.back())) chain.push_back(*f_.value(chain.back()));
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) append(*it, tr);
        }
    }

    nat snapshot_hash() const {
        Fnv1a h;
        h.add(fn_hash(f_));
        h.add(chain_hash(a_));
        return h.h;
    }

    const PartialFnTable& f() const { return f_; }
    const std::vector<nat>& A() const { return a_; }
    const MockRegistry& registry() const { return reg_; }

private:
    void mention(nat v) { mentioned_ = std::max(mentioned_, v); }

    void append(nat x, Trace& tr) {
        if (f_.defined(x)) {
            if (*f_.value(x) != a_.back()) throw std::logic_error("chain does not regress onto the current tail");
        } else {
            f_.define(x, a_.back(), stage + 1);
        }
        a_.push_back(x);
        in_a_.insert(x);
        pending_.erase(x);
        tr.emit(stage + 1, "step2", EventKind::enumerated, x, "@" + std::to_string(a_.size() - 1));
    }

    MockRegistry reg_;
    nat cap_;
    PartialFnTable f_;
    std::vector<nat> a_;
    NatSet in_a_;
    NatSet pending_;  // Dom(f) minus A
    nat mentioned_ = 0;
};

struct RegressorRun {
    PartialFnTable f;
    std::vector<nat> A_prefix;
    MockRegistry registry;
    Trace trace;
};

inline RegressorRun construct_total_regressor_for_halting(const MockRegistry& reg, nat stages) {
    TotalRegressor c(reg);
    Trace tr{"total-regressor", {}};
    run_stages(c, tr, stages);
    return {c.f(), c.A(), c.registry(), std::move(tr)};
}

}  // namespace selfenc
