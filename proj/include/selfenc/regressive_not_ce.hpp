#pragma once

#include "sequence_state.hpp"
#include "trees.hpp"

namespace selfenc {

// Builds a regressive set that is neither c.e. nor retraceable. P_e keeps an even member of
// W_e out of A; N_e waits for phi_e on its even witness a_l and, if phi_e names the largest
// smaller member, splices the odd number a_l - 1 in right after a_l. Priorities
// P_1 > N_1 > P_2 > N_2 > ...
class RegressiveNotCe {
public:
    nat stage = 0;

    explicit RegressiveNotCe(MockRegistry reg) : reg_(std::move(reg)) {
        seq_.seed(0, 0);
        seq_.seed(2, 0);
        grow(2);
        witness_[1] = 2;
        protect_[1] = 2;
    }

    std::size_t rank_count() const { return 2 * stage; }
    std::string name(std::size_t r) const { return (r % 2 == 0 ? "P" : "N") + std::to_string(r / 2 + 1); }

    bool requires_attention(std::size_t r) {
        nat e = r / 2 + 1;
        if (r == 0) refresh_higher_protection();
        if (r % 2 == 0) {
            if (psat_[e]) return false;
            pending_ = p_candidate(e);
            return pending_.has_value();
        }
        return witness_[e] && !nsat_[e] && reg_.eval_step(e, *witness_[e], stage).has_value();
    }

    void act(std::size_t r, Trace& tr) {
        nat e = r / 2 + 1, s1 = stage + 1;
        auto who = name(r);
        if (r % 2 == 0) {
            nat m = *pending_;
            auto i = seq_.position(m);
            tr.emit(s1, who, EventKind::acts, m, i ? "remove" : "forbid");
            injure_below(r, tr);
            if (i) seq_.truncate(*i, s1, who, tr);
            forbidden_.emplace(m, e);
            seq_.mention(m);
            tr.emit(s1, who, EventKind::restrained, m, "forbid");
            psat_[e] = true;
            return;
        }
        nat w = *witness_[e];
        nat l = *seq_.position(w);
        nat am = largest_below(w);
        nat v = *reg_.eval_step(e, w, stage);
        injure_below(r, tr);
        if (v == am) {
            tr.emit(s1, who, EventKind::acts, w, "splice");
            if (seq_.f().defined(w - 1) || seq_.contains(w - 1)) throw std::logic_error("splice target already used");
            seq_.truncate(l + 1, s1, who, tr);
            seq_.push(w - 1, s1, who, tr);
            set_protect(e, l + 2, tr);
        } else {
            tr.emit(s1, who, EventKind::acts, w, "keep");
            set_protect(e, std::max(*seq_.position(am), l) + 1, tr);
        }
        nsat_[e] = true;
    }

    void end_stage(std::optional<std::size_t>, Trace& tr) {
        nat s1 = stage + 1;
        grow(s1 + 2);
        nat x = fresh_even(seq_.mentioned());
        seq_.push(x, s1, "stage", tr);
        nat i = 1;
        while (nsat_[i] || witness_[i]) ++i;
        grow(i + 1);
        witness_[i] = x;
        tr.emit(s1, "N" + std::to_string(i), EventKind::witness_assigned, x);
        set_protect(i, seq_.size(), tr);
    }

    nat snapshot_hash() const {
        Fnv1a h;
        h.add(seq_.digest());
        h.add(seq_.sequence_digest());
        for (auto& [m, e] : forbidden_) {
            h.add(m);
            h.add(e);
        }
        for (std::size_t e = 0; e < witness_.size(); ++e) {
            h.add(witness_[e].value_or(0));
            h.add(protect_[e]);
        }
        return h.h;
    }

    const RegressedSequence& sequence() const { return seq_; }
    const PartialFnTable& f() const { return seq_.f(); }
    const std::map<nat, nat>& forbidden() const { return forbidden_; }
    bool p_satisfied(nat e) const { return e < psat_.size() && psat_[e]; }

private:
    void grow(nat n) {
        if (witness_.size() >= n + 1) return;
        witness_.resize(n + 1);
        protect_.resize(n + 1, 0);
        nsat_.resize(n + 1, 0);
        psat_.resize(n + 1, 0);
    }

    void set_protect(nat e, nat len, Trace& tr) {
        protect_[e] = std::max(protect_[e], len);
        tr.emit(stage + 1, "N" + std::to_string(e), EventKind::restrained, protect_[e], "prefix");
    }

    // Lower N requirements lose witnesses and restraints; P requirements, once satisfied, stay so.
    void injure_below(std::size_t r, Trace& tr) {
        nat first = r / 2 + 1;  // N_first is the first N below P_first; below N_e is N_{e+1}
        if (r % 2 == 1) ++first;
        for (nat d = first; d < witness_.size(); ++d) {
            if (!witness_[d] && !nsat_[d] && protect_[d] == 0) continue;
            auto who = "N" + std::to_string(d);
            tr.emit(stage + 1, who, EventKind::injured, std::nullopt, name(r));
            if (protect_[d]) tr.emit(stage + 1, who, EventKind::released, std::nullopt, "prefix");
            witness_[d].reset();
            nsat_[d] = 0;
            protect_[d] = 0;
        }
    }

    // higher_[e]: the longest prefix protected by some N_d with d < e.
    void refresh_higher_protection() {
        higher_.assign(witness_.size() + 1, 0);
        for (nat e = 1; e < higher_.size(); ++e)
            higher_[e] = std::max(higher_[e - 1], e - 1 < protect_.size() ? protect_[e - 1] : nat{0});
    }

    std::optional<nat> p_candidate(nat e) {
        const auto& prog = reg_.at(e);
        nat lim = e < higher_.size() ? higher_[e] : higher_.back();
        for (auto m = prog.next_even_in_domain(2, stage); m; m = prog.next_even_in_domain(*m + 2, stage)) {
            if (auto it = forbidden_.find(*m); it != forbidden_.end() && it->second < e) continue;
            if (auto i = seq_.position(*m); i && *i < lim) continue;
            return m;
        }
        return std::nullopt;
    }

    nat largest_below(nat w) const {
        std::optional<nat> best;
        for (nat x : seq_.items())
            if (x < w && (!best || x > *best)) best = x;
        if (!best) throw std::logic_error("no member below the witness");
        return *best;
    }

    MockRegistry reg_;
    RegressedSequence seq_;
    std::vector<std::optional<nat>> witness_;
    std::vector<nat> protect_;
    std::vector<char> nsat_, psat_;
    std::vector<nat> higher_;
    std::map<nat, nat> forbidden_;  // element -> the P requirement keeping it out
    std::optional<nat> pending_;
};

struct RegressiveRun {
    PartialFnTable f;
    std::vector<nat> A_prefix;  // stable between the halfway point and the end
    std::vector<nat> A_final;
    std::map<nat, nat> forbidden;
    Trace trace;
};

inline RegressiveRun construct_regressive_not_ce(const MockRegistry& reg, nat stages) {
    RegressiveNotCe c(reg);
    Trace tr{"regressive-not-ce", {}};
    run_stages(c, tr, stages / 2);
    auto half = c.sequence().items();
    run_stages(c, tr, stages);
    auto& fin = c.sequence().items();
    return {c.f(), RegressedSequence::common_prefix(half, fin), fin, c.forbidden(), std::move(tr)};
}

enum class Membership { in, out, insufficient };

// Decides n from a finite piece C of the set: with n0 the second smallest element of C above n,
// n is a member exactly when it lies on the f-chain from n0.
inline Membership uniform_introreduce(const PartialFnTable& f, const NatSet& C, nat n) {
    auto it = C.upper_bound(n);
    if (it == C.end() || std::next(it) == C.end()) return Membership::insufficient;
    nat x = *std::next(it);
    for (std::size_t steps = 0, bound = f.entries().size(); steps <= bound; ++steps) {
        if (x == n) return Membership::in;
        auto v = f.value(x);
        if (!v || *v == x) break;
        x = *v;
    }
    return Membership::out;
}

}  // namespace selfenc
