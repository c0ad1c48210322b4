#pragma once

#include <sstream>

#include "sequence_state.hpp"

namespace selfenc {

// Builds a co-immune regressive set B that is neither c.e. nor introreducible.
//   R_e     keeps an even member of W_e out of B, refilling with fresh evens what it removes
//   S_e     puts a member of W_e into B
//   Nhat_e  uses an odd witness n: if Phi_e answers on a finite F inside B above n, B(n) is
//           made to disagree with the answer
// Priorities R_1 > S_1 > Nhat_1 > R_2 > ...; rank 3(e-1) + {0, 1, 2}.
class CoimmuneRegressive {
public:
    nat stage = 0;

    CoimmuneRegressive(MockRegistry reg, std::vector<OracleFnTable> functionals)
        : reg_(std::move(reg)), phi_(std::move(functionals)) {
        if (phi_.empty()) throw FixtureError("at least one functional is required");
        seq_.seed(0, 0);
        seq_.seed(2, 0);
        grow(4);
        witness_[1] = 1;
        forbid(rank(1, 2), 1);
    }

    static std::size_t rank(nat e, int kind) { return 3 * (e - 1) + kind; }
    std::size_t rank_count() const { return 3 * stage; }
    std::string name(std::size_t r) const {
        static const char* kinds[] = {"R", "S", "Nhat"};
        return kinds[r % 3] + std::to_string(r / 3 + 1);
    }

    bool requires_attention(std::size_t r) {
        nat e = r / 3 + 1;
        if (r == 0) refresh_stage_tables();
        switch (r % 3) {
            case 0:
                if (rsat_[e]) return false;
                pending_ = r_candidate(e);
                return pending_.has_value();
            case 1:
                if (ssat_[e]) return false;
                pending_ = s_candidate(e);
                return pending_.has_value();
            default:
                if (!witness_[e] || nsat_[e]) return false;
                use_ = nhat_use(e);
                return use_.has_value();
        }
    }

    void act(std::size_t r, Trace& tr) {
        nat e = r / 3 + 1, s1 = stage + 1;
        auto who = name(r);
        if (r % 3 == 0) {
            nat m = *pending_;
            auto i = seq_.position(m);
            tr.emit(s1, who, EventKind::acts, m, i ? "remove" : "forbid");
            injure_below(r, tr);
            if (i) {
                nat k = seq_.size() - 1;
                seq_.truncate(*i, s1, who, tr);
                while (seq_.size() <= k) {
                    nat x = fresh_even(seq_.mentioned());
                    seq_.push(x, s1, who, tr);
                    protect_element(r, x, tr);
                }
            }
            forbid(r, m);
            seq_.mention(m);
            tr.emit(s1, who, EventKind::restrained, m, "forbid");
            rsat_[e] = 1;
            active_.insert(r);
        } else if (r % 3 == 1) {
            nat m = *pending_;
            nat k = seq_.size() - 1;
            if (!seq_.f().defined(m)) {
                tr.emit(s1, who, EventKind::acts, m, "1");
                injure_below(r, tr);
                seq_.push(m, s1, who, tr);
                protect_prefix(r, k + 2, tr);
            } else {
                tr.emit(s1, who, EventKind::acts, m, "2");
                injure_below(r, tr);
                auto chain = chain_to_anchor(seq_.f(), m, seq_.f().entries().size() + 1);
                nat p = 0;
                while (p < chain.size() && p < seq_.size() && seq_.at(p) == chain[p]) ++p;
                seq_.truncate(p, s1, who, tr);
                for (nat i = p; i < chain.size(); ++i) seq_.push(chain[i], s1, who, tr);
                while (seq_.size() <= k) seq_.push(fresh_even(seq_.mentioned()), s1, who, tr);
                protect_prefix(r, k + 1, tr);
            }
            sx_[e] = m;
            ssat_[e] = 1;
            active_.insert(r);
            tr.emit(s1, who, EventKind::witness_assigned, m);
        } else {
            nat n = *witness_[e];
            auto [v, F] = *use_;
            std::ostringstream detail;
            detail << v << ";";
            for (auto it = F.begin(); it != F.end(); ++it) detail << (it == F.begin() ? "" : ",") << *it;
            tr.emit(s1, who, EventKind::acts, n, detail.str());
            injure_below(r, tr);
            nat k = seq_.size() - 1;
            if (v == 0) {
                unforbid(r, n, tr);
                seq_.push(n, s1, who, tr);
                protect_prefix(r, k + 2, tr);
            } else {
                protect_prefix(r, k + 1, tr);
            }
            nsat_[e] = 1;
            active_.insert(r);
        }
    }

    void end_stage(std::optional<std::size_t>, Trace& tr) {
        nat s1 = stage + 1;
        grow(s1 + 2);
        nat x = fresh_even(seq_.mentioned());
        seq_.push(x, s1, "stage", tr);
        nat i = 1;
        while (nsat_[i] || witness_[i]) ++i;
        grow(i + 1);
        witness_[i] = x - 1;
        tr.emit(s1, name(rank(i, 2)), EventKind::witness_assigned, x - 1);
        forbid(rank(i, 2), x - 1);
        tr.emit(s1, name(rank(i, 2)), EventKind::restrained, x - 1, "forbid");
    }

    nat snapshot_hash() const {
        Fnv1a h;
        h.add(seq_.digest());
        h.add(seq_.sequence_digest());
        for (std::size_t r : active_) {
            h.add(r);
            h.add(prefix_[r]);
            h.add(elements_[r].size());
            h.add(forbids_[r].size());
        }
        return h.h;
    }

    const RegressedSequence& sequence() const { return seq_; }
    const PartialFnTable& F() const { return seq_.f(); }
    const OracleFnTable& functional(nat e) const { return phi_[e % phi_.size()]; }
    std::optional<nat> s_witness(nat e) const { return e < sx_.size() && ssat_[e] ? sx_[e] : std::nullopt; }
    std::optional<nat> nhat_witness(nat e) const { return e < witness_.size() ? witness_[e] : std::nullopt; }
    bool nhat_satisfied(nat e) const { return e < nsat_.size() && nsat_[e]; }
    bool r_satisfied(nat e) const { return e < rsat_.size() && rsat_[e]; }
    bool forbidden(nat x) const { return forbidden_.count(x) > 0; }

private:
    void grow(nat n) {
        if (witness_.size() >= n + 2) return;
        witness_.resize(n + 2);
        sx_.resize(n + 2);
        nsat_.resize(n + 2, 0);
        rsat_.resize(n + 2, 0);
        ssat_.resize(n + 2, 0);
        prefix_.resize(3 * (n + 1), 0);
        elements_.resize(3 * (n + 1));
        forbids_.resize(3 * (n + 1));
    }

    void protect_prefix(std::size_t r, nat len, Trace& tr) {
        active_.insert(r);
        prefix_[r] = std::max(prefix_[r], len);
        tr.emit(stage + 1, name(r), EventKind::restrained, prefix_[r], "prefix");
    }

    void protect_element(std::size_t r, nat x, Trace& tr) {
        active_.insert(r);
        elements_[r].insert(x);
        tr.emit(stage + 1, name(r), EventKind::restrained, x, "element");
    }

    void forbid(std::size_t r, nat x) {
        active_.insert(r);
        forbids_[r].insert(x);
        forbidden_[x].insert(r);
    }

    void unforbid(std::size_t r, nat x, Trace& tr) {
        forbids_[r].erase(x);
        if (auto it = forbidden_.find(x); it != forbidden_.end()) {
            it->second.erase(r);
            if (it->second.empty()) forbidden_.erase(it);
        }
        tr.emit(stage + 1, name(r), EventKind::released, x, "forbid");
    }

    bool forbidden_above(nat x, std::size_t r) const {
        auto it = forbidden_.find(x);
        return it != forbidden_.end() && *it->second.begin() < r;
    }

    void injure_below(std::size_t r, Trace& tr) {
        for (auto it = active_.upper_bound(r); it != active_.end(); it = active_.erase(it)) {
            std::size_t k = *it;
            nat d = k / 3 + 1;
            bool held = prefix_[k] || !elements_[k].empty() || !forbids_[k].empty();
            auto who = name(k);
            tr.emit(stage + 1, who, EventKind::injured, std::nullopt, name(r));
            if (held) tr.emit(stage + 1, who, EventKind::released, std::nullopt, "all");
            prefix_[k] = 0;
            elements_[k].clear();
            for (nat x : forbids_[k]) {
                auto f = forbidden_.find(x);
                f->second.erase(k);
                if (f->second.empty()) forbidden_.erase(f);
            }
            forbids_[k].clear();
            if (k % 3 == 0) rsat_[d] = 0;
            if (k % 3 == 1) {
                ssat_[d] = 0;
                sx_[d].reset();
            }
            if (k % 3 == 2) {
                nsat_[d] = 0;
                witness_[d].reset();
            }
        }
    }

    // Per stage: the deepest position held by ranks up to each active rank (position 0 is always
    // held), and the largest Nhat witness below each index.
    void refresh_stage_tables() {
        reach_.clear();
        nat best = 0;
        for (std::size_t r : active_) {
            if (prefix_[r]) best = std::max(best, prefix_[r] - 1);
            for (nat x : elements_[r])
                if (auto p = seq_.position(x)) best = std::max(best, *p);
            reach_.push_back({r, best});
        }
        floor_.assign(witness_.size() + 1, std::nullopt);
        for (nat e = 1; e < floor_.size(); ++e) {
            floor_[e] = floor_[e - 1];
            if (e - 1 >= 1 && witness_[e - 1]) floor_[e] = std::max(floor_[e].value_or(0), *witness_[e - 1]);
        }
    }

    // Deepest position held by ranks strictly above r.
    nat reach_before(std::size_t r) const {
        auto it = std::lower_bound(reach_.begin(), reach_.end(), std::pair<std::size_t, nat>{r, 0});
        return it == reach_.begin() ? 0 : std::prev(it)->second;
    }

    std::optional<nat> r_candidate(nat e) {
        std::size_t r = rank(e, 0);
        const auto& prog = reg_.at(e);
        nat held = reach_before(r);
        for (auto m = prog.next_even_in_domain(2, stage); m; m = prog.next_even_in_domain(*m + 2, stage)) {
            if (forbidden_above(*m, r)) continue;
            if (auto i = seq_.position(*m); i && *i <= held) continue;
            return m;
        }
        return std::nullopt;
    }

    std::optional<nat> s_candidate(nat e) {
        std::size_t r = rank(e, 1);
        nat from = floor_[e] ? *floor_[e] + 1 : 0;
        const auto& prog = reg_.at(e);
        std::optional<nat> best;
        for (auto m = prog.next_in_domain(from, stage); m; m = prog.next_in_domain(*m + 1, stage))
            if (!seq_.f().defined(*m) && !forbidden_above(*m, r)) {
                best = m;
                break;
            }
        // Members of Dom(F) respecting priorities up to R_e lie below the deepest element held
        // by ranks up to R_e, along paths that avoid anything forbidden by those ranks.
        nat top = seq_.at(reach_before(r));
        std::vector<nat> stack{top};
        while (!stack.empty()) {
            nat x = stack.back();
            stack.pop_back();
            if (forbidden_above(x, r)) continue;
            if (x >= from && (!best || x < *best) && prog.eval_step(x, stage)) best = x;
            for (nat c : seq_.children(x)) stack.push_back(c);
        }
        return best;
    }

    // A finite F inside B_s, all above the witness, on which Phi_e answers at stage s.
    std::optional<std::pair<nat, NatSet>> nhat_use(nat e) const {
        nat n = *witness_[e];
        const auto& phi = functional(e);
        const NatSet& B = seq_.members();
        for (auto& ax : phi.axioms) {
            if (ax.input != n || ax.stage > stage) continue;
            NatSet F = ax.pos;
            if (F.empty()) {
                for (nat b : B)
                    if (b > n && !ax.neg.count(b)) {
                        F.insert(b);
                        break;
                    }
            }
            if (F.empty() || *F.begin() <= n) continue;
            if (!std::includes(B.begin(), B.end(), F.begin(), F.end())) continue;
            if (auto v = phi.eval_set(F, n, stage)) return std::pair{*v, F};
        }
        if (phi.rule) {
            NatSet F;
            for (auto it = B.upper_bound(n); it != B.end() && F.size() < phi.rule->size; ++it) F.insert(*it);
            if (auto v = phi.eval_set(F, n, stage)) return std::pair{*v, F};
        }
        return std::nullopt;
    }

    MockRegistry reg_;
    std::vector<OracleFnTable> phi_;
    RegressedSequence seq_;
    std::vector<std::optional<nat>> witness_, sx_;
    std::vector<char> nsat_, rsat_, ssat_;
    std::vector<nat> prefix_;
    std::vector<NatSet> elements_, forbids_;
    std::map<nat, std::set<std::size_t>> forbidden_;  // element -> ranks keeping it out
    std::set<std::size_t> active_;  // ranks holding restraints, witnesses or satisfaction
    std::vector<std::pair<std::size_t, nat>> reach_;
    std::vector<std::optional<nat>> floor_;
    std::optional<nat> pending_;
    std::optional<std::pair<nat, NatSet>> use_;
};

struct CoimmuneRegressiveRun {
    PartialFnTable F;
    std::vector<nat> B_prefix;
    std::vector<nat> B_final;
    Trace trace;
};

inline CoimmuneRegressiveRun construct_coimmune_regressive_not_introred(const MockRegistry& reg,
                                                                        const std::vector<OracleFnTable>& functionals,
                                                                        nat stages, CoimmuneRegressive* keep = nullptr) {
    CoimmuneRegressive c(reg, functionals);
    Trace tr{"coimmune-regressive", {}};
    run_stages(c, tr, stages / 2);
    auto half = c.sequence().items();
    run_stages(c, tr, stages);
    auto fin = c.sequence().items();
    CoimmuneRegressiveRun out{c.F(), RegressedSequence::common_prefix(half, fin), fin, std::move(tr)};
    if (keep) *keep = std::move(c);
    return out;
}

}  // namespace selfenc
