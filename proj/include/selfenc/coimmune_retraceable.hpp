#pragma once

#include "engine.hpp"
#include "trees.hpp"

namespace selfenc {

// Builds a special partial f retracing a co-immune set that no total function retraces.
// P_e diagonalizes against phi_e as a retracing function; Q_e puts an element of W_e on the
// path. Priorities P_0 > Q_0 > P_1 > Q_1 > ...
class CoimmuneRetraceable {
public:
    nat stage = 0;

    explicit CoimmuneRetraceable(MockRegistry reg) : reg_(std::move(reg)) {
        w_ = {2};
        p_ = {0};
        q_ = {0};
        x_ = {std::nullopt};
        psat_ = {false};
        qsat_ = {false};
        f_.define(0, 0, 1);
        mentioned_ = 2;
    }

    std::size_t rank_count() const { return 2 * (stage + 1); }
    std::string name(std::size_t r) const { return (r % 2 == 0 ? "P" : "Q") + std::to_string(r / 2); }

    bool requires_attention(std::size_t r) {
        nat e = r / 2;
        if (r % 2 == 0) return !psat_[e] && reg_.eval_step(e, w_[e], stage).has_value();
        if (qsat_[e]) return false;
        pending_ = q_candidate(e);
        return pending_.has_value();
    }

    void act(std::size_t r, Trace& tr) {
        nat e = r / 2, s1 = stage + 1;
        if (r % 2 == 0) {
            nat w = w_[e], v = *reg_.eval_step(e, w, stage);
            if (v != p_[e]) {
                tr.emit(s1, name(r), EventKind::acts, w, "1");
                define(w, p_[e], tr, name(r));
            } else {
                tr.emit(s1, name(r), EventKind::acts, w, "2");
                define(w, w - 1, tr, name(r));
                define(w - 1, p_[e], tr, name(r));
            }
            psat_[e] = true;
            mention(w);
            injure_below(r, tr);
            grow(s1);
            assign_witnesses(e + 1, fresh_even(mentioned_), tr);
            for (nat d = e + 1; d <= s1; ++d) p_[d] = w;
            for (nat d = e; d <= s1; ++d) q_[d] = w;
        } else {
            auto [m, kase] = *pending_;
            tr.emit(s1, name(r), EventKind::acts, m, kase == 1 ? "1" : "2");
            if (kase == 1) define(m, q_[e], tr, name(r));
            x_[e] = m;
            qsat_[e] = true;
            tr.emit(s1, name(r), EventKind::witness_assigned, m);
            mention(m);
            injure_below(r, tr);
            grow(s1);
            assign_witnesses(e + 1, fresh_even(mentioned_) + 2, tr);
            for (nat d = e + 1; d <= s1; ++d) p_[d] = q_[d] = m;
        }
        respect_dirty_ = true;
    }

    void end_stage(std::optional<std::size_t> acted, Trace&) {
        if (!acted) {
            w_.push_back(w_.back() + 2);
            p_.push_back(p_.back());
            q_.push_back(q_.back());
            x_.push_back(std::nullopt);
            psat_.push_back(false);
            qsat_.push_back(false);
            mention(w_.back());
        }
        class_cache_.clear();
    }

    nat snapshot_hash() const {
        Fnv1a h;
        h.add(fn_hash(f_));
        h.add(mentioned_);
        for (std::size_t e = 0; e < w_.size(); ++e)
            if (psat_[e] || qsat_[e]) {
                h.add(e);
                h.add(psat_[e] ? w_[e] : 0);
                h.add(x_[e].value_or(0));
            }
        return h.h;
    }

    // The unique deep branch of Dom(f): the longest chain to 0 through a committed number.
    std::vector<nat> path() const {
        std::vector<nat> best{0};
        for (std::size_t e = 0; e < w_.size(); ++e) {
            for (auto anchor : {psat_[e] ? std::optional<nat>(w_[e]) : std::nullopt, qsat_[e] ? x_[e] : std::nullopt}) {
                if (!anchor) continue;
                auto c = chain_to_anchor(f_, *anchor, f_.entries().size() + 1);
                if (c.size() > best.size()) best = std::move(c);
            }
        }
        return best;
    }

    const PartialFnTable& f() const { return f_; }
    const MockRegistry& registry() const { return reg_; }
    nat requirement_count() const { return w_.size(); }
    nat witness(nat e) const { return w_.at(e); }
    bool p_satisfied(nat e) const { return e < psat_.size() && psat_[e]; }
    bool q_satisfied(nat e) const { return e < qsat_.size() && qsat_[e]; }
    std::optional<nat> q_witness(nat e) const { return e < x_.size() ? x_[e] : std::nullopt; }

private:
    void mention(nat v) { mentioned_ = std::max(mentioned_, v); }

    void define(nat x, nat out, Trace& tr, const std::string& who) {
        if (f_.defined(x)) throw std::logic_error("retracing function already defined at " + std::to_string(x));
        f_.define(x, out, stage + 1);
        mention(x);
        mention(out);
        tr.emit(stage + 1, who, EventKind::enumerated, x);
    }

    void grow(nat s1) {
        w_.resize(s1 + 1, 0);
        p_.resize(s1 + 1, 0);
        q_.resize(s1 + 1, 0);
        x_.resize(s1 + 1);
        psat_.resize(s1 + 1, false);
        qsat_.resize(s1 + 1, false);
    }

    // w_{d} = w_{first} + 2(d - first) for every open index d >= first.
    void assign_witnesses(nat first, nat w0, Trace& tr) {
        for (nat d = first; d < w_.size(); ++d) w_[d] = w0 + 2 * (d - first);
        if (first < w_.size()) {
            tr.emit(stage + 1, "P" + std::to_string(first), EventKind::witness_assigned, w0);
            mention(w_.back());
        }
    }

    void injure_below(std::size_t r, Trace& tr) {
        for (std::size_t k = r + 1; k < rank_count(); ++k) {
            nat d = k / 2;
            auto& sat = (k % 2 == 0) ? psat_ : qsat_;
            if (sat[d] || (k % 2 == 1 && x_[d])) {
                tr.emit(stage + 1, name(k), EventKind::injured, std::nullopt, name(r));
                sat[d] = false;
            }
            if (k % 2 == 1) x_[d].reset();
        }
    }

    // For each m in Dom(f): the least e at which m stops respecting priorities up to P_e.
    void refresh_respect() {
        if (!respect_dirty_) return;
        respect_dirty_ = false;
        std::vector<std::pair<nat, nat>> items;  // (threshold e, number that must lie on the chain)
        for (std::size_t d = 0; d < w_.size(); ++d) {
            if (psat_[d]) items.push_back({d, w_[d]});
            if (qsat_[d] && x_[d]) items.push_back({d + 1, *x_[d]});
        }
        std::sort(items.begin(), items.end());
        respect_until_.clear();
        for (auto& [m, en] : f_.entries()) {
            auto c = chain_to_anchor(f_, m, f_.entries().size() + 1);
            nat until = ~nat{0};
            if (c.empty()) {
                until = 0;
            } else {
                NatSet on(c.begin(), c.end());
                for (auto& [th, y] : items)
                    if (!on.count(y)) {
                        until = th;
                        break;
                    }
            }
            respect_until_[m] = until;
        }
    }

    // Members of Dom(f) in W_e, keyed by which program e runs, as (until, m) sorted by until
    // descending with a running minimum of m.
    const std::vector<std::pair<nat, nat>>& class_table(nat e) {
        auto key = reg_.slot(e);
        nat k = key ? *key : ~nat{0};
        if (!key) class_cache_.erase(k);
        if (auto it = class_cache_.find(k); it != class_cache_.end()) return it->second;
        refresh_respect();
        std::vector<std::pair<nat, nat>> rows;
        for (auto& [m, until] : respect_until_)
            if (until > 0 && reg_.eval_step(e, m, stage)) rows.push_back({until, m});
        std::sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first > b.first; });
        for (std::size_t i = 1; i < rows.size(); ++i) rows[i].second = std::min(rows[i].second, rows[i - 1].second);
        return class_cache_[k] = std::move(rows);
    }

    std::optional<std::pair<nat, int>> q_candidate(nat e) {
        std::optional<std::pair<nat, int>> best;
        const auto& prog = reg_.at(e);
        for (auto m = prog.next_in_domain(w_[e] + 1, stage); m; m = prog.next_in_domain(*m + 1, stage))
            if (!f_.defined(*m)) {
                best = {{*m, 1}};
                break;
            }
        const auto& rows = class_table(e);
        // rows[i].first is nonincreasing; find the last row with until > e.
        auto it = std::partition_point(rows.begin(), rows.end(), [&](auto& row) { return row.first > e; });
        if (it != rows.begin()) {
            nat m = std::prev(it)->second;
            if (!best || m < best->first) best = {{m, 2}};
        }
        return best;
    }

    MockRegistry reg_;
    PartialFnTable f_;
    std::vector<nat> w_, p_, q_;
    std::vector<std::optional<nat>> x_;
    std::vector<bool> psat_, qsat_;
    nat mentioned_ = 0;
    std::optional<std::pair<nat, int>> pending_;
    bool respect_dirty_ = true;
    std::map<nat, nat> respect_until_;
    std::map<nat, std::vector<std::pair<nat, nat>>> class_cache_;
};

struct RetraceableRun {
    PartialFnTable f;
    std::vector<nat> A_prefix;
    Trace trace;
};

inline RetraceableRun construct_coimmune_retraceable(const MockRegistry& reg, nat stages) {
    CoimmuneRetraceable c(reg);
    Trace tr{"coimmune-retraceable", {}};
    run_stages(c, tr, stages);
    return {c.f(), c.path(), std::move(tr)};
}

}  // namespace selfenc
