#pragma once

#include <variant>

#include "engine.hpp"
#include "enum_op.hpp"

namespace selfenc {

// The base set B = {b^0 < b^1 < ...} with its co-c.e. complement W. A number below b^(s - lag)
// that is not some b^i is enumerated into W by stage s.
struct ColumnBase {
    std::vector<nat> b;
    nat lag = 0;

    nat at(nat i) const {
        if (i >= b.size()) throw FixtureError("column base lists only " + std::to_string(b.size()) + " elements");
        return b[i];
    }
    bool in_B(nat x) const { return std::binary_search(b.begin(), b.end(), x); }
    bool in_W(nat x, nat s) const {
        if (s < lag || b.empty()) return false;
        return x < b[std::min<nat>(s - lag, b.size() - 1)] && !in_B(x);
    }
    // Membership in W once every listed b^i is known.
    bool in_W(nat x) const { return !b.empty() && x < b.back() && !in_B(x); }

    void validate() const {
        for (std::size_t i = 1; i < b.size(); ++i)
            if (b[i] <= b[i - 1]) throw FixtureError("column base must be strictly increasing");
    }
};

// <n, <x, y>>
inline nat column_code(nat n, nat x, nat y) { return cantor_pair(n, cantor_pair(x, y)); }

struct ColumnCell {
    nat column, x, y;
};
inline ColumnCell column_cell(nat code) {
    auto [n, xy] = cantor_unpair(code);
    auto [x, y] = cantor_unpair(xy);
    return {n, x, y};
}

// Builds A, enumeration reducible to B, whose columns n carry <n, <b^n, y>> for almost all y in
// B, while Gamma_e applied to column e alone never yields B (P_e) and the set S assembled from
// A never computes A (N_e). Priorities P_0 > N_0 > P_1 > N_1 > ...
class ColumnConstruction {
public:
    nat stage = 0;

    ColumnConstruction(ColumnBase base, std::vector<EnumOperator> ops, std::vector<OracleFnTable> phis)
        : base_(std::move(base)), ops_(std::move(ops)), phis_(std::move(phis)) {
        base_.validate();
        if (phis_.empty()) throw FixtureError("column construction needs at least one functional");
        for (auto& op : ops_)
            if (!std::holds_alternative<Extensional>(op))
                throw FixtureError("column construction needs operators given by axioms");
    }

    std::size_t rank_count() const { return 2 * (stage + 1); }
    std::string name(std::size_t r) const { return (r % 2 == 0 ? "P" : "N") + std::to_string(r / 2); }

    void begin_stage(Trace& tr) {
        nat s = stage, s1 = s + 1;
        grow(s1);
        // The element added to S this stage is chosen from A as it stood before the stage.
        sigma_pick_.reset();
        for (nat x : A_)
            if (!sigma_set_.count(x)) {
                sigma_pick_ = x;
                break;
            }
        nat top = base_.at(s1);
        for (nat m = 0; m <= s; ++m) {
            if (m == s) {
                for (nat i = 0; i <= s1; ++i) offer(m, base_.at(i), tr);
            } else {
                offer(m, top, tr);
            }
            for (auto it = held_back_[m].begin(); it != held_back_[m].end();) {
                nat code = *it;
                if (witness_[m] == code) {
                    ++it;
                    continue;
                }
                it = held_back_[m].erase(it);
                admit(code, tr, "column");
            }
        }
        for (nat e = 0; e <= s; ++e) {
            if (witness_[e]) continue;
            nat bm = base_.at(e), y = 0;
            while (cols_[e].count(y)) ++y;
            nat code = column_code(e, bm, y);
            witness_[e] = code;
            auto who = "N" + std::to_string(e);
            tr.emit(s1, who, EventKind::witness_assigned, code);
            tr.emit(s1, who, EventKind::restrained, code, "forbid");
        }
    }

    bool requires_attention(std::size_t r) {
        nat e = r / 2;
        if (r % 2 == 0) {
            if (psat_[e]) return false;
            pending_ = p_search(e);
            return pending_.has_value();
        }
        return !nsat_[e] && witness_[e] && phi(e).eval_set(sigma_set_, *witness_[e], stage).has_value();
    }

    void act(std::size_t r, Trace& tr) {
        nat e = r / 2, s1 = stage + 1;
        auto who = name(r);
        if (r % 2 == 0) {
            auto& [n, F] = *pending_;
            tr.emit(s1, who, EventKind::acts, n, "dump");
            psat_[e] = 1;
            p_out_[e] = n;
            p_dump_[e] = F;
            if (witness_[e]) {
                auto nw = "N" + std::to_string(e);
                tr.emit(s1, nw, EventKind::injured, std::nullopt, who);
                tr.emit(s1, nw, EventKind::released, *witness_[e], "override");
                witness_[e].reset();
                nsat_[e] = 0;
            }
            for (nat code : F) admit(code, tr, who);
            return;
        }
        nat w = *witness_[e];
        nat v = *phi(e).eval_set(sigma_set_, w, stage);
        ++n_acts_[e];
        nsat_[e] = 1;
        if (v == 0) {
            tr.emit(s1, who, EventKind::acts, w, "enumerate");
            tr.emit(s1, who, EventKind::released, w, "forbid");
            held_back_[e].erase(w);
            admit(w, tr, who);
        } else {
            tr.emit(s1, who, EventKind::acts, w, "restrain");
        }
    }

    void end_stage(std::optional<std::size_t>, Trace& tr) {
        if (!sigma_pick_) return;
        sigma_.push_back(*sigma_pick_);
        sigma_set_.insert(*sigma_pick_);
        tr.emit(stage + 1, "sigma", EventKind::enumerated, *sigma_pick_, "S");
    }

    nat snapshot_hash() const {
        Fnv1a h;
        h.add(a_digest_);
        h.add(chain_hash(sigma_));
        for (std::size_t e = 0; e < witness_.size(); ++e) {
            h.add(witness_[e].value_or(0));
            h.add(nsat_[e]);
            h.add(psat_[e]);
        }
        return h.h;
    }

    const ColumnBase& base() const { return base_; }
    const NatSet& A() const { return A_; }
    const std::vector<nat>& sigma() const { return sigma_; }
    const NatSet& S() const { return sigma_set_; }
    const OracleFnTable& phi(nat e) const { return phis_[e % phis_.size()]; }
    const EnumOperator* gamma(nat e) const { return e < ops_.size() ? &ops_[e] : nullptr; }
    nat columns() const { return witness_.size(); }
    std::optional<nat> witness(nat e) const { return e < witness_.size() ? witness_[e] : std::nullopt; }
    nat n_acts(nat e) const { return e < n_acts_.size() ? n_acts_[e] : 0; }
    bool p_acted(nat e) const { return e < psat_.size() && psat_[e]; }
    nat p_output(nat e) const { return p_out_.at(e); }
    const NatSet& p_dump(nat e) const { return p_dump_.at(e); }

    // Column e of A, every other column empty.
    NatSet column(nat e) const {
        NatSet out;
        nat bm = base_.at(e);
        for (nat y : cols_.at(e)) out.insert(column_code(e, bm, y));
        return out;
    }

private:
    void grow(nat n) {
        if (witness_.size() >= n + 1) return;
        witness_.resize(n + 1);
        nsat_.resize(n + 1, 0);
        psat_.resize(n + 1, 0);
        n_acts_.resize(n + 1, 0);
        p_out_.resize(n + 1, 0);
        p_dump_.resize(n + 1);
        cols_.resize(n + 1);
        held_back_.resize(n + 1);
    }

    void offer(nat m, nat y, Trace& tr) {
        nat code = column_code(m, base_.at(m), y);
        if (A_.count(code)) return;
        if (witness_[m] == code) {
            held_back_[m].insert(code);
            return;
        }
        admit(code, tr, "column");
    }

    // The only way into A; refuses anything outside the column shape <n, <b^n, y>>.
    void admit(nat code, Trace& tr, const std::string& who) {
        auto c = column_cell(code);
        if (c.column >= cols_.size() || c.x != base_.at(c.column))
            throw std::logic_error("element " + std::to_string(code) + " breaks the column shape");
        if (!A_.insert(code).second) return;
        cols_[c.column].insert(c.y);
        Fnv1a h;
        h.add(code);
        a_digest_ += h.h;
        tr.emit(stage + 1, who, EventKind::enumerated, code);
    }

    // Some n in W_s and an axiom of Gamma_e whose premise lies in column e with first
    // coordinate b^e; the least such n wins.
    std::optional<std::pair<nat, NatSet>> p_search(nat e) const {
        auto* op = gamma(e);
        if (!op) return std::nullopt;
        nat bm = base_.at(e);
        std::optional<std::pair<nat, NatSet>> best;
        for (auto& ax : std::get<Extensional>(*op).axioms) {
            if (ax.stage > stage + 1 || !base_.in_W(ax.n, stage)) continue;
            bool fits = true;
            for (nat code : ax.premise) {
                auto c = column_cell(code);
                fits = fits && c.column == e && c.x == bm;
            }
            if (fits && (!best || ax.n < best->first)) best = {{ax.n, ax.premise}};
        }
        return best;
    }

    ColumnBase base_;
    std::vector<EnumOperator> ops_;
    std::vector<OracleFnTable> phis_;
    NatSet A_;
    nat a_digest_ = 0;
    std::vector<NatSet> cols_;       // y values present in each column
    std::vector<NatSet> held_back_;  // column elements kept out by the current witness
    std::vector<std::optional<nat>> witness_;
    std::vector<char> nsat_, psat_;
    std::vector<nat> n_acts_, p_out_;
    std::vector<NatSet> p_dump_;
    std::vector<nat> sigma_;
    NatSet sigma_set_;
    std::optional<nat> sigma_pick_;
    std::optional<std::pair<nat, NatSet>> pending_;
};

struct ColumnRun {
    NatSet A_prefix;
    std::vector<nat> S_prefix;
    Trace trace;
};

inline ColumnRun construct_introenum_not_unif(const ColumnBase& base, const std::vector<EnumOperator>& ops,
                                              const std::vector<OracleFnTable>& phis, nat stages,
                                              ColumnConstruction* keep = nullptr) {
    ColumnConstruction c(base, ops, phis);
    Trace tr{"column", {}};
    run_stages(c, tr, stages);
    ColumnRun run{c.A(), c.sigma(), std::move(tr)};
    if (keep) *keep = std::move(c);
    return run;
}

}  // namespace selfenc
