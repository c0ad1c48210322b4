#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfenc {

using nat = std::uint64_t;
using NatSet = std::set<nat>;

// A fixture failed to satisfy the contract a procedure relies on.
struct FixtureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The hypothesis of a lemma does not hold at the scale being simulated.
struct PremiseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline nat cantor_pair(nat x, nat y) {
    nat d = x + y;
    return d * (d + 1) / 2 + y;
}

inline std::pair<nat, nat> cantor_unpair(nat n) {
    nat d = static_cast<nat>((std::sqrt(8.0L * n + 1) - 1) / 2);
    while (d * (d + 1) / 2 > n) --d;
    while ((d + 1) * (d + 2) / 2 <= n) ++d;
    nat y = n - d * (d + 1) / 2;
    return {d - y, y};
}

// D_u: the positions of the set bits of u.
inline NatSet canonical_finite_set(nat u) {
    NatSet out;
    for (nat i = 0; u != 0; ++i, u >>= 1)
        if (u & 1) out.insert(i);
    return out;
}

inline nat canonical_code(const NatSet& s) {
    nat u = 0;
    for (nat x : s) {
        if (x >= 64) throw std::out_of_range("canonical_code: element too large");
        u |= nat{1} << x;
    }
    return u;
}

// Zero-based: nth_prime(0) == 2.
inline nat nth_prime(std::size_t i) {
    static std::vector<nat> primes{2};
    for (nat c = primes.back() + 1; primes.size() <= i; ++c) {
        bool prime = true;
        for (nat p : primes) {
            if (p * p > c) break;
            if (c % p == 0) { prime = false; break; }
        }
        if (prime) primes.push_back(c);
    }
    return primes[i];
}

enum class RuleKind { identity, constant, successor, affine };

struct TotalRule {
    RuleKind kind = RuleKind::identity;
    nat a = 1;           // affine slope
    std::int64_t b = 0;  // affine offset (truncated at 0), or the constant
    nat pace = 1;        // inputs below pace*(s-1)+pace converge by stage s
    nat modulus = 1;     // the rule only covers x = residue (mod modulus)
    nat residue = 0;

    nat apply(nat x) const {
        switch (kind) {
            case RuleKind::identity: return x;
            case RuleKind::constant: return static_cast<nat>(b);
            case RuleKind::successor: return x + 1;
            case RuleKind::affine: {
                auto v = static_cast<std::int64_t>(a * x) + b;
                return v < 0 ? 0 : static_cast<nat>(v);
            }
        }
        return x;
    }
    // With pace 1 an input is seen one stage after itself, like any other computation.
    nat stage(nat x) const { return 1 + x / pace; }
    bool covers(nat x) const { return x % modulus == residue; }
    bool total() const { return modulus == 1; }
    // Least covered input >= x.
    nat next_covered(nat x) const { return x + (residue + modulus - x % modulus) % modulus; }

    bool operator==(const TotalRule&) const = default;
};

struct Entry {
    nat out;
    nat stage;
    bool operator==(const Entry&) const = default;
};

class PartialFnTable {
public:
    PartialFnTable() = default;
    explicit PartialFnTable(TotalRule r) : rule_(r) {}

    void define(nat x, nat out, nat stage) {
        if (stage < 1) throw FixtureError("converge stage must be >= 1");
        if (auto it = entries_.find(x); it != entries_.end()) {
            if (it->second.out != out) throw FixtureError("conflicting entry at input " + std::to_string(x));
            it->second.stage = std::min(it->second.stage, stage);
            index_dirty_ = true;
            return;
        }
        if (rule_ && rule_->covers(x) && rule_->apply(x) != out)
            throw FixtureError("entry disagrees with total rule at input " + std::to_string(x));
        entries_.emplace(x, Entry{out, stage});
        index_dirty_ = true;
    }

    void set_rule(TotalRule r) {
        for (auto& [x, e] : entries_)
            if (r.covers(x) && r.apply(x) != e.out) throw FixtureError("total rule disagrees with entry " + std::to_string(x));
        rule_ = r;
    }

    std::optional<nat> eval_step(nat x, nat s) const {
        if (auto it = entries_.find(x); it != entries_.end()) {
            if (it->second.stage <= s) return it->second.out;
            if (!rule_) return std::nullopt;
        }
        if (rule_ && rule_->covers(x) && rule_->stage(x) <= s) return rule_->apply(x);
        return std::nullopt;
    }

    std::optional<nat> stage_of(nat x) const {
        std::optional<nat> st;
        if (auto it = entries_.find(x); it != entries_.end()) st = it->second.stage;
        if (rule_ && rule_->covers(x)) st = st ? std::min(*st, rule_->stage(x)) : rule_->stage(x);
        return st;
    }

    std::optional<nat> value(nat x) const {
        if (auto it = entries_.find(x); it != entries_.end()) return it->second.out;
        if (rule_ && rule_->covers(x)) return rule_->apply(x);
        return std::nullopt;
    }

    bool defined(nat x) const { return entries_.count(x) || (rule_ && rule_->covers(x)); }

    // W_{e,s} restricted to inputs <= bound.
    NatSet domain_at(nat s, nat bound) const {
        NatSet d;
        for (auto& [x, e] : entries_)
            if (x <= bound && e.stage <= s) d.insert(x);
        if (rule_)
            for (nat x = rule_->residue; x <= bound && rule_->stage(x) <= s; x += rule_->modulus) d.insert(x);
        return d;
    }

    // Least y >= x with eval_step(y, s) converged.
    std::optional<nat> next_in_domain(nat x, nat s) const {
        std::optional<nat> best;
        if (rule_) {
            nat y = rule_->next_covered(x);
            if (rule_->stage(y) <= s) best = y;
        }
        if (index_dirty_) rebuild_index();
        auto it = std::lower_bound(keys_.begin(), keys_.end(), x);
        for (std::size_t i = it - keys_.begin(); i < keys_.size(); ++i) {
            if (best && keys_[i] >= *best) break;
            if (suffix_min_stage_[i] > s) break;
            if (entries_.at(keys_[i]).stage <= s) { best = keys_[i]; break; }
        }
        return best;
    }

    // Least even y >= x with eval_step(y, s) converged.
    std::optional<nat> next_even_in_domain(nat x, nat s) const {
        std::optional<nat> best;
        if (rule_) {
            nat y = rule_->next_covered(x);
            if (y % 2 == 1 && rule_->modulus % 2 == 1) y += rule_->modulus;
            if (y % 2 == 0 && rule_->stage(y) <= s) best = y;
        }
        for (auto it = entries_.lower_bound(x); it != entries_.end(); ++it) {
            if (best && it->first >= *best) break;
            if (it->first % 2 == 0 && it->second.stage <= s) {
                best = it->first;
                break;
            }
        }
        return best;
    }

    const std::map<nat, Entry>& entries() const { return entries_; }
    const std::optional<TotalRule>& rule() const { return rule_; }
    bool empty() const { return entries_.empty() && !rule_; }
    bool operator==(const PartialFnTable& o) const { return entries_ == o.entries_ && rule_ == o.rule_; }

private:
    void rebuild_index() const {
        keys_.clear();
        suffix_min_stage_.assign(entries_.size(), 0);
        for (auto& [x, e] : entries_) keys_.push_back(x);
        nat m = ~nat{0};
        std::size_t i = entries_.size();
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
            m = std::min(m, it->second.stage);
            suffix_min_stage_[--i] = m;
        }
        index_dirty_ = false;
    }

    std::map<nat, Entry> entries_;
    std::optional<TotalRule> rule_;
    mutable std::vector<nat> keys_;
    mutable std::vector<nat> suffix_min_stage_;
    mutable bool index_dirty_ = true;
};

class MockRegistry {
public:
    MockRegistry() = default;
    MockRegistry(std::vector<PartialFnTable> programs, bool cycle, std::vector<bool> infinite = {})
        : programs_(std::move(programs)), infinite_(std::move(infinite)), cycle_(cycle) {
        infinite_.resize(programs_.size(), false);
    }

    // Out-of-range indices in a non-cycling registry are the empty program.
    const PartialFnTable& at(nat e) const {
        static const PartialFnTable nowhere;
        if (auto it = bound_.find(e); it != bound_.end()) return it->second;
        if (programs_.empty()) return nowhere;
        if (e < programs_.size()) return programs_[e];
        return cycle_ ? programs_[e % programs_.size()] : nowhere;
    }

    std::optional<nat> eval_step(nat e, nat x, nat s) const { return at(e).eval_step(x, s); }
    NatSet W(nat e, nat s, nat bound) const { return at(e).domain_at(s, bound); }

    nat add(PartialFnTable p, bool infinite = false) {
        programs_.push_back(std::move(p));
        infinite_.push_back(infinite);
        return programs_.size() - 1;
    }

    // Which fixture program an index runs, if any; equal keys mean equal programs.
    std::optional<nat> slot(nat e) const {
        if (bound_.count(e) || programs_.empty()) return std::nullopt;
        if (e < programs_.size()) return e;
        if (cycle_) return e % programs_.size();
        return std::nullopt;
    }

    bool is_total(nat e) const { return at(e).rule() && at(e).rule()->total(); }
    // Rule programs have infinite domains; entry programs carry a fixture flag standing in for
    // "this domain goes on forever".
    bool is_infinite(nat e) const {
        if (at(e).rule()) return true;
        auto k = slot(e);
        return k && infinite_[*k];
    }

    // Installs a program at an arbitrary index, shadowing whatever the index resolved to.
    void bind(nat e, PartialFnTable p) { bound_[e] = std::move(p); }
    const std::map<nat, PartialFnTable>& bound() const { return bound_; }

    std::size_t size() const { return programs_.size(); }
    bool cycles() const { return cycle_; }
    const std::vector<PartialFnTable>& programs() const { return programs_; }
    const std::vector<bool>& infinite_flags() const { return infinite_; }

private:
    std::vector<PartialFnTable> programs_;
    std::vector<bool> infinite_;
    std::map<nat, PartialFnTable> bound_;
    bool cycle_ = false;
};

struct HaltingApprox {
    nat stage = 0;
    NatSet members;
};

// Indices e <= s are examined.
inline HaltingApprox halting_approx(const MockRegistry& reg, nat s) {
    HaltingApprox h{s, {}};
    for (nat e = 0; e <= s; ++e) {
        if (!reg.cycles() && e >= reg.size() && !reg.bound().count(e)) continue;
        if (reg.eval_step(e, e, s)) h.members.insert(e);
    }
    return h;
}

// One axiom of an oracle functional: the oracle must contain every element of pos and none
// of neg, and the computation is seen from the given stage on.
struct OracleAxiom {
    NatSet pos;
    NatSet neg;
    nat input;
    nat output;
    nat stage = 1;
    bool operator==(const OracleAxiom&) const = default;
};

// Closed-form fallback for a functional: once the oracle holds at least `size` elements, the
// computation on n halts at stage 1 + n/pace. Outputs: constant c, n mod 2, or [n > c].
// Convergence only needs positive information, so it persists to supersets.
struct SetRule {
    enum class Kind { constant, parity, threshold };
    Kind kind = Kind::constant;
    nat c = 0;
    nat size = 1;
    nat pace = 1;

    nat output(nat n) const {
        switch (kind) {
            case Kind::constant: return c;
            case Kind::parity: return n % 2;
            case Kind::threshold: return n > c ? 1 : 0;
        }
        return c;
    }
    bool operator==(const SetRule&) const = default;
};

// A Turing functional given by finitely many axioms, tried in order, then an optional rule.
struct OracleFnTable {
    std::vector<OracleAxiom> axioms;
    std::optional<SetRule> rule;

    // The oracle is a finite set read as its characteristic function.
    std::optional<nat> eval_set(const NatSet& X, nat input, nat s = ~nat{0}) const {
        for (auto& ax : axioms) {
            if (ax.input != input || ax.stage > s) continue;
            bool ok = true;
            for (nat p : ax.pos) ok = ok && X.count(p);
            for (nat q : ax.neg) ok = ok && !X.count(q);
            if (ok) return ax.output;
        }
        if (rule && X.size() >= rule->size && 1 + input / rule->pace <= s) return rule->output(input);
        return std::nullopt;
    }

    // The oracle is a finite function string; it is queried through the graph codes <i, v>,
    // and every queried position must lie inside the string.
    std::optional<nat> eval_string(const std::vector<nat>& sigma, nat input, nat s = ~nat{0}) const {
        auto holds = [&](nat code) {
            auto [i, v] = cantor_unpair(code);
            return i < sigma.size() && sigma[i] == v;
        };
        auto inside = [&](nat code) { return cantor_unpair(code).first < sigma.size(); };
        for (auto& ax : axioms) {
            if (ax.input != input || ax.stage > s) continue;
            bool ok = true;
            for (nat p : ax.pos) ok = ok && holds(p);
            for (nat q : ax.neg) ok = ok && inside(q) && !holds(q);
            if (ok) return ax.output;
        }
        if (rule && sigma.size() >= rule->size && 1 + input / rule->pace <= s) return rule->output(input);
        return std::nullopt;
    }
};

}  // namespace selfenc
