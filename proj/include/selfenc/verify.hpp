#pragma once

#include <cctype>

#include "trace.hpp"

namespace selfenc {

struct Check {
    Check() = default;
    explicit Check(std::string n) : name(std::move(n)) {}
    std::string name;
    bool pass = true;
    std::optional<std::size_t> offset;  // index into trace.events of the first failure
    std::string message;
};

struct RequirementSummary {
    nat acts = 0;
    nat injuries = 0;
    nat witnesses = 0;
    nat higher_acts = 0;  // acts by higher-ranked requirements
    std::optional<nat> last_act_stage;
    std::optional<nat> witness;
};

struct VerificationReport {
    std::vector<Check> checks;
    std::map<std::string, RequirementSummary> requirements;
    std::vector<std::string> warnings;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    const Check& at(const std::string& name) const {
        for (auto& c : checks)
            if (c.name == name) return c;
        throw std::out_of_range("no check named " + name);
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"ok", ok()}, {"checks", nlohmann::json::array()}, {"warnings", warnings}};
        for (auto& c : checks) {
            nlohmann::json cj{{"name", c.name}, {"pass", c.pass}};
            if (c.offset) cj["offset"] = *c.offset;
            if (!c.message.empty()) cj["message"] = c.message;
            j["checks"].push_back(cj);
        }
        for (auto& [name, r] : requirements) {
            nlohmann::json rj{{"acts", r.acts}, {"injuries", r.injuries}, {"witnesses", r.witnesses}};
            if (r.witness) rj["witness"] = *r.witness;
            j["requirements"][name] = rj;
        }
        return j;
    }
};

// Requirement families of each construction, highest priority first within one index.
inline std::vector<std::string> requirement_kinds(const std::string& construction) {
    if (construction == "coimmune-retraceable") return {"P", "Q"};
    if (construction == "regressive-not-ce" || construction == "column") return {"P", "N"};
    if (construction == "coimmune-regressive") return {"R", "S", "Nhat"};
    if (construction == "retraceable-avoiding") return {"H"};
    return {};
}

// (index, family position); bookkeeping names like "stage" have no rank.
inline std::optional<std::pair<nat, nat>> priority_of(const std::string& construction, const std::string& req) {
    std::size_t i = 0;
    while (i < req.size() && !std::isdigit(static_cast<unsigned char>(req[i]))) ++i;
    if (i == 0 || i == req.size()) return std::nullopt;
    for (std::size_t j = i; j < req.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(req[j]))) return std::nullopt;
    auto kinds = requirement_kinds(construction);
    auto it = std::find(kinds.begin(), kinds.end(), req.substr(0, i));
    if (it == kinds.end()) return std::nullopt;
    return std::pair<nat, nat>{std::stoull(req.substr(i)), static_cast<nat>(it - kinds.begin())};
}

namespace detail {

inline std::optional<nat> position_of(const std::string& detail) {
    if (detail.size() < 2 || detail[0] != '@') return std::nullopt;
    return std::stoull(detail.substr(1));
}

struct Restraints {
    std::map<std::string, nat> prefix;                  // requirement -> protected prefix length
    std::map<std::string, NatSet> elements, forbids;

    void clear(const std::string& r) {
        prefix.erase(r);
        elements.erase(r);
        forbids.erase(r);
    }
    std::optional<std::string> protecting(nat x, std::optional<nat> pos) const {
        if (pos)
            for (auto& [r, len] : prefix)
                if (*pos < len) return r;
        for (auto& [r, s] : elements)
            if (s.count(x)) return r;
        return std::nullopt;
    }
    std::optional<std::string> forbidding(nat x) const {
        for (auto& [r, s] : forbids)
            if (s.count(x)) return r;
        return std::nullopt;
    }
};

inline void fail(Check& c, std::size_t offset, std::string msg) {
    if (!c.pass) return;
    c.pass = false;
    c.offset = offset;
    c.message = std::move(msg);
}

}  // namespace detail

// Audits a trace for the finite-injury discipline: injuries come from higher priority, are
// bounded by the acts above, acts are bounded by injuries, witnesses only move when something
// above acts, and no event breaks a live restraint.
inline VerificationReport verify_finite_injury(const Trace& tr) {
    VerificationReport rep;
    Check priority{"priority"}, injury{"injury-bound"}, acts{"act-bound"}, witness{"witness-stabilization"},
        restraint{"restraint-soundness"};
    if (tr.events.empty()) rep.warnings.push_back("empty trace: every check passes vacuously");
    const auto& C = tr.construction;
    auto kinds = requirement_kinds(C);
    auto rank = [&](const std::string& r) { return priority_of(C, r); };

    auto touch = [&](const std::string& r) -> RequirementSummary& { return rep.requirements[r]; };

    std::set<std::pair<nat, std::string>> acted_at;  // (stage, requirement)
    // Fenwick tree of act counts over the linear rank index * families + family.
    nat width = std::max<std::size_t>(kinds.size(), 1);
    std::vector<nat> plain, fen(1, 0);
    auto linear = [&](const std::pair<nat, nat>& k) { return k.first * width + k.second; };
    auto record_act = [&](nat pos) {
        if (pos + 1 >= fen.size()) {
            nat n = std::max<nat>(2 * fen.size(), pos + 2);
            plain.resize(n - 1, 0);
            fen.assign(n, 0);
            for (nat j = 0; j < plain.size(); ++j)
                for (nat t = j + 1; t < n; t += t & -t) fen[t] += plain[j];
        }
        ++plain[pos];
        for (nat t = pos + 1; t < fen.size(); t += t & -t) ++fen[t];
    };
    auto acts_above = [&](const std::pair<nat, nat>& k) {
        nat n = 0;
        for (nat t = std::min<nat>(linear(k), fen.size() - 1); t > 0; t -= t & -t) n += fen[t];
        return n;
    };

    detail::Restraints live;
    std::map<std::string, nat> overrides;
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
        auto& e = tr.events[i];
        auto rk = rank(e.req);
        switch (e.kind) {
            case EventKind::acts: {
                auto& s = touch(e.req);
                ++s.acts;
                s.last_act_stage = e.stage;
                acted_at.insert({e.stage, e.req});
                if (rk) {
                    record_act(linear(*rk));
                    nat bound = 1 + s.injuries;
                    if (s.acts > bound)
                        detail::fail(acts, i, e.req + " acted " + std::to_string(s.acts) + " times with " +
                                                  std::to_string(s.injuries) + " injuries");
                    if ((C == "column" || C == "regressive-not-ce") && e.req[0] == 'P' && s.acts > 1)
                        detail::fail(acts, i, e.req + " acted twice");
                    if (C == "column" && e.req[0] == 'N' && s.acts > 2) detail::fail(acts, i, e.req + " acted three times");
                }
                break;
            }
            case EventKind::injured: {
                auto& s = touch(e.req);
                ++s.injuries;
                live.clear(e.req);
                auto by = rank(e.detail);
                if (!rk || !by || !(*by < *rk)) {
                    detail::fail(priority, i, e.req + " injured by " + e.detail + ", which does not outrank it");
                } else if (!acted_at.count({e.stage, e.detail})) {
                    detail::fail(priority, i, e.req + " injured by " + e.detail + ", which did not act at stage " +
                                                  std::to_string(e.stage));
                }
                if (rk && s.injuries > acts_above(*rk))
                    detail::fail(injury, i, e.req + " injured more often than requirements above it acted");
                break;
            }
            case EventKind::witness_assigned: {
                auto& s = touch(e.req);
                ++s.witnesses;
                s.witness = e.value;
                if (rk && s.witnesses > 1 + acts_above(*rk))
                    detail::fail(witness, i, e.req + " received witness " + std::to_string(s.witnesses) +
                                                 " although only " + std::to_string(acts_above(*rk)) +
                                                 " higher acts happened");
                break;
            }
            case EventKind::restrained: {
                touch(e.req);
                if (!e.value) break;
                if (e.detail == "prefix") live.prefix[e.req] = std::max(live.prefix[e.req], *e.value);
                else if (e.detail == "element") live.elements[e.req].insert(*e.value);
                else if (e.detail == "forbid") live.forbids[e.req].insert(*e.value);
                break;
            }
            case EventKind::released: {
                if (!e.value) {
                    live.clear(e.req);
                    break;
                }
                if (e.detail == "override") {
                    if (++overrides[e.req] > 1 || C != "column")
                        detail::fail(restraint, i, "override of " + e.req + " is not sanctioned");
                }
                live.forbids[e.req].erase(*e.value);
                live.elements[e.req].erase(*e.value);
                break;
            }
            case EventKind::removed: {
                if (!e.value) break;
                if (auto who = live.protecting(*e.value, detail::position_of(e.detail)))
                    detail::fail(restraint, i,
                                 e.req + " removed " + std::to_string(*e.value) + " " + e.detail + " held by " + *who);
                break;
            }
            case EventKind::enumerated: {
                if (!e.value || e.detail == "S") break;
                if (auto who = live.forbidding(*e.value))
                    detail::fail(restraint, i, e.req + " enumerated " + std::to_string(*e.value) + " forbidden by " + *who);
                break;
            }
            default: break;
        }
    }
    for (auto& [name, s] : rep.requirements)
        if (auto rk = rank(name)) s.higher_acts = acts_above(*rk);
    rep.checks = {priority, injury, acts, witness, restraint};
    return rep;
}

struct RegressionCheck {
    bool pass = true;
    std::optional<nat> index;
    std::string message;
};

// f(a_{i+1}) = a_i for every i, and f(a_0) = a_0.
inline RegressionCheck verify_regression(const PartialFnTable& f, const std::vector<nat>& A) {
    for (nat i = 0; i < A.size(); ++i) {
        nat want = i == 0 ? A[0] : A[i - 1];
        auto v = f.value(A[i]);
        if (!v || *v != want)
            return {false, i,
                    "f(" + std::to_string(A[i]) + ") = " + (v ? std::to_string(*v) : "undefined") + ", expected " +
                        std::to_string(want)};
    }
    return {};
}

// Every finalize hash of `recorded` must match the rerun, stage for stage.
inline Check verify_replay(const Trace& recorded, const Trace& rerun) {
    Check c{"replay"};
    std::vector<const TraceEvent*> a, b;
    for (auto& e : recorded.events)
        if (e.kind == EventKind::finalize) a.push_back(&e);
    for (auto& e : rerun.events)
        if (e.kind == EventKind::finalize) b.push_back(&e);
    std::size_t off = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (off < recorded.events.size() && &recorded.events[off] != a[i]) ++off;
        if (i >= b.size() || a[i]->value != b[i]->value || a[i]->stage != b[i]->stage) {
            c.pass = false;
            c.offset = off;
            c.message = "snapshot hash differs at stage " + std::to_string(a[i]->stage);
            return c;
        }
    }
    if (a.size() != b.size()) {
        c.pass = false;
        c.message = "rerun has " + std::to_string(b.size()) + " stages, trace has " + std::to_string(a.size());
    }
    return c;
}

}  // namespace selfenc
