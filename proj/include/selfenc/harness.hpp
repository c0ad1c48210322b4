#pragma once

#include "coimmune_regressive.hpp"
#include "coimmune_retraceable.hpp"
#include "fixtures.hpp"
#include "forcing.hpp"
#include "regressive_not_ce.hpp"
#include "total_regressor.hpp"
#include "verify.hpp"

namespace selfenc {

inline const std::vector<std::string>& construction_ids() {
    static const std::vector<std::string> ids{"coimmune-retraceable", "total-regressor", "regressive-not-ce",
                                              "coimmune-regressive",  "column",          "retraceable-avoiding"};
    return ids;
}

struct UnknownConstruction : std::invalid_argument {
    explicit UnknownConstruction(const std::string& id)
        : std::invalid_argument("unknown construction '" + id + "'; valid ids: " + [] {
              std::string s;
              for (auto& i : construction_ids()) s += (s.empty() ? "" : ", ") + i;
              return s;
          }()) {}
};

// Everything one run produces: the trace, the regressing function when there is one, and the
// constructed prefix.
struct RunOutput {
    Trace trace;
    std::optional<PartialFnTable> f;
    std::vector<nat> prefix;
    json summary;
};

// A fixture bundle is one JSON object with whichever of "registry", "functionals",
// "operators", "column_base" and "avoid_sets" the construction reads.
inline RunOutput run_construction(const std::string& id, const json& bundle, nat stages) {
    if (stages == 0) throw std::invalid_argument("stage budget must be at least 1");
    auto need = [&](const char* key) -> const json& {
        if (!bundle.contains(key)) throw FixtureError("construction '" + id + "' needs fixture key '" + key + "'");
        return bundle.at(key);
    };
    RunOutput out;
    if (id == "coimmune-retraceable") {
        auto r = construct_coimmune_retraceable(registry_from(need("registry")), stages);
        out = {std::move(r.trace), std::move(r.f), r.A_prefix, {}};
    } else if (id == "total-regressor") {
        auto r = construct_total_regressor_for_halting(registry_from(need("registry")), stages);
        out = {std::move(r.trace), std::move(r.f), r.A_prefix, {}};
    } else if (id == "regressive-not-ce") {
        auto r = construct_regressive_not_ce(registry_from(need("registry")), stages);
        out = {std::move(r.trace), std::move(r.f), r.A_prefix, {}};
        out.summary["final"] = r.A_final;
    } else if (id == "coimmune-regressive") {
        auto r = construct_coimmune_regressive_not_introred(registry_from(need("registry")),
                                                            functionals_from(need("functionals")), stages);
        out = {std::move(r.trace), std::move(r.F), r.B_prefix, {}};
        out.summary["final"] = r.B_final;
    } else if (id == "column") {
        auto r = construct_introenum_not_unif(column_base_from(need("column_base")), operators_from(need("operators")),
                                              functionals_from(need("functionals")), stages);
        out = {std::move(r.trace), std::nullopt, std::vector<nat>(r.A_prefix.begin(), r.A_prefix.end()), {}};
        out.summary["S"] = r.S_prefix;
    } else if (id == "retraceable-avoiding") {
        std::vector<AvoidSet> H;
        for (auto& h : need("avoid_sets")) H.push_back(avoid_set_from(h));
        auto r = construct_retraceable_avoiding(H, stages);
        PartialFnTable f;
        for (nat c : r.A_prefix) f.define(c, retrace_code(c), 1);
        out = {std::move(r.trace), std::move(f), r.A_prefix, {}};
        json excluded = json::array();
        for (auto& rd : r.rounds) excluded.push_back(rd.tau_code);
        out.summary["excluded"] = excluded;
    } else {
        throw UnknownConstruction(id);
    }
    out.summary["construction"] = id;
    out.summary["stages"] = stages;
    out.summary["prefix"] = out.prefix;
    out.summary["trace_hash"] = out.trace.hash();
    return out;
}

inline nat trace_stages(const Trace& tr) {
    nat s = 0;
    for (auto& e : tr.events) s = std::max(s, e.stage);
    return s;
}

// Deciders for the forcing builder, read from JSON:
//   {"kind": "exclude", "m": m}          pad the strings with 0s past m
//   {"kind": "raise", "n": n, "value": v} (Hechler) lift g(n) to v when n is past sigma
//   {"kind": "copy-tail"}                (sub-triple) extend tau by the bits of sigma beyond it
inline Decider decider_from(const json& j, const Ambient& f = zero_ambient()) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "exclude") {
        nat m = j.at("m").get<nat>();
        return [m](const Condition& p) {
            Condition q = p;
            if (p.variant == Variant::hechler) return q;
            if (q.sigma.size() <= m) q.sigma.resize(m + 1, 0);
            if (p.variant == Variant::triple && q.tau.size() <= m) q.tau.resize(m + 1, 0);
            return q;
        };
    }
    if (kind == "raise") {
        nat n = j.at("n").get<nat>(), v = j.at("value").get<nat>();
        return [n, v, f](const Condition& p) {
            Condition q = p;
            if (p.variant != Variant::hechler || n < p.sigma.size()) return q;
            while (q.g.size() <= n) q.g.push_back(f(q.g.size()));
            q.g[n] = std::max(q.g[n], v);
            return q;
        };
    }
    if (kind == "copy-tail") {
        return [](const Condition& p) {
            Condition q = p;
            if (p.variant != Variant::subtriple) return q;
            for (nat i = q.tau.size(); i < q.sigma.size(); ++i) q.tau.push_back(q.sigma[i]);
            return q;
        };
    }
    throw FixtureError("unknown decider kind '" + kind + "'");
}

struct DeciderBundle {
    Ambient f = zero_ambient();
    std::vector<Decider> deciders;
    json spec;
};

// {"ambient": rule (optional, Hechler only), "deciders": [...]}
inline DeciderBundle deciders_from(const json& j) {
    DeciderBundle b;
    if (j.contains("ambient")) {
        auto r = rule_from(j["ambient"]);
        if (!r.total()) throw FixtureError("the ambient function must be total");
        b.f = [r](nat n) { return r.apply(n); };
    }
    b.spec = j.value("deciders", json::array());
    for (auto& d : b.spec) b.deciders.push_back(decider_from(d, b.f));
    return b;
}

}  // namespace selfenc
