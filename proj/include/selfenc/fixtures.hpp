#pragma once

#include <fstream>

#include <json.hpp>

#include "column_construction.hpp"
#include "enum_op.hpp"
#include "retraceable_avoiding.hpp"
#include "trees.hpp"

namespace selfenc {

using nlohmann::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureError("cannot open fixture " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FixtureError(path + ": " + e.what());
    }
}

inline NatSet set_from(const json& j) {
    NatSet s;
    for (auto& x : j) s.insert(x.get<nat>());
    return s;
}

inline TotalRule rule_from(const json& j) {
    auto kind = j.at("kind").get<std::string>();
    auto params = j.value("params", json::array());
    auto param = [&](std::size_t i) {
        if (i >= params.size()) throw FixtureError("rule '" + kind + "' needs more params");
        return params[i].get<nat>();
    };
    TotalRule r;
    if (kind == "identity") r = {RuleKind::identity};
    else if (kind == "successor") r = {RuleKind::successor};
    else if (kind == "constant") r = {RuleKind::constant, 0, static_cast<std::int64_t>(param(0))};
    else if (kind == "affine") {
        if (params.size() < 2) throw FixtureError("rule 'affine' needs [slope, offset]");
        r = {RuleKind::affine, params[0].get<nat>(), params[1].get<std::int64_t>()};
    } else {
        throw FixtureError("unknown rule kind '" + kind + "'");
    }
    r.pace = j.value("pace", nat{1});
    r.modulus = j.value("modulus", nat{1});
    r.residue = j.value("residue", nat{0});
    if (r.pace == 0 || r.modulus == 0 || r.residue >= r.modulus) throw FixtureError("bad rule pace or residue class");
    return r;
}

inline json rule_to_json(const TotalRule& r) {
    json j;
    switch (r.kind) {
        case RuleKind::identity: j = {{"kind", "identity"}}; break;
        case RuleKind::successor: j = {{"kind", "successor"}}; break;
        case RuleKind::constant: j = {{"kind", "constant"}, {"params", {r.b}}}; break;
        case RuleKind::affine: j = {{"kind", "affine"}, {"params", {r.a, r.b}}}; break;
    }
    if (r.pace != 1) j["pace"] = r.pace;
    if (r.modulus != 1) {
        j["modulus"] = r.modulus;
        j["residue"] = r.residue;
    }
    return j;
}

inline PartialFnTable program_from(const json& j) {
    PartialFnTable p;
    if (j.contains("rule") && !j["rule"].is_null()) p.set_rule(rule_from(j["rule"]));
    for (auto& e : j.value("entries", json::array())) {
        if (e.size() != 3) throw FixtureError("program entries are [x, out, stage] triples");
        p.define(e[0].get<nat>(), e[1].get<nat>(), e[2].get<nat>());
    }
    return p;
}

inline json program_to_json(const PartialFnTable& p, bool infinite = false) {
    json entries = json::array();
    for (auto& [x, e] : p.entries()) entries.push_back({x, e.out, e.stage});
    json j{{"entries", entries}, {"rule", p.rule() ? rule_to_json(*p.rule()) : json(nullptr)}};
    if (infinite) j["infinite"] = true;
    return j;
}

inline MockRegistry registry_from(const json& j) {
    std::vector<PartialFnTable> progs;
    std::vector<bool> inf;
    for (auto& p : j.at("programs")) {
        progs.push_back(program_from(p));
        inf.push_back(p.value("infinite", false));
    }
    return MockRegistry(std::move(progs), j.value("cycle", false), std::move(inf));
}

inline json registry_to_json(const MockRegistry& reg) {
    json progs = json::array();
    for (std::size_t i = 0; i < reg.size(); ++i)
        progs.push_back(program_to_json(reg.programs()[i], reg.infinite_flags()[i]));
    return {{"programs", progs}, {"cycle", reg.cycles()}};
}

inline AlphaTable::Kind alpha_kind_from(const std::string& s) {
    if (s == "first") return AlphaTable::Kind::first;
    if (s == "min") return AlphaTable::Kind::min;
    if (s == "even-first") return AlphaTable::Kind::even_first;
    if (s == "prefer") return AlphaTable::Kind::prefer;
    if (s == "table") return AlphaTable::Kind::table;
    throw FixtureError("unknown alpha rule '" + s + "'");
}

inline AlphaTable alpha_from(const json& j) {
    AlphaTable a;
    a.kind = alpha_kind_from(j.at("rule").get<std::string>());
    if (j.contains("members")) a.members = set_from(j["members"]);
    for (auto& row : j.value("rows", json::array())) a.rows[{row[0].get<nat>(), row[1].get<nat>()}] = row[2].get<nat>();
    if (a.kind == AlphaTable::Kind::table) {
        if (!j.contains("fallback")) throw FixtureError("alpha table without a fallback rule is partial");
        a.fallback = alpha_kind_from(j["fallback"].get<std::string>());
        if (a.fallback == AlphaTable::Kind::table) throw FixtureError("alpha fallback must be a closed rule");
    }
    return a;
}

inline EnumOperator operator_from(const json& j) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "div-even") return Divisibility{false};
    if (kind == "div-odd") return Divisibility{true};
    if (kind == "alpha") return ViaAlpha{alpha_from(j.at("params"))};
    if (kind != "extensional") throw FixtureError("unknown operator kind '" + kind + "'");
    Extensional ex;
    for (auto& a : j.value("axioms", json::array())) {
        Axiom ax = a.is_array() ? Axiom::coded(a.at(0).get<nat>(), a.at(1).get<nat>(), a.at(2).get<nat>())
                                : Axiom{set_from(a.at("set")), a.at("n").get<nat>(), a.value("stage", nat{1})};
        if (ax.stage < 1) throw FixtureError("axiom stage must be >= 1");
        ex.axioms.push_back(std::move(ax));
    }
    return ex;
}

inline json operator_to_json(const EnumOperator& op) {
    if (auto* d = std::get_if<Divisibility>(&op)) return {{"kind", d->odd ? "div-odd" : "div-even"}};
    if (std::holds_alternative<ViaAlpha>(op)) throw std::invalid_argument("alpha operators are fixture-only");
    json axioms = json::array();
    for (auto& a : std::get<Extensional>(op).axioms)
        axioms.push_back({{"set", a.premise}, {"n", a.n}, {"stage", a.stage}});
    return {{"kind", "extensional"}, {"axioms", axioms}};
}

inline std::vector<EnumOperator> operators_from(const json& j) {
    std::vector<EnumOperator> ops;
    for (auto& o : j) ops.push_back(operator_from(o));
    return ops;
}

inline OracleFnTable functional_from(const json& j) {
    OracleFnTable phi;
    for (auto& a : j.value("axioms", json::array()))
        phi.axioms.push_back({set_from(a.value("pos", json::array())), set_from(a.value("neg", json::array())),
                              a.at("input").get<nat>(), a.at("output").get<nat>(), a.value("stage", nat{1})});
    if (j.contains("rule") && !j["rule"].is_null()) {
        auto& r = j["rule"];
        SetRule rule;
        auto kind = r.at("kind").get<std::string>();
        if (kind == "constant") rule.kind = SetRule::Kind::constant;
        else if (kind == "parity") rule.kind = SetRule::Kind::parity;
        else if (kind == "threshold") rule.kind = SetRule::Kind::threshold;
        else throw FixtureError("unknown functional rule '" + kind + "'");
        rule.c = r.value("c", nat{0});
        rule.size = r.value("size", nat{1});
        rule.pace = r.value("pace", nat{1});
        if (rule.pace == 0) throw FixtureError("functional rule pace must be positive");
        phi.rule = rule;
    }
    return phi;
}

inline json functional_to_json(const OracleFnTable& phi) {
    json axioms = json::array();
    for (auto& a : phi.axioms)
        axioms.push_back({{"pos", a.pos}, {"neg", a.neg}, {"input", a.input}, {"output", a.output}, {"stage", a.stage}});
    json j{{"axioms", axioms}};
    if (phi.rule) {
        static const char* names[] = {"constant", "parity", "threshold"};
        j["rule"] = {{"kind", names[static_cast<int>(phi.rule->kind)]},
                     {"c", phi.rule->c},
                     {"size", phi.rule->size},
                     {"pace", phi.rule->pace}};
    }
    return j;
}

inline std::vector<OracleFnTable> functionals_from(const json& j) {
    std::vector<OracleFnTable> out;
    for (auto& f : j) out.push_back(functional_from(f));
    return out;
}

struct TreeFixture {
    BinTree tree;
    nat depth = 0;
};

inline TreeFixture tree_from(const json& j) {
    TreeFixture t;
    t.depth = j.at("depth").get<nat>();
    for (auto& n : j.at("nodes")) {
        auto s = n.get<std::string>();
        if (s.find_first_not_of("01") != std::string::npos) throw FixtureError("tree nodes are 0/1 strings");
        if (s.size() > t.depth) throw FixtureError("tree node deeper than the declared depth");
        t.tree.insert(s);
    }
    for (auto& s : t.tree)
        if (!s.empty() && !t.tree.count(s.substr(0, s.size() - 1))) throw FixtureError("tree is not prefix-closed");
    return t;
}

inline json tree_to_json(const BinTree& t, nat depth) {
    return {{"depth", depth}, {"nodes", json(std::vector<std::string>(t.begin(), t.end()))}};
}

inline SetPrefix target_from(const json& j) {
    return {set_from(j.at("members")), j.at("universe").get<nat>()};
}

inline ColumnBase column_base_from(const json& j) {
    ColumnBase b{j.at("b").get<std::vector<nat>>(), j.value("lag", nat{0})};
    b.validate();
    return b;
}

inline json column_base_to_json(const ColumnBase& b) { return {{"b", b.b}, {"lag", b.lag}}; }

inline AvoidSet avoid_set_from(const json& j) {
    AvoidSet h;
    auto kind = j.at("kind").get<std::string>();
    if (kind == "multiples") {
        h.kind = AvoidSet::Kind::multiples;
        h.k = j.at("k").get<nat>();
        if (h.k == 0) throw FixtureError("multiples of 0 do not form an infinite set");
    } else if (kind == "progression") {
        h.kind = AvoidSet::Kind::progression;
        h.start = j.at("start").get<nat>();
        h.step = j.at("step").get<nat>();
        if (h.step == 0) throw FixtureError("progression step must be positive");
    } else if (kind == "list") {
        h.kind = AvoidSet::Kind::list;
        h.items = j.at("items").get<std::vector<nat>>();
        std::sort(h.items.begin(), h.items.end());
    } else {
        throw FixtureError("unknown avoid-set kind '" + kind + "'");
    }
    return h;
}

inline json avoid_set_to_json(const AvoidSet& h) {
    switch (h.kind) {
        case AvoidSet::Kind::multiples: return {{"kind", "multiples"}, {"k", h.k}};
        case AvoidSet::Kind::progression: return {{"kind", "progression"}, {"start", h.start}, {"step", h.step}};
        case AvoidSet::Kind::list: return {{"kind", "list"}, {"items", h.items}};
    }
    return {};
}

}  // namespace selfenc
