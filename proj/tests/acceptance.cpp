// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <iostream>
#include <random>

#include <selfenc/column_construction.hpp>
#include <selfenc/harness.hpp>
#include <selfenc/majorization.hpp>
#include <selfenc/oracle.hpp>

#include "oracles.hpp"

using namespace selfenc;

namespace {

const std::string fixtures = SELFENC_FIXTURES;

json bundle(const std::string& name) { return load_json(fixtures + "/" + name); }

struct Outcome {
    bool pass = true;
    std::string note;

    // Keeps the first failure message.
    void require(bool ok, const std::string& why) {
        if (!ok && pass) note = why;
        pass = pass && ok;
    }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string str(nat x) { return std::to_string(x); }

// Output of a closed-form set functional read straight from its fixture JSON, once the oracle
// holds enough elements.
std::optional<nat> functional_output(const json& fn, const NatSet& X, nat n) {
    auto& r = fn.at("rule");
    if (X.size() < r.at("size").get<nat>()) return std::nullopt;
    auto kind = r.at("kind").get<std::string>();
    nat c = r.value("c", nat{0});
    if (kind == "constant") return c;
    if (kind == "parity") return n % 2;
    if (kind == "threshold") return n > c ? 1 : 0;
    throw std::runtime_error("unknown functional kind " + kind);
}

// Domain membership of a registry program read from its fixture JSON.
bool in_domain(const json& reg, nat e, nat x) {
    auto& progs = reg.at("programs");
    auto& p = progs.at(e % progs.size());
    for (auto& en : p.value("entries", json::array()))
        if (en.at(0).get<nat>() == x) return true;
    if (!p.contains("rule")) return false;
    nat m = p["rule"].value("modulus", nat{1}), r = p["rule"].value("residue", nat{0});
    return x % m == r;
}

bool total_in_fixture(const json& reg, nat e) {
    auto& p = reg.at("programs").at(e % reg.at("programs").size());
    return p.contains("rule") && p["rule"].value("modulus", nat{1}) == 1;
}

nat program_count(const json& reg) { return reg.at("programs").size(); }

// ---- 1 ---------------------------------------------------------------------------------

Outcome coimmune_retraceable() {
    Outcome o;
    auto rj = bundle("coimmune_retraceable.json").at("registry");
    auto t0 = Clock::now();
    CoimmuneRetraceable c(registry_from(rj));
    Trace tr{"coimmune-retraceable", {}};
    run_stages(c, tr, 2500);
    auto half = c.path();
    run_stages(c, tr, 5000);
    auto prefix = c.path();
    double took = seconds_since(t0);
    o.require(took < 5, "took " + std::to_string(took) + " s");
    o.require(half == prefix, "prefix at 2500 differs from prefix at 5000");
    o.require(verify_regression(c.f(), prefix).pass, "regression fails on the stabilized prefix");

    NatSet A(prefix.begin(), prefix.end());
    nat top = *A.rbegin();
    std::map<std::string, const TraceEvent*> last_act;
    for (auto& e : tr.events)
        if (e.kind == EventKind::acts) last_act[e.req] = &e;

    NatSet p_slots, q_slots;
    nat checked = 0;
    for (nat e = 0; e < c.requirement_count() && c.witness(e) <= top; ++e) {
        ++checked;
        if (total_in_fixture(rj, e)) {
            nat w = c.witness(e);
            auto it = last_act.find("P" + str(e));
            o.require(c.p_satisfied(e) && it != last_act.end() && it->second->value == w,
                      "P" + str(e) + " did not end diagonalized on its witness");
            auto pos = std::find(prefix.begin(), prefix.end(), w);
            o.require(pos != prefix.end() && pos != prefix.begin(), "witness of P" + str(e) + " is off the path");
            if (pos != prefix.end() && pos != prefix.begin()) {
                // The fixture program, evaluated by hand, must not name the predecessor.
                auto& rule = rj["programs"][e % program_count(rj)]["rule"];
                auto r = rule_from(rule);
                o.require(r.apply(w) != *std::prev(pos), "phi_" + str(e) + " retraces the path at " + str(w));
            }
            p_slots.insert(e % program_count(rj));
        }
        auto x = c.q_witness(e);
        o.require(c.q_satisfied(e) && x && A.count(*x) && in_domain(rj, e, *x),
                  "Q" + str(e) + " has no witness in A and W_" + str(e));
        q_slots.insert(e % program_count(rj));
    }
    o.require(p_slots.size() == 4 && q_slots.size() == program_count(rj),
              "only " + str(checked) + " requirements fall under the prefix, missing some fixture programs");
    if (o.pass)
        o.note = str(prefix.size()) + " elements, " + str(checked) + " P/Q pairs audited, " +
                 std::to_string(took).substr(0, 4) + " s";
    return o;
}

// ---- 2 and 8 ---------------------------------------------------------------------------

RegressiveRun regressive_run() {
    return construct_regressive_not_ce(registry_from(bundle("regressive_not_ce.json").at("registry")), 5000);
}

Outcome regressive_not_ce(const RegressiveRun& run) {
    Outcome o;
    auto rj = bundle("regressive_not_ce.json").at("registry");
    auto& A = run.A_prefix;
    NatSet As(A.begin(), A.end());
    nat evens = std::count_if(A.begin(), A.end(), [](nat x) { return x % 2 == 0; });
    o.require(evens >= 20, "only " + str(evens) + " evens in the stabilized prefix");
    nat top = *As.rbegin();
    for (nat e = 0; e < program_count(rj); ++e) {
        bool differs = false;
        for (nat x = 0; x <= top && !differs; ++x) differs = As.count(x) != in_domain(rj, e, x);
        o.require(differs, "prefix agrees with W_" + str(e) + " up to " + str(top));
    }
    nat splices = 0;
    auto& ev = run.trace.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != EventKind::acts || ev[i].detail != "splice") continue;
        ++splices;
        nat w = *ev[i].value;
        std::size_t j = i + 1;
        while (j < ev.size() && ev[j].kind != EventKind::enumerated) ++j;
        o.require(j < ev.size() && ev[j].value == w - 1, "splice at " + str(w) + " does not insert " + str(w - 1));
        o.require(run.f.value(w - 1) == w, "f(" + str(w - 1) + ") is not " + str(w));
    }
    o.require(splices > 0, "no splice happened");
    auto rep = verify_finite_injury(run.trace);
    o.require(rep.ok(), "finite-injury audit fails");
    o.require(verify_regression(run.f, A).pass, "regression fails on the stabilized prefix");
    if (o.pass) o.note = str(A.size()) + " elements, " + str(evens) + " evens, " + str(splices) + " splices";
    return o;
}

Outcome uniform_introreduction(const RegressiveRun& run) {
    Outcome o;
    NatSet A(run.A_final.begin(), run.A_final.end());
    nat top = *std::max_element(run.A_prefix.begin(), run.A_prefix.end());
    std::vector<nat> above;
    for (nat x : A)
        if (x > top) above.push_back(x);
    o.require(above.size() >= 2, "the final set has fewer than two elements above the prefix");
    if (!o.pass) return o;
    std::mt19937_64 rng(8);
    nat checks = 0;
    for (int sample = 0; sample < 100; ++sample) {
        // A random finite piece of A holding at least two elements above every n tested.
        NatSet C;
        for (nat x : A)
            if (rng() % 4 == 0) C.insert(x);
        std::shuffle(above.begin(), above.end(), rng);
        C.insert(above[0]);
        C.insert(above[1]);
        for (nat n = 0; n <= top; ++n) {
            auto got = uniform_introreduce(run.f, C, n);
            auto want = A.count(n) ? Membership::in : Membership::out;
            ++checks;
            o.require(got == want, "sample " + std::to_string(sample) + " misjudges " + str(n));
        }
    }
    o.require(uniform_introreduce(run.f, {top}, top) == Membership::insufficient, "C = {n} is not insufficient");
    if (o.pass) o.note = str(checks) + " (C, n) pairs, n <= " + str(top);
    return o;
}

// ---- 3 ---------------------------------------------------------------------------------

Outcome coimmune_regressive() {
    Outcome o;
    auto b = bundle("coimmune_regressive.json");
    auto& rj = b.at("registry");
    auto& fns = b.at("functionals");
    CoimmuneRegressive c(registry_from(rj), functionals_from(fns));
    auto run = construct_coimmune_regressive_not_introred(registry_from(rj), functionals_from(fns), 5000, &c);
    NatSet B(run.B_final.begin(), run.B_final.end());

    std::map<std::string, const TraceEvent*> last_act;
    for (auto& e : run.trace.events)
        if (e.kind == EventKind::acts) last_act[e.req] = &e;
    NatSet covered;
    nat audited = 0;
    for (nat e = 1; c.nhat_witness(e) || c.nhat_satisfied(e); ++e) {
        if (!c.nhat_satisfied(e)) continue;
        auto it = last_act.find("Nhat" + str(e));
        o.require(it != last_act.end(), "Nhat" + str(e) + " satisfied without acting");
        if (it == last_act.end()) continue;
        auto& d = it->second->detail;
        nat n = *it->second->value;
        auto semi = d.find(';');
        nat v = std::stoull(d.substr(0, semi));
        NatSet F;
        std::stringstream rest(d.substr(semi + 1));
        for (std::string tok; std::getline(rest, tok, ',');) F.insert(std::stoull(tok));
        auto& fn = fns.at(e % fns.size());
        o.require(c.nhat_witness(e) == n, "Nhat" + str(e) + " acted on a stale witness");
        o.require(functional_output(fn, F, n) == v, "Phi_" + str(e) + " on its use does not give " + str(v));
        o.require(!F.empty() && *F.begin() > n, "use of Nhat" + str(e) + " is not above its witness");
        o.require(std::includes(B.begin(), B.end(), F.begin(), F.end()), "use of Nhat" + str(e) + " left B");
        o.require((B.count(n) == 1) == (v == 0), "B(" + str(n) + ") agrees with Phi_" + str(e));
        covered.insert(e % fns.size());
        ++audited;
    }
    o.require(covered.size() == fns.size(), "some functional has no acted Nhat requirement");
    for (nat i = 0; i < program_count(rj); ++i) {
        bool meets = std::any_of(run.B_prefix.begin(), run.B_prefix.end(), [&](nat x) { return in_domain(rj, i, x); });
        o.require(meets, "W_" + str(i) + " misses the stabilized prefix");
    }
    auto rep = verify_finite_injury(run.trace);
    o.require(rep.at("restraint-soundness").pass, "restraint violated: " + rep.at("restraint-soundness").message);
    o.require(rep.ok(), "finite-injury audit fails");
    if (o.pass) o.note = str(run.B_prefix.size()) + " elements, " + str(audited) + " Nhat acts audited";
    return o;
}

// ---- 4 ---------------------------------------------------------------------------------

Outcome column() {
    Outcome o;
    auto b = bundle("column.json");
    auto base = column_base_from(b.at("column_base"));
    ColumnConstruction c(base, operators_from(b.at("operators")), functionals_from(b.at("functionals")));
    auto run = construct_introenum_not_unif(base, operators_from(b.at("operators")),
                                            functionals_from(b.at("functionals")), 200, &c);
    auto audit = oracle::audit_columns(run.trace, base);
    o.require(audit.shape, "condition (1): " + audit.message);
    o.require(audit.columns, "condition (2): " + audit.message);

    auto& bs = b.at("column_base").at("b");
    std::set<nat> Bset;
    for (auto& x : bs) Bset.insert(x.get<nat>());
    nat acted_p = 0, twice = 0;
    for (auto& [e, pn] : audit.p) {
        nat n = pn.first;
        if (n == 0 && pn.second.empty()) continue;
        ++acted_p;
        o.require(!Bset.count(n) && n < *Bset.rbegin(), "P" + str(e) + " output " + str(n) + " is not in W");
        NatSet col;
        for (nat x : audit.A)
            if (cantor_unpair(x).first == e) col.insert(x);
        bool hit = false;
        for (auto& ax : b.at("operators").at(e).at("axioms")) {
            if (ax.at("n").get<nat>() != n) continue;
            bool inside = true;
            for (auto& p : ax.at("set")) inside = inside && col.count(p.get<nat>());
            hit = hit || inside;
        }
        o.require(hit, "P" + str(e) + ": " + str(n) + " is not in Gamma_" + str(e) + " of column " + str(e));
    }
    NatSet S(run.S_prefix.begin(), run.S_prefix.end());
    auto& fns = b.at("functionals");
    for (auto& [e, k] : audit.n_acts) {
        if (k < 2) continue;
        ++twice;
        nat w = audit.witness.at(e);
        auto v = functional_output(fns.at(e % fns.size()), S, w);
        o.require(v.has_value(), "Phi_" + str(e) + " diverges on the witness of N" + str(e));
        if (v) o.require((*v == 0) == (audit.A.count(w) == 1), "N" + str(e) + " agrees with Phi_" + str(e));
    }
    o.require(acted_p > 0 && twice > 0, "no P acted or no N acted twice; the run shows nothing");
    o.require(verify_finite_injury(run.trace).ok(), "finite-injury audit fails");
    if (o.pass) o.note = str(acted_p) + " P acts, " + str(twice) + " N acted twice, " + str(audit.A.size()) + " codes";
    return o;
}

// ---- 5 ---------------------------------------------------------------------------------

Outcome prune_grid() {
    Outcome o;
    auto grid = bundle("prune_grid.json");
    auto t0 = Clock::now();
    nat premise = 0, agreed = 0;
    for (auto& inst : grid) {
        auto t = tree_from(inst.at("tree"));
        auto ops = operators_from(inst.at("ops"));
        auto A = target_from(inst.at("target"));
        auto name = inst.at("name").get<std::string>();
        o.require(t.depth <= 12 && ops.size() <= 4, name + " is outside the grid bounds");
        std::optional<PruneResult> got;
        std::optional<OracleResult> want;
        try {
            got = prune_to_uniform(t.tree, t.depth, ops, A);
        } catch (const PremiseError&) {}
        try {
            want = brute_force_prune_oracle(t.tree, t.depth, ops, A.members, A.universe);
        } catch (const PremiseError&) {}
        bool same = got && want ? got->index == want->index && branches(got->tree, t.depth) == want->branches
                                : !got && !want;
        o.require(same, name + " disagrees with the oracle");
        if (!got && !want) ++premise;
        agreed += same;
        if (name == "case1-then-case3") o.require(got && got->index == 1, "two-operator example is not index 1");
    }
    double took = seconds_since(t0);
    o.require(grid.size() >= 50, "grid has only " + str(grid.size()) + " instances");
    o.require(premise > 0, "no premise-violation instance in the grid");
    o.require(took < 10, "took " + std::to_string(took) + " s");
    if (o.pass)
        o.note = str(agreed) + "/" + str(grid.size()) + " agree, " + str(premise) + " premise cases, " +
                 std::to_string(took).substr(0, 4) + " s";
    return o;
}

// ---- 6 ---------------------------------------------------------------------------------

constexpr nat cell_bound = nat{1} << 20;

nat cell_product(const NatSet& E, bool y) {
    nat p = 1;
    for (nat m : E) {
        nat q = oracle::prime(2 * m + y);
        if (p > cell_bound / q) return cell_bound + 1;
        p *= q;
    }
    return p;
}

// Drops members until every zero position n has no member in the class n.
void clean_up(std::vector<nat>& s, std::vector<nat>* t) {
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<nat> mask = t ? oracle::bit_union(s, *t) : s;
        for (nat x = 0; x < s.size(); ++x)
            for (nat n = 0; n < mask.size(); ++n)
                if (s[x] == 1 && mask[n] == 0 && oracle::in_X(n, x)) s[x] = 0, changed = true;
        if (t)
            for (nat x = 0; x < t->size(); ++x)
                for (nat n = 0; n < mask.size(); ++n)
                    if ((*t)[x] == 1 && mask[n] == 0 && oracle::in_Y(n, x)) (*t)[x] = 0, changed = true;
    }
}

std::vector<nat> sparse_string(std::mt19937_64& rng, nat len, nat ones) {
    std::vector<nat> s(len, 0);
    for (nat i = 0; i < ones; ++i) s[rng() % len] = 1;
    return s;
}

Condition random_condition(Variant v, std::mt19937_64& rng, const Ambient& f) {
    for (;;) {
        Condition c{v, {}, {}, 0, {}};
        if (v == Variant::hechler) {
            nat glen = rng() % 9, slen = rng() % 9;
            for (nat n = 0; n < glen; ++n) c.g.push_back(f(n) + rng() % 5);
            for (nat n = 0; n < slen; ++n) c.sigma.push_back((n < glen ? c.g[n] : f(n)) + rng() % 5);
            return c;
        }
        c.sigma = sparse_string(rng, 1 + rng() % 16, rng() % 4);
        if (v == Variant::triple) {
            c.tau = sparse_string(rng, 1 + rng() % 16, rng() % 3);
            clean_up(c.sigma, &c.tau);
        } else {
            clean_up(c.sigma, nullptr);
        }
        if (v == Variant::subtriple) {
            c.tau.assign(rng() % (c.sigma.size() + 3), 0);
            for (nat i = 0; i < c.tau.size() && i < c.sigma.size(); ++i) c.tau[i] = c.sigma[i] && rng() % 2;
        }
        nat lim = v == Variant::triple ? std::min(c.sigma.size(), c.tau.size()) : c.sigma.size();
        c.k = rng() % lim;
        auto E = cell_index(c);
        if (cell_product(E, false) > cell_bound / 64 || cell_product(E, true) > cell_bound / 64) continue;
        return c;
    }
}

// A random extension built from moves that keep a condition below p.
Condition random_extension(const Condition& p, std::mt19937_64& rng, const Ambient& f) {
    Condition q = p;
    for (int moves = 1 + rng() % 3; moves > 0; --moves) {
        Condition r = q;
        switch (rng() % 4) {
            case 0:
                if (cell_product(cell_index(q), false) <= cell_bound / 64 &&
                    cell_product(cell_index(q), true) <= cell_bound / 64)
                    r = nontrivial_extension(q, cell_bound, f);
                break;
            case 1: r = padding_extension(q, f); break;
            case 2:
                if (q.variant == Variant::hechler) {
                    nat n = q.sigma.size() + rng() % 4;
                    while (r.g.size() <= n) r.g.push_back(f(r.g.size()));
                    r.g[n] += rng() % 10;
                } else {
                    ++r.k;
                }
                break;
            default:
                if (q.variant == Variant::subtriple)
                    for (nat i = r.tau.size(); i < r.sigma.size(); ++i) r.tau.push_back(r.sigma[i] && rng() % 2);
                else if (q.variant == Variant::hechler)
                    r.sigma.push_back((r.sigma.size() < r.g.size() ? r.g[r.sigma.size()] : f(r.sigma.size())) +
                                      rng() % 3);
                break;
        }
        if (oracle::valid(r, f) && oracle::extends(r, q, f)) q = std::move(r);
    }
    return q;
}

Outcome forcing() {
    Outcome o;
    auto t0 = Clock::now();
    std::mt19937_64 rng(6);
    nat samples = 0, strict = 0, combined = 0, built = 0;
    for (auto v : {Variant::pair, Variant::triple, Variant::subtriple, Variant::hechler}) {
        auto name = to_string(v);
        auto bundle_j = bundle("deciders/" + name + ".json");
        auto deciders = deciders_from(bundle_j);
        const Ambient& f = deciders.f;
        for (int i = 0; i < 10000; ++i, ++samples) {
            auto p = random_condition(v, rng, f);
            o.require(oracle::valid(p, f) && is_condition(p, f), name + ": sample is not a condition");
            o.require(extends(p, p, f) && oracle::extends(p, p, f), name + ": extends is not reflexive");
            auto q = random_extension(p, rng, f);
            auto r = random_extension(q, rng, f);
            o.require(extends(q, p, f) == oracle::extends(q, p, f) && extends(p, q, f) == oracle::extends(p, q, f),
                      name + ": extends disagrees with the reference");
            o.require(extends(q, p, f) && extends(r, q, f) && extends(r, p, f), name + ": extends is not transitive");
            auto other = random_condition(v, rng, f);
            o.require(extends(other, p, f) == oracle::extends(other, p, f),
                      name + ": extends disagrees with the reference on unrelated conditions");

            Condition n1;
            try {
                n1 = nontrivial_extension(p, cell_bound, f);
            } catch (const BoundTooSmall& e) {
                o.require(false, name + ": nontrivial extension failed: " + e.what());
                continue;
            }
            bool ok = n1 != p && oracle::valid(n1, f) && oracle::extends(n1, p, f) && !oracle::extends(p, n1, f);
            if (v != Variant::hechler) ok = ok && oracle::members(n1.sigma) != oracle::members(p.sigma);
            o.require(ok, name + ": nontrivial extension is not a valid strict extension");
            strict += ok;

            if (v == Variant::subtriple) {
                auto q2 = random_extension(p, rng, f), r2 = random_extension(p, rng, f);
                auto star = combine_conditions(q2, r2, p);
                auto ss = oracle::members(star.sigma), qs = oracle::members(q2.sigma), rs = oracle::members(r2.sigma);
                bool good = oracle::valid(star, f) && oracle::extends(star, p, f) && star.tau == r2.tau &&
                            std::includes(ss.begin(), ss.end(), qs.begin(), qs.end()) &&
                            std::includes(ss.begin(), ss.end(), rs.begin(), rs.end());
                o.require(good, "subtriple: combined condition is not valid below p");
                combined += good;
            }
        }

        // Generic filters against the shipped deciders.
        auto run = generic_build(v, deciders.deciders, 20, nat{1} << 24, f);
        ++built;
        bool met = std::all_of(run.met.begin(), run.met.end(), [](nat m) { return m != ~nat{0}; });
        o.require(met, name + ": some decider was never consulted");
        for (std::size_t i = 0; i < run.filter.size(); ++i) {
            o.require(oracle::valid(run.filter[i], f), name + ": filter holds a non-condition");
            if (i) o.require(oracle::extends(run.filter[i], run.filter[i - 1], f), name + ": filter is not a chain");
        }
        auto& last = run.filter.back();
        for (auto& d : deciders.spec) {
            auto kind = d.at("kind").get<std::string>();
            if (kind == "exclude") {
                nat m = d.at("m").get<nat>();
                o.require(!oracle::at(run.G0, m) && !oracle::at(run.G1, m), name + ": excluded " + str(m) + " entered G");
            } else if (kind == "raise") {
                nat n = d.at("n").get<nat>(), val = d.at("value").get<nat>();
                nat got = n < run.G0.size() ? run.G0[n] : n < last.g.size() ? last.g[n] : f(n);
                o.require(got >= val, name + ": g(" + str(n) + ") was not raised to " + str(val));
            } else if (kind == "copy-tail") {
                o.require(oracle::is_prefix(run.G1, run.G0) || run.G1.size() <= run.G0.size(),
                          name + ": tau runs past sigma");
                for (nat x : oracle::members(run.G1))
                    o.require(oracle::at(run.G0, x), name + ": tau is not inside sigma");
            }
        }
        if (v == Variant::hechler) continue;
        // Theta_0 of each sigma stays inside E_p, and covers E_q for every earlier cell step.
        std::vector<NatSet> stepped;
        for (std::size_t i = 0; i < run.filter.size(); ++i) {
            auto& p = run.filter[i];
            auto th = oracle::theta0(oracle::members(p.sigma), p.sigma.size());
            auto E = cell_index(p);
            o.require(std::includes(E.begin(), E.end(), th.begin(), th.end()),
                      name + ": Theta_0 leaves E_p at filter position " + str(i));
            for (auto& Eq : stepped)
                o.require(std::includes(th.begin(), th.end(), Eq.begin(), Eq.end()),
                          name + ": Theta_0 misses an earlier cell index at position " + str(i));
            if (i + 1 < run.filter.size()) {
                auto now = oracle::members(p.sigma), next = oracle::members(run.filter[i + 1].sigma);
                if (now != next) stepped.push_back(E);
            }
        }
        o.require(!stepped.empty(), name + ": the filter took no cell step");
    }
    double took = seconds_since(t0);
    o.require(took < 10, "took " + std::to_string(took) + " s");
    if (o.pass)
        o.note = str(samples) + " samples, " + str(strict) + " strict extensions, " + str(combined) +
                 " combinations, " + str(built) + " filters, " + std::to_string(took).substr(0, 4) + " s";
    return o;
}

// ---- 7 ---------------------------------------------------------------------------------

Outcome majorizers() {
    Outcome o;
    auto fx = bundle("majorization.json");
    std::mt19937_64 rng(7);
    nat decoded = 0;
    for (auto& m : fx) {
        auto name = m.at("name").get<std::string>();
        bool regressive = m.at("regressive").get<bool>();
        nat depth = m.at("depth").get<nat>(), bound = m.at("bound").get<nat>(), count = m.at("decode").get<nat>();
        auto A = m.at("sequence").get<std::vector<nat>>();
        auto fv = m.at("f").get<std::vector<nat>>();
        PartialFnTable f;
        for (nat y = 0; y < fv.size(); ++y) f.define(y, fv[y], 1);
        auto pA = A;
        std::sort(pA.begin(), pA.end());
        std::vector<nat> want(A.begin(), A.begin() + count);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<nat> G(count + depth + 1), H(count + depth + 1);
            for (nat i = 0; i < G.size(); ++i) {
                G[i] = std::min(bound, pA.at(i) + rng() % 12);
                H[i] = std::min(bound, G[i] + rng() % 12);
            }
            try {
                auto got = MajorizerDecoder(f, G, depth, regressive).decode(A[0], count);
                auto larger = MajorizerDecoder(f, H, depth, regressive).decode(A[0], count);
                o.require(got == want, name + ": decoded sequence differs from the fixture");
                o.require(larger == got, name + ": a larger majorizer changes the output");
                decoded += got == want && larger == got;
            } catch (const FixtureError& e) {
                o.require(false, name + ": " + e.what());
            }
        }
    }
    if (o.pass) o.note = str(decoded) + " decodes across " + str(fx.size()) + " fixtures";
    return o;
}

// ---- 9 ---------------------------------------------------------------------------------

Outcome determinism() {
    Outcome o;
    const std::vector<std::tuple<std::string, std::string, nat>> runs{
        {"coimmune-retraceable", "coimmune_retraceable.json", 5000},
        {"total-regressor", "total_regressor.json", 5000},
        {"regressive-not-ce", "regressive_not_ce.json", 5000},
        {"coimmune-regressive", "coimmune_regressive.json", 5000},
        {"column", "column.json", 200},
        {"retraceable-avoiding", "retraceable_avoiding.json", 6},
    };
    for (auto& [id, file, stages] : runs) {
        auto b = bundle(file);
        auto first = run_construction(id, b, stages).trace.jsonl();
        auto second = run_construction(id, b, stages).trace.jsonl();
        o.require(first == second, id + ": traces differ between runs");
        o.require(first.size() > 100, id + ": trace is empty");
    }
    if (o.pass) o.note = str(runs.size()) + " constructions";
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    auto line = [&](int k, const char* what, const std::function<Outcome()>& fn) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << k << " " << what << ": " << o.note << " ("
                  << std::to_string(seconds_since(t0)).substr(0, 4) << " s)" << std::endl;
    };
    line(1, "co-immune retraceable run", coimmune_retraceable);
    std::optional<RegressiveRun> reg;
    line(2, "regressive not c.e. run", [&] {
        reg = regressive_run();
        return regressive_not_ce(*reg);
    });
    line(3, "co-immune regressive run", coimmune_regressive);
    line(4, "column construction", column);
    line(5, "pruning oracle equivalence", prune_grid);
    line(6, "forcing suite", forcing);
    line(7, "majorizer decoders", majorizers);
    line(8, "uniform introreduction", [&] {
        if (!reg) return Outcome{false, "criterion 2 produced no run"};
        return uniform_introreduction(*reg);
    });
    line(9, "determinism", determinism);
    return failures == 0 ? 0 : 1;
}
