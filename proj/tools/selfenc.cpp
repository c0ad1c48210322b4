// Command-line front end: run a construction, audit a trace, check the pruning loop against
// the brute-force oracle, or build a generic filter.

#include <CLI11.hpp>
#include <iostream>

#include <selfenc/harness.hpp>
#include <selfenc/oracle.hpp>

using namespace selfenc;

namespace {

int report(const json& j, bool ok) {
    std::cout << j.dump(1) << "\n";
    return ok ? 0 : 1;
}

int cmd_run(const std::string& id, nat stages, const std::string& fixtures, const std::string& trace_path) {
    auto out = run_construction(id, load_json(fixtures), stages);
    if (!trace_path.empty()) out.trace.write(trace_path);
    if (out.f) {
        auto reg = verify_regression(*out.f, out.prefix);
        out.summary["regression"] = reg.pass;
    }
    return report(out.summary, true);
}

int cmd_verify(const std::string& trace_path, const std::string& fixtures, const std::string& suite) {
    auto tr = Trace::read(trace_path);
    json j{{"construction", tr.construction}, {"suites", json::object()}};
    bool ok = true;
    if (suite == "injury" || suite == "all") {
        auto rep = verify_finite_injury(tr);
        ok = ok && rep.ok();
        j["suites"]["injury"] = rep.to_json();
    }
    if (suite == "regression" || suite == "replay" || suite == "all") {
        nat stages = trace_stages(tr);
        if (stages == 0) throw std::invalid_argument("trace has no stages to rerun");
        auto rerun = run_construction(tr.construction, load_json(fixtures), stages);
        if (suite != "replay") {
            if (rerun.f) {
                auto r = verify_regression(*rerun.f, rerun.prefix);
                json rj{{"pass", r.pass}};
                if (r.index) rj["index"] = *r.index;
                if (!r.message.empty()) rj["message"] = r.message;
                ok = ok && r.pass;
                j["suites"]["regression"] = rj;
            } else {
                j["suites"]["regression"] = {{"pass", true}, {"warning", "construction has no regressing function"}};
            }
        }
        if (suite != "regression") {
            auto c = verify_replay(tr, rerun.trace);
            json cj{{"pass", c.pass}};
            if (c.offset) cj["offset"] = *c.offset;
            if (!c.message.empty()) cj["message"] = c.message;
            ok = ok && c.pass;
            j["suites"]["replay"] = cj;
        }
    }
    j["ok"] = ok;
    return report(j, ok);
}

int cmd_prune(const std::string& tree_path, const std::string& ops_path, const std::string& target_path) {
    auto t = tree_from(load_json(tree_path));
    auto ops = operators_from(load_json(ops_path));
    auto A = target_from(load_json(target_path));
    json j;
    std::optional<PruneResult> got;
    std::optional<OracleResult> want;
    try {
        got = prune_to_uniform(t.tree, t.depth, ops, A);
    } catch (const PremiseError& e) {
        j["prune"] = {{"premise_violation", e.what()}};
    }
    try {
        want = brute_force_prune_oracle(t.tree, t.depth, ops, A.members, A.universe);
    } catch (const PremiseError& e) {
        j["oracle"] = {{"premise_violation", e.what()}};
    }
    if (got) j["prune"] = {{"index", got->index}, {"branches", branches(got->tree, t.depth)}};
    if (want) j["oracle"] = {{"index", want->index}, {"branches", want->branches}};
    bool agree = got && want ? got->index == want->index && branches(got->tree, t.depth) == want->branches
                             : !got && !want;
    j["agree"] = agree;
    return report(j, agree);
}

int cmd_force(const std::string& variant, nat steps, const std::string& deciders_path, nat bound) {
    auto v = variant_from(variant);
    auto b = deciders_path.empty() ? DeciderBundle{} : deciders_from(load_json(deciders_path));
    auto run = generic_build(v, b.deciders, steps, bound, b.f);
    bool met = std::all_of(run.met.begin(), run.met.end(), [](nat m) { return m != ~nat{0}; });
    json j{{"variant", variant},
           {"steps", steps},
           {"final", condition_to_json(run.filter.back())},
           {"conditions", run.filter.size()},
           {"met", run.met},
           {"all_met", met}};
    return report(j, met);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"selfenc: priority constructions, trees, majorizer decoders and forcing posets"};
    app.require_subcommand(1);

    std::string construction, fixtures, trace_path, suite = "all";
    nat stages = 5000;
    auto* run = app.add_subcommand("run", "run a construction and write its trace");
    run->add_option("--construction", construction, "construction id")->required();
    run->add_option("--stages", stages, "stage budget");
    run->add_option("--fixtures", fixtures, "fixture bundle (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--trace", trace_path, "trace output (JSONL)");

    auto* verify = app.add_subcommand("verify", "audit a trace");
    verify->add_option("--trace", trace_path, "trace (JSONL)")->required()->check(CLI::ExistingFile);
    verify->add_option("--fixtures", fixtures, "fixture bundle the trace was produced from")->check(CLI::ExistingFile);
    verify->add_option("--suite", suite, "injury, regression, replay or all")
        ->check(CLI::IsMember({"injury", "regression", "replay", "all"}));

    std::string tree_path, ops_path, target_path;
    auto* oracle = app.add_subcommand("oracle", "brute-force oracles");
    oracle->require_subcommand(1);
    auto* prune = oracle->add_subcommand("prune", "compare the pruning loop with the branch-by-branch oracle");
    prune->add_option("--tree", tree_path)->required()->check(CLI::ExistingFile);
    prune->add_option("--ops", ops_path)->required()->check(CLI::ExistingFile);
    prune->add_option("--target", target_path)->required()->check(CLI::ExistingFile);

    std::string variant, deciders_path;
    nat steps = 20, bound = nat{1} << 24;
    auto* force = app.add_subcommand("force", "build a generic filter");
    force->add_option("--variant", variant)->required()->check(CLI::IsMember({"pair", "triple", "subtriple", "hechler"}));
    force->add_option("--steps", steps);
    force->add_option("--deciders", deciders_path)->check(CLI::ExistingFile);
    force->add_option("--bound", bound, "search bound for fresh cell members");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(construction, stages, fixtures, trace_path);
        if (*verify) {
            if (suite != "injury" && fixtures.empty()) throw std::invalid_argument("--fixtures is needed to rerun");
            return cmd_verify(trace_path, fixtures, suite);
        }
        if (*prune) return cmd_prune(tree_path, ops_path, target_path);
        if (*force) {
            if (steps == 0) throw std::invalid_argument("step budget must be at least 1");
            return cmd_force(variant, steps, deciders_path, bound);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
