// ptfc: drive the refinement engine and its checkers from the command line.
//
// Subcommands: refine, verify, sequence, filter, eval, perm.
// Exit codes: 0 pass, 1 verified-false, 2 input error, 3 resource/budget.

#include <CLI11.hpp>
#include <iostream>
#include <set>

#include "ptf/errors.hpp"
#include "ptf/json_io.hpp"

using namespace ptf;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    std::uint32_t depth = 8;
    std::uint32_t kmax = 4;
    std::uint32_t index_bound = 8;
    std::uint32_t split_budget = 3;
    std::uint64_t budget = 1000000;
    std::vector<std::string> ablate;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "deterministic seed");
    cmd->add_option("--depth", o.depth, "exactness / verification depth");
    cmd->add_option("--kmax", o.kmax, "budgeted fusion generators per index");
    cmd->add_option("--index-bound", o.index_bound, "indices live below this bound");
    cmd->add_option("--split-budget", o.split_budget, "splitting tasks up to this length");
    cmd->add_option("--budget", o.budget, "search node budget");
    cmd->add_option("--ablate", o.ablate, "disable a task family");
    cmd->add_option("--out", o.out_dir, "output directory");
}

RunConfig make_config(const CommonOpts& o) {
    RunConfig cfg;
    cfg.seed = o.seed;
    cfg.depth = o.depth;
    cfg.kmax = o.kmax;
    cfg.index_bound = o.index_bound;
    cfg.split_budget = o.split_budget;
    cfg.search_budget = o.budget;
    for (const auto& f : o.ablate) apply_ablation(cfg, f);
    return cfg;
}

Json with_schema(const char* schema, Json j) {
    j["schema"] = schema;
    return j;
}

struct Pools {
    std::vector<RealName> names;
    std::vector<MultitreeSetPtr> dense;
    std::vector<AvoidRequest> avoid;
};

Pools load_pools(const std::string& names_file, const std::string& dense_file,
                 const std::string& avoid_file, const Multiforcing& ambient,
                 const RunConfig& cfg) {
    Pools p;
    if (!names_file.empty())
        for (const auto& j : load_json_file(names_file)) p.names.push_back(name_from_json(j));
    if (!dense_file.empty())
        for (const auto& j : load_json_file(dense_file))
            p.dense.push_back(dense_set_from_json(j, ambient, cfg));
    if (!avoid_file.empty())
        for (const auto& j : load_json_file(avoid_file))
            p.avoid.push_back({name_from_json(j.at("name")), j.at("xi").get<Index>()});
    return p;
}

std::map<Index, std::vector<std::vector<Tree>>> generator_pool(const Multiforcing& pi) {
    std::map<Index, std::vector<std::vector<Tree>>> pool;
    for (const auto& [xi, P] : pi.comp) pool[xi].push_back(P.generators);
    return pool;
}

int cmd_refine(const CommonOpts& o, const std::string& input, const std::string& names_file,
               const std::string& dense_file, const std::string& avoid_file) {
    RunConfig cfg = make_config(o);
    Multiforcing pi = multiforcing_from_json(load_json_file(input));
    if (!pi.clopen_generated()) {
        std::cerr << "input components must be clopen-generated\n";
        return 2;
    }
    Pools pools = load_pools(names_file, dense_file, avoid_file, pi, cfg);
    TaskList tasks = mandatory_tasks(pi, pools.names, pools.dense, pools.avoid,
                                     generator_pool(pi), cfg);
    auto [rho, trace] = generic_refine(pi, tasks, cfg);
    save_json_file(o.out_dir + "/rho.json", with_schema("multiforcing", to_json(rho)));
    save_json_file(o.out_dir + "/trace.json", to_json(trace));
    std::cout << "refined " << pi.comp.size() << " components at depth " << cfg.depth << "\n";
    return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& pi_file, const std::string& rho_file,
               const std::string& trace_file, const std::string& names_file,
               const std::string& dense_file, const std::string& avoid_file,
               const std::string& chain_file) {
    RunConfig cfg = make_config(o);
    Multiforcing pi = multiforcing_from_json(load_json_file(pi_file));
    Multiforcing rho = multiforcing_from_json(load_json_file(rho_file));
    RefinementTrace trace = trace_from_json(load_json_file(trace_file));
    if (!trace_valid(pi, trace)) {
        std::cerr << "trace does not match the multiforcing\n";
        return 2;
    }
    Pools pools = load_pools(names_file, dense_file, avoid_file, pi, cfg);
    std::vector<Multiforcing> chain;
    if (!chain_file.empty())
        for (const auto& j : load_json_file(chain_file).at("terms"))
            chain.push_back(multiforcing_from_json(j));

    Report rep = verify_dj(pi, rho, trace, cfg.depth, generator_pool(pi), chain);
    for (const auto& D : pools.dense) {
        Report r = verify_uu4(pi, *D, rho, trace, cfg.depth);
        for (auto& c : r.clauses) {
            c.id = D->id() + ":" + c.id;
            rep.clauses.push_back(c);
        }
    }
    for (std::size_t i = 0; i < pools.names.size(); ++i) {
        RefinementVerdict v = name_sealed(pi, pools.names[i], rho, cfg.depth,
                                          trace.seal_witnesses);
        auto& c = rep.add("name" + std::to_string(i) + ":sealed");
        if (!v.holds) {
            c.holds = false;
            for (const auto& f : v.failures) c.notes.push_back(f.clause + ": " + f.witness);
        }
    }
    for (const auto& req : pools.avoid) {
        Report r = verify_avoidance(pi, req.name, req.xi, rho, trace, cfg.depth);
        for (auto& c : r.clauses) {
            c.id = "xi" + std::to_string(req.xi) + ":" + c.id;
            rep.clauses.push_back(c);
        }
    }

    Json out = to_json(rep);
    out["config"] = to_json(cfg);
    save_json_file(o.out_dir + "/report.json", out);
    for (const auto& c : rep.clauses)
        std::cout << (c.holds ? "PASS " : "FAIL ") << c.id << "\n";
    return rep.all_hold() ? 0 : 1;
}

int cmd_sequence(const CommonOpts& o, std::uint32_t steps, const std::string& names_file,
                 const std::string& dense_file, const std::string& avoid_file) {
    RunConfig cfg = make_config(o);
    MfSequence seq;
    for (std::uint32_t i = 0; i < steps; ++i) {
        std::set<Index> Z;
        for (Index xi = 0; xi <= std::min(i, cfg.index_bound - 1); ++xi) Z.insert(xi);
        Multiforcing uni = clopenize(cw_union_seq(seq.terms));
        Pools pools = load_pools(names_file, dense_file, avoid_file,
                                 extend_domain(uni, Z), cfg);
        seq = step_extend(seq, pools.names, pools.dense, pools.avoid, Z, cfg);
        cfg.seed += 1;
    }
    save_json_file(o.out_dir + "/sequence.json", to_json(seq));
    std::cout << "sequence of " << seq.terms.size() << " terms written\n";
    return 0;
}

int cmd_filter(const CommonOpts& o, const std::string& pi_file, const std::string& seq_file,
               const std::string& dense_file) {
    RunConfig cfg = make_config(o);
    Multiforcing ambient;
    if (!pi_file.empty()) {
        ambient = multiforcing_from_json(load_json_file(pi_file));
    } else if (!seq_file.empty()) {
        MfSequence seq = sequence_from_json(load_json_file(seq_file));
        ambient = clopenize(cw_union_seq(seq.terms));
    } else {
        std::cerr << "filter needs --pi or --seq\n";
        return 2;
    }
    std::vector<MultitreeSetPtr> dense;
    if (!dense_file.empty())
        for (const auto& j : load_json_file(dense_file))
            dense.push_back(dense_set_from_json(j, ambient, cfg));
    FiniteFilter G = build_filter(ambient, dense, cfg.seed, cfg.search_budget);
    save_json_file(o.out_dir + "/filter.json", to_json(G));
    std::cout << "filter meets " << G.met.size() << " sets\n";
    return 0;
}

int cmd_eval(const std::string& name_file, const std::string& filter_file) {
    RealName c = name_from_json(load_json_file(name_file));
    FiniteFilter G = filter_from_json(load_json_file(filter_file));
    std::string out;
    for (const auto& b : eval_name(c, G)) out += !b ? '?' : (*b ? '1' : '0');
    std::cout << out << "\n";
    return 0;
}

int cmd_perm(const CommonOpts& o, const std::string& spec_file, const std::string& in_file) {
    Permutation h = permutation_from_json(load_json_file(spec_file));
    Json j = load_json_file(in_file);
    std::string schema = j.value("schema", "");
    Json out;
    if (schema == "multitree") {
        out = with_schema("multitree", to_json(perm_apply(h, multitree_from_json(j))));
    } else if (schema == "multiforcing") {
        out = with_schema("multiforcing", to_json(perm_apply(h, multiforcing_from_json(j))));
    } else if (schema == "realname") {
        out = with_schema("realname", to_json(perm_apply(h, name_from_json(j))));
    } else if (schema == "sequence") {
        out = to_json(perm_apply(h, sequence_from_json(j)));
    } else {
        std::cerr << "object file needs a schema of multitree|multiforcing|realname|sequence\n";
        return 2;
    }
    save_json_file(o.out_dir + "/permuted.json", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-depth perfect-tree forcing laboratory"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string input, names_file, dense_file, avoid_file, chain_file;
    std::string pi_file, rho_file, trace_file, seq_file, name_file, filter_file, spec_file;
    std::string in_file;
    std::uint32_t steps = 1;

    auto* refine = app.add_subcommand("refine", "generic refinement of a multiforcing");
    add_common(refine, o);
    refine->add_option("input", input, "multiforcing file")->required();
    refine->add_option("--names", names_file, "real names to seal (json array)");
    refine->add_option("--dense", dense_file, "dense-set specs to seal (json array)");
    refine->add_option("--avoid", avoid_file, "names to avoid: [{name, xi}]");

    auto* verify = app.add_subcommand("verify", "re-check a refinement against its trace");
    add_common(verify, o);
    verify->add_option("--pi", pi_file, "input multiforcing")->required();
    verify->add_option("--rho", rho_file, "refinement")->required();
    verify->add_option("--trace", trace_file, "construction trace")->required();
    verify->add_option("--names", names_file, "names whose sealing to check");
    verify->add_option("--dense", dense_file, "dense sets whose sealing to check");
    verify->add_option("--avoid", avoid_file, "avoidance requests to check");
    verify->add_option("--chain", chain_file, "sequence file for the layered clause");

    auto* sequence = app.add_subcommand("sequence", "build an increasing sequence");
    add_common(sequence, o);
    sequence->add_option("--steps", steps, "number of refinement steps")->required();
    sequence->add_option("--names", names_file, "names to seal at every step");
    sequence->add_option("--dense", dense_file, "dense sets to seal at every step");
    sequence->add_option("--avoid", avoid_file, "names to avoid at every step");

    auto* filter = app.add_subcommand("filter", "build a finite filter meeting dense sets");
    add_common(filter, o);
    filter->add_option("--pi", pi_file, "multiforcing file");
    filter->add_option("--seq", seq_file, "sequence file (uses the union)");
    filter->add_option("--dense", dense_file, "dense-set specs to meet");

    auto* eval = app.add_subcommand("eval", "evaluate a name along a filter");
    eval->add_option("--name", name_file, "real name file")->required();
    eval->add_option("--filter", filter_file, "filter file")->required();

    auto* perm = app.add_subcommand("perm", "apply an involution to an object file");
    add_common(perm, o);
    perm->add_option("--spec", spec_file, "permutation file")->required();
    perm->add_option("--in", in_file, "object file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (refine->parsed()) return cmd_refine(o, input, names_file, dense_file, avoid_file);
        if (verify->parsed())
            return cmd_verify(o, pi_file, rho_file, trace_file, names_file, dense_file,
                              avoid_file, chain_file);
        if (sequence->parsed()) return cmd_sequence(o, steps, names_file, dense_file, avoid_file);
        if (filter->parsed()) return cmd_filter(o, pi_file, seq_file, dense_file);
        if (eval->parsed()) return cmd_eval(name_file, filter_file);
        if (perm->parsed()) return cmd_perm(o, spec_file, in_file);
    } catch (const TaskStuck& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SearchBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetRejected& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotPreDense& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
