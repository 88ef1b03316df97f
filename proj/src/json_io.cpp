#include "ptf/json_io.hpp"

#include <cstdio>
#include <fstream>

#include "ptf/errors.hpp"

namespace ptf {

std::string tool_version() { return "ptforce 0.1.0"; }

Json to_json(const BitString& s) { return s.str(); }

BitString bitstring_from_json(const Json& j) {
    if (!j.is_string()) throw ParseError("bitstring must be a string");
    return BitString::parse(j.get<std::string>());
}

Json to_json(const ClopenTree& t) {
    Json stems = Json::array();
    for (const auto& s : t.stems()) stems.push_back(s.str());
    return Json{{"kind", "clopen"}, {"depth", t.depth()}, {"stems", stems}};
}

ClopenTree clopen_from_json(const Json& j) {
    if (j.value("kind", "") != "clopen") throw ParseError("expected a clopen tree");
    std::vector<BitString> stems;
    for (const auto& s : j.at("stems")) stems.push_back(bitstring_from_json(s));
    return ClopenTree(j.at("depth").get<std::uint32_t>(), std::move(stems));
}

Json to_json(const FusionTree& t) {
    Json chain = Json::array();
    for (const auto& [n, tree] : t.chain) chain.push_back(Json::array({n, to_json(tree)}));
    Json log = Json::array();
    for (const auto& e : t.log)
        log.push_back(Json{{"task", e.task.str()},
                           {"witness", e.witness.str()},
                           {"step", e.step},
                           {"absent", e.absent}});
    return Json{{"kind", "fusion"}, {"chain", chain}, {"log", log}};
}

FusionTree fusion_from_json(const Json& j) {
    if (j.value("kind", "") != "fusion") throw ParseError("expected a fusion tree");
    FusionTree out;
    for (const auto& e : j.at("chain"))
        out.chain.emplace_back(e.at(0).get<std::uint32_t>(), clopen_from_json(e.at(1)));
    if (out.chain.empty()) throw ParseError("fusion tree with empty chain");
    if (!chain_valid(out.chain)) throw ChainNotDecreasing("fusion tree deserialization");
    for (const auto& e : j.at("log")) {
        FusionTree::LogEntry le;
        le.task = BitString::parse(e.at("task").get<std::string>());
        le.witness = BitString::parse(e.at("witness").get<std::string>());
        le.step = e.at("step").get<std::uint32_t>();
        le.absent = e.at("absent").get<bool>();
        out.log.push_back(le);
    }
    return out;
}

Json to_json(const Tree& t) {
    if (t.is_clopen()) return to_json(t.projection());
    return to_json(t.fusion());
}

Tree tree_from_json(const Json& j) {
    std::string kind = j.value("kind", "");
    if (kind == "clopen") return Tree(clopen_from_json(j));
    if (kind == "fusion") return Tree(fusion_from_json(j));
    throw ParseError("unknown tree kind");
}

Json to_json(const ArborealForcing& p, std::uint32_t flag_depth) {
    Json gens = Json::array();
    for (const auto& g : p.generators) gens.push_back(to_json(g));
    std::uint32_t d = std::max<std::uint32_t>(1, p.max_proj_depth());
    for (const auto& g : p.generators)
        if (auto e = g.exactness()) d = std::min(d, *e);
    d = std::min(d, flag_depth);
    Json flags;
    flags["regular"] = is_regular(p, d);
    flags["special"] = is_special(p, d).has_value();
    return Json{{"generators", gens}, {"flags", flags}};
}

ArborealForcing forcing_from_json(const Json& j) {
    ArborealForcing out;
    for (const auto& g : j.at("generators")) out.generators.push_back(tree_from_json(g));
    // flags are informative only; recomputed on demand, never trusted
    return out;
}

Json to_json(const Multitree& p) {
    Json sup = Json::object();
    for (const auto& [xi, t] : p.comp) sup[std::to_string(xi)] = to_json(t);
    return Json{{"support", sup}};
}

Multitree multitree_from_json(const Json& j) {
    Multitree out;
    for (const auto& [key, val] : j.at("support").items())
        out.comp.emplace(static_cast<Index>(std::stoul(key)), tree_from_json(val));
    return out;
}

Json to_json(const Multiforcing& pi, std::uint32_t flag_depth) {
    Json comp = Json::object();
    for (const auto& [xi, P] : pi.comp) comp[std::to_string(xi)] = to_json(P, flag_depth);
    return Json{{"components", comp}};
}

Multiforcing multiforcing_from_json(const Json& j) {
    Multiforcing out;
    for (const auto& [key, val] : j.at("components").items())
        out.comp.emplace(static_cast<Index>(std::stoul(key)), forcing_from_json(val));
    return out;
}

Json to_json(const RealName& c) {
    Json triples = Json::array();
    for (const auto& [p, n, i] : c.triples) triples.push_back(Json::array({to_json(p), n, i}));
    return Json{{"horizon", c.horizon}, {"triples", triples}};
}

RealName name_from_json(const Json& j) {
    RealName out;
    out.horizon = j.at("horizon").get<std::uint32_t>();
    for (const auto& t : j.at("triples"))
        out.triples.emplace_back(multitree_from_json(t.at(0)), t.at(1).get<std::uint32_t>(),
                                 t.at(2).get<int>());
    out.canonicalize();
    return out;
}

Json to_json(const System& phi) {
    Json entries = Json::array();
    for (const auto& [key, tree] : phi.comp)
        entries.push_back(Json::array({key.first, key.second, to_json(tree)}));
    return Json{{"entries", entries}};
}

System system_from_json(const Json& j) {
    System out;
    for (const auto& e : j.at("entries"))
        out.comp.emplace(SysKey{e.at(0).get<Index>(), e.at(1).get<std::uint32_t>()},
                         clopen_from_json(e.at(2)));
    return out;
}

Json to_json(const RunConfig& cfg) {
    return Json{{"seed", cfg.seed},
                {"depth", cfg.depth},
                {"kmax", cfg.kmax},
                {"index_bound", cfg.index_bound},
                {"split_budget", cfg.split_budget},
                {"search_budget", cfg.search_budget},
                {"enable",
                 Json{{"support", cfg.enable_support},
                      {"steer", cfg.enable_steer},
                      {"syn", cfg.enable_syn},
                      {"narrow", cfg.enable_narrow},
                      {"seal", cfg.enable_seal},
                      {"avoid", cfg.enable_avoid},
                      {"adpairs", cfg.enable_adpairs},
                      {"clopen", cfg.enable_clopen},
                      {"nonincl", cfg.enable_nonincl},
                      {"escape", cfg.enable_escape},
                      {"thin", cfg.enable_thin},
                      {"split", cfg.enable_split}}}};
}

RunConfig config_from_json(const Json& j) {
    RunConfig cfg;
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.depth = j.at("depth").get<std::uint32_t>();
    cfg.kmax = j.at("kmax").get<std::uint32_t>();
    cfg.index_bound = j.at("index_bound").get<std::uint32_t>();
    cfg.split_budget = j.at("split_budget").get<std::uint32_t>();
    cfg.search_budget = j.at("search_budget").get<std::uint64_t>();
    const Json& e = j.at("enable");
    cfg.enable_support = e.at("support").get<bool>();
    cfg.enable_steer = e.at("steer").get<bool>();
    cfg.enable_syn = e.at("syn").get<bool>();
    cfg.enable_narrow = e.at("narrow").get<bool>();
    cfg.enable_seal = e.at("seal").get<bool>();
    cfg.enable_avoid = e.at("avoid").get<bool>();
    cfg.enable_adpairs = e.at("adpairs").get<bool>();
    cfg.enable_clopen = e.at("clopen").get<bool>();
    cfg.enable_nonincl = e.at("nonincl").get<bool>();
    cfg.enable_escape = e.at("escape").get<bool>();
    cfg.enable_thin = e.at("thin").get<bool>();
    cfg.enable_split = e.at("split").get<bool>();
    return cfg;
}

Json to_json(const SealWitness& w) {
    Json shape = Json::array();
    for (const auto& [xi, k] : w.shape.k_of) shape.push_back(Json::array({xi, k}));
    return Json{{"set", w.set_id},
                {"p", to_json(w.p)},
                {"shape", shape},
                {"level", w.level},
                {"q", to_json(w.q)}};
}

SealWitness witness_from_json(const Json& j) {
    SealWitness w;
    w.set_id = j.at("set").get<std::string>();
    w.p = multitree_from_json(j.at("p"));
    for (const auto& e : j.at("shape"))
        w.shape.k_of[e.at(0).get<Index>()] = e.at(1).get<std::uint32_t>();
    w.level = j.at("level").get<std::uint32_t>();
    w.q = multitree_from_json(j.at("q"));
    return w;
}

Json to_json(const RefinementTrace& t) {
    Json steps = Json::array();
    for (const auto& [n, phi] : t.steps) steps.push_back(Json::array({n, to_json(phi)}));
    Json jof = Json::array();
    for (const auto& [key, jstep] : t.j_of)
        jof.push_back(Json::array({key.first, key.second, jstep}));
    Json wits = Json::array();
    for (const auto& w : t.seal_witnesses) wits.push_back(to_json(w));
    Json holes = Json::object();
    for (const auto& [xi, hole] : t.escape_holes) holes[std::to_string(xi)] = hole.str();
    return Json{{"schema", "trace"},   {"config", to_json(t.config)},
                {"steps", steps},      {"tasks", t.task_at_step},
                {"j_of", jof},         {"seal_witnesses", wits},
                {"escape_holes", holes}};
}

RefinementTrace trace_from_json(const Json& j) {
    RefinementTrace t;
    t.config = config_from_json(j.at("config"));
    for (const auto& e : j.at("steps"))
        t.steps.emplace_back(e.at(0).get<std::uint32_t>(), system_from_json(e.at(1)));
    t.task_at_step = j.at("tasks").get<std::vector<std::string>>();
    for (const auto& e : j.at("j_of"))
        t.j_of[SysKey{e.at(0).get<Index>(), e.at(1).get<std::uint32_t>()}] =
            e.at(2).get<std::uint32_t>();
    for (const auto& w : j.at("seal_witnesses")) t.seal_witnesses.push_back(witness_from_json(w));
    for (const auto& [key, val] : j.at("escape_holes").items())
        t.escape_holes[static_cast<Index>(std::stoul(key))] =
            BitString::parse(val.get<std::string>());
    return t;
}

Json to_json(const StepCertificate& c) {
    return Json{{"trace", to_json(c.trace)},
                {"task_ids", c.task_ids},
                {"seed", c.seed},
                {"crucial", c.crucial}};
}

StepCertificate certificate_from_json(const Json& j) {
    StepCertificate c;
    c.trace = trace_from_json(j.at("trace"));
    c.task_ids = j.at("task_ids").get<std::vector<std::string>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.crucial = j.at("crucial").get<bool>();
    return c;
}

Json to_json(const MfSequence& s) {
    Json terms = Json::array();
    for (const auto& t : s.terms) terms.push_back(to_json(t));
    Json certs = Json::array();
    for (const auto& c : s.certs) certs.push_back(to_json(c));
    return Json{{"schema", "sequence"}, {"terms", terms}, {"certs", certs}};
}

MfSequence sequence_from_json(const Json& j) {
    MfSequence s;
    for (const auto& t : j.at("terms")) s.terms.push_back(multiforcing_from_json(t));
    for (const auto& c : j.at("certs")) s.certs.push_back(certificate_from_json(c));
    return s;
}

Json to_json(const FiniteFilter& f) {
    Json chain = Json::array();
    for (const auto& p : f.chain) chain.push_back(to_json(p));
    return Json{{"schema", "filter"}, {"chain", chain}, {"met", f.met}};
}

FiniteFilter filter_from_json(const Json& j) {
    FiniteFilter f;
    for (const auto& p : j.at("chain")) f.chain.push_back(multitree_from_json(p));
    f.met = j.at("met").get<std::vector<std::string>>();
    return f;
}

Json to_json(const Permutation& h) {
    Json swaps = Json::array();
    for (const auto& [a, b] : h.moved())
        if (a < b) swaps.push_back(Json::array({a, b}));
    return Json{{"schema", "permutation"}, {"swaps", swaps}};
}

Permutation permutation_from_json(const Json& j) {
    std::vector<std::pair<Index, Index>> swaps;
    for (const auto& e : j.at("swaps"))
        swaps.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>());
    return Permutation(swaps);
}

Json to_json(const Report& r) {
    Json clauses = Json::array();
    for (const auto& c : r.clauses)
        clauses.push_back(Json{{"id", c.id}, {"holds", c.holds}, {"notes", c.notes}});
    return Json{{"schema", "report"}, {"version", tool_version()}, {"clauses", clauses},
                {"all_hold", r.all_hold()}};
}

MultitreeSetPtr dense_set_from_json(const Json& j, const Multiforcing& ambient,
                                    const RunConfig& cfg) {
    std::string kind = j.at("kind").get<std::string>();
    std::string id = j.value("id", kind);
    if (kind == "below_or_sad")
        return std::make_shared<BelowOrSadSet>(id, ambient,
                                               multitree_from_json(j.at("pivot")));
    if (kind == "downclosure") {
        std::vector<Multitree> base;
        for (const auto& b : j.at("base")) base.push_back(multitree_from_json(b));
        return std::make_shared<DownclosureSet>(id, ambient, std::move(base),
                                                j.value("require_mt", false), cfg.depth);
    }
    if (kind == "mt_all") return std::make_shared<MtAllSet>(id, ambient, cfg.depth);
    if (kind == "namecone")
        return cone_dense_set(name_from_json(j.at("name")), ambient,
                              j.at("n").get<std::uint32_t>(), cfg.depth);
    if (kind == "decides")
        return decides_set(name_from_json(j.at("name")), ambient, j.at("n").get<std::uint32_t>(),
                           cfg.depth);
    if (kind == "avoid")
        return avoid_dense_set(name_from_json(j.at("name")), ambient, j.at("xi").get<Index>(),
                               tree_from_json(j.at("tree")), id);
    if (kind == "layercone")
        return std::make_shared<LayerConeSet>(id, forcing_from_json(j.at("layer")),
                                              j.at("xi").get<Index>(), cfg.depth);
    if (kind == "intersection") {
        std::vector<MultitreeSetPtr> parts;
        for (const auto& p : j.at("parts")) parts.push_back(dense_set_from_json(p, ambient, cfg));
        return std::make_shared<IntersectionSet>(id, std::move(parts));
    }
    throw ParseError("unknown dense-set kind: " + kind);
}

void save_json_file(const std::string& path, const Json& j) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp);
        out << j.dump(1, ' ') << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename into " + path);
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

}  // namespace ptf
