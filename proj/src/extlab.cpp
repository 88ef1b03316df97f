#include "ptf/extlab.hpp"

#include <algorithm>
#include <random>

#include "ptf/errors.hpp"

namespace ptf {

Multiforcing extend_domain(const Multiforcing& pi, const std::set<Index>& Z,
                           std::uint32_t stem_bound) {
    for (const auto& [xi, P] : pi.comp)
        if (!Z.count(xi)) throw DomainNotSuperset();
    Multiforcing out = pi;
    for (Index xi : Z)
        if (!out.has(xi)) out.comp.emplace(xi, cohen(stem_bound));
    return out;
}

Multiforcing clopenize(const Multiforcing& pi) {
    Multiforcing out;
    for (const auto& [xi, P] : pi.comp) {
        ArborealForcing C;
        for (const auto& g : P.generators) C.generators.emplace_back(g.projection());
        C.canonicalize();
        out.comp.emplace(xi, std::move(C));
    }
    return out;
}

MfSequence step_extend(const MfSequence& seq, const std::vector<RealName>& name_pool,
                       const std::vector<MultitreeSetPtr>& dense_pool,
                       const std::vector<AvoidRequest>& avoid_pool, const std::set<Index>& Z,
                       const RunConfig& cfg) {
    Multiforcing uni = cw_union_seq(seq.terms);
    Multiforcing input = clopenize(extend_domain(uni, Z));

    // Seal every previous layer inside every component (the layer sets are
    // pre-dense by the increasing-union lemma).
    std::map<Index, std::vector<std::vector<Tree>>> arboreal_pool;
    for (const auto& term : seq.terms)
        for (const auto& [xi, P] : term.comp)
            arboreal_pool[xi].push_back(P.generators);

    TaskList tasks = mandatory_tasks(input, name_pool, dense_pool, avoid_pool, arboreal_pool, cfg);
    auto [rho, trace] = generic_refine(input, tasks, cfg);

    MfSequence out = seq;
    if (out.terms.empty()) {
        out.terms.push_back(input);
        out.certs.push_back({});
    }
    StepCertificate cert;
    cert.trace = std::move(trace);
    for (const auto& t : tasks.tasks) cert.task_ids.push_back(t->id());
    cert.seed = cfg.seed;
    cert.crucial = cfg.enable_seal && cfg.enable_avoid && cfg.enable_steer && cfg.enable_split &&
                   cfg.enable_adpairs && cfg.enable_clopen && cfg.enable_nonincl &&
                   cfg.enable_thin;
    out.terms.push_back(std::move(rho));
    out.certs.push_back(std::move(cert));
    return out;
}

bool sequence_valid(const MfSequence& seq, std::uint32_t depth) {
    for (std::size_t a = 0; a + 1 < seq.terms.size(); ++a) {
        const auto sa = seq.terms[a].support();
        const auto sb = seq.terms[a + 1].support();
        if (!std::includes(sb.begin(), sb.end(), sa.begin(), sa.end())) return false;
        for (std::size_t b = a + 1; b < seq.terms.size(); ++b)
            if (!mrefines(seq.terms[a], seq.terms[b], depth).holds) return false;
    }
    return true;
}

FiniteFilter build_filter(const Multiforcing& pi, const std::vector<MultitreeSetPtr>& dense_list,
                          std::uint64_t seed, std::uint64_t budget, bool check_density,
                          bool shuffle) {
    (void)budget;
    if (check_density)
        for (const auto& D : dense_list)
            if (!dense_over_family(*D, pi)) throw NotPreDense(D->id());
    std::vector<const MultitreeSet*> order;
    for (const auto& D : dense_list) order.push_back(D.get());
    std::mt19937_64 rng(seed);
    if (shuffle) std::shuffle(order.begin(), order.end(), rng);

    FiniteFilter out;
    Multitree q;  // the weakest condition
    out.chain.push_back(q);
    for (const auto* D : order) {
        if (!D->member(q)) {
            auto w = D->refine_into(q);
            if (!w || !mleq(*w, q) || !D->member(*w)) throw NotPreDense(D->id());
            q = *w;
            out.chain.push_back(q);
        }
        out.met.push_back(D->id());
    }
    std::sort(out.met.begin(), out.met.end());
    return out;
}

std::vector<std::optional<int>> eval_name(const RealName& c, const FiniteFilter& G) {
    std::vector<std::optional<int>> bits(c.horizon);
    for (std::uint32_t n = 0; n < c.horizon; ++n) {
        bool any[2] = {false, false};
        for (int i = 0; i < 2; ++i)
            for (const auto& b : c.K(n, i)) {
                for (const auto& g : G.chain)
                    if (mleq(g, b)) {
                        any[i] = true;
                        break;
                    }
                if (any[i]) break;
            }
        if (any[0] && any[1]) throw AmbiguousValue("bit " + std::to_string(n));
        if (any[0]) bits[n] = 0;
        if (any[1]) bits[n] = 1;
    }
    return bits;
}

BitString extract_real(const FiniteFilter& G, Index xi, std::uint32_t depth) {
    const Tree* tree = nullptr;
    for (auto it = G.chain.rbegin(); it != G.chain.rend(); ++it)
        if (it->has(xi)) {
            tree = &it->at(xi);
            break;
        }
    if (!tree) throw NotDecided("no chain element supported at the index");
    BitString prefix;
    for (std::uint32_t l = 1; l <= depth; ++l) {
        auto sl = tree->slice(l);
        if (sl.size() != 1) throw NotDecided("level " + std::to_string(l));
        prefix = sl[0];
    }
    return prefix;
}

bool check_xik3(const MfSequence& seq, Index xi, const BitString& x) {
    bool seen = false;
    for (const auto& term : seq.terms) {
        if (!term.has(xi)) continue;
        seen = true;
        bool inside = false;
        for (const auto& g : term.at(xi).generators)
            if (g.contains(x)) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    if (!seen) throw PreconditionViolated("check_xik3: index absent from the sequence");
    return true;
}

BitString build_escaping_real(const MfSequence& seq, std::size_t term, Index xi,
                              std::uint32_t length) {
    if (term >= seq.terms.size()) throw PreconditionViolated("build_escaping_real: bad term");
    Multiforcing amb = clopenize(cw_union_seq(seq.terms));
    RealName c = principal_name(xi, length);
    Multitree p;
    for (const auto& g : seq.terms[term].at(xi).generators) {
        auto D = avoid_dense_set(c, amb, xi, g);
        auto w = D->refine_into(p);
        if (!w) throw SearchBudgetExceeded("build_escaping_real");
        p = *w;
    }
    BitString forced = max_forced_prefix(p, c);
    while (forced.length() < length) forced = forced.append(0);
    return forced.prefix(length);
}

Permutation::Permutation(const std::vector<std::pair<Index, Index>>& swaps) {
    for (const auto& [a, b] : swaps) {
        if (a == b) continue;
        if (moved_.count(a) || moved_.count(b)) throw PreconditionViolated("overlapping swaps");
        moved_[a] = b;
        moved_[b] = a;
    }
}

Index Permutation::apply(Index xi) const {
    auto it = moved_.find(xi);
    return it == moved_.end() ? xi : it->second;
}

std::vector<Index> Permutation::nid() const {
    std::vector<Index> out;
    for (const auto& [a, b] : moved_) out.push_back(a);
    return out;
}

bool Permutation::involution() const {
    for (const auto& [a, b] : moved_) {
        auto it = moved_.find(b);
        if (it == moved_.end() || it->second != a) return false;
    }
    return true;
}

Multitree perm_apply(const Permutation& h, const Multitree& p) {
    Multitree out;
    for (const auto& [xi, t] : p.comp) out.comp.emplace(h.apply(xi), t);
    return out;
}

Multiforcing perm_apply(const Permutation& h, const Multiforcing& pi) {
    Multiforcing out;
    for (const auto& [xi, P] : pi.comp) out.comp.emplace(h.apply(xi), P);
    return out;
}

RealName perm_apply(const Permutation& h, const RealName& c) {
    RealName out;
    out.horizon = c.horizon;
    for (const auto& [p, n, i] : c.triples) out.triples.emplace_back(perm_apply(h, p), n, i);
    out.canonicalize();
    return out;
}

MfSequence perm_apply(const Permutation& h, const MfSequence& seq) {
    MfSequence out;
    for (const auto& term : seq.terms) out.terms.push_back(perm_apply(h, term));
    out.certs = seq.certs;  // traces are not relabeled; they describe the original run
    return out;
}

}  // namespace ptf
