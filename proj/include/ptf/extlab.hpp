#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptf/refine.hpp"

namespace ptf {

// One successor step of an increasing sequence: the engine trace, the task
// ids that drove it, and whether the step carried the full combined bundle.
struct StepCertificate {
    RefinementTrace trace;
    std::vector<std::string> task_ids;
    std::uint64_t seed = 0;
    bool crucial = false;
};

struct MfSequence {
    std::vector<Multiforcing> terms;
    std::vector<StepCertificate> certs;  // certs[i] produced terms[i]; certs[0] is empty
};

// pi padded with Cohen components on Z minus |pi|.
Multiforcing extend_domain(const Multiforcing& pi, const std::set<Index>& Z,
                           std::uint32_t stem_bound = 1);

// The desk-scale view of a multiforcing whose generators may be fusion
// trees: every generator replaced by its clopen projection. Iterated
// refinement rounds and filter meets work through this view.
Multiforcing clopenize(const Multiforcing& pi);

// Appends a generic refinement of the padded componentwise union; the
// certificate records the trace and the crucial flag (all bundle families
// enabled).
MfSequence step_extend(const MfSequence& seq, const std::vector<RealName>& name_pool,
                       const std::vector<MultitreeSetPtr>& dense_pool,
                       const std::vector<AvoidRequest>& avoid_pool, const std::set<Index>& Z,
                       const RunConfig& cfg);

// Sequence invariants: componentwise refinement between all pairs of terms
// and nondecreasing supports.
bool sequence_valid(const MfSequence& seq, std::uint32_t depth);

// A finite descending chain meeting the listed dense sets.
struct FiniteFilter {
    std::vector<Multitree> chain;
    std::vector<std::string> met;

    const Multitree& last() const { return chain.back(); }
};

// Greedy filter construction with seeded visiting order. Errors:
// NotPreDense(id) when a set fails its density check or cannot be met.
FiniteFilter build_filter(const Multiforcing& pi,
                          const std::vector<MultitreeSetPtr>& dense_list, std::uint64_t seed,
                          std::uint64_t budget = 1u << 16, bool check_density = true,
                          bool shuffle = true);

// Partial evaluation of a name along a filter; never two-valued.
std::vector<std::optional<int>> eval_name(const RealName& c, const FiniteFilter& G);

// The common prefix of the xi components of the chain, of exactly `depth`
// bits; NotDecided when branching survives.
BitString extract_real(const FiniteFilter& G, Index xi, std::uint32_t depth);

// The finite-depth membership criterion: the prefix passes through some
// generator of every term's xi component.
bool check_xik3(const MfSequence& seq, Index xi, const BitString& x);

// A real escaping every xi-generator of one term, built by the avoidance
// searches against each generator in turn.
BitString build_escaping_real(const MfSequence& seq, std::size_t term, Index xi,
                              std::uint32_t length);

// An involution on indices with finite non-identity domain.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(const std::vector<std::pair<Index, Index>>& swaps);

    Index apply(Index xi) const;
    std::vector<Index> nid() const;
    bool involution() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

    const std::map<Index, Index>& moved() const { return moved_; }

private:
    std::map<Index, Index> moved_;  // only non-identity entries
};

Multitree perm_apply(const Permutation& h, const Multitree& p);
Multiforcing perm_apply(const Permutation& h, const Multiforcing& pi);
RealName perm_apply(const Permutation& h, const RealName& c);
MfSequence perm_apply(const Permutation& h, const MfSequence& seq);

}  // namespace ptf
