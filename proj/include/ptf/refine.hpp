#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptf/names.hpp"
#include "ptf/system.hpp"

namespace ptf {

struct RunConfig {
    std::uint64_t seed = 0;
    std::uint32_t depth = 8;         // exactness / verification depth
    std::uint32_t kmax = 4;          // budgeted (xi,k) universe: k < kmax
    std::uint32_t index_bound = 8;   // indices live below this bound
    std::uint32_t split_budget = 3;  // splitting tasks for all t with lh(t) <= split_budget
    std::uint64_t search_budget = 1000000;

    // ablation switches, one per task family
    bool enable_support = true;
    bool enable_steer = true;
    bool enable_syn = true;
    bool enable_narrow = true;
    bool enable_seal = true;
    bool enable_avoid = true;
    bool enable_adpairs = true;
    bool enable_clopen = true;   // the piece-deciding sets D(T)
    bool enable_nonincl = true;  // the non-inclusion sets D'(T)
    bool enable_escape = true;
    bool enable_thin = true;
    bool enable_split = true;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Everything the construction leaves behind for post-hoc audit.
struct RefinementTrace {
    std::vector<std::pair<std::uint32_t, System>> steps;
    std::vector<std::string> task_at_step;
    std::map<SysKey, std::uint32_t> j_of;
    std::vector<SealWitness> seal_witnesses;
    std::map<Index, BitString> escape_holes;
    RunConfig config;
};

class DenseTask {
public:
    virtual ~DenseTask() = default;
    virtual const std::string& id() const = 0;
    virtual int phase() const = 0;
    // Produce <n,phi> <=c <level-1, psi> with n >= level and member(n, phi);
    // `level` is the freeze level the engine will record.
    virtual std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                                   const System& psi) = 0;
    virtual bool member(std::uint32_t n, const System& phi) const = 0;
    virtual void record(RefinementTrace& trace) const { (void)trace; }
};

using DenseTaskPtr = std::shared_ptr<DenseTask>;

struct TaskList {
    std::vector<DenseTaskPtr> tasks;
};

// The avoidance targets: a name and the index whose new layer must avoid it.
struct AvoidRequest {
    RealName name;
    Index xi;
};

// The finite stand-in for the countable definability class: every family the
// construction needs, bounded by the configuration.
TaskList mandatory_tasks(const Multiforcing& pi, const std::vector<RealName>& name_pool,
                         const std::vector<MultitreeSetPtr>& dense_pool,
                         const std::vector<AvoidRequest>& avoid_pool,
                         const std::map<Index, std::vector<std::vector<Tree>>>& arboreal_pool,
                         const RunConfig& cfg);

// Jensen's generic-refinement construction at finite depth: visit the tasks
// phase by phase (seeded order inside a phase), then read off the fusion
// generators.
std::pair<Multiforcing, RefinementTrace> generic_refine(const Multiforcing& pi, TaskList& tasks,
                                                        const RunConfig& cfg);

struct ClauseReport {
    std::string id;
    bool holds = true;
    std::vector<std::string> notes;
};

struct Report {
    std::vector<ClauseReport> clauses;
    bool all_hold() const {
        for (const auto& c : clauses)
            if (!c.holds) return false;
        return true;
    }
    ClauseReport& add(std::string id) {
        clauses.push_back({std::move(id), true, {}});
        return clauses.back();
    }
};

// The conclusions of the refinement theorem, re-checked from (pi, rho, trace)
// by the independent checkers; clause (vi) runs when the chain whose union pi
// is gets supplied.
Report verify_dj(const Multiforcing& pi, const Multiforcing& rho, const RefinementTrace& trace,
                 std::uint32_t depth,
                 const std::map<Index, std::vector<std::vector<Tree>>>& arboreal_pool = {},
                 const std::vector<Multiforcing>& chain = {});

// Sealing of one open dense set, via the recorded witnesses.
Report verify_uu4(const Multiforcing& pi, const MultitreeSet& D, const Multiforcing& rho,
                  const RefinementTrace& trace, std::uint32_t depth);

// Avoidance of a non-principal name at xi: every new generator's avoidance
// set is sealed.
Report verify_avoidance(const Multiforcing& pi, const RealName& c, Index xi,
                        const Multiforcing& rho, const RefinementTrace& trace,
                        std::uint32_t depth);

// Re-validation of a trace independently of the engine.
bool trace_valid(const Multiforcing& pi, const RefinementTrace& trace);

// Named ablation toggles for the CLI.
void apply_ablation(RunConfig& cfg, const std::string& family);

}  // namespace ptf
