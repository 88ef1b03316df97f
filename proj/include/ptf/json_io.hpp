#pragma once

#include <string>

#include <json.hpp>

#include "ptf/extlab.hpp"
#include "ptf/refine.hpp"

namespace ptf {

using Json = nlohmann::json;

Json to_json(const BitString& s);
Json to_json(const ClopenTree& t);
Json to_json(const FusionTree& t);
Json to_json(const Tree& t);
Json to_json(const ArborealForcing& p, std::uint32_t flag_depth = 6);
Json to_json(const Multitree& p);
Json to_json(const Multiforcing& pi, std::uint32_t flag_depth = 6);
Json to_json(const RealName& c);
Json to_json(const System& phi);
Json to_json(const RunConfig& cfg);
Json to_json(const SealWitness& w);
Json to_json(const RefinementTrace& t);
Json to_json(const StepCertificate& c);
Json to_json(const MfSequence& s);
Json to_json(const FiniteFilter& f);
Json to_json(const Permutation& h);
Json to_json(const Report& r);

BitString bitstring_from_json(const Json& j);
ClopenTree clopen_from_json(const Json& j);
FusionTree fusion_from_json(const Json& j);
Tree tree_from_json(const Json& j);
ArborealForcing forcing_from_json(const Json& j);
Multitree multitree_from_json(const Json& j);
Multiforcing multiforcing_from_json(const Json& j);
RealName name_from_json(const Json& j);
System system_from_json(const Json& j);
RunConfig config_from_json(const Json& j);
SealWitness witness_from_json(const Json& j);
RefinementTrace trace_from_json(const Json& j);
StepCertificate certificate_from_json(const Json& j);
MfSequence sequence_from_json(const Json& j);
FiniteFilter filter_from_json(const Json& j);
Permutation permutation_from_json(const Json& j);

// Dense-set specifications for the CLI: a tagged object constructing a
// MultitreeSet over the ambient multiforcing.
MultitreeSetPtr dense_set_from_json(const Json& j, const Multiforcing& ambient,
                                    const RunConfig& cfg);

// Atomic file output (temp file + rename) with a trailing newline.
void save_json_file(const std::string& path, const Json& j);
Json load_json_file(const std::string& path);

std::string tool_version();

}  // namespace ptf
