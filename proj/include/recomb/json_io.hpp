#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "recomb/art.hpp"
#include "recomb/forward.hpp"
#include "recomb/genome.hpp"
#include "recomb/measures.hpp"

namespace recomb {

using Json = nlohmann::json;

// Link sets serialize as sorted half-integer labels ["1/2","3/2"]; integer
// link indices are accepted on input as well.
Json links_to_json(LinkSet g);
LinkSet links_from_json(const Json& j, int n_links);

Json layout_to_json(const GenomeLayout& layout);
GenomeLayout layout_from_json(const Json& j);

Json space_to_json(const TypeSpace& space);
TypeSpace space_from_json(const Json& j);

// {"kind":"table","weights":[...]} in mixed-radix order, or
// {"kind":"product","site_marginals":[[...],...]} expanded on load.
Json distribution_to_json(const TypeDistribution& p);
TypeDistribution distribution_from_json(const Json& j, const TypeSpace& space);

// {"t":int,"entries":[{"links":[...],"value":float},...]} sorted by bitmask.
Json coefficient_table_to_json(const CoefficientTable& table);
CoefficientTable coefficient_table_from_json(const Json& j, const GenomeLayout& layout);

// Nested {"gamma":"3/2","left":{...},"right":{...}}; absent children omitted;
// the empty topology is {}.
Json topology_to_json(const TreeTopology& tree);
TreeTopology topology_from_json(const Json& j, int n_links);

// Single JSON config document for the CLI; unknown keys rejected.
struct ExperimentConfig {
    GenomeLayout layout;
    TypeSpace space;
    TypeDistribution p0;
    long steps = 1;
    std::uint64_t seed = 0;
    long replicates = 10000;
    long long population_size = 1000;
    int threads = 0;
    std::string method = "recursion";
};

ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

// FNV-1a over the compact canonical dump.
std::uint64_t fnv1a_hash(const std::string& text);

// {"config_hash":"...","seed":...,"version":"0.1.0"}
Json meta_block(const Json& config_json, std::uint64_t seed);

extern const char* const kToolVersion;

} // namespace recomb
