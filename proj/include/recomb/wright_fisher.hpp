#pragma once

#include <cstdint>
#include <vector>

#include "recomb/forward.hpp"
#include "recomb/genome.hpp"
#include "recomb/measures.hpp"
#include "recomb/rng.hpp"

namespace recomb {

// Counting measure Z_t over the type space; total mass N.
struct Population {
    TypeSpace space;
    std::vector<long long> counts;
    long long n = 0;

    std::vector<double> frequencies() const;
    void validate() const;
};

struct SimulationConfig {
    std::uint64_t seed = 0;
    long replicates = 1;
    long long population_size = 1;
    long steps = 0;
    int threads = 0; // 0 = resolve from environment / hardware

    void validate() const;
};

// Largest-remainder apportionment of N*p, so the initial empirical
// frequencies match p as closely as integer counts allow.
Population population_from_distribution(const TypeDistribution& p, long long n);

// One generation: multinomial split of N into recombination classes
// (stay whole with weight 1 - sum rho, recombine at link a with weight
// rho_a), each class resampled from the correspondingly recombined current
// frequencies, then pooled. Offspring counts sum to N exactly.
Population wf_step(const GenomeLayout& layout, const Population& pop, RngStream& rng);

// Per-replicate frequency trajectories; trajectories[r][s] is the empirical
// frequency vector of generation s in replicate r, s = 0..steps.
struct WfRun {
    SimulationConfig cfg;
    std::vector<std::vector<std::vector<double>>> trajectories;
};

WfRun run_wf(const GenomeLayout& layout, const TypeDistribution& p0,
             const SimulationConfig& cfg);

// Mean over replicates of ||Zhat_t - Phi^t(p0)||_2^2, with the standard
// error of that mean. Aggregated on the fly so large replicate counts do
// not need trajectory storage.
struct MseSummary {
    long long population_size = 0;
    long steps = 0;
    long replicates = 0;
    double mean_sq_error = 0.0;
    double std_error = 0.0;
};

MseSummary wf_mse(const GenomeLayout& layout, const TypeDistribution& p0,
                  long long population_size, long steps, long replicates,
                  std::uint64_t seed, int threads);

} // namespace recomb
