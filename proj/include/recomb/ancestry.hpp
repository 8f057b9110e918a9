#pragma once

#include <cstdint>
#include <vector>

#include "recomb/genome.hpp"
#include "recomb/measures.hpp"
#include "recomb/rng.hpp"

namespace recomb {

// Sites of one part as a bitmask; non-contiguous parts are first-class
// (they arise from coalescence).
using SiteMask = std::uint32_t;

// Partition of the site set into parts. parent_ids[j] is the parent label
// in 0..N-1 the part descends from at the current generation, or -1 when
// parents have not been sampled yet (fresh splits).
struct PartitionState {
    std::vector<SiteMask> parts;
    std::vector<long long> parent_ids;

    void validate(int n_sites) const;
};

PartitionState whole_genome_state(const GenomeLayout& layout);

// Every part independently stays whole (probability 1 - sum of interior
// rho) or splits at an interior link a (probability rho_a) into the
// below-a and above-a site subsets. Interior links of a part are all links
// strictly between its min and max site, so a non-contiguous part can reach
// the same split through several links.
PartitionState split_step(const PartitionState& state, const GenomeLayout& layout,
                          RngStream& rng);

// Each part picks one of N parents uniformly with replacement; parts with
// the same parent are united. The result carries the chosen parent labels.
PartitionState coalescence_step(const PartitionState& state, long long population_size,
                                RngStream& rng);

// One backward run: refined[tau] is the post-split state at backward time
// tau, sigma[tau] the post-coalescence partition, sigma[0] = {S}.
struct AncestryRun {
    std::vector<PartitionState> sigma;   // length t+1
    std::vector<PartitionState> refined; // length t
    bool coalescence_free = true;
};

AncestryRun run_ancestry(const GenomeLayout& layout, long long population_size, long t,
                         RngStream& rng);

// Letters for each part of the final refined state drawn independently from
// the matching marginal of p0; returns the assembled type index.
std::int64_t sample_type(const AncestryRun& run, const TypeDistribution& p0,
                         RngStream& rng);

// Links read off a partition into contiguous intervals, or -1 if some part
// is non-contiguous (the partition is not ordered).
long long ordered_partition_links(const PartitionState& state, const GenomeLayout& layout);

// Empirical law of the final partition mapped through links: frequency per
// link set for ordered outcomes plus the total non-ordered frequency.
struct PartitionLaw {
    long replicates = 0;
    std::vector<double> ordered_freq; // indexed by LinkSet
    double unordered_freq = 0.0;
};

PartitionLaw partition_law(const GenomeLayout& layout, long long population_size, long t,
                           long replicates, std::uint64_t seed, int threads);

// Empirical P(no coalescence through t) with its binomial standard error.
struct CoalescenceFreeRate {
    long replicates = 0;
    double rate = 0.0;
    double std_error = 0.0;
};

CoalescenceFreeRate coalescence_free_rate(const GenomeLayout& layout,
                                          long long population_size, long t,
                                          long replicates, std::uint64_t seed, int threads);

// 1 - n(n+1)t/(2N), the leading-order lower bound for P(no coalescence).
double coalescence_free_lower_bound(const GenomeLayout& layout, long long population_size,
                                    long t);

// Empirical type frequencies of the assembled present-day individual over
// independent ancestry runs.
std::vector<double> ancestral_type_frequencies(const GenomeLayout& layout,
                                               const TypeDistribution& p0,
                                               long long population_size, long t,
                                               long replicates, std::uint64_t seed,
                                               int threads);

} // namespace recomb
