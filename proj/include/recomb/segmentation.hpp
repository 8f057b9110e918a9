#pragma once

#include <cstdint>
#include <vector>

#include "recomb/genome.hpp"
#include "recomb/rng.hpp"

namespace recomb {

inline constexpr int kMaxOracleLinks = 12;

// One backward step from state G, restricted to a contiguous window: each
// segment of L_G^(window) independently contributes no link (probability
// 1 - sum of its rates) or exactly one link a (probability rho_a).
LinkSet segmentation_step(LinkSet g, const GenomeLayout& layout, LinkWindow window,
                          RngStream& rng);

// A simulated path: the links newly cut at each step 1..t.
struct SegmentationTrajectory {
    std::vector<LinkSet> new_cuts; // one entry per step
    LinkSet final_state() const {
        LinkSet g = 0;
        for (LinkSet c : new_cuts) g |= c;
        return g;
    }
};

SegmentationTrajectory simulate_segmentation(const GenomeLayout& layout, long t,
                                             RngStream& rng);

// First cut time per link, or -1 if never cut; recovers the tree topology of
// a trajectory (the first cut inside any intact window is unique).
std::vector<int> cut_times(const SegmentationTrajectory& traj, int n_links);

// Brute-force Markov oracle over subsets of the window: builds the exact
// one-step law by enumerating per-segment choices and applies it t times to
// the point mass at the empty set. Entry masks are relative to window.begin.
std::vector<double> exact_distribution(const GenomeLayout& layout, long t,
                                       LinkWindow window);

// Max over G of |P(F_t^(window) = G) - sum_{H outside window} P(F_t = G u H)|.
double marginal_check(const GenomeLayout& layout, long t, LinkWindow window);

struct EmpiricalDistribution {
    long long replicates = 0;
    std::vector<double> freq;       // indexed by link bitmask
    std::vector<double> std_error;  // binomial standard error per entry
};

EmpiricalDistribution mc_distribution(const GenomeLayout& layout, long t,
                                      long long replicates, std::uint64_t seed,
                                      int threads = 0);

} // namespace recomb
