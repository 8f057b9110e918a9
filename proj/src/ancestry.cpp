#include "recomb/ancestry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "recomb/thread_pool.hpp"

namespace recomb {

void PartitionState::validate(int n_sites) const {
    if (parts.size() != parent_ids.size())
        throw ValidationError("one parent label required per part");
    SiteMask all = (SiteMask(1) << n_sites) - 1;
    SiteMask seen = 0;
    for (SiteMask part : parts) {
        if (part == 0) throw ValidationError("empty part");
        if (part & ~all) throw ValidationError("part contains unknown sites");
        if (part & seen) throw ValidationError("parts overlap");
        seen |= part;
    }
    if (seen != all) throw ValidationError("parts do not cover the sites");
}

PartitionState whole_genome_state(const GenomeLayout& layout) {
    PartitionState state;
    state.parts = {SiteMask((SiteMask(1) << layout.n_sites) - 1)};
    state.parent_ids = {-1};
    return state;
}

namespace {

int min_site(SiteMask part) { return std::countr_zero(part); }
int max_site(SiteMask part) { return 31 - std::countl_zero(part); }

} // namespace

PartitionState split_step(const PartitionState& state, const GenomeLayout& layout,
                          RngStream& rng) {
    state.validate(layout.n_sites);
    PartitionState next;
    next.parts.reserve(state.parts.size());
    for (SiteMask part : state.parts) {
        int lo = min_site(part);
        int hi = max_site(part);
        int chosen = -1;
        if (hi > lo) {
            // interior links: lo + 1/2 .. hi - 1/2, i.e. indices lo..hi-1
            double u = rng.uniform();
            double acc = 0.0;
            for (int link = lo; link < hi; ++link) {
                acc += layout.rho[link];
                if (u < acc) {
                    chosen = link;
                    break;
                }
            }
        }
        if (chosen < 0) {
            next.parts.push_back(part);
        } else {
            SiteMask below = part & ((SiteMask(1) << (chosen + 1)) - 1);
            next.parts.push_back(below);
            next.parts.push_back(part & ~below);
        }
    }
    next.parent_ids.assign(next.parts.size(), -1);
    return next;
}

PartitionState coalescence_step(const PartitionState& state, long long population_size,
                                RngStream& rng) {
    if (population_size < 1) throw ValidationError("population size must be at least 1");
    std::vector<long long> parents(state.parts.size());
    for (std::size_t j = 0; j < state.parts.size(); ++j)
        parents[j] = static_cast<long long>(
            rng.uniform_below(static_cast<std::uint64_t>(population_size)));

    PartitionState next;
    for (std::size_t j = 0; j < state.parts.size(); ++j) {
        std::size_t slot = next.parts.size();
        for (std::size_t k = 0; k < next.parts.size(); ++k)
            if (next.parent_ids[k] == parents[j]) {
                slot = k;
                break;
            }
        if (slot == next.parts.size()) {
            next.parts.push_back(state.parts[j]);
            next.parent_ids.push_back(parents[j]);
        } else {
            next.parts[slot] |= state.parts[j];
        }
    }
    return next;
}

AncestryRun run_ancestry(const GenomeLayout& layout, long long population_size, long t,
                         RngStream& rng) {
    layout.validate();
    if (t < 0) throw ValidationError("time must be nonnegative");
    AncestryRun run;
    run.sigma.push_back(whole_genome_state(layout));
    for (long tau = 0; tau < t; ++tau) {
        PartitionState refined = split_step(run.sigma.back(), layout, rng);
        PartitionState merged = coalescence_step(refined, population_size, rng);
        if (merged.parts.size() != refined.parts.size()) run.coalescence_free = false;
        run.refined.push_back(std::move(refined));
        run.sigma.push_back(std::move(merged));
    }
    return run;
}

std::int64_t sample_type(const AncestryRun& run, const TypeDistribution& p0,
                         RngStream& rng) {
    check_distribution(p0);
    const PartitionState& state = run.refined.empty() ? run.sigma.front() : run.refined.back();
    std::vector<int> letters(std::size_t(p0.space.n_sites()), 0);
    for (SiteMask part : state.parts) {
        std::vector<int> sites;
        for (int s = 0; s < p0.space.n_sites(); ++s)
            if (part & (SiteMask(1) << s)) sites.push_back(s);
        TypeDistribution part_marginal = marginal(p0, sites);
        int drawn = categorical(rng, part_marginal.weights);
        std::vector<int> part_letters = letters_of(part_marginal.space, drawn);
        for (std::size_t k = 0; k < sites.size(); ++k)
            letters[std::size_t(sites[k])] = part_letters[k];
    }
    return index_of(p0.space, letters);
}

long long ordered_partition_links(const PartitionState& state, const GenomeLayout& layout) {
    LinkSet links = 0;
    for (SiteMask part : state.parts) {
        int lo = min_site(part);
        int hi = max_site(part);
        SiteMask contiguous = ((SiteMask(1) << (hi + 1)) - 1) & ~((SiteMask(1) << lo) - 1);
        if (part != contiguous) return -1;
        if (hi < layout.n_sites - 1) links |= LinkSet(1) << hi;
        if (lo > 0) links |= LinkSet(1) << (lo - 1);
    }
    return static_cast<long long>(links);
}

PartitionLaw partition_law(const GenomeLayout& layout, long long population_size, long t,
                           long replicates, std::uint64_t seed, int threads) {
    layout.validate();
    require_table_feasible(layout);
    if (replicates < 1) throw ValidationError("replicates must be at least 1");
    const std::size_t n_sets = std::size_t(1) << layout.n_links();

    constexpr long kChunk = 4096;
    const long n_chunks = (replicates + kChunk - 1) / kChunk;
    std::vector<std::vector<long long>> ordered(static_cast<std::size_t>(n_chunks));
    std::vector<long long> unordered(std::size_t(n_chunks), 0);
    int n_threads = resolve_thread_count(threads);
    parallel_for_chunks(n_chunks, n_threads, [&](std::int64_t chunk) {
        std::vector<long long> local(n_sets, 0);
        long long local_unordered = 0;
        long begin = long(chunk) * kChunk;
        long end = std::min(replicates, begin + kChunk);
        for (long rep = begin; rep < end; ++rep) {
            RngStream rng(seed, std::uint64_t(rep));
            AncestryRun run = run_ancestry(layout, population_size, t, rng);
            long long links = ordered_partition_links(run.sigma.back(), layout);
            if (links < 0)
                local_unordered += 1;
            else
                local[std::size_t(links)] += 1;
        }
        ordered[std::size_t(chunk)] = std::move(local);
        unordered[std::size_t(chunk)] = local_unordered;
    });

    PartitionLaw law;
    law.replicates = replicates;
    law.ordered_freq.assign(n_sets, 0.0);
    long long total_unordered = 0;
    for (long c = 0; c < n_chunks; ++c) {
        for (std::size_t g = 0; g < n_sets; ++g)
            law.ordered_freq[g] += double(ordered[std::size_t(c)][g]);
        total_unordered += unordered[std::size_t(c)];
    }
    for (double& f : law.ordered_freq) f /= double(replicates);
    law.unordered_freq = double(total_unordered) / double(replicates);
    return law;
}

CoalescenceFreeRate coalescence_free_rate(const GenomeLayout& layout,
                                          long long population_size, long t,
                                          long replicates, std::uint64_t seed, int threads) {
    layout.validate();
    if (replicates < 1) throw ValidationError("replicates must be at least 1");

    constexpr long kChunk = 4096;
    const long n_chunks = (replicates + kChunk - 1) / kChunk;
    std::vector<long long> hits(std::size_t(n_chunks), 0);
    int n_threads = resolve_thread_count(threads);
    parallel_for_chunks(n_chunks, n_threads, [&](std::int64_t chunk) {
        long long local = 0;
        long begin = long(chunk) * kChunk;
        long end = std::min(replicates, begin + kChunk);
        for (long rep = begin; rep < end; ++rep) {
            RngStream rng(seed, std::uint64_t(rep));
            AncestryRun run = run_ancestry(layout, population_size, t, rng);
            if (run.coalescence_free) local += 1;
        }
        hits[std::size_t(chunk)] = local;
    });

    long long total = 0;
    for (long long h : hits) total += h;
    CoalescenceFreeRate out;
    out.replicates = replicates;
    out.rate = double(total) / double(replicates);
    out.std_error = std::sqrt(out.rate * (1.0 - out.rate) / double(replicates));
    return out;
}

double coalescence_free_lower_bound(const GenomeLayout& layout, long long population_size,
                                    long t) {
    double n = double(layout.n_links());
    return 1.0 - n * (n + 1.0) * double(t) / (2.0 * double(population_size));
}

std::vector<double> ancestral_type_frequencies(const GenomeLayout& layout,
                                               const TypeDistribution& p0,
                                               long long population_size, long t,
                                               long replicates, std::uint64_t seed,
                                               int threads) {
    layout.validate();
    check_distribution(p0);
    if (p0.space.n_sites() != layout.n_sites)
        throw ValidationError("distribution type space does not match the genome layout");
    if (replicates < 1) throw ValidationError("replicates must be at least 1");
    const std::size_t n_types = p0.weights.size();

    constexpr long kChunk = 4096;
    const long n_chunks = (replicates + kChunk - 1) / kChunk;
    std::vector<std::vector<long long>> counts(static_cast<std::size_t>(n_chunks));
    int n_threads = resolve_thread_count(threads);
    parallel_for_chunks(n_chunks, n_threads, [&](std::int64_t chunk) {
        std::vector<long long> local(n_types, 0);
        long begin = long(chunk) * kChunk;
        long end = std::min(replicates, begin + kChunk);
        for (long rep = begin; rep < end; ++rep) {
            RngStream rng(seed, std::uint64_t(rep));
            AncestryRun run = run_ancestry(layout, population_size, t, rng);
            local[std::size_t(sample_type(run, p0, rng))] += 1;
        }
        counts[std::size_t(chunk)] = std::move(local);
    });

    std::vector<double> freq(n_types, 0.0);
    for (long c = 0; c < n_chunks; ++c)
        for (std::size_t i = 0; i < n_types; ++i)
            freq[i] += double(counts[std::size_t(c)][i]);
    for (double& f : freq) f /= double(replicates);
    return freq;
}

} // namespace recomb
