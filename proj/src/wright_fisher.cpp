#include "recomb/wright_fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recomb/thread_pool.hpp"

namespace recomb {

std::vector<double> Population::frequencies() const {
    std::vector<double> freq(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        freq[i] = double(counts[i]) / double(n);
    return freq;
}

void Population::validate() const {
    space.validate();
    if (n < 1) throw ValidationError("population size must be at least 1");
    if (static_cast<std::int64_t>(counts.size()) != space.total())
        throw ValidationError("counts do not cover the type space");
    long long total = 0;
    for (long long c : counts) {
        if (c < 0) throw ValidationError("negative type count");
        total += c;
    }
    if (total != n) throw ValidationError("type counts do not sum to the population size");
}

void SimulationConfig::validate() const {
    if (replicates < 1) throw ValidationError("replicates must be at least 1");
    if (population_size < 1) throw ValidationError("population size must be at least 1");
    if (steps < 0) throw ValidationError("steps must be nonnegative");
}

Population population_from_distribution(const TypeDistribution& p, long long n) {
    check_distribution(p);
    if (n < 1) throw ValidationError("population size must be at least 1");
    const std::size_t size = p.weights.size();
    Population pop{p.space, std::vector<long long>(size, 0), n};
    std::vector<std::pair<double, std::size_t>> remainders(size);
    long long assigned = 0;
    for (std::size_t i = 0; i < size; ++i) {
        double exact = double(n) * p.weights[i];
        long long base = static_cast<long long>(std::floor(exact));
        pop.counts[i] = base;
        assigned += base;
        remainders[i] = {exact - double(base), i};
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    long long left = n - assigned;
    for (long long k = 0; k < left; ++k) pop.counts[remainders[std::size_t(k)].second] += 1;
    return pop;
}

Population wf_step(const GenomeLayout& layout, const Population& pop, RngStream& rng) {
    layout.validate();
    pop.validate();
    if (pop.space.n_sites() != layout.n_sites)
        throw ValidationError("population type space does not match the genome layout");
    const std::size_t size = pop.counts.size();

    TypeDistribution zhat{pop.space, pop.frequencies()};

    std::vector<double> class_probs(std::size_t(layout.n_links()) + 1);
    class_probs[0] = 1.0 - layout.rho_sum();
    for (int i = 0; i < layout.n_links(); ++i) class_probs[std::size_t(i) + 1] = layout.rho[i];
    std::vector<long long> class_sizes = multinomial(rng, pop.n, class_probs);

    Population next{pop.space, std::vector<long long>(size, 0), pop.n};
    if (class_sizes[0] > 0) {
        std::vector<long long> y = multinomial(rng, class_sizes[0], zhat.weights);
        for (std::size_t i = 0; i < size; ++i) next.counts[i] += y[i];
    }
    for (int link = 0; link < layout.n_links(); ++link) {
        long long n_class = class_sizes[std::size_t(link) + 1];
        if (n_class == 0) continue;
        TypeDistribution recombined = recombinator(zhat, link);
        std::vector<long long> y = multinomial(rng, n_class, recombined.weights);
        for (std::size_t i = 0; i < size; ++i) next.counts[i] += y[i];
    }
    return next;
}

namespace {

constexpr long long kMaxStoredValues = 1LL << 27;

std::vector<std::vector<double>> one_replicate(const GenomeLayout& layout,
                                               const Population& initial, long steps,
                                               std::uint64_t seed, std::uint64_t stream) {
    RngStream rng(seed, stream);
    std::vector<std::vector<double>> traj;
    traj.reserve(std::size_t(steps) + 1);
    Population pop = initial;
    traj.push_back(pop.frequencies());
    for (long s = 0; s < steps; ++s) {
        pop = wf_step(layout, pop, rng);
        traj.push_back(pop.frequencies());
    }
    return traj;
}

} // namespace

WfRun run_wf(const GenomeLayout& layout, const TypeDistribution& p0,
             const SimulationConfig& cfg) {
    layout.validate();
    cfg.validate();
    Population initial = population_from_distribution(p0, cfg.population_size);
    long long stored = cfg.replicates * (cfg.steps + 1) *
                       static_cast<long long>(p0.weights.size());
    if (stored > kMaxStoredValues)
        throw FeasibilityError("trajectory storage infeasible; reduce replicates or steps");

    WfRun run;
    run.cfg = cfg;
    run.trajectories.resize(std::size_t(cfg.replicates));
    int threads = resolve_thread_count(cfg.threads);
    parallel_for_chunks(std::size_t(cfg.replicates), threads, [&](std::size_t r) {
        run.trajectories[r] = one_replicate(layout, initial, cfg.steps, cfg.seed, r);
    });
    return run;
}

MseSummary wf_mse(const GenomeLayout& layout, const TypeDistribution& p0,
                  long long population_size, long steps, long replicates,
                  std::uint64_t seed, int threads) {
    layout.validate();
    if (replicates < 1) throw ValidationError("replicates must be at least 1");
    Population initial = population_from_distribution(p0, population_size);
    TypeDistribution target = evolve(p0, layout, steps);

    int n_threads = resolve_thread_count(threads);
    std::vector<double> sums(std::size_t(replicates), 0.0);
    parallel_for_chunks(std::size_t(replicates), n_threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        Population pop = initial;
        for (long s = 0; s < steps; ++s) pop = wf_step(layout, pop, rng);
        sums[r] = l2_sq_distance(pop.frequencies(), target.weights);
    });

    double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / double(replicates);
    double var = 0.0;
    for (double v : sums) var += (v - mean) * (v - mean);
    var = (replicates > 1) ? var / double(replicates - 1) : 0.0;

    MseSummary out;
    out.population_size = population_size;
    out.steps = steps;
    out.replicates = replicates;
    out.mean_sq_error = mean;
    out.std_error = std::sqrt(var / double(replicates));
    return out;
}

} // namespace recomb
