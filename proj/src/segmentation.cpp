#include "recomb/segmentation.hpp"

#include <cmath>

#include "recomb/thread_pool.hpp"

namespace recomb {

LinkSet segmentation_step(LinkSet g, const GenomeLayout& layout, LinkWindow window,
                          RngStream& rng) {
    LinkSet next = g;
    for (const LinkWindow& seg : segments_of(layout, g, window)) {
        // single uniform draw against the cumulative (stay, rho_a, ...) layout
        double u = rng.uniform();
        double acc = 0.0;
        for (int link = seg.begin; link < seg.end; ++link) {
            acc += layout.rho[link];
            if (u < acc) {
                next |= LinkSet(1) << link;
                break;
            }
        }
    }
    return next;
}

SegmentationTrajectory simulate_segmentation(const GenomeLayout& layout, long t,
                                             RngStream& rng) {
    SegmentationTrajectory traj;
    traj.new_cuts.reserve(t);
    LinkSet g = 0;
    for (long step = 0; step < t; ++step) {
        LinkSet next = segmentation_step(g, layout, layout.all_links(), rng);
        traj.new_cuts.push_back(next & ~g);
        g = next;
    }
    return traj;
}

std::vector<int> cut_times(const SegmentationTrajectory& traj, int n_links) {
    std::vector<int> times(n_links, -1);
    for (std::size_t step = 0; step < traj.new_cuts.size(); ++step)
        for (int link = 0; link < n_links; ++link)
            if (traj.new_cuts[step] & (LinkSet(1) << link))
                times[link] = static_cast<int>(step) + 1;
    return times;
}

namespace {

// Adds, for every combination of per-segment choices from `segments`,
// probability `mass * prod(choice probs)` onto the successor state.
void spread_transitions(const GenomeLayout& layout, const std::vector<LinkWindow>& segments,
                        std::size_t seg_idx, LinkSet state_rel, double mass, int window_begin,
                        std::vector<double>& out) {
    if (mass == 0.0) return;
    if (seg_idx == segments.size()) {
        out[state_rel] += mass;
        return;
    }
    const LinkWindow& seg = segments[seg_idx];
    double stay = 1.0;
    for (int link = seg.begin; link < seg.end; ++link) stay -= layout.rho[link];
    spread_transitions(layout, segments, seg_idx + 1, state_rel, mass * stay, window_begin, out);
    for (int link = seg.begin; link < seg.end; ++link) {
        LinkSet with_cut = state_rel | (LinkSet(1) << (link - window_begin));
        spread_transitions(layout, segments, seg_idx + 1, with_cut, mass * layout.rho[link],
                           window_begin, out);
    }
}

} // namespace

std::vector<double> exact_distribution(const GenomeLayout& layout, long t,
                                       LinkWindow window) {
    layout.validate();
    if (t < 0) throw ValidationError("time must be nonnegative");
    if (window.begin < 0 || window.end > layout.n_links() || window.begin > window.end)
        throw ValidationError("bad link window");
    if (window.size() > kMaxOracleLinks)
        throw FeasibilityError("oracle window is limited to " +
                               std::to_string(kMaxOracleLinks) + " links");
    const std::size_t size = std::size_t(1) << window.size();
    std::vector<double> dist(size, 0.0), next(size);
    dist[0] = 1.0;
    for (long step = 0; step < t; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (LinkSet rel = 0; rel < size; ++rel) {
            if (dist[rel] == 0.0) continue;
            LinkSet abs = rel << window.begin;
            auto segments = segments_of(layout, abs, window);
            spread_transitions(layout, segments, 0, rel, dist[rel], window.begin, next);
        }
        dist.swap(next);
    }
    return dist;
}

double marginal_check(const GenomeLayout& layout, long t, LinkWindow window) {
    std::vector<double> windowed = exact_distribution(layout, t, window);
    std::vector<double> full = exact_distribution(layout, t, layout.all_links());
    const LinkSet window_mask = window.mask();
    std::vector<double> aggregated(windowed.size(), 0.0);
    for (LinkSet g = 0; g < full.size(); ++g)
        aggregated[(g & window_mask) >> window.begin] += full[g];
    double violation = 0.0;
    for (std::size_t g = 0; g < windowed.size(); ++g)
        violation = std::max(violation, std::abs(windowed[g] - aggregated[g]));
    return violation;
}

EmpiricalDistribution mc_distribution(const GenomeLayout& layout, long t,
                                      long long replicates, std::uint64_t seed,
                                      int threads) {
    layout.validate();
    require_table_feasible(layout);
    if (replicates < 1) throw ValidationError("need at least one replicate");
    const std::size_t size = std::size_t(1) << layout.n_links();
    const std::int64_t chunk = 4096;
    const std::int64_t n_chunks = (replicates + chunk - 1) / chunk;
    std::vector<std::vector<std::int64_t>> counts(n_chunks);
    parallel_for_chunks(n_chunks, resolve_thread_count(threads), [&](std::int64_t c) {
        std::vector<std::int64_t> local(size, 0);
        std::int64_t lo = c * chunk;
        std::int64_t hi = std::min<std::int64_t>(replicates, lo + chunk);
        for (std::int64_t rep = lo; rep < hi; ++rep) {
            RngStream rng(seed, static_cast<std::uint64_t>(rep));
            LinkSet g = 0;
            for (long step = 0; step < t; ++step)
                g = segmentation_step(g, layout, layout.all_links(), rng);
            ++local[g];
        }
        counts[c] = std::move(local);
    });
    EmpiricalDistribution out;
    out.replicates = replicates;
    out.freq.assign(size, 0.0);
    out.std_error.assign(size, 0.0);
    for (const auto& local : counts)
        for (std::size_t g = 0; g < size; ++g) out.freq[g] += double(local[g]);
    const double m = double(replicates);
    for (std::size_t g = 0; g < size; ++g) {
        double f = out.freq[g] / m;
        out.freq[g] = f;
        out.std_error[g] = std::sqrt(f * (1.0 - f) / m);
    }
    return out;
}

} // namespace recomb
