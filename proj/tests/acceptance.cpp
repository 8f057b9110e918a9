// End-to-end checks that gate a release. Each check prints one PASS/FAIL
// line; the process exits nonzero if any check fails. Tolerances are pinned
// here on purpose: loosening them is a release decision, not a test detail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "recomb/ancestry.hpp"
#include "recomb/art.hpp"
#include "recomb/forward.hpp"
#include "recomb/genome.hpp"
#include "recomb/measures.hpp"
#include "recomb/rng.hpp"
#include "recomb/segmentation.hpp"
#include "recomb/wright_fisher.hpp"

using namespace recomb;

namespace {

constexpr std::uint64_t kSeed = 20260821;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Instance {
    GenomeLayout layout;
    TypeDistribution p0;
};

std::vector<Instance> shared_instances() {
    std::vector<Instance> instances;
    for (int i = 0; i < 20; ++i) {
        RngStream rng(kSeed, 1000 + std::uint64_t(i));
        int n_links = 2 + i % 4;
        std::vector<double> rho(static_cast<std::size_t>(n_links));
        for (double& r : rho) r = 0.01 + (1.0 - rng.uniform()) * (1.0 / n_links - 0.01);
        GenomeLayout layout = make_layout(n_links + 1, rho);

        TypeSpace space = binary_space(layout.n_sites);
        std::vector<double> w(std::size_t(space.total()));
        double sum = 0.0;
        for (double& x : w) {
            x = rng.uniform() + 1e-3;
            sum += x;
        }
        for (double& x : w) x /= sum;
        instances.push_back({layout, make_distribution(space, std::move(w))});
    }
    return instances;
}

const long kTimes[] = {1, 5, 20, 50};

GenomeLayout instance_a() { return make_layout(3, {0.1, 0.2}); }

TypeDistribution instance_a_p0() {
    return make_distribution(binary_space(3),
                             {0.2, 0.1, 0.05, 0.15, 0.1, 0.1, 0.05, 0.25});
}

struct Reporter {
    int failures = 0;

    void operator()(int index, bool ok, const std::string& detail) {
        std::printf("[%s] C%d: %s\n", ok ? "PASS" : "FAIL", index, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }

    void run(int index, const std::string& name, bool (*fn)(std::string&)) {
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("unexpected error: ") + e.what();
        }
        (*this)(index, ok, name + " " + detail);
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// 1. three independent routes to the same coefficient tables
bool check_three_way(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const Instance& inst : shared_instances()) {
        for (long t : kTimes) {
            CoefficientTable rec = coefficients_by_recursion(inst.layout, t);
            std::vector<double> art = coefficients_via_art(inst.layout, t);
            std::vector<double> oracle =
                exact_distribution(inst.layout, t, inst.layout.all_links());
            for (std::size_t g = 0; g < rec.values.size(); ++g) {
                worst = std::max(worst, std::abs(rec.values[g] - art[g]));
                worst = std::max(worst, std::abs(rec.values[g] - oracle[g]));
                worst = std::max(worst, std::abs(art[g] - oracle[g]));
            }
        }
    }
    double elapsed = seconds_since(start);
    detail = fmt("max gap %.3e (tol 1e-10), %.1f s (limit 60)", worst, elapsed);
    return worst <= 1e-10 && elapsed < 60.0;
}

// 2. deterministic evolution equals the coefficient reconstruction
bool check_forward_backward(std::string& detail) {
    double worst = 0.0;
    for (const Instance& inst : shared_instances()) {
        TypeDistribution p = inst.p0;
        long reached = 0;
        for (long t : kTimes) {
            while (reached < t) {
                p = phi_step(p, inst.layout);
                ++reached;
            }
            CoefficientTable table = coefficients_by_recursion(inst.layout, t);
            worst = std::max(worst, sup_distance(p, reconstruct(inst.p0, table)));
        }
    }
    detail = fmt("max sup gap %.3e (tol 1e-10)", worst);
    return worst <= 1e-10;
}

// 3. worked three-site instance, t = 2
bool check_worked_instance(std::string& detail) {
    GenomeLayout layout = instance_a();
    CoefficientTable table = coefficients_by_recursion(layout, 2);
    const double expected[] = {0.49, 0.15, 0.32, 0.04};
    double worst = 0.0;
    for (int g = 0; g < 4; ++g)
        worst = std::max(worst, std::abs(table.values[std::size_t(g)] - expected[g]));

    auto trees = enumerate_topologies(0b11);
    double tree_worst = 0.0;
    for (const TreeTopology& tree : trees)
        tree_worst = std::max(tree_worst, std::abs(tree_probability(layout, tree, 2) - 0.02));

    detail = fmt("table gap %.3e, shape gap %.3e (tol 1e-12)", worst, tree_worst);
    return trees.size() == 2 && worst <= 1e-12 && tree_worst <= 1e-12;
}

// 4. four-site example: nested branch sums equal the closed form
bool check_four_site(std::string& detail) {
    GenomeLayout layout = make_layout(4, {0.05, 0.1, 0.15});
    double worst = 0.0;
    for (const TreeTopology& tree : enumerate_topologies(0b011)) {
        for (long tau = 2; tau <= 8; ++tau) {
            double sums = ultrametric_literal_sum(layout, tree, tau, layout.all_links());
            double closed = tree_probability(layout, tree, tau);
            worst = std::max(worst, std::abs(sums - closed));
        }
    }
    detail = fmt("max gap %.3e (tol 1e-12)", worst);
    return worst <= 1e-12;
}

// 5. catalan counts
bool check_catalan(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    const std::size_t expected[] = {1, 2, 5, 14, 42, 132};
    bool ok = true;
    for (int k = 1; k <= 6; ++k)
        ok = ok && enumerate_topologies((LinkSet(1) << k) - 1).size() == expected[k - 1];
    double elapsed = seconds_since(start);
    detail = std::string(ok ? "counts 1,2,5,14,42,132" : "count mismatch") +
             fmt(", %.3f s (limit 1)", elapsed);
    return ok && elapsed < 1.0;
}

// 6. windowed laws are marginals of the full law
bool check_marginalisation(std::string& detail) {
    GenomeLayout layout = make_layout(6, {0.05, 0.12, 0.08, 0.03, 0.1});
    double worst = 0.0;
    for (long t = 0; t <= 20; ++t)
        for (int b = 0; b <= 5; ++b)
            for (int e = b; e <= 5; ++e)
                worst = std::max(worst, marginal_check(layout, t, LinkWindow{b, e}));
    detail = fmt("max violation %.3e (tol 1e-12)", worst);
    return worst <= 1e-12;
}

// 7. recombinators are idempotent and commute
bool check_recombinator_algebra(std::string& detail) {
    RngStream rng(kSeed, 7);
    TypeSpace space{{2, 3, 2, 2}};
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> w(std::size_t(space.total()));
        double sum = 0.0;
        for (double& x : w) {
            x = rng.uniform() + 1e-3;
            sum += x;
        }
        for (double& x : w) x /= sum;
        TypeDistribution p = make_distribution(space, std::move(w));
        for (int i = 0; i < 3; ++i) {
            TypeDistribution once = recombinator(p, i);
            worst = std::max(worst, sup_distance(once, recombinator(once, i)));
            for (int j = i + 1; j < 3; ++j)
                worst = std::max(worst, sup_distance(recombinator(recombinator(p, i), j),
                                                     recombinator(recombinator(p, j), i)));
        }
    }
    detail = fmt("max gap %.3e (tol 1e-12)", worst);
    return worst <= 1e-12;
}

// 8. monte carlo segmentation at one million replicates
bool check_monte_carlo(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    GenomeLayout layout = instance_a();
    EmpiricalDistribution emp = mc_distribution(layout, 3, 1000000, kSeed);
    std::vector<double> truth = exact_distribution(layout, 3, layout.all_links());
    double worst_sigma = 0.0;
    for (std::size_t g = 0; g < truth.size(); ++g) {
        double se = std::max(emp.std_error[g], 1e-12);
        worst_sigma = std::max(worst_sigma, std::abs(emp.freq[g] - truth[g]) / se);
    }
    double elapsed = seconds_since(start);
    detail = fmt("worst deviation %.2f standard errors (limit 3), %.1f s (limit 120)",
                 worst_sigma, elapsed);
    return worst_sigma <= 3.0 && elapsed < 120.0;
}

// 9. finite-population convergence rate and the pedigree bound
bool check_lln(std::string& detail) {
    GenomeLayout layout = instance_a();
    TypeDistribution p0 = instance_a_p0();
    const long long sizes[] = {100, 1000, 10000};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (long long n : sizes) {
        MseSummary mse = wf_mse(layout, p0, n, 3, 200, kSeed, 0);
        double x = std::log(double(n));
        double y = std::log(mse.mean_sq_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);

    CoalescenceFreeRate rate = coalescence_free_rate(layout, 1000, 5, 100000, kSeed, 0);
    double bound = coalescence_free_lower_bound(layout, 1000, 5);
    bool bound_ok = rate.rate >= bound - 3.0 * rate.std_error;

    detail = fmt("slope %.3f (band [-1.3,-0.7]), no-coalescence rate %.4f vs bound %.4f",
                 slope, rate.rate, bound);
    return slope >= -1.3 && slope <= -0.7 && bound_ok;
}

// 10. finite-population partition law approaches the limit law
bool check_partition_trend(std::string& detail) {
    GenomeLayout layout = instance_a();
    const long t = 5;
    std::vector<double> limit = exact_distribution(layout, t, layout.all_links());
    double tv[3];
    const long long sizes[] = {100, 1000, 10000};
    for (int k = 0; k < 3; ++k) {
        PartitionLaw law = partition_law(layout, sizes[k], t, 100000, kSeed, 0);
        double sum = law.unordered_freq;
        for (std::size_t g = 0; g < limit.size(); ++g)
            sum += std::abs(law.ordered_freq[g] - limit[g]);
        tv[k] = 0.5 * sum;
    }
    detail = fmt("total variation %.4f > %.4f > %.4f", tv[0], tv[1], tv[2]);
    return tv[0] > tv[1] && tv[1] > tv[2];
}

// 11. long-run state is the complete product measure
bool check_stationarity(std::string& detail) {
    GenomeLayout layout = instance_a();
    TypeDistribution p0 = instance_a_p0();
    CoefficientTable table = coefficients_by_recursion(layout, 500);
    double full_weight = table.values[layout.full_links()];

    TypeDistribution limit = composite_recombinator(p0, layout.full_links());
    double gap = sup_distance(evolve(p0, layout, 500), limit);
    detail = fmt("full-decay weight %.6f (min 0.999), sup gap %.2e (tol 1e-3)",
                 full_weight, gap);
    return full_weight >= 0.999 && gap <= 1e-3;
}

} // namespace

int main() {
    Reporter report;
    report.run(1, "three-way table equivalence:", check_three_way);
    report.run(2, "evolution matches reconstruction:", check_forward_backward);
    report.run(3, "worked three-site instance:", check_worked_instance);
    report.run(4, "four-site branch sums:", check_four_site);
    report.run(5, "topology counts:", check_catalan);
    report.run(6, "window marginalisation:", check_marginalisation);
    report.run(7, "recombinator algebra:", check_recombinator_algebra);
    report.run(8, "monte carlo segmentation:", check_monte_carlo);
    report.run(9, "population-size scaling:", check_lln);
    report.run(10, "partition law trend:", check_partition_trend);
    report.run(11, "long-run product state:", check_stationarity);

    if (report.failures == 0) {
        std::printf("all 11 checks passed\n");
        return 0;
    }
    std::printf("%d check(s) failed\n", report.failures);
    return 1;
}
