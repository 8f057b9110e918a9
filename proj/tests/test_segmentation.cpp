#include "doctest.h"

#include <cmath>
#include <vector>

#include "recomb/forward.hpp"
#include "recomb/segmentation.hpp"

using namespace recomb;

TEST_CASE("one-step law cuts at most one link per segment") {
    GenomeLayout layout = make_layout(3, {0.1, 0.2});
    std::vector<double> law = exact_distribution(layout, 1, layout.all_links());
    CHECK(law[0b00] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(law[0b01] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(law[0b10] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(law[0b11] == 0.0);

    GenomeLayout saturated = make_layout(3, {0.5, 0.5});
    std::vector<double> hot = exact_distribution(saturated, 1, saturated.all_links());
    CHECK(hot[0b00] == doctest::Approx(0.0));
    CHECK(hot[0b11] == 0.0);
}

TEST_CASE("exact chain law equals the coefficient recursion") {
    GenomeLayout a = make_layout(3, {0.1, 0.2});
    std::vector<double> law2 = exact_distribution(a, 2, a.all_links());
    CHECK(law2[0b00] == doctest::Approx(0.49).epsilon(1e-14));
    CHECK(law2[0b01] == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(law2[0b10] == doctest::Approx(0.32).epsilon(1e-14));
    CHECK(law2[0b11] == doctest::Approx(0.04).epsilon(1e-14));

    GenomeLayout b = make_layout(5, {0.07, 0.21, 0.02, 0.13});
    for (long t : {0L, 1L, 3L, 9L}) {
        std::vector<double> chain = exact_distribution(b, t, b.all_links());
        CoefficientTable table = coefficients_by_recursion(b, t);
        for (std::size_t g = 0; g < chain.size(); ++g)
            CHECK(std::abs(chain[g] - table.values[g]) <= 1e-12);
    }
}

TEST_CASE("trajectories only cut intact segments") {
    GenomeLayout layout = make_layout(5, {0.1, 0.15, 0.05, 0.2});
    RngStream rng(5550123, 0);
    for (int rep = 0; rep < 500; ++rep) {
        SegmentationTrajectory traj = simulate_segmentation(layout, 12, rng);
        REQUIRE(traj.new_cuts.size() == 12);
        LinkSet g = 0;
        for (LinkSet cuts : traj.new_cuts) {
            CHECK((cuts & g) == 0u);
            for (const LinkWindow& seg : segments_of(layout, g, layout.all_links()))
                CHECK(popcount(cuts & seg.mask()) <= 1);
            CHECK((cuts & ~layout.full_links()) == 0u);
            g |= cuts;
        }
        CHECK(traj.final_state() == g);

        std::vector<int> times = cut_times(traj, layout.n_links());
        for (int link = 0; link < layout.n_links(); ++link) {
            if (times[link] < 0) {
                CHECK((g & (LinkSet(1) << link)) == 0u);
            } else {
                CHECK((traj.new_cuts[times[link] - 1] & (LinkSet(1) << link)) != 0u);
            }
        }
    }
}

TEST_CASE("windowed law is the marginal of the full law") {
    GenomeLayout layout = make_layout(6, {0.05, 0.12, 0.08, 0.03, 0.1});
    for (long t : {1L, 5L, 20L})
        for (int b = 0; b < 5; ++b)
            for (int e = b; e <= 5; ++e)
                CHECK(marginal_check(layout, t, LinkWindow{b, e}) <= 1e-12);
}

TEST_CASE("monte carlo agrees with the exact law") {
    GenomeLayout layout = make_layout(3, {0.1, 0.2});
    const long long reps = 200000;
    EmpiricalDistribution emp = mc_distribution(layout, 3, reps, 8675309);
    std::vector<double> truth = exact_distribution(layout, 3, layout.all_links());
    CHECK(emp.replicates == reps);
    double total = 0.0;
    for (std::size_t g = 0; g < truth.size(); ++g) {
        double slack = 4.0 * emp.std_error[g] + 1e-9;
        CHECK(std::abs(emp.freq[g] - truth[g]) <= slack);
        total += emp.freq[g];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monte carlo is seed-deterministic") {
    GenomeLayout layout = make_layout(4, {0.1, 0.1, 0.1});
    EmpiricalDistribution a = mc_distribution(layout, 4, 20000, 99, 1);
    EmpiricalDistribution b = mc_distribution(layout, 4, 20000, 99, 4);
    EmpiricalDistribution c = mc_distribution(layout, 4, 20000, 100, 1);
    CHECK(a.freq == b.freq);
    CHECK(a.freq != c.freq);
}

TEST_CASE("oracle feasibility guards") {
    GenomeLayout wide = make_layout(15, std::vector<double>(14, 0.01));
    CHECK_THROWS_AS(exact_distribution(wide, 1, wide.all_links()), FeasibilityError);
    CHECK_NOTHROW(exact_distribution(wide, 1, LinkWindow{0, 12}));
    GenomeLayout layout = make_layout(3, {0.1, 0.2});
    CHECK_THROWS_AS(mc_distribution(layout, 1, 0, 1), ValidationError);
    CHECK_THROWS_AS(exact_distribution(layout, -1, layout.all_links()), ValidationError);
}
