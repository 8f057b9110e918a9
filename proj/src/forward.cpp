#include "recomb/forward.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

namespace recomb {

void check_coefficient_table(CoefficientTable& table) {
    if (table.values.size() != std::size_t(1) << table.layout.n_links())
        throw ValidationError("coefficient table size does not match layout");
    double sum = 0.0;
    for (double& v : table.values) {
        if (v < 0.0) {
            if (v < -1e-12) throw ValidationError("negative coefficient beyond tolerance");
            v = 0.0;
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw ValidationError("coefficient table does not sum to 1");
}

CoefficientTable initial_table(const GenomeLayout& layout) {
    layout.validate();
    require_table_feasible(layout);
    CoefficientTable table{layout, 0,
                           std::vector<double>(std::size_t(1) << layout.n_links(), 0.0)};
    table.values[0] = 1.0;
    return table;
}

CoefficientTable recursion_step(const CoefficientTable& table) {
    CoefficientTable next{table.layout, table.t + 1,
                          detail::recursion_step_generic(table.values, table.layout.rho)};
    // the step conserves total mass, but for the float residue the constant
    // sum is an unstable direction of the quadratic map (it grows by about
    // 1 + sum rho per step), so the residue must be divided out every step
    double sum = 0.0;
    for (double v : next.values) sum += v;
    for (double& v : next.values) v /= sum;
    check_coefficient_table(next);
    return next;
}

CoefficientTable coefficients_by_recursion(const GenomeLayout& layout, long t) {
    if (t < 0) throw ValidationError("time must be nonnegative");
    CoefficientTable table = initial_table(layout);
    for (long s = 0; s < t; ++s) table = recursion_step(table);
    return table;
}

TypeDistribution phi_step(const TypeDistribution& p, const GenomeLayout& layout) {
    layout.validate();
    if (p.space.n_sites() != layout.n_sites)
        throw ValidationError("distribution does not match layout");
    std::vector<double> w(p.weights.size());
    double survive = 1.0 - layout.rho_sum();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = survive * p.weights[i];
    for (int link = 0; link < layout.n_links(); ++link) {
        TypeDistribution r = recombinator(p, link);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += layout.rho[link] * r.weights[i];
    }
    // mass is conserved exactly; dividing out the float residue keeps long
    // trajectories from drifting away from normalization
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return TypeDistribution{p.space, std::move(w)};
}

TypeDistribution evolve(const TypeDistribution& p0, const GenomeLayout& layout, long t) {
    if (t < 0) throw ValidationError("time must be nonnegative");
    check_distribution(p0);
    TypeDistribution p = p0;
    for (long s = 0; s < t; ++s) p = phi_step(p, layout);
    return p;
}

TypeDistribution reconstruct(const TypeDistribution& p0, const CoefficientTable& table) {
    check_distribution(p0);
    if (p0.space.n_sites() != table.layout.n_sites)
        throw ValidationError("distribution does not match layout");
    std::vector<double> w(p0.weights.size(), 0.0);
    for (LinkSet g = 0; g < table.values.size(); ++g) {
        double a = table.values[g];
        if (a == 0.0) continue;
        TypeDistribution rg = composite_recombinator(p0, g);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += a * rg.weights[i];
    }
    // valid tables sum to 1 within 1e-10; fold that residue out, but let a
    // genuinely unnormalized table fail the distribution check downstream
    double total = 0.0;
    for (double x : w) total += x;
    if (std::abs(total - 1.0) <= 1e-10)
        for (double& x : w) x /= total;
    return TypeDistribution{p0.space, std::move(w)};
}

RationalCoefficients coefficients_by_recursion_exact(int n_links,
                                                     const std::vector<RationalRate>& rho,
                                                     long t) {
    using rational = boost::multiprecision::cpp_rational;
    if (n_links < 1 || n_links > 4)
        throw FeasibilityError("exact-rational mode supports 1 to 4 links");
    if (t < 0 || t > 10) throw FeasibilityError("exact-rational mode supports t <= 10");
    if (static_cast<int>(rho.size()) != n_links)
        throw ValidationError("rho must have one entry per link");

    std::vector<rational> rates;
    rational total(0);
    for (const auto& r : rho) {
        if (r.den <= 0 || r.num <= 0) throw ValidationError("rates must be positive");
        rates.emplace_back(r.num, r.den);
        total += rates.back();
    }
    if (total > 1) throw ValidationError("crossover probabilities must sum to at most 1");

    std::vector<rational> a(std::size_t(1) << n_links, rational(0));
    a[0] = 1;
    for (long s = 0; s < t; ++s) a = detail::recursion_step_generic(a, rates);

    RationalCoefficients out;
    out.t = t;
    for (const rational& v : a) {
        out.values.push_back(numerator(v).str() + "/" + denominator(v).str());
        out.as_doubles.push_back(static_cast<double>(v));
    }
    return out;
}

} // namespace recomb
