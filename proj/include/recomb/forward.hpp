#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "recomb/genome.hpp"
#include "recomb/measures.hpp"

namespace recomb {

// a_G(t) for all G, dense over bitmasks; values[G] = a_G(t).
struct CoefficientTable {
    GenomeLayout layout;
    long t = 0;
    std::vector<double> values;

    double operator[](LinkSet g) const { return values[g]; }
};

// Entries must be nonnegative and sum to 1 within 1e-10. Inclusion-exclusion
// can leave residuals like -1e-17 on true zeros, so negatives of magnitude
// up to 1e-12 are clamped to 0; anything below that is an error.
void check_coefficient_table(CoefficientTable& table);

CoefficientTable initial_table(const GenomeLayout& layout);

// One step of the coefficient recursion:
// a_G(t+1) = (1 - sum_a rho_a) a_G(t)
//          + sum_{a in G} rho_a (sum_{H subset L_>=a} a_{G_<a u H})
//                               (sum_{K subset L_<=a} a_{K u G_>a}).
// The two inner sums depend on G only through G_<a resp. G_>a, so each link
// costs one grouped O(2^n) pass over the table.
CoefficientTable recursion_step(const CoefficientTable& table);

CoefficientTable coefficients_by_recursion(const GenomeLayout& layout, long t);

// Phi(p) = (1 - sum rho_a) p + sum_a rho_a R_a(p).
TypeDistribution phi_step(const TypeDistribution& p, const GenomeLayout& layout);

TypeDistribution evolve(const TypeDistribution& p0, const GenomeLayout& layout, long t);

// sum_G a_G(t) R_G(p0).
TypeDistribution reconstruct(const TypeDistribution& p0, const CoefficientTable& table);

namespace detail {

// Recursion core shared by the double and exact-rational instantiations.
// `a` is indexed by link bitmask; `rho` has one entry per link.
template <class T>
std::vector<T> recursion_step_generic(const std::vector<T>& a, const std::vector<T>& rho) {
    const int n = static_cast<int>(rho.size());
    const std::size_t size = std::size_t(1) << n;
    T rho_total(0);
    for (const T& r : rho) rho_total += r;
    T survive = T(1) - rho_total;

    std::vector<T> next(size);
    for (std::size_t g = 0; g < size; ++g) next[g] = survive * a[g];

    std::vector<T> sum_low, sum_high;
    for (int i = 0; i < n; ++i) {
        const LinkSet low_mask = (LinkSet(1) << i) - 1;        // links < i
        const LinkSet high_mask = ~((LinkSet(1) << (i + 1)) - 1) & LinkSet(size - 1); // links > i
        sum_low.assign(size, T(0));
        sum_high.assign(size, T(0));
        for (std::size_t s = 0; s < size; ++s) {
            sum_low[s & low_mask] += a[s];
            sum_high[s & high_mask] += a[s];
        }
        for (std::size_t g = 0; g < size; ++g) {
            if (!(g & (std::size_t(1) << i))) continue;
            next[g] += rho[i] * sum_low[g & low_mask] * sum_high[g & high_mask];
        }
    }
    return next;
}

} // namespace detail

// Exact-rational table for pinning worked values bit-exactly. Rates are given
// as numerator/denominator pairs. Limited to small instances by design.
struct RationalRate {
    long long num = 0;
    long long den = 1;
};

struct RationalCoefficients {
    long t = 0;
    // values[G] as "num/den" in lowest terms (numbers can exceed 64 bits)
    std::vector<std::string> values;
    std::vector<double> as_doubles;
};

RationalCoefficients coefficients_by_recursion_exact(int n_links,
                                                     const std::vector<RationalRate>& rho,
                                                     long t);

} // namespace recomb
