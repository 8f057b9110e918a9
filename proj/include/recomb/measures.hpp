#pragma once

#include <cstdint>
#include <vector>

#include "recomb/genome.hpp"

namespace recomb {

// Per-site alphabet sizes |X_0|,...,|X_{n_sites-1}|.
struct TypeSpace {
    std::vector<int> sizes;

    int n_sites() const { return static_cast<int>(sizes.size()); }
    std::int64_t total() const;
    void validate() const;

    friend bool operator==(const TypeSpace&, const TypeSpace&) = default;
};

TypeSpace binary_space(int n_sites);

// Dense probability vector over the product space, mixed-radix indexed with
// site 0 most significant: index(x) = ((x_0*|X_1| + x_1)*|X_2| + x_2)*...
struct TypeDistribution {
    TypeSpace space;
    std::vector<double> weights;

    double& operator[](std::int64_t i) { return weights[i]; }
    double operator[](std::int64_t i) const { return weights[i]; }
};

// Normalization is asserted, never silently repaired.
void check_distribution(const TypeDistribution& p, double tol = 1e-9);

TypeDistribution make_distribution(TypeSpace space, std::vector<double> weights);
TypeDistribution point_mass(TypeSpace space, const std::vector<int>& letters);
TypeDistribution uniform_distribution(TypeSpace space);

// Expands per-site marginals into the dense product measure.
TypeDistribution product_distribution(TypeSpace space,
                                      const std::vector<std::vector<double>>& site_marginals);

std::int64_t index_of(const TypeSpace& space, const std::vector<int>& letters);
std::vector<int> letters_of(const TypeSpace& space, std::int64_t index);

// pi_J . p for a nonempty, sorted site subset J.
TypeDistribution marginal(const TypeDistribution& p, const std::vector<int>& sites);

// R_alpha(p) = (pi_{<alpha} . p) (x) (pi_{>alpha} . p).
TypeDistribution recombinator(const TypeDistribution& p, int link_index);

// R_G(p): product measure over the parts of S(G). Computed directly from the
// part marginals; equals any sequential composition of the R_alpha.
TypeDistribution composite_recombinator(const TypeDistribution& p, LinkSet g);

double sup_distance(const TypeDistribution& a, const TypeDistribution& b);
double tv_distance(const TypeDistribution& a, const TypeDistribution& b);
double l2_sq_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace recomb
