#pragma once

#include <memory>
#include <string>
#include <vector>

#include "recomb/genome.hpp"

namespace recomb {

// Binary tree over the links of G. Children hold the links below/above
// gamma, so the shape is a binary search tree in link order. gamma = -1
// encodes the empty tree.
struct TreeTopology {
    int gamma = -1;
    std::shared_ptr<const TreeTopology> left;
    std::shared_ptr<const TreeTopology> right;

    bool empty() const { return gamma < 0; }
    LinkSet nodes() const;
    // parent link of `link`, or -1 for gamma itself (whose ancestor is the root)
    int parent_of(int link) const;
    // canonical nested form, e.g. "(3/2 (1/2 . .) .)"
    std::string key() const;
};

// All tree-consistent shapes on G, in canonical order: gamma ascending, then
// left subtree, then right. Count is Catalan(|G|); G = 0 gives the empty tree.
std::vector<TreeTopology> enumerate_topologies(LinkSet g);

// lambda_G^(window) = prod over segments I of L_G^(window) of (1 - sum rho_I).
double lambda_value(const GenomeLayout& layout, LinkSet g, LinkWindow window);

// I_alpha for every node: the link interval whose next cut is alpha, given
// the shape. Indexed by link; absent links get an empty window.
std::vector<LinkWindow> node_segments(const TreeTopology& tree, LinkWindow window);

// G_alpha(H) for every node alpha: the nodes weakly below alpha that are not
// separated from it by an element of H, i.e. beta such that no h in H has
// alpha < h <= beta in tree order. The {G_beta(H)} for beta in H partition G.
struct SubtreeDecomposition {
    LinkSet h = 0;
    std::vector<LinkSet> node_sets; // indexed by link
};

SubtreeDecomposition subtree_decomposition(const TreeTopology& tree, LinkSet h);

// g(T_alpha(H)) = rho_alpha / (lambda_{G_alpha(H)}^(I_alpha) - lambda_0^(I_alpha)).
double g_value(const GenomeLayout& layout, const TreeTopology& tree, int alpha,
               LinkSet h, LinkWindow window);

// f(T,H) = prod over alpha in G of g(T_alpha(H)).
double f_value(const GenomeLayout& layout, const TreeTopology& tree, LinkSet h,
               LinkWindow window);

// Closed form: P_tau(T) = sum over H (gamma in H subset G) of
// (-1)^{|H|-1} [lambda_{G_gamma(H)}^tau - lambda_0^tau] f(T,H);
// the empty tree has P_tau = lambda_0^tau.
double tree_probability(const GenomeLayout& layout, const TreeTopology& tree, long tau);
double tree_probability(const GenomeLayout& layout, const TreeTopology& tree, long tau,
                        LinkWindow window);

// One summand of the closed form, for reporting.
struct TreeProbabilityTerm {
    LinkSet h = 0;
    int sign = 1;
    double bracket = 0.0; // lambda_{G_gamma(H)}^tau - lambda_0^tau
    double f = 0.0;

    double value() const { return sign * bracket * f; }
};

std::vector<TreeProbabilityTerm> tree_probability_terms(const GenomeLayout& layout,
                                                        const TreeTopology& tree, long tau,
                                                        LinkWindow window);

// Branch-length summation over all ultrametric realisations of the shape,
// by dynamic programming on (subtree, remaining time). Independent of the
// closed form; agrees with it for all shapes.
double ultrametric_path_sum(const GenomeLayout& layout, const TreeTopology& tree, long tau);
double ultrametric_path_sum(const GenomeLayout& layout, const TreeTopology& tree, long tau,
                            LinkWindow window);

// Literal nested-loop version of the same sum, kept as an oracle for |G| <= 2.
double ultrametric_literal_sum(const GenomeLayout& layout, const TreeTopology& tree,
                               long tau, LinkWindow window);

// Enumeration and per-shape evaluation stay tractable up to these sizes;
// beyond them the Catalan growth makes the closed-form route infeasible.
inline constexpr int kMaxEnumerationLinks = 12;
inline constexpr int kMaxArtTableLinks = 10;

// a_G(t) = sum over shapes of tree_probability.
double coefficient_via_art(const GenomeLayout& layout, LinkSet g, long t);

// Full table from the closed form, indexed by bitmask.
std::vector<double> coefficients_via_art(const GenomeLayout& layout, long t);

// Rebuilds the shape realised by a trajectory from per-link first-cut times
// (-1 = never cut). The earliest cut in any intact window is unique.
TreeTopology topology_from_cut_times(const std::vector<int>& times, LinkWindow window);

} // namespace recomb
