#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "recomb/errors.hpp"

namespace recomb {

// Subset of links as a bitmask. Link index i stands for the half-integer
// link i + 1/2 sitting between sites i and i+1.
using LinkSet = std::uint32_t;

inline constexpr int kMaxLinks = 20;

// Human-readable half-integer label, e.g. index 1 -> "3/2".
std::string link_label(int link_index);

// Parses "3/2" (or a plain integer string) back to a link index.
int parse_link_label(const std::string& label);

inline int popcount(LinkSet s) { return std::popcount(s); }

// Contiguous interval of link indices, half-open: {begin, end}.
struct LinkWindow {
    int begin = 0;
    int end = 0;

    int size() const { return end - begin; }
    bool empty() const { return begin >= end; }
    bool contains(int link) const { return link >= begin && link < end; }
    LinkSet mask() const {
        LinkSet hi = (end >= 32) ? ~LinkSet(0) : ((LinkSet(1) << end) - 1);
        LinkSet lo = (LinkSet(1) << begin) - 1;
        return hi & ~lo;
    }
    friend bool operator==(const LinkWindow&, const LinkWindow&) = default;
};

// Sites 0..n_sites-1 with per-link crossover probabilities rho[0..n_sites-2].
struct GenomeLayout {
    int n_sites = 0;
    std::vector<double> rho;

    int n_links() const { return n_sites - 1; }
    LinkWindow all_links() const { return {0, n_links()}; }
    LinkSet full_links() const { return all_links().mask(); }

    double rho_sum() const {
        double s = 0.0;
        for (double r : rho) s += r;
        return s;
    }

    // n_sites >= 2, every rho > 0, sum(rho) <= 1.
    void validate() const;
};

GenomeLayout make_layout(int n_sites, std::vector<double> rho);

// Parts are inclusive site intervals [first, last], in order.
struct OrderedPartition {
    std::vector<std::pair<int, int>> parts;

    friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;
};

// S(G): cut the site interval at every link of G; |parts| = |G| + 1.
OrderedPartition partition_from_links(const GenomeLayout& layout, LinkSet g);

// psi = S^{-1}. Parts may be given in any order; each must be a contiguous
// run of sites and together they must tile 0..n_sites-1, otherwise a
// ValidationError "not an ordered partition" is raised.
LinkSet links_from_partition(const GenomeLayout& layout,
                             const std::vector<std::vector<int>>& parts);

// L_G^(window): maximal contiguous runs of window \ G, empties discarded.
// Requires G to lie inside the window.
std::vector<LinkWindow> segments_of(const GenomeLayout& layout, LinkSet g,
                                    LinkWindow window);

// Guards 2^{n_links}-sized table computations.
void require_table_feasible(const GenomeLayout& layout);

} // namespace recomb
