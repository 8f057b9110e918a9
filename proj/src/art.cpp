#include "recomb/art.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace recomb {

namespace {
constexpr double kDegenerateGap = 1e-14;
}

LinkSet TreeTopology::nodes() const {
    if (empty()) return 0;
    LinkSet s = LinkSet(1) << gamma;
    if (left) s |= left->nodes();
    if (right) s |= right->nodes();
    return s;
}

int TreeTopology::parent_of(int link) const {
    if (empty()) throw ValidationError("link not in tree");
    if (link == gamma) return -1;
    const TreeTopology* node = this;
    for (;;) {
        const TreeTopology* child =
            (link < node->gamma) ? node->left.get() : node->right.get();
        if (!child || child->empty()) throw ValidationError("link not in tree");
        if (child->gamma == link) return node->gamma;
        node = child;
    }
}

std::string TreeTopology::key() const {
    if (empty()) return ".";
    std::string s = "(" + link_label(gamma) + " ";
    s += left ? left->key() : ".";
    s += " ";
    s += right ? right->key() : ".";
    s += ")";
    return s;
}

namespace {

using TreePtr = std::shared_ptr<const TreeTopology>;

std::vector<TreePtr> enumerate_ptrs(const std::vector<int>& links, int lo, int hi) {
    std::vector<TreePtr> out;
    if (lo >= hi) {
        out.push_back(nullptr); // empty subtree
        return out;
    }
    for (int mid = lo; mid < hi; ++mid) {
        auto lefts = enumerate_ptrs(links, lo, mid);
        auto rights = enumerate_ptrs(links, mid + 1, hi);
        for (const auto& l : lefts)
            for (const auto& r : rights)
                out.push_back(std::make_shared<TreeTopology>(TreeTopology{links[mid], l, r}));
    }
    return out;
}

} // namespace

std::vector<TreeTopology> enumerate_topologies(LinkSet g) {
    if (popcount(g) > kMaxEnumerationLinks)
        throw FeasibilityError("too many links for shape enumeration");
    std::vector<int> links;
    for (int i = 0; i < 32; ++i)
        if (g & (LinkSet(1) << i)) links.push_back(i);
    if (links.empty()) return {TreeTopology{}};
    auto ptrs = enumerate_ptrs(links, 0, static_cast<int>(links.size()));
    std::vector<TreeTopology> out;
    out.reserve(ptrs.size());
    for (const auto& p : ptrs) out.push_back(*p);
    return out;
}

double lambda_value(const GenomeLayout& layout, LinkSet g, LinkWindow window) {
    double prod = 1.0;
    for (const LinkWindow& seg : segments_of(layout, g, window)) {
        double stay = 1.0;
        for (int link = seg.begin; link < seg.end; ++link) stay -= layout.rho[link];
        prod *= stay;
    }
    return prod;
}

namespace {

void fill_segments(const TreeTopology& node, LinkWindow window,
                   std::vector<LinkWindow>& out) {
    if (node.empty()) return;
    out[node.gamma] = window;
    if (node.left) fill_segments(*node.left, {window.begin, node.gamma}, out);
    if (node.right) fill_segments(*node.right, {node.gamma + 1, window.end}, out);
}

// G_alpha(H) bottom-up: alpha plus the node sets of its children not in H.
LinkSet fill_node_sets(const TreeTopology& node, LinkSet h, std::vector<LinkSet>& out) {
    LinkSet set = LinkSet(1) << node.gamma;
    if (node.left && !node.left->empty()) {
        LinkSet child = fill_node_sets(*node.left, h, out);
        if (!(h & (LinkSet(1) << node.left->gamma))) set |= child;
    }
    if (node.right && !node.right->empty()) {
        LinkSet child = fill_node_sets(*node.right, h, out);
        if (!(h & (LinkSet(1) << node.right->gamma))) set |= child;
    }
    out[node.gamma] = set;
    return set;
}

} // namespace

std::vector<LinkWindow> node_segments(const TreeTopology& tree, LinkWindow window) {
    std::vector<LinkWindow> out(window.end, LinkWindow{0, 0});
    if (!tree.empty() && (tree.nodes() & ~window.mask()))
        throw ValidationError("tree links outside window");
    fill_segments(tree, window, out);
    return out;
}

SubtreeDecomposition subtree_decomposition(const TreeTopology& tree, LinkSet h) {
    if (tree.empty()) throw ValidationError("empty tree has no decomposition");
    LinkSet g = tree.nodes();
    if (!(h & (LinkSet(1) << tree.gamma)))
        throw ValidationError("decomposition set must contain the initial branching point");
    if (h & ~g) throw ValidationError("decomposition set must be a subset of the nodes");
    SubtreeDecomposition dec;
    dec.h = h;
    dec.node_sets.assign(32, 0);
    fill_node_sets(tree, h, dec.node_sets);
    return dec;
}

namespace {

struct TreeEvaluation {
    std::vector<int> links;            // nodes of G in ascending order
    std::vector<LinkWindow> segments;  // I_alpha per link
};

TreeEvaluation prepare(const TreeTopology& tree, LinkWindow window) {
    TreeEvaluation ev;
    LinkSet g = tree.nodes();
    if (g & ~window.mask()) throw ValidationError("tree links outside window");
    for (int i = window.begin; i < window.end; ++i)
        if (g & (LinkSet(1) << i)) ev.links.push_back(i);
    ev.segments = node_segments(tree, window);
    return ev;
}

double g_from_sets(const GenomeLayout& layout, int alpha, LinkSet g_alpha,
                   LinkWindow i_alpha) {
    double gap = lambda_value(layout, g_alpha, i_alpha) - lambda_value(layout, 0, i_alpha);
    if (gap < kDegenerateGap)
        throw ValidationError("degenerate eigenvalue gap at link " + link_label(alpha));
    return layout.rho[alpha] / gap;
}

} // namespace

double g_value(const GenomeLayout& layout, const TreeTopology& tree, int alpha,
               LinkSet h, LinkWindow window) {
    TreeEvaluation ev = prepare(tree, window);
    SubtreeDecomposition dec = subtree_decomposition(tree, h);
    if (!(tree.nodes() & (LinkSet(1) << alpha)))
        throw ValidationError("link not in tree");
    return g_from_sets(layout, alpha, dec.node_sets[alpha], ev.segments[alpha]);
}

double f_value(const GenomeLayout& layout, const TreeTopology& tree, LinkSet h,
               LinkWindow window) {
    TreeEvaluation ev = prepare(tree, window);
    SubtreeDecomposition dec = subtree_decomposition(tree, h);
    double f = 1.0;
    for (int alpha : ev.links)
        f *= g_from_sets(layout, alpha, dec.node_sets[alpha], ev.segments[alpha]);
    return f;
}

double tree_probability(const GenomeLayout& layout, const TreeTopology& tree, long tau) {
    return tree_probability(layout, tree, tau, layout.all_links());
}

std::vector<TreeProbabilityTerm> tree_probability_terms(const GenomeLayout& layout,
                                                        const TreeTopology& tree, long tau,
                                                        LinkWindow window) {
    layout.validate();
    if (tau < 0) throw ValidationError("time must be nonnegative");
    if (tree.empty()) return {};

    TreeEvaluation ev = prepare(tree, window);
    LinkSet g = tree.nodes();
    LinkSet gamma_bit = LinkSet(1) << tree.gamma;
    LinkSet rest = g & ~gamma_bit;
    double pow_empty = std::pow(lambda_value(layout, 0, window), double(tau));
    std::vector<TreeProbabilityTerm> terms;
    // H runs over all submasks of G that contain gamma
    LinkSet sub = rest;
    for (;;) {
        TreeProbabilityTerm term;
        term.h = sub | gamma_bit;
        SubtreeDecomposition dec = subtree_decomposition(tree, term.h);
        term.f = 1.0;
        for (int alpha : ev.links)
            term.f *= g_from_sets(layout, alpha, dec.node_sets[alpha], ev.segments[alpha]);
        term.bracket =
            std::pow(lambda_value(layout, dec.node_sets[tree.gamma], window), double(tau)) -
            pow_empty;
        term.sign = (popcount(term.h) % 2 == 1) ? 1 : -1;
        terms.push_back(term);
        if (sub == 0) break;
        sub = (sub - 1) & rest;
    }
    return terms;
}

double tree_probability(const GenomeLayout& layout, const TreeTopology& tree, long tau,
                        LinkWindow window) {
    if (tree.empty()) {
        layout.validate();
        if (tau < 0) throw ValidationError("time must be nonnegative");
        return std::pow(lambda_value(layout, 0, window), double(tau));
    }
    double total = 0.0;
    for (const TreeProbabilityTerm& term : tree_probability_terms(layout, tree, tau, window))
        total += term.value();
    return total;
}

double ultrametric_path_sum(const GenomeLayout& layout, const TreeTopology& tree, long tau) {
    return ultrametric_path_sum(layout, tree, tau, layout.all_links());
}

namespace {

// keyed by (node, window, remaining time); distinct empty slots share the
// null node but differ in window
using DpKey = std::tuple<const TreeTopology*, int, int, long>;

double dp_path_sum(const GenomeLayout& layout, const TreeTopology* node, LinkWindow window,
                   long steps, std::map<DpKey, double>& memo) {
    if (!node || node->empty())
        return std::pow(lambda_value(layout, 0, window), double(steps));
    if (steps < 1) return 0.0;
    DpKey key{node, window.begin, window.end, steps};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    double lambda_empty = lambda_value(layout, 0, window);
    double rho = layout.rho[node->gamma];
    LinkWindow left{window.begin, node->gamma};
    LinkWindow right{node->gamma + 1, window.end};
    double total = 0.0;
    double base_pow = 1.0;
    for (long i = 0; i < steps; ++i) {
        total += base_pow * rho * dp_path_sum(layout, node->left.get(), left, steps - 1 - i, memo) *
                 dp_path_sum(layout, node->right.get(), right, steps - 1 - i, memo);
        base_pow *= lambda_empty;
    }
    memo[key] = total;
    return total;
}

} // namespace

double ultrametric_path_sum(const GenomeLayout& layout, const TreeTopology& tree, long tau,
                            LinkWindow window) {
    layout.validate();
    if (tau < 0) throw ValidationError("time must be nonnegative");
    std::map<DpKey, double> memo;
    return dp_path_sum(layout, tree.empty() ? nullptr : &tree, window, tau, memo);
}

double ultrametric_literal_sum(const GenomeLayout& layout, const TreeTopology& tree,
                               long tau, LinkWindow window) {
    layout.validate();
    LinkSet g = tree.nodes();
    int size = popcount(g);
    if (size > 2) throw FeasibilityError("literal summation is an oracle for at most 2 links");
    double lambda_empty = lambda_value(layout, 0, window);
    if (size == 0) return std::pow(lambda_empty, double(tau));

    int gamma = tree.gamma;
    if (size == 1) {
        // root branch lasts i steps, cut at gamma, both halves survive after
        double total = 0.0;
        double after = lambda_value(layout, LinkSet(1) << gamma, window);
        for (long i = 0; i + 1 <= tau; ++i)
            total += std::pow(lambda_empty, double(i)) * layout.rho[gamma] *
                     std::pow(after, double(tau - 1 - i));
        return total;
    }

    const TreeTopology* child_node =
        (tree.left && !tree.left->empty()) ? tree.left.get() : tree.right.get();
    int child = child_node->gamma;
    double lambda_one = lambda_value(layout, LinkSet(1) << gamma, window);
    double lambda_both = lambda_value(layout, g, window);
    // the half not containing the second cut must survive that step
    LinkWindow sibling = (child < gamma) ? LinkWindow{gamma + 1, window.end}
                                         : LinkWindow{window.begin, gamma};
    double sibling_stay = lambda_value(layout, 0, sibling);
    double total = 0.0;
    for (long i = 0; i + 2 <= tau; ++i)
        for (long j = 0; i + j + 2 <= tau; ++j)
            total += std::pow(lambda_empty, double(i)) * layout.rho[gamma] *
                     std::pow(lambda_one, double(j)) * layout.rho[child] * sibling_stay *
                     std::pow(lambda_both, double(tau - 2 - i - j));
    return total;
}

double coefficient_via_art(const GenomeLayout& layout, LinkSet g, long t) {
    double total = 0.0;
    for (const TreeTopology& tree : enumerate_topologies(g))
        total += tree_probability(layout, tree, t);
    return total;
}

std::vector<double> coefficients_via_art(const GenomeLayout& layout, long t) {
    layout.validate();
    if (layout.n_links() > kMaxArtTableLinks)
        throw FeasibilityError("closed-form table beyond 10 links is infeasible");
    std::vector<double> table(std::size_t(1) << layout.n_links(), 0.0);
    for (LinkSet g = 0; g < table.size(); ++g)
        table[g] = coefficient_via_art(layout, g, t);
    return table;
}

TreeTopology topology_from_cut_times(const std::vector<int>& times, LinkWindow window) {
    int first = -1;
    for (int link = window.begin; link < window.end; ++link) {
        if (times[link] < 0) continue;
        if (first >= 0 && times[link] == times[first])
            throw ValidationError("simultaneous cuts inside one segment");
        if (first < 0 || times[link] < times[first]) first = link;
    }
    if (first < 0) return TreeTopology{};
    TreeTopology node;
    node.gamma = first;
    TreeTopology left = topology_from_cut_times(times, {window.begin, first});
    TreeTopology right = topology_from_cut_times(times, {first + 1, window.end});
    if (!left.empty()) node.left = std::make_shared<TreeTopology>(std::move(left));
    if (!right.empty()) node.right = std::make_shared<TreeTopology>(std::move(right));
    return node;
}

} // namespace recomb
