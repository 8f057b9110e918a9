#include "recomb/genome.hpp"

#include <algorithm>
#include <cstdlib>

namespace recomb {

std::string link_label(int link_index) {
    return std::to_string(2 * link_index + 1) + "/2";
}

namespace {

int parse_int_or_throw(const std::string& text, const std::string& label) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(text, &pos);
    } catch (const std::exception&) {
        throw ValidationError("bad link label: " + label);
    }
    if (pos != text.size()) throw ValidationError("bad link label: " + label);
    return value;
}

} // namespace

int parse_link_label(const std::string& label) {
    auto slash = label.find('/');
    if (slash == std::string::npos) {
        // plain integer index
        int idx = parse_int_or_throw(label, label);
        if (idx < 0) throw ValidationError("bad link label: " + label);
        return idx;
    }
    int num = parse_int_or_throw(label.substr(0, slash), label);
    if (label.substr(slash + 1) != "2" || num < 1 || num % 2 == 0)
        throw ValidationError("bad link label: " + label);
    return (num - 1) / 2;
}

void GenomeLayout::validate() const {
    if (n_sites < 2) throw ValidationError("layout needs at least 2 sites");
    if (static_cast<int>(rho.size()) != n_links())
        throw ValidationError("rho must have one entry per link");
    double s = 0.0;
    for (double r : rho) {
        if (!(r > 0.0)) throw ValidationError("every crossover probability must be > 0");
        s += r;
    }
    if (s > 1.0 + 1e-12) throw ValidationError("crossover probabilities must sum to at most 1");
}

GenomeLayout make_layout(int n_sites, std::vector<double> rho) {
    GenomeLayout layout{n_sites, std::move(rho)};
    layout.validate();
    return layout;
}

OrderedPartition partition_from_links(const GenomeLayout& layout, LinkSet g) {
    if (g & ~layout.full_links()) throw ValidationError("link set outside layout");
    OrderedPartition out;
    int first = 0;
    for (int i = 0; i < layout.n_links(); ++i) {
        if (g & (LinkSet(1) << i)) {
            out.parts.emplace_back(first, i);
            first = i + 1;
        }
    }
    out.parts.emplace_back(first, layout.n_sites - 1);
    return out;
}

LinkSet links_from_partition(const GenomeLayout& layout,
                             const std::vector<std::vector<int>>& parts) {
    std::vector<std::pair<int, int>> ranges;
    int covered = 0;
    for (const auto& part : parts) {
        if (part.empty()) throw ValidationError("not an ordered partition");
        auto [mn, mx] = std::minmax_element(part.begin(), part.end());
        if (*mx - *mn + 1 != static_cast<int>(part.size()))
            throw ValidationError("not an ordered partition");
        std::vector<int> sorted = part;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sorted.size(); ++k)
            if (sorted[k] != *mn + static_cast<int>(k))
                throw ValidationError("not an ordered partition");
        ranges.emplace_back(*mn, *mx);
        covered += static_cast<int>(part.size());
    }
    std::sort(ranges.begin(), ranges.end());
    if (covered != layout.n_sites || ranges.empty() || ranges.front().first != 0 ||
        ranges.back().second != layout.n_sites - 1)
        throw ValidationError("not an ordered partition");
    LinkSet g = 0;
    for (std::size_t k = 0; k + 1 < ranges.size(); ++k) {
        if (ranges[k + 1].first != ranges[k].second + 1)
            throw ValidationError("not an ordered partition");
        g |= LinkSet(1) << ranges[k].second;
    }
    return g;
}

std::vector<LinkWindow> segments_of(const GenomeLayout& layout, LinkSet g,
                                    LinkWindow window) {
    if (window.begin < 0 || window.end > layout.n_links() || window.begin > window.end)
        throw ValidationError("bad link window");
    if (g & ~window.mask()) throw ValidationError("link set outside window");
    std::vector<LinkWindow> runs;
    int run_start = window.begin;
    for (int i = window.begin; i < window.end; ++i) {
        if (g & (LinkSet(1) << i)) {
            if (i > run_start) runs.push_back({run_start, i});
            run_start = i + 1;
        }
    }
    if (window.end > run_start) runs.push_back({run_start, window.end});
    return runs;
}

void require_table_feasible(const GenomeLayout& layout) {
    if (layout.n_links() > kMaxLinks)
        throw FeasibilityError("coefficient tables are limited to " +
                               std::to_string(kMaxLinks) + " links");
}

} // namespace recomb
