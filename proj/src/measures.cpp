#include "recomb/measures.hpp"

#include <algorithm>
#include <cmath>

namespace recomb {

namespace {
constexpr std::int64_t kMaxStates = std::int64_t(1) << 24;
}

std::int64_t TypeSpace::total() const {
    std::int64_t t = 1;
    for (int s : sizes) t *= s;
    return t;
}

void TypeSpace::validate() const {
    if (sizes.empty()) throw ValidationError("type space needs at least one site");
    std::int64_t t = 1;
    for (int s : sizes) {
        if (s < 1) throw ValidationError("alphabet sizes must be >= 1");
        t *= s;
        if (t > kMaxStates)
            throw FeasibilityError("type space exceeds 2^24 states");
    }
}

TypeSpace binary_space(int n_sites) {
    TypeSpace space{std::vector<int>(n_sites, 2)};
    space.validate();
    return space;
}

void check_distribution(const TypeDistribution& p, double tol) {
    if (static_cast<std::int64_t>(p.weights.size()) != p.space.total())
        throw ValidationError("weight vector does not match type space");
    double sum = 0.0;
    for (double w : p.weights) {
        if (w < -tol) throw ValidationError("negative weight in distribution");
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol)
        throw ValidationError("distribution is not normalized");
}

TypeDistribution make_distribution(TypeSpace space, std::vector<double> weights) {
    space.validate();
    TypeDistribution p{std::move(space), std::move(weights)};
    check_distribution(p, 1e-12);
    return p;
}

TypeDistribution point_mass(TypeSpace space, const std::vector<int>& letters) {
    space.validate();
    std::vector<double> w(space.total(), 0.0);
    w[index_of(space, letters)] = 1.0;
    return TypeDistribution{std::move(space), std::move(w)};
}

TypeDistribution uniform_distribution(TypeSpace space) {
    space.validate();
    std::int64_t n = space.total();
    return TypeDistribution{std::move(space), std::vector<double>(n, 1.0 / double(n))};
}

TypeDistribution product_distribution(TypeSpace space,
                                      const std::vector<std::vector<double>>& site_marginals) {
    space.validate();
    if (static_cast<int>(site_marginals.size()) != space.n_sites())
        throw ValidationError("need one marginal per site");
    for (int i = 0; i < space.n_sites(); ++i)
        if (static_cast<int>(site_marginals[i].size()) != space.sizes[i])
            throw ValidationError("marginal size mismatch at site " + std::to_string(i));
    std::vector<double> w(space.total(), 1.0);
    std::int64_t stride = space.total();
    for (int i = 0; i < space.n_sites(); ++i) {
        stride /= space.sizes[i];
        for (std::int64_t idx = 0; idx < space.total(); ++idx)
            w[idx] *= site_marginals[i][(idx / stride) % space.sizes[i]];
    }
    TypeDistribution p{std::move(space), std::move(w)};
    check_distribution(p, 1e-9);
    return p;
}

std::int64_t index_of(const TypeSpace& space, const std::vector<int>& letters) {
    if (static_cast<int>(letters.size()) != space.n_sites())
        throw ValidationError("letter count does not match type space");
    std::int64_t idx = 0;
    for (int i = 0; i < space.n_sites(); ++i) {
        if (letters[i] < 0 || letters[i] >= space.sizes[i])
            throw ValidationError("letter out of range at site " + std::to_string(i));
        idx = idx * space.sizes[i] + letters[i];
    }
    return idx;
}

std::vector<int> letters_of(const TypeSpace& space, std::int64_t index) {
    std::vector<int> letters(space.n_sites());
    for (int i = space.n_sites() - 1; i >= 0; --i) {
        letters[i] = static_cast<int>(index % space.sizes[i]);
        index /= space.sizes[i];
    }
    return letters;
}

TypeDistribution marginal(const TypeDistribution& p, const std::vector<int>& sites) {
    if (sites.empty()) throw ValidationError("empty marginal is not defined");
    check_distribution(p);
    for (std::size_t k = 0; k < sites.size(); ++k) {
        if (sites[k] < 0 || sites[k] >= p.space.n_sites())
            throw ValidationError("marginal site out of range");
        if (k > 0 && sites[k] <= sites[k - 1])
            throw ValidationError("marginal sites must be strictly increasing");
    }
    TypeSpace sub;
    for (int s : sites) sub.sizes.push_back(p.space.sizes[s]);
    std::vector<double> w(sub.total(), 0.0);
    std::vector<int> letters;
    for (std::int64_t idx = 0; idx < p.space.total(); ++idx) {
        letters = letters_of(p.space, idx);
        std::int64_t sub_idx = 0;
        for (std::size_t k = 0; k < sites.size(); ++k)
            sub_idx = sub_idx * sub.sizes[k] + letters[sites[k]];
        w[sub_idx] += p.weights[idx];
    }
    return TypeDistribution{std::move(sub), std::move(w)};
}

TypeDistribution recombinator(const TypeDistribution& p, int link_index) {
    check_distribution(p);
    int n = p.space.n_sites();
    if (link_index < 0 || link_index >= n - 1)
        throw ValidationError("link index out of range");
    // index = head * tail_size + tail, head over sites <= link, tail over sites > link
    std::int64_t tail_size = 1;
    for (int i = link_index + 1; i < n; ++i) tail_size *= p.space.sizes[i];
    std::int64_t head_size = p.space.total() / tail_size;
    std::vector<double> head(head_size, 0.0), tail(tail_size, 0.0);
    for (std::int64_t h = 0; h < head_size; ++h)
        for (std::int64_t t = 0; t < tail_size; ++t) {
            double w = p.weights[h * tail_size + t];
            head[h] += w;
            tail[t] += w;
        }
    std::vector<double> w(p.space.total());
    for (std::int64_t h = 0; h < head_size; ++h)
        for (std::int64_t t = 0; t < tail_size; ++t)
            w[h * tail_size + t] = head[h] * tail[t];
    return TypeDistribution{p.space, std::move(w)};
}

TypeDistribution composite_recombinator(const TypeDistribution& p, LinkSet g) {
    check_distribution(p);
    GenomeLayout shape{p.space.n_sites(), std::vector<double>()};
    if (g & ~shape.full_links()) throw ValidationError("link set outside layout");
    if (g == 0) return p;
    OrderedPartition parts = partition_from_links(shape, g);
    // Marginal weight vector per part, then the product measure over parts.
    std::vector<std::vector<double>> part_w;
    std::vector<std::int64_t> part_size;
    for (auto [first, last] : parts.parts) {
        std::vector<int> sites;
        for (int s = first; s <= last; ++s) sites.push_back(s);
        part_w.push_back(marginal(p, sites).weights);
        part_size.push_back(static_cast<std::int64_t>(part_w.back().size()));
    }
    // A type index splits into per-part subindices multiplicatively because
    // parts are contiguous and site 0 is most significant.
    std::vector<double> w(p.space.total(), 1.0);
    std::int64_t stride = p.space.total();
    for (std::size_t k = 0; k < parts.parts.size(); ++k) {
        stride /= part_size[k];
        for (std::int64_t idx = 0; idx < p.space.total(); ++idx)
            w[idx] *= part_w[k][(idx / stride) % part_size[k]];
    }
    return TypeDistribution{p.space, std::move(w)};
}

double sup_distance(const TypeDistribution& a, const TypeDistribution& b) {
    if (a.space != b.space) throw ValidationError("type space mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        m = std::max(m, std::abs(a.weights[i] - b.weights[i]));
    return m;
}

double tv_distance(const TypeDistribution& a, const TypeDistribution& b) {
    if (a.space != b.space) throw ValidationError("type space mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        s += std::abs(a.weights[i] - b.weights[i]);
    return 0.5 * s;
}

double l2_sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace recomb
