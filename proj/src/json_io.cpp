#include "recomb/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace recomb {

const char* const kToolVersion = "0.1.0";

Json links_to_json(LinkSet g) {
    Json out = Json::array();
    for (int i = 0; i < 32; ++i)
        if (g & (LinkSet(1) << i)) out.push_back(link_label(i));
    return out;
}

LinkSet links_from_json(const Json& j, int n_links) {
    if (!j.is_array()) throw ValidationError("link set must be an array");
    LinkSet g = 0;
    for (const Json& item : j) {
        int link;
        if (item.is_number_integer())
            link = item.get<int>();
        else if (item.is_string())
            link = parse_link_label(item.get<std::string>());
        else
            throw ValidationError("link must be an index or a label like \"3/2\"");
        if (link < 0 || link >= n_links)
            throw ValidationError("link out of range: " + link_label(link));
        g |= LinkSet(1) << link;
    }
    return g;
}

Json layout_to_json(const GenomeLayout& layout) {
    return Json{{"n_sites", layout.n_sites}, {"rho", layout.rho}};
}

GenomeLayout layout_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n_sites") || !j.contains("rho"))
        throw ValidationError("layout must provide n_sites and rho");
    return make_layout(j.at("n_sites").get<int>(), j.at("rho").get<std::vector<double>>());
}

Json space_to_json(const TypeSpace& space) {
    return Json{{"sizes", space.sizes}};
}

TypeSpace space_from_json(const Json& j) {
    TypeSpace space;
    if (j.is_array())
        space.sizes = j.get<std::vector<int>>();
    else if (j.is_object() && j.contains("sizes"))
        space.sizes = j.at("sizes").get<std::vector<int>>();
    else
        throw ValidationError("type space must be a sizes array");
    space.validate();
    return space;
}

Json distribution_to_json(const TypeDistribution& p) {
    return Json{{"kind", "table"}, {"weights", p.weights}};
}

TypeDistribution distribution_from_json(const Json& j, const TypeSpace& space) {
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("distribution must declare a kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "table") {
        auto weights = j.at("weights").get<std::vector<double>>();
        if (static_cast<std::int64_t>(weights.size()) != space.total())
            throw ValidationError("weights length does not match the type space");
        TypeDistribution p{space, std::move(weights)};
        check_distribution(p);
        return p;
    }
    if (kind == "product") {
        auto marginals = j.at("site_marginals").get<std::vector<std::vector<double>>>();
        if (static_cast<int>(marginals.size()) != space.n_sites())
            throw ValidationError("one marginal required per site");
        for (int s = 0; s < space.n_sites(); ++s)
            if (static_cast<int>(marginals[std::size_t(s)].size()) != space.sizes[std::size_t(s)])
                throw ValidationError("marginal length does not match the site alphabet");
        return product_distribution(space, marginals);
    }
    throw ValidationError("unknown distribution kind: " + kind);
}

Json coefficient_table_to_json(const CoefficientTable& table) {
    Json entries = Json::array();
    for (LinkSet g = 0; g < table.values.size(); ++g)
        entries.push_back(Json{{"links", links_to_json(g)}, {"value", table.values[g]}});
    return Json{{"t", table.t}, {"entries", entries}};
}

CoefficientTable coefficient_table_from_json(const Json& j, const GenomeLayout& layout) {
    CoefficientTable table;
    table.layout = layout;
    table.t = j.at("t").get<long>();
    table.values.assign(std::size_t(1) << layout.n_links(), 0.0);
    std::vector<bool> seen(table.values.size(), false);
    for (const Json& entry : j.at("entries")) {
        LinkSet g = links_from_json(entry.at("links"), layout.n_links());
        if (seen[g]) throw ValidationError("duplicate link set in coefficient table");
        seen[g] = true;
        table.values[g] = entry.at("value").get<double>();
    }
    for (bool s : seen)
        if (!s) throw ValidationError("coefficient table is missing link sets");
    check_coefficient_table(table);
    return table;
}

Json topology_to_json(const TreeTopology& tree) {
    if (tree.empty()) return Json::object();
    Json out{{"gamma", link_label(tree.gamma)}};
    if (tree.left && !tree.left->empty()) out["left"] = topology_to_json(*tree.left);
    if (tree.right && !tree.right->empty()) out["right"] = topology_to_json(*tree.right);
    return out;
}

TreeTopology topology_from_json(const Json& j, int n_links) {
    if (!j.is_object()) throw ValidationError("topology must be an object");
    if (!j.contains("gamma")) {
        if (!j.empty()) throw ValidationError("topology without gamma must be empty");
        return TreeTopology{};
    }
    TreeTopology node;
    const Json& gamma = j.at("gamma");
    node.gamma = gamma.is_number_integer() ? gamma.get<int>()
                                           : parse_link_label(gamma.get<std::string>());
    if (node.gamma < 0 || node.gamma >= n_links)
        throw ValidationError("topology link out of range");
    if (j.contains("left")) {
        TreeTopology left = topology_from_json(j.at("left"), n_links);
        if (!left.empty()) {
            if (left.nodes() & ~((LinkSet(1) << node.gamma) - 1))
                throw ValidationError("left subtree must hold links below gamma");
            node.left = std::make_shared<TreeTopology>(std::move(left));
        }
    }
    if (j.contains("right")) {
        TreeTopology right = topology_from_json(j.at("right"), n_links);
        if (!right.empty()) {
            if (right.nodes() & ((LinkSet(1) << (node.gamma + 1)) - 1))
                throw ValidationError("right subtree must hold links above gamma");
            node.right = std::make_shared<TreeTopology>(std::move(right));
        }
    }
    return node;
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "layout" && key != "space" && key != "p0" && key != "steps" &&
            key != "seed" && key != "replicates" && key != "population_size" &&
            key != "threads" && key != "method")
            throw ValidationError("unknown config key: " + key);
    }
    if (!j.contains("layout")) throw ValidationError("config requires a layout");

    ExperimentConfig cfg;
    cfg.layout = layout_from_json(j.at("layout"));
    cfg.space = j.contains("space") ? space_from_json(j.at("space"))
                                    : binary_space(cfg.layout.n_sites);
    if (cfg.space.n_sites() != cfg.layout.n_sites)
        throw ValidationError("type space and layout disagree on the number of sites");
    cfg.p0 = j.contains("p0") ? distribution_from_json(j.at("p0"), cfg.space)
                              : uniform_distribution(cfg.space);
    if (j.contains("steps")) cfg.steps = j.at("steps").get<long>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<long>();
    if (j.contains("population_size"))
        cfg.population_size = j.at("population_size").get<long long>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("method")) cfg.method = j.at("method").get<std::string>();
    if (cfg.steps < 0) throw ValidationError("steps must be nonnegative");
    if (cfg.replicates < 1) throw ValidationError("replicates must be at least 1");
    if (cfg.population_size < 1) throw ValidationError("population size must be at least 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Json meta_block(const Json& config_json, std::uint64_t seed) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(config_json.dump())));
    return Json{{"config_hash", buf}, {"seed", seed}, {"version", kToolVersion}};
}

} // namespace recomb
