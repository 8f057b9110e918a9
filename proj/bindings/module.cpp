#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "recomb/ancestry.hpp"
#include "recomb/art.hpp"
#include "recomb/errors.hpp"
#include "recomb/forward.hpp"
#include "recomb/genome.hpp"
#include "recomb/measures.hpp"
#include "recomb/segmentation.hpp"
#include "recomb/wright_fisher.hpp"

namespace py = pybind11;
using namespace recomb;

namespace {

LinkSet mask_from_links(const std::vector<int>& links, int n_links) {
    LinkSet g = 0;
    for (int link : links) {
        if (link < 0 || link >= n_links)
            throw ValidationError("link out of range: " + std::to_string(link));
        g |= LinkSet(1) << link;
    }
    return g;
}

std::vector<int> links_of_mask(LinkSet g) {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (g & (LinkSet(1) << i)) out.push_back(i);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "single-crossover recombination dynamics";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<FeasibilityError>(m, "FeasibilityError");

    py::class_<GenomeLayout>(m, "GenomeLayout")
        .def(py::init([](int n_sites, std::vector<double> rho) {
                 return make_layout(n_sites, std::move(rho));
             }),
             py::arg("n_sites"), py::arg("rho"))
        .def_readonly("n_sites", &GenomeLayout::n_sites)
        .def_readonly("rho", &GenomeLayout::rho)
        .def_property_readonly("n_links", &GenomeLayout::n_links);

    py::class_<TypeSpace>(m, "TypeSpace")
        .def(py::init([](std::vector<int> sizes) {
                 TypeSpace space{std::move(sizes)};
                 space.validate();
                 return space;
             }),
             py::arg("sizes"))
        .def_readonly("sizes", &TypeSpace::sizes)
        .def_property_readonly("total", &TypeSpace::total);

    py::class_<TypeDistribution>(m, "TypeDistribution")
        .def_readonly("space", &TypeDistribution::space)
        .def_readonly("weights", &TypeDistribution::weights);

    m.def("link_label", &link_label, py::arg("link_index"));
    m.def("parse_link_label", &parse_link_label, py::arg("label"));
    m.def("binary_space", &binary_space, py::arg("n_sites"));
    m.def("make_distribution", &make_distribution, py::arg("space"), py::arg("weights"));
    m.def("uniform_distribution", &uniform_distribution, py::arg("space"));
    m.def("point_mass", &point_mass, py::arg("space"), py::arg("letters"));
    m.def("product_distribution", &product_distribution, py::arg("space"),
          py::arg("site_marginals"));
    m.def("marginal", &marginal, py::arg("p"), py::arg("sites"));
    m.def("recombinator", &recombinator, py::arg("p"), py::arg("link_index"));
    m.def(
        "composite_recombinator",
        [](const TypeDistribution& p, const std::vector<int>& links) {
            return composite_recombinator(p, mask_from_links(links, p.space.n_sites() - 1));
        },
        py::arg("p"), py::arg("links"));
    m.def("sup_distance", &sup_distance, py::arg("a"), py::arg("b"));
    m.def("tv_distance", &tv_distance, py::arg("a"), py::arg("b"));

    m.def("phi_step", &phi_step, py::arg("p"), py::arg("layout"));
    m.def("evolve", &evolve, py::arg("p0"), py::arg("layout"), py::arg("t"));
    m.def(
        "reconstruct",
        [](const TypeDistribution& p0, const GenomeLayout& layout, long t) {
            return reconstruct(p0, coefficients_by_recursion(layout, t));
        },
        py::arg("p0"), py::arg("layout"), py::arg("t"));

    m.def(
        "coefficients_by_recursion",
        [](const GenomeLayout& layout, long t) {
            return coefficients_by_recursion(layout, t).values;
        },
        py::arg("layout"), py::arg("t"),
        "a_G(t) for every link set, indexed by bitmask");
    m.def("coefficients_via_art", &coefficients_via_art, py::arg("layout"), py::arg("t"));
    m.def(
        "exact_distribution",
        [](const GenomeLayout& layout, long t) {
            return exact_distribution(layout, t, layout.all_links());
        },
        py::arg("layout"), py::arg("t"));
    m.def(
        "mc_distribution",
        [](const GenomeLayout& layout, long t, long long replicates, std::uint64_t seed,
           int threads) {
            EmpiricalDistribution emp = mc_distribution(layout, t, replicates, seed, threads);
            return py::make_tuple(emp.freq, emp.std_error);
        },
        py::arg("layout"), py::arg("t"), py::arg("replicates"), py::arg("seed"),
        py::arg("threads") = 0, "returns (frequencies, standard errors)");
    m.def(
        "coefficient_via_art",
        [](const GenomeLayout& layout, const std::vector<int>& links, long t) {
            return coefficient_via_art(layout, mask_from_links(links, layout.n_links()), t);
        },
        py::arg("layout"), py::arg("links"), py::arg("t"));
    m.def(
        "topology_count",
        [](const std::vector<int>& links) {
            return enumerate_topologies(mask_from_links(links, 31)).size();
        },
        py::arg("links"));
    m.def(
        "tree_probabilities",
        [](const GenomeLayout& layout, const std::vector<int>& links, long t) {
            std::vector<std::pair<std::string, double>> out;
            for (const TreeTopology& tree :
                 enumerate_topologies(mask_from_links(links, layout.n_links())))
                out.emplace_back(tree.key(), tree_probability(layout, tree, t));
            return out;
        },
        py::arg("layout"), py::arg("links"), py::arg("t"),
        "list of (canonical shape, probability)");
    m.def("marginal_check",
          [](const GenomeLayout& layout, long t, int begin, int end) {
              return marginal_check(layout, t, LinkWindow{begin, end});
          },
          py::arg("layout"), py::arg("t"), py::arg("begin"), py::arg("end"));

    m.def(
        "wf_mse",
        [](const GenomeLayout& layout, const TypeDistribution& p0, long long population_size,
           long steps, long replicates, std::uint64_t seed, int threads) {
            MseSummary s = wf_mse(layout, p0, population_size, steps, replicates, seed, threads);
            return py::make_tuple(s.mean_sq_error, s.std_error);
        },
        py::arg("layout"), py::arg("p0"), py::arg("population_size"), py::arg("steps"),
        py::arg("replicates"), py::arg("seed"), py::arg("threads") = 0,
        "returns (mean squared deviation from the deterministic limit, standard error)");
    m.def(
        "coalescence_free_rate",
        [](const GenomeLayout& layout, long long population_size, long t, long replicates,
           std::uint64_t seed, int threads) {
            CoalescenceFreeRate r =
                coalescence_free_rate(layout, population_size, t, replicates, seed, threads);
            return py::make_tuple(r.rate, r.std_error);
        },
        py::arg("layout"), py::arg("population_size"), py::arg("t"), py::arg("replicates"),
        py::arg("seed"), py::arg("threads") = 0);
    m.def("coalescence_free_lower_bound", &coalescence_free_lower_bound, py::arg("layout"),
          py::arg("population_size"), py::arg("t"));
    m.def(
        "partition_law",
        [](const GenomeLayout& layout, long long population_size, long t, long replicates,
           std::uint64_t seed, int threads) {
            PartitionLaw law =
                partition_law(layout, population_size, t, replicates, seed, threads);
            return py::make_tuple(law.ordered_freq, law.unordered_freq);
        },
        py::arg("layout"), py::arg("population_size"), py::arg("t"), py::arg("replicates"),
        py::arg("seed"), py::arg("threads") = 0,
        "returns (ordered-partition frequencies by link bitmask, non-ordered frequency)");
    m.def("ancestral_type_frequencies", &ancestral_type_frequencies, py::arg("layout"),
          py::arg("p0"), py::arg("population_size"), py::arg("t"), py::arg("replicates"),
          py::arg("seed"), py::arg("threads") = 0);

    m.def("links_of_mask", &links_of_mask, py::arg("mask"));
}
