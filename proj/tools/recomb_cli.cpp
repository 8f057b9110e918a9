#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "recomb/ancestry.hpp"
#include "recomb/art.hpp"
#include "recomb/errors.hpp"
#include "recomb/forward.hpp"
#include "recomb/genome.hpp"
#include "recomb/json_io.hpp"
#include "recomb/measures.hpp"
#include "recomb/segmentation.hpp"
#include "recomb/thread_pool.hpp"
#include "recomb/wright_fisher.hpp"

namespace {

using namespace recomb;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long long parse_count(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || !(v >= 1.0) || v > 9e15 || v != std::floor(v))
        throw UsageError(what + " must be a positive integer, got: " + text);
    return static_cast<long long>(v);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file: " + path);
    try {
        Json j;
        in >> j;
        return j;
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write output file: " + path);
    out << text;
    if (!out) throw ValidationError("failed writing output file: " + path);
}

std::string dump_doc(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Options shared by every subcommand; each holds its own overrides.
struct CmdOptions {
    std::string config_path;
    std::string out;
    long steps = -1;
    std::string replicates;
    std::string seed;
    int threads = 0;

    std::string method;
    std::string compare_methods;
    bool check_reconstruction = false;
    std::string links;
    bool verbose = false;
    std::string validate_path;
    std::vector<std::string> pop_sizes;
    std::string summary_out;
    std::string stats_out;
    std::string freq_out;
};

struct Loaded {
    Json config_json;
    ExperimentConfig cfg;
    long steps = 0;
    long replicates = 0;
    std::uint64_t seed = 0;
    int threads = 0;
};

Loaded load(const CmdOptions& o) {
    Loaded l;
    l.config_json = read_json_file(o.config_path);
    l.cfg = config_from_json(l.config_json);
    l.steps = (o.steps >= 0) ? o.steps : l.cfg.steps;
    l.replicates = o.replicates.empty()
                       ? l.cfg.replicates
                       : static_cast<long>(parse_count(o.replicates, "--replicates"));
    l.seed = o.seed.empty() ? l.cfg.seed
                            : static_cast<std::uint64_t>(parse_count(o.seed, "--seed"));
    l.threads = (o.threads > 0) ? o.threads : l.cfg.threads;
    return l;
}

Json meta_for(const Loaded& l) { return meta_block(l.config_json, l.seed); }

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_forward(const CmdOptions& o) {
    Loaded l = load(o);
    TypeDistribution p = l.cfg.p0;
    Json trajectory = Json::array();
    trajectory.push_back(distribution_to_json(p));
    for (long s = 0; s < l.steps; ++s) {
        p = phi_step(p, l.cfg.layout);
        trajectory.push_back(distribution_to_json(p));
    }
    Json doc{{"meta", meta_for(l)}, {"steps", l.steps}, {"trajectory", trajectory}};
    if (o.check_reconstruction) {
        require_table_feasible(l.cfg.layout);
        CoefficientTable table = initial_table(l.cfg.layout);
        TypeDistribution q = l.cfg.p0;
        double max_gap = sup_distance(q, reconstruct(l.cfg.p0, table));
        for (long s = 0; s < l.steps; ++s) {
            q = phi_step(q, l.cfg.layout);
            table = recursion_step(table);
            max_gap = std::max(max_gap, sup_distance(q, reconstruct(l.cfg.p0, table)));
        }
        doc["reconstruction_max_gap"] = max_gap;
    }
    write_output(o.out, dump_doc(doc));
    return 0;
}

struct MethodResult {
    std::vector<double> values;
    std::vector<double> std_error; // only for mc
};

MethodResult compute_table(const Loaded& l, const std::string& method) {
    MethodResult r;
    if (method == "recursion") {
        r.values = coefficients_by_recursion(l.cfg.layout, l.steps).values;
    } else if (method == "art") {
        r.values = coefficients_via_art(l.cfg.layout, l.steps);
    } else if (method == "oracle") {
        r.values = exact_distribution(l.cfg.layout, l.steps, l.cfg.layout.all_links());
    } else if (method == "mc") {
        EmpiricalDistribution emp =
            mc_distribution(l.cfg.layout, l.steps, l.replicates, l.seed, l.threads);
        r.values = emp.freq;
        r.std_error = emp.std_error;
    } else {
        throw UsageError("unknown method: " + method +
                         " (expected recursion, art, oracle, or mc)");
    }
    return r;
}

Json compare_report(const Loaded& l, const std::vector<std::string>& methods) {
    if (methods.size() < 2) throw UsageError("comparison needs at least two methods");
    std::vector<MethodResult> results;
    results.reserve(methods.size());
    for (const std::string& m : methods) results.push_back(compute_table(l, m));

    const std::size_t size = results.front().values.size();
    Json entries = Json::array();
    double max_abs_gap = 0.0;
    for (LinkSet g = 0; g < size; ++g) {
        Json values = Json::object();
        double lo = results.front().values[g];
        double hi = lo;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            double v = results[m].values[g];
            values[methods[m]] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (!results[m].std_error.empty())
                values[methods[m] + "_std_error"] = results[m].std_error[g];
        }
        double gap = hi - lo;
        max_abs_gap = std::max(max_abs_gap, gap);
        entries.push_back(Json{{"links", links_to_json(g)}, {"values", values}, {"max_gap", gap}});
    }
    return Json{{"meta", meta_for(l)},
                {"t", l.steps},
                {"methods", methods},
                {"max_abs_gap", max_abs_gap},
                {"entries", entries}};
}

int run_coeffs(const CmdOptions& o) {
    Loaded l = load(o);
    if (!o.compare_methods.empty()) {
        write_output(o.out, dump_doc(compare_report(l, split_list(o.compare_methods))));
        return 0;
    }
    std::string method = o.method.empty() ? l.cfg.method : o.method;
    MethodResult r = compute_table(l, method);
    CoefficientTable table{l.cfg.layout, l.steps, r.values};
    Json doc = coefficient_table_to_json(table);
    doc["meta"] = meta_for(l);
    doc["method"] = method;
    if (!r.std_error.empty()) {
        doc["replicates"] = l.replicates;
        for (std::size_t g = 0; g < r.std_error.size(); ++g)
            doc["entries"][g]["std_error"] = r.std_error[g];
    }
    write_output(o.out, dump_doc(doc));
    return 0;
}

int run_compare(const CmdOptions& o) {
    Loaded l = load(o);
    std::string methods = o.compare_methods.empty() ? "recursion,art,oracle" : o.compare_methods;
    write_output(o.out, dump_doc(compare_report(l, split_list(methods))));
    return 0;
}

int validate_trajectories(const CmdOptions& o, const Loaded& l) {
    std::ifstream in(o.validate_path);
    if (!in) throw ValidationError("cannot read trajectory file: " + o.validate_path);
    const int n_links = l.cfg.layout.n_links();
    long records = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json rec;
        try {
            rec = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ValidationError(std::string("trajectory line is not valid JSON: ") + e.what());
        }
        std::vector<int> times(std::size_t(n_links), -1);
        for (const Json& cut : rec.at("cuts")) {
            const Json& raw = cut.at("link");
            int link = raw.is_number_integer() ? raw.get<int>()
                                               : parse_link_label(raw.get<std::string>());
            if (link < 0 || link >= n_links)
                throw ValidationError("trajectory cut link out of range");
            if (times[std::size_t(link)] >= 0)
                throw ValidationError("trajectory cuts the same link twice");
            times[std::size_t(link)] = cut.at("tau").get<int>();
        }
        TreeTopology rebuilt = topology_from_cut_times(times, l.cfg.layout.all_links());
        if (topology_to_json(rebuilt) != rec.at("topology"))
            throw ValidationError("annotated shape does not match the cut record at replicate " +
                                  rec.at("replicate").dump());
        if (links_from_json(rec.at("final"), n_links) != rebuilt.nodes())
            throw ValidationError("final link set does not match the cut record at replicate " +
                                  rec.at("replicate").dump());
        records += 1;
    }
    Json doc{{"meta", meta_for(l)}, {"records", records}, {"status", "ok"}};
    write_output(o.out, dump_doc(doc));
    return 0;
}

int run_trees(const CmdOptions& o) {
    Loaded l = load(o);
    if (!o.validate_path.empty()) return validate_trajectories(o, l);

    LinkSet g = l.cfg.layout.full_links();
    if (!o.links.empty()) {
        Json arr = Json::array();
        for (const std::string& item : split_list(o.links)) arr.push_back(item);
        g = links_from_json(arr, l.cfg.layout.n_links());
    }
    Json trees = Json::array();
    double total = 0.0;
    for (const TreeTopology& tree : enumerate_topologies(g)) {
        double p = tree_probability(l.cfg.layout, tree, l.steps);
        total += p;
        Json entry{{"topology", topology_to_json(tree)}, {"probability", p}};
        if (o.verbose) {
            Json terms = Json::array();
            for (const TreeProbabilityTerm& term :
                 tree_probability_terms(l.cfg.layout, tree, l.steps, l.cfg.layout.all_links()))
                terms.push_back(Json{{"h", links_to_json(term.h)},
                                     {"sign", term.sign},
                                     {"bracket", term.bracket},
                                     {"f", term.f},
                                     {"value", term.value()}});
            entry["terms"] = terms;
        }
        trees.push_back(entry);
    }
    Json doc{{"meta", meta_for(l)}, {"t", l.steps},       {"links", links_to_json(g)},
             {"count", trees.size()}, {"total_probability", total}, {"trees", trees}};
    write_output(o.out, dump_doc(doc));
    return 0;
}

int run_simulate_wf(const CmdOptions& o) {
    Loaded l = load(o);
    std::vector<long long> pop_sizes;
    for (const std::string& item : o.pop_sizes)
        for (const std::string& part : split_list(item))
            pop_sizes.push_back(parse_count(part, "--pop-size"));
    if (pop_sizes.empty()) pop_sizes.push_back(l.cfg.population_size);

    if (!o.out.empty()) {
        if (pop_sizes.size() > 1)
            throw UsageError("per-replicate CSV output needs a single --pop-size");
        SimulationConfig scfg;
        scfg.seed = l.seed;
        scfg.replicates = l.replicates;
        scfg.population_size = pop_sizes.front();
        scfg.steps = l.steps;
        scfg.threads = l.threads;
        WfRun run = run_wf(l.cfg.layout, l.cfg.p0, scfg);
        std::ostringstream csv;
        Json meta = meta_for(l);
        csv << "# config_hash=" << meta.at("config_hash").get<std::string>() << "\n";
        csv << "# seed=" << l.seed << "\n";
        csv << "# version=" << kToolVersion << "\n";
        csv << "# population_size=" << pop_sizes.front() << "\n";
        csv << "replicate,t,type_index,freq\n";
        for (std::size_t r = 0; r < run.trajectories.size(); ++r)
            for (std::size_t s = 0; s < run.trajectories[r].size(); ++s) {
                const std::vector<double>& freq = run.trajectories[r][s];
                for (std::size_t x = 0; x < freq.size(); ++x)
                    csv << r << "," << s << "," << x << "," << format_double(freq[x]) << "\n";
            }
        write_output(o.out, csv.str());
    }

    Json mse = Json::array();
    for (long long n : pop_sizes) {
        MseSummary s = wf_mse(l.cfg.layout, l.cfg.p0, n, l.steps, l.replicates, l.seed,
                              l.threads);
        mse.push_back(Json{{"population_size", n},
                           {"mean_sq_error", s.mean_sq_error},
                           {"std_error", s.std_error}});
    }
    Json doc{{"meta", meta_for(l)},
             {"steps", l.steps},
             {"replicates", l.replicates},
             {"mse_vs_n", mse}};
    if (!o.summary_out.empty())
        write_output(o.summary_out, dump_doc(doc));
    else if (o.out.empty())
        write_output("", dump_doc(doc));
    return 0;
}

Json parts_to_json(const PartitionState& state) {
    Json parts = Json::array();
    for (SiteMask part : state.parts) {
        Json sites = Json::array();
        for (int s = 0; s < 32; ++s)
            if (part & (SiteMask(1) << s)) sites.push_back(s);
        parts.push_back(sites);
    }
    return parts;
}

int run_simulate_ancestry(const CmdOptions& o) {
    Loaded l = load(o);
    long long n = l.cfg.population_size;
    if (!o.pop_sizes.empty()) {
        std::vector<std::string> all;
        for (const std::string& item : o.pop_sizes)
            for (const std::string& part : split_list(item)) all.push_back(part);
        if (all.size() != 1) throw UsageError("ancestry simulation takes a single --pop-size");
        n = parse_count(all.front(), "--pop-size");
    }

    std::ostringstream lines;
    for (long rep = 0; rep < l.replicates; ++rep) {
        RngStream rng(l.seed, std::uint64_t(rep));
        AncestryRun run = run_ancestry(l.cfg.layout, n, l.steps, rng);
        for (std::size_t tau = 0; tau < run.sigma.size(); ++tau) {
            lines << Json{{"replicate", rep},
                          {"tau", tau},
                          {"stage", "sigma"},
                          {"parts", parts_to_json(run.sigma[tau])},
                          {"parent_ids", run.sigma[tau].parent_ids}}
                         .dump()
                  << "\n";
            if (tau < run.refined.size())
                lines << Json{{"replicate", rep},
                              {"tau", tau},
                              {"stage", "refined"},
                              {"parts", parts_to_json(run.refined[tau])},
                              {"parent_ids", run.refined[tau].parent_ids}}
                             .dump()
                      << "\n";
        }
        lines << Json{{"replicate", rep}, {"coalescence_free", run.coalescence_free}}.dump()
              << "\n";
    }
    write_output(o.out, lines.str());

    if (!o.stats_out.empty()) {
        CoalescenceFreeRate rate =
            coalescence_free_rate(l.cfg.layout, n, l.steps, l.replicates, l.seed, l.threads);
        Json doc{{"meta", meta_for(l)},
                 {"population_size", n},
                 {"steps", l.steps},
                 {"replicates", l.replicates},
                 {"coalescence_free_rate", rate.rate},
                 {"std_error", rate.std_error},
                 {"lower_bound", coalescence_free_lower_bound(l.cfg.layout, n, l.steps)}};
        write_output(o.stats_out, dump_doc(doc));
    }
    return 0;
}

int run_simulate_segmentation(const CmdOptions& o) {
    Loaded l = load(o);
    std::ostringstream lines;
    for (long rep = 0; rep < l.replicates; ++rep) {
        RngStream rng(l.seed, std::uint64_t(rep));
        SegmentationTrajectory traj = simulate_segmentation(l.cfg.layout, l.steps, rng);
        Json cuts = Json::array();
        for (std::size_t i = 0; i < traj.new_cuts.size(); ++i)
            for (int link = 0; link < l.cfg.layout.n_links(); ++link)
                if (traj.new_cuts[i] & (LinkSet(1) << link))
                    cuts.push_back(Json{{"tau", i + 1}, {"link", link_label(link)}});
        std::vector<int> times = cut_times(traj, l.cfg.layout.n_links());
        TreeTopology topo = topology_from_cut_times(times, l.cfg.layout.all_links());
        lines << Json{{"replicate", rep},
                      {"final", links_to_json(traj.final_state())},
                      {"cuts", cuts},
                      {"topology", topology_to_json(topo)}}
                     .dump()
              << "\n";
    }
    write_output(o.out, lines.str());

    if (!o.freq_out.empty()) {
        EmpiricalDistribution emp =
            mc_distribution(l.cfg.layout, l.steps, l.replicates, l.seed, l.threads);
        Json entries = Json::array();
        for (LinkSet g = 0; g < emp.freq.size(); ++g)
            entries.push_back(Json{{"links", links_to_json(g)},
                                   {"frequency", emp.freq[g]},
                                   {"std_error", emp.std_error[g]}});
        Json doc{{"meta", meta_for(l)},
                 {"t", l.steps},
                 {"replicates", l.replicates},
                 {"entries", entries}};
        write_output(o.freq_out, dump_doc(doc));
    }
    return 0;
}

void add_common(CLI::App* cmd, CmdOptions& o, bool with_steps = true) {
    cmd->add_option("--config", o.config_path, "JSON config file")->required();
    cmd->add_option("--out", o.out, "output file (default: stdout)");
    if (with_steps) cmd->add_option("--steps", o.steps, "time horizon override");
    cmd->add_option("--seed", o.seed, "seed override");
    cmd->add_option("--threads", o.threads, "worker count (default: RECOMB_THREADS or hardware)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-crossover recombination dynamics toolkit"};
    app.require_subcommand(1);

    CmdOptions fwd, coeffs, trees, compare, sim_wf, sim_anc, sim_seg;
    std::function<int()> action;

    CLI::App* cmd = app.add_subcommand("forward", "deterministic evolution of the type distribution");
    add_common(cmd, fwd);
    cmd->add_flag("--check-reconstruction", fwd.check_reconstruction,
                  "report the max gap between direct evolution and the coefficient expansion");
    cmd->callback([&] { action = [&] { return run_forward(fwd); }; });

    cmd = app.add_subcommand("coeffs", "coefficient table a_G(t) by one or several methods");
    add_common(cmd, coeffs);
    cmd->add_option("--method", coeffs.method, "recursion, art, oracle, or mc");
    cmd->add_option("--compare", coeffs.compare_methods,
                    "comma-separated methods for a diff report");
    cmd->add_option("--replicates", coeffs.replicates, "replicates for the mc method");
    cmd->callback([&] { action = [&] { return run_coeffs(coeffs); }; });

    cmd = app.add_subcommand("trees", "shape probabilities, or validation of simulated trajectories");
    add_common(cmd, trees);
    cmd->add_option("--links", trees.links, "link set, e.g. \"1/2,3/2\" (default: all links)");
    cmd->add_flag("--verbose", trees.verbose, "include the per-H terms of the closed form");
    cmd->add_option("--validate", trees.validate_path,
                    "check the shape annotations of a simulated trajectory file");
    cmd->callback([&] { action = [&] { return run_trees(trees); }; });

    cmd = app.add_subcommand("compare", "cross-method coefficient comparison report");
    add_common(cmd, compare);
    cmd->add_option("--methods", compare.compare_methods,
                    "comma-separated methods (default: recursion,art,oracle)");
    cmd->add_option("--replicates", compare.replicates, "replicates for the mc method");
    cmd->callback([&] { action = [&] { return run_compare(compare); }; });

    CLI::App* sim = app.add_subcommand("simulate", "stochastic simulation");
    sim->require_subcommand(1);

    cmd = sim->add_subcommand("wf", "finite-population forward simulation");
    add_common(cmd, sim_wf);
    cmd->add_option("--replicates", sim_wf.replicates, "replicate count");
    cmd->add_option("--pop-size", sim_wf.pop_sizes,
                    "population size(s); a comma-separated list yields an MSE-vs-N table");
    cmd->add_option("--summary-out", sim_wf.summary_out, "aggregate JSON summary file");
    cmd->callback([&] { action = [&] { return run_simulate_wf(sim_wf); }; });

    cmd = sim->add_subcommand("ancestry", "finite-population backward partitioning process");
    add_common(cmd, sim_anc);
    cmd->add_option("--replicates", sim_anc.replicates, "replicate count");
    cmd->add_option("--pop-size", sim_anc.pop_sizes, "population size");
    cmd->add_option("--stats-out", sim_anc.stats_out, "coalescence statistics JSON file");
    cmd->callback([&] { action = [&] { return run_simulate_ancestry(sim_anc); }; });

    cmd = sim->add_subcommand("segmentation", "infinite-population backward segmentation process");
    add_common(cmd, sim_seg);
    cmd->add_option("--replicates", sim_seg.replicates, "replicate count");
    cmd->add_option("--freq-out", sim_seg.freq_out, "empirical link-set frequency JSON file");
    cmd->callback([&] { action = [&] { return run_simulate_segmentation(sim_seg); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return (code == 0) ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const FeasibilityError& e) {
        std::cerr << "feasibility error: " << e.what() << "\n";
        return 3;
    }

    try {
        return action ? action() : 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const FeasibilityError& e) {
        std::cerr << "feasibility error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
