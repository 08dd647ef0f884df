#include "graphlim/commands.hpp"

#include "graphlim/connection.hpp"
#include "graphlim/cutnorm.hpp"
#include "graphlim/densities.hpp"
#include "graphlim/errors.hpp"
#include "graphlim/io.hpp"
#include "graphlim/regularity.hpp"
#include "graphlim/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <ostream>
#include <sstream>

namespace graphlim {

namespace
{
    using io::format_number;

    struct Output
    {
        std::ostream & stream;
        std::string path;

        void emit(const std::string & text) const
        {
            if (path.empty())
                stream << text;
            else
                io::write_file(path, text);
        }
    };

    GraphParameter load_parameter(const std::string & spec)
    {
        if (spec == "matchings")
            return GraphParameter::matching_count();
        auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw ParseError("parameter must be graphon:<spec>, graph:<file> or matchings");
        std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
        if (kind == "graph")
            return GraphParameter::hom_density(io::as_weighted(io::parse_graph_file(arg)));
        if (kind == "graphon") {
            Graphon w = io::load_graphon(arg);
            if (auto step = std::get_if<StepGraphon>(&w))
                return density_parameter(*step);
            return density_parameter(std::get<KernelGraphon>(w).to_step());
        }
        throw ParseError("unknown parameter kind '" + kind + "'");
    }

    StepGraphon load_step(const std::string & spec)
    {
        Graphon w = io::load_graphon(spec);
        if (auto step = std::get_if<StepGraphon>(&w))
            return *step;
        return std::get<KernelGraphon>(w).to_step();
    }

    SimpleGraph load_simple(const std::string & path)
    {
        auto g = io::parse_graph_file(path);
        if (auto s = std::get_if<SimpleGraph>(&g))
            return *s;
        throw ParseError(path + ": expected an edge list");
    }

    std::vector<int> parse_int_list(const std::string & text)
    {
        std::vector<int> out;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');) {
            try {
                std::size_t used = 0;
                int v = std::stoi(item, &used);
                if (used != item.size() || v < 1)
                    throw std::invalid_argument(item);
                out.push_back(v);
            }
            catch (const std::logic_error &) {
                throw ParseError("'" + item + "' is not a positive integer");
            }
        }
        if (out.empty())
            throw ParseError("empty size list");
        return out;
    }

    std::string one_based(const std::vector<int> & v)
    {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? " " : "") + std::to_string(v[i] + 1);
        return s;
    }
}

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"graphlim: dense graph limits laboratory"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker cap (0 = available parallelism)");

    int status = 0;
    std::string out_path;

    // density
    auto * density = app.add_subcommand("density", "Homomorphism counts and densities of F in G");
    std::string f_path, g_path, mode = "t";
    double budget = default_count_budget;
    density->add_option("--F", f_path, "Edge list of F")->required()->check(CLI::ExistingFile);
    density->add_option("--G", g_path, "Edge list or weighted JSON of G")->required()->check(CLI::ExistingFile);
    density->add_option("--mode", mode)->check(CLI::IsMember({"hom", "inj", "ind", "t", "t0", "t1"}));
    density->add_option("--budget", budget, "Enumeration budget");
    density->callback([&] {
        auto F = load_simple(f_path);
        auto G = io::as_weighted(io::parse_graph_file(g_path));
        double v = mode == "hom" ? hom(F, G, budget)
            : mode == "inj"      ? inj(F, G, budget)
            : mode == "ind"      ? ind(F, G, budget)
            : mode == "t"        ? t(F, G, budget)
            : mode == "t0"       ? t0(F, G, budget)
                                 : t1(F, G, budget);
        out << format_number(v) << "\n";
    });

    // graphon-density
    auto * gdensity = app.add_subcommand("graphon-density", "t(F,W) exactly, by grid quadrature, or by Monte Carlo");
    std::string graphon_spec;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 0;
    int grid = 256;
    gdensity->add_option("--graphon", graphon_spec, "Stepfunction JSON, grid CSV, constant:<p> or half-graph")->required();
    gdensity->add_option("--F", f_path)->required()->check(CLI::ExistingFile);
    auto * mc_opt = gdensity->add_option("--mc", mc_samples, "Monte-Carlo sample count");
    gdensity->add_option("--seed", seed)->needs(mc_opt);
    gdensity->add_option("--grid", grid, "Grid resolution for kernels");
    gdensity->callback([&] {
        auto F = load_simple(f_path);
        Graphon w = io::load_graphon(graphon_spec);
        if (mc_samples > 0) {
            auto est = t_mc(F, w, mc_samples, seed, threads);
            out << format_number(est.estimate) << " " << format_number(est.std_error) << "\n";
            return;
        }
        double v = std::holds_alternative<StepGraphon>(w) ? t_step(F, std::get<StepGraphon>(w))
                                                          : t_grid(F, std::get<KernelGraphon>(w), grid);
        out << format_number(v) << "\n";
    });

    // sample
    auto * sample = app.add_subcommand("sample", "Draw a W-random graph");
    int n = 0;
    bool latents = false;
    sample->add_option("--graphon", graphon_spec)->required();
    sample->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed)->required();
    sample->add_flag("--emit-latents", latents, "Append the latents as '#' comment lines");
    sample->add_option("--out", out_path);
    sample->callback([&] {
        auto record = sample_wrandom(io::load_graphon(graphon_spec), n, seed, latents);
        std::string text = io::serialize_edge_list(record.graph);
        if (record.latents) {
            text += "# latents\n";
            for (std::size_t i = 0; i < record.latents->size(); ++i)
                text += "# " + std::to_string(i + 1) + " " + format_number((*record.latents)[i]) + "\n";
        }
        Output{out, out_path}.emit(text);
    });

    // converge
    auto * converge = app.add_subcommand("converge", "Deviation of t(F,G(n,W)) from t(F,W) over growing n");
    std::string n_list;
    int trials = 0;
    converge->add_option("--graphon", graphon_spec)->required();
    converge->add_option("--F", f_path)->required()->check(CLI::ExistingFile);
    converge->add_option("--n-list", n_list, "Comma-separated sizes")->required();
    converge->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    converge->add_option("--seed", seed)->required();
    converge->add_option("--out", out_path);
    converge->add_option("--budget", budget, "Enumeration budget per sample");
    converge->callback([&] {
        auto rows = convergence_experiment(io::load_graphon(graphon_spec), load_simple(f_path), parse_int_list(n_list),
            trials, seed, threads, budget);
        std::string text = "n,trial,t0,t,deviation\n";
        for (const auto & r : rows)
            text += std::to_string(r.n) + "," + std::to_string(r.trial) + "," + format_number(r.t0) + "," +
                format_number(r.t) + "," + format_number(r.deviation) + "\n";
        Output{out, out_path}.emit(text);
    });

    // concentration
    auto * conc = app.add_subcommand("concentration", "Tail frequency and variance of densities of G(n,W)");
    double eps = 0.1;
    conc->add_option("--graphon", graphon_spec)->required();
    conc->add_option("--F", f_path)->required()->check(CLI::ExistingFile);
    conc->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    conc->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    conc->add_option("--eps", eps)->required();
    conc->add_option("--seed", seed)->required();
    conc->add_option("--out", out_path);
    conc->add_option("--budget", budget, "Enumeration budget per sample");
    conc->callback([&] {
        auto r = concentration_experiment(load_step(graphon_spec), load_simple(f_path), n, trials, eps, seed, threads,
            budget);
        Output{out, out_path}.emit("empirical_tail,azuma_bound,variance,var_bound\n" + format_number(r.empirical_tail) +
            "," + format_number(r.azuma_bound) + "," + format_number(r.variance) + "," + format_number(r.var_bound) + "\n");
    });

    // cutnorm
    auto * cut = app.add_subcommand("cutnorm", "Cut norm of a CSV matrix");
    std::string matrix_path;
    bool exact = false, heuristic = false;
    int restarts = 32;
    cut->add_option("--matrix", matrix_path)->required()->check(CLI::ExistingFile);
    auto * exact_flag = cut->add_flag("--exact", exact);
    auto * heur_flag = cut->add_flag("--heuristic", heuristic)->excludes(exact_flag);
    cut->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
    cut->add_option("--seed", seed);
    (void) heur_flag;
    cut->callback([&] {
        auto m = io::parse_csv_matrix(io::read_file(matrix_path));
        CutWitness w = exact ? cutnorm_exact(m) : heuristic ? cutnorm_heuristic(m, restarts, seed, threads) : cutnorm(m, restarts, seed);
        out << "value " << format_number(w.value) << "\n"
            << "method " << (w.exact ? "exact" : "heuristic") << "\n"
            << "rows " << one_based(w.rows) << "\n"
            << "cols " << one_based(w.cols) << "\n";
    });

    // regularity
    auto * reg = app.add_subcommand("regularity", "Weak regular partition of a graph");
    std::string graph_path;
    bool balanced = false;
    reg->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    reg->add_option("--eps", eps)->required();
    reg->add_option("--seed", seed)->required();
    reg->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
    reg->add_flag("--balance", balanced, "Post-process to blocks of equal size");
    reg->add_option("--out", out_path);
    reg->callback([&] {
        auto g = load_simple(graph_path);
        RegularityOptions options;
        options.eps = eps;
        options.seed = seed;
        options.restarts = restarts;
        options.threads = threads;
        auto result = weak_regular_partition(g, options);

        nlohmann::json j;
        Partition p = result.partition;
        Eigen::MatrixXd q = result.q;
        if (balanced) {
            double before = kpq_distance(g, p, q, restarts, seed);
            p = balance(p);
            q = density_matrix(g, p);
            j["balance_overhead"] = kpq_distance(g, p, q, restarts, seed) - before;
        }
        auto blocks = nlohmann::json::array();
        for (const auto & b : p.blocks()) {
            auto block = nlohmann::json::array();
            for (int v : b)
                block.push_back(v + 1);
            blocks.push_back(block);
        }
        auto qj = nlohmann::json::array();
        for (Eigen::Index a = 0; a < q.rows(); ++a) {
            auto row = nlohmann::json::array();
            for (Eigen::Index b = 0; b < q.cols(); ++b)
                row.push_back(q(a, b));
            qj.push_back(row);
        }
        j["blocks"] = blocks;
        j["Q"] = qj;
        j["certified"] = result.certificate.certified;
        j["heuristic_certificate"] = result.certificate.heuristic;
        j["best_deviation"] = result.certificate.best_deviation;
        j["rounds"] = result.certificate.rounds;
        Output{out, out_path}.emit(j.dump() + "\n");
        if (result.certificate.cap_exceeded) {
            err << "block cap exceeded before certification\n";
            status = static_cast<int>(ErrorKind::Budget);
        }
    });

    // connection
    auto * conn = app.add_subcommand("connection", "Connection matrix and its PSD verdict");
    std::string param_spec, dump_path;
    int k = 0, max_nodes = 0;
    bool truncated = false;
    double tol = 1e-8;
    conn->add_option("--param", param_spec, "graphon:<spec>, graph:<file> or matchings")->required();
    conn->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);
    conn->add_flag("--truncated", truncated);
    conn->add_option("--max-nodes", max_nodes);
    conn->add_option("--tol", tol);
    conn->add_option("--dump", dump_path, "Write the matrix as CSV");
    conn->callback([&] {
        auto f = load_parameter(param_spec);
        ConnectionMatrix m = truncated ? truncated_m(f, k, max_nodes ? max_nodes : k + 1) : m0_matrix(f, k);
        auto verdict = psd_check(m, tol);
        out << "index size: " << m.index.size() << "\n"
            << "min eigenvalue: " << format_number(verdict.min_eigenvalue) << "\n"
            << "PSD: " << (verdict.is_psd ? "true" : "false") << "\n";
        if (! dump_path.empty())
            io::write_file(dump_path, io::serialize_csv_matrix(m.entries));
    });

    // dagger
    auto * dag = app.add_subcommand("dagger", "f-dagger of a parameter at F");
    dag->add_option("--param", param_spec)->required();
    dag->add_option("--F", f_path)->required()->check(CLI::ExistingFile);
    dag->callback([&] { out << format_number(dagger(load_parameter(param_spec), load_simple(f_path))) << "\n"; });

    // model-check
    auto * model = app.add_subcommand("model-check", "Consistency of exact random graph models on [n] and [n-1]");
    auto * graphon_opt = model->add_option("--graphon", graphon_spec, "Stepfunction defining G(n,W)");
    model->add_option("--param", param_spec, "Parameter defining the f-dagger model")->excludes(graphon_opt);
    model->add_option("--n", n)->required()->check(CLI::Range(2, 5));
    model->callback([&] {
        RandomGraphModel big, small;
        if (! graphon_spec.empty()) {
            auto w = load_step(graphon_spec);
            big = exact_distribution(w, n);
            small = exact_distribution(w, n - 1);
        }
        else if (! param_spec.empty()) {
            auto f = load_parameter(param_spec);
            big = model_from_parameter(f, n);
            small = model_from_parameter(f, n - 1);
        }
        else
            throw ParseError("model-check needs --graphon or --param");
        auto r = check_model_consistency(big, small);
        out << "relabeling " << format_number(r.relabeling) << "\n"
            << "deletion " << format_number(r.deletion) << "\n"
            << "independence " << format_number(r.independence) << "\n"
            << "independence_k1 " << format_number(r.independence_k1) << "\n"
            << "passed: " << (r.passed() ? "true" : "false") << "\n";
        if (! r.passed())
            status = static_cast<int>(ErrorKind::Invariant);
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::Parse);
    }
    catch (const Error & e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    }
    catch (const std::exception & e) {
        err << "internal error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::Invariant);
    }
    return status;
}

int run_cli(int argc, char ** argv, std::ostream & out, std::ostream & err)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, out, err);
}

} // namespace graphlim
