#include "kronlab/cli.hpp"

#include "kronlab/analysis.hpp"
#include "kronlab/edge_io.hpp"
#include "kronlab/error.hpp"
#include "kronlab/seed.hpp"
#include "kronlab/threshold.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kronlab {

namespace {

struct GenFlags {
    std::string model;
    std::uint64_t edges = 0;
    int ell = 0;
    int k = 0;
    std::string seed_file;
    std::string seed3_file;
    double noise_b = 0.0;
    std::uint64_t n = 0;
    double p = 0.0;
    std::string dout;
    std::string din;

    CLI::Option* edges_opt = nullptr;
    CLI::Option* ell_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* seed3_opt = nullptr;
    CLI::Option* noise_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* dout_opt = nullptr;
    CLI::Option* din_opt = nullptr;
};

void add_generator_options(CLI::App& app, GenFlags& f) {
    app.add_option("--model", f.model, "skg|rpskg|nskg|bernoulli|chunglu")
        ->required()
        ->check(CLI::IsMember({"skg", "rpskg", "nskg", "bernoulli", "chunglu"}));
    f.edges_opt = app.add_option("--edges", f.edges, "edge count m");
    f.ell_opt = app.add_option("--l", f.ell, "binary levels")->check(CLI::NonNegativeNumber);
    f.k_opt = app.add_option("--k", f.k, "ternary levels (rpskg)")->check(CLI::NonNegativeNumber);
    f.seed_opt = app.add_option("--seed-file", f.seed_file, "2x2 initiator (default Graph500)");
    f.seed3_opt = app.add_option("--seed3-file", f.seed3_file, "3x3 seed for rpskg (default: derived)");
    f.noise_opt = app.add_option("--noise-b", f.noise_b, "nskg noise bound");
    f.n_opt = app.add_option("--n", f.n, "bernoulli vertex count");
    f.p_opt = app.add_option("--p", f.p, "bernoulli link probability");
    f.dout_opt = app.add_option("--dout", f.dout, "chung-lu out-degree file");
    f.din_opt = app.add_option("--din", f.din, "chung-lu in-degree file");
}

void require(const CLI::Option* opt, const std::string& model) {
    if (opt->count() == 0) {
        throw CLI::RequiredError(opt->get_name() + " (needed by --model " + model + ")");
    }
}

GenConfig resolve(const GenFlags& f) {
    GenConfig cfg;
    cfg.model = parse_model(f.model);
    if (cfg.model != Model::Bernoulli) {
        require(f.edges_opt, f.model);
    }
    cfg.edges_m = f.edges;
    cfg.ell = f.ell;
    cfg.k = f.k;
    if (f.seed_opt->count() > 0) {
        cfg.seed2 = validate_and_normalize(read_seed_file(f.seed_file));
    }
    if (f.seed3_opt->count() > 0) {
        cfg.seed3 = validate_and_normalize(read_seed_file(f.seed3_file));
    }
    switch (cfg.model) {
    case Model::Skg:
        require(f.ell_opt, f.model);
        break;
    case Model::Rpskg:
        if (f.ell_opt->count() == 0 && f.k_opt->count() == 0) {
            throw CLI::RequiredError("--l or --k");
        }
        break;
    case Model::Nskg:
        require(f.ell_opt, f.model);
        require(f.noise_opt, f.model);
        cfg.noise_b = f.noise_b;
        break;
    case Model::Bernoulli:
        require(f.n_opt, f.model);
        require(f.p_opt, f.model);
        cfg.bernoulli_n = f.n;
        cfg.p = f.p;
        break;
    case Model::ChungLu:
        require(f.dout_opt, f.model);
        require(f.din_opt, f.model);
        cfg.degree_seqs = std::make_pair(read_integer_file(f.dout), read_integer_file(f.din));
        break;
    }
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for " + path);
    }
}

// "hist.csv" -> "hist_ccdf.csv"
std::string sibling_path(const std::string& path, const std::string& suffix) {
    std::string stem = path;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) {
        stem.resize(stem.size() - 4);
    }
    return stem + "_" + suffix + ".csv";
}

void parse_app(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
}

std::pair<std::size_t, std::size_t> parse_shape(const std::string& text) {
    const auto x = text.find('x');
    std::size_t rows = 0;
    std::size_t cols = 0;
    try {
        std::size_t used = 0;
        rows = std::stoul(text.substr(0, x), &used);
        if (used != x) {
            throw std::invalid_argument(text);
        }
        const std::string rest = text.substr(x + 1);
        cols = std::stoul(rest, &used);
        if (used != rest.size()) {
            throw std::invalid_argument(text);
        }
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--to", "expected <R>x<C>, got '" + text + "'");
    }
    if (x == std::string::npos || rows == 0 || cols == 0) {
        throw CLI::ValidationError("--to", "expected <R>x<C>, got '" + text + "'");
    }
    return {rows, cols};
}

StochasticSeed closed_form(const StochasticSeed& from, std::size_t rows, std::size_t cols) {
    const std::size_t fr = from.matrix().rows();
    const std::size_t fc = from.matrix().cols();
    if (fr == 2 && fc == 2 && rows == 3 && cols == 3) {
        return sample_3x3_from_2x2(from);
    }
    if (fr == 2 && fc == 1 && rows == 3 && cols == 1) {
        return sample_3x1_from_2x1(from);
    }
    if (fr == 1 && fc == 2 && rows == 1 && cols == 3) {
        const auto t = sample_3x1_from_2x1(StochasticSeed::from_normalized(from.matrix().transposed()));
        return StochasticSeed::from_normalized(t.matrix().transposed());
    }
    throw Error(ErrorCode::InvalidArgument, "no closed form from " + std::to_string(fr) + "x" + std::to_string(fc) +
                                                " to " + std::to_string(rows) + "x" + std::to_string(cols) +
                                                "; use --method numeric");
}

std::string slice_label(const SliceId& s) {
    if (s.radix == Radix::Ternary) {
        return "alpha=" + std::to_string(s.alpha()) + ";beta=" + std::to_string(s.beta());
    }
    if (const auto r = s.r()) {
        return "r=" + std::to_string(*r);
    }
    return "zeros=" + std::to_string(s.zeros);
}

int cmd_generate(const GenFlags& f, std::uint64_t rng_seed, unsigned threads, const std::string& out_path) {
    GenConfig cfg = resolve(f);
    cfg.rng_seed = rng_seed;
    const GenResult result = generate(cfg, threads);
    write_edge_file(out_path, result.graph, header_fields(cfg, result));
    return 0;
}

int cmd_sample_seed(const std::string& from, const std::string& to, const std::string& method, int depth,
                    const std::string& out_path) {
    const auto [rows, cols] = parse_shape(to);
    const StochasticSeed source = validate_and_normalize(read_seed_file(from));
    const StochasticSeed result =
        method == "closed-form" ? closed_form(source, rows, cols) : sample_mxn(source, rows, cols, depth);
    auto out = open_output(out_path);
    out << "# from=" << format_seed(source.matrix()) << '\n';
    out << "# to=" << rows << 'x' << cols << '\n';
    out << "# method=" << method << '\n';
    if (method == "numeric") {
        out << "# depth=" << depth << '\n';
    }
    write_seed(out, result.matrix());
    finish_output(out, out_path);
    return 0;
}

int cmd_analyze(const std::string& graph_path, const std::string& direction, bool dedup, bool ccdf,
                bool oscillation, const std::string& out_path, std::ostream& console) {
    const LoadedGraph loaded = read_edge_file(graph_path);
    const DegreeHistogram hist = degree_histogram(loaded.graph, parse_direction(direction), dedup);
    std::optional<OscillationReport> osc;
    if (oscillation) {
        osc = oscillation_score(hist);
    }
    std::ostringstream head;
    head << "# graph=" << graph_path << '\n'
         << "# direction=" << direction << '\n'
         << "# dedup=" << (dedup ? "true" : "false") << '\n'
         << "# node_count=" << hist.node_count << '\n'
         << "# edges=" << loaded.graph.edges.size() << '\n';

    auto out = open_output(out_path);
    out << head.str() << "degree,count\n";
    for (const auto& [d, c] : hist.counts) {
        out << d << ',' << c << '\n';
    }
    finish_output(out, out_path);

    if (ccdf) {
        const std::string path = sibling_path(out_path, "ccdf");
        auto cc = open_output(path);
        cc << head.str() << "degree,ccdf\n";
        const double total = static_cast<double>(hist.total());
        std::uint64_t at_least = hist.total();
        for (const auto& [d, c] : hist.counts) {
            cc << d << ',' << format_double(static_cast<double>(at_least) / total) << '\n';
            at_least -= c;
        }
        finish_output(cc, path);
    }
    if (osc) {
        const OscillationParams params;
        const std::string path = sibling_path(out_path, "oscillation");
        auto os = open_output(path);
        os << head.str() << "# bin_ratio=" << format_double(params.bin_ratio) << '\n'
           << "# prominence=" << format_double(params.prominence) << '\n'
           << "# score=" << format_double(osc->score) << '\n'
           << "# extrema=" << osc->extrema << '\n'
           << "bin_lo,bin_hi,degrees,vertices,log10_avg_frequency\n";
        for (const auto& b : osc->bins) {
            os << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.degrees << ',' << b.vertices << ','
               << format_double(b.log10_avg_frequency) << '\n';
        }
        finish_output(os, path);
        console << "score=" << format_double(osc->score) << '\n';
    }
    return 0;
}

int cmd_slices(const std::string& graph_path, const std::string& seed_path, int ell, int k,
               const std::string& out_path) {
    const LoadedGraph loaded = read_edge_file(graph_path);
    const StochasticSeed seed = validate_and_normalize(read_seed_file(seed_path));
    const auto rows = slice_report(loaded.graph, seed, ell, k);
    auto out = open_output(out_path);
    out << "# graph=" << graph_path << '\n'
        << "# seed=" << format_seed(seed.matrix()) << '\n'
        << "# l=" << ell << '\n'
        << "# k=" << k << '\n'
        << "# edges=" << loaded.graph.edges.size() << '\n'
        << "slice,theoretical_p,empirical_p,tv_binomial\n";
    for (const auto& row : rows) {
        out << slice_label(row.slice) << ',' << format_double(row.theoretical_p) << ','
            << format_double(row.empirical_p) << ',' << format_double(row.tv_binomial) << '\n';
    }
    finish_output(out, out_path);
    return 0;
}

int cmd_thresholds(const ThresholdConfig& cfg, const std::string& out_path) {
    const ThresholdReport report = cfg.mode == ThresholdMode::Isolated ? isolated_threshold_experiment(cfg)
                                                                       : connectivity_threshold_experiment(cfg);
    auto out = open_output(out_path);
    out << "# rng_seed=" << cfg.rng_seed << '\n';
    write_threshold_csv(out, cfg, report);
    finish_output(out, out_path);
    return 0;
}

int cmd_probe(const std::string& path_a, const std::string& path_b, std::uint64_t trials, std::uint64_t rng_seed,
              std::ostream& console) {
    const GenConfig a = parse_generator_flags(read_flag_file(path_a));
    const GenConfig b = parse_generator_flags(read_flag_file(path_b));
    const double tv = identifiability_separation_probe(a, b, trials, rng_seed);
    const GenResult empty;
    for (const auto& [name, cfg] : {std::pair{"a", &a}, std::pair{"b", &b}}) {
        for (const auto& [key, value] : header_fields(*cfg, empty)) {
            if (key != "node_count" && key != "edges" && key != "rng_seed" && key != "noise_mu") {
                console << "# " << name << '.' << key << '=' << value << '\n';
            }
        }
    }
    console << "# trials=" << trials << '\n' << "# rng_seed=" << rng_seed << '\n';
    console << "tv=" << format_double(tv) << '\n';
    return 0;
}

}  // namespace

std::vector<std::string> read_flag_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream words(line);
        std::string w;
        while (words >> w) {
            tokens.push_back(w);
        }
    }
    return tokens;
}

GenConfig parse_generator_flags(const std::vector<std::string>& args) {
    CLI::App app("generator config");
    GenFlags f;
    add_generator_options(app, f);
    parse_app(app, args);
    return resolve(f);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Stochastic Kronecker graph toolkit", "kronlab");
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Generate an edge list");
    GenFlags gf;
    add_generator_options(*gen, gf);
    std::uint64_t gen_rng = 0;
    unsigned threads = 1;
    std::string gen_out;
    gen->add_option("--rng-seed", gen_rng, "random seed")->required();
    gen->add_option("--threads", threads, "generator workers")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "edge file")->required();

    auto* ss = app.add_subcommand("sample-seed", "Resample a seed to another shape");
    std::string ss_from;
    std::string ss_to;
    std::string ss_method;
    int ss_depth = kDefaultKgdDepth;
    std::string ss_out;
    ss->add_option("--from", ss_from, "source seed file")->required();
    ss->add_option("--to", ss_to, "<R>x<C>")->required();
    ss->add_option("--method", ss_method, "closed-form|numeric")
        ->required()
        ->check(CLI::IsMember({"closed-form", "numeric"}));
    ss->add_option("--depth", ss_depth, "numeric subdivision depth")->check(CLI::Range(1, 60));
    ss->add_option("--out", ss_out, "seed file")->required();

    auto* an = app.add_subcommand("analyze", "Degree histogram of an edge file");
    std::string an_graph;
    std::string an_direction = "out";
    bool an_dedup = false;
    bool an_ccdf = false;
    bool an_osc = false;
    std::string an_out;
    an->add_option("--graph", an_graph, "edge file")->required();
    an->add_option("--direction", an_direction, "out|in|undirected")
        ->check(CLI::IsMember({"out", "in", "undirected"}));
    an->add_flag("--dedup", an_dedup, "collapse parallel edges");
    an->add_flag("--ccdf", an_ccdf, "also write <out>_ccdf.csv");
    an->add_flag("--oscillation", an_osc, "print the oscillation score, write <out>_oscillation.csv");
    an->add_option("--out", an_out, "histogram CSV")->required();

    auto* sl = app.add_subcommand("slices", "Per-slice degree laws");
    std::string sl_graph;
    std::string sl_seed;
    int sl_ell = 0;
    int sl_k = 0;
    std::string sl_out;
    sl->add_option("--graph", sl_graph, "edge file")->required();
    sl->add_option("--seed-file", sl_seed, "2x2 initiator")->required();
    sl->add_option("--l", sl_ell, "binary levels")->required()->check(CLI::NonNegativeNumber);
    sl->add_option("--k", sl_k, "ternary levels")->check(CLI::NonNegativeNumber);
    sl->add_option("--out", sl_out, "slice CSV")->required();

    auto* th = app.add_subcommand("thresholds", "G(n, p) threshold trials");
    ThresholdConfig tcfg;
    std::string th_mode;
    std::string th_side;
    std::string th_out;
    th->add_option("--mode", th_mode, "isolated|connected")->required()->check(CLI::IsMember({"isolated", "connected"}));
    th->add_option("--side", th_side, "above|below")->required()->check(CLI::IsMember({"above", "below"}));
    th->add_option("--n", tcfg.n, "vertex count")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
    th->add_option("--alpha", tcfg.alpha, "threshold offset")->required();
    th->add_option("--trials", tcfg.trials, "trial count")->required()->check(CLI::PositiveNumber);
    th->add_option("--rng-seed", tcfg.rng_seed, "random seed")->required();
    th->add_option("--out", th_out, "report CSV")->required();

    auto* pr = app.add_subcommand("probe", "Degree-distribution TV between two generators");
    std::string pr_a;
    std::string pr_b;
    std::uint64_t pr_trials = 0;
    std::uint64_t pr_rng = 0;
    pr->add_option("--config-a", pr_a, "flag list")->required();
    pr->add_option("--config-b", pr_b, "flag list")->required();
    pr->add_option("--trials", pr_trials, "graphs per side")->required()->check(CLI::PositiveNumber);
    pr->add_option("--rng-seed", pr_rng, "random seed")->required();

    try {
        parse_app(app, args);
        if (gen->parsed()) {
            return cmd_generate(gf, gen_rng, threads, gen_out);
        }
        if (ss->parsed()) {
            return cmd_sample_seed(ss_from, ss_to, ss_method, ss_depth, ss_out);
        }
        if (an->parsed()) {
            return cmd_analyze(an_graph, an_direction, an_dedup, an_ccdf, an_osc, an_out, out);
        }
        if (sl->parsed()) {
            return cmd_slices(sl_graph, sl_seed, sl_ell, sl_k, sl_out);
        }
        if (th->parsed()) {
            tcfg.mode = parse_threshold_mode(th_mode);
            tcfg.side = parse_threshold_side(th_side);
            return cmd_thresholds(tcfg, th_out);
        }
        return cmd_probe(pr_a, pr_b, pr_trials, pr_rng, out);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace kronlab
