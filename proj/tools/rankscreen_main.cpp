// rankscreen: screen a CSV for marginally important features, run seeded
// simulation studies from a JSON config, and merge result tables.
//
// Exit codes: 0 success, 2 malformed input or config, 3 degenerate
// column(s), 4 conflicting flags.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rankscreen/core_stats.hpp"
#include "rankscreen/csv.hpp"
#include "rankscreen/harness.hpp"
#include "rankscreen/iterative.hpp"
#include "rankscreen/metrics.hpp"
#include "rankscreen/parallel.hpp"
#include "rankscreen/screening.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rankscreen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitConflict = 4;
constexpr std::uint64_t kDefaultScreenSeed = 20121001;  // fixed for reproducible refits

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int count_distinct(const Eigen::VectorXd& col, int limit) {
    std::set<double> seen;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
        seen.insert(col[i]);
        if (static_cast<int>(seen.size()) > limit) return limit + 1;
    }
    return static_cast<int>(seen.size());
}

struct ScreenOptions {
    std::string input;
    std::string method = "rrcs";
    std::string response;
    int top = -1;
    double gamma = -1.0;
    bool iterative = false;
    std::string model = "linear";
    std::string out;
    std::uint64_t seed = kDefaultScreenSeed;
    int threads = 0;
    int gcorr_degree = 3;
    int categorical_limit = 10;
};

int run_screen(const ScreenOptions& opt) {
    if (opt.top >= 0 && opt.gamma >= 0.0) {
        std::cerr << "rankscreen screen: --top and --gamma conflict, pass one\n";
        return kExitConflict;
    }
    if (opt.iterative && opt.method != "rrcs" && opt.method != "sis") {
        std::cerr << "rankscreen screen: --iterative requires --method rrcs or sis\n";
        return kExitConflict;
    }

    NumericTable table;
    try {
        table = read_numeric_csv(opt.input);
    } catch (const CsvError& e) {
        std::cerr << "rankscreen screen: " << e.what() << "\n";
        return kExitBadInput;
    }

    const auto response_it =
        std::find(table.columns.begin(), table.columns.end(), opt.response);
    if (response_it == table.columns.end()) {
        std::cerr << "rankscreen screen: response column '" << opt.response << "' not found\n";
        return kExitBadInput;
    }
    const auto yidx = static_cast<Eigen::Index>(response_it - table.columns.begin());

    Dataset d;
    const auto n = table.values.rows();
    const auto p = table.values.cols() - 1;
    if (p < 1) {
        std::cerr << "rankscreen screen: need at least one predictor column\n";
        return kExitBadInput;
    }
    d.X.resize(n, p);
    d.y = table.values.col(yidx);
    std::vector<std::string> feature_names;
    Eigen::Index out_col = 0;
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
        if (c == yidx) continue;
        d.X.col(out_col++) = table.values.col(c);
        feature_names.push_back(table.columns[static_cast<std::size_t>(c)]);
    }
    d.column_kinds.resize(static_cast<std::size_t>(p));
    for (Eigen::Index c = 0; c < p; ++c)
        d.column_kinds[static_cast<std::size_t>(c)] =
            count_distinct(d.X.col(c), opt.categorical_limit) <= opt.categorical_limit
                ? ColumnKind::categorical
                : ColumnKind::continuous;

    const int threads = resolve_threads(opt.threads);

    try {
        d.validate();
        const ThresholdRule rule =
            opt.gamma >= 0.0
                ? ThresholdRule::above(opt.gamma)
                : ThresholdRule::top(std::min<int>(
                      opt.top >= 0 ? opt.top : default_model_size(static_cast<int>(n)),
                      static_cast<int>(p)));
        Eigen::VectorXd scores;
        std::vector<int> selected;
        if (opt.iterative) {
            IterativeConfig cfg;
            cfg.comparator = opt.method == "rrcs" ? Comparator::rrcs : Comparator::sis;
            if (opt.model == "linear") cfg.model = ModelKind::linear;
            else if (opt.model == "transformation") cfg.model = ModelKind::transformation;
            else if (opt.model == "logistic") cfg.model = ModelKind::logistic;
            else {
                std::cerr << "rankscreen screen: unknown --model '" << opt.model << "'\n";
                return kExitBadInput;
            }
            cfg.threads = threads;
            scores = cfg.comparator == Comparator::rrcs ? rrcs_scores(d, threads)
                                                        : sis_scores(d, threads);
            const auto res = cfg.comparator == Comparator::rrcs ? irrcs(d, cfg) : isis(d, cfg);
            selected = res.selected;
        } else {
            ScreenMethod method;
            if (opt.method == "rrcs") method = ScreenMethod::rrcs;
            else if (opt.method == "sis") method = ScreenMethod::sis;
            else if (opt.method == "gcorr") method = ScreenMethod::gcorr;
            else if (opt.method == "mmle") method = ScreenMethod::mmle;
            else {
                std::cerr << "rankscreen screen: unknown --method '" << opt.method << "'\n";
                return kExitBadInput;
            }
            switch (method) {
                case ScreenMethod::rrcs: scores = rrcs_scores(d, threads); break;
                case ScreenMethod::sis: scores = sis_scores(d, threads); break;
                case ScreenMethod::gcorr:
                    scores = gcorr_scores(d, opt.gcorr_degree, threads).scores;
                    break;
                case ScreenMethod::mmle: scores = mmle_scores(d, threads).scores; break;
            }
            selected = select(scores, rule);
        }

        const auto order = rank_order(scores);
        std::vector<char> is_selected(static_cast<std::size_t>(p), 0);
        for (int s : selected) is_selected[static_cast<std::size_t>(s)] = 1;

        std::ostringstream os;
        os << "feature,score,abs_rank,selected\n";
        os.precision(12);
        for (std::size_t r = 0; r < order.size(); ++r) {
            const int k = order[r];
            os << feature_names[static_cast<std::size_t>(k)] << ',' << scores[k] << ',' << r + 1
               << ',' << static_cast<int>(is_selected[static_cast<std::size_t>(k)]) << '\n';
        }
        if (opt.out.empty()) {
            std::cout << os.str();
        } else {
            write_text_file(opt.out, os.str());
        }
    } catch (const DegenerateColumnError& e) {
        std::cerr << "rankscreen screen: degenerate column";
        if (e.column() >= 0 && e.column() < static_cast<int>(feature_names.size()))
            std::cerr << " '" << feature_names[static_cast<std::size_t>(e.column())] << "'";
        std::cerr << ": " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "rankscreen screen: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitOk;
}

// --------------------------------------------------------------------------
// simulate
// --------------------------------------------------------------------------

[[noreturn]] void config_fail(const std::string& path, const std::string& message) {
    throw std::invalid_argument(path + ": " + message);
}

template <typename T>
std::vector<T> list_of(const json& node, const std::string& path) {
    std::vector<T> values;
    if (node.is_array()) {
        if (node.empty()) config_fail(path, "list must not be empty");
        for (const auto& v : node) values.push_back(v.get<T>());
    } else {
        values.push_back(node.get<T>());
    }
    return values;
}

struct NamedScenario {
    ScenarioConfig cfg;
    std::vector<std::string> methods;
    ThresholdRule rule = ThresholdRule::top(1);
    bool top_default = false;  // resolve d = n - 1 at run time
};

std::vector<NamedScenario> parse_config(const json& root) {
    if (!root.is_object() || !root.contains("scenarios"))
        config_fail("scenarios", "missing key");
    if (!root["scenarios"].is_array() || root["scenarios"].empty())
        config_fail("scenarios", "must be a non-empty list");

    std::vector<NamedScenario> out;
    for (std::size_t i = 0; i < root["scenarios"].size(); ++i) {
        const json& sc = root["scenarios"][i];
        const std::string base = "scenarios[" + std::to_string(i) + "]";
        if (!sc.is_object()) config_fail(base, "must be an object");
        for (const auto& [key, value] : sc.items()) {
            (void)value;
            static const std::set<std::string> known{
                "example", "p", "n", "rho", "noise", "lambda_boxcox", "q", "s",
                "sigma", "beta_pattern", "methods", "rule"};
            if (!known.count(key)) config_fail(base + "." + key, "unknown key");
        }
        if (!sc.contains("example")) config_fail(base + ".example", "missing");
        ExampleKind example = ExampleKind::ex1;
        try {
            example = example_from_string(sc["example"].get<std::string>());
        } catch (const std::exception&) {
            config_fail(base + ".example", "unknown example name");
        }

        std::vector<std::string> methods{"rrcs", "sis"};
        if (sc.contains("methods")) methods = list_of<std::string>(sc["methods"], base + ".methods");
        for (const auto& m : methods)
            if (m != "rrcs" && m != "sis" && m != "gcorr" && m != "mmle" && m != "irrcs" &&
                m != "isis")
                config_fail(base + ".methods", "unknown method '" + m + "'");

        ThresholdRule rule = ThresholdRule::top(1);
        bool top_default = true;
        if (sc.contains("rule")) {
            const json& jr = sc["rule"];
            const std::string rpath = base + ".rule";
            if (!jr.is_object() || !jr.contains("kind")) config_fail(rpath, "needs a 'kind'");
            const std::string kind = jr["kind"].get<std::string>();
            if (kind == "top_d") {
                const int dval = jr.value("d", 0);
                if (dval < 0) config_fail(rpath + ".d", "must be >= 0 (0 means n-1)");
                top_default = dval == 0;
                if (dval > 0) rule = ThresholdRule::top(dval);
            } else if (kind == "threshold") {
                if (!jr.contains("gamma")) config_fail(rpath + ".gamma", "missing");
                const double g = jr["gamma"].get<double>();
                if (!(g > 0.0)) config_fail(rpath + ".gamma", "must be > 0");
                rule = ThresholdRule::above(g);
                top_default = false;
            } else {
                config_fail(rpath + ".kind", "must be 'top_d' or 'threshold'");
            }
        }

        const auto ps = sc.contains("p") ? list_of<int>(sc["p"], base + ".p") : std::vector<int>{100};
        const auto ns = sc.contains("n") ? list_of<int>(sc["n"], base + ".n") : std::vector<int>{50};
        const auto rhos =
            sc.contains("rho") ? list_of<double>(sc["rho"], base + ".rho") : std::vector<double>{0.0};
        const auto noises = sc.contains("noise")
                                ? list_of<std::string>(sc["noise"], base + ".noise")
                                : std::vector<std::string>{"normal"};

        for (int pval : ps)
            for (int nval : ns)
                for (double rho : rhos)
                    for (const auto& noise : noises) {
                        NamedScenario item;
                        item.cfg.example = example;
                        item.cfg.p = pval;
                        item.cfg.n = nval;
                        item.cfg.rho = rho;
                        try {
                            item.cfg.noise = noise_from_string(noise);
                        } catch (const std::exception&) {
                            config_fail(base + ".noise", "unknown noise '" + noise + "'");
                        }
                        if (sc.contains("lambda_boxcox"))
                            item.cfg.lambda_boxcox = sc["lambda_boxcox"].get<double>();
                        if (sc.contains("q")) item.cfg.q = sc["q"].get<int>();
                        if (sc.contains("s")) item.cfg.s = sc["s"].get<int>();
                        if (sc.contains("sigma")) item.cfg.sigma = sc["sigma"].get<double>();
                        if (sc.contains("beta_pattern")) {
                            const std::string bp = sc["beta_pattern"].get<std::string>();
                            if (bp == "pattern_1_13")
                                item.cfg.beta_pattern = BetaPattern::pattern_1_13;
                            else if (bp == "pattern_3_4")
                                item.cfg.beta_pattern = BetaPattern::pattern_3_4;
                            else
                                config_fail(base + ".beta_pattern", "unknown pattern '" + bp + "'");
                        }
                        try {
                            item.cfg.validate();
                        } catch (const std::exception& e) {
                            config_fail(base, e.what());
                        }
                        item.methods = methods;
                        item.rule = rule;
                        item.top_default = top_default;
                        out.push_back(std::move(item));
                    }
    }
    return out;
}

struct SimulateOptions {
    std::string config_path;
    int reps = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string out_dir;
    bool force = false;
};

int run_simulate(const SimulateOptions& opt) {
    if (opt.reps < 1) {
        std::cerr << "rankscreen simulate: --reps must be >= 1\n";
        return kExitBadInput;
    }
    if (!opt.seed_set) {
        std::cerr << "rankscreen simulate: --seed is required\n";
        return kExitBadInput;
    }

    json root;
    try {
        std::ifstream in(opt.config_path);
        if (!in) throw std::runtime_error("cannot open '" + opt.config_path + "'");
        in >> root;
    } catch (const std::exception& e) {
        std::cerr << "rankscreen simulate: " << e.what() << "\n";
        return kExitBadInput;
    }

    std::vector<NamedScenario> scenarios;
    try {
        scenarios = parse_config(root);
    } catch (const std::exception& e) {
        std::cerr << "rankscreen simulate: invalid config: " << e.what() << "\n";
        return kExitBadInput;
    }

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) {
        std::cerr << "rankscreen simulate: cannot create '" << opt.out_dir << "'\n";
        return kExitBadInput;
    }
    const fs::path csv_path = fs::path(opt.out_dir) / "results.csv";
    const fs::path json_path = fs::path(opt.out_dir) / "results.json";
    if (!opt.force && (fs::exists(csv_path) || fs::exists(json_path))) {
        std::cerr << "rankscreen simulate: output exists, pass --force to overwrite\n";
        return kExitBadInput;
    }

    const int threads = resolve_threads(opt.threads);
    std::vector<ReplicationSummary> all;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        NamedScenario& sc = scenarios[i];
        sc.cfg.seed = opt.seed ^ mix64(static_cast<std::uint64_t>(i));
        const ThresholdRule rule = sc.top_default ? ThresholdRule::top_default() : sc.rule;
        auto summaries = run_scenario(sc.cfg, sc.methods, opt.reps, rule, threads);
        for (auto& s : summaries) all.push_back(std::move(s));
    }

    write_text_file(csv_path.string(), summaries_to_csv(all));
    write_text_file(json_path.string(), summaries_to_json(all));

    std::cout << "example,p,n,rho,noise,method,inclusion,mmms,rsd\n";
    for (const auto& s : all) {
        std::cout << to_string(s.scenario.example) << ',' << s.scenario.p << ',' << s.scenario.n
                  << ',' << s.scenario.rho << ',' << to_string(s.scenario.noise) << ',' << s.method
                  << ',' << s.inclusion_proportion << ',';
        if (!std::isnan(s.mmms)) std::cout << s.mmms << ',' << s.rsd;
        else std::cout << ',';
        std::cout << '\n';
    }
    std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
    return kExitOk;
}

// --------------------------------------------------------------------------
// report
// --------------------------------------------------------------------------

int run_report(const std::string& dir, const std::string& format, const std::string& out_path) {
    if (!fs::is_directory(dir)) {
        std::cerr << "rankscreen report: '" << dir << "' is not a directory\n";
        return kExitBadInput;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "rankscreen report: no .csv files in '" << dir << "'\n";
        return kExitBadInput;
    }

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header;
    for (const auto& f : files) {
        CsvTable t;
        try {
            t = read_csv(f.string());
        } catch (const CsvError& e) {
            std::cerr << "rankscreen report: " << e.what() << "\n";
            return kExitBadInput;
        }
        if (header.empty()) header = t.header;
        if (t.header != header) {
            std::cerr << "rankscreen report: header mismatch in " << f.string() << "\n";
            return kExitBadInput;
        }
        for (auto& r : t.rows) rows.push_back(std::move(r));
    }

    std::ostringstream os;
    if (format == "csv") {
        for (std::size_t c = 0; c < header.size(); ++c)
            os << header[c] << (c + 1 < header.size() ? "," : "\n");
        for (const auto& r : rows)
            for (std::size_t c = 0; c < r.size(); ++c) os << r[c] << (c + 1 < r.size() ? "," : "\n");
    } else if (format == "markdown") {
        // Pivot: one block per (example, p, n, noise); rows methods,
        // columns the distinct rho values.
        const auto col = [&header](const std::string& name) {
            return static_cast<std::size_t>(
                std::find(header.begin(), header.end(), name) - header.begin());
        };
        const std::size_t c_example = col("example"), c_p = col("p"), c_n = col("n"),
                          c_rho = col("rho"), c_noise = col("noise"), c_method = col("method"),
                          c_incl = col("inclusion_proportion");
        if (c_incl >= header.size()) {
            std::cerr << "rankscreen report: not a results table\n";
            return kExitBadInput;
        }
        std::map<std::string, std::map<std::string, std::map<std::string, std::string>>> blocks;
        std::map<std::string, std::set<std::string>> block_rhos;
        for (const auto& r : rows) {
            const std::string block =
                r[c_example] + " p=" + r[c_p] + " n=" + r[c_n] + " noise=" + r[c_noise];
            blocks[block][r[c_method]][r[c_rho]] = r[c_incl];
            block_rhos[block].insert(r[c_rho]);
        }
        for (const auto& [name, methods] : blocks) {
            os << "### " << name << "\n\n";
            os << "| method |";
            for (const auto& rho : block_rhos[name]) os << " rho=" << rho << " |";
            os << "\n|---|";
            for (std::size_t i = 0; i < block_rhos[name].size(); ++i) os << "---|";
            os << "\n";
            for (const auto& [method, cells] : methods) {
                os << "| " << method << " |";
                for (const auto& rho : block_rhos[name]) {
                    const auto it = cells.find(rho);
                    os << " " << (it == cells.end() ? "" : it->second) << " |";
                }
                os << "\n";
            }
            os << "\n";
        }
    } else {
        std::cerr << "rankscreen report: unknown --format '" << format << "'\n";
        return kExitBadInput;
    }

    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        write_text_file(out_path, os.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank correlation feature screening toolkit"};
    app.require_subcommand(1);

    ScreenOptions screen_opt;
    auto* screen_cmd = app.add_subcommand("screen", "rank features of a CSV data set");
    screen_cmd->add_option("input", screen_opt.input, "input CSV with header row")->required();
    screen_cmd->add_option("--method", screen_opt.method, "rrcs|sis|gcorr|mmle");
    screen_cmd->add_option("--response", screen_opt.response, "response column name")->required();
    screen_cmd->add_option("--top", screen_opt.top, "select the top d features");
    screen_cmd->add_option("--gamma", screen_opt.gamma, "select |score| > gamma");
    screen_cmd->add_flag("--iterative", screen_opt.iterative, "iterative screening + refitting");
    screen_cmd->add_option("--model", screen_opt.model, "linear|transformation|logistic");
    screen_cmd->add_option("--out", screen_opt.out, "output path (default stdout)");
    screen_cmd->add_option("--seed", screen_opt.seed, "seed for iterative refits");
    screen_cmd->add_option("--threads", screen_opt.threads, "worker threads (0 = env/1)");
    screen_cmd->add_option("--gcorr-degree", screen_opt.gcorr_degree, "polynomial degree");
    screen_cmd->add_option("--categorical-threshold", screen_opt.categorical_limit,
                           "max distinct values for a categorical column");

    SimulateOptions sim_opt;
    auto* sim_cmd = app.add_subcommand("simulate", "run simulation scenarios from a JSON config");
    sim_cmd->add_option("config", sim_opt.config_path, "scenario config JSON")->required();
    sim_cmd->add_option("--reps", sim_opt.reps, "replications per scenario")->required();
    auto* seed_opt = sim_cmd->add_option("--seed", sim_opt.seed, "base seed (required)");
    sim_cmd->add_option("--threads", sim_opt.threads, "worker threads (0 = env/1)");
    sim_cmd->add_option("--out", sim_opt.out_dir, "output directory")->required();
    sim_cmd->add_flag("--force", sim_opt.force, "overwrite existing results");

    std::string report_dir, report_format = "csv", report_out;
    auto* report_cmd = app.add_subcommand("report", "merge result CSVs into one table");
    report_cmd->add_option("dir", report_dir, "directory of results*.csv files")->required();
    report_cmd->add_option("--format", report_format, "csv|markdown");
    report_cmd->add_option("--out", report_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    if (screen_cmd->parsed()) return run_screen(screen_opt);
    if (sim_cmd->parsed()) {
        sim_opt.seed_set = seed_opt->count() > 0;
        return run_simulate(sim_opt);
    }
    if (report_cmd->parsed()) return run_report(report_dir, report_format, report_out);
    return kExitBadInput;
}
