#include "rankscreen/harness.hpp"

#include "rankscreen/iterative.hpp"
#include "rankscreen/metrics.hpp"
#include "rankscreen/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rankscreen {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

bool covers(std::span<const int> selected, std::span<const int> true_support) {
    std::vector<int> sorted(selected.begin(), selected.end());
    std::sort(sorted.begin(), sorted.end());
    for (int t : true_support)
        if (!std::binary_search(sorted.begin(), sorted.end(), t)) return false;
    return true;
}

int minimum_model_size(const Eigen::VectorXd& scores, std::span<const int> true_support) {
    if (true_support.empty()) throw std::invalid_argument("minimum_model_size: empty true support");
    const auto p = scores.size();
    int worst = 0;
    for (int t : true_support) {
        if (t < 0 || t >= p) throw std::invalid_argument("minimum_model_size: index out of range");
        const double st = std::abs(scores[t]);
        int rank = 1;
        for (Eigen::Index k = 0; k < p; ++k) {
            if (k == t) continue;
            const double sk = std::abs(scores[k]);
            if (sk > st || (sk == st && k < t)) ++rank;
        }
        worst = std::max(worst, rank);
    }
    return worst;
}

namespace {

// Type-7 quantile: linear interpolation of order statistics.
double quantile_type7(std::vector<double>& sorted, double prob) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    const double h = (static_cast<double>(m) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, m - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::pair<double, double> mmms_rsd(std::span<const int> sizes) {
    if (sizes.empty()) throw std::invalid_argument("mmms_rsd: empty input");
    std::vector<double> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    const double iqr = quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
    return {median, iqr / 1.34};
}

double inclusion_proportion(const std::vector<std::vector<int>>& selected_sets,
                            std::span<const int> true_support) {
    if (selected_sets.empty()) return 0.0;
    int hits = 0;
    for (const auto& s : selected_sets)
        if (covers(s, true_support)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(selected_sets.size());
}

// ---------------------------------------------------------------------------
// Scenario runner
// ---------------------------------------------------------------------------

namespace {

bool is_iterative(const std::string& method) { return method == "irrcs" || method == "isis"; }

ModelKind model_for_scenario(const ScenarioConfig& cfg) {
    switch (cfg.example) {
        case ExampleKind::ex3_boxcox:
        case ExampleKind::ex3_log:
            return ModelKind::transformation;
        case ExampleKind::ex4_logistic:
            return ModelKind::logistic;
        default:
            return ModelKind::linear;
    }
}

// Score-based methods only; the iterative ones are handled by the caller.
ReplicationRecord run_one(const std::string& method, const GeneratedInstance& inst,
                          const ThresholdRule& rule) {
    ReplicationRecord rec;
    const Dataset& d = inst.dataset;
    Eigen::VectorXd scores;
    if (method == "rrcs") {
        scores = rrcs_scores(d);
    } else if (method == "sis") {
        scores = sis_scores(d);
    } else if (method == "gcorr") {
        scores = gcorr_scores(d).scores;
    } else if (method == "mmle") {
        scores = mmle_scores(d).scores;
    } else {
        throw std::invalid_argument("run_scenario: unknown method '" + method + "'");
    }
    rec.selected = select(scores, rule);
    rec.min_model_size = minimum_model_size(scores, inst.true_support);
    rec.included = covers(rec.selected, inst.true_support);
    return rec;
}

}  // namespace

std::vector<ReplicationSummary> run_scenario(const ScenarioConfig& cfg,
                                             const std::vector<std::string>& methods, int reps,
                                             const ThresholdRule& rule, int threads) {
    cfg.validate();
    if (reps < 1) throw std::invalid_argument("run_scenario: reps must be >= 1");
    for (const auto& m : methods) {
        if (m != "rrcs" && m != "sis" && m != "gcorr" && m != "mmle" && !is_iterative(m))
            throw std::invalid_argument("run_scenario: unknown method '" + m + "'");
    }
    ThresholdRule resolved = rule;
    if (resolved.kind == ThresholdRule::Kind::top_d && resolved.d == 0)
        resolved.d = std::min(cfg.n - 1, cfg.p);

    const ModelKind model = model_for_scenario(cfg);
    // records[m][r]: per-method, per-replication slots written independently.
    std::vector<std::vector<ReplicationRecord>> records(methods.size());
    std::vector<std::vector<double>> times(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        records[m].resize(static_cast<std::size_t>(reps));
        times[m].assign(static_cast<std::size_t>(reps), 0.0);
    }

    parallel_for_index(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
        ScenarioConfig rep_cfg = cfg;
        rep_cfg.seed = cfg.seed ^ static_cast<std::uint64_t>(r);
        GeneratedInstance inst = generate(rep_cfg);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            ReplicationRecord rec;
            const auto start = std::chrono::steady_clock::now();
            try {
                if (is_iterative(methods[m])) {
                    IterativeConfig icfg;
                    icfg.model = model;
                    IterativeResult res = methods[m] == "irrcs" ? irrcs(inst.dataset, icfg)
                                                                : isis(inst.dataset, icfg);
                    rec.selected = res.selected;
                    rec.min_model_size = -1;
                    rec.included = covers(rec.selected, inst.true_support);
                } else {
                    rec = run_one(methods[m], inst, resolved);
                }
            } catch (const std::exception& err) {
                rec.failed = true;
                rec.error = err.what();
                rec.included = false;
            }
            const auto stop = std::chrono::steady_clock::now();
            rec.rep = static_cast<int>(r);
            rec.stream_seed = rep_cfg.seed;
            times[m][r] = std::chrono::duration<double>(stop - start).count();
            records[m][r] = std::move(rec);
        }
    });

    std::vector<ReplicationSummary> summaries;
    summaries.reserve(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        ReplicationSummary s;
        s.method = methods[m];
        s.scenario = cfg;
        s.reps = reps;
        int hits = 0;
        for (const auto& rec : records[m]) {
            if (rec.failed) {
                ++s.failures;
                continue;
            }
            if (rec.included) ++hits;
            if (rec.min_model_size > 0) s.min_model_sizes.push_back(rec.min_model_size);
        }
        s.inclusion_proportion = static_cast<double>(hits) / static_cast<double>(reps);
        if (!s.min_model_sizes.empty()) {
            std::tie(s.mmms, s.rsd) = mmms_rsd(s.min_model_sizes);
        } else {
            s.mmms = std::numeric_limits<double>::quiet_NaN();
            s.rsd = std::numeric_limits<double>::quiet_NaN();
        }
        for (double t : times[m]) s.wall_time_s += t;
        s.records = std::move(records[m]);
        summaries.push_back(std::move(s));
    }
    return summaries;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string to_string(ExampleKind kind) {
    switch (kind) {
        case ExampleKind::ex1: return "ex1";
        case ExampleKind::ex2: return "ex2";
        case ExampleKind::ex3_boxcox: return "ex3_boxcox";
        case ExampleKind::ex3_log: return "ex3_log";
        case ExampleKind::ex4_logistic: return "ex4_logistic";
        case ExampleKind::ex5_mixed: return "ex5_mixed";
    }
    return "unknown";
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::normal: return "normal";
        case NoiseKind::contaminated10: return "contaminated10";
        case NoiseKind::t3: return "t3";
    }
    return "unknown";
}

ExampleKind example_from_string(const std::string& name) {
    if (name == "ex1") return ExampleKind::ex1;
    if (name == "ex2") return ExampleKind::ex2;
    if (name == "ex3_boxcox") return ExampleKind::ex3_boxcox;
    if (name == "ex3_log") return ExampleKind::ex3_log;
    if (name == "ex4_logistic") return ExampleKind::ex4_logistic;
    if (name == "ex5_mixed") return ExampleKind::ex5_mixed;
    throw std::invalid_argument("unknown example '" + name + "'");
}

NoiseKind noise_from_string(const std::string& name) {
    if (name == "normal") return NoiseKind::normal;
    if (name == "contaminated10") return NoiseKind::contaminated10;
    if (name == "t3") return NoiseKind::t3;
    throw std::invalid_argument("unknown noise '" + name + "'");
}

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

std::string summaries_to_csv(const std::vector<ReplicationSummary>& summaries) {
    std::ostringstream os;
    os << "example,p,n,rho,noise,method,reps,inclusion_proportion,mmms,rsd,failures,wall_time_s\n";
    for (const auto& s : summaries) {
        os << to_string(s.scenario.example) << ',' << s.scenario.p << ',' << s.scenario.n << ','
           << format_double(s.scenario.rho) << ',' << to_string(s.scenario.noise) << ','
           << s.method << ',' << s.reps << ',' << format_double(s.inclusion_proportion) << ','
           << format_double(s.mmms) << ',' << format_double(s.rsd) << ',' << s.failures << ','
           << format_double(s.wall_time_s) << '\n';
    }
    return os.str();
}

std::string summaries_to_json(const std::vector<ReplicationSummary>& summaries) {
    nlohmann::json root = nlohmann::json::array();
    for (const auto& s : summaries) {
        nlohmann::json js;
        js["method"] = s.method;
        js["scenario"] = {
            {"example", to_string(s.scenario.example)},
            {"p", s.scenario.p},
            {"n", s.scenario.n},
            {"rho", s.scenario.rho},
            {"noise", to_string(s.scenario.noise)},
            {"lambda_boxcox", s.scenario.lambda_boxcox},
            {"q", s.scenario.q},
            {"s", s.scenario.s},
            {"sigma", s.scenario.sigma},
            {"seed", s.scenario.seed},
        };
        js["reps"] = s.reps;
        js["inclusion_proportion"] = s.inclusion_proportion;
        if (!s.min_model_sizes.empty()) {
            js["mmms"] = s.mmms;
            js["rsd"] = s.rsd;
        }
        js["failures"] = s.failures;
        nlohmann::json reps = nlohmann::json::array();
        for (const auto& rec : s.records) {
            nlohmann::json jr;
            jr["rep"] = rec.rep;
            jr["seed"] = rec.stream_seed;
            jr["included"] = rec.included;
            if (rec.min_model_size > 0) jr["min_model_size"] = rec.min_model_size;
            jr["selected"] = rec.selected;
            if (rec.failed) jr["error"] = rec.error;
            reps.push_back(std::move(jr));
        }
        js["replications"] = std::move(reps);
        root.push_back(std::move(js));
    }
    return root.dump(1);
}

// resolve_threads lives here so both the harness and the CLI share it.
int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RANKSCREEN_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace rankscreen
