// Replication runner. Replication r draws its instance from the stream
// seed scenario.seed XOR r; records land in per-replication slots, so the
// aggregate is identical for every parallelism degree.

#pragma once

#include "rankscreen/screening.hpp"
#include "rankscreen/simgen.hpp"

#include <string>
#include <vector>

namespace rankscreen {

struct ReplicationRecord {
    int rep = 0;
    std::uint64_t stream_seed = 0;
    bool included = false;
    int min_model_size = -1;  // -1 for set-valued (iterative) methods
    std::vector<int> selected;
    bool failed = false;
    std::string error;
};

struct ReplicationSummary {
    std::string method;
    ScenarioConfig scenario;
    int reps = 0;
    double inclusion_proportion = 0.0;
    std::vector<int> min_model_sizes;  // failures excluded
    double mmms = 0.0;                 // NaN when no sizes were recorded
    double rsd = 0.0;
    int failures = 0;
    double wall_time_s = 0.0;
    std::vector<ReplicationRecord> records;
};

// Methods: "rrcs", "sis", "gcorr", "mmle", "irrcs", "isis". A top_d rule
// with d == 0 resolves to n - 1. Per-replication failures are recorded,
// counted as not-included, and excluded from the model-size metrics.
std::vector<ReplicationSummary> run_scenario(const ScenarioConfig& cfg,
                                             const std::vector<std::string>& methods, int reps,
                                             const ThresholdRule& rule, int threads);

// CSV row per method (header:
// example,p,n,rho,noise,method,reps,inclusion_proportion,mmms,rsd,failures,wall_time_s).
std::string summaries_to_csv(const std::vector<ReplicationSummary>& summaries);

// JSON mirror with full per-replication detail. Wall time is deliberately
// omitted so repeated runs of the same seed are byte-identical.
std::string summaries_to_json(const std::vector<ReplicationSummary>& summaries);

std::string to_string(ExampleKind kind);
std::string to_string(NoiseKind kind);
ExampleKind example_from_string(const std::string& name);
NoiseKind noise_from_string(const std::string& name);

}  // namespace rankscreen
