#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "sinespike/decode.hpp"
#include "sinespike/greedy.hpp"
#include "sinespike/model.hpp"

namespace sinespike {

enum class Method { Admm, Greedy };

struct ExperimentGrid {
    std::vector<int> n_values;
    std::vector<int> k_values;
    std::vector<int> s_values;
    std::vector<double> delta_values;  // in units of 1/(n-1)
    std::vector<double> lambda_values; // 0 selects 1/sqrt(n)
    int trials = 10;
    std::uint64_t base_seed = 0;
    Method method = Method::Admm;
    AmplitudeLaw amp_law = AmplitudeLaw::UnitPhase;
    OutlierSupport support_mode = OutlierSupport::FixedCardinality;
    int max_iters = 100000;
    bool local_opt = true;

    void validate() const;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    bool exact = false;
    double relative_mse = 0.0;
    double runtime = 0.0; // seconds
    std::string error;
};

struct GridCell {
    std::size_t in = 0, ik = 0, is = 0, id = 0, il = 0;
    int n = 0, k = 0, s = 0;
    double delta = 0.0; // in units of 1/(n-1)
    double lambda = 0.0;
    std::vector<TrialOutcome> trials;
    double fraction = 0.0;
    double mean_runtime = 0.0;
    int failures = 0;
};

struct GridResult {
    ExperimentGrid grid;
    std::vector<GridCell> cells; // lexicographic in (n, k, s, delta, lambda)
};

/// splitmix64-style mixing of a sequence of words; stable across platforms and runs.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words);

/// Threads from SINESPIKE_THREADS, else hardware concurrency.
int thread_count_from_env();

/// Runs one trial of the configured method on the instance and scores it.
TrialOutcome run_trial(const Instance& inst, Method method, double lambda, int max_iters, bool local_opt);

GridResult run_grid(const ExperimentGrid& grid, int threads = 0);

/// One success-fraction matrix per (n, lambda, s) slab: header row of k values, rows of delta.
struct CsvSlab {
    int n = 0;
    double lambda = 0.0;
    int s = 0;
    std::string csv;
};
std::vector<CsvSlab> grid_csv(const GridResult& result);

/// printf("%.17g") formatting used for every float written to CSV.
std::string format_double(double v);

} // namespace sinespike
