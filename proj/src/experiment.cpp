#include "sinespike/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace sinespike {

void ExperimentGrid::validate() const {
    require(!n_values.empty() && !k_values.empty() && !s_values.empty() && !delta_values.empty() &&
                !lambda_values.empty(),
            "experiment grid: every value list must be nonempty");
    require(trials >= 1, "experiment grid: trials must be at least 1");
    require(max_iters >= 1, "experiment grid: max_iters must be positive");
    for (int n : n_values) require(n >= 2, "experiment grid: n must be at least 2");
    for (int k : k_values) require(k >= 0, "experiment grid: k must be nonnegative");
    for (int s : s_values) require(s >= 0, "experiment grid: s must be nonnegative");
    for (double d : delta_values) require(d >= 0.0 && std::isfinite(d), "experiment grid: delta must be nonnegative");
    for (double l : lambda_values) require(l >= 0.0 && std::isfinite(l), "experiment grid: lambda must be nonnegative");
}

std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t w : words) h = mix(h ^ mix(w));
    return h;
}

int thread_count_from_env() {
    if (const char* v = std::getenv("SINESPIKE_THREADS")) {
        const int t = std::atoi(v);
        if (t >= 1) return t;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

TrialOutcome run_trial(const Instance& inst, Method method, double lambda, int max_iters, bool local_opt) {
    TrialOutcome out;
    out.seed = inst.params.seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Estimate est;
        if (method == Method::Admm) {
            DemixConfig cfg;
            cfg.admm.lambda = lambda;
            cfg.admm.max_iters = max_iters;
            cfg.admm.record_trace = false;
            est = demix(inst.y, cfg).estimate;
        } else {
            GreedyConfig cfg;
            cfg.local_opt = local_opt;
            est = greedy_demix(inst.y, cfg).estimate;
        }
        const auto sc = recovery_score(inst, est.spectrum, est.spikes);
        out.exact = sc.exact_demix;
        out.relative_mse = sc.relative_mse;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

GridResult run_grid(const ExperimentGrid& grid, int threads) {
    grid.validate();
    GridResult res;
    res.grid = grid;
    for (std::size_t in = 0; in < grid.n_values.size(); ++in)
        for (std::size_t ik = 0; ik < grid.k_values.size(); ++ik)
            for (std::size_t is = 0; is < grid.s_values.size(); ++is)
                for (std::size_t id = 0; id < grid.delta_values.size(); ++id)
                    for (std::size_t il = 0; il < grid.lambda_values.size(); ++il) {
                        GridCell c;
                        c.in = in;
                        c.ik = ik;
                        c.is = is;
                        c.id = id;
                        c.il = il;
                        c.n = grid.n_values[in];
                        c.k = grid.k_values[ik];
                        c.s = grid.s_values[is];
                        c.delta = grid.delta_values[id];
                        const double lam = grid.lambda_values[il];
                        c.lambda = lam > 0.0 ? lam : 1.0 / std::sqrt(static_cast<double>(c.n));
                        c.trials.resize(static_cast<std::size_t>(grid.trials));
                        res.cells.push_back(std::move(c));
                    }

    const std::size_t total = res.cells.size() * static_cast<std::size_t>(grid.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            GridCell& c = res.cells[task / static_cast<std::size_t>(grid.trials)];
            const std::size_t t = task % static_cast<std::size_t>(grid.trials);
            GenerationParams p;
            p.n = c.n;
            p.k = c.k;
            p.s = c.s;
            p.delta_min = c.delta / (c.n - 1);
            p.amp_law = grid.amp_law;
            p.support_mode = grid.support_mode;
            p.seed = stable_hash({grid.base_seed, c.in, c.ik, c.is, c.id, c.il, t});
            TrialOutcome out;
            try {
                const Instance inst = generate_instance(p);
                out = run_trial(inst, grid.method, c.lambda, grid.max_iters, grid.local_opt);
            } catch (const std::exception& e) {
                out.error = e.what();
            }
            out.seed = p.seed;
            c.trials[t] = std::move(out);
        }
    };
    const int nt = std::max(1, std::min<int>(threads > 0 ? threads : thread_count_from_env(), static_cast<int>(total)));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& c : res.cells) {
        int ok = 0;
        double rt = 0.0;
        for (const auto& t : c.trials) {
            ok += t.exact ? 1 : 0;
            rt += t.runtime;
            c.failures += t.error.empty() ? 0 : 1;
        }
        c.fraction = static_cast<double>(ok) / static_cast<double>(c.trials.size());
        c.mean_runtime = rt / static_cast<double>(c.trials.size());
    }
    return res;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<CsvSlab> grid_csv(const GridResult& result) {
    const auto& g = result.grid;
    std::vector<CsvSlab> slabs;
    auto find = [&](std::size_t in, std::size_t ik, std::size_t is, std::size_t id, std::size_t il) -> const GridCell& {
        const std::size_t idx =
            (((in * g.k_values.size() + ik) * g.s_values.size() + is) * g.delta_values.size() + id) *
                g.lambda_values.size() + il;
        return result.cells[idx];
    };
    for (std::size_t in = 0; in < g.n_values.size(); ++in)
        for (std::size_t il = 0; il < g.lambda_values.size(); ++il)
            for (std::size_t is = 0; is < g.s_values.size(); ++is) {
                CsvSlab slab;
                slab.n = g.n_values[in];
                slab.s = g.s_values[is];
                slab.lambda = find(in, 0, is, 0, il).lambda;
                std::string csv = "delta_times_n_minus_1";
                for (int k : g.k_values) csv += "," + std::to_string(k);
                csv += "\n";
                for (std::size_t id = 0; id < g.delta_values.size(); ++id) {
                    csv += format_double(g.delta_values[id]);
                    for (std::size_t ik = 0; ik < g.k_values.size(); ++ik)
                        csv += "," + format_double(find(in, ik, is, id, il).fraction);
                    csv += "\n";
                }
                slab.csv = std::move(csv);
                slabs.push_back(std::move(slab));
            }
    return slabs;
}

} // namespace sinespike
