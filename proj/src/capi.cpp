#include "sinespike/sinespike.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "sinespike/serialize.hpp"

using namespace sinespike;

struct ssp_instance {
    Instance inst;
};

struct ssp_result {
    std::string json;
    std::vector<std::pair<std::string, std::string>> tables;
    bool converged = true;
};

namespace {

thread_local std::string g_last_error;

ssp_status status_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return SSP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Infeasible: return SSP_ERR_INFEASIBLE;
    case ErrorCode::Singular: return SSP_ERR_SINGULAR;
    case ErrorCode::NotConverged: return SSP_ERR_NOT_CONVERGED;
    case ErrorCode::Numerical: return SSP_ERR_NUMERICAL;
    case ErrorCode::Parse: return SSP_ERR_PARSE;
    }
    return SSP_ERR_INTERNAL;
}

template <class F>
ssp_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return SSP_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_for(e.code());
    } catch (const json::exception& e) {
        g_last_error = e.what();
        return SSP_ERR_PARSE;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SSP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SSP_ERR_INTERNAL;
    }
}

json parse_options(const char* text) {
    if (text == nullptr || *text == '\0') return json::object();
    try {
        json j = json::parse(text);
        if (!j.is_object()) fail(ErrorCode::Parse, "options must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, std::string("options are not valid JSON: ") + e.what());
    }
}

void check_handles(const void* a, const void* out) {
    if (a == nullptr || out == nullptr) fail(ErrorCode::InvalidArgument, "null handle or output pointer");
}

double resolve_lambda(const json& opt, int n) {
    if (opt.contains("lambda")) {
        const auto& l = opt.at("lambda");
        if (!(l.is_string() && l.get<std::string>() == "auto")) {
            const double v = l.get<double>();
            require(v > 0.0, "lambda must be positive");
            return v;
        }
    }
    return 1.0 / std::sqrt(static_cast<double>(n));
}

std::string trace_csv(const SolveReport& r) {
    std::string csv = "iter,r_primal,r_dual,objective\n";
    for (std::size_t i = 0; i < r.primal_residual_trace.size(); ++i)
        csv += std::to_string(i + 1) + "," + format_double(r.primal_residual_trace[i]) + "," +
               format_double(r.dual_residual_trace[i]) + "," + format_double(r.objective_trace[i]) + "\n";
    return csv;
}

std::string samples_csv(const CVector& v) {
    std::string csv = "l,re,im\n";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        csv += std::to_string(i + 1) + "," + format_double(v[i].real()) + "," + format_double(v[i].imag()) + "\n";
    return csv;
}

void attach_score(json& j, const Instance& inst, const Estimate& est) {
    if (inst.has_truth) j["score"] = to_json(recovery_score(inst, est.spectrum, est.spikes));
}

} // namespace

extern "C" {

const char* ssp_version(void) { return "1.0.0"; }

const char* ssp_status_name(ssp_status status) {
    switch (status) {
    case SSP_OK: return "ok";
    case SSP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SSP_ERR_INFEASIBLE: return "infeasible";
    case SSP_ERR_SINGULAR: return "singular";
    case SSP_ERR_NOT_CONVERGED: return "not converged";
    case SSP_ERR_NUMERICAL: return "numerical failure";
    case SSP_ERR_PARSE: return "parse error";
    case SSP_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* ssp_last_error(void) { return g_last_error.c_str(); }

ssp_status ssp_instance_generate(const char* params_json, ssp_instance** out) {
    return guarded([&] {
        check_handles(params_json, out);
        *out = nullptr;
        const GenerationParams p = params_from_json(parse_options(params_json));
        *out = new ssp_instance{generate_instance(p)};
    });
}

ssp_status ssp_instance_parse(const char* instance_json, ssp_instance** out) {
    return guarded([&] {
        check_handles(instance_json, out);
        *out = nullptr;
        json j;
        try {
            j = json::parse(instance_json);
        } catch (const json::parse_error& e) {
            fail(ErrorCode::Parse, std::string("instance is not valid JSON: ") + e.what());
        }
        *out = new ssp_instance{instance_from_json(j)};
    });
}

ssp_status ssp_instance_picket_fence(int n, ssp_instance** out) {
    return guarded([&] {
        if (out == nullptr) fail(ErrorCode::InvalidArgument, "null output pointer");
        *out = nullptr;
        *out = new ssp_instance{picket_fence(n)};
    });
}

ssp_status ssp_instance_size(const ssp_instance* inst, int* n) {
    return guarded([&] {
        check_handles(inst, n);
        *n = inst->inst.n();
    });
}

ssp_status ssp_instance_samples(const ssp_instance* inst, double* re, double* im, int len) {
    return guarded([&] {
        check_handles(inst, re);
        check_handles(inst, im);
        require(len == inst->inst.n(), "sample buffer length must equal n");
        for (int i = 0; i < len; ++i) {
            re[i] = inst->inst.y[i].real();
            im[i] = inst->inst.y[i].imag();
        }
    });
}

ssp_status ssp_instance_json(const ssp_instance* inst, char** out) {
    return guarded([&] {
        check_handles(inst, out);
        const std::string s = to_json(inst->inst).dump(2);
        char* buf = new char[s.size() + 1];
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
    });
}

void ssp_instance_free(ssp_instance* inst) { delete inst; }

ssp_status ssp_demix(const ssp_instance* inst, const char* options_json, ssp_result** out) {
    return guarded([&] {
        check_handles(inst, out);
        *out = nullptr;
        const json opt = parse_options(options_json);
        const Instance& in = inst->inst;
        DemixConfig cfg;
        cfg.admm = admm_config_from_json(opt.value("admm", json()));
        cfg.admm.gamma = std::numeric_limits<double>::infinity();
        cfg.admm.lambda = resolve_lambda(opt, in.n());
        cfg.decode = decode_config_from_json(opt.value("decode", json()));
        const std::string mode = opt.value("mode", std::string("joint"));
        require(mode == "joint" || mode == "masked", "mode must be joint or masked");
        cfg.mode = mode == "joint" ? AmplitudeMode::Joint : AmplitudeMode::Masked;
        cfg.polish = opt.value("polish", true);
        const bool traces = opt.value("traces", false);
        const DemixResult r = demix(in.y, cfg);
        auto res = std::make_unique<ssp_result>();
        json j = to_json(r, traces);
        j["n"] = in.n();
        attach_score(j, in, r.estimate);
        res->json = j.dump(2);
        res->converged = r.solve.converged;
        res->tables.emplace_back("trace", trace_csv(r.solve));
        *out = res.release();
    });
}

ssp_status ssp_denoise(const ssp_instance* inst, const char* options_json, ssp_result** out) {
    return guarded([&] {
        check_handles(inst, out);
        *out = nullptr;
        const json opt = parse_options(options_json);
        const Instance& in = inst->inst;
        AdmmConfig cfg = admm_config_from_json(opt.value("admm", json()));
        cfg.lambda = resolve_lambda(opt, in.n());
        if (opt.contains("gamma")) {
            cfg.gamma = opt.at("gamma").get<double>();
        } else {
            const double sigma = in.has_truth ? in.dense_noise.norm() : 0.0;
            require(sigma > 0.0, "denoise needs gamma, or an instance with known nonzero noise level");
            cfg.gamma = 1.0 / sigma;
        }
        require(cfg.gamma > 0.0 && std::isfinite(cfg.gamma), "gamma must be positive and finite");
        const SolveReport r = admm_solve(in.y, cfg);
        auto res = std::make_unique<ssp_result>();
        json j = to_json(r, opt.value("traces", false));
        j["n"] = in.n();
        if (in.has_truth) {
            const CVector g = in.clean();
            j["g_relative_error"] = g.norm() > 0.0 ? (r.g_hat - g).norm() / g.norm() : r.g_hat.norm();
        }
        res->json = j.dump(2);
        res->converged = r.converged;
        res->tables.emplace_back("trace", trace_csv(r));
        res->tables.emplace_back("g_hat", samples_csv(r.g_hat));
        res->tables.emplace_back("z_hat", samples_csv(r.z_hat));
        *out = res.release();
    });
}

ssp_status ssp_greedy(const ssp_instance* inst, const char* options_json, ssp_result** out) {
    return guarded([&] {
        check_handles(inst, out);
        *out = nullptr;
        const json opt = parse_options(options_json);
        const Instance& in = inst->inst;
        const GreedyConfig cfg = greedy_config_from_json(opt.value("greedy", json()));
        const GreedyResult r = greedy_demix(in.y, cfg);
        auto res = std::make_unique<ssp_result>();
        json j = to_json(r);
        j["n"] = in.n();
        attach_score(j, in, r.estimate);
        res->json = j.dump(2);
        res->converged = r.converged;
        std::string csv = "iter,residual,n_sines,n_spikes\n";
        for (const auto& e : r.trace)
            csv += std::to_string(e.iter) + "," + format_double(e.residual) + "," + std::to_string(e.n_sines) + "," +
                   std::to_string(e.n_spikes) + "\n";
        res->tables.emplace_back("trace", csv);
        *out = res.release();
    });
}

ssp_status ssp_certificate(const ssp_instance* inst, const char* options_json, ssp_result** out) {
    return guarded([&] {
        check_handles(inst, out);
        *out = nullptr;
        const json opt = parse_options(options_json);
        const Instance& in = inst->inst;
        require(in.has_truth, "certificate construction needs the true supports");
        require(!in.spectrum.empty(), "certificate construction needs at least one spectral line");
        const int n = in.n();
        const double lambda = resolve_lambda(opt, n);
        const KernelSpec spec = build_kernel(half_length_for(n));
        const auto T = in.spectrum.frequencies();
        CVector h(static_cast<Eigen::Index>(T.size()));
        for (std::size_t j = 0; j < T.size(); ++j) {
            const cplx a = in.spectrum.lines()[j].amp;
            h[static_cast<Eigen::Index>(j)] = std::abs(a) > 0.0 ? a / std::abs(a) : cplx(1.0, 0.0);
        }
        const auto omega = in.spikes.support();
        CVector r(static_cast<Eigen::Index>(omega.size()));
        for (std::size_t c = 0; c < omega.size(); ++c) {
            const cplx v = in.spikes.values().at(omega[c]);
            r[static_cast<Eigen::Index>(c)] = v / std::abs(v);
        }
        InterpSystem sys = build_system(spec, T, omega, n);
        const DualPolynomial poly = construct_certificate(sys, h, r, lambda, spec);
        VerifyOptions vo;
        vo.grid_size = opt.value("grid_size", 0);
        vo.guard_radius = opt.value("guard_radius", -1.0);
        const CertificateReport rep = verify_certificate(poly, T, omega, h, r, vo);
        auto res = std::make_unique<ssp_result>();
        json j{{"n", n},
               {"lambda", lambda},
               {"kappa", spec.kappa},
               {"smallest_singular_value", smallest_singular_value(sys.D)},
               {"report", to_json(rep)}};
        if (opt.value("coefficients", false)) j["polynomial"] = to_json(poly);
        res->json = j.dump(2);
        *out = res.release();
    });
}

ssp_status ssp_baseline(const ssp_instance* inst, const char* options_json, ssp_result** out) {
    return guarded([&] {
        check_handles(inst, out);
        *out = nullptr;
        const json opt = parse_options(options_json);
        const Instance& in = inst->inst;
        const int n = in.n();
        const std::string method = opt.value("method", std::string("periodogram"));
        auto res = std::make_unique<ssp_result>();
        json j{{"n", n}, {"method", method}};
        std::string csv = "f,magnitude\n";
        if (method == "periodogram") {
            PeriodogramConfig cfg;
            const std::string w = opt.value("window", std::string("none"));
            if (w == "none")
                cfg.window = Window::None;
            else if (w == "hann")
                cfg.window = Window::Hann;
            else if (w == "hamming")
                cfg.window = Window::Hamming;
            else
                fail(ErrorCode::InvalidArgument, "unknown window: " + w);
            cfg.grid_size = opt.value("grid_size", 0);
            cfg.peak_rel_threshold = opt.value("peak_threshold", cfg.peak_rel_threshold);
            const Periodogram p = periodogram(in.y, cfg);
            j["peaks"] = p.peaks;
            const auto G = p.magnitude.size();
            for (std::size_t g = 0; g < G; ++g)
                csv += format_double(static_cast<double>(g) / static_cast<double>(G)) + "," + format_double(p.magnitude[g]) + "\n";
        } else if (method == "music") {
            int k = opt.value("k", 0);
            if (k <= 0 && in.has_truth) k = static_cast<int>(in.spectrum.size());
            require(k >= 1, "music needs a model order k");
            const MusicResult m = music(in.y, k, opt.value("subarray", 0), opt.value("grid_size", 0));
            j["frequencies"] = m.freqs;
            const auto G = m.pseudospectrum.size();
            for (std::size_t g = 0; g < G; ++g)
                csv += format_double(static_cast<double>(g) / static_cast<double>(G)) + "," +
                       format_double(m.pseudospectrum[g]) + "\n";
        } else {
            fail(ErrorCode::InvalidArgument, "unknown baseline method: " + method);
        }
        if (in.has_truth) j["true_frequencies"] = in.spectrum.frequencies();
        res->json = j.dump(2);
        res->tables.emplace_back("spectrum", csv);
        *out = res.release();
    });
}

ssp_status ssp_grid(const char* grid_json, ssp_result** out) {
    return guarded([&] {
        check_handles(grid_json, out);
        *out = nullptr;
        const ExperimentGrid g = grid_from_json(parse_options(grid_json));
        const GridResult r = run_grid(g);
        auto res = std::make_unique<ssp_result>();
        res->json = to_json(r).dump(2);
        for (const auto& slab : grid_csv(r)) {
            char name[96];
            std::snprintf(name, sizeof name, "n%d_lambda%g_s%d", slab.n, slab.lambda, slab.s);
            res->tables.emplace_back(name, slab.csv);
        }
        *out = res.release();
    });
}

ssp_status ssp_result_json(const ssp_result* res, const char** json_out) {
    return guarded([&] {
        check_handles(res, json_out);
        *json_out = res->json.c_str();
    });
}

int ssp_result_converged(const ssp_result* res) { return res != nullptr && res->converged ? 1 : 0; }

int ssp_result_table_count(const ssp_result* res) { return res == nullptr ? 0 : static_cast<int>(res->tables.size()); }

ssp_status ssp_result_table(const ssp_result* res, int index, const char** name, const char** csv) {
    return guarded([&] {
        check_handles(res, name);
        check_handles(res, csv);
        require(index >= 0 && index < static_cast<int>(res->tables.size()), "table index out of range");
        *name = res->tables[static_cast<std::size_t>(index)].first.c_str();
        *csv = res->tables[static_cast<std::size_t>(index)].second.c_str();
    });
}

void ssp_result_free(ssp_result* res) { delete res; }

void ssp_string_free(char* s) { delete[] s; }

} // extern "C"
