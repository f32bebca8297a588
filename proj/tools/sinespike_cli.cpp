// Command-line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sinespike/sinespike.h"

namespace {

enum Exit { kOk = 0, kFailure = 1, kBadConfig = 2, kNotConverged = 3 };

struct Common {
    unsigned long long seed = 0;
    std::string out;
    std::string format;
};

struct Source {
    std::string in;
    int n = 61;
    int k = 5;
    int s = 10;
    double delta = 2.52;
    std::string amp_law = "unit_phase";
    std::string support_mode = "fixed";
    double noise = 0.0;
};

int exit_for(ssp_status st) {
    switch (st) {
    case SSP_OK: return kOk;
    case SSP_ERR_INVALID_ARGUMENT:
    case SSP_ERR_INFEASIBLE:
    case SSP_ERR_PARSE: return kBadConfig;
    case SSP_ERR_NOT_CONVERGED: return kNotConverged;
    default: return kFailure;
    }
}

int report(ssp_status st) {
    std::fprintf(stderr, "error (%s): %s\n", ssp_status_name(st), ssp_last_error());
    return exit_for(st);
}

bool read_file(const std::string& path, std::string& text) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
    return true;
}

bool emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
        return true;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot write %s\n", c.out.c_str());
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') q += '\\';
        q += ch;
    }
    return q + "\"";
}

std::string params_json(const Source& s, unsigned long long seed) {
    std::ostringstream o;
    o.precision(17);
    o << "{\"n\":" << s.n << ",\"k\":" << s.k << ",\"s\":" << s.s << ",\"delta\":" << s.delta
      << ",\"amp_law\":" << quote(s.amp_law) << ",\"support_mode\":" << quote(s.support_mode)
      << ",\"noise_level\":" << s.noise << ",\"seed\":" << seed << "}";
    return o.str();
}

void add_source(CLI::App* app, Source& s) {
    app->add_option("--in", s.in, "Instance JSON file; otherwise an instance is generated");
    app->add_option("--n", s.n, "Number of samples");
    app->add_option("--k", s.k, "Number of spectral lines");
    app->add_option("--s", s.s, "Number of outliers");
    app->add_option("--delta", s.delta, "Minimum separation in units of 1/(n-1)");
    app->add_option("--amp-law", s.amp_law, "unit_phase | complex_gaussian");
    app->add_option("--support-mode", s.support_mode, "fixed | bernoulli");
    app->add_option("--noise", s.noise, "Dense noise l2 norm");
}

// Common is shared by all subcommands, so the format default is applied after parsing.
void add_common(CLI::App* app, Common& c, const std::string& default_format) {
    app->add_option("--seed", c.seed, "Random seed");
    app->add_option("--out", c.out, "Output file (default stdout)");
    app->add_option("--format", c.format, "csv | json (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
}

ssp_status load_instance(const Source& s, const Common& c, ssp_instance** inst) {
    if (!s.in.empty()) {
        std::string text;
        if (!read_file(s.in, text)) {
            std::fprintf(stderr, "error: cannot read %s\n", s.in.c_str());
            return SSP_ERR_INVALID_ARGUMENT;
        }
        return ssp_instance_parse(text.c_str(), inst);
    }
    return ssp_instance_generate(params_json(s, c.seed).c_str(), inst);
}

// Emits either the JSON document or the first CSV table of a result.
int finish(ssp_result* res, const Common& c, bool check_convergence) {
    std::string text;
    if (c.format == "csv" && ssp_result_table_count(res) > 0) {
        const char* name = nullptr;
        const char* csv = nullptr;
        ssp_result_table(res, 0, &name, &csv);
        text = csv;
    } else {
        const char* js = nullptr;
        ssp_result_json(res, &js);
        text = js;
    }
    const bool converged = ssp_result_converged(res) != 0;
    ssp_result_free(res);
    if (!emit(c, text)) return kFailure;
    if (check_convergence && !converged) {
        std::fprintf(stderr, "warning: solver stopped before meeting its tolerances\n");
        return kNotConverged;
    }
    return kOk;
}

using SolverFn = ssp_status (*)(const ssp_instance*, const char*, ssp_result**);

int run_solver(SolverFn fn, const Source& s, const Common& c, const std::string& options, bool check_convergence) {
    ssp_instance* inst = nullptr;
    ssp_status st = load_instance(s, c, &inst);
    if (st != SSP_OK) return report(st);
    ssp_result* res = nullptr;
    st = fn(inst, options.c_str(), &res);
    ssp_instance_free(inst);
    if (st != SSP_OK) return report(st);
    return finish(res, c, check_convergence);
}

std::string lambda_field(const std::string& lambda) {
    return lambda == "auto" ? "\"auto\"" : lambda;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Demixing of line spectra and sparse outliers"};
    app.require_subcommand(1);

    Common c;
    Source src;
    std::string lambda = "auto";
    std::string options = "{}";

    auto* synth = app.add_subcommand("synth", "Generate a random instance");
    add_common(synth, c, "json");
    add_source(synth, src);

    auto* demix = app.add_subcommand("demix", "Equality-constrained demixing by ADMM, decoding and least squares");
    add_common(demix, c, "json");
    add_source(demix, src);
    demix->add_option("--lambda", lambda, "Outlier weight, or auto for 1/sqrt(n)");
    demix->add_option("--options", options, "Extra solver options as JSON");

    double gamma = 0.0;
    auto* denoise = app.add_subcommand("denoise", "ADMM with a quadratic data-fit term");
    add_common(denoise, c, "json");
    add_source(denoise, src);
    denoise->add_option("--lambda", lambda, "Outlier weight, or auto for 1/sqrt(n)");
    denoise->add_option("--gamma", gamma, "Data-fit weight (default 1/noise level)");
    denoise->add_option("--options", options, "Extra solver options as JSON");

    bool no_local_opt = false;
    double tau = -1.0;
    auto* greedy = app.add_subcommand("greedy", "Greedy demixing with local optimization");
    add_common(greedy, c, "json");
    add_source(greedy, src);
    greedy->add_flag("--no-local-opt", no_local_opt, "Disable the simplex refinement step");
    greedy->add_option("--tau", tau, "Pruning threshold");

    int grid_size = 0;
    auto* cert = app.add_subcommand("certificate", "Construct and verify the dual certificate of the true supports");
    add_common(cert, c, "json");
    add_source(cert, src);
    cert->add_option("--lambda", lambda, "Outlier weight, or auto for 1/sqrt(n)");
    cert->add_option("--grid-size", grid_size, "Verification grid size (default 1e4 n)");

    std::string method = "periodogram";
    std::string window = "none";
    int model_order = 0;
    auto* base = app.add_subcommand("baseline", "Periodogram or MUSIC spectrum");
    add_common(base, c, "json");
    add_source(base, src);
    base->add_option("--method", method, "periodogram | music")->check(CLI::IsMember({"periodogram", "music"}));
    base->add_option("--window", window, "none | hann | hamming")->check(CLI::IsMember({"none", "hann", "hamming"}));
    base->add_option("--model-order", model_order, "MUSIC model order (default: true k)");

    std::string config;
    auto* grid = app.add_subcommand("grid", "Run a phase-transition experiment grid");
    add_common(grid, c, "csv");
    grid->add_option("--config", config, "Grid configuration JSON file")->required();

    int picket_n = 16;
    auto* picket = app.add_subcommand("picket", "Picket-fence instance: zero data from nonzero lines and outliers");
    add_common(picket, c, "json");
    picket->add_option("--n", picket_n, "Perfect square sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadConfig;
    }
    if (c.format.empty()) c.format = grid->parsed() ? "csv" : "json";

    if (synth->parsed()) {
        ssp_instance* inst = nullptr;
        ssp_status st = load_instance(src, c, &inst);
        if (st != SSP_OK) return report(st);
        std::string text;
        if (c.format == "csv") {
            int n = 0;
            ssp_instance_size(inst, &n);
            std::vector<double> re(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
            ssp_instance_samples(inst, re.data(), im.data(), n);
            std::ostringstream o;
            o.precision(17);
            o << "l,re,im\n";
            for (int i = 0; i < n; ++i) o << i + 1 << "," << re[static_cast<std::size_t>(i)] << "," << im[static_cast<std::size_t>(i)] << "\n";
            text = o.str();
        } else {
            char* js = nullptr;
            st = ssp_instance_json(inst, &js);
            if (st != SSP_OK) {
                ssp_instance_free(inst);
                return report(st);
            }
            text = js;
            ssp_string_free(js);
        }
        ssp_instance_free(inst);
        return emit(c, text) ? kOk : kFailure;
    }
    if (demix->parsed()) {
        std::string opt = "{\"lambda\":" + lambda_field(lambda) + ",\"admm\":" + options + "}";
        return run_solver(ssp_demix, src, c, opt, true);
    }
    if (denoise->parsed()) {
        std::ostringstream o;
        o.precision(17);
        o << "{\"lambda\":" << lambda_field(lambda) << ",\"admm\":" << options;
        if (gamma > 0.0) o << ",\"gamma\":" << gamma;
        o << "}";
        return run_solver(ssp_denoise, src, c, o.str(), true);
    }
    if (greedy->parsed()) {
        std::ostringstream o;
        o.precision(17);
        o << "{\"greedy\":{\"local_opt\":" << (no_local_opt ? "false" : "true") << ",\"tau\":" << tau << "}}";
        return run_solver(ssp_greedy, src, c, o.str(), true);
    }
    if (cert->parsed()) {
        std::string opt = "{\"lambda\":" + lambda_field(lambda) + ",\"grid_size\":" + std::to_string(grid_size) + "}";
        return run_solver(ssp_certificate, src, c, opt, false);
    }
    if (base->parsed()) {
        std::string opt = "{\"method\":" + quote(method) + ",\"window\":" + quote(window) +
                          ",\"k\":" + std::to_string(model_order) + "}";
        return run_solver(ssp_baseline, src, c, opt, false);
    }
    if (grid->parsed()) {
        std::string text;
        if (!read_file(config, text)) {
            std::fprintf(stderr, "error: cannot read %s\n", config.c_str());
            return kBadConfig;
        }
        if (grid->count("--seed") > 0) {
            // An explicit --seed replaces the base seed of the configuration.
            auto j = nlohmann::json::parse(text, nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                std::fprintf(stderr, "error: %s is not a JSON object\n", config.c_str());
                return kBadConfig;
            }
            j["base_seed"] = c.seed;
            text = j.dump();
        }
        ssp_result* res = nullptr;
        const ssp_status st = ssp_grid(text.c_str(), &res);
        if (st != SSP_OK) return report(st);
        if (c.format == "json") return finish(res, c, false);
        const int count = ssp_result_table_count(res);
        int rc = kOk;
        std::string all;
        for (int i = 0; i < count; ++i) {
            const char* name = nullptr;
            const char* csv = nullptr;
            ssp_result_table(res, i, &name, &csv);
            if (!c.out.empty() && count > 1) {
                // One file per slab next to the requested path.
                Common slab = c;
                const auto dot = c.out.rfind('.');
                const std::string stem = dot == std::string::npos ? c.out : c.out.substr(0, dot);
                slab.out = stem + "_" + name + ".csv";
                if (!emit(slab, csv)) rc = kFailure;
            } else {
                if (!all.empty()) all += "\n";
                all += csv;
            }
        }
        ssp_result_free(res);
        if (!all.empty() && !emit(c, all)) rc = kFailure;
        return rc;
    }
    if (picket->parsed()) {
        ssp_instance* inst = nullptr;
        ssp_status st = ssp_instance_picket_fence(picket_n, &inst);
        if (st != SSP_OK) return report(st);
        ssp_result* res = nullptr;
        st = ssp_demix(inst, "{\"lambda\":\"auto\"}", &res);
        if (st != SSP_OK) {
            ssp_instance_free(inst);
            return report(st);
        }
        std::string text;
        if (c.format == "csv") {
            int n = 0;
            ssp_instance_size(inst, &n);
            std::vector<double> re(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
            ssp_instance_samples(inst, re.data(), im.data(), n);
            std::ostringstream o;
            o.precision(17);
            o << "l,re,im\n";
            for (int i = 0; i < n; ++i) o << i + 1 << "," << re[static_cast<std::size_t>(i)] << "," << im[static_cast<std::size_t>(i)] << "\n";
            text = o.str();
        } else {
            char* inst_js = nullptr;
            ssp_instance_json(inst, &inst_js);
            const char* res_js = nullptr;
            ssp_result_json(res, &res_js);
            text = std::string("{\"instance\":") + inst_js + ",\"demix\":" + res_js + "}";
            ssp_string_free(inst_js);
        }
        ssp_result_free(res);
        ssp_instance_free(inst);
        return emit(c, text) ? kOk : kFailure;
    }
    return kBadConfig;
}
