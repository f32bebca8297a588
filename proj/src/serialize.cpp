#include "sinespike/serialize.hpp"

#include <cmath>

namespace sinespike {

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string law_name(AmplitudeLaw a) { return a == AmplitudeLaw::UnitPhase ? "unit_phase" : "complex_gaussian"; }

AmplitudeLaw law_from(const std::string& s) {
    if (s == "unit_phase") return AmplitudeLaw::UnitPhase;
    if (s == "complex_gaussian" || s == "gaussian") return AmplitudeLaw::ComplexGaussian;
    fail(ErrorCode::Parse, "unknown amplitude law: " + s);
}

std::string support_name(OutlierSupport s) { return s == OutlierSupport::FixedCardinality ? "fixed" : "bernoulli"; }

OutlierSupport support_from(const std::string& s) {
    if (s == "fixed") return OutlierSupport::FixedCardinality;
    if (s == "bernoulli") return OutlierSupport::Bernoulli;
    fail(ErrorCode::Parse, "unknown outlier support mode: " + s);
}

} // namespace

json complex_array(const CVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({{"re", v[i].real()}, {"im", v[i].imag()}});
    return a;
}

CVector complex_array_from(const json& j) {
    if (!j.is_array()) fail(ErrorCode::Parse, "expected an array of complex numbers");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (e.is_number())
            v[static_cast<Eigen::Index>(i)] = cplx(e.get<double>(), 0.0);
        else
            v[static_cast<Eigen::Index>(i)] = cplx(get_or(e, "re", 0.0), get_or(e, "im", 0.0));
    }
    return v;
}

json to_json(const GenerationParams& p) {
    return {{"n", p.n},
            {"k", p.k},
            {"s", p.s},
            {"delta_min", p.delta_min},
            {"amp_law", law_name(p.amp_law)},
            {"support_mode", support_name(p.support_mode)},
            {"noise_level", p.noise_level},
            {"seed", p.seed}};
}

GenerationParams params_from_json(const json& j) {
    GenerationParams p;
    p.n = get_or(j, "n", p.n);
    p.k = get_or(j, "k", p.k);
    p.s = get_or(j, "s", p.s);
    p.delta_min = get_or(j, "delta_min", p.delta_min);
    if (j.contains("delta")) {
        // Separation given in units of 1/(n-1).
        p.delta_min = j.at("delta").get<double>() / (p.n - 1);
    }
    p.amp_law = law_from(get_or<std::string>(j, "amp_law", law_name(p.amp_law)));
    p.support_mode = support_from(get_or<std::string>(j, "support_mode", support_name(p.support_mode)));
    p.noise_level = get_or(j, "noise_level", p.noise_level);
    p.seed = get_or<std::uint64_t>(j, "seed", p.seed);
    return p;
}

json to_json(const LineSpectrum& s) {
    json a = json::array();
    for (const auto& l : s.lines()) a.push_back({{"f", l.freq}, {"re", l.amp.real()}, {"im", l.amp.imag()}});
    return a;
}

json to_json(const SpikeVector& s) {
    json a = json::array();
    for (const auto& [l, v] : s.values()) a.push_back({{"l", l}, {"re", v.real()}, {"im", v.imag()}});
    return a;
}

json to_json(const Instance& inst) {
    json j;
    j["n"] = inst.n();
    if (inst.has_truth) {
        j["spectrum"] = to_json(inst.spectrum);
        j["spikes"] = to_json(inst.spikes);
        j["noise"] = complex_array(inst.dense_noise);
    }
    j["seed"] = inst.params.seed;
    j["params"] = to_json(inst.params);
    j["y"] = complex_array(inst.y);
    return j;
}

Instance instance_from_json(const json& j) {
    try {
        if (!j.is_object()) fail(ErrorCode::Parse, "instance must be a JSON object");
        const bool truth = j.contains("spectrum") || j.contains("spikes");
        if (!truth) {
            if (!j.contains("y")) fail(ErrorCode::Parse, "instance needs either ground truth or a y array");
            Instance inst;
            inst.y = complex_array_from(j.at("y"));
            require(inst.y.size() >= 2, "instance needs at least two samples");
            inst.has_truth = false;
            inst.spikes = SpikeVector(static_cast<int>(inst.y.size()));
            inst.dense_noise = CVector::Zero(inst.y.size());
            inst.params.n = static_cast<int>(inst.y.size());
            inst.params.seed = get_or<std::uint64_t>(j, "seed", 0);
            return inst;
        }
        const int n = j.at("n").get<int>();
        std::vector<SpectralLine> lines;
        for (const auto& e : j.value("spectrum", json::array()))
            lines.push_back({e.at("f").get<double>(), cplx(get_or(e, "re", 0.0), get_or(e, "im", 0.0))});
        std::map<int, cplx> spikes;
        for (const auto& e : j.value("spikes", json::array()))
            spikes.emplace(e.at("l").get<int>(), cplx(get_or(e, "re", 0.0), get_or(e, "im", 0.0)));
        CVector noise = CVector::Zero(n);
        if (j.contains("noise") && !j.at("noise").empty()) {
            noise = complex_array_from(j.at("noise"));
            require(noise.size() == n, "noise length must equal n");
        }
        Instance inst = make_instance(LineSpectrum(std::move(lines)), SpikeVector(n, spikes), noise);
        if (j.contains("params")) {
            const GenerationParams p = params_from_json(j.at("params"));
            inst.params.amp_law = p.amp_law;
            inst.params.support_mode = p.support_mode;
        }
        inst.params.seed = get_or<std::uint64_t>(j, "seed", 0);
        return inst;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed instance JSON: ") + e.what());
    }
}

json to_json(const RecoveryScore& s) {
    return {{"relative_mse", s.relative_mse},
            {"hausdorff", s.hausdorff},
            {"spike_support_match", s.spike_support_match},
            {"exact_demix", s.exact_demix}};
}

json to_json(const SolveReport& r, bool traces) {
    json j{{"g_hat", complex_array(r.g_hat)},
           {"z_hat", complex_array(r.z_hat)},
           {"eta", complex_array(r.eta)},
           {"iterations", r.iterations},
           {"outer_iterations", r.outer_iterations},
           {"lambda", r.lambda},
           {"gamma", finite_or_null(r.gamma)},
           {"primal_objective", r.primal_objective},
           {"dual_objective", r.dual_objective},
           {"duality_gap", r.duality_gap},
           {"equality_residual", r.equality_residual},
           {"final_rho", r.final_rho},
           {"converged", r.converged},
           {"dual_feasibility",
            {{"grid_max", r.dual_feasibility.grid_max},
             {"eta_inf", r.dual_feasibility.eta_inf},
             {"ok", r.dual_feasibility.ok}}}};
    if (traces) {
        j["primal_residual_trace"] = r.primal_residual_trace;
        j["dual_residual_trace"] = r.dual_residual_trace;
        j["objective_trace"] = r.objective_trace;
    }
    return j;
}

json to_json(const Supports& s) { return {{"frequencies", s.freqs}, {"omega", s.omega}}; }

json to_json(const Estimate& e) { return {{"spectrum", to_json(e.spectrum)}, {"spikes", to_json(e.spikes)}}; }

json to_json(const DemixResult& r, bool traces) {
    return {{"solve", to_json(r.solve, traces)}, {"decoded", to_json(r.decoded)}, {"estimate", to_json(r.estimate)}};
}

json to_json(const CertificateReport& r) {
    return {{"interpolation_err", r.interpolation_err},
            {"derivative_err", r.derivative_err},
            {"offsupport_max", r.offsupport_max},
            {"q_on_omega_err", r.q_on_omega_err},
            {"q_off_omega_max", r.q_off_omega_max},
            {"concave_at_support", r.concave_at_support},
            {"valid", r.valid}};
}

json to_json(const DualPolynomial& p) { return {{"lambda", p.lambda}, {"q", complex_array(p.q)}}; }

json to_json(const GreedyResult& r) {
    json trace = json::array();
    for (const auto& e : r.trace)
        trace.push_back({{"iter", e.iter},
                         {"residual", e.residual},
                         {"n_sines", e.n_sines},
                         {"n_spikes", e.n_spikes},
                         {"selected", e.selected.kind == AtomKind::Sine ? "sine" : "spike"}});
    return {{"estimate", to_json(r.estimate)}, {"converged", r.converged}, {"trace", trace}};
}

json to_json(const ExperimentGrid& g) {
    return {{"n_values", g.n_values},
            {"k_values", g.k_values},
            {"s_values", g.s_values},
            {"delta_values", g.delta_values},
            {"lambda_values", g.lambda_values},
            {"trials", g.trials},
            {"base_seed", g.base_seed},
            {"method", g.method == Method::Admm ? "admm" : "greedy"},
            {"amp_law", law_name(g.amp_law)},
            {"support_mode", support_name(g.support_mode)},
            {"max_iters", g.max_iters},
            {"local_opt", g.local_opt}};
}

ExperimentGrid grid_from_json(const json& j) {
    try {
        if (!j.is_object()) fail(ErrorCode::Parse, "grid config must be a JSON object");
        ExperimentGrid g;
        g.n_values = j.at("n_values").get<std::vector<int>>();
        g.k_values = j.at("k_values").get<std::vector<int>>();
        g.s_values = j.at("s_values").get<std::vector<int>>();
        g.delta_values = j.at("delta_values").get<std::vector<double>>();
        if (j.contains("lambda_values")) {
            for (const auto& v : j.at("lambda_values")) {
                if (v.is_string() && v.get<std::string>() == "auto")
                    g.lambda_values.push_back(0.0);
                else
                    g.lambda_values.push_back(v.get<double>());
            }
        } else {
            g.lambda_values = {0.0};
        }
        g.trials = get_or(j, "trials", g.trials);
        g.base_seed = get_or<std::uint64_t>(j, "base_seed", g.base_seed);
        const auto method = get_or<std::string>(j, "method", "admm");
        if (method == "admm")
            g.method = Method::Admm;
        else if (method == "greedy")
            g.method = Method::Greedy;
        else
            fail(ErrorCode::Parse, "unknown method: " + method);
        g.amp_law = law_from(get_or<std::string>(j, "amp_law", law_name(g.amp_law)));
        g.support_mode = support_from(get_or<std::string>(j, "support_mode", support_name(g.support_mode)));
        g.max_iters = get_or(j, "max_iters", g.max_iters);
        g.local_opt = get_or(j, "local_opt", g.local_opt);
        g.validate();
        return g;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed grid config: ") + e.what());
    }
}

json to_json(const GridResult& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        json trials = json::array();
        for (const auto& t : c.trials) {
            json tj{{"seed", t.seed}, {"exact", t.exact}, {"relative_mse", t.relative_mse}, {"runtime", t.runtime}};
            if (!t.error.empty()) tj["error"] = t.error;
            trials.push_back(tj);
        }
        cells.push_back({{"n", c.n},
                         {"k", c.k},
                         {"s", c.s},
                         {"delta", c.delta},
                         {"lambda", c.lambda},
                         {"fraction", c.fraction},
                         {"mean_runtime", c.mean_runtime},
                         {"failures", c.failures},
                         {"trials", trials}});
    }
    return {{"grid", to_json(r.grid)}, {"cells", cells}};
}

AdmmConfig admm_config_from_json(const json& j, AdmmConfig base) {
    if (j.is_null()) return base;
    try {
        base.rho = get_or(j, "rho", base.rho);
        if (j.contains("lambda")) {
            const auto& l = j.at("lambda");
            base.lambda = l.is_string() && l.get<std::string>() == "auto" ? 0.0 : l.get<double>();
        }
        if (j.contains("gamma") && !j.at("gamma").is_null()) base.gamma = j.at("gamma").get<double>();
        base.max_iters = get_or(j, "max_iters", base.max_iters);
        base.primal_tol = get_or(j, "primal_tol", base.primal_tol);
        base.dual_tol = get_or(j, "dual_tol", base.dual_tol);
        base.adaptive_rho = get_or(j, "adaptive_rho", base.adaptive_rho);
        base.equality_tol = get_or(j, "equality_tol", base.equality_tol);
        const auto strat = get_or<std::string>(j, "equality", base.equality == EqualityStrategy::Bregman ? "bregman" : "continuation");
        if (strat == "bregman")
            base.equality = EqualityStrategy::Bregman;
        else if (strat == "continuation")
            base.equality = EqualityStrategy::Continuation;
        else
            fail(ErrorCode::Parse, "unknown equality strategy: " + strat);
        base.equality_gamma = get_or(j, "equality_gamma", base.equality_gamma);
        base.gamma0 = get_or(j, "gamma0", base.gamma0);
        base.max_outer = get_or(j, "max_outer", base.max_outer);
        base.record_trace = get_or(j, "record_trace", base.record_trace);
        return base;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed solver options: ") + e.what());
    }
}

GreedyConfig greedy_config_from_json(const json& j, GreedyConfig base) {
    if (j.is_null()) return base;
    try {
        base.tau = get_or(j, "tau", base.tau);
        base.fft_oversample = get_or(j, "fft_oversample", base.fft_oversample);
        base.max_atoms = get_or(j, "max_atoms", base.max_atoms);
        base.max_outer_iters = get_or(j, "max_outer_iters", base.max_outer_iters);
        base.simplex_tol = get_or(j, "simplex_tol", base.simplex_tol);
        base.simplex_max_evals = get_or(j, "simplex_max_evals", base.simplex_max_evals);
        base.local_opt = get_or(j, "local_opt", base.local_opt);
        return base;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed greedy options: ") + e.what());
    }
}

DecodeConfig decode_config_from_json(const json& j, DecodeConfig base) {
    if (j.is_null()) return base;
    try {
        base.eta_tol = get_or(j, "eta_tol", base.eta_tol);
        base.poly_tol = get_or(j, "poly_tol", base.poly_tol);
        base.grid_oversample = get_or(j, "grid_oversample", base.grid_oversample);
        base.cluster_radius = get_or(j, "cluster_radius", base.cluster_radius);
        return base;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed decode options: ") + e.what());
    }
}

} // namespace sinespike
