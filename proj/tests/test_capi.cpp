#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sinespike/sinespike.h"

using nlohmann::json;

namespace {

struct InstanceHandle {
    ssp_instance* p = nullptr;
    ~InstanceHandle() { ssp_instance_free(p); }
};

struct ResultHandle {
    ssp_result* p = nullptr;
    ~ResultHandle() { ssp_result_free(p); }
    json doc() const {
        const char* text = nullptr;
        REQUIRE(ssp_result_json(p, &text) == SSP_OK);
        return json::parse(text);
    }
};

const char* kParams = R"({"n": 41, "k": 3, "s": 5, "delta": 2.6, "seed": 11})";

} // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(ssp_version()).size() > 0);
    CHECK(std::string(ssp_status_name(SSP_OK)) == "ok");
    CHECK(std::string(ssp_status_name(SSP_ERR_PARSE)).find("parse") != std::string::npos);
    CHECK(std::string(ssp_status_name(static_cast<ssp_status>(99))) == "unknown");
}

TEST_CASE("instances: generate, inspect, serialize, parse back") {
    InstanceHandle a;
    REQUIRE(ssp_instance_generate(kParams, &a.p) == SSP_OK);
    CHECK(std::string(ssp_last_error()).empty());
    int n = 0;
    REQUIRE(ssp_instance_size(a.p, &n) == SSP_OK);
    CHECK(n == 41);
    std::vector<double> re(41), im(41);
    REQUIRE(ssp_instance_samples(a.p, re.data(), im.data(), 41) == SSP_OK);
    CHECK(ssp_instance_samples(a.p, re.data(), im.data(), 40) == SSP_ERR_INVALID_ARGUMENT);

    char* text = nullptr;
    REQUIRE(ssp_instance_json(a.p, &text) == SSP_OK);
    const json doc = json::parse(text);
    CHECK(doc["spectrum"].size() == 3);
    CHECK(doc["spikes"].size() == 5);
    InstanceHandle b;
    REQUIRE(ssp_instance_parse(text, &b.p) == SSP_OK);
    ssp_string_free(text);
    std::vector<double> re2(41), im2(41);
    REQUIRE(ssp_instance_samples(b.p, re2.data(), im2.data(), 41) == SSP_OK);
    for (int i = 0; i < 41; ++i) {
        CHECK(std::abs(re[i] - re2[i]) < 1e-14);
        CHECK(std::abs(im[i] - im2[i]) < 1e-14);
    }
}

TEST_CASE("instances: error codes and messages") {
    ssp_instance* p = reinterpret_cast<ssp_instance*>(0x1);
    CHECK(ssp_instance_generate("{\"n\": 61, \"k\": 40, \"delta\": 2.1}", &p) == SSP_ERR_INFEASIBLE);
    CHECK(p == nullptr);
    CHECK(std::string(ssp_last_error()).size() > 0);
    CHECK(ssp_instance_parse("{not json", &p) == SSP_ERR_PARSE);
    CHECK(ssp_instance_parse("{\"n\": 8, \"spectrum\": [{\"f\": 2, \"re\": 1}]}", &p) == SSP_ERR_INVALID_ARGUMENT);
    CHECK(ssp_instance_picket_fence(15, &p) == SSP_ERR_INVALID_ARGUMENT);
    CHECK(ssp_instance_generate(nullptr, &p) == SSP_ERR_INVALID_ARGUMENT);
    CHECK(ssp_instance_generate(kParams, nullptr) == SSP_ERR_INVALID_ARGUMENT);
    int n = 0;
    CHECK(ssp_instance_size(nullptr, &n) == SSP_ERR_INVALID_ARGUMENT);
    // A later success clears the message.
    InstanceHandle ok;
    REQUIRE(ssp_instance_picket_fence(16, &ok.p) == SSP_OK);
    CHECK(std::string(ssp_last_error()).empty());
    ssp_instance_free(nullptr);
    ssp_result_free(nullptr);
}

TEST_CASE("last error is per thread") {
    ssp_instance* p = nullptr;
    REQUIRE(ssp_instance_parse("[", &p) == SSP_ERR_PARSE);
    std::string other;
    std::thread t([&] { other = ssp_last_error(); });
    t.join();
    CHECK(other.empty());
    CHECK(std::string(ssp_last_error()).size() > 0);
}

TEST_CASE("demix: scores the estimate and exposes the trace table") {
    InstanceHandle inst;
    REQUIRE(ssp_instance_generate(kParams, &inst.p) == SSP_OK);
    ResultHandle r;
    REQUIRE(ssp_demix(inst.p, R"({"lambda": "auto", "traces": true})", &r.p) == SSP_OK);
    CHECK(ssp_result_converged(r.p) == 1);
    const json doc = r.doc();
    CHECK(doc["score"]["exact_demix"] == true);
    CHECK(doc["solve"]["lambda"].get<double>() == doctest::Approx(1.0 / std::sqrt(41.0)));
    CHECK(doc["solve"].contains("primal_residual_trace"));
    REQUIRE(ssp_result_table_count(r.p) == 1);
    const char* name = nullptr;
    const char* csv = nullptr;
    REQUIRE(ssp_result_table(r.p, 0, &name, &csv) == SSP_OK);
    CHECK(std::string(name) == "trace");
    CHECK(std::string(csv).rfind("iter,r_primal,r_dual,objective\n", 0) == 0);
    CHECK(ssp_result_table(r.p, 1, &name, &csv) == SSP_ERR_INVALID_ARGUMENT);

    ResultHandle capped;
    REQUIRE(ssp_demix(inst.p, R"({"admm": {"max_iters": 5}})", &capped.p) == SSP_OK);
    CHECK(ssp_result_converged(capped.p) == 0);

    ssp_result* bad = nullptr;
    CHECK(ssp_demix(inst.p, R"({"lambda": -1})", &bad) == SSP_ERR_INVALID_ARGUMENT);
    CHECK(ssp_demix(inst.p, "[1, 2]", &bad) == SSP_ERR_PARSE);
    CHECK(ssp_demix(inst.p, R"({"mode": "other"})", &bad) == SSP_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
}

TEST_CASE("denoise, greedy, certificate and baseline entry points") {
    InstanceHandle inst;
    REQUIRE(ssp_instance_generate(R"({"n": 41, "k": 2, "s": 2, "delta": 3, "seed": 4})", &inst.p) == SSP_OK);

    ResultHandle d;
    REQUIRE(ssp_denoise(inst.p, R"({"gamma": 50})", &d.p) == SSP_OK);
    const json dj = d.doc();
    CHECK(dj["g_hat"].size() == 41);
    CHECK(dj["g_relative_error"].get<double>() < 0.1);
    CHECK(ssp_result_table_count(d.p) == 3);

    ResultHandle g;
    REQUIRE(ssp_greedy(inst.p, nullptr, &g.p) == SSP_OK);
    CHECK(g.doc()["score"]["exact_demix"] == true);

    ResultHandle c;
    REQUIRE(ssp_certificate(inst.p, R"({"grid_size": 41000})", &c.p) == SSP_OK);
    const json cj = c.doc();
    CHECK(cj.contains("report"));
    CHECK(cj["report"]["interpolation_err"].get<double>() < 1e-8);

    ResultHandle m;
    REQUIRE(ssp_baseline(inst.p, R"({"method": "music", "k": 2})", &m.p) == SSP_OK);
    CHECK(m.doc().contains("frequencies"));
    ResultHandle pg;
    REQUIRE(ssp_baseline(inst.p, R"({"method": "periodogram", "window": "hann"})", &pg.p) == SSP_OK);
    CHECK(ssp_result_table_count(pg.p) == 1);
    ssp_result* bad = nullptr;
    CHECK(ssp_baseline(inst.p, R"({"method": "esprit"})", &bad) != SSP_OK);
}

TEST_CASE("raw data instances carry no score") {
    InstanceHandle raw;
    REQUIRE(ssp_instance_parse(R"({"y": [1, 0, -1, 0, 1, 0, -1, 0]})", &raw.p) == SSP_OK);
    ResultHandle g;
    REQUIRE(ssp_greedy(raw.p, nullptr, &g.p) == SSP_OK);
    CHECK_FALSE(g.doc().contains("score"));
}

TEST_CASE("grid: one table per slab") {
    ResultHandle r;
    REQUIRE(ssp_grid(R"({"n_values": [21], "k_values": [1], "s_values": [0, 1], "delta_values": [3],
                         "lambda_values": ["auto"], "trials": 2, "base_seed": 1, "method": "greedy"})",
                     &r.p) == SSP_OK);
    REQUIRE(ssp_result_table_count(r.p) == 2);
    const char* name = nullptr;
    const char* csv = nullptr;
    REQUIRE(ssp_result_table(r.p, 1, &name, &csv) == SSP_OK);
    CHECK(std::string(name).rfind("n21_lambda", 0) == 0);
    CHECK(std::string(name).find("_s1") != std::string::npos);
    CHECK(std::string(csv).rfind("delta_times_n_minus_1,1\n", 0) == 0);
    ssp_result* bad = nullptr;
    CHECK(ssp_grid(R"({"n_values": []})", &bad) == SSP_ERR_PARSE);
}
