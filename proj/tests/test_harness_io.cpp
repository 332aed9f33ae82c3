#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "tailrisk/errors.hpp"
#include "tailrisk/harness.hpp"
#include "tailrisk/io.hpp"

using namespace tailrisk;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents) : path("/tmp/tailrisk_test_" + name) {
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("plain ingestion") {
    {
        const TempFile f("a.txt", "1.5\n2.0\n");
        const auto v = ingest_plain(f.path);
        REQUIRE(v.size() == 2);
        CHECK(v[0] == 1.5);
        CHECK(v[1] == 2.0);
    }
    {
        const TempFile f("b.txt", "loss\n3\n");
        const auto v = ingest_plain(f.path);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == 3.0);
    }
    {
        const TempFile f("c.txt", "1.0\nnot_a_number\n");
        CHECK_THROWS_AS(ingest_plain(f.path), ParseError);
    }
    {
        const TempFile f("d.txt", "header_only\n");
        CHECK_THROWS_AS(ingest_plain(f.path), EmptyData);
    }
}

TEST_CASE("fama-french ingestion") {
    std::string contents =
        "  Average Value Weighted Returns -- Daily\n"
        "Date,A,B,C\n"
        "19260701, 0.10, -0.25, 1.00\n"
        "19260702, -99.99, 0.30, 0.40\n"
        "19260706, 0.20, 0.10, -0.50\n";
    const TempFile f("ff.csv", contents);
    const auto panel = ingest_fama_french(f.path, 3, true);
    CHECK(panel.dropped_rows == 1);
    REQUIRE(panel.rows.size() == 2);
    CHECK(panel.dates[0] == "19260701");
    CHECK(panel.rows[0][0] == doctest::Approx(-0.10));  // negated returns
    CHECK(panel.rows[1][2] == doctest::Approx(0.50));
    const auto raw = ingest_fama_french(f.path, 3, false);
    CHECK(raw.rows[0][0] == doctest::Approx(0.10));
}

TEST_CASE("csv formatting is stable") {
    std::vector<ResultRow> rows = {{"m", 0.001, 1, 1.23456789012345, "converged"},
                                   {"m", 0.001, 2, std::nan(""), "error: boom"}};
    const std::string csv = results_csv(rows);
    CHECK(csv == "method,beta,rep,value,status\nm,0.001,1,1.23456789012,converged\nm,0.001,2,nan,error: boom\n");
}

TEST_CASE("quantile convention") {
    CHECK(quantile_type7({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_type7({4.0, 1.0, 3.0, 2.0}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_type7({5.0}, 0.9) == doctest::Approx(5.0));
}

TEST_CASE("coverage counting") {
    // truth 10, estimates {9, 11, 12, 8} -> coverage 0.5
    DataSource src;
    src.name = "fixed";
    // four reps, each a tiny dataset; method is SAA so the estimate is the top atom at small beta
    const std::vector<std::vector<double>> datasets = {{9.0, 0.0, 0.0}, {11.0, 0.0, 0.0}, {12.0, 0.0, 0.0},
                                                       {8.0, 0.0, 0.0}};
    int counter = 0;
    src.draw = [&](std::size_t n, Rng) -> std::vector<double> {
        if (n >= 100) return std::vector<double>(n, 10.0);  // ground truth draws: all mass at 10
        return datasets[counter++ % 4];
    };
    ReplicationPlan plan;
    plan.beta_grid = {0.05};
    plan.n = 3;
    plan.reps = 4;
    plan.truth_draws = 1000;
    plan.seed = 1;
    const auto out = run_replication_study(src, {MethodConfig::saa()}, plan);
    REQUIRE(out.cells.size() == 1);
    CHECK(out.cells[0].truth == doctest::Approx(10.0));
    CHECK(out.cells[0].coverage == doctest::Approx(0.5));
    CHECK(out.cells[0].reps == 4);
}

TEST_CASE("replication study rejects reps < 2") {
    const auto src = DataSource::from_law(TailLawSpec::exponential());
    ReplicationPlan plan;
    plan.beta_grid = {0.1};
    plan.reps = 1;
    CHECK_THROWS_AS(run_replication_study(src, {MethodConfig::saa()}, plan), PreconditionViolated);
}

TEST_CASE("replication study determinism and common random numbers") {
    const auto src = DataSource::from_law(TailLawSpec::survival_formula(3.4, 1.0, 0.2));
    std::vector<MethodConfig> methods = {MethodConfig::saa(), MethodConfig::wasserstein_saa(1.0, 0.1)};
    ReplicationPlan plan;
    plan.beta_grid = {0.05, 0.01};
    plan.n = 120;
    plan.reps = 4;
    plan.truth_draws = 20000;
    plan.seed = 77;
    const auto a = run_replication_study(src, methods, plan);
    const auto b = run_replication_study(src, methods, plan);
    CHECK(results_csv(a.rows) == results_csv(b.rows));

    // common random numbers: wasserstein_saa = saa + delta/beta on the same data
    for (const auto& row : a.rows) {
        if (row.method != "saa") continue;
        for (const auto& other : a.rows) {
            if (other.method == "wasserstein1_saa" && other.beta == row.beta && other.rep == row.rep) {
                CHECK(other.value == doctest::Approx(row.value + 0.1 / row.beta).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ground truth stability at beta = 1e-3") {
    const auto src = DataSource::from_law(TailLawSpec::survival_formula(3.4, 1.0, 0.2));
    const auto t1 = ground_truth_curve(src, {1e-3}, 5000000, Rng::stream(3, 3));
    const auto t2 = ground_truth_curve(src, {1e-3}, 5000000, Rng::stream(3, 4));
    CHECK(std::fabs(t1[0] - t2[0]) / t1[0] < 0.01);
}

TEST_CASE("rolling window indexing") {
    std::vector<double> data;
    for (int i = 1; i <= 10; ++i) data.push_back(static_cast<double>(i));
    WindowPlan plan;
    plan.n = 4;
    plan.stride = 3;
    plan.reps = 2;
    plan.beta_grid = {0.2};
    const auto out = run_rolling_windows(data, plan, {MethodConfig::saa()}, 1);
    // windows are Z_4..Z_7 and Z_7..Z_10 (1-based): max atoms 7 and 10
    REQUIRE(out.rows.size() == 2);
    CHECK(out.rows[0].value == doctest::Approx(7.0));
    CHECK(out.rows[1].value == doctest::Approx(10.0));

    WindowPlan bad = plan;
    bad.reps = 3;
    CHECK_THROWS_AS(run_rolling_windows(data, bad, {MethodConfig::saa()}, 1), PlanOverrun);
}

TEST_CASE("disjoint windows when stride equals n") {
    std::vector<double> data;
    for (int i = 1; i <= 12; ++i) data.push_back(static_cast<double>(i));
    WindowPlan plan;
    plan.n = 4;
    plan.stride = 4;
    plan.reps = 2;
    plan.beta_grid = {0.2};
    const auto out = run_rolling_windows(data, plan, {MethodConfig::saa()}, 1);
    CHECK(out.rows[0].value == doctest::Approx(8.0));
    CHECK(out.rows[1].value == doctest::Approx(12.0));
}

TEST_CASE("hedging truth curve is monotone without costs") {
    HedgePlan plan;
    plan.config.cost_per_share = 0.0;
    plan.config.sigma2 = 0.075;
    plan.config.S0 = plan.config.strike = 25.0;
    plan.config.r = 0.10;
    plan.config.mu = 0.10;
    plan.m_grid = {2, 8, 32};
    plan.beta = 0.01;
    plan.n = 50;
    plan.truth_paths = 200000;
    plan.seed = 4;
    const auto out = hedging_frequency_study(plan, {MethodConfig::saa()});
    REQUIRE(out.truth_by_m.size() == 3);
    CHECK(out.truth_by_m[1] < out.truth_by_m[0]);
    CHECK(out.truth_by_m[2] < out.truth_by_m[1] * 1.05);  // MC tolerance
}
