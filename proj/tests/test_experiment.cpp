#include <doctest.h>

#include <cmath>
#include <sstream>

#include "seqimit/experiment.hpp"
#include "seqimit/fixtures.hpp"

using namespace seqimit;

namespace {

std::string csv(const ExperimentReport& r) {
    std::ostringstream out;
    write_report_csv(out, r);
    return out.str();
}

}  // namespace

TEST_CASE("fixture catalogue") {
    const auto& names = fixture_names();
    CHECK(names.size() >= 16);
    for (const auto& n : names) CHECK(fixture(n).name == n);
    CHECK_THROWS_AS(fixture("nope"), std::invalid_argument);
}

TEST_CASE("fixture verdicts") {
    CHECK(fixture("fig2c").expect_imitable);
    CHECK_FALSE(fixture("fig1d").expect_imitable);
    CHECK(fixture("fig1c").expect_imitable);
    CHECK(fixture("fig2d_z_first").expect_imitable);
    CHECK_FALSE(fixture("fig2d_x1_first").expect_imitable);
    CHECK_FALSE(fixture("audiocar_latent_side").expect_imitable);
    CHECK_FALSE(fixture("table1_row4").expect_imitable);
    for (const auto& n : fixture_names()) {
        auto f = fixture(n);
        CAPTURE(n);
        CHECK(construct_plan(f.query).imitable == f.expect_imitable);
    }
}

TEST_CASE("every fixture claim holds") {
    for (const auto& n : fixture_names()) {
        auto report = run_fixture(fixture(n), 30, 1);
        CAPTURE(n);
        for (const auto& c : report.checks) {
            INFO(c.label << ": " << c.detail);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("cloning the sequential plan is unbiased, cloning everything is not") {
    auto f = fixture("table1_row1");
    ExperimentConfig cfg;
    cfg.models = 200;
    auto r = run_experiment(f.query, f.name, cfg);
    CHECK(r.rows.size() == 4);
    CHECK(r.row(Strategy::SeqPiBackdoor).mean_abs_error < 1e-9);
    // same order of magnitude as the published 0.13% cell
    CHECK(r.row(Strategy::AllObserved).mean_abs_error > 1e-4);
    CHECK(r.row(Strategy::AllObserved).mean_abs_error > 10 * r.row(Strategy::SeqPiBackdoor).mean_abs_error);
    CHECK(r.row(Strategy::SeqPiBackdoor).n_models == 200);
    CHECK_FALSE(r.row(Strategy::SeqPiBackdoor).not_imitable);
}

TEST_CASE("methods without contexts are flagged") {
    auto f = fixture("table1_row3");
    ExperimentConfig cfg;
    cfg.models = 10;
    auto r = run_experiment(f.query, f.name, cfg);
    CHECK(r.row(Strategy::PiBackdoor).not_imitable);
    CHECK(r.row(Strategy::SeqPiBackdoor).mean_abs_error < 1e-9);

    cfg.methods = {Strategy::SeqPiBackdoor};
    auto only = run_experiment(f.query, f.name, cfg);
    CHECK_THROWS_AS(only.row(Strategy::AllObserved), std::out_of_range);
}

TEST_CASE("reports are reproducible") {
    auto f = fixture("figb1");
    ExperimentConfig cfg;
    cfg.models = 1;
    cfg.seed = 9;
    CHECK(csv(run_experiment(f.query, f.name, cfg)) == csv(run_experiment(f.query, f.name, cfg)));

    cfg.models = 24;
    cfg.threads = 1;
    auto one = csv(run_experiment(f.query, f.name, cfg));
    cfg.threads = 4;
    CHECK(csv(run_experiment(f.query, f.name, cfg)) == one);

    std::istringstream lines(one);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "graph,method,n_models,n_samples,mean_abs_error,std,not_imitable");
}

TEST_CASE("sampled fitting approaches the exact result") {
    auto f = fixture("table1_row1");
    ExperimentConfig cfg;
    cfg.models = 10;
    cfg.samples = 20000;
    cfg.methods = {Strategy::SeqPiBackdoor};
    auto r = run_experiment(f.query, f.name, cfg);
    const auto& row = r.row(Strategy::SeqPiBackdoor);
    CHECK(row.n_samples == 20000);
    CHECK(row.mean_abs_error < 0.03);
    CHECK(std::isfinite(row.std));
}
