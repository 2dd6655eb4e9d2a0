#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqimit/fixtures.hpp"
#include "seqimit/imitation.hpp"

namespace seqimit {

/// One (graph, method) cell of a simulation run.
struct ExperimentRow {
    std::string graph;
    Strategy method = Strategy::SeqPiBackdoor;
    std::size_t n_models = 0;
    std::size_t n_samples = 0;  // 0 means policies fitted from exact conditionals
    double mean_abs_error = 0.0;
    double std = 0.0;  // population standard deviation over models
    bool not_imitable = false;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;

    const ExperimentRow& row(Strategy method) const;
};

struct ExperimentConfig {
    std::size_t models = 200;
    std::size_t samples = 0;
    std::vector<Strategy> methods = all_strategies();
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 picks the hardware concurrency
};

/// For model i = 0..models-1: draw random_scm(seed, i), clone each method's
/// contexts and record |E[Y] - E[Y | do(pi)]|. Results do not depend on the
/// thread count.
ExperimentReport run_experiment(const ImitationQuery& q, const std::string& graph, const ExperimentConfig& config);

/// Columns: graph, method, n_models, n_samples, mean_abs_error, std, not_imitable.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

struct FixtureCheck {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct FixtureReport {
    std::string name;
    std::vector<FixtureCheck> checks;

    bool pass() const;
};

/// Runs every claim attached to a fixture: verdict, per-action backdoor
/// applicability, plan verification, exact cloning on random models, the
/// brute-force plan search, the expert value and each probe.
FixtureReport run_fixture(const Fixture& f, std::size_t random_models = 100, std::uint64_t seed = 0);

void write_fixture_report(std::ostream& out, const FixtureReport& report);

}  // namespace seqimit
