#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqimit/diagram.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/scm.hpp"

namespace seqimit {

enum class ProbeKind {
    BestImitator,  // exhaustive search over deterministic policies
    Cloning,       // exact behavioural cloning P(X_i | Z_i)
};

/// One value claim about a fixture SCM under some choice of contexts.
struct FixtureProbe {
    std::string label;
    ProbeKind kind = ProbeKind::Cloning;
    std::optional<Strategy> strategy;                // contexts from a strategy...
    std::vector<std::vector<std::string>> contexts;  // ...or given explicitly, one list per action
    std::optional<double> equals;                    // value within 1e-9
    std::optional<double> min_gap;                   // expert value minus probe value exceeds this
};

struct Fixture {
    std::string name;
    std::string description;
    ImitationQuery query;
    std::optional<DiscreteScm> scm;
    bool expect_imitable = false;
    /// Whether every action has its own single-action backdoor set, when known.
    std::optional<bool> expect_pi_backdoor;
    std::optional<double> expert_value;
    std::vector<FixtureProbe> probes;
};

const std::vector<std::string>& fixture_names();

/// Throws std::invalid_argument("unknown fixture ...").
Fixture fixture(std::string_view name);

}  // namespace seqimit
