#include "seqimit/fixtures.hpp"

#include <functional>
#include <stdexcept>
#include <utility>

#include "seqimit/cg_format.hpp"

namespace seqimit {

namespace {

// ---- graphs -----------------------------------------------------------------

const char* kAudiocar = R"(
obs F B S X
lat H Y
edge F -> X
edge F -> Y
edge H -> X
edge B -> Y
edge S -> Y
edge B -> H
edge S -> H
edge X -> Y
edge F -> H
order F B S H X Y
actions X
target Y
)";

const char* kAudiocarLatentSide = R"(
obs F B X
lat S H Y
edge F -> X
edge F -> Y
edge H -> X
edge B -> Y
edge S -> Y
edge B -> H
edge S -> H
edge X -> Y
edge F -> H
order F B S H X Y
actions X
target Y
)";

const char* kFig1c = R"(
obs X1 Z X2
lat U Y
edge X1 -> Y
edge X2 -> Y
edge Z -> X2
edge U -> Z
edge U -> Y
edge X1 -> Z
order U X1 Z X2 Y
actions X1 X2
target Y
)";

const char* kFig1d = R"(
obs X1 Z X2
lat U1 U2 Y
edge X1 -> Y
edge X2 -> Y
edge Z -> X2
edge U1 -> Z
edge U1 -> X1
edge U2 -> Z
edge U2 -> Y
order U1 U2 X1 Z X2 Y
actions X1 X2
target Y
)";

const char* kFig2a = R"(
obs X Z
lat Y
edge X -> Z
edge X <-> Z
edge X -> Y
edge Z -> Y
order X Z Y
actions X
target Y
)";

const char* kFig2b = R"(
obs X1 X2
lat Y
edge X1 -> X2
edge X1 <-> X2
edge X1 -> Y
edge X2 -> Y
order X1 X2 Y
actions X1 X2
target Y
)";

const char* kFig2c = R"(
obs X1 Z W X2
lat Y
edge X1 -> W
edge W -> X2
edge X2 -> Y
edge Z -> Y
edge X1 <-> Z
order X1 Z W X2 Y
actions X1 X2
target Y
)";

std::string fig2d_text(bool z_first) {
    std::string text = R"(
obs Z X1 W X2
lat U1 U2 Y
edge U1 -> Z
edge U1 -> X1
edge U2 -> W
edge U2 -> Y
edge Z -> W
edge W -> X2
edge X2 -> Y
edge X1 -> Y
actions X1 X2
target Y
)";
    text += z_first ? "order U1 Z X1 U2 W X2 Y\n" : "order U1 X1 Z U2 W X2 Y\n";
    return text;
}

const char* kTable1Row1 = R"(
obs Z X1 X2
lat Y
edge X1 -> X2
edge X2 -> Y
edge Z <-> Y
edge Z <-> X1
edge Z <-> X2
order Z X1 X2 Y
actions X1 X2
target Y
)";

std::string table1_row23_text(bool z_first) {
    std::string text = R"(
obs Z X1 X2
lat Y
edge X1 -> X2
edge X2 -> Y
edge Z -> Y
edge X1 <-> Z
actions X1 X2
target Y
)";
    text += z_first ? "order Z X1 X2 Y\n" : "order X1 Z X2 Y\n";
    return text;
}

const char* kFig4 = R"(
obs Z1 X1 X2 Z2 X3 Z3
lat U1 U2 U3 Y
edge U3 -> Y
edge Z3 -> Y
edge U3 -> Z3
edge U2 -> Z2
edge U2 -> Z3
edge X1 -> X2
edge X1 -> U2
edge U1 -> Z1
edge U1 -> X1
edge U1 -> Z2
edge Z1 -> X2
edge X2 -> X3
edge X3 -> Z3
edge Z2 -> X3
order U1 Z1 X1 X2 U2 Z2 X3 U3 Z3 Y
actions X1 X2 X3
target Y
)";

const char* kFig5 = R"(
obs X1 A B X2 C X3
lat Y
edge X1 <-> A
edge X3 <-> X2
edge X3 <-> C
edge X1 -> B
edge B -> X2
edge X2 -> Y
edge X3 -> Y
edge C -> Y
edge A -> Y
order X1 A B X2 C X3 Y
actions X1 X2 X3
target Y
)";

const char* kFigB1 = R"(
obs A R1 X1 R2 X2 R3 X3 R4
lat C H Y
edge R1 -> X1
edge X1 -> R2
edge R2 -> X2
edge X2 -> R3
edge R3 -> X3
edge X3 -> R4
edge H -> X1
edge H -> X2
edge H -> X3
edge H -> A
edge C -> A
edge C -> Y
edge C -> R1
edge R1 -> Y
edge R2 -> Y
edge R3 -> Y
edge R4 -> Y
edge R1 -> R2
edge R2 -> R3
edge R3 -> R4
order C H A R1 X1 R2 X2 R3 X3 R4 Y
actions X1 X2 X3
target Y
)";

const char* kSubstructure1 = R"(
obs R1 X1 R2 X2 R3
lat H Y
edge R1 -> X1
edge H -> X1
edge X1 -> R2
edge R1 -> R2
edge R2 -> X2
edge H -> X2
edge X2 -> R3
edge R2 -> R3
edge R1 -> Y
edge R2 -> Y
edge R3 -> Y
order H R1 X1 R2 X2 R3 Y
actions X1 X2
target Y
)";

const char* kSubstructure2 = R"(
obs A X3 R4
lat C H Y
edge H -> A
edge C -> A
edge H -> X3
edge X3 -> R4
edge R4 -> Y
edge C -> Y
order C H A X3 R4 Y
actions X3
target Y
)";

// ---- models -----------------------------------------------------------------

constexpr double kHighwayRate = 0.62;

DiscreteScm audiocar_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .bernoulli("F", 0.5)
        .bernoulli("B", 0.5)
        .bernoulli("S", 0.5)
        .function("H", [](const ParentValues& p) { return p["F"] ^ p["B"] ^ p["S"]; })
        .function("X", [](const ParentValues& p) { return p["H"]; })
        .function("Y", [](const ParentValues& p) { return 1 ^ p["X"] ^ p["F"] ^ p["B"] ^ p["S"]; })
        .build();
}

DiscreteScm prop_c1_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .bernoulli("U1", 0.5)
        .bernoulli("U2", 0.5)
        .function("X1", [](const ParentValues& p) { return p["U1"]; })
        .function("Z", [](const ParentValues& p) { return p["U1"] ^ p["U2"]; })
        .function("X2", [](const ParentValues& p) { return p["Z"]; })
        .function("Y", [](const ParentValues& p) { return 1 ^ p["X1"] ^ p["X2"] ^ p["U2"]; })
        .build();
}

// U2 is a pair of fair bits packed as one 4-valued variable; bit k is U2[k].
DiscreteScm fig2d_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .bernoulli("U1", 0.5)
        .cardinality("U2", 4)
        .distribution("U2", {0.25, 0.25, 0.25, 0.25})
        .function("Z", [](const ParentValues& p) { return p["U1"]; })
        .function("X1", [](const ParentValues& p) { return p["U1"]; })
        .function("W", [](const ParentValues& p) { return (p["U2"] >> p["Z"]) & 1; })
        .function("X2", [](const ParentValues& p) { return p["W"]; })
        .function("Y", [](const ParentValues& p) { return ((p["U2"] >> p["X1"]) & 1) == p["X2"] ? 1 : 0; })
        .build();
}

DiscreteScm prop_c2_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .bernoulli("U1", 0.5)
        .bernoulli("U2", 0.5)
        .bernoulli("U3", 0.5)
        .function("Z1", [](const ParentValues&) { return 1; })
        .function("X1", [](const ParentValues& p) { return p["U1"]; })
        .function("X2", [](const ParentValues& p) { return p["X1"]; })
        .function("Z2", [](const ParentValues& p) { return p["U1"] ^ p["U2"]; })
        .function("X3", [](const ParentValues& p) { return p["X2"] ^ p["Z2"]; })
        .function("Z3", [](const ParentValues& p) { return p["X3"] ^ p["U2"] ^ p["U3"]; })
        .function("Y", [](const ParentValues& p) { return p["Z3"] == p["U3"] ? 1 : 0; })
        .build();
}

// C and H each carry two independent bits: bit 0 ~ Bern(0.5), bit 1 ~ Bern(0.62).
std::vector<double> two_bit_prior() {
    const double q = kHighwayRate;
    return {0.5 * (1 - q), 0.5 * (1 - q), 0.5 * q, 0.5 * q};
}

DiscreteScm figb1_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .cardinality("C", 4)
        .cardinality("H", 4)
        .distribution("C", two_bit_prior())
        .distribution("H", two_bit_prior())
        .function("A", [](const ParentValues& p) { return (p["C"] >> 1) & (p["H"] >> 1); })
        .function("R1", [](const ParentValues& p) { return p["C"] & 1; })
        .function("X1", [](const ParentValues& p) { return p["R1"] ^ (p["H"] & 1); })
        .function("R2", [](const ParentValues& p) { return p["X1"]; })
        .function("X2", [](const ParentValues& p) { return p["R2"] ^ (p["H"] & 1); })
        .function("R3", [](const ParentValues& p) { return p["X2"]; })
        .function("X3", [](const ParentValues& p) { return p["H"] >> 1; })
        .function("R4", [](const ParentValues& p) { return p["X3"]; })
        .function("Y",
                  [](const ParentValues& p) {
                      return (p["R1"] == p["R3"] ? 1 : 0) & (p["R4"] ^ (p["C"] >> 1));
                  })
        .build();
}

DiscreteScm substructure1_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .bernoulli("H", 0.5)
        .bernoulli("R1", 0.5)
        .function("X1", [](const ParentValues& p) { return p["R1"] ^ p["H"]; })
        .function("R2", [](const ParentValues& p) { return p["X1"]; })
        .function("X2", [](const ParentValues& p) { return p["R2"] ^ p["H"]; })
        .function("R3", [](const ParentValues& p) { return p["X2"]; })
        .function("Y", [](const ParentValues& p) { return p["R1"] == p["R3"] ? 1 : 0; })
        .build();
}

DiscreteScm substructure2_scm(const CausalDiagram& g) {
    return ScmBuilder(g)
        .bernoulli("C", kHighwayRate)
        .bernoulli("H", kHighwayRate)
        .function("A", [](const ParentValues& p) { return p["C"] & p["H"]; })
        .function("X3", [](const ParentValues& p) { return p["H"]; })
        .function("R4", [](const ParentValues& p) { return p["X3"]; })
        .function("Y", [](const ParentValues& p) { return p["R4"] ^ p["C"]; })
        .build();
}

// ---- catalogue --------------------------------------------------------------

FixtureProbe clone_probe(std::string label, Strategy s, std::optional<double> equals, std::optional<double> min_gap) {
    FixtureProbe p;
    p.label = std::move(label);
    p.kind = ProbeKind::Cloning;
    p.strategy = s;
    p.equals = equals;
    p.min_gap = min_gap;
    return p;
}

FixtureProbe best_probe(std::string label, std::vector<std::vector<std::string>> contexts,
                        std::optional<double> equals, std::optional<double> min_gap) {
    FixtureProbe p;
    p.label = std::move(label);
    p.kind = ProbeKind::BestImitator;
    p.contexts = std::move(contexts);
    p.equals = equals;
    p.min_gap = min_gap;
    return p;
}

Fixture make(std::string name, std::string description, const std::string& text, bool imitable,
             std::optional<bool> pi_backdoor = std::nullopt) {
    Fixture f;
    f.name = std::move(name);
    f.description = std::move(description);
    f.query = parse_query(text);
    f.expect_imitable = imitable;
    f.expect_pi_backdoor = pi_backdoor;
    return f;
}

const double kHighwayExpert = 2 * kHighwayRate * (1 - kHighwayRate);

using Factory = std::function<Fixture()>;

const std::vector<std::pair<std::string, Factory>>& catalogue() {
    static const std::vector<std::pair<std::string, Factory>> entries = {
        {"audiocar",
         [] {
             auto f = make("audiocar", "driver X with surrounding cars F, B, S all observed", kAudiocar, true, true);
             f.scm = audiocar_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(best_probe("best policy over {F,B,S}", {{"F", "B", "S"}}, 1.0, std::nullopt));
             f.probes.push_back(clone_probe("sequential backdoor cloning", Strategy::SeqPiBackdoor, 1.0, std::nullopt));
             return f;
         }},
        {"audiocar_latent_side",
         [] {
             auto f = make("audiocar_latent_side", "side car S hidden from the imitator", kAudiocarLatentSide, false,
                           false);
             f.scm = audiocar_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(best_probe("best policy over {F,B}", {{"F", "B"}}, 0.5, std::nullopt));
             return f;
         }},
        {"fig1c", [] { return make("fig1c", "two actions, Z screens the confounder of Y", kFig1c, true); }},
        {"fig1d", [] { return make("fig1d", "sequential backdoor exists yet not imitable", kFig1d, false); }},
        {"propC1",
         [] {
             auto f = make("propC1", "XOR chain through U1 and U2 on the fig1d graph", kFig1d, false);
             f.scm = prop_c1_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(best_probe("best policy over (X1: {}, X2: {Z})", {{}, {"Z"}}, 0.5, std::nullopt));
             return f;
         }},
        {"fig2a", [] { return make("fig2a", "Z confounded with X and mediating X -> Y", kFig2a, false, false); }},
        {"fig2b", [] { return make("fig2b", "the confounded mediator is itself an action", kFig2b, true); }},
        {"fig2c", [] { return make("fig2c", "X1 shielded from Y by the later adjustment for X2", kFig2c, true, false); }},
        {"fig2d_z_first",
         [] {
             auto f = make("fig2d_z_first", "Z observed before X1", fig2d_text(true), true);
             f.scm = fig2d_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(clone_probe("sequential backdoor cloning", Strategy::SeqPiBackdoor, 1.0, std::nullopt));
             return f;
         }},
        {"fig2d_x1_first",
         [] {
             auto f = make("fig2d_x1_first", "X1 acts before Z is observed", fig2d_text(false), false);
             f.scm = fig2d_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(best_probe("best policy over (X1: {}, X2: {Z, X1, W})",
                                           {{}, {"Z", "X1", "W"}}, std::nullopt, 0.1));
             return f;
         }},
        {"table1_row1",
         [] { return make("table1_row1", "Z confounded with X1, X2 and Y", kTable1Row1, true, true); }},
        {"table1_row2",
         [] { return make("table1_row2", "Z before X1 and confounded with it", table1_row23_text(true), true, true); }},
        {"table1_row3",
         [] { return make("table1_row3", "Z only observed after X1", table1_row23_text(false), true, false); }},
        {"table1_row4", [] { return make("table1_row4", "fig1d graph in the experiment table", kFig1d, false, false); }},
        {"fig4", [] { return make("fig4", "latent chain from Y back to X1", kFig4, false); }},
        {"propC2",
         [] {
             auto f = make("propC2", "XOR construction on the fig4 chain", kFig4, false);
             f.scm = prop_c2_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(best_probe("best policy over the observed non-actions",
                                           {{"Z1"}, {"Z1"}, {"Z1", "Z2"}}, std::nullopt, 0.1));
             return f;
         }},
        {"fig5", [] { return make("fig5", "two boundary actions sharing a confounder", kFig5, true, false); }},
        {"figb1",
         [] {
             auto f = make("figb1", "highway driving model with binary substructures", kFigB1, true, false);
             f.scm = figb1_scm(f.query.diagram);
             f.expert_value = kHighwayExpert;
             f.probes.push_back(
                 clone_probe("sequential backdoor cloning", Strategy::SeqPiBackdoor, kHighwayExpert, std::nullopt));
             f.probes.push_back(clone_probe("all observed cloning", Strategy::AllObserved, std::nullopt, 0.05));
             return f;
         }},
        {"substructure1",
         [] {
             auto f = make("substructure1", "hidden H flips both lane changes", kSubstructure1, true, false);
             f.scm = substructure1_scm(f.query.diagram);
             f.expert_value = 1.0;
             f.probes.push_back(clone_probe("sequential backdoor cloning", Strategy::SeqPiBackdoor, 1.0, std::nullopt));
             f.probes.push_back(clone_probe("observed parents cloning", Strategy::ObservedParents, 0.5, std::nullopt));
             return f;
         }},
        {"substructure2",
         [] {
             auto f = make("substructure2", "collider A opens a path to the hidden C", kSubstructure2, true);
             f.scm = substructure2_scm(f.query.diagram);
             f.expert_value = kHighwayExpert;
             f.probes.push_back(
                 clone_probe("sequential backdoor cloning", Strategy::SeqPiBackdoor, kHighwayExpert, std::nullopt));
             f.probes.push_back(clone_probe("all observed cloning", Strategy::AllObserved, std::nullopt, 0.05));
             return f;
         }},
    };
    return entries;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, factory] : catalogue()) out.push_back(name);
        return out;
    }();
    return names;
}

Fixture fixture(std::string_view name) {
    for (const auto& [n, factory] : catalogue())
        if (n == name) return factory();
    throw std::invalid_argument("unknown fixture '" + std::string(name) + "'");
}

}  // namespace seqimit
