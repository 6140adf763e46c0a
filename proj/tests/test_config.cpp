#include "scrambling/config.hpp"

#include <gtest/gtest.h>

using namespace scrambling;

TEST(Config, DefaultsRoundTrip) {
    const ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_TRUE(parse_config(serialize(c)) == c);
}

TEST(Config, CustomRoundTrip) {
    ExperimentConfig c;
    c.n_qubits_list = {3, 4};
    c.gamma_grid = {0.1, 1.0 / 3.0, 2.5};
    c.realizations = 4;
    c.master_seed = 123456789012345ULL;
    c.scaling = ScalingConvention::QubitCount;
    c.ensemble_mode = EnsembleMode::PerturbedOperator;
    c.epsilon = 1e-5;
    c.fidelity_grid = {0.005, 300};
    c.spread_grid = {7.5, 11};
    c.complexity_mode = ComplexityMode::CoherentSum;
    c.bootstrap = {250, 0.9};
    c.output_dir = "some/dir";
    c.emit_full_series = true;
    c.json_mirror = true;
    const ExperimentConfig back = parse_config(serialize(c));
    EXPECT_TRUE(back == c);
    EXPECT_EQ(back.gamma_grid[1], 1.0 / 3.0);
}

TEST(Config, PartialFileKeepsDefaults) {
    const auto c = parse_config("# comment\n[sweep]\nn_qubits = 4\n\n[spread]\nmode = position_weighted\n");
    EXPECT_EQ(c.n_qubits_list, std::vector<int>{4});
    EXPECT_EQ(c.complexity_mode, ComplexityMode::PositionWeighted);
    EXPECT_EQ(c.realizations, 20);
    EXPECT_EQ(c.fidelity_grid.steps, 2000);
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_config("[sweep]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[sweep\nn_qubits = 4\n"), ConfigError);
    EXPECT_THROW(parse_config("[sweep]\nn_qubits 4\n"), ConfigError);
    EXPECT_THROW(parse_config("[sweep]\nrealizations = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("[sweep]\nrealizations = 2x\n"), ConfigError);
    EXPECT_THROW(parse_config("[sweep]\nn_qubits = 13\n"), ConfigError);
    EXPECT_THROW(parse_config("[sweep]\ngamma = -1\n"), ConfigError);
    EXPECT_THROW(parse_config("[fidelity]\ndt = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("[bootstrap]\nlevel = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[spread]\nmode = loud\n"), ConfigError);
    EXPECT_THROW(parse_config("[output]\nemit_full_series = maybe\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST(Config, ErrorCode) {
    try {
        parse_config("[model]\nscaling = weird\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "invalid_config");
    }
}
