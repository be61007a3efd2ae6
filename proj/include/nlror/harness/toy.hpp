#pragma once

#include "nlror/numkernel.hpp"
#include "nlror/regress.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nlror {

/// y = x + 0.2 x^2
double toy_signal(double x);

struct ToyData {
    Matrix inputs;   // n x 1, raw x
    Vector targets;  // signal plus noise
    Vector signal;   // noise-free signal at the inputs
};

/// x ~ N(0,1); noise s.d. is twice the sample s.d. of the signal.
ToyData toy_generate(std::uint64_t seed, std::size_t n_train = 100, bool noise_free = false);

/// Candidate hidden-node grid used by the toy problem (100 points, 80 per training fold).
std::vector<std::size_t> toy_node_grid();

struct ToyDemoOptions {
    std::size_t n_train = 100;
    std::size_t members = 100;
    double grid_low = -6.0;
    double grid_high = 6.0;
    double grid_step = 0.05;
    double fd_step = 1e-2;  // normalized units
    std::vector<std::size_t> candidate_node_counts = toy_node_grid();
    std::size_t folds = 5;
};

/// Plot-ready columns: x, true_signal, lr, ensemble_mean, boundary_extrapolation, member_000...
struct ToyTable {
    std::vector<std::string> columns;
    Matrix values;
    std::size_t node_count = 0;
    ToyData train;

    Eigen::Index column(const std::string& name) const;
};

ToyTable toy_demo(std::uint64_t seed, Activation activation, const ToyDemoOptions& options = {});

void write_toy_csv(const ToyTable& table, const std::filesystem::path& path);
void write_toy_training_csv(const ToyData& data, const std::filesystem::path& path);

} // namespace nlror
