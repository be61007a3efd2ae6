#pragma once

// Serial, loop-for-loop versions of the OpenMP kernels. They exist so tests
// can check the parallel paths and the benchmark has a baseline.

#include "nlror/outlier_gate.hpp"
#include "nlror/regress.hpp"

#include <vector>

namespace nlror::reference {

Matrix hidden_layer_output(const ElmModel& model, const Matrix& inputs);
Matrix member_predictions(const EnsembleModel& ensemble, const Matrix& inputs, std::size_t output = 0);
Matrix ensemble_predict(const EnsembleModel& ensemble, const Matrix& inputs);
EnsembleModel ensemble_train(const Matrix& inputs, const Matrix& targets, std::size_t node_count,
                             Activation activation, std::size_t member_count, std::uint64_t seed,
                             const EnsembleOptions& options = {});
Vector mahalanobis_distances(const Gate& gate, const Matrix& inputs);
std::vector<Neighbor> nearest_training_neighbors(const Gate& gate, const Matrix& inputs);

} // namespace nlror::reference
