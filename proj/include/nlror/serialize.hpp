#pragma once

#include "nlror/outlier_gate.hpp"
#include "nlror/regress.hpp"

#include <json.hpp>

#include <filesystem>

namespace nlror {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON documents; doubles are written in shortest round-trip form.
nlohmann::json ensemble_to_json(const EnsembleModel& ensemble);
EnsembleModel ensemble_from_json(const nlohmann::json& doc);

nlohmann::json elm_to_json(const ElmModel& model);
ElmModel elm_from_json(const nlohmann::json& doc);

nlohmann::json gate_to_json(const Gate& gate);
Gate gate_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace nlror
