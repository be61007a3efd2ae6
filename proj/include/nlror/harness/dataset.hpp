#pragma once

#include "nlror/numkernel.hpp"
#include "nlror/preprocess.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlror {

struct CategoricalSpec {
    std::string column;
    std::vector<std::string> labels;
};

/// Either a leading training fraction or explicit half-open row ranges over the retained rows.
struct SplitSpec {
    std::optional<double> train_fraction;
    std::optional<std::pair<std::size_t, std::size_t>> train_rows;
    std::optional<std::pair<std::size_t, std::size_t>> test_rows;
};

struct DatasetManifest {
    std::filesystem::path csv_path;
    std::vector<std::string> feature_columns;
    std::string target_column;
    std::vector<CategoricalSpec> categorical_groups;
    TargetTransform target_transform = TargetTransform::None;
    bool clip_negative_predictions = false;
    SplitSpec split;
    bool reverse_order = false;
    char delimiter = ',';

    void validate() const;
};

/// Strict parse: unknown keys are an error. Relative csv paths resolve against base_dir.
DatasetManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
DatasetManifest load_manifest(const std::filesystem::path& path);
nlohmann::json manifest_to_json(const DatasetManifest& manifest);

struct Dataset {
    std::string name;
    Matrix features;                       // retained rows in record order
    Vector target;                         // after the target transform
    std::vector<std::string> feature_names;
    std::vector<OneHotGroup> categorical_groups;
    std::vector<std::size_t> continuous_columns;
    std::vector<std::size_t> train_rows;   // ascending
    std::vector<std::size_t> test_rows;    // ascending
    std::vector<std::size_t> source_lines; // CSV line number of each retained row
    std::size_t dropped_rows = 0;
    TargetTransform target_transform = TargetTransform::None;
    bool clip_negative_predictions = false;

    Matrix train_inputs() const;
    Matrix test_inputs() const;
    Vector train_target() const;
    Vector test_target() const;
};

/// In-memory dataset with continuous features; the first n_train rows train.
Dataset make_dataset(std::string name, Matrix features, Vector target, std::size_t n_train);

Dataset load_dataset(const DatasetManifest& manifest);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows);
Vector select_rows(const Vector& v, const std::vector<std::size_t>& rows);

} // namespace nlror
