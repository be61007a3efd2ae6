#include "nlror/harness/dataset.hpp"

#include "nlror/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>

namespace nlror {

using nlohmann::json;

void DatasetManifest::validate() const {
    if (feature_columns.empty() && categorical_groups.empty()) {
        throw InvalidArgument("manifest: no feature columns");
    }
    if (target_column.empty()) {
        throw InvalidArgument("manifest: target_column is empty");
    }
    std::set<std::string> seen;
    for (const auto& c : feature_columns) {
        if (!seen.insert(c).second) {
            throw InvalidArgument("manifest: duplicate feature column '" + c + "'");
        }
    }
    for (const auto& g : categorical_groups) {
        if (!seen.insert(g.column).second) {
            throw InvalidArgument("manifest: duplicate feature column '" + g.column + "'");
        }
        if (g.labels.empty()) {
            throw InvalidArgument("manifest: categorical column '" + g.column + "' has no labels");
        }
    }
    if (seen.count(target_column)) {
        throw InvalidArgument("manifest: target column is also a feature");
    }
    const bool fraction = split.train_fraction.has_value();
    const bool ranges = split.train_rows.has_value() || split.test_rows.has_value();
    if (fraction == ranges) {
        throw InvalidArgument("manifest: split needs exactly one of train_fraction or train_rows/test_rows");
    }
    if (fraction && !(*split.train_fraction > 0.0 && *split.train_fraction < 1.0)) {
        throw InvalidArgument("manifest: train_fraction must lie in (0, 1)");
    }
    if (ranges && !(split.train_rows && split.test_rows)) {
        throw InvalidArgument("manifest: train_rows and test_rows must both be given");
    }
    if (clip_negative_predictions &&
        (target_transform == TargetTransform::NaturalLog || target_transform == TargetTransform::Log10)) {
        throw InvalidArgument("manifest: clip_negative_predictions is meaningless for a log-transformed target");
    }
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw InvalidArgument(where + ": expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw InvalidArgument(where + ": unknown key '" + key + "'");
        }
    }
}

std::pair<std::size_t, std::size_t> parse_range(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2) {
        throw InvalidArgument(std::string("manifest: split.") + name + " must be [begin, end]");
    }
    const auto b = j[0].get<std::size_t>();
    const auto e = j[1].get<std::size_t>();
    if (e <= b) {
        throw InvalidArgument(std::string("manifest: split.") + name + " is empty");
    }
    return {b, e};
}

} // namespace

DatasetManifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown_keys(doc,
                        {"csv_path", "feature_columns", "target_column", "categorical_groups", "target_transform",
                         "clip_negative_predictions", "split", "reverse_order", "delimiter"},
                        "manifest");
    DatasetManifest m;
    try {
        std::filesystem::path csv = doc.at("csv_path").get<std::string>();
        m.csv_path = csv.is_relative() && !base_dir.empty() ? base_dir / csv : csv;
        m.feature_columns = doc.value("feature_columns", std::vector<std::string>{});
        m.target_column = doc.at("target_column").get<std::string>();
        if (doc.contains("categorical_groups")) {
            for (const auto& g : doc.at("categorical_groups")) {
                reject_unknown_keys(g, {"column", "labels"}, "manifest.categorical_groups");
                m.categorical_groups.push_back({g.at("column").get<std::string>(),
                                                g.at("labels").get<std::vector<std::string>>()});
            }
        }
        m.target_transform = parse_target_transform(doc.value("target_transform", std::string("none")));
        m.clip_negative_predictions = doc.value("clip_negative_predictions", false);
        m.reverse_order = doc.value("reverse_order", false);
        const json& split = doc.at("split");
        reject_unknown_keys(split, {"train_fraction", "train_rows", "test_rows"}, "manifest.split");
        if (split.contains("train_fraction")) {
            m.split.train_fraction = split.at("train_fraction").get<double>();
        }
        if (split.contains("train_rows")) {
            m.split.train_rows = parse_range(split.at("train_rows"), "train_rows");
        }
        if (split.contains("test_rows")) {
            m.split.test_rows = parse_range(split.at("test_rows"), "test_rows");
        }
        const auto delim = doc.value("delimiter", std::string(","));
        if (delim.size() != 1) {
            throw InvalidArgument("manifest: delimiter must be a single character");
        }
        m.delimiter = delim[0];
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("manifest: ") + e.what());
    }
    m.validate();
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot open manifest '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IngestionError("manifest '" + path.string() + "': " + e.what());
    }
    return parse_manifest(doc, path.parent_path());
}

json manifest_to_json(const DatasetManifest& m) {
    json groups = json::array();
    for (const auto& g : m.categorical_groups) {
        groups.push_back({{"column", g.column}, {"labels", g.labels}});
    }
    json split = json::object();
    if (m.split.train_fraction) {
        split["train_fraction"] = *m.split.train_fraction;
    }
    if (m.split.train_rows) {
        split["train_rows"] = {m.split.train_rows->first, m.split.train_rows->second};
    }
    if (m.split.test_rows) {
        split["test_rows"] = {m.split.test_rows->first, m.split.test_rows->second};
    }
    return json{{"csv_path", m.csv_path.generic_string()},
                {"feature_columns", m.feature_columns},
                {"target_column", m.target_column},
                {"categorical_groups", std::move(groups)},
                {"target_transform", std::string(to_string(m.target_transform))},
                {"clip_negative_predictions", m.clip_negative_predictions},
                {"split", std::move(split)},
                {"reverse_order", m.reverse_order},
                {"delimiter", std::string(1, m.delimiter)}};
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestionError("cannot open CSV '" + path.string() + "'");
    }
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            if (line_no == 1) {
                throw IngestionError(path.string() + ": missing header row");
            }
            continue;
        }
        auto cells = split_line(line, delimiter);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw IngestionError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(table.header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        cells.push_back(std::to_string(line_no));  // provenance, stripped by load_dataset
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) {
        throw IngestionError(path.string() + ": missing header row");
    }
    return table;
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

Vector select_rows(const Vector& v, const std::vector<std::size_t>& rows) {
    Vector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

Matrix Dataset::train_inputs() const { return select_rows(features, train_rows); }
Matrix Dataset::test_inputs() const { return select_rows(features, test_rows); }
Vector Dataset::train_target() const { return select_rows(target, train_rows); }
Vector Dataset::test_target() const { return select_rows(target, test_rows); }

Dataset make_dataset(std::string name, Matrix features, Vector target, std::size_t n_train) {
    if (features.rows() != target.size()) {
        throw InvalidArgument("make_dataset: features and target differ in length");
    }
    if (n_train < 1 || n_train >= static_cast<std::size_t>(features.rows())) {
        throw InvalidArgument("make_dataset: n_train must leave at least one test row");
    }
    Dataset ds;
    ds.name = std::move(name);
    ds.features = std::move(features);
    ds.target = std::move(target);
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
        ds.feature_names.push_back("x" + std::to_string(j + 1));
        ds.continuous_columns.push_back(static_cast<std::size_t>(j));
    }
    const auto n = static_cast<std::size_t>(ds.features.rows());
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? ds.train_rows : ds.test_rows).push_back(i);
        ds.source_lines.push_back(i + 2);
    }
    return ds;
}

namespace {

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
        throw IngestionError("line " + std::to_string(line) + ", column '" + column + "': cannot parse '" + cell +
                             "' as a number");
    }
    return value;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
        throw IngestionError("CSV has no column '" + name + "'");
    }
    return static_cast<std::size_t>(it - table.header.begin());
}

} // namespace

Dataset load_dataset(const DatasetManifest& manifest) {
    manifest.validate();
    const CsvTable table = read_csv(manifest.csv_path, manifest.delimiter);

    std::vector<std::size_t> feature_idx;
    for (const auto& c : manifest.feature_columns) {
        feature_idx.push_back(column_index(table, c));
    }
    std::vector<std::size_t> category_idx;
    for (const auto& g : manifest.categorical_groups) {
        category_idx.push_back(column_index(table, g.column));
    }
    const std::size_t target_idx = column_index(table, manifest.target_column);

    Dataset ds;
    ds.name = manifest.csv_path.stem().string();
    ds.target_transform = manifest.target_transform;
    ds.clip_negative_predictions = manifest.clip_negative_predictions;

    std::vector<std::size_t> used = feature_idx;
    used.insert(used.end(), category_idx.begin(), category_idx.end());
    used.push_back(target_idx);

    std::vector<const std::vector<std::string>*> kept;
    for (const auto& row : table.rows) {
        const bool missing = std::any_of(used.begin(), used.end(), [&](std::size_t c) { return row[c].empty(); });
        if (missing) {
            ++ds.dropped_rows;
            spdlog::debug("dropping CSV line {}: missing value", row.back());
            continue;
        }
        kept.push_back(&row);
    }
    if (ds.dropped_rows > 0) {
        spdlog::info("{}: dropped {} row(s) with missing values", manifest.csv_path.string(), ds.dropped_rows);
    }
    if (kept.empty()) {
        throw IngestionError(manifest.csv_path.string() + ": no complete rows");
    }

    std::size_t width = feature_idx.size();
    for (const auto& g : manifest.categorical_groups) {
        width += g.labels.size();
    }
    const auto n = static_cast<Eigen::Index>(kept.size());
    ds.features.resize(n, static_cast<Eigen::Index>(width));
    Vector raw_target(n);

    for (const auto& c : manifest.feature_columns) {
        ds.continuous_columns.push_back(ds.feature_names.size());
        ds.feature_names.push_back(c);
    }
    std::size_t next = feature_idx.size();
    for (const auto& g : manifest.categorical_groups) {
        OneHotGroup group{g.column, {}, g.labels};
        for (const auto& label : g.labels) {
            group.column_indices.push_back(next++);
            ds.feature_names.push_back(g.column + "=" + label);
        }
        ds.categorical_groups.push_back(std::move(group));
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = *kept[static_cast<std::size_t>(i)];
        const std::size_t line = std::stoul(row.back());
        ds.source_lines.push_back(line);
        for (std::size_t j = 0; j < feature_idx.size(); ++j) {
            ds.features(i, static_cast<Eigen::Index>(j)) =
                parse_number(row[feature_idx[j]], line, manifest.feature_columns[j]);
        }
        for (std::size_t g = 0; g < manifest.categorical_groups.size(); ++g) {
            const auto& spec = manifest.categorical_groups[g];
            Matrix encoded;
            try {
                encoded = one_hot_encode({row[category_idx[g]]}, spec.labels);
            } catch (const InvalidArgument&) {
                throw IngestionError("line " + std::to_string(line) + ", column '" + spec.column +
                                     "': unknown category '" + row[category_idx[g]] + "'");
            }
            const auto& cols = ds.categorical_groups[g].column_indices;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                ds.features(i, static_cast<Eigen::Index>(cols[k])) = encoded(0, static_cast<Eigen::Index>(k));
            }
        }
        raw_target(i) = parse_number(row[target_idx], line, manifest.target_column);
    }

    try {
        ds.target = transform_target(raw_target, manifest.target_transform);
    } catch (const InvalidArgument& e) {
        // locate the offending row for the message
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = raw_target(i);
            const bool bad = manifest.target_transform == TargetTransform::FourthRoot ? !(v >= 0.0) : !(v > 0.0);
            if (bad) {
                throw IngestionError("line " + std::to_string(ds.source_lines[static_cast<std::size_t>(i)]) +
                                     ", column '" + manifest.target_column + "': " + e.what());
            }
        }
        throw IngestionError(e.what());
    }

    // Split in (optionally reversed) record order, then keep each side chronological.
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (manifest.reverse_order) {
        std::reverse(order.begin(), order.end());
    }
    const auto total = order.size();
    if (manifest.split.train_fraction) {
        const auto n_train = static_cast<std::size_t>(std::llround(*manifest.split.train_fraction * static_cast<double>(total)));
        if (n_train < 1 || n_train >= total) {
            throw IngestionError("train_fraction leaves an empty training or test set");
        }
        ds.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        ds.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    } else {
        const auto [tb, te] = *manifest.split.train_rows;
        const auto [sb, se] = *manifest.split.test_rows;
        const bool disjoint = te <= sb || se <= tb;
        const bool exhaustive = std::min(tb, sb) == 0 && std::max(te, se) == total && (te - tb) + (se - sb) == total;
        if (!disjoint || !exhaustive) {
            throw IngestionError("split ranges must be disjoint and cover all " + std::to_string(total) + " retained rows");
        }
        ds.train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(tb), order.begin() + static_cast<std::ptrdiff_t>(te));
        ds.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(sb), order.begin() + static_cast<std::ptrdiff_t>(se));
    }
    std::sort(ds.train_rows.begin(), ds.train_rows.end());
    std::sort(ds.test_rows.begin(), ds.test_rows.end());
    return ds;
}

} // namespace nlror
