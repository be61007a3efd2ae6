#include "nlror/serialize.hpp"

#include "nlror/errors.hpp"

#include <fstream>
#include <string>

namespace nlror {

using nlohmann::json;

namespace {

void expect_format(const json& doc, const char* format) {
    if (!doc.is_object() || doc.value("format", std::string{}) != format) {
        throw InvalidArgument(std::string("expected a '") + format + "' document");
    }
    const int version = doc.value("version", 0);
    if (version != kModelFormatVersion) {
        throw InvalidArgument(std::string(format) + ": unsupported version " + std::to_string(version));
    }
}

} // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& values = j.at("values");
    if (static_cast<Eigen::Index>(values.size()) != rows) {
        throw InvalidArgument("matrix document: row count does not match 'rows'");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = values.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidArgument("matrix document: ragged row " + std::to_string(i));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

Vector vector_from_json(const json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    }
    return v;
}

json elm_to_json(const ElmModel& model) {
    return json{
        {"format", "nlror-elm"},
        {"version", kModelFormatVersion},
        {"activation", std::string(to_string(model.activation))},
        {"seed", model.seed},
        {"node_count", model.node_count()},
        {"input_dim", model.input_dim()},
        {"output_dim", model.output_dim()},
        {"output_bias_included", model.output_bias_included},
        {"hidden_weights", matrix_to_json(model.hidden_weights)},
        {"hidden_biases", vector_to_json(model.hidden_biases)},
        {"output_weights", matrix_to_json(model.output_weights)},
        {"output_bias", vector_to_json(model.output_bias)},
    };
}

ElmModel elm_from_json(const json& doc) {
    expect_format(doc, "nlror-elm");
    ElmModel model;
    model.activation = parse_activation(doc.at("activation").get<std::string>());
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.output_bias_included = doc.at("output_bias_included").get<bool>();
    model.hidden_weights = matrix_from_json(doc.at("hidden_weights"));
    model.hidden_biases = vector_from_json(doc.at("hidden_biases"));
    model.output_weights = matrix_from_json(doc.at("output_weights"));
    model.output_bias = vector_from_json(doc.at("output_bias"));
    if (model.node_count() != doc.at("node_count").get<std::size_t>() ||
        model.input_dim() != doc.at("input_dim").get<std::size_t>() ||
        model.output_dim() != doc.at("output_dim").get<std::size_t>() ||
        static_cast<std::size_t>(model.hidden_biases.size()) != model.node_count() ||
        static_cast<std::size_t>(model.output_weights.rows()) != model.node_count() ||
        static_cast<std::size_t>(model.output_bias.size()) != model.output_dim()) {
        throw InvalidArgument("nlror-elm: inconsistent dimensions");
    }
    return model;
}

json ensemble_to_json(const EnsembleModel& ensemble) {
    json members = json::array();
    for (const auto& m : ensemble.members) {
        json j = elm_to_json(m);
        j.erase("format");
        j.erase("version");
        members.push_back(std::move(j));
    }
    return json{
        {"format", "nlror-ensemble"},
        {"version", kModelFormatVersion},
        {"trim_policy", std::string(to_string(ensemble.trim_policy))},
        {"member_count", ensemble.size()},
        {"members", std::move(members)},
    };
}

EnsembleModel ensemble_from_json(const json& doc) {
    expect_format(doc, "nlror-ensemble");
    EnsembleModel ensemble;
    const auto policy = doc.at("trim_policy").get<std::string>();
    if (policy == "none") {
        ensemble.trim_policy = TrimPolicy::None;
    } else if (policy == "drop_min_max") {
        ensemble.trim_policy = TrimPolicy::DropMinMax;
    } else {
        throw InvalidArgument("nlror-ensemble: unknown trim policy '" + policy + "'");
    }
    for (json member : doc.at("members")) {
        member["format"] = "nlror-elm";
        member["version"] = kModelFormatVersion;
        ensemble.members.push_back(elm_from_json(member));
    }
    if (ensemble.size() != doc.at("member_count").get<std::size_t>() || ensemble.members.empty()) {
        throw InvalidArgument("nlror-ensemble: member count mismatch");
    }
    for (const auto& m : ensemble.members) {
        const auto& first = ensemble.members.front();
        if (m.activation != first.activation || m.node_count() != first.node_count() ||
            m.input_dim() != first.input_dim()) {
            throw InvalidArgument("nlror-ensemble: members disagree on activation or shape");
        }
    }
    return ensemble;
}

json gate_to_json(const Gate& gate) {
    return json{
        {"format", "nlror-gate"},
        {"version", kModelFormatVersion},
        {"dim", gate.dim()},
        {"mean", vector_to_json(gate.mean)},
        {"covariance", matrix_to_json(gate.covariance)},
        {"ridge", gate.ridge},
        {"threshold_distance", gate.threshold_distance},
        {"percentile_q", gate.percentile_q},
        {"center", vector_to_json(gate.center)},
        {"training_inputs", matrix_to_json(gate.training_inputs)},
    };
}

Gate gate_from_json(const json& doc) {
    expect_format(doc, "nlror-gate");
    Gate gate = assemble_gate(vector_from_json(doc.at("mean")), matrix_from_json(doc.at("covariance")),
                              doc.at("threshold_distance").get<double>(), doc.at("percentile_q").get<double>(),
                              vector_from_json(doc.at("center")), matrix_from_json(doc.at("training_inputs")));
    if (gate.dim() != doc.at("dim").get<std::size_t>()) {
        throw InvalidArgument("nlror-gate: dimension mismatch");
    }
    return gate;
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << doc.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    return json::parse(in);
}

} // namespace nlror
