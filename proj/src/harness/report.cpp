#include "nlror/harness/report.hpp"

#include "nlror/errors.hpp"
#include "nlror/harness/format.hpp"
#include "nlror/serialize.hpp"

#include <fstream>
#include <map>
#include <tuple>

namespace nlror {

using nlohmann::json;

namespace {

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from(const json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

json scores_to_json(const ScoreTable& t) {
    json out = json::object();
    for (std::size_t m = 0; m < kModelCount; ++m) {
        json per_subset = json::object();
        for (std::size_t s = 0; s < kSubsetCount; ++s) {
            json per_metric = json::object();
            for (std::size_t k = 0; k < kMetricCount; ++k) {
                per_metric[std::string(to_string(static_cast<Metric>(k)))] = optional_json(t[m][s][k]);
            }
            per_subset[std::string(to_string(static_cast<Subset>(s)))] = std::move(per_metric);
        }
        out[std::string(to_string(static_cast<Model>(m)))] = std::move(per_subset);
    }
    return out;
}

ScoreTable scores_from_json(const json& j) {
    ScoreTable t{};
    for (std::size_t m = 0; m < kModelCount; ++m) {
        const json& per_subset = j.at(std::string(to_string(static_cast<Model>(m))));
        for (std::size_t s = 0; s < kSubsetCount; ++s) {
            const json& per_metric = per_subset.at(std::string(to_string(static_cast<Subset>(s))));
            for (std::size_t k = 0; k < kMetricCount; ++k) {
                t[m][s][k] = optional_from(per_metric.at(std::string(to_string(static_cast<Metric>(k)))));
            }
        }
    }
    return t;
}

json box_to_json(const std::optional<BoxplotSummary>& box) {
    if (!box) {
        return nullptr;
    }
    return json{{"median", box->median},
                {"q25", box->q25},
                {"q75", box->q75},
                {"lower_whisker", box->lower_whisker},
                {"upper_whisker", box->upper_whisker},
                {"outside_points", box->outside_points},
                {"count", box->count}};
}

json aggregate_to_json(const AggregateCell& a) {
    return json{{"activation", std::string(to_string(a.activation))},
                {"gate_percentile", a.gate_percentile},
                {"quantity", a.quantity},
                {"subset", std::string(to_string(a.subset))},
                {"metric", std::string(to_string(a.metric))},
                {"present_trials", a.present_trials},
                {"mean", optional_json(a.mean)},
                {"boxplot", box_to_json(a.box)}};
}

json or_diagnostic_to_json(const OutlierDiagnostic& d) {
    json candidates = json::array();
    for (const auto& c : d.detail.candidates) {
        candidates.push_back({{"source", c.source},
                              {"delta", c.delta},
                              {"value", optional_json(c.value)},
                              {"drop_reason", c.drop_reason}});
    }
    return json{{"test_row", d.test_row},
                {"neighbor_index", d.detail.neighbor_index},
                {"center", vector_to_json(d.detail.center)},
                {"candidates", std::move(candidates)},
                {"prediction", d.detail.prediction}};
}

std::string cell_text(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("null");
}

} // namespace

json report_to_json(const ExperimentResult& r, const json& manifest) {
    json activations = json::array();
    for (const auto& a : r.activations) {
        json scores = json::array();
        for (const auto& s : a.cv.scores) {
            scores.push_back({{"node_count", s.node_count}, {"mean_mse", optional_json(s.mean_mse)}});
        }
        activations.push_back({{"activation", std::string(to_string(a.activation))},
                               {"node_count", a.node_count},
                               {"trim_policy", std::string(to_string(a.trim_policy))},
                               {"cv_scores", std::move(scores)}});
    }
    json gates = json::array();
    for (const auto& g : r.gates) {
        gates.push_back({{"percentile", g.percentile},
                         {"threshold_distance", g.threshold_distance},
                         {"ridge", g.ridge},
                         {"outlier_count", g.outlier_rows.size()},
                         {"outlier_rows", g.outlier_rows}});
    }
    json trials = json::array();
    for (std::size_t i = 0; i < r.trials.size(); ++i) {
        const auto& t = r.trials[i];
        json row{{"activation", std::string(to_string(t.activation))},
                 {"gate_percentile", t.gate_percentile},
                 {"trial", t.trial},
                 {"trial_seed", t.trial_seed},
                 {"node_count", t.node_count},
                 {"outlier_count", t.outlier_count},
                 {"non_outlier_count", t.non_outlier_count},
                 {"test_count", t.test_count},
                 {"scores", scores_to_json(t.scores)}};
        if (!t.nlr_predictions.empty()) {
            const Vector nlr = Eigen::Map<const Vector>(t.nlr_predictions.data(), static_cast<Eigen::Index>(t.nlr_predictions.size()));
            const Vector nlror = Eigen::Map<const Vector>(t.nlror_predictions.data(), static_cast<Eigen::Index>(t.nlror_predictions.size()));
            row["predictions"] = {{"nlr", t.nlr_predictions},
                                  {"nlr_or", t.nlror_predictions},
                                  {"nlr_original_units", vector_to_json(inverse_transform_target(nlr, r.target_transform))},
                                  {"nlr_or_original_units", vector_to_json(inverse_transform_target(nlror, r.target_transform))}};
        }
        if (i < r.diagnostics.size()) {
            json diags = json::array();
            for (const auto& d : r.diagnostics[i]) {
                diags.push_back(or_diagnostic_to_json(d));
            }
            row["outlier_diagnostics"] = std::move(diags);
        }
        trials.push_back(std::move(row));
    }
    json aggregates = json::array();
    for (const auto& a : r.aggregates) {
        aggregates.push_back(aggregate_to_json(a));
    }
    return json{{"format", "nlror-report"},
                {"version", kReportFormatVersion},
                {"dataset",
                 {{"name", r.dataset_name},
                  {"train_count", r.train_count},
                  {"test_count", r.test_count},
                  {"dropped_rows", r.dropped_rows},
                  {"r_outl", r.r_outl},
                  {"target_transform", std::string(to_string(r.target_transform))},
                  {"test_observations", r.test_observations}}},
                {"manifest", manifest},
                {"config", config_to_json(r.config)},
                {"activations", std::move(activations)},
                {"gates", std::move(gates)},
                {"trials", std::move(trials)},
                {"aggregates", std::move(aggregates)}};
}

ExperimentResult report_from_json(const json& doc) {
    try {
        if (doc.at("format").get<std::string>() != "nlror-report") {
            throw InvalidArgument("not an nlror-report document");
        }
        if (doc.at("version").get<int>() != kReportFormatVersion) {
            throw InvalidArgument("unsupported report version " + doc.at("version").dump());
        }
        ExperimentResult r;
        const json& ds = doc.at("dataset");
        r.dataset_name = ds.at("name").get<std::string>();
        r.train_count = ds.at("train_count").get<std::size_t>();
        r.test_count = ds.at("test_count").get<std::size_t>();
        r.dropped_rows = ds.at("dropped_rows").get<std::size_t>();
        r.r_outl = ds.at("r_outl").get<double>();
        r.target_transform = parse_target_transform(ds.at("target_transform").get<std::string>());
        r.test_observations = ds.at("test_observations").get<std::vector<double>>();
        r.config = parse_config(doc.at("config"));
        for (const auto& a : doc.at("activations")) {
            ActivationSummary s;
            s.activation = parse_activation(a.at("activation").get<std::string>());
            s.node_count = a.at("node_count").get<std::size_t>();
            s.cv.selected_node_count = s.node_count;
            s.trim_policy = a.at("trim_policy").get<std::string>() == "drop_min_max" ? TrimPolicy::DropMinMax
                                                                                       : TrimPolicy::None;
            for (const auto& c : a.at("cv_scores")) {
                s.cv.scores.push_back({c.at("node_count").get<std::size_t>(), optional_from(c.at("mean_mse"))});
            }
            r.activations.push_back(std::move(s));
        }
        for (const auto& g : doc.at("gates")) {
            r.gates.push_back({g.at("percentile").get<double>(), g.at("threshold_distance").get<double>(),
                               g.at("ridge").get<double>(), g.at("outlier_rows").get<std::vector<std::size_t>>()});
        }
        for (const auto& t : doc.at("trials")) {
            TrialReport tr;
            tr.activation = parse_activation(t.at("activation").get<std::string>());
            tr.gate_percentile = t.at("gate_percentile").get<double>();
            tr.trial = t.at("trial").get<std::size_t>();
            tr.trial_seed = t.at("trial_seed").get<std::uint64_t>();
            tr.node_count = t.at("node_count").get<std::size_t>();
            tr.outlier_count = t.at("outlier_count").get<std::size_t>();
            tr.non_outlier_count = t.at("non_outlier_count").get<std::size_t>();
            tr.test_count = t.at("test_count").get<std::size_t>();
            tr.scores = scores_from_json(t.at("scores"));
            if (t.contains("predictions")) {
                tr.nlr_predictions = t.at("predictions").at("nlr").get<std::vector<double>>();
                tr.nlror_predictions = t.at("predictions").at("nlr_or").get<std::vector<double>>();
            }
            r.trials.push_back(std::move(tr));
        }
        r.aggregates = aggregate_trials(r.trials, r.config.activations, r.config.gate_percentiles);
        return r;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("report: ") + e.what());
    }
}

void write_long_csv(const ExperimentResult& r, std::ostream& out) {
    out << "dataset,activation,gate_percentile,trial,trial_seed,node_count,model,subset,metric,value,subset_size\n";
    for (const auto& t : r.trials) {
        const std::size_t sizes[] = {t.outlier_count, t.non_outlier_count, t.test_count};
        for (std::size_t m = 0; m < kModelCount; ++m) {
            for (std::size_t s = 0; s < kSubsetCount; ++s) {
                for (std::size_t k = 0; k < kMetricCount; ++k) {
                    out << r.dataset_name << ',' << to_string(t.activation) << ',' << format_double(t.gate_percentile)
                        << ',' << t.trial << ',' << t.trial_seed << ',' << t.node_count << ','
                        << to_string(static_cast<Model>(m)) << ',' << to_string(static_cast<Subset>(s)) << ','
                        << to_string(static_cast<Metric>(k)) << ',' << cell_text(t.scores[m][s][k]) << ','
                        << sizes[s] << '\n';
                }
            }
        }
    }
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") {
        return ReportFormat::Json;
    }
    if (name == "csv") {
        return ReportFormat::Csv;
    }
    if (name == "both") {
        return ReportFormat::Both;
    }
    throw InvalidArgument("unknown report format '" + std::string(name) + "' (json, csv, both)");
}

std::vector<std::filesystem::path> emit_report(const ExperimentResult& result, const json& manifest,
                                               const std::filesystem::path& out_dir, ReportFormat format) {
    if (result.trials.empty()) {
        throw InvalidArgument("emit_report: no trials");
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    if (format != ReportFormat::Csv) {
        const auto path = out_dir / "report.json";
        write_json_file(path, report_to_json(result, manifest));
        written.push_back(path);
    }
    if (format != ReportFormat::Json) {
        const auto path = out_dir / "scores.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        }
        write_long_csv(result, out);
        if (!out) {
            throw std::runtime_error("failed writing '" + path.string() + "'");
        }
        written.push_back(path);
    }
    return written;
}

SummaryReport summarize_reports(std::vector<ExperimentResult> results) {
    SummaryReport summary;
    using Key = std::tuple<int, double, std::string, int, int>;
    std::map<Key, std::vector<double>> medians;
    std::map<Key, std::size_t> seen;
    std::vector<Key> order;
    for (auto& r : results) {
        r.aggregates = aggregate_trials(r.trials, r.config.activations, r.config.gate_percentiles);
        for (const auto& a : r.aggregates) {
            const Key key{static_cast<int>(a.activation), a.gate_percentile, a.quantity, static_cast<int>(a.subset),
                          static_cast<int>(a.metric)};
            if (seen[key]++ == 0) {
                order.push_back(key);
            }
            if (a.box) {
                medians[key].push_back(a.box->median);
            }
        }
    }
    for (const auto& key : order) {
        Waistline w;
        w.activation = static_cast<Activation>(std::get<0>(key));
        w.gate_percentile = std::get<1>(key);
        w.quantity = std::get<2>(key);
        w.subset = static_cast<Subset>(std::get<3>(key));
        w.metric = static_cast<Metric>(std::get<4>(key));
        const auto it = medians.find(key);
        if (it != medians.end() && !it->second.empty()) {
            const auto& v = it->second;
            double sum = 0.0;
            for (double x : v) {
                sum += x;
            }
            w.dataset_count = v.size();
            w.mean_of_medians = sum / static_cast<double>(v.size());
            w.median_of_medians = median(v);
        }
        summary.waistlines.push_back(std::move(w));
    }
    summary.datasets = std::move(results);
    return summary;
}

json summary_to_json(const SummaryReport& s) {
    json datasets = json::array();
    for (const auto& r : s.datasets) {
        json aggregates = json::array();
        for (const auto& a : r.aggregates) {
            aggregates.push_back(aggregate_to_json(a));
        }
        datasets.push_back({{"name", r.dataset_name},
                            {"r_outl", r.r_outl},
                            {"trials", r.trials.size()},
                            {"aggregates", std::move(aggregates)}});
    }
    json lines = json::array();
    for (const auto& w : s.waistlines) {
        lines.push_back({{"activation", std::string(to_string(w.activation))},
                         {"gate_percentile", w.gate_percentile},
                         {"quantity", w.quantity},
                         {"subset", std::string(to_string(w.subset))},
                         {"metric", std::string(to_string(w.metric))},
                         {"dataset_count", w.dataset_count},
                         {"mean_of_medians", optional_json(w.mean_of_medians)},
                         {"median_of_medians", optional_json(w.median_of_medians)}});
    }
    return json{{"format", "nlror-summary"},
                {"version", kReportFormatVersion},
                {"datasets", std::move(datasets)},
                {"waistlines", std::move(lines)}};
}

void write_summary_csv(const SummaryReport& s, std::ostream& out) {
    out << "dataset,activation,gate_percentile,quantity,subset,metric,present_trials,mean,median,q25,q75,"
           "lower_whisker,upper_whisker,outside_count\n";
    const auto box_cells = [&](const std::optional<BoxplotSummary>& b) {
        if (!b) {
            out << "null,null,null,null,null,0";
            return;
        }
        out << format_double(b->median) << ',' << format_double(b->q25) << ',' << format_double(b->q75) << ','
            << format_double(b->lower_whisker) << ',' << format_double(b->upper_whisker) << ','
            << b->outside_points.size();
    };
    for (const auto& r : s.datasets) {
        for (const auto& a : r.aggregates) {
            out << r.dataset_name << ',' << to_string(a.activation) << ',' << format_double(a.gate_percentile) << ','
                << a.quantity << ',' << to_string(a.subset) << ',' << to_string(a.metric) << ','
                << a.present_trials << ',' << cell_text(a.mean) << ',';
            box_cells(a.box);
            out << '\n';
        }
    }
    for (const auto& w : s.waistlines) {
        // across datasets: "mean" column holds the mean of medians, "median" the median of medians
        out << "*," << to_string(w.activation) << ',' << format_double(w.gate_percentile) << ',' << w.quantity << ','
            << to_string(w.subset) << ',' << to_string(w.metric) << ',' << w.dataset_count << ','
            << cell_text(w.mean_of_medians) << ',' << cell_text(w.median_of_medians)
            << ",null,null,null,null,0\n";
    }
}

} // namespace nlror
