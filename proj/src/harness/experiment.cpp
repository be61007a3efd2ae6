#include "nlror/harness/experiment.hpp"

#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"
#include "nlror/preprocess.hpp"

#include <spdlog/spdlog.h>

#include <fstream>

namespace nlror {

using nlohmann::json;

std::string_view to_string(Model m) {
    switch (m) {
    case Model::LR: return "LR";
    case Model::NLR: return "NLR";
    case Model::NLR_OR: return "NLR_OR";
    }
    throw InternalError("unknown model");
}

std::string_view to_string(Subset s) {
    switch (s) {
    case Subset::Outliers: return "outliers";
    case Subset::NonOutliers: return "non_outliers";
    case Subset::All: return "all";
    }
    throw InternalError("unknown subset");
}

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::MAEn: return "maen";
    case Metric::Spearman: return "spearman";
    }
    throw InternalError("unknown metric");
}

std::string_view to_string(MadReference r) {
    return r == MadReference::FullTest ? "full_test" : "subset";
}

void ExperimentConfig::validate() const {
    if (activations.empty()) {
        throw InvalidArgument("config: no activations");
    }
    for (std::size_t i = 0; i < activations.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (activations[i] == activations[j]) {
                throw InvalidArgument("config: duplicate activation");
            }
        }
    }
    if (trials < 1) {
        throw InvalidArgument("config: trials must be >= 1");
    }
    if (members_per_trial < 1) {
        throw InvalidArgument("config: members_per_trial must be >= 1");
    }
    if (gate_percentiles.empty()) {
        throw InvalidArgument("config: no gate percentiles");
    }
    for (double q : gate_percentiles) {
        if (!(q > 0.0 && q < 100.0)) {
            throw InvalidArgument("config: gate percentiles must lie in (0, 100)");
        }
    }
    if (min_subset_size < 2) {
        throw InvalidArgument("config: min_subset_size must be >= 2");
    }
    cv.validate();
    or_config.validate();
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

} // namespace

ExperimentConfig parse_config(const json& doc) {
    reject_unknown_keys(doc,
                        {"activations", "trials", "members_per_trial", "gate_percentiles", "cv", "or_config",
                         "master_seed", "mad_reference", "min_subset_size", "record_predictions",
                         "record_diagnostics"},
                        "config");
    ExperimentConfig c;
    try {
        if (doc.contains("activations")) {
            c.activations.clear();
            for (const auto& a : doc.at("activations")) {
                c.activations.push_back(parse_activation(a.get<std::string>()));
            }
        }
        c.trials = doc.value("trials", c.trials);
        c.members_per_trial = doc.value("members_per_trial", c.members_per_trial);
        c.gate_percentiles = doc.value("gate_percentiles", c.gate_percentiles);
        c.master_seed = doc.value("master_seed", c.master_seed);
        c.min_subset_size = doc.value("min_subset_size", c.min_subset_size);
        c.record_predictions = doc.value("record_predictions", c.record_predictions);
        c.record_diagnostics = doc.value("record_diagnostics", c.record_diagnostics);
        if (doc.contains("mad_reference")) {
            const auto r = doc.at("mad_reference").get<std::string>();
            if (r == "full_test") {
                c.mad_reference = MadReference::FullTest;
            } else if (r == "subset") {
                c.mad_reference = MadReference::Subset;
            } else {
                throw InvalidArgument("config: mad_reference must be 'full_test' or 'subset'");
            }
        }
        if (doc.contains("cv")) {
            const json& cv = doc.at("cv");
            reject_unknown_keys(cv, {"folds", "candidate_node_counts"}, "config.cv");
            c.cv.folds = cv.value("folds", c.cv.folds);
            c.cv.candidate_node_counts = cv.value("candidate_node_counts", c.cv.candidate_node_counts);
        }
        if (doc.contains("or_config")) {
            const json& oc = doc.at("or_config");
            reject_unknown_keys(oc, {"delta1_values", "delta2_values", "include_raw_nlr"}, "config.or_config");
            c.or_config.delta1_values = oc.value("delta1_values", c.or_config.delta1_values);
            c.or_config.delta2_values = oc.value("delta2_values", c.or_config.delta2_values);
            c.or_config.include_raw_nlr = oc.value("include_raw_nlr", c.or_config.include_raw_nlr);
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot open config '" + path.string() + "'");
    }
    try {
        return parse_config(json::parse(in));
    } catch (const json::parse_error& e) {
        throw IngestionError("config '" + path.string() + "': " + e.what());
    }
}

json config_to_json(const ExperimentConfig& c) {
    json acts = json::array();
    for (auto a : c.activations) {
        acts.push_back(std::string(to_string(a)));
    }
    return json{{"activations", std::move(acts)},
                {"trials", c.trials},
                {"members_per_trial", c.members_per_trial},
                {"gate_percentiles", c.gate_percentiles},
                {"cv", {{"folds", c.cv.folds}, {"candidate_node_counts", c.cv.candidate_node_counts}}},
                {"or_config",
                 {{"delta1_values", c.or_config.delta1_values},
                  {"delta2_values", c.or_config.delta2_values},
                  {"include_raw_nlr", c.or_config.include_raw_nlr}}},
                {"master_seed", c.master_seed},
                {"mad_reference", std::string(to_string(c.mad_reference))},
                {"min_subset_size", c.min_subset_size},
                {"record_predictions", c.record_predictions},
                {"record_diagnostics", c.record_diagnostics}};
}

std::uint64_t trial_seed(std::uint64_t master_seed, Activation activation, std::size_t trial) {
    return derive_seed(derive_seed(master_seed, 1), static_cast<std::uint64_t>(activation), trial);
}

namespace {

std::uint64_t cv_seed(std::uint64_t master_seed, Activation activation) {
    return derive_seed(derive_seed(master_seed, 2), static_cast<std::uint64_t>(activation));
}

std::vector<double> gather(const Vector& v, const std::vector<std::size_t>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (auto r : rows) {
        out.push_back(v(static_cast<Eigen::Index>(r)));
    }
    return out;
}

} // namespace

void score_model(ScoreTable& table, Model model, const Vector& predictions, const Vector& observations,
                 const std::vector<std::size_t>& outlier_rows, const std::vector<std::size_t>& non_outlier_rows,
                 MadReference mad_reference, std::size_t min_size) {
    std::vector<std::size_t> all_rows(static_cast<std::size_t>(observations.size()));
    for (std::size_t i = 0; i < all_rows.size(); ++i) {
        all_rows[i] = i;
    }
    const std::vector<double> full_obs = gather(observations, all_rows);
    const std::pair<Subset, const std::vector<std::size_t>*> subsets[] = {
        {Subset::Outliers, &outlier_rows}, {Subset::NonOutliers, &non_outlier_rows}, {Subset::All, &all_rows}};
    for (const auto& [subset, rows] : subsets) {
        auto& maen_cell = cell(table, model, subset, Metric::MAEn);
        auto& rho_cell = cell(table, model, subset, Metric::Spearman);
        maen_cell.reset();
        rho_cell.reset();
        if (rows->size() < min_size) {
            continue;
        }
        const auto pred = gather(predictions, *rows);
        const auto obs = gather(observations, *rows);
        try {
            maen_cell = maen(pred, obs, mad_reference == MadReference::FullTest ? full_obs : obs);
        } catch (const DegenerateReference&) {
            spdlog::warn("{} {}: MAD of the reference is zero, MAEn absent", to_string(model), to_string(subset));
        }
        try {
            rho_cell = spearman(pred, obs);
        } catch (const UndefinedCorrelation&) {
            spdlog::debug("{} {}: constant vector, Spearman absent", to_string(model), to_string(subset));
        }
    }
}

std::vector<AggregateCell> aggregate_trials(const std::vector<TrialReport>& trials,
                                            const std::vector<Activation>& activations,
                                            const std::vector<double>& percentiles) {
    struct Quantity {
        const char* name;
        Model a;
        std::optional<Model> b;
    };
    const Quantity quantities[] = {{"LR", Model::LR, {}},
                                   {"NLR", Model::NLR, {}},
                                   {"NLR_OR", Model::NLR_OR, {}},
                                   {"NLR-LR", Model::NLR, Model::LR},
                                   {"NLR_OR-NLR", Model::NLR_OR, Model::NLR},
                                   {"NLR_OR-LR", Model::NLR_OR, Model::LR}};
    std::vector<AggregateCell> cells;
    for (auto act : activations) {
        for (double q : percentiles) {
            for (const auto& quantity : quantities) {
                for (std::size_t s = 0; s < kSubsetCount; ++s) {
                    for (std::size_t k = 0; k < kMetricCount; ++k) {
                        AggregateCell agg;
                        agg.activation = act;
                        agg.gate_percentile = q;
                        agg.quantity = quantity.name;
                        agg.subset = static_cast<Subset>(s);
                        agg.metric = static_cast<Metric>(k);
                        std::vector<double> values;
                        for (const auto& t : trials) {
                            if (t.activation != act || t.gate_percentile != q) {
                                continue;
                            }
                            const auto& va = cell(t.scores, quantity.a, agg.subset, agg.metric);
                            if (!va) {
                                continue;
                            }
                            if (quantity.b) {
                                const auto& vb = cell(t.scores, *quantity.b, agg.subset, agg.metric);
                                if (!vb) {
                                    continue;
                                }
                                values.push_back(*va - *vb);
                            } else {
                                values.push_back(*va);
                            }
                        }
                        agg.present_trials = values.size();
                        if (!values.empty()) {
                            double sum = 0.0;
                            for (double v : values) {
                                sum += v;
                            }
                            agg.mean = sum / static_cast<double>(values.size());
                            agg.box = boxplot_stats(values);
                        }
                        cells.push_back(std::move(agg));
                    }
                }
            }
        }
    }
    return cells;
}

ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.dataset_name = dataset.name;
    result.config = config;
    result.dropped_rows = dataset.dropped_rows;
    result.target_transform = dataset.target_transform;

    const Matrix train_raw = dataset.train_inputs();
    const Matrix test_raw = dataset.test_inputs();
    const Vector y_train = dataset.train_target();
    const Vector y_test = dataset.test_target();
    result.train_count = static_cast<std::size_t>(train_raw.rows());
    result.test_count = static_cast<std::size_t>(test_raw.rows());
    result.test_observations.assign(y_test.data(), y_test.data() + y_test.size());
    if (result.train_count < config.cv.folds) {
        throw InvalidArgument("run_experiment: fewer training rows than CV folds");
    }

    const MinMaxScaler scaler = fit_minmax(train_raw);
    const Matrix train = apply_minmax(scaler, train_raw);
    const Matrix test = apply_minmax(scaler, test_raw);
    result.r_outl = r_outl(test, dataset.continuous_columns);

    std::vector<Gate> gates;
    std::vector<OutlierPartition> partitions;
    for (double q : config.gate_percentiles) {
        gates.push_back(fit_gate(train, q));
        partitions.push_back(classify(gates.back(), test));
        result.gates.push_back({q, gates.back().threshold_distance, gates.back().ridge,
                                partitions.back().outlier_indices});
        spdlog::info("{}: gate {}%: {} of {} test rows are outliers", dataset.name, q,
                     partitions.back().outlier_indices.size(), result.test_count);
    }

    OrConfig or_config = config.or_config;
    or_config.categorical_groups = dataset.categorical_groups;

    const LinearModel lr = lr_fit(train, y_train);
    Vector lr_pred = lr_predict(lr, test);
    if (dataset.clip_negative_predictions) {
        lr_pred = clip_nonnegative(lr_pred);
    }

    const Matrix y_train_m = y_train;
    for (auto act : config.activations) {
        ActivationSummary summary;
        summary.activation = act;
        CvConfig cv = config.cv;
        cv.seed = cv_seed(config.master_seed, act);
        summary.cv = cross_validate_node_count(train, y_train_m, act, cv);
        summary.node_count = summary.cv.selected_node_count;
        summary.trim_policy = default_trim_policy(act, config.members_per_trial);
        result.activations.push_back(summary);
        spdlog::info("{}: {} selected {} hidden nodes", dataset.name, to_string(act), summary.node_count);

        for (std::size_t t = 0; t < config.trials; ++t) {
            const std::uint64_t seed = trial_seed(config.master_seed, act, t);
            const EnsembleModel ensemble =
                ensemble_train(train, y_train_m, summary.node_count, act, config.members_per_trial, seed);
            const Vector nlr_raw = ensemble_predict(ensemble, test).col(0);
            const PredictFn surface = [&ensemble](const Vector& x) {
                return ensemble_predict_one(ensemble, as_span(x));
            };

            for (std::size_t g = 0; g < gates.size(); ++g) {
                const auto& part = partitions[g];
                const auto& outliers = part.outlier_indices;
                Vector nlror_raw = nlr_raw;
                std::vector<OutlierDiagnostic> diags(outliers.size());
                ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
                for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(outliers.size()); ++k) {
                    errors.run([&] {
                        const auto row = static_cast<Eigen::Index>(outliers[static_cast<std::size_t>(k)]);
                        const Vector x_o = test.row(row).transpose();
                        auto& d = diags[static_cast<std::size_t>(k)];
                        d.test_row = static_cast<std::size_t>(row);
                        try {
                            d.detail = nlror_explain(surface, gates[g], x_o, or_config);
                            nlror_raw(row) = d.detail.prediction;
                        } catch (const NoPrediction&) {
                            // every candidate dropped and the raw value excluded: keep NLR
                            d.detail.prediction = nlr_raw(row);
                        }
                    });
                }
                errors.rethrow();

                Vector nlr = nlr_raw;
                Vector nlror = nlror_raw;
                if (dataset.clip_negative_predictions) {
                    nlr = clip_nonnegative(nlr);
                    nlror = clip_nonnegative(nlror);
                }

                TrialReport report;
                report.activation = act;
                report.gate_percentile = config.gate_percentiles[g];
                report.trial = t;
                report.trial_seed = seed;
                report.node_count = summary.node_count;
                report.outlier_count = outliers.size();
                report.non_outlier_count = part.non_outlier_indices.size();
                report.test_count = result.test_count;
                const Vector* preds[] = {&lr_pred, &nlr, &nlror};
                for (std::size_t m = 0; m < kModelCount; ++m) {
                    score_model(report.scores, static_cast<Model>(m), *preds[m], y_test, outliers,
                                part.non_outlier_indices, config.mad_reference, config.min_subset_size);
                }
                if (config.record_predictions) {
                    report.nlr_predictions.assign(nlr.data(), nlr.data() + nlr.size());
                    report.nlror_predictions.assign(nlror.data(), nlror.data() + nlror.size());
                }
                result.trials.push_back(std::move(report));
                if (config.record_diagnostics) {
                    result.diagnostics.push_back(std::move(diags));
                }
            }
        }
    }
    result.aggregates = aggregate_trials(result.trials, config.activations, config.gate_percentiles);
    return result;
}

} // namespace nlror
