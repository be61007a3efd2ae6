#include "nlror/errors.hpp"
#include "nlror/harness/dataset.hpp"
#include "nlror/harness/experiment.hpp"
#include "nlror/harness/format.hpp"
#include "nlror/harness/report.hpp"
#include "nlror/harness/toy.hpp"
#include "nlror/outlier_gate.hpp"
#include "nlror/parallel.hpp"
#include "nlror/preprocess.hpp"
#include "nlror/serialize.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>

namespace {

using namespace nlror;

std::vector<Activation> parse_activation_list(const std::string& text) {
    if (text == "all") {
        return {Activation::Sigmoid, Activation::RadialBasis, Activation::Softplus};
    }
    return {parse_activation(text)};
}

int cmd_toy(std::uint64_t seed, const std::string& activation, const std::filesystem::path& out,
            std::size_t members, std::size_t n_train) {
    std::filesystem::create_directories(out);
    ToyDemoOptions options;
    options.members = members;
    options.n_train = n_train;
    for (auto act : parse_activation_list(activation)) {
        const ToyTable table = toy_demo(seed, act, options);
        const auto path = out / ("toy_" + std::string(to_string(act)) + ".csv");
        write_toy_csv(table, path);
        spdlog::info("{}: L = {}, wrote {}", to_string(act), table.node_count, path.string());
    }
    write_toy_training_csv(toy_generate(seed, n_train), out / "toy_training.csv");
    return 0;
}

int cmd_gate(const std::filesystem::path& manifest_path, double percentile, const std::string& out,
             const std::string& save_gate) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    const Dataset ds = load_dataset(manifest);
    const MinMaxScaler scaler = fit_minmax(ds.train_inputs());
    const Matrix train = apply_minmax(scaler, ds.train_inputs());
    const Matrix test = apply_minmax(scaler, ds.test_inputs());
    const Gate gate = fit_gate(train, percentile);
    const OutlierPartition part = classify(gate, test);
    spdlog::info("{}: threshold {} at {}%, {} of {} test rows are outliers, r_outl {}", ds.name,
                 format_double(gate.threshold_distance), percentile, part.outlier_indices.size(), test.rows(),
                 format_double(r_outl(test, ds.continuous_columns)));

    std::ofstream file;
    if (!out.empty()) {
        file.open(out, std::ios::binary);
        if (!file) {
            throw std::runtime_error("cannot open '" + out + "' for writing");
        }
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os << "test_row,source_line,mahalanobis,threshold,beyond_threshold,neighbor_index,center_distance,"
          "neighbor_center_distance,beyond_neighbor,outlier\n";
    for (std::size_t i = 0; i < part.rows.size(); ++i) {
        const auto& v = part.rows[i];
        os << i << ',' << ds.source_lines[ds.test_rows[i]] << ',' << format_double(v.distance) << ','
           << format_double(gate.threshold_distance) << ',' << v.beyond_threshold << ',' << v.neighbor.index << ','
           << format_double(v.center_distance) << ',' << format_double(v.neighbor_center_distance) << ','
           << v.beyond_neighbor << ',' << v.outlier << '\n';
    }
    if (!save_gate.empty()) {
        write_json_file(save_gate, gate_to_json(gate));
    }
    return 0;
}

int cmd_run(const std::filesystem::path& manifest_path, const std::string& config_path,
            const std::filesystem::path& out, const std::string& format, const std::optional<std::uint64_t>& seed,
            const std::optional<std::size_t>& trials) {
    const auto fmt = parse_report_format(format);
    const DatasetManifest manifest = load_manifest(manifest_path);
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed) {
        config.master_seed = *seed;
    }
    if (trials) {
        config.trials = *trials;
    }
    const Dataset ds = load_dataset(manifest);
    const ExperimentResult result = run_experiment(ds, config);
    for (const auto& path : emit_report(result, manifest_to_json(manifest), out, fmt)) {
        spdlog::info("wrote {}", path.string());
    }
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::filesystem::path& out) {
    std::vector<ExperimentResult> results;
    for (const auto& p : inputs) {
        results.push_back(report_from_json(read_json_file(p)));
    }
    const SummaryReport summary = summarize_reports(std::move(results));
    std::filesystem::create_directories(out);
    write_json_file(out / "summary.json", summary_to_json(summary));
    std::ofstream csv(out / "summary.csv", std::ios::binary);
    if (!csv) {
        throw std::runtime_error("cannot open '" + (out / "summary.csv").string() + "' for writing");
    }
    write_summary_csv(summary, csv);
    spdlog::info("summarized {} report(s) into {}", inputs.size(), out.string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extreme learning machine ensembles with Mahalanobis-gated linear extrapolation"};
    app.require_subcommand(1);
    int threads = 0;
    std::string log_level = "info";
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off");

    auto* toy = app.add_subcommand("toy", "Quadratic toy problem: members, mean, LR and boundary extrapolation on a grid");
    std::uint64_t toy_seed = 0;
    std::string toy_activation = "all";
    std::string toy_out = "toy_out";
    std::size_t toy_members = 100;
    std::size_t toy_n = 100;
    toy->add_option("--seed", toy_seed);
    toy->add_option("--activation", toy_activation, "sigmoid, radial_basis, softplus or all");
    toy->add_option("--out", toy_out, "output directory");
    toy->add_option("--members", toy_members)->check(CLI::PositiveNumber);
    toy->add_option("--n-train", toy_n)->check(CLI::Range(2, 1000000));

    auto* gate = app.add_subcommand("gate", "Fit the outlier gate on a manifest's training split; per-row diagnostics");
    std::string gate_manifest;
    double gate_q = 99.0;
    std::string gate_out;
    std::string gate_save;
    gate->add_option("--manifest", gate_manifest)->required()->check(CLI::ExistingFile);
    gate->add_option("--percentile", gate_q);
    gate->add_option("--out", gate_out, "CSV path (stdout when omitted)");
    gate->add_option("--save-gate", gate_save, "write the fitted gate as JSON");

    auto* run = app.add_subcommand("run", "Full experiment over trials, activations and gate percentiles");
    std::string run_manifest;
    std::string run_config;
    std::string run_out = "run_out";
    std::string run_format = "both";
    std::optional<std::uint64_t> run_seed;
    std::optional<std::size_t> run_trials;
    run->add_option("--manifest", run_manifest)->required()->check(CLI::ExistingFile);
    run->add_option("--config", run_config)->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "output directory");
    run->add_option("--format", run_format, "json, csv or both");
    run->add_option("--seed", run_seed, "override master_seed");
    run->add_option("--trials", run_trials, "override trials");

    auto* report = app.add_subcommand("report", "Re-aggregate stored report.json files");
    std::vector<std::string> report_inputs;
    std::string report_out = "summary_out";
    report->add_option("reports", report_inputs)->required()->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    auto logger = spdlog::stderr_color_mt("nlror");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::from_str(log_level));
    set_thread_count(threads);

    try {
        if (*toy) {
            return cmd_toy(toy_seed, toy_activation, toy_out, toy_members, toy_n);
        }
        if (*gate) {
            return cmd_gate(gate_manifest, gate_q, gate_out, gate_save);
        }
        if (*run) {
            return cmd_run(run_manifest, run_config, run_out, run_format, run_seed, run_trials);
        }
        return cmd_report(report_inputs, report_out);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
