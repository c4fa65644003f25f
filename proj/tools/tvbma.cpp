// Command-line front end: decompose, weigh, project, loocv, calibrate-f,
// diagnose, synth.

#include "tvbma/combine.hpp"
#include "tvbma/crossval.hpp"
#include "tvbma/diagnostics.hpp"
#include "tvbma/error.hpp"
#include "tvbma/io.hpp"
#include "tvbma/presets.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace tvbma;
namespace fs = std::filesystem;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCalibration = 4;

struct Options {
    std::string config_path;
    std::string dataset_path;
    std::string preset_name;
    std::optional<std::uint64_t> seed;
    std::string method;
    std::string variant;
    std::optional<double> f;
    std::string out_dir = "tvbma_out";
    std::string format = "json";

    // calibrate-f
    double f_min = 0.25;
    double f_max = 5.0;
    double f_step = 0.25;
    double target = 0.9;
    // diagnose
    std::size_t realizations = 1000;
    // synth
    std::optional<std::size_t> synth_k;
    std::optional<double> synth_coupling;
};

struct Context {
    ExperimentConfig config;
    EnsembleDataset data;
    io::RunManifest manifest;
};

io::Format format_of(const Options& o) {
    return o.format == "csv" ? io::Format::Csv : io::Format::Json;
}

ExperimentConfig build_config(const Options& o) {
    ExperimentConfig c;
    if (!o.preset_name.empty()) {
        const auto p = preset(o.preset_name);
        c = p.config;
        if (o.method == "trend") {
            c.f = p.trend_f;
        }
    }
    if (!o.config_path.empty()) {
        c = io::config_from_json(io::read_json(o.config_path), c);
    }
    if (o.seed) c.seed = *o.seed;
    if (o.method == "trend") c.method = Method::Trend;
    if (o.method == "trendvar") c.method = Method::TrendVar;
    if (o.variant == "boot") c.variant = Variant::Boot;
    if (o.variant == "ar1") c.variant = Variant::Ar1;
    if (o.f) c.f = *o.f;
    c.validate();
    return c;
}

Context load(const Options& o, const std::string& command) {
    Context ctx;
    ctx.config = build_config(o);
    ctx.manifest.command = command;
    ctx.manifest.started_at = io::utc_timestamp();
    if (!o.dataset_path.empty()) {
        ctx.data = io::load_dataset(o.dataset_path);
        const fs::path manifest(o.dataset_path);
        ctx.manifest.input_digests[manifest.filename().string()] = io::file_sha256(manifest);
        const auto j = io::read_json(manifest);
        for (const auto& m : j.at("models")) {
            for (const char* key : {"calibration_file", "projection_file"}) {
                const auto name = m.at(key).get<std::string>();
                ctx.manifest.input_digests[name] = io::file_sha256(manifest.parent_path() / name);
            }
        }
        for (const char* key : {"observations_file", "observations_projection_file"}) {
            if (j.contains(key)) {
                const auto name = j.at(key).get<std::string>();
                ctx.manifest.input_digests[name] = io::file_sha256(manifest.parent_path() / name);
            }
        }
    } else if (!o.preset_name.empty()) {
        const auto p = preset(o.preset_name);
        ctx.data = preset_dataset(p);
        ctx.manifest.seeds["synthetic"] = p.synthetic.seed;
        ctx.manifest.input_digests["preset:" + p.name] =
            io::sha256_hex(json(p.synthetic.seed).dump() + p.name);
    } else {
        throw Error(Errc::InvalidInput, "need --dataset or --preset");
    }
    ctx.manifest.config_hash = io::sha256_hex(io::to_json(ctx.config).dump());
    ctx.manifest.seeds["run"] = ctx.config.seed;
    std::cout << "seed: " << ctx.config.seed << '\n';
    return ctx;
}

void finish(Context& ctx, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    ctx.manifest.finished_at = io::utc_timestamp();
    io::write_json(out_dir / "run_manifest.json", io::to_json(ctx.manifest));
    io::write_json(out_dir / "config.json", io::to_json(ctx.config));
}

json weights_json(const ObservedWeights& w, const std::vector<std::string>& ids) {
    auto vec = [](const WeightVector& v) { return std::vector<double>(v.values().begin(), v.values().end()); };
    return {{"version", io::kReportVersion},
            {"kind", "weights"},
            {"model_ids", ids},
            {"trend", vec(w.trend)},
            {"variability", vec(w.variability)},
            {"combined", vec(w.combined)}};
}

const TimeSeries& require_observations(const EnsembleDataset& d) {
    if (!d.observations) {
        throw Error(Errc::InvalidInput, "dataset has no observations_file");
    }
    return *d.observations;
}

int cmd_decompose(const Options& o) {
    auto ctx = load(o, "decompose");
    json models = json::array();
    std::ofstream csv;
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    for (const auto& m : ctx.data.models) {
        const auto cal = decompose(m.calibration, ctx.config.calibration_smoother, ctx.config.mode);
        const auto proj =
            decompose(m.projection, ctx.config.projection_smoother, AnomalyMode::Absolute);
        json entry = {{"id", m.id},
                      {"calibration",
                       {{"trend", cal.trend},
                        {"anomalies", cal.anomalies},
                        {"series_mean", cal.series_mean}}},
                      {"projection", {{"trend", proj.trend}, {"anomalies", proj.anomalies}}}};
        if (ctx.config.calibration_smoother.kind == Smoother::TheilSen) {
            const auto fit = theil_sen(m.calibration);
            entry["calibration"]["slope_per_time_unit"] =
                fit.slope / static_cast<double>(m.calibration.step());
        }
        models.push_back(std::move(entry));
    }
    const json report = {{"version", io::kReportVersion},
                         {"kind", "decomposition"},
                         {"mode", ctx.config.mode == AnomalyMode::Relative ? "relative" : "absolute"},
                         {"models", models}};
    if (format_of(o) == io::Format::Json) {
        io::write_json(out / "decomposition.json", report);
    } else {
        std::ofstream f(out / "decomposition.csv", std::ios::binary);
        f << "model,period,index,trend,anomaly\n";
        for (const auto& m : report.at("models")) {
            for (const char* period : {"calibration", "projection"}) {
                const auto& t = m.at(period).at("trend");
                const auto& a = m.at(period).at("anomalies");
                for (std::size_t i = 0; i < t.size(); ++i) {
                    f << m.at("id").get<std::string>() << ',' << period << ',' << i << ','
                      << t[i].dump() << ',' << a[i].dump() << '\n';
                }
            }
        }
    }
    finish(ctx, out);
    return kExitOk;
}

int cmd_weigh(const Options& o) {
    auto ctx = load(o, "weigh");
    const auto prepared = prepare_ensemble(ctx.data, ctx.config);
    const auto w = weigh_observations(prepared, require_observations(ctx.data), ctx.config);
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    const auto j = weights_json(w, prepared.model_ids);
    if (format_of(o) == io::Format::Json) {
        io::write_json(out / "weights.json", j);
    } else {
        std::ofstream f(out / "weights.csv", std::ios::binary);
        f << "model,trend,variability,combined\n";
        for (std::size_t i = 0; i < prepared.model_ids.size(); ++i) {
            f << prepared.model_ids[i] << ',' << j["trend"][i].dump() << ','
              << j["variability"][i].dump() << ',' << j["combined"][i].dump() << '\n';
        }
    }
    finish(ctx, out);
    return kExitOk;
}

int cmd_project(const Options& o) {
    auto ctx = load(o, "project");
    const auto prepared = prepare_ensemble(ctx.data, ctx.config);
    const auto w = weigh_observations(prepared, require_observations(ctx.data), ctx.config);
    const auto result = project_ensemble(prepared, w.combined, ctx.config);
    const fs::path out(o.out_dir);
    io::emit_report(result, format_of(o), out);
    io::write_json(out / "weights.json", weights_json(w, prepared.model_ids));
    finish(ctx, out);
    const auto& s = result.summary;
    std::cout << "mean " << s.mean << " median " << s.median << " mode " << s.mode << " ci90 ["
              << s.ci90.lo << ", " << s.ci90.hi << "]\n";
    return kExitOk;
}

int cmd_loocv(const Options& o) {
    auto ctx = load(o, "loocv");
    const auto report = run_loocv(ctx.data, ctx.config);
    const fs::path out(o.out_dir);
    io::emit_report(report, format_of(o), out);
    finish(ctx, out);
    std::cout << "coverage " << report.coverage << " mciw " << report.mciw << " mab "
              << report.mab << " f " << report.f << '\n';
    return kExitOk;
}

int cmd_calibrate(const Options& o) {
    auto ctx = load(o, "calibrate-f");
    if (!(o.f_step > 0.0) || !(o.f_max > o.f_min)) {
        throw Error(Errc::InvalidConfiguration, "need f-step > 0 and f-max > f-min");
    }
    std::vector<double> grid;
    const auto steps = static_cast<std::size_t>(std::floor((o.f_max - o.f_min) / o.f_step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
        grid.push_back(o.f_min + o.f_step * static_cast<double>(i));
    }
    const auto result = calibrate_f(ctx.data, ctx.config, o.target, grid);
    const fs::path out(o.out_dir);
    io::emit_report(result.report, format_of(o), out);
    io::write_json(out / "calibration.json", io::to_json(result));
    ctx.config.f = result.f_star;
    finish(ctx, out);
    std::cout << "f* " << result.f_star << " coverage " << result.report.coverage << " mciw "
              << result.report.mciw << (result.success ? "" : " (calibration failed)") << '\n';
    return result.success ? kExitOk : kExitCalibration;
}

int cmd_diagnose(const Options& o) {
    auto ctx = load(o, "diagnose");
    const auto prepared = prepare_ensemble(ctx.data, ctx.config);
    json spectra = json::array();
    for (std::size_t i = 0; i < prepared.model_ids.size(); ++i) {
        const auto env = spectrum_envelope_check(prepared.calibration[i].anomalies, o.realizations,
                                                 derive_seed(ctx.config.seed, i));
        auto j = io::to_json(env);
        j["id"] = prepared.model_ids[i];
        spectra.push_back(std::move(j));
        std::cout << prepared.model_ids[i] << " spectrum fraction inside "
                  << env.fraction_inside << '\n';
    }
    json report = {{"version", io::kReportVersion}, {"kind", "diagnostics"},
                   {"model_ids", prepared.model_ids}, {"spectra", spectra}};
    if (prepared.model_ids.size() >= 4) {
        const auto rows = pseudo_truth_trend_weights(prepared, ctx.config);
        const auto ind = independence_diagnostic(rows, prepared.summaries.stats);
        report["independence"] = io::to_json(ind);
        std::cout << "independence flag " << (ind.flagged ? "raised" : "clear") << '\n';
    }
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    io::write_json(out / "diagnostics.json", report);
    finish(ctx, out);
    return kExitOk;
}

int cmd_synth(const Options& o) {
    auto p = preset(o.preset_name.empty() ? "winter_sst_like" : o.preset_name);
    if (o.seed) p.synthetic.seed = *o.seed;
    if (o.synth_k) p.synthetic.k = *o.synth_k;
    if (o.synth_coupling) p.synthetic.coupling = *o.synth_coupling;
    std::cout << "seed: " << p.synthetic.seed << '\n';
    const auto path = io::write_dataset(preset_dataset(p), o.out_dir);
    io::RunManifest m;
    m.command = "synth";
    m.seeds["synthetic"] = p.synthetic.seed;
    m.config_hash = io::sha256_hex(p.name);
    m.started_at = m.finished_at = io::utc_timestamp();
    io::write_json(fs::path(o.out_dir) / "run_manifest.json", io::to_json(m));
    std::cout << "wrote " << path.string() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trend and variability weighted ensemble projections"};
    app.require_subcommand(1);
    Options o;

    app.add_option("--config", o.config_path, "Experiment config JSON")->check(CLI::ExistingFile);
    app.add_option("--dataset", o.dataset_path, "Dataset manifest JSON")->check(CLI::ExistingFile);
    app.add_option("--preset", o.preset_name, "Built-in experiment preset")
        ->check(CLI::IsMember(preset_names()));
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--method", o.method, "trend | trendvar")
        ->check(CLI::IsMember({"trend", "trendvar"}));
    app.add_option("--variant", o.variant, "boot | ar1")->check(CLI::IsMember({"boot", "ar1"}));
    app.add_option("--f", o.f, "Error expansion factor")->check(CLI::NonNegativeNumber);
    app.add_option("--out-dir", o.out_dir, "Output directory");
    app.add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    auto* decompose_cmd = app.add_subcommand("decompose", "Trend/anomaly split of every series");
    auto* weigh_cmd = app.add_subcommand("weigh", "Trend, variability and combined weights");
    auto* project_cmd = app.add_subcommand("project", "Weighted projection of change");
    auto* loocv_cmd = app.add_subcommand("loocv", "Leave-one-out cross-validation");
    auto* calibrate_cmd = app.add_subcommand("calibrate-f", "Calibrate f to 90% coverage");
    calibrate_cmd->add_option("--f-min", o.f_min, "Smallest f on the grid");
    calibrate_cmd->add_option("--f-max", o.f_max, "Largest f on the grid");
    calibrate_cmd->add_option("--f-step", o.f_step, "Grid step");
    calibrate_cmd->add_option("--target", o.target, "Target coverage");
    auto* diagnose_cmd = app.add_subcommand("diagnose", "Independence and AR(1) spectrum checks");
    diagnose_cmd->add_option("--realizations", o.realizations, "AR(1) realizations per envelope");
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset");
    synth_cmd->add_option("--k", o.synth_k, "Ensemble size");
    synth_cmd->add_option("--coupling", o.synth_coupling, "Variability/change coupling");
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*decompose_cmd) return cmd_decompose(o);
        if (*weigh_cmd) return cmd_weigh(o);
        if (*project_cmd) return cmd_project(o);
        if (*loocv_cmd) return cmd_loocv(o);
        if (*calibrate_cmd) return cmd_calibrate(o);
        if (*diagnose_cmd) return cmd_diagnose(o);
        if (*synth_cmd) return cmd_synth(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numerical() ? kExitNumerical : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
