#include "tvbma/io.hpp"

#include "tvbma/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace tvbma {

NLOHMANN_JSON_SERIALIZE_ENUM(Smoother, {{Smoother::TheilSen, "theil_sen"},
                                        {Smoother::Lowess, "lowess"}})
NLOHMANN_JSON_SERIALIZE_ENUM(AnomalyMode, {{AnomalyMode::Absolute, "absolute"},
                                           {AnomalyMode::Relative, "relative"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Variant, {{Variant::Boot, "boot"}, {Variant::Ar1, "ar1"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Method, {{Method::Trend, "trend"}, {Method::TrendVar, "trendvar"}})
NLOHMANN_JSON_SERIALIZE_ENUM(DistanceMetric, {{DistanceMetric::L1, "l1"},
                                              {DistanceMetric::L2, "l2"}})

} // namespace tvbma

namespace tvbma::io {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(const fs::path& path, std::size_t line, const std::string& what) {
    throw Error(Errc::Parse, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::Io, "cannot write " + path.string());
    }
    return out;
}

Period period_from_json(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2) {
        throw Error(Errc::Parse, std::string("manifest: '") + key + "' must be [t0, t1]");
    }
    return {j.at(key).at(0).get<std::int64_t>(), j.at(key).at(1).get<std::int64_t>()};
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json smoother_json(const SmootherSpec& s) {
    return {{"kind", s.kind}, {"span", s.span}, {"iterations", s.iterations}};
}

SmootherSpec smoother_from(const json& j, SmootherSpec s) {
    if (j.contains("kind")) s.kind = j.at("kind").get<Smoother>();
    if (j.contains("span")) s.span = j.at("span").get<double>();
    if (j.contains("iterations")) s.iterations = j.at("iterations").get<int>();
    return s;
}

template <typename E>
E enum_from(const json& j, const char* key) {
    // nlohmann maps unknown strings to the first enumerator; reject them instead
    const auto e = j.at(key).get<E>();
    if (json(e) != j.at(key)) {
        throw Error(Errc::InvalidConfiguration,
                    std::string("config: unknown value for '") + key + "': " + j.at(key).dump());
    }
    return e;
}

} // namespace

TimeSeries read_series_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        parse_error(path, 1, "empty file");
    }
    ++line_no;
    if (trim(line) != "time,value") {
        parse_error(path, line_no, "expected header 'time,value'");
    }
    std::vector<std::int64_t> times;
    std::vector<double> values;
    std::size_t blank_since = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) {
            if (blank_since == 0) {
                blank_since = line_no;
            }
            continue;
        }
        if (blank_since != 0) {
            parse_error(path, blank_since, "missing row");
        }
        const auto comma = text.find(',');
        if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
            parse_error(path, line_no, "expected two fields 'time,value'");
        }
        const auto t_text = trim(text.substr(0, comma));
        const auto v_text = trim(text.substr(comma + 1));
        std::int64_t t = 0;
        const auto [tp, tec] = std::from_chars(t_text.data(), t_text.data() + t_text.size(), t);
        if (tec != std::errc() || tp != t_text.data() + t_text.size()) {
            parse_error(path, line_no, "time '" + t_text + "' is not an integer");
        }
        if (v_text.empty()) {
            parse_error(path, line_no, "missing value");
        }
        char* end = nullptr;
        const double v = std::strtod(v_text.c_str(), &end);
        if (end != v_text.c_str() + v_text.size()) {
            parse_error(path, line_no, "value '" + v_text + "' is not a number");
        }
        if (!std::isfinite(v)) {
            parse_error(path, line_no, "missing or non-finite value '" + v_text + "'");
        }
        times.push_back(t);
        values.push_back(v);
    }
    try {
        return TimeSeries(std::move(times), std::move(values));
    } catch (const Error& e) {
        throw Error(Errc::Parse, path.string() + ": " + e.what());
    }
}

void write_series_csv(const fs::path& path, const TimeSeries& series) {
    auto out = open_out(path);
    out << "time,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.times()[i] << ',' << number(series.values()[i]) << '\n';
    }
}

EnsembleDataset load_dataset(const fs::path& manifest) {
    const json j = read_json(manifest);
    const auto dir = manifest.parent_path();
    EnsembleDataset d;
    try {
        d.name = j.value("name", manifest.stem().string());
        d.units = j.value("units", "");
        d.variable = j.value("variable", d.name);
        d.calibration = period_from_json(j, "calibration");
        d.projection_reference = period_from_json(j, "projection_reference");
        d.projection = period_from_json(j, "projection");
        if (!j.contains("models") || !j.at("models").is_array()) {
            throw Error(Errc::Parse, "manifest: 'models' must be an array");
        }
        for (const auto& m : j.at("models")) {
            ModelRun run;
            run.id = m.at("id").get<std::string>();
            run.calibration = read_series_csv(dir / m.at("calibration_file").get<std::string>());
            run.projection = read_series_csv(dir / m.at("projection_file").get<std::string>());
            d.models.push_back(std::move(run));
        }
        if (j.contains("observations_file")) {
            d.observations = read_series_csv(dir / j.at("observations_file").get<std::string>());
        }
        if (j.contains("observations_projection_file")) {
            d.observations_projection =
                read_series_csv(dir / j.at("observations_projection_file").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, manifest.string() + ": " + e.what());
    }
    d.validate();
    return d;
}

fs::path write_dataset(const EnsembleDataset& data, const fs::path& dir) {
    fs::create_directories(dir);
    json models = json::array();
    for (const auto& m : data.models) {
        const auto cal = m.id + "_calibration.csv";
        const auto proj = m.id + "_projection.csv";
        write_series_csv(dir / cal, m.calibration);
        write_series_csv(dir / proj, m.projection);
        models.push_back({{"id", m.id}, {"calibration_file", cal}, {"projection_file", proj}});
    }
    json j = {{"name", data.name},
              {"units", data.units},
              {"variable", data.variable},
              {"calibration", {data.calibration.first, data.calibration.last}},
              {"projection_reference",
               {data.projection_reference.first, data.projection_reference.last}},
              {"projection", {data.projection.first, data.projection.last}},
              {"models", models}};
    if (data.observations) {
        write_series_csv(dir / "observations_calibration.csv", *data.observations);
        j["observations_file"] = "observations_calibration.csv";
    }
    if (data.observations_projection) {
        write_series_csv(dir / "observations_projection.csv", *data.observations_projection);
        j["observations_projection_file"] = "observations_projection.csv";
    }
    const auto path = dir / "manifest.json";
    write_json(path, j);
    return path;
}

json to_json(const ExperimentConfig& c) {
    json priors = json::array();
    for (double p : c.trend_prior.model_priors) {
        priors.push_back(p);
    }
    return {{"calibration_smoother", smoother_json(c.calibration_smoother)},
            {"projection_smoother", smoother_json(c.projection_smoother)},
            {"mode", c.mode},
            {"variant", c.variant},
            {"method", c.method},
            {"f", c.f},
            {"trend_mc", c.trend_mc},
            {"var_mc", c.var_mc},
            {"proj_draws", c.proj_draws},
            {"seed", c.seed},
            {"trend_prior",
             {{"sigma", interval_json(c.trend_prior.sigma)},
              {"rho", interval_json(c.trend_prior.rho)},
              {"model_priors", priors}}},
            {"metric", c.metric},
            {"observational", c.observational}};
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
    try {
        if (j.contains("calibration_smoother"))
            c.calibration_smoother = smoother_from(j.at("calibration_smoother"), c.calibration_smoother);
        if (j.contains("projection_smoother"))
            c.projection_smoother = smoother_from(j.at("projection_smoother"), c.projection_smoother);
        if (j.contains("smoother")) {
            c.calibration_smoother = smoother_from(j.at("smoother"), c.calibration_smoother);
            c.projection_smoother = smoother_from(j.at("smoother"), c.projection_smoother);
        }
        if (j.contains("mode")) c.mode = enum_from<AnomalyMode>(j, "mode");
        if (j.contains("variant")) c.variant = enum_from<Variant>(j, "variant");
        if (j.contains("method")) c.method = enum_from<Method>(j, "method");
        if (j.contains("metric")) c.metric = enum_from<DistanceMetric>(j, "metric");
        if (j.contains("f")) c.f = j.at("f").get<double>();
        if (j.contains("trend_mc")) c.trend_mc = j.at("trend_mc").get<std::size_t>();
        if (j.contains("var_mc")) c.var_mc = j.at("var_mc").get<std::size_t>();
        if (j.contains("proj_draws")) c.proj_draws = j.at("proj_draws").get<std::size_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("observational")) c.observational = j.at("observational").get<bool>();
        if (j.contains("trend_prior")) {
            const auto& p = j.at("trend_prior");
            if (p.contains("sigma")) c.trend_prior.sigma = interval_from(p.at("sigma"));
            if (p.contains("rho")) c.trend_prior.rho = interval_from(p.at("rho"));
            if (p.contains("model_priors"))
                c.trend_prior.model_priors = p.at("model_priors").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfiguration, std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

json to_json(const CrossValReport& r) {
    json records = json::array();
    for (const auto& rec : r.records) {
        records.push_back({{"truth_id", rec.truth_id},
                           {"true_delta", rec.true_delta},
                           {"ci90", interval_json(rec.ci90)},
                           {"mean", rec.mean},
                           {"covered", rec.covered},
                           {"weights", rec.weights},
                           {"trend_weights", rec.trend_weights},
                           {"var_weights", rec.var_weights}});
    }
    return {{"version", kReportVersion},
            {"kind", "loocv"},
            {"method", r.method},
            {"model_ids", r.model_ids},
            {"aggregate",
             {{"coverage", r.coverage}, {"mciw", r.mciw}, {"mab", r.mab}, {"f", r.f}}},
            {"records", records}};
}

CrossValReport cross_val_report_from_json(const json& j) {
    if (j.value("version", "") != kReportVersion || j.value("kind", "") != "loocv") {
        throw Error(Errc::Parse, "not a cross-validation report");
    }
    CrossValReport r;
    r.method = j.at("method").get<Method>();
    r.model_ids = j.at("model_ids").get<std::vector<std::string>>();
    const auto& a = j.at("aggregate");
    r.coverage = a.at("coverage").get<double>();
    r.mciw = a.at("mciw").get<double>();
    r.mab = a.at("mab").get<double>();
    r.f = a.at("f").get<double>();
    for (const auto& rec : j.at("records")) {
        TruthRecord t;
        t.truth_id = rec.at("truth_id").get<std::string>();
        t.true_delta = rec.at("true_delta").get<double>();
        t.ci90 = interval_from(rec.at("ci90"));
        t.mean = rec.at("mean").get<double>();
        t.covered = rec.at("covered").get<bool>();
        t.weights = rec.at("weights").get<std::vector<double>>();
        t.trend_weights = rec.at("trend_weights").get<std::vector<double>>();
        t.var_weights = rec.at("var_weights").get<std::vector<double>>();
        r.records.push_back(std::move(t));
    }
    return r;
}

json to_json(const ProjectionResult& r) {
    const auto& s = r.summary;
    return {{"version", kReportVersion},
            {"kind", "projection"},
            {"summary",
             {{"mean", s.mean},
              {"median", s.median},
              {"mode", s.mode},
              {"ci90", interval_json(s.ci90)},
              {"bandwidth", s.bandwidth}}},
            {"n_draws", r.delta_samples.size()},
            {"per_model_draw_counts", r.per_model_draw_counts},
            {"delta_samples", r.delta_samples}};
}

ProjectionResult projection_result_from_json(const json& j) {
    if (j.value("version", "") != kReportVersion || j.value("kind", "") != "projection") {
        throw Error(Errc::Parse, "not a projection report");
    }
    ProjectionResult r;
    const auto& s = j.at("summary");
    r.summary.mean = s.at("mean").get<double>();
    r.summary.median = s.at("median").get<double>();
    r.summary.mode = s.at("mode").get<double>();
    r.summary.ci90 = interval_from(s.at("ci90"));
    r.summary.bandwidth = s.at("bandwidth").get<double>();
    r.per_model_draw_counts = j.at("per_model_draw_counts").get<std::vector<std::size_t>>();
    r.delta_samples = j.at("delta_samples").get<std::vector<double>>();
    return r;
}

json to_json(const CalibrationResult& r) {
    json trace = json::array();
    for (const auto& p : r.trace) {
        trace.push_back({{"f", p.f}, {"coverage", p.coverage}, {"mciw", p.mciw}, {"mab", p.mab}});
    }
    return {{"version", kReportVersion},
            {"kind", "calibration"},
            {"success", r.success},
            {"f_star", r.f_star},
            {"target", r.target},
            {"granularity", r.granularity},
            {"trace", trace}};
}

json to_json(const IndependenceReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"r_sigma", row.r_sigma ? json(*row.r_sigma) : json(nullptr)},
                        {"r_rho", row.r_rho ? json(*row.r_rho) : json(nullptr)}});
    }
    return {{"threshold", r.threshold}, {"flagged", r.flagged}, {"rows", rows}};
}

json to_json(const SpectrumEnvelope& e) {
    return {{"fitted", {{"sigma", e.fitted.sigma}, {"rho", e.fitted.rho}}},
            {"fraction_inside", e.fraction_inside},
            {"frequencies", e.frequencies},
            {"observed", e.observed},
            {"lower", e.lower},
            {"upper", e.upper}};
}

std::vector<fs::path> emit_report(const CrossValReport& report, Format format,
                                  const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    if (format == Format::Json) {
        written.push_back(out_dir / "loocv_report.json");
        write_json(written.back(), to_json(report));
    } else {
        written.push_back(out_dir / "loocv_summary.csv");
        auto out = open_out(written.back());
        out << "method,f,coverage,mciw,mab\n"
            << json(report.method).get<std::string>() << ',' << number(report.f) << ','
            << number(report.coverage) << ',' << number(report.mciw) << ','
            << number(report.mab) << '\n';
    }

    written.push_back(out_dir / "loocv_intervals.csv");
    {
        auto out = open_out(written.back());
        out << "truth_id,true_delta,ci_lo,ci_hi,mean,covered\n";
        for (const auto& r : report.records) {
            out << r.truth_id << ',' << number(r.true_delta) << ',' << number(r.ci90.lo) << ','
                << number(r.ci90.hi) << ',' << number(r.mean) << ',' << (r.covered ? 1 : 0)
                << '\n';
        }
    }
    written.push_back(out_dir / "weights_heatmap.csv");
    {
        auto out = open_out(written.back());
        out << "truth_id";
        for (const auto& id : report.model_ids) {
            out << ',' << id;
        }
        out << '\n';
        for (const auto& r : report.records) {
            out << r.truth_id;
            for (double w : r.weights) {
                out << ',' << number(w);
            }
            out << '\n';
        }
    }
    return written;
}

std::vector<fs::path> emit_report(const ProjectionResult& result, Format format,
                                  const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    const auto& s = result.summary;
    if (format == Format::Json) {
        written.push_back(out_dir / "projection_report.json");
        write_json(written.back(), to_json(result));
    } else {
        written.push_back(out_dir / "projection_summary.csv");
        auto out = open_out(written.back());
        out << "mean,median,mode,ci_lo,ci_hi,bandwidth,n_draws\n"
            << number(s.mean) << ',' << number(s.median) << ',' << number(s.mode) << ','
            << number(s.ci90.lo) << ',' << number(s.ci90.hi) << ',' << number(s.bandwidth) << ','
            << result.delta_samples.size() << '\n';
        written.push_back(out_dir / "projection_counts.csv");
        auto counts = open_out(written.back());
        counts << "model,draws\n";
        for (std::size_t i = 0; i < result.per_model_draw_counts.size(); ++i) {
            counts << i << ',' << result.per_model_draw_counts[i] << '\n';
        }
    }
    if (!result.delta_samples.empty()) {
        written.push_back(out_dir / "projection_pdf.csv");
        auto out = open_out(written.back());
        out << "x,density\n";
        const auto grid = kde_grid(result.delta_samples);
        for (std::size_t i = 0; i < grid.x.size(); ++i) {
            out << number(grid.x[i]) << ',' << number(grid.density[i]) << '\n';
        }
    }
    written.push_back(out_dir / "projection_interval.csv");
    {
        auto out = open_out(written.back());
        out << "quantity,value\n"
            << "p5," << number(s.ci90.lo) << "\np95," << number(s.ci90.hi) << "\nmean,"
            << number(s.mean) << "\nmedian," << number(s.median) << "\nmode," << number(s.mode)
            << '\n';
    }
    return written;
}

json to_json(const RunManifest& m) {
    return {{"command", m.command},
            {"config_hash", m.config_hash},
            {"seeds", m.seeds},
            {"software_version", m.software_version},
            {"input_digests", m.input_digests},
            {"started_at", m.started_at},
            {"finished_at", m.finished_at}};
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::Io, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string file_sha256(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(1) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, path.string() + ": " + e.what());
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace tvbma::io
