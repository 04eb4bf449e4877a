#include "cli.hpp"

#include "arsel/errors.hpp"
#include "arsel/estimation.hpp"
#include "arsel/prediction.hpp"
#include "arsel/selection.hpp"
#include "arsel/simulation.hpp"
#include "arsel/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace arsel::cli {

namespace {

using nlohmann::json;

enum class Format { Text, Csv, Jsonl };

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string cell_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_null()) return "";
    return v.dump();
}

// Infinite losses are not representable as JSON numbers.
json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

void render(const std::vector<Table>& tables, Format format, std::ostream& os) {
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const Table& table = tables[t];
        if (format == Format::Jsonl) {
            for (const auto& row : table.rows) {
                json rec = json::object();
                rec["table"] = table.name;
                for (std::size_t c = 0; c < table.columns.size(); ++c) rec[table.columns[c]] = row[c];
                os << rec.dump() << '\n';
            }
            continue;
        }
        if (format == Format::Csv) {
            if (t > 0) os << '\n';
            if (tables.size() > 1) os << "# " << table.name << '\n';
            for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
            os << '\n';
            for (const auto& row : table.rows) {
                for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
                os << '\n';
            }
            continue;
        }
        std::vector<std::size_t> width(table.columns.size());
        for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], cell_text(row[c]).size());
        }
        if (t > 0) os << '\n';
        os << table.name << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << table.columns[c];
        }
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cell_text(row[c]);
            }
            os << '\n';
        }
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

struct Common {
    std::string format = "text";
    std::string out_path;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "jsonl"}))
        ->capture_default_str();
    cmd->add_option("--out", common.out_path, "Write results to this file instead of stdout");
}

Format to_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "jsonl") return Format::Jsonl;
    return Format::Text;
}

std::optional<DgpSpec> lookup_dgp(std::string_view text) {
    std::string upper(trim(text));
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "RW") return random_walk_dgp(25.0);
    if (const auto id = parse_dgp(upper)) return dgp_spec(*id);
    return std::nullopt;
}

DgpSpec require_dgp(std::string_view text) {
    auto d = lookup_dgp(text);
    if (!d) throw InvalidArgument("unknown DGP '" + std::string(text) + "' (expected I..X or RW)");
    return *d;
}

PenaltyWeight require_penalty(std::string_view text) {
    const auto w = parse_penalty(trim(text));
    if (!w) throw InvalidArgument("unknown C_n preset '" + std::string(text) + "' (expected A, B or C)");
    return *w;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!trim(part).empty()) out.emplace_back(trim(part));
        }
    }
    return out;
}

ArModel build_model(std::vector<double> levels, double sigma2, const std::string& kind) {
    if (kind == "unit-root") return ArModel::unit_root(std::move(levels), sigma2);
    if (kind == "stationary") return ArModel::stationary(std::move(levels), sigma2);
    if (kind != "auto") throw InvalidArgument("model kind must be auto, unit-root or stationary");
    return ArModel::classify(std::move(levels), sigma2);
}

// ---- theory ----------------------------------------------------------------

struct TheoryArgs {
    std::string model_path;
    std::string levels;
    std::string dgp;
    std::string kind = "auto";
    std::optional<double> sigma2;
    std::optional<std::size_t> h;
    std::optional<std::size_t> max_order;
};

std::vector<Table> run_theory(const TheoryArgs& a) {
    const int sources = static_cast<int>(!a.model_path.empty()) + static_cast<int>(!a.levels.empty()) +
                        static_cast<int>(!a.dgp.empty());
    if (sources != 1) throw InvalidArgument("give exactly one of --model, --levels, --dgp");

    std::vector<double> levels;
    double sigma2 = 1.0;
    std::string kind = a.kind;
    std::size_t h = 1;
    std::size_t max_order = 10;
    if (!a.model_path.empty()) {
        std::ifstream in(a.model_path);
        if (!in) throw InvalidArgument("cannot open model file '" + a.model_path + "'");
        ModelFile file = read_model(in);
        levels = std::move(file.levels);
        sigma2 = file.sigma2;
        kind = file.kind;
    } else if (!a.levels.empty()) {
        levels = parse_number_list(a.levels);
    } else {
        const DgpSpec d = require_dgp(a.dgp);
        levels = d.levels;
        sigma2 = d.noise_variance;
        kind = d.unit_root ? "unit-root" : "stationary";
        h = d.horizon;
        max_order = d.max_order;
    }
    if (a.sigma2) sigma2 = *a.sigma2;
    if (a.h) h = *a.h;
    if (a.max_order) max_order = *a.max_order;
    if (h == 0 || max_order == 0) throw InvalidArgument("--h and --K must be >= 1");

    const ArModel model = build_model(levels, sigma2, kind);
    const DirectCoefficients direct = direct_coefficients(model, h);
    const bool unit = model.has_unit_root();

    std::vector<Table> tables;
    Table summary{"model", {"loss_path", "p_1", "p_h", "horizon", "sigma2", "sigma_h2"}, {}};
    summary.rows.push_back({unit ? "unit-root" : "stationary", model.order(), direct.minimal_order, h,
                            sigma2, sigma_h_squared(model, h)});
    tables.push_back(std::move(summary));

    Table coeffs{"direct_coefficients", {"lag", "a_h"}, {}};
    for (std::size_t j = 0; j < direct.coeffs.size(); ++j) coeffs.rows.push_back({j + 1, direct.coeffs[j]});
    tables.push_back(std::move(coeffs));

    Table weights{"ma_weights", {"j", "b_j"}, {}};
    const std::vector<double> b = forecast_weights(model, h - 1);
    for (std::size_t j = 0; j < h; ++j) weights.rows.push_back({j, b[j]});
    tables.push_back(std::move(weights));

    Table losses{"losses", {"k", "f_plug_in", "f_direct", "loss_plug_in", "loss_direct"}, {}};
    for (std::size_t k = 1; k <= max_order; ++k) {
        const TheoreticalLoss lp = loss(model, h, k, Method::PlugIn);
        const TheoreticalLoss ld = loss(model, h, k, Method::Direct);
        double fp = lp.value;
        double fd = ld.value;
        if (unit) {
            fp = lp.finite() ? f1h(model, h, k) : lp.value;
            fd = ld.finite() ? f2h(model, h, k) : ld.value;
        }
        losses.rows.push_back({k, number(fp), number(fd), number(lp.value), number(ld.value)});
    }
    tables.push_back(std::move(losses));

    Table best{"best", {"k", "method", "combination", "loss"}, {}};
    for (const PredictorSpec& s : best_combinations(model, h, max_order)) {
        best.rows.push_back({s.order, std::string(to_string(s.method)), to_string(s),
                             number(loss(model, h, s.order, s.method).value)});
    }
    tables.push_back(std::move(best));
    return tables;
}

// ---- select ----------------------------------------------------------------

struct PenaltyArgs {
    std::string cn;
    std::optional<double> multiplier;

    [[nodiscard]] PenaltyWeight weight() const {
        if (multiplier) {
            if (!(*multiplier > 0.0)) throw InvalidArgument("--cn-multiplier must be positive");
            return PenaltyWeight{*multiplier};
        }
        return cn.empty() ? PenaltyWeight::procedure_b() : require_penalty(cn);
    }
};

struct SelectArgs {
    std::string input;
    std::size_t h = 1;
    std::size_t max_order = 10;
    std::string procedure = "II";
    PenaltyArgs penalty;
};

void append_outcome(const std::string& procedure, const SelectionOutcome& o, Table& summary, Table& candidates) {
    const std::string label = o.penalty ? o.penalty->label() : "";
    summary.rows.push_back({procedure, label, o.choice.order, std::string(to_string(o.choice.method)),
                            to_string(o.choice), o.choice.horizon, o.max_order, o.step1_order, o.direct_order,
                            o.plugin_order, o.direct_value, o.plugin_value,
                            o.start_index_one_step ? json(o.start_index_one_step) : json(nullptr),
                            o.start_index ? json(o.start_index) : json(nullptr)});
    for (const CandidateScore& s : o.scores) {
        const bool step1 = s.spec.horizon == 1 && o.choice.horizon != 1;
        candidates.rows.push_back({procedure, step1 ? 1 : 2, s.spec.order, std::string(to_string(s.spec.method)),
                                   s.spec.horizon, s.value});
    }
}

std::vector<Table> run_select(const SelectArgs& a) {
    const TimeSeries series = read_series_file(a.input);
    Table summary{"selection",
                  {"procedure", "penalty", "k", "method", "combination", "horizon", "K", "step1_order",
                   "direct_order", "plug_in_order", "direct_value", "plug_in_value", "m_1", "m_h"},
                  {}};
    Table candidates{"candidates", {"procedure", "step", "k", "method", "horizon", "value"}, {}};
    if (a.procedure == "I" || a.procedure == "both") {
        append_outcome("I", procedure_I(series, a.h, a.max_order), summary, candidates);
    }
    if (a.procedure == "II" || a.procedure == "both") {
        append_outcome("II", procedure_II(series, a.h, a.max_order, a.penalty.weight()), summary, candidates);
    }
    return {summary, candidates};
}

// ---- forecast --------------------------------------------------------------

struct ForecastArgs {
    std::string input;
    std::size_t k = 1;
    std::size_t h = 1;
    std::string method = "both";
};

std::vector<Table> run_forecast(const ForecastArgs& a) {
    const TimeSeries series = read_series_file(a.input);
    const std::size_t n = series.size();
    std::vector<FittedCoefficients> fits;
    if (a.method == "plug-in" || a.method == "both") {
        fits.push_back(plug_in_multi(fit_one_step(series, a.k, n), a.h));
    }
    if (a.method == "direct" || a.method == "both") fits.push_back(fit_direct(series, a.k, a.h, n));

    Table forecasts{"forecast", {"method", "k", "horizon", "origin", "target", "value"}, {}};
    Table coeffs{"coefficients", {"method", "lag", "coefficient"}, {}};
    for (const FittedCoefficients& f : fits) {
        const Forecast fc = predict(series, f, n);
        const std::string m(to_string(f.method));
        forecasts.rows.push_back({m, f.order, f.horizon, fc.origin, fc.origin + fc.horizon, fc.value});
        for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) coeffs.rows.push_back({m, i + 1, f.coeffs(i)});
    }
    return {forecasts, coeffs};
}

// ---- simulate / generate ---------------------------------------------------

struct SimulateArgs {
    std::vector<std::string> dgps;
    std::vector<std::size_t> sizes{1000};
    std::vector<std::string> procedures;
    std::optional<double> multiplier;
    std::size_t reps = 200;
    std::uint64_t seed = 20050101;
    unsigned threads = 1;
    std::optional<std::size_t> h;
    std::optional<std::size_t> max_order;
    std::optional<double> noise_variance;
    std::size_t burn_in = 0;
    bool mspe = false;
    std::size_t k = 1;
    std::string method = "plug-in";
    std::string estimator = "conditional";
};

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    return std::max(1U, std::thread::hardware_concurrency());
}

DgpSpec apply_overrides(DgpSpec d, const SimulateArgs& a) {
    if (a.h) d.horizon = *a.h;
    if (a.max_order) d.max_order = *a.max_order;
    if (a.noise_variance) d.noise_variance = *a.noise_variance;
    d.burn_in = a.burn_in;
    return d;
}

Table frequency_rows(const FrequencyTable& table) {
    Table t{"frequencies",
            {"dgp", "n", "procedure", "horizon", "k", "method", "count", "replications", "frequency",
             "minimal_loss"},
            {}};
    for (const FrequencyCell& cell : table.cells) {
        for (const auto& [spec, count] : cell.counts) {
            const bool best = std::find(cell.best.begin(), cell.best.end(), spec) != cell.best.end();
            t.rows.push_back({cell.dgp, cell.n, cell.procedure.label(), cell.horizon, spec.order,
                              std::string(to_string(spec.method)), count, cell.replications,
                              static_cast<double>(count) / static_cast<double>(cell.replications), best});
        }
        if (cell.failures > 0) {
            t.rows.push_back({cell.dgp, cell.n, cell.procedure.label(), cell.horizon, nullptr, "failed",
                              cell.failures, cell.replications,
                              static_cast<double>(cell.failures) / static_cast<double>(cell.replications),
                              false});
        }
    }
    return t;
}

int run_simulate(const SimulateArgs& a, Format format, std::ostream& os) {
    std::vector<std::string> names = split_list(a.dgps);
    if (a.mspe) {
        if (names.size() != 1) throw InvalidArgument("--mspe needs exactly one --dgp");
        if (a.sizes.size() != 1) throw InvalidArgument("--mspe needs exactly one --n");
        const DgpSpec d = apply_overrides(require_dgp(names.front()), a);
        const auto method = parse_method(a.method);
        if (!method) throw InvalidArgument("unknown method '" + a.method + "'");
        if (a.estimator != "conditional" && a.estimator != "squared") {
            throw InvalidArgument("--estimator must be conditional or squared");
        }
        const auto estimator =
            a.estimator == "squared" ? MspeEstimator::SquaredError : MspeEstimator::ConditionalExpectation;
        const std::size_t n = a.sizes.front();
        const PredictorSpec spec{a.k, *method, d.horizon};
        const MspeEstimate m = estimate_mspe(d, spec, n, a.reps, a.seed, estimator, resolve_threads(a.threads));
        Table t{"mspe",
                {"dgp", "n", "k", "method", "horizon", "replications", "estimator", "mspe", "std_error",
                 "sigma_h2", "scaled_excess", "scaled_excess_se", "noise_variance"},
                {}};
        t.rows.push_back({d.name, n, a.k, std::string(to_string(*method)), d.horizon, a.reps, a.estimator, m.mean,
                          m.std_error, m.sigma_h2, m.scaled_excess(n),
                          static_cast<double>(n) * m.std_error, d.noise_variance});
        render({t}, format, os);
        return kSuccess;
    }

    ExperimentConfig config;
    if (names.empty()) names = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};
    for (const auto& name : names) config.dgps.push_back(apply_overrides(require_dgp(name), a));
    config.sample_sizes = a.sizes;
    if (a.multiplier) {
        if (!(*a.multiplier > 0.0)) throw InvalidArgument("--cn-multiplier must be positive");
        config.procedures = {PenaltyWeight{*a.multiplier}};
    } else if (!a.procedures.empty()) {
        config.procedures.clear();
        for (const auto& p : split_list(a.procedures)) config.procedures.push_back(require_penalty(p));
    }
    config.replications = a.reps;
    config.master_seed = a.seed;
    config.threads = resolve_threads(a.threads);
    const FrequencyTable table = run_frequency_experiment(config);
    switch (format) {
        case Format::Text: write_frequency_text(table, os); break;
        case Format::Csv: write_frequency_csv(table, os); break;
        case Format::Jsonl: render({frequency_rows(table)}, format, os); break;
    }
    return kSuccess;
}

struct GenerateArgs {
    std::string dgp;
    std::size_t n = 1000;
    std::uint64_t seed = 20050101;
    std::optional<double> noise_variance;
    std::size_t burn_in = 0;
    std::string law = "gaussian";
};

std::vector<Table> run_generate(const GenerateArgs& a) {
    DgpSpec d = require_dgp(a.dgp);
    if (a.noise_variance) d.noise_variance = *a.noise_variance;
    d.burn_in = a.burn_in;
    if (a.law == "uniform") {
        d.law = NoiseLaw::Uniform;
    } else if (a.law != "gaussian") {
        throw InvalidArgument("--law must be gaussian or uniform");
    }
    const TimeSeries series = generate(d, a.n, a.seed);
    Table t{"series", {"x"}, {}};
    for (const double v : series.values()) t.rows.push_back({v});
    return {t};
}

void write_error(std::ostream& err, std::string_view code, const std::string& message, int exit_code) {
    json rec = {{"error", code}, {"message", message}, {"exit_code", exit_code}};
    err << rec.dump() << '\n';
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::string buf(text);
    std::replace(buf.begin(), buf.end(), ',', ' ');
    std::istringstream ss(buf);
    std::string token;
    while (ss >> token) {
        const auto v = parse_double(token);
        if (!v) throw InvalidArgument("not a number: '" + token + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw InvalidArgument("empty coefficient list");
    return out;
}

TimeSeries read_series(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        // A trailing delimiter on a single-column file is tolerated.
        if (s.back() == ',' || s.back() == ';') s = trim(s.substr(0, s.size() - 1));
        if (const auto v = parse_double(s)) {
            values.push_back(*v);
        } else if (header_allowed) {
            // one header line
        } else {
            throw InvalidArgument("line " + std::to_string(line_no) + ": not a number: '" + std::string(s) + "'");
        }
        header_allowed = false;
    }
    if (values.empty()) throw InvalidArgument("series is empty");
    return TimeSeries(std::move(values));
}

TimeSeries read_series_file(const std::string& path) {
    if (path == "-") return read_series(std::cin);
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
    return read_series(in);
}

ModelFile read_model(std::istream& in) {
    ModelFile file;
    bool has_levels = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("model file line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(s.substr(0, eq)));
        const std::string_view value = trim(s.substr(eq + 1));
        if (key == "levels" || key == "a") {
            file.levels = parse_number_list(value);
            has_levels = true;
        } else if (key == "sigma2") {
            const auto v = parse_double(value);
            if (!v) throw InvalidArgument("model file: sigma2 is not a number");
            file.sigma2 = *v;
        } else if (key == "kind") {
            file.kind = std::string(value);
        } else {
            throw InvalidArgument("model file: unknown key '" + key + "'");
        }
    }
    if (!has_levels) throw InvalidArgument("model file: missing 'levels'");
    return file;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Plug-in and direct multistep predictor selection for autoregressions with a unit root",
                 "arsel"};
    app.require_subcommand(1);
    // --h is the horizon, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");

    Common common;

    TheoryArgs theory_args;
    auto* theory = app.add_subcommand("theory", "Asymptotic losses and minimal-loss combinations of a model");
    theory->add_option("--model", theory_args.model_path, "Model file (levels = ..., sigma2 = ..., kind = ...)");
    theory->add_option("--levels", theory_args.levels, "Comma-separated levels coefficients a_1..a_q");
    theory->add_option("--dgp", theory_args.dgp, "Registered DGP (I..X, RW)");
    theory->add_option("--kind", theory_args.kind, "auto, unit-root or stationary")->capture_default_str();
    theory->add_option("--sigma2", theory_args.sigma2, "Innovation variance");
    theory->add_option("--h", theory_args.h, "Forecast horizon");
    theory->add_option("--K", theory_args.max_order, "Maximal candidate order");
    add_common(theory, common);

    SelectArgs select_args;
    auto* select = app.add_subcommand("select", "Select an order/method combination for a series");
    select->add_option("--input", select_args.input, "CSV series (single column, '-' for stdin)")->required();
    select->add_option("--h", select_args.h, "Forecast horizon")->check(CLI::PositiveNumber)->capture_default_str();
    select->add_option("--K", select_args.max_order, "Maximal candidate order")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    select->add_option("--procedure", select_args.procedure, "I (accumulated errors), II (penalized) or both")
        ->check(CLI::IsMember({"I", "II", "both"}))
        ->capture_default_str();
    auto* cn = select->add_option("--cn", select_args.penalty.cn, "C_n preset A, B or C (default B)");
    select->add_option("--cn-multiplier", select_args.penalty.multiplier, "C_n = x log n / n")->excludes(cn);
    add_common(select, common);

    ForecastArgs forecast_args;
    auto* forecast = app.add_subcommand("forecast", "Plug-in and direct h-step forecasts from the series end");
    forecast->add_option("--input", forecast_args.input, "CSV series")->required();
    forecast->add_option("--k", forecast_args.k, "Working order")->check(CLI::PositiveNumber)->required();
    forecast->add_option("--h", forecast_args.h, "Forecast horizon")->check(CLI::PositiveNumber)->capture_default_str();
    forecast->add_option("--method", forecast_args.method, "plug-in, direct or both")
        ->check(CLI::IsMember({"plug-in", "direct", "both"}))
        ->capture_default_str();
    add_common(forecast, common);

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo selection frequencies or MSPE");
    simulate->add_option("--dgp", sim_args.dgps, "DGPs (I..X, RW); comma-separated or repeated");
    simulate->add_option("--n", sim_args.sizes, "Sample sizes; comma-separated or repeated")
        ->delimiter(',')
        ->capture_default_str();
    auto* sim_cn = simulate->add_option("--cn", sim_args.procedures, "C_n presets (default A,B,C)");
    simulate->add_option("--cn-multiplier", sim_args.multiplier, "Single C_n = x log n / n")->excludes(sim_cn);
    simulate->add_option("--reps", sim_args.reps, "Replications")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--seed", sim_args.seed, "Master seed")->capture_default_str();
    simulate->add_option("--threads", sim_args.threads, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_option("--h", sim_args.h, "Override the DGP horizon")->check(CLI::PositiveNumber);
    simulate->add_option("--K", sim_args.max_order, "Override the maximal order")->check(CLI::PositiveNumber);
    simulate->add_option("--noise-variance", sim_args.noise_variance, "Override the innovation variance");
    simulate->add_option("--burn-in", sim_args.burn_in, "Discarded leading observations")->capture_default_str();
    simulate->add_flag("--mspe", sim_args.mspe, "Estimate the MSPE of one predictor instead");
    simulate->add_option("--k", sim_args.k, "Order for --mspe")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--method", sim_args.method, "Method for --mspe")
        ->check(CLI::IsMember({"plug-in", "direct"}))
        ->capture_default_str();
    simulate->add_option("--estimator", sim_args.estimator, "conditional or squared")->capture_default_str();
    add_common(simulate, common);

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "Write a simulated series as CSV");
    gen->add_option("--dgp", gen_args.dgp, "DGP (I..X, RW)")->required();
    gen->add_option("--n", gen_args.n, "Length")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--seed", gen_args.seed, "Seed")->capture_default_str();
    gen->add_option("--noise-variance", gen_args.noise_variance, "Override the innovation variance");
    gen->add_option("--burn-in", gen_args.burn_in, "Discarded leading observations")->capture_default_str();
    gen->add_option("--law", gen_args.law, "gaussian or uniform")->capture_default_str();
    add_common(gen, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kSuccess;
        }
        write_error(err, "InvalidArgument", e.what(), kInputError);
        return kInputError;
    }

    try {
        std::ofstream file;
        if (!common.out_path.empty()) {
            file.open(common.out_path);
            if (!file) throw InvalidArgument("cannot open output file '" + common.out_path + "'");
        }
        std::ostream& os = common.out_path.empty() ? out : file;
        os << std::setprecision(10);
        const Format format = to_format(common.format);

        int code = kSuccess;
        if (theory->parsed()) {
            render(run_theory(theory_args), format, os);
        } else if (select->parsed()) {
            render(run_select(select_args), format, os);
        } else if (forecast->parsed()) {
            render(run_forecast(forecast_args), format, os);
        } else if (simulate->parsed()) {
            code = run_simulate(sim_args, format, os);
        } else if (gen->parsed()) {
            // Plain CSV by default so the output feeds straight back into --input.
            render(run_generate(gen_args), gen->count("--format") ? format : Format::Csv, os);
        }
        os.flush();
        return code;
    } catch (const Error& e) {
        const int code = is_input_error(e.code()) ? kInputError : kNumericalFailure;
        write_error(err, to_string(e.code()), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        write_error(err, "InternalError", e.what(), kNumericalFailure);
        return kNumericalFailure;
    }
}

}  // namespace arsel::cli
