#include "arsel/simulation.hpp"

#include "arsel/errors.hpp"
#include "arsel/estimation.hpp"
#include "arsel/numeric.hpp"
#include "arsel/prediction.hpp"
#include "arsel/theory.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace arsel {

namespace {

constexpr std::array<DgpId, 10> kAllDgps{DgpId::I,  DgpId::II,  DgpId::III, DgpId::IV,   DgpId::V,
                                         DgpId::VI, DgpId::VII, DgpId::VIII, DgpId::IX, DgpId::X};
constexpr std::array<const char*, 10> kNames{"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Runs body(i) for i in [0, count). The first failure by index is rethrown
/// after all workers finish; results must be written to index-addressed slots.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<PredictorSpec> minimal_loss_set(const DgpSpec& dgp) {
    if (dgp.noise_variance <= 0.0) return {};
    try {
        return best_combinations(dgp.model(), dgp.horizon, dgp.max_order);
    } catch (const Error&) {
        return {};
    }
}

struct ReplicationResult {
    std::vector<PredictorSpec> choices;  // one per procedure
    std::optional<ErrorCode> error;
};

}  // namespace

std::string to_string(DgpId id) { return kNames.at(static_cast<std::size_t>(id) - 1); }

std::optional<DgpId> parse_dgp(std::string_view text) noexcept {
    std::string upper(text);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (upper == kNames[i]) return kAllDgps[i];
    }
    return std::nullopt;
}

std::span<const DgpId> all_dgps() noexcept { return kAllDgps; }

ArModel DgpSpec::model() const {
    if (unit_root) return ArModel::unit_root(levels, noise_variance);
    return ArModel::stationary(levels, noise_variance);
}

DgpSpec dgp_spec(DgpId id) {
    DgpSpec d;
    d.name = to_string(id);
    switch (id) {
        case DgpId::I: d.levels = {0.0, -0.8}; break;
        case DgpId::II: d.levels = {0.3, -0.8}; break;
        case DgpId::III: d.levels = {0.0, 0.2, 0.8}; break;
        case DgpId::IV: d.levels = {0.3, -0.1, 0.8}; break;
        case DgpId::V: d.levels = {0.9, -0.81}; break;
        case DgpId::VI: d.levels = {0.6, -0.36}; break;
        case DgpId::VII: d.levels = {0.9, -0.81, 0.91}; break;
        case DgpId::VIII: d.levels = {0.9, -0.56, 0.66}; break;
        case DgpId::IX:
            d.levels.assign(11, 0.0);
            d.levels[9] = 0.2;
            d.levels[10] = 0.8;
            break;
        case DgpId::X: d.levels = {1.5, -0.5}; break;
    }
    switch (id) {
        case DgpId::I:
        case DgpId::II:
        case DgpId::V:
        case DgpId::VI: d.unit_root = false; break;
        default: d.unit_root = true; break;
    }
    const auto index = static_cast<int>(id);
    d.horizon = index <= 4 ? 2 : index <= 8 ? 3 : 10;
    d.max_order = index <= 8 ? 10 : 20;
    return d;
}

DgpSpec random_walk_dgp(double noise_variance) {
    DgpSpec d;
    d.name = "RW";
    d.levels = {1.0};
    d.unit_root = true;
    d.noise_variance = noise_variance;
    d.horizon = 1;
    d.max_order = 1;
    return d;
}

double NormalSampler::unit_interval() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalSampler::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * unit_interval() - 1.0;
        v = 2.0 * unit_interval() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    return u * f;
}

double NormalSampler::uniform_unit_variance() {
    return std::sqrt(3.0) * (2.0 * unit_interval() - 1.0);
}

SimulatedPath simulate_path(const DgpSpec& dgp, std::size_t n, std::uint64_t seed) {
    if (!(dgp.noise_variance >= 0.0) || !std::isfinite(dgp.noise_variance)) {
        throw InvalidArgument("noise variance must be finite and >= 0");
    }
    NormalSampler sampler(seed);
    const double scale = std::sqrt(dgp.noise_variance);
    const std::size_t total = n + dgp.burn_in;
    const std::size_t q = dgp.levels.size();
    std::vector<double> x(total, 0.0);
    std::vector<double> e(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        const double draw = dgp.law == NoiseLaw::Gaussian ? sampler.normal() : sampler.uniform_unit_variance();
        e[t] = scale * draw + (t == 0 ? dgp.initial_impulse : 0.0);
        double value = e[t];
        for (std::size_t i = 1; i <= std::min(q, t); ++i) value += dgp.levels[i - 1] * x[t - i];
        x[t] = value;
    }
    const auto skip = static_cast<std::ptrdiff_t>(dgp.burn_in);
    return SimulatedPath{std::vector<double>(x.begin() + skip, x.end()),
                         std::vector<double>(e.begin() + skip, e.end())};
}

TimeSeries generate(const DgpSpec& dgp, std::size_t n, std::uint64_t seed) {
    return TimeSeries(simulate_path(dgp, n, seed).values);
}

std::uint64_t replication_seed(std::uint64_t master, std::string_view dgp, std::size_t n,
                               std::size_t replication) noexcept {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ fnv1a(dgp));
    s = splitmix64(s ^ static_cast<std::uint64_t>(n));
    return splitmix64(s ^ static_cast<std::uint64_t>(replication));
}

std::size_t FrequencyCell::count(std::size_t k, Method method) const {
    const auto it = counts.find(PredictorSpec{k, method, horizon});
    return it == counts.end() ? 0 : it->second;
}

std::size_t FrequencyCell::best_count() const {
    std::size_t c = 0;
    for (const auto& spec : best) c += count(spec.order, spec.method);
    return c;
}

double FrequencyCell::best_frequency() const {
    if (replications == 0) return 0.0;
    return static_cast<double>(best_count()) / static_cast<double>(replications);
}

std::size_t FrequencyCell::total() const {
    std::size_t c = failures;
    for (const auto& [spec, count] : counts) c += count;
    return c;
}

const FrequencyCell* FrequencyTable::find(std::string_view dgp, std::size_t n, PenaltyWeight procedure) const {
    const auto it = std::find_if(cells.begin(), cells.end(), [&](const FrequencyCell& c) {
        return c.dgp == dgp && c.n == n && c.procedure == procedure;
    });
    return it == cells.end() ? nullptr : &*it;
}

FrequencyTable run_frequency_experiment(const ExperimentConfig& config) {
    if (config.replications == 0) throw InvalidArgument("replications must be >= 1");
    if (config.procedures.empty()) throw InvalidArgument("at least one procedure is required");
    FrequencyTable table;
    table.replications = config.replications;
    table.master_seed = config.master_seed;

    for (const DgpSpec& dgp : config.dgps) {
        const std::vector<PredictorSpec> best = minimal_loss_set(dgp);
        for (const std::size_t n : config.sample_sizes) {
            std::vector<ReplicationResult> results(config.replications);
            parallel_for(config.replications, config.threads, [&](std::size_t r) {
                ReplicationResult& out = results[r];
                try {
                    const TimeSeries series = generate(dgp, n, replication_seed(config.master_seed, dgp.name, n, r));
                    for (const auto& o : procedure_II(series, dgp.horizon, dgp.max_order, config.procedures)) {
                        out.choices.push_back(o.choice);
                    }
                } catch (const Error& e) {
                    out.choices.clear();
                    out.error = e.code();
                }
            });

            const std::size_t first = table.cells.size();
            for (const PenaltyWeight& w : config.procedures) {
                FrequencyCell cell;
                cell.dgp = dgp.name;
                cell.n = n;
                cell.procedure = w;
                cell.horizon = dgp.horizon;
                cell.max_order = dgp.max_order;
                cell.replications = config.replications;
                cell.best = best;
                table.cells.push_back(std::move(cell));
            }
            for (const ReplicationResult& r : results) {
                for (std::size_t p = 0; p < config.procedures.size(); ++p) {
                    FrequencyCell& cell = table.cells[first + p];
                    if (r.error) {
                        ++cell.failures;
                        ++cell.failure_codes[std::string(to_string(*r.error))];
                    } else {
                        ++cell.counts[r.choices[p]];
                    }
                }
            }
        }
    }
    return table;
}

void write_frequency_csv(const FrequencyTable& table, std::ostream& os) {
    os << "dgp,n,procedure,horizon,k,method,count,replications,frequency,minimal_loss\n";
    const auto freq = [&](std::size_t c) {
        std::ostringstream s;
        s << std::setprecision(6) << static_cast<double>(c) / static_cast<double>(table.replications);
        return s.str();
    };
    for (const FrequencyCell& cell : table.cells) {
        const std::string prefix = cell.dgp + "," + std::to_string(cell.n) + "," + cell.procedure.label() +
                                   "," + std::to_string(cell.horizon) + ",";
        for (const auto& [spec, count] : cell.counts) {
            const bool is_best = std::find(cell.best.begin(), cell.best.end(), spec) != cell.best.end();
            os << prefix << spec.order << ',' << to_string(spec.method) << ',' << count << ','
               << cell.replications << ',' << freq(count) << ',' << (is_best ? 1 : 0) << '\n';
        }
        if (cell.failures > 0) {
            os << prefix << ",failed," << cell.failures << ',' << cell.replications << ','
               << freq(cell.failures) << ",0\n";
        }
    }
}

void write_frequency_text(const FrequencyTable& table, std::ostream& os) {
    std::vector<PenaltyWeight> procedures;
    for (const FrequencyCell& c : table.cells) {
        if (std::find(procedures.begin(), procedures.end(), c.procedure) == procedures.end()) {
            procedures.push_back(c.procedure);
        }
    }
    os << "Frequency of the minimal-loss combination in " << table.replications << " replications\n";
    os << std::left << std::setw(6) << "DGP" << std::setw(10) << "best" << std::right << std::setw(7) << "n";
    for (const auto& p : procedures) os << std::setw(8) << p.label();
    os << std::setw(10) << "failed" << '\n';

    std::vector<std::pair<std::string, std::size_t>> rows;
    for (const FrequencyCell& c : table.cells) {
        const std::pair<std::string, std::size_t> key{c.dgp, c.n};
        if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
    }
    for (const auto& [dgp, n] : rows) {
        std::string best_label = "-";
        std::size_t failures = 0;
        std::ostringstream counts;
        for (const auto& p : procedures) {
            const FrequencyCell* cell = table.find(dgp, n, p);
            if (cell == nullptr) {
                counts << std::setw(8) << "-";
                continue;
            }
            if (!cell->best.empty()) {
                best_label.clear();
                for (const auto& b : cell->best) best_label += to_string(b);
            }
            failures = std::max(failures, cell->failures);
            counts << std::setw(8) << cell->best_count();
        }
        os << std::left << std::setw(6) << dgp << std::setw(10) << best_label << std::right << std::setw(7) << n
           << counts.str() << std::setw(10) << failures << '\n';
    }
}

MspeEstimate estimate_mspe(const DgpSpec& dgp, const PredictorSpec& spec, std::size_t n,
                           std::size_t replications, std::uint64_t seed, MspeEstimator estimator,
                           unsigned threads) {
    if (replications < 2) throw InvalidArgument("MSPE estimation needs at least 2 replications");
    if (spec.order == 0 || spec.horizon == 0) throw InvalidArgument("order and horizon must be >= 1");
    const std::size_t h = spec.horizon;
    const std::size_t k = spec.order;

    // True conditional mean E[x_{n+h} | x_1..x_n] = a(h)' x_n(q) and sigma_h^2 = var * sum_{j<h} psi_j^2.
    const DirectCoefficients truth = direct_coefficients(dgp.levels, h);
    const Eigen::VectorXd true_coeffs = Eigen::Map<const Eigen::VectorXd>(
        truth.coeffs.data(), static_cast<Eigen::Index>(truth.coeffs.size()));
    const std::vector<double> psi = impulse_response(dgp.levels, h - 1);
    CompensatedSum psi2;
    for (const double w : psi) psi2 += w * w;
    const double sigma_h2 = dgp.noise_variance * psi2.value();

    std::vector<double> values(replications, 0.0);
    parallel_for(replications, threads, [&](std::size_t r) {
        const SimulatedPath path = simulate_path(dgp, n + h, replication_seed(seed, dgp.name, n, r));
        const TimeSeries sample(std::vector<double>(path.values.begin(),
                                                    path.values.begin() + static_cast<std::ptrdiff_t>(n)));
        const FittedCoefficients fitted = spec.method == Method::PlugIn
                                              ? plug_in_multi(fit_one_step(sample, k, n), h)
                                              : fit_direct(sample, k, h, n);
        const double forecast = predict(sample, fitted, n).value;
        if (estimator == MspeEstimator::SquaredError) {
            const double err = path.values[n + h - 1] - forecast;
            values[r] = err * err;
        } else {
            const double gap = true_coeffs.dot(sample.regressor(n, truth.coeffs.size())) - forecast;
            values[r] = sigma_h2 + gap * gap;
        }
    });

    CompensatedSum sum;
    for (const double v : values) sum += v;
    const double mean = sum.value() / static_cast<double>(replications);
    CompensatedSum dev;
    for (const double v : values) dev += (v - mean) * (v - mean);
    const double var = dev.value() / static_cast<double>(replications - 1);
    return MspeEstimate{mean, std::sqrt(var / static_cast<double>(replications)), replications, sigma_h2,
                        estimator};
}

}  // namespace arsel
