#pragma once

#include "arsel/model.hpp"
#include "arsel/selection.hpp"
#include "arsel/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arsel {

enum class DgpId { I = 1, II, III, IV, V, VI, VII, VIII, IX, X };

[[nodiscard]] std::string to_string(DgpId id);
/// Roman numerals I..X, case-insensitive.
[[nodiscard]] std::optional<DgpId> parse_dgp(std::string_view text) noexcept;
[[nodiscard]] std::span<const DgpId> all_dgps() noexcept;

enum class NoiseLaw { Gaussian, Uniform };

/**
 * @brief A data-generating recursion x_t = sum_i a_i x_{t-i} + e_t with x_t = 0 for t <= 0.
 *
 * initial_impulse is added to e_1; burn_in extra leading observations are
 * simulated and discarded (0 keeps the zero-start convention).
 */
struct DgpSpec {
    std::string name;
    std::vector<double> levels;
    bool unit_root = false;
    double noise_variance = 25.0;
    std::size_t horizon = 1;
    std::size_t max_order = 10;
    double initial_impulse = 0.0;
    NoiseLaw law = NoiseLaw::Gaussian;
    std::size_t burn_in = 0;

    /// Model with sigma^2 = noise_variance. @throws if noise_variance == 0
    [[nodiscard]] ArModel model() const;
};

/// Registry entry: N(0, 25) noise, h = 2 (I-IV), 3 (V-VIII), 10 (IX, X); K = 10, or 20 for IX, X.
[[nodiscard]] DgpSpec dgp_spec(DgpId id);

/// x_t = x_{t-1} + e_t.
[[nodiscard]] DgpSpec random_walk_dgp(double noise_variance = 1.0);

/// Standard normal draws by the Marsaglia polar method on top of mt19937_64.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] double normal();
    /// Uniform on (-sqrt 3, sqrt 3), unit variance.
    [[nodiscard]] double uniform_unit_variance();

private:
    [[nodiscard]] double unit_interval();  // [0, 1) with 53 random bits

    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

struct SimulatedPath {
    std::vector<double> values;       // x_1..x_n
    std::vector<double> innovations;  // e_1..e_n
};

/// Fully determined by (dgp, n, seed).
[[nodiscard]] SimulatedPath simulate_path(const DgpSpec& dgp, std::size_t n, std::uint64_t seed);
[[nodiscard]] TimeSeries generate(const DgpSpec& dgp, std::size_t n, std::uint64_t seed);

/// splitmix64-style mix of (master, dgp name, n, replication index).
[[nodiscard]] std::uint64_t replication_seed(std::uint64_t master, std::string_view dgp,
                                             std::size_t n, std::size_t replication) noexcept;

struct ExperimentConfig {
    std::vector<DgpSpec> dgps;
    std::vector<std::size_t> sample_sizes;
    std::vector<PenaltyWeight> procedures{PenaltyWeight::procedure_a(), PenaltyWeight::procedure_b(),
                                          PenaltyWeight::procedure_c()};
    std::size_t replications = 200;
    std::uint64_t master_seed = 20050101;
    unsigned threads = 1;
};

/**
 * @brief Tallies of procedure_II selections for one (dgp, n, procedure).
 *
 * counts is keyed by (k, method) at the dgp horizon. Failed replications are
 * counted in failures, so the counts plus failures sum to replications.
 */
struct FrequencyCell {
    std::string dgp;
    std::size_t n = 0;
    PenaltyWeight procedure;
    std::size_t horizon = 1;
    std::size_t max_order = 1;
    std::size_t replications = 0;
    std::map<PredictorSpec, std::size_t> counts;
    std::size_t failures = 0;
    std::map<std::string, std::size_t> failure_codes;
    std::vector<PredictorSpec> best;  // minimal-loss combinations, empty if unavailable

    [[nodiscard]] std::size_t count(std::size_t k, Method method) const;
    [[nodiscard]] std::size_t best_count() const;
    [[nodiscard]] double best_frequency() const;
    [[nodiscard]] std::size_t total() const;  // sum of counts and failures
};

struct FrequencyTable {
    std::vector<FrequencyCell> cells;
    std::size_t replications = 0;
    std::uint64_t master_seed = 0;

    [[nodiscard]] const FrequencyCell* find(std::string_view dgp, std::size_t n,
                                            PenaltyWeight procedure) const;
};

/// Bit-identical for a given master seed whatever the thread count. Each
/// replication runs every procedure on the same series.
[[nodiscard]] FrequencyTable run_frequency_experiment(const ExperimentConfig& config);

/// One row per (dgp, n, procedure, k, method) with a nonzero count, plus failures.
void write_frequency_csv(const FrequencyTable& table, std::ostream& os);
/// Best-combination counts, one row per (dgp, n), one column per procedure.
void write_frequency_text(const FrequencyTable& table, std::ostream& os);

enum class MspeEstimator {
    SquaredError,            // (x_{n+h} - forecast)^2
    ConditionalExpectation,  // sigma_h^2 + (E[x_{n+h} | past] - forecast)^2
};

struct MspeEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replications = 0;
    double sigma_h2 = 0.0;  // true h-step innovation variance
    MspeEstimator estimator = MspeEstimator::ConditionalExpectation;

    /// n (mean - sigma_h^2), the Monte Carlo analog of the asymptotic loss.
    [[nodiscard]] double scaled_excess(std::size_t n) const noexcept {
        return static_cast<double>(n) * (mean - sigma_h2);
    }
};

/**
 * Monte Carlo MSPE of predictor spec at origin n over R replications. Both
 * estimators are unbiased for the same expectation; the conditional one drops
 * the innovation noise of x_{n+h} and has far smaller variance.
 *
 * @throws InvalidArgument if R < 2
 */
[[nodiscard]] MspeEstimate estimate_mspe(const DgpSpec& dgp, const PredictorSpec& spec, std::size_t n,
                                         std::size_t replications, std::uint64_t seed,
                                         MspeEstimator estimator = MspeEstimator::ConditionalExpectation,
                                         unsigned threads = 1);

}  // namespace arsel
