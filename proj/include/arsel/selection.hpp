#pragma once

#include "arsel/model.hpp"
#include "arsel/types.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arsel {

/// C_n = multiplier * log(n) / n. Multipliers 1, 2, 3 are presets A, B, C.
struct PenaltyWeight {
    double multiplier = 2.0;

    [[nodiscard]] double at(std::size_t n) const {
        const auto nn = static_cast<double>(n);
        return multiplier * std::log(nn) / nn;
    }
    /// "A", "B", "C" for the presets, otherwise the multiplier.
    [[nodiscard]] std::string label() const;

    [[nodiscard]] static constexpr PenaltyWeight procedure_a() noexcept { return {1.0}; }
    [[nodiscard]] static constexpr PenaltyWeight procedure_b() noexcept { return {2.0}; }
    [[nodiscard]] static constexpr PenaltyWeight procedure_c() noexcept { return {3.0}; }

    friend bool operator==(const PenaltyWeight&, const PenaltyWeight&) = default;
};

/// Accepts "A", "B", "C" (case-insensitive).
[[nodiscard]] std::optional<PenaltyWeight> parse_penalty(std::string_view text) noexcept;

struct CandidateScore {
    PredictorSpec spec;
    double value = 0.0;
};

/**
 * @brief Result of a three-step predictor selection.
 *
 * step1_order is the direct one-step argmin that lower-bounds the plug-in
 * search; direct_order and plugin_order are the Step 2 argmins compared in
 * Step 3. scores lists every candidate's criterion value, including the
 * one-step direct values of Step 1 (horizon 1).
 */
struct SelectionOutcome {
    PredictorSpec choice;
    std::size_t max_order = 1;
    std::size_t start_index_one_step = 0;  // m_1, accumulated-error procedure only
    std::size_t start_index = 0;           // m_h, accumulated-error procedure only
    std::size_t step1_order = 1;
    std::size_t direct_order = 1;
    std::size_t plugin_order = 1;
    double direct_value = 0.0;
    double plugin_value = 0.0;
    std::optional<PenaltyWeight> penalty;  // set for the penalized procedure
    std::vector<CandidateScore> scores;

    /// Criterion value recorded for a candidate, if any.
    [[nodiscard]] std::optional<double> score(std::size_t k, Method method, std::size_t h) const;
};

/**
 * Smallest i >= 2K + h - 1 at which both order-K Gram matrices (one-step rows
 * K..i-1, direct rows K..i-h) pass the invertibility threshold.
 *
 * @throws SeriesTooShort if no such i <= n - h exists
 */
[[nodiscard]] std::size_t min_start_index(const TimeSeries& series, std::size_t max_order,
                                          std::size_t h);

/// Accumulated h-step squared errors of sequential refits for i = m_h..n-h.
[[nodiscard]] double ape(const TimeSeries& series, std::size_t k, std::size_t h, Method method,
                         std::size_t max_order);

/// As ape() with an explicit start index m_h.
[[nodiscard]] double ape_from(const TimeSeries& series, std::size_t k, std::size_t h, Method method,
                              std::size_t start_index);

/// Accumulated-prediction-error selection.
[[nodiscard]] SelectionOutcome procedure_I(const TimeSeries& series, std::size_t h,
                                           std::size_t max_order);

/// The two parts of a penalized criterion: residual MSE + trace * sigma_tilde^2 * C_n.
struct CriterionTerms {
    double residual_mse = 0.0;
    double trace = 0.0;
    double sigma_tilde2 = 0.0;
    double weight = 0.0;

    [[nodiscard]] double penalty() const noexcept { return trace * sigma_tilde2 * weight; }
    [[nodiscard]] double value() const noexcept { return residual_mse + penalty(); }
};

[[nodiscard]] CriterionTerms pmic_terms(const TimeSeries& series, std::size_t k, std::size_t h,
                                        std::size_t max_order, PenaltyWeight weight);
[[nodiscard]] CriterionTerms dmic_terms(const TimeSeries& series, std::size_t k, std::size_t h,
                                        std::size_t max_order, PenaltyWeight weight);

[[nodiscard]] double pmic(const TimeSeries& series, std::size_t k, std::size_t h,
                          std::size_t max_order, PenaltyWeight weight);
[[nodiscard]] double dmic(const TimeSeries& series, std::size_t k, std::size_t h,
                          std::size_t max_order, PenaltyWeight weight);

/// Penalized-criterion selection.
[[nodiscard]] SelectionOutcome procedure_II(const TimeSeries& series, std::size_t h,
                                            std::size_t max_order,
                                            PenaltyWeight weight = PenaltyWeight::procedure_b());

/// Procedure II for several penalty weights sharing one set of fits.
[[nodiscard]] std::vector<SelectionOutcome> procedure_II(const TimeSeries& series, std::size_t h,
                                                         std::size_t max_order,
                                                         std::span<const PenaltyWeight> weights);

}  // namespace arsel
