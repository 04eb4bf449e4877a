#pragma once

#include "arsel/model.hpp"
#include "arsel/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <vector>

namespace arsel {

/**
 * @brief Autocovariances gamma(0..L) of the stationary component.
 *
 * For a unit-root model these belong to the differenced series s_t; for a
 * stationary model to x_t itself.
 */
struct AutocovarianceTable {
    std::vector<double> gamma;

    [[nodiscard]] std::size_t max_lag() const noexcept { return gamma.empty() ? 0 : gamma.size() - 1; }
    /// gamma(|m|). @throws InvalidArgument beyond the stored lag.
    [[nodiscard]] double at(std::ptrdiff_t m) const;
    /// dim x dim Toeplitz matrix with (u, v) entry gamma(u - v).
    [[nodiscard]] Eigen::MatrixXd toeplitz(std::size_t dim) const;
};

/// gamma(m) = sigma^2 sum_i w_i w_{i+m} over truncated MA weights.
[[nodiscard]] AutocovarianceTable autocovariances(const ArModel& model, std::size_t max_lag);

/// M_h(dim) = sum_{j<h} b_j S_M^{h-1-j}(dim), S_M the companion of alpha padded with zeros.
[[nodiscard]] Eigen::MatrixXd m_h_matrix(const ArModel& model, std::size_t h, std::size_t dim);

/// Plug-in estimation cost f_{1,h}(k-1); zero at k = 1.
[[nodiscard]] double f1h(const ArModel& model, std::size_t h, std::size_t k);

/// Direct estimation cost f_{2,h}(k-1); zero at k = 1.
[[nodiscard]] double f2h(const ArModel& model, std::size_t h, std::size_t k);

/// Explicit h = 2 closed forms for f_{1,2}(k-1) and f_{2,2}(k-1); k >= 2, alpha_j = 0 for j > p.
[[nodiscard]] double closed_form_h2(const ArModel& model, std::size_t k, Method method);

/// Asymptotic loss n(MSPE - sigma_h^2); +infinity below the minimal correct order.
struct TheoreticalLoss {
    double value = std::numeric_limits<double>::infinity();
    std::size_t order = 1;
    Method method = Method::PlugIn;
    std::size_t horizon = 1;

    [[nodiscard]] bool finite() const noexcept { return value != std::numeric_limits<double>::infinity(); }
};

/// Unit-root loss 2 sigma^2 (sum_{j<h} b_j)^2 + f_{j,h}(k-1); stationary models
/// are routed to loss_stationary.
[[nodiscard]] TheoreticalLoss loss(const ArModel& model, std::size_t h, std::size_t k, Method method);

/**
 * Stationary counterpart of the loss: plug-in tr(G L G^{-1} L') sigma^2 with
 * L = sum_j psi_j A^{h-1-j}(k), direct tr(G^{-1} cov(sum_j psi_j x_{t+j}(k))) sigma^2,
 * where G is the k x k autocovariance matrix of x_t. No unit-root term.
 */
[[nodiscard]] TheoreticalLoss loss_stationary(const ArModel& model, std::size_t h, std::size_t k,
                                              Method method);

/// Every (k, method) with 1 <= k <= K minimizing the loss (relative tie window 1e-10),
/// ordered by k then plug-in before direct.
[[nodiscard]] std::vector<PredictorSpec> best_combinations(const ArModel& model, std::size_t h,
                                                           std::size_t max_order);

/// Levels of (1 - B)(1 + a1 B)(1 + a2 B^2) with a2 = a1^2 - a1 + 1.
[[nodiscard]] std::vector<double> factored_levels(double a1);

/// f_{2,3}(2) - f_{1,3}(3) for factored_levels(a1) with sigma^2 = 1.
[[nodiscard]] double table1_diff(double a1);

}  // namespace arsel
