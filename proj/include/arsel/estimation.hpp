#pragma once

#include "arsel/model.hpp"
#include "arsel/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace arsel {

/// Least-squares coefficients for predicting x_{i+h} from x_i(k).
struct FittedCoefficients {
    Eigen::VectorXd coeffs;
    std::size_t order = 1;
    std::size_t horizon = 1;
    Method method = Method::PlugIn;
    std::size_t sample_end = 0;  // i: last observation used

    [[nodiscard]] PredictorSpec spec() const noexcept { return {order, method, horizon}; }
};

/**
 * @brief Running normal-equation sums sum_j x_j(k) x_j(k)' and sum_j x_j(k) y_j.
 *
 * Rows are appended in time order; first_row()/last_row() track the regressor
 * index range j covered so far. Not safe to share while being updated.
 */
class GramAccumulator {
public:
    explicit GramAccumulator(std::size_t order);

    /// Appends regressor row x_j(k) with target x_{j + lead}.
    void add_row(const TimeSeries& series, std::size_t j, std::size_t lead);
    void add_row(const Eigen::VectorXd& regressor, double target);

    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] std::ptrdiff_t first_row() const noexcept { return first_row_; }
    [[nodiscard]] std::ptrdiff_t last_row() const noexcept { return last_row_; }
    [[nodiscard]] const Eigen::MatrixXd& gram() const noexcept { return gram_; }
    [[nodiscard]] const Eigen::VectorXd& cross() const noexcept { return cross_; }

    /// Solves the normal equations. @throws SingularDesign
    [[nodiscard]] Eigen::VectorXd solve() const;
    [[nodiscard]] bool solvable() const;

private:
    std::size_t order_;
    std::size_t count_ = 0;
    std::ptrdiff_t first_row_ = 0;
    std::ptrdiff_t last_row_ = -1;
    Eigen::MatrixXd gram_;
    Eigen::VectorXd cross_;
};

/// sum_{j=first}^{last} x_j(k) x_j(k)'.
[[nodiscard]] Eigen::MatrixXd gram_matrix(const TimeSeries& series, std::size_t k,
                                          std::size_t first, std::size_t last);

/// One-step estimate from rows j = k..i-1. @throws SingularDesign when i < 2k or the Gram is singular.
[[nodiscard]] FittedCoefficients fit_one_step(const TimeSeries& series, std::size_t k, std::size_t i);

/// Companion power A^{h-1} applied to a one-step fit; h = 1 returns the input.
[[nodiscard]] FittedCoefficients plug_in_multi(const FittedCoefficients& one_step, std::size_t h);

/// Direct h-step estimate from rows j = k..i-h. @throws SingularDesign
[[nodiscard]] FittedCoefficients fit_direct(const TimeSeries& series, std::size_t k, std::size_t h,
                                            std::size_t i);

/**
 * (n - h - K)^{-1} sum_{j=K}^{n-h} (x_{j+h} - coeffs' x_j(k))^2 with n the fit's sample end.
 * The window is shared by all candidate orders k <= K.
 *
 * @throws WindowTooShort if n - h - K < 1
 */
[[nodiscard]] double residual_mse(const TimeSeries& series, const FittedCoefficients& fitted,
                                  std::size_t max_order);

/// b_0 = 1, b_j = sum_{l=1}^{j} b_{j-l} a_l with a_l = 0 beyond the fitted order.
[[nodiscard]] std::vector<double> fitted_ma_weights(const FittedCoefficients& one_step,
                                                    std::size_t length);

}  // namespace arsel
