#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace arsel {

/// Relative tolerance on A(1) for declaring a unit root: |A(1)| <= tol * (1 + sum |a_i|).
inline constexpr double kUnitRootTolerance = 1e-9;

/// Relative tolerance below which an h-step direct coefficient counts as zero.
inline constexpr double kDirectZeroTolerance = 1e-9;

/**
 * @brief Observations x_1..x_n, addressed with 1-based time indices.
 *
 * Pre-sample values x_t for t <= 0 read as zero.
 */
class TimeSeries {
public:
    TimeSeries() = default;
    /// @throws InvalidArgument if a value is not finite.
    explicit TimeSeries(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

    /// x_t; zero for t <= 0. t must not exceed size().
    [[nodiscard]] double operator[](std::ptrdiff_t t) const;

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// x_j(k) = (x_j, x_{j-1}, ..., x_{j-k+1})'.
    [[nodiscard]] Eigen::VectorXd regressor(std::size_t j, std::size_t k) const;

private:
    std::vector<double> values_;
};

/// s_t = x_t - x_{t-1} for t = 1..n, with x_0 = 0.
[[nodiscard]] TimeSeries difference(const TimeSeries& series);

enum class ModelKind { UnitRoot, Stationary };

/**
 * @brief Autoregression x_{t+1} = sum_i a_i x_{t+1-i} + e_{t+1} in levels.
 *
 * A unit-root model factors as A(z) = (1 - z) alpha(z) with alpha stable; a
 * stationary model has every root of A outside the unit circle.
 */
class ArModel {
public:
    /// @throws NotUnitRoot, UnstableStationaryPart, InvalidArgument
    [[nodiscard]] static ArModel unit_root(std::vector<double> levels, double sigma2,
                                           double tol = kUnitRootTolerance);
    /// @throws UnstableStationaryPart if A itself is not stable
    [[nodiscard]] static ArModel stationary(std::vector<double> levels, double sigma2);
    /// Unit root when A(1) vanishes within tolerance, stationary otherwise.
    [[nodiscard]] static ArModel classify(std::vector<double> levels, double sigma2);

    [[nodiscard]] ModelKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool has_unit_root() const noexcept { return kind_ == ModelKind::UnitRoot; }

    /// a_1..a_{p+1} (unit root) or a_1..a_q (stationary).
    [[nodiscard]] const std::vector<double>& levels() const noexcept { return levels_; }
    /// alpha_1..alpha_p; empty for stationary models and for the random walk.
    [[nodiscard]] const std::vector<double>& stationary_part() const noexcept { return alpha_; }
    [[nodiscard]] double sigma2() const noexcept { return sigma2_; }

    /// Minimal correct one-step order p_1, i.e. the number of levels coefficients.
    [[nodiscard]] std::size_t order() const noexcept { return levels_.size(); }

private:
    ArModel(ModelKind kind, std::vector<double> levels, std::vector<double> alpha, double sigma2)
        : kind_(kind), levels_(std::move(levels)), alpha_(std::move(alpha)), sigma2_(sigma2) {}

    ModelKind kind_ = ModelKind::Stationary;
    std::vector<double> levels_;
    std::vector<double> alpha_;
    double sigma2_ = 1.0;
};

/**
 * Divides A(z) = 1 - sum a_i z^i by (1 - z) and returns alpha_1..alpha_p.
 *
 * @throws NotUnitRoot if |A(1)| > tol * (1 + sum |a_i|)
 * @throws UnstableStationaryPart if alpha has a root on or inside the unit circle
 */
[[nodiscard]] std::vector<double> deflate_unit_root(std::span<const double> levels,
                                                    double tol = kUnitRootTolerance);

/// Levels of (1 - z) alpha(z): a_1 = 1 + alpha_1, a_i = alpha_i - alpha_{i-1}, a_{p+1} = -alpha_p.
[[nodiscard]] std::vector<double> integrate_unit_root(std::span<const double> alpha);

struct DirectCoefficients {
    std::size_t horizon = 1;
    std::vector<double> coeffs;  // a_1(h, p+1) .. a_{p+1}(h, p+1)
    std::size_t minimal_order = 1;  // p_h
};

/// A^{h-1}(p+1) a(p+1) by h-1 companion products; p_h from the zero tolerance.
[[nodiscard]] DirectCoefficients direct_coefficients(std::span<const double> levels,
                                                     std::size_t h);
[[nodiscard]] DirectCoefficients direct_coefficients(const ArModel& model, std::size_t h);

struct MaWeights {
    std::vector<double> c;  // coefficients of 1/alpha(z)
    std::vector<double> b;  // b_j = c_0 + ... + c_j, coefficients of 1/A(z)

    [[nodiscard]] std::size_t length() const noexcept { return c.empty() ? 0 : c.size() - 1; }
};

/// Truncation J with geometric tail of 1/poly(z) below 1e-14 (capped at 1e5).
[[nodiscard]] std::size_t default_truncation(std::span<const double> coeffs);

/// c_0..c_J and b_0..b_J of a unit-root model. @throws InvalidArgument for stationary models.
[[nodiscard]] MaWeights ma_weights(const ArModel& model, std::size_t truncation);
[[nodiscard]] MaWeights ma_weights(const ArModel& model);

/// MA weights of 1/A(z) for any model kind: b_j for unit root, psi_j otherwise.
[[nodiscard]] std::vector<double> forecast_weights(const ArModel& model, std::size_t truncation);

/// sigma^2 * sum_{j<h} b_j^2, the variance of the h-step innovation combination.
[[nodiscard]] double sigma_h_squared(const ArModel& model, std::size_t h);

}  // namespace arsel
