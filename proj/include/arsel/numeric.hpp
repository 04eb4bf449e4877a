#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace arsel {

/// Reciprocal condition number below which a Gram matrix is treated as singular.
inline constexpr double kSingularRcond = 1e-13;

/// Compensated (Neumaier) running sum.
class CompensatedSum {
public:
    void add(double value) noexcept;
    CompensatedSum& operator+=(double value) noexcept {
        add(value);
        return *this;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/**
 * Companion matrix with the coefficient vector as its FIRST COLUMN and the
 * identity block I_{k-1} in columns 2..k above a zero row:
 *
 *     [ c_1  1  0 ... 0 ]
 *     [ c_2  0  1 ... 0 ]
 *     [ ...             ]
 *     [ c_k  0  0 ... 0 ]
 *
 * With this layout, (A^{h-1} a)' x_t(k) is the h-step recursion of x.
 * Coefficients are zero-padded or truncated to `dim` (default: size of coeffs).
 */
[[nodiscard]] Eigen::MatrixXd companion_matrix(std::span<const double> coeffs);
[[nodiscard]] Eigen::MatrixXd companion_matrix(std::span<const double> coeffs, std::size_t dim);

/// A * v for the companion layout above, in O(k) without forming A.
[[nodiscard]] Eigen::VectorXd companion_times(const Eigen::VectorXd& first_column,
                                              const Eigen::VectorXd& v);

/// Sum_{j=0}^{h-1} w_j S^{h-1-j}, evaluated by Horner's rule (S^0 = I).
[[nodiscard]] Eigen::MatrixXd weighted_power_sum(const Eigen::MatrixXd& s,
                                                 std::span<const double> weights,
                                                 std::size_t h);

/// w_0 = 1, w_j = sum_{l=1}^{min(j,q)} coeffs_l w_{j-l}: the power-series
/// coefficients of 1 / (1 - coeffs_1 z - ... - coeffs_q z^q).
[[nodiscard]] std::vector<double> impulse_response(std::span<const double> coeffs,
                                                   std::size_t length);

/// Spectral radius of the companion matrix of coeffs (0 for empty input).
[[nodiscard]] double companion_spectral_radius(std::span<const double> coeffs);

/**
 * True when 1 - coeffs_1 z - ... - coeffs_q z^q has every root strictly
 * outside the unit circle, judged by |poly(z)| on 720 points of |z| = 1
 * together with the companion spectral radius.
 */
[[nodiscard]] bool is_stable_polynomial(std::span<const double> coeffs);

/// LDLT factorization of a symmetric positive semi-definite Gram matrix, or
/// nullopt when its estimated reciprocal condition is below kSingularRcond.
[[nodiscard]] std::optional<Eigen::LDLT<Eigen::MatrixXd>> factor_gram(const Eigen::MatrixXd& gram);

[[nodiscard]] bool gram_is_invertible(const Eigen::MatrixXd& gram);

}  // namespace arsel
