#include "arsel/numeric.hpp"

#include "arsel/errors.hpp"
#include "arsel/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace arsel {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotUnitRoot: return "NotUnitRoot";
        case ErrorCode::UnstableStationaryPart: return "UnstableStationaryPart";
        case ErrorCode::SingularGamma: return "SingularGamma";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
    return code != ErrorCode::SingularGamma && code != ErrorCode::SingularDesign;
}

SingularDesign::SingularDesign(std::size_t order, std::ptrdiff_t first_row,
                               std::ptrdiff_t last_row, const std::string& detail)
    : Error(ErrorCode::SingularDesign,
            "singular design for order " + std::to_string(order) + " over regressor rows j = " +
                std::to_string(first_row) + ".." + std::to_string(last_row) +
                (detail.empty() ? std::string{} : ": " + detail)),
      order_(order),
      first_row_(first_row),
      last_row_(last_row) {}

std::string_view to_string(Method method) noexcept {
    return method == Method::PlugIn ? "plug-in" : "direct";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
    if (text == "plug-in" || text == "plugin" || text == "1") return Method::PlugIn;
    if (text == "direct" || text == "2") return Method::Direct;
    return std::nullopt;
}

std::string to_string(const PredictorSpec& spec) {
    return "(" + std::to_string(spec.order) + "," + std::to_string(method_index(spec.method)) + ")";
}

void CompensatedSum::add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
        compensation_ += (sum_ - t) + value;
    } else {
        compensation_ += (value - t) + sum_;
    }
    sum_ = t;
}

Eigen::MatrixXd companion_matrix(std::span<const double> coeffs) {
    return companion_matrix(coeffs, coeffs.size());
}

Eigen::MatrixXd companion_matrix(std::span<const double> coeffs, std::size_t dim) {
    if (dim == 0) throw InvalidArgument("companion matrix needs dimension >= 1");
    const auto k = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < dim && i < coeffs.size(); ++i) {
        a(static_cast<Eigen::Index>(i), 0) = coeffs[i];
    }
    if (k > 1) a.block(0, 1, k - 1, k - 1).setIdentity();
    return a;
}

Eigen::VectorXd companion_times(const Eigen::VectorXd& first_column, const Eigen::VectorXd& v) {
    const Eigen::Index k = v.size();
    Eigen::VectorXd out = v(0) * first_column;
    for (Eigen::Index i = 0; i + 1 < k; ++i) out(i) += v(i + 1);
    return out;
}

Eigen::MatrixXd weighted_power_sum(const Eigen::MatrixXd& s, std::span<const double> weights,
                                   std::size_t h) {
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    if (weights.size() < h) throw InvalidArgument("need h weights for the power sum");
    const Eigen::Index k = s.rows();
    Eigen::MatrixXd m = weights[0] * Eigen::MatrixXd::Identity(k, k);
    for (std::size_t j = 1; j < h; ++j) {
        m = m * s;
        m.diagonal().array() += weights[j];
    }
    return m;
}

std::vector<double> impulse_response(std::span<const double> coeffs, std::size_t length) {
    std::vector<double> w(length + 1, 0.0);
    w[0] = 1.0;
    for (std::size_t j = 1; j <= length; ++j) {
        double acc = 0.0;
        const std::size_t lmax = std::min(j, coeffs.size());
        for (std::size_t l = 1; l <= lmax; ++l) acc += coeffs[l - 1] * w[j - l];
        w[j] = acc;
    }
    return w;
}

double companion_spectral_radius(std::span<const double> coeffs) {
    if (coeffs.empty()) return 0.0;
    const Eigen::MatrixXd a = companion_matrix(coeffs);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable_polynomial(std::span<const double> coeffs) {
    if (coeffs.empty()) return true;
    constexpr int kPoints = 720;
    for (int m = 0; m < kPoints; ++m) {
        const double theta = 2.0 * std::numbers::pi * m / kPoints;
        const std::complex<double> z = std::polar(1.0, theta);
        std::complex<double> value = 1.0;
        std::complex<double> power = 1.0;
        for (double c : coeffs) {
            power *= z;
            value -= c * power;
        }
        if (std::abs(value) <= 1e-8) return false;
    }
    return companion_spectral_radius(coeffs) < 1.0 - 1e-8;
}

std::optional<Eigen::LDLT<Eigen::MatrixXd>> factor_gram(const Eigen::MatrixXd& gram) {
    if (gram.rows() == 0 || !gram.allFinite()) return std::nullopt;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() >= kSingularRcond)) return std::nullopt;
    return ldlt;
}

bool gram_is_invertible(const Eigen::MatrixXd& gram) { return factor_gram(gram).has_value(); }

}  // namespace arsel
