#include "arsel/model.hpp"

#include "arsel/errors.hpp"
#include "arsel/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace arsel {

namespace {

constexpr std::size_t kMaxTruncation = 100000;
constexpr double kTailTolerance = 1e-14;

double unit_root_residual(std::span<const double> levels) {
    return 1.0 - std::accumulate(levels.begin(), levels.end(), 0.0);
}

double unit_root_scale(std::span<const double> levels) {
    double s = 1.0;
    for (double a : levels) s += std::abs(a);
    return s;
}

void check_levels(std::span<const double> levels) {
    if (levels.empty()) throw InvalidArgument("levels coefficients must be nonempty");
    for (double a : levels) {
        if (!std::isfinite(a)) throw InvalidArgument("levels coefficients must be finite");
    }
    if (levels.back() == 0.0) throw InvalidArgument("last levels coefficient must be nonzero");
}

void check_sigma2(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw InvalidArgument("innovation variance must be positive and finite");
    }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!std::isfinite(values_[t])) {
            throw InvalidArgument("non-finite observation at t = " + std::to_string(t + 1));
        }
    }
}

double TimeSeries::operator[](std::ptrdiff_t t) const {
    if (t <= 0) return 0.0;
    return values_.at(static_cast<std::size_t>(t - 1));
}

Eigen::VectorXd TimeSeries::regressor(std::size_t j, std::size_t k) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        x(static_cast<Eigen::Index>(i)) = (*this)[static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i)];
    }
    return x;
}

TimeSeries difference(const TimeSeries& series) {
    std::vector<double> s(series.size());
    const auto x = series.values();
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = x[t] - (t == 0 ? 0.0 : x[t - 1]);
    return TimeSeries(std::move(s));
}

std::vector<double> deflate_unit_root(std::span<const double> levels, double tol) {
    check_levels(levels);
    const double residual = unit_root_residual(levels);
    const double scale = unit_root_scale(levels);
    if (std::abs(residual) > tol * scale) {
        throw NotUnitRoot("A(1) = " + std::to_string(residual) + " is not zero");
    }
    // Synthetic division of A(z) by (1 - z): quotient coefficients are the
    // partial sums of A's coefficients (1, -a_1, -a_2, ...).
    const std::size_t p = levels.size() - 1;
    std::vector<double> alpha(p);
    double partial = 1.0;
    for (std::size_t i = 0; i < p; ++i) {
        partial -= levels[i];
        alpha[i] = -partial;
    }

    const std::vector<double> rebuilt = integrate_unit_root(alpha);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::abs(rebuilt[i] - levels[i]) > tol * scale) {
            throw NotUnitRoot("(1 - z) alpha(z) does not reproduce the levels polynomial");
        }
    }
    if (!is_stable_polynomial(alpha)) {
        throw UnstableStationaryPart("alpha(z) has a root on or inside the unit circle");
    }
    return alpha;
}

std::vector<double> integrate_unit_root(std::span<const double> alpha) {
    const std::size_t p = alpha.size();
    std::vector<double> levels(p + 1);
    double prev = -1.0;  // coefficient of z^0 in -alpha(z)
    for (std::size_t i = 0; i < p; ++i) {
        levels[i] = alpha[i] - prev;
        prev = alpha[i];
    }
    levels[p] = -prev;
    return levels;
}

ArModel ArModel::unit_root(std::vector<double> levels, double sigma2, double tol) {
    check_sigma2(sigma2);
    std::vector<double> alpha = deflate_unit_root(levels, tol);
    return ArModel(ModelKind::UnitRoot, std::move(levels), std::move(alpha), sigma2);
}

ArModel ArModel::stationary(std::vector<double> levels, double sigma2) {
    check_sigma2(sigma2);
    check_levels(levels);
    if (!is_stable_polynomial(levels)) {
        throw UnstableStationaryPart("A(z) has a root on or inside the unit circle");
    }
    return ArModel(ModelKind::Stationary, std::move(levels), {}, sigma2);
}

ArModel ArModel::classify(std::vector<double> levels, double sigma2) {
    check_levels(levels);
    if (std::abs(unit_root_residual(levels)) <= kUnitRootTolerance * unit_root_scale(levels)) {
        return unit_root(std::move(levels), sigma2);
    }
    return stationary(std::move(levels), sigma2);
}

DirectCoefficients direct_coefficients(std::span<const double> levels, std::size_t h) {
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    DirectCoefficients out;
    out.horizon = h;
    out.coeffs.assign(levels.begin(), levels.end());
    if (h > 1) {
        const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(levels.data(),
                                                                    static_cast<Eigen::Index>(levels.size()));
        Eigen::VectorXd v = a;
        for (std::size_t step = 1; step < h; ++step) v = companion_times(a, v);
        out.coeffs.assign(v.data(), v.data() + v.size());
    }
    double norm = 0.0;
    for (double c : out.coeffs) norm = std::max(norm, std::abs(c));
    const double zero = kDirectZeroTolerance * std::max(1.0, norm);
    out.minimal_order = 0;
    for (std::size_t j = out.coeffs.size(); j > 0; --j) {
        if (std::abs(out.coeffs[j - 1]) > zero) {
            out.minimal_order = j;
            break;
        }
    }
    return out;
}

DirectCoefficients direct_coefficients(const ArModel& model, std::size_t h) {
    return direct_coefficients(model.levels(), h);
}

std::size_t default_truncation(std::span<const double> coeffs) {
    if (coeffs.empty()) return 0;
    const double rho = companion_spectral_radius(coeffs);
    double scale = 1.0;
    for (double c : coeffs) scale += std::abs(c);

    std::size_t j = coeffs.size();
    if (rho > 0.0 && rho < 1.0) {
        const double needed = std::log(kTailTolerance / scale) / std::log(rho);
        if (needed > static_cast<double>(kMaxTruncation)) return kMaxTruncation;
        j = std::max(j, static_cast<std::size_t>(std::ceil(needed)));
    } else if (rho >= 1.0) {
        return kMaxTruncation;
    }

    // The bound ignores polynomial factors from repeated roots; extend until
    // the last q weights are negligible relative to the largest one.
    const std::size_t q = coeffs.size();
    while (j < kMaxTruncation) {
        const std::vector<double> w = impulse_response(coeffs, j);
        double peak = 0.0;
        for (double x : w) peak = std::max(peak, std::abs(x));
        double tail = 0.0;
        for (std::size_t i = w.size() - std::min(q, w.size()); i < w.size(); ++i) {
            tail = std::max(tail, std::abs(w[i]));
        }
        if (tail <= kTailTolerance * peak) break;
        j = std::min(kMaxTruncation, 2 * j);
    }
    return j;
}

MaWeights ma_weights(const ArModel& model, std::size_t truncation) {
    if (!model.has_unit_root()) {
        throw InvalidArgument("c/b weights are defined for unit-root models only");
    }
    MaWeights w;
    w.c = impulse_response(model.stationary_part(), truncation);
    w.b.resize(w.c.size());
    std::partial_sum(w.c.begin(), w.c.end(), w.b.begin());
    return w;
}

MaWeights ma_weights(const ArModel& model) {
    return ma_weights(model, default_truncation(model.stationary_part()));
}

std::vector<double> forecast_weights(const ArModel& model, std::size_t truncation) {
    if (model.has_unit_root()) return ma_weights(model, truncation).b;
    return impulse_response(model.levels(), truncation);
}

double sigma_h_squared(const ArModel& model, std::size_t h) {
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    const std::vector<double> b = forecast_weights(model, h - 1);
    double s = 0.0;
    for (double x : b) s += x * x;
    return model.sigma2() * s;
}

}  // namespace arsel
