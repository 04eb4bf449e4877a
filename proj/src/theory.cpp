#include "arsel/theory.hpp"

#include "arsel/errors.hpp"
#include "arsel/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace arsel {

namespace {

/// Coefficients whose MA expansion drives the stationary component.
std::span<const double> stationary_coefficients(const ArModel& model) {
    return model.has_unit_root() ? std::span<const double>(model.stationary_part())
                                 : std::span<const double>(model.levels());
}

Eigen::LLT<Eigen::MatrixXd> factor_gamma(const Eigen::MatrixXd& gamma) {
    Eigen::LLT<Eigen::MatrixXd> llt(gamma);
    if (llt.info() != Eigen::Success) {
        throw SingularGamma("autocovariance matrix of dimension " + std::to_string(gamma.rows()) +
                            " is not positive definite");
    }
    return llt;
}

/// tr(G M G^{-1} M') with M = sum_{j<h} w_j S^{h-1-j}.
double plugin_trace(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& s,
                    std::span<const double> weights, std::size_t h) {
    const Eigen::MatrixXd m = weighted_power_sum(s, weights, h);
    const auto llt = factor_gamma(gamma);
    const Eigen::MatrixXd x = llt.solve(m.transpose());
    return (gamma * m * x).trace();
}

/// tr(G^{-1} C) with C = sum_{j,l<h} w_j w_l Gamma^{(j-l)}, Gamma^{(m)}(u,v) = gamma(m - u + v).
double direct_trace(const AutocovarianceTable& acov, std::span<const double> weights,
                    std::size_t h, std::size_t dim) {
    const auto hh = static_cast<std::ptrdiff_t>(h);
    std::vector<double> lag_weight(2 * h - 1, 0.0);  // index m + h - 1
    for (std::ptrdiff_t j = 0; j < hh; ++j) {
        for (std::ptrdiff_t l = 0; l < hh; ++l) {
            lag_weight[static_cast<std::size_t>(j - l + hh - 1)] += weights[j] * weights[l];
        }
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd cov(d, d);
    for (Eigen::Index u = 0; u < d; ++u) {
        for (Eigen::Index v = 0; v < d; ++v) {
            double acc = 0.0;
            for (std::ptrdiff_t m = -(hh - 1); m <= hh - 1; ++m) {
                acc += lag_weight[static_cast<std::size_t>(m + hh - 1)] * acov.at(m - u + v);
            }
            cov(u, v) = acc;
        }
    }
    const auto llt = factor_gamma(acov.toeplitz(dim));
    return llt.solve(cov).trace();
}

void require_unit_root(const ArModel& model, const char* what) {
    if (!model.has_unit_root()) {
        throw InvalidArgument(std::string(what) + " requires a unit-root model");
    }
}

void require_order(std::size_t h, std::size_t k) {
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    if (k == 0) throw InvalidArgument("order must be >= 1");
}

double unit_root_term(const ArModel& model, std::size_t h) {
    const std::vector<double> b = ma_weights(model, h - 1).b;
    double sum = 0.0;
    for (double x : b) sum += x;
    return 2.0 * model.sigma2() * sum * sum;
}

}  // namespace

double AutocovarianceTable::at(std::ptrdiff_t m) const {
    const auto lag = static_cast<std::size_t>(m < 0 ? -m : m);
    if (lag >= gamma.size()) {
        throw InvalidArgument("autocovariance lag " + std::to_string(lag) + " not tabulated");
    }
    return gamma[lag];
}

Eigen::MatrixXd AutocovarianceTable::toeplitz(std::size_t dim) const {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index u = 0; u < d; ++u) {
        for (Eigen::Index v = 0; v < d; ++v) g(u, v) = at(u - v);
    }
    return g;
}

AutocovarianceTable autocovariances(const ArModel& model, std::size_t max_lag) {
    const std::span<const double> coeffs = stationary_coefficients(model);
    const std::size_t truncation = default_truncation(coeffs) + max_lag;
    const std::vector<double> psi = impulse_response(coeffs, truncation);

    AutocovarianceTable table;
    table.gamma.resize(max_lag + 1);
    for (std::size_t m = 0; m <= max_lag; ++m) {
        CompensatedSum acc;
        for (std::size_t i = 0; i + m < psi.size(); ++i) acc += psi[i] * psi[i + m];
        table.gamma[m] = model.sigma2() * acc.value();
    }
    return table;
}

Eigen::MatrixXd m_h_matrix(const ArModel& model, std::size_t h, std::size_t dim) {
    require_unit_root(model, "M_h");
    if (h == 0 || dim == 0) throw InvalidArgument("M_h needs h >= 1 and dim >= 1");
    const std::vector<double> b = ma_weights(model, h - 1).b;
    return weighted_power_sum(companion_matrix(model.stationary_part(), dim), b, h);
}

double f1h(const ArModel& model, std::size_t h, std::size_t k) {
    require_unit_root(model, "f_{1,h}");
    require_order(h, k);
    if (k == 1) return 0.0;
    const std::size_t dim = k - 1;
    const std::vector<double> b = ma_weights(model, h - 1).b;
    const AutocovarianceTable acov = autocovariances(model, dim - 1);
    const Eigen::MatrixXd s = companion_matrix(model.stationary_part(), dim);
    return plugin_trace(acov.toeplitz(dim), s, b, h) * model.sigma2();
}

double f2h(const ArModel& model, std::size_t h, std::size_t k) {
    require_unit_root(model, "f_{2,h}");
    require_order(h, k);
    if (k == 1) return 0.0;
    const std::size_t dim = k - 1;
    const std::vector<double> b = ma_weights(model, h - 1).b;
    const AutocovarianceTable acov = autocovariances(model, dim + h - 2);
    return direct_trace(acov, b, h, dim) * model.sigma2();
}

double closed_form_h2(const ArModel& model, std::size_t k, Method method) {
    require_unit_root(model, "closed form");
    if (k < 2) throw InvalidArgument("closed form needs k >= 2");
    const auto& alpha = model.stationary_part();
    const auto alpha_at = [&](std::size_t j) { return j >= 1 && j <= alpha.size() ? alpha[j - 1] : 0.0; };
    const double a1 = alpha_at(1);
    const double b1 = 1.0 + a1;
    const double km1 = static_cast<double>(k - 1);
    if (method == Method::PlugIn) {
        const double ak = alpha_at(k - 1);
        return ((km1 - 1.0) + ak * ak + 2.0 * a1 * b1 + b1 * b1 * km1) * model.sigma2();
    }
    return (km1 * (1.0 + b1 * b1) + 2.0 * a1 * b1) * model.sigma2();
}

TheoreticalLoss loss(const ArModel& model, std::size_t h, std::size_t k, Method method) {
    if (!model.has_unit_root()) return loss_stationary(model, h, k, method);
    require_order(h, k);
    TheoreticalLoss out{std::numeric_limits<double>::infinity(), k, method, h};
    const std::size_t minimal = method == Method::PlugIn
                                    ? model.order()
                                    : direct_coefficients(model, h).minimal_order;
    if (k < minimal) return out;
    const double cost = method == Method::PlugIn ? f1h(model, h, k) : f2h(model, h, k);
    out.value = unit_root_term(model, h) + cost;
    return out;
}

TheoreticalLoss loss_stationary(const ArModel& model, std::size_t h, std::size_t k, Method method) {
    if (model.has_unit_root()) throw InvalidArgument("loss_stationary requires a stationary model");
    require_order(h, k);
    TheoreticalLoss out{std::numeric_limits<double>::infinity(), k, method, h};
    const std::vector<double> psi = impulse_response(model.levels(), h - 1);
    if (method == Method::PlugIn) {
        if (k < model.order()) return out;
        const AutocovarianceTable acov = autocovariances(model, k - 1);
        const Eigen::MatrixXd a = companion_matrix(model.levels(), k);
        out.value = plugin_trace(acov.toeplitz(k), a, psi, h) * model.sigma2();
    } else {
        if (k < direct_coefficients(model, h).minimal_order) return out;
        const AutocovarianceTable acov = autocovariances(model, k + h - 2);
        out.value = direct_trace(acov, psi, h, k) * model.sigma2();
    }
    return out;
}

std::vector<PredictorSpec> best_combinations(const ArModel& model, std::size_t h,
                                             std::size_t max_order) {
    if (max_order == 0) throw InvalidArgument("max order must be >= 1");
    std::vector<TheoreticalLoss> losses;
    for (std::size_t k = 1; k <= max_order; ++k) {
        for (Method m : {Method::PlugIn, Method::Direct}) losses.push_back(loss(model, h, k, m));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : losses) best = std::min(best, l.value);

    std::vector<PredictorSpec> out;
    if (!std::isfinite(best)) return out;
    const double window = 1e-10 * std::max(std::abs(best), std::numeric_limits<double>::min());
    for (const auto& l : losses) {
        if (l.finite() && l.value - best <= window) out.push_back({l.order, l.method, h});
    }
    return out;
}

std::vector<double> factored_levels(double a1) {
    const double a2 = a1 * a1 - a1 + 1.0;
    return {1.0 - a1, a1 - a2, a2 * (1.0 - a1), a1 * a2};
}

double table1_diff(double a1) {
    if (!(a1 > 0.0 && a1 < 1.0)) throw InvalidArgument("a1 must lie in (0, 1)");
    const ArModel model = ArModel::unit_root(factored_levels(a1), 1.0);
    return f2h(model, 3, 3) - f1h(model, 3, 4);
}

}  // namespace arsel
