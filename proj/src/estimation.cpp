#include "arsel/estimation.hpp"

#include "arsel/errors.hpp"
#include "arsel/numeric.hpp"

#include <string>

namespace arsel {

namespace {

void check_order(std::size_t k) {
    if (k == 0) throw InvalidArgument("order must be >= 1");
}

void check_end(const TimeSeries& series, std::size_t i) {
    if (i > series.size()) {
        throw InvalidArgument("sample end " + std::to_string(i) + " exceeds series length " +
                              std::to_string(series.size()));
    }
}

FittedCoefficients fit_rows(const TimeSeries& series, std::size_t k, std::size_t lead,
                            std::size_t i, Method method) {
    check_order(k);
    check_end(series, i);
    if (lead == 0) throw InvalidArgument("horizon must be >= 1");
    const auto first = static_cast<std::ptrdiff_t>(k);
    const auto last = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(lead);
    if (last - first + 1 < static_cast<std::ptrdiff_t>(k)) {
        throw SingularDesign(k, first, last, "fewer than k regressor rows");
    }
    GramAccumulator acc(k);
    for (auto j = first; j <= last; ++j) acc.add_row(series, static_cast<std::size_t>(j), lead);
    return FittedCoefficients{acc.solve(), k, lead, method, i};
}

}  // namespace

GramAccumulator::GramAccumulator(std::size_t order)
    : order_(order),
      gram_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order), static_cast<Eigen::Index>(order))),
      cross_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(order))) {
    check_order(order);
}

void GramAccumulator::add_row(const TimeSeries& series, std::size_t j, std::size_t lead) {
    const auto target = static_cast<std::ptrdiff_t>(j + lead);
    add_row(series.regressor(j, order_), series[target]);
    if (count_ == 1) first_row_ = static_cast<std::ptrdiff_t>(j);
    last_row_ = static_cast<std::ptrdiff_t>(j);
}

void GramAccumulator::add_row(const Eigen::VectorXd& regressor, double target) {
    gram_.noalias() += regressor * regressor.transpose();
    cross_.noalias() += regressor * target;
    ++count_;
}

Eigen::VectorXd GramAccumulator::solve() const {
    if (count_ < order_) {
        throw SingularDesign(order_, first_row_, last_row_, "fewer than k regressor rows");
    }
    const auto ldlt = factor_gram(gram_);
    if (!ldlt) {
        throw SingularDesign(order_, first_row_, last_row_, "reciprocal condition below threshold");
    }
    return ldlt->solve(cross_);
}

bool GramAccumulator::solvable() const { return count_ >= order_ && gram_is_invertible(gram_); }

Eigen::MatrixXd gram_matrix(const TimeSeries& series, std::size_t k, std::size_t first,
                            std::size_t last) {
    check_order(k);
    const auto d = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = first; j <= last; ++j) {
        const Eigen::VectorXd x = series.regressor(j, k);
        g.noalias() += x * x.transpose();
    }
    return g;
}

FittedCoefficients fit_one_step(const TimeSeries& series, std::size_t k, std::size_t i) {
    return fit_rows(series, k, 1, i, Method::PlugIn);
}

FittedCoefficients plug_in_multi(const FittedCoefficients& one_step, std::size_t h) {
    if (one_step.method != Method::PlugIn || one_step.horizon != 1) {
        throw InvalidArgument("plug-in powering needs a one-step plug-in fit");
    }
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    FittedCoefficients out = one_step;
    out.horizon = h;
    for (std::size_t step = 1; step < h; ++step) out.coeffs = companion_times(one_step.coeffs, out.coeffs);
    return out;
}

FittedCoefficients fit_direct(const TimeSeries& series, std::size_t k, std::size_t h, std::size_t i) {
    return fit_rows(series, k, h, i, Method::Direct);
}

double residual_mse(const TimeSeries& series, const FittedCoefficients& fitted, std::size_t max_order) {
    const std::size_t k = fitted.order;
    const std::size_t h = fitted.horizon;
    const std::size_t n = fitted.sample_end;
    check_end(series, n);
    if (k > max_order) throw InvalidArgument("fitted order exceeds the maximal candidate order");
    if (n < h + max_order + 1) {
        throw WindowTooShort("residual window needs n - h - K >= 1 (n = " + std::to_string(n) +
                             ", h = " + std::to_string(h) + ", K = " + std::to_string(max_order) + ")");
    }
    CompensatedSum sum;
    for (std::size_t j = max_order; j + h <= n; ++j) {
        const double e = series[static_cast<std::ptrdiff_t>(j + h)] - fitted.coeffs.dot(series.regressor(j, k));
        sum += e * e;
    }
    return sum.value() / static_cast<double>(n - h - max_order);
}

std::vector<double> fitted_ma_weights(const FittedCoefficients& one_step, std::size_t length) {
    const std::vector<double> a(one_step.coeffs.data(), one_step.coeffs.data() + one_step.coeffs.size());
    return impulse_response(a, length);
}

}  // namespace arsel
