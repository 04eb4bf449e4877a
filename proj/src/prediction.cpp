#include "arsel/prediction.hpp"

#include "arsel/errors.hpp"

#include <deque>
#include <string>

namespace arsel {

namespace {

void check_history(const TimeSeries& series, std::size_t k, std::size_t origin) {
    if (origin > series.size()) {
        throw InvalidArgument("forecast origin " + std::to_string(origin) + " beyond the series end");
    }
    if (origin < k) {
        throw InsufficientHistory("origin " + std::to_string(origin) + " has fewer than k = " +
                                  std::to_string(k) + " observations");
    }
}

}  // namespace

Forecast predict(const TimeSeries& series, const FittedCoefficients& fitted, std::size_t origin) {
    check_history(series, fitted.order, origin);
    if (static_cast<std::size_t>(fitted.coeffs.size()) != fitted.order) {
        throw InvalidArgument("coefficient vector length differs from the order");
    }
    const double value = fitted.coeffs.dot(series.regressor(origin, fitted.order));
    return Forecast{value, origin, fitted.horizon, fitted.spec()};
}

Forecast predict(const TimeSeries& series, const FittedCoefficients& fitted) {
    return predict(series, fitted, series.size());
}

double predict_iterated(const TimeSeries& series, const FittedCoefficients& one_step, std::size_t h,
                        std::size_t origin) {
    const std::size_t k = one_step.order;
    check_history(series, k, origin);
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    // Most recent value first.
    std::deque<double> window;
    for (std::size_t i = 0; i < k; ++i) window.push_back(series[static_cast<std::ptrdiff_t>(origin - i)]);
    double next = 0.0;
    for (std::size_t step = 0; step < h; ++step) {
        next = 0.0;
        for (std::size_t i = 0; i < k; ++i) next += one_step.coeffs(static_cast<Eigen::Index>(i)) * window[i];
        window.push_front(next);
        window.pop_back();
    }
    return next;
}

}  // namespace arsel
