#pragma once

#include "arsel/estimation.hpp"
#include "arsel/model.hpp"
#include "arsel/types.hpp"

#include <cstddef>

namespace arsel {

struct Forecast {
    double value = 0.0;
    std::size_t origin = 0;  // n: last observation used as regressor
    std::size_t horizon = 1;
    PredictorSpec spec;
};

/// x_n(k)' coeffs. @throws InsufficientHistory if origin < k
[[nodiscard]] Forecast predict(const TimeSeries& series, const FittedCoefficients& fitted,
                               std::size_t origin);

/// Forecast from the end of the series.
[[nodiscard]] Forecast predict(const TimeSeries& series, const FittedCoefficients& fitted);

/// Iterates the one-step fit h times, feeding forecasts back as pseudo-observations.
[[nodiscard]] double predict_iterated(const TimeSeries& series, const FittedCoefficients& one_step,
                                      std::size_t h, std::size_t origin);

}  // namespace arsel
