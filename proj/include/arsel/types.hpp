#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace arsel {

/// Plug-in iterates the fitted one-step model; direct regresses x_{t+h} on x_t(k).
enum class Method { PlugIn = 1, Direct = 2 };

[[nodiscard]] std::string_view to_string(Method method) noexcept;
[[nodiscard]] std::optional<Method> parse_method(std::string_view text) noexcept;

/// Index used in the literature's (k, j) notation: 1 = plug-in, 2 = direct.
[[nodiscard]] constexpr int method_index(Method method) noexcept {
    return static_cast<int>(method);
}

/// A candidate predictor: working order, prediction method and horizon.
struct PredictorSpec {
    std::size_t order = 1;
    Method method = Method::PlugIn;
    std::size_t horizon = 1;

    friend auto operator<=>(const PredictorSpec&, const PredictorSpec&) = default;
};

/// "(k,j)" with j = 1 for plug-in and 2 for direct.
[[nodiscard]] std::string to_string(const PredictorSpec& spec);

}  // namespace arsel
