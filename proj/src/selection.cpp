#include "arsel/selection.hpp"

#include "arsel/errors.hpp"
#include "arsel/estimation.hpp"
#include "arsel/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>

namespace arsel {

namespace {

void check_candidate(std::size_t k, std::size_t h, std::size_t max_order) {
    if (max_order == 0) throw InvalidArgument("maximal order K must be >= 1");
    if (k == 0 || k > max_order) {
        throw InvalidArgument("candidate order " + std::to_string(k) + " outside 1.." +
                              std::to_string(max_order));
    }
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
}

// Smallest index of the minimum; later equal values never displace it.
std::size_t argmin_from(const std::vector<double>& values, std::size_t first) {
    std::size_t best = first;
    for (std::size_t k = first + 1; k < values.size(); ++k) {
        if (values[k] < values[best]) best = k;
    }
    return best;
}

// Values are indexed by order k (entry 0 unused).
SelectionOutcome three_steps(const std::vector<double>& step1, const std::vector<double>& direct,
                             const std::vector<double>& plugin, std::size_t h, std::size_t max_order) {
    SelectionOutcome out;
    out.max_order = max_order;
    out.step1_order = argmin_from(step1, 1);
    out.direct_order = argmin_from(direct, 1);
    out.plugin_order = argmin_from(plugin, out.step1_order);
    out.direct_value = direct[out.direct_order];
    out.plugin_value = plugin[out.plugin_order];
    if (out.direct_value > out.plugin_value) {
        out.choice = {out.plugin_order, Method::PlugIn, h};
    } else {
        out.choice = {out.direct_order, Method::Direct, h};
    }
    out.scores.reserve(3 * max_order);
    for (std::size_t k = 1; k <= max_order; ++k) out.scores.push_back({{k, Method::Direct, 1}, step1[k]});
    for (std::size_t k = 1; k <= max_order; ++k) out.scores.push_back({{k, Method::Direct, h}, direct[k]});
    for (std::size_t k = 1; k <= max_order; ++k) out.scores.push_back({{k, Method::PlugIn, h}, plugin[k]});
    return out;
}

/// Quantities shared by every candidate of the penalized criteria.
struct PenaltyContext {
    const TimeSeries* series;
    std::size_t h;
    std::size_t max_order;
    double sigma_tilde2;
    std::vector<double> b_hat;  // b_0..b_{h-1} from the order-K one-step fit
};

PenaltyContext make_context(const TimeSeries& series, std::size_t h, std::size_t max_order) {
    const std::size_t n = series.size();
    const FittedCoefficients full = fit_one_step(series, max_order, n);
    PenaltyContext ctx{&series, h, max_order, residual_mse(series, full, max_order), {}};
    ctx.b_hat = fitted_ma_weights(full, h - 1);
    return ctx;
}

Eigen::LDLT<Eigen::MatrixXd> factor_window(const TimeSeries& series, std::size_t k, std::size_t last,
                                           Eigen::MatrixXd& gram) {
    gram = gram_matrix(series, k, k, last);
    auto ldlt = factor_gram(gram);
    if (!ldlt) {
        throw SingularDesign(k, static_cast<std::ptrdiff_t>(k), static_cast<std::ptrdiff_t>(last),
                             "penalty Gram matrix below the invertibility threshold");
    }
    return *ldlt;
}

void check_penalty_window(const TimeSeries& series, std::size_t k, std::size_t h, std::size_t max_order) {
    check_candidate(k, h, max_order);
    const std::size_t n = series.size();
    if (n < h + max_order + 1) {
        throw WindowTooShort("criterion window needs n - h - K >= 1 (n = " + std::to_string(n) + ")");
    }
}

CriterionTerms pmic_with(const PenaltyContext& ctx, std::size_t k, std::size_t h, PenaltyWeight weight) {
    const TimeSeries& series = *ctx.series;
    check_penalty_window(series, k, h, ctx.max_order);
    const std::size_t n = series.size();

    const FittedCoefficients one = fit_one_step(series, k, n);
    CriterionTerms t;
    t.residual_mse = residual_mse(series, plug_in_multi(one, h), ctx.max_order);
    t.sigma_tilde2 = ctx.sigma_tilde2;
    t.weight = weight.at(n);

    Eigen::MatrixXd g;
    const auto ldlt = factor_window(series, k, n - h, g);
    if (h == 1) {
        // L = I: the trace is exactly k.
        t.trace = static_cast<double>(k);
        return t;
    }
    const std::vector<double> a(one.coeffs.data(), one.coeffs.data() + one.coeffs.size());
    const Eigen::MatrixXd l = weighted_power_sum(companion_matrix(a), ctx.b_hat, h);
    const Eigen::MatrixXd g_inv_lt = ldlt.solve(l.transpose());
    t.trace = (g * l * g_inv_lt).trace();
    return t;
}

CriterionTerms dmic_with(const PenaltyContext& ctx, std::size_t k, std::size_t h, PenaltyWeight weight) {
    const TimeSeries& series = *ctx.series;
    check_penalty_window(series, k, h, ctx.max_order);
    const std::size_t n = series.size();
    if (n + 1 < 2 * h + k) {
        throw WindowTooShort("DMIC z-window needs n >= 2h - 1 + k (n = " + std::to_string(n) + ")");
    }

    CriterionTerms t;
    t.residual_mse = residual_mse(series, fit_direct(series, k, h, n), ctx.max_order);
    t.sigma_tilde2 = ctx.sigma_tilde2;
    t.weight = weight.at(n);

    Eigen::MatrixXd g;
    const auto ldlt = factor_window(series, k, n - h, g);
    if (h == 1) {
        // z_j = x_j over the same window as G.
        t.trace = static_cast<double>(k);
        return t;
    }
    const auto d = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd zz = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd z(d);
    for (std::size_t j = k; j + 2 * h <= n + 1; ++j) {
        z.setZero();
        for (std::size_t i = 0; i < h; ++i) z += ctx.b_hat[i] * series.regressor(j + i, k);
        zz.noalias() += z * z.transpose();
    }
    t.trace = ldlt.solve(zz).trace();
    return t;
}

std::string format_multiplier(double m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

}  // namespace

std::string PenaltyWeight::label() const {
    if (multiplier == 1.0) return "A";
    if (multiplier == 2.0) return "B";
    if (multiplier == 3.0) return "C";
    return format_multiplier(multiplier);
}

std::optional<PenaltyWeight> parse_penalty(std::string_view text) noexcept {
    if (text.size() != 1) return std::nullopt;
    switch (std::toupper(static_cast<unsigned char>(text.front()))) {
        case 'A': return PenaltyWeight::procedure_a();
        case 'B': return PenaltyWeight::procedure_b();
        case 'C': return PenaltyWeight::procedure_c();
        default: return std::nullopt;
    }
}

std::optional<double> SelectionOutcome::score(std::size_t k, Method method, std::size_t h) const {
    const PredictorSpec key{k, method, h};
    const auto it = std::find_if(scores.begin(), scores.end(),
                                 [&](const CandidateScore& s) { return s.spec == key; });
    if (it == scores.end()) return std::nullopt;
    return it->value;
}

std::size_t min_start_index(const TimeSeries& series, std::size_t max_order, std::size_t h) {
    if (max_order == 0) throw InvalidArgument("maximal order K must be >= 1");
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    const std::size_t n = series.size();
    const std::size_t first = 2 * max_order + h - 1;
    if (n < h || first > n - h) {
        throw SeriesTooShort("series of length " + std::to_string(n) + " too short for K = " +
                             std::to_string(max_order) + ", h = " + std::to_string(h));
    }
    GramAccumulator one_step(max_order);
    GramAccumulator direct(max_order);
    // Rows available at i = first, minus the newest of each.
    for (std::size_t j = max_order; j + 1 < first; ++j) one_step.add_row(series, j, 1);
    for (std::size_t j = max_order; j + h < first; ++j) direct.add_row(series, j, h);
    for (std::size_t i = first; i + h <= n; ++i) {
        one_step.add_row(series, i - 1, 1);
        direct.add_row(series, i - h, h);
        if (one_step.solvable() && direct.solvable()) return i;
    }
    throw SeriesTooShort("no start index with invertible order-" + std::to_string(max_order) +
                         " Gram matrices up to i = n - h = " + std::to_string(n - h));
}

double ape(const TimeSeries& series, std::size_t k, std::size_t h, Method method, std::size_t max_order) {
    check_candidate(k, h, max_order);
    return ape_from(series, k, h, method, min_start_index(series, max_order, h));
}

double ape_from(const TimeSeries& series, std::size_t k, std::size_t h, Method method,
                std::size_t start_index) {
    if (k == 0) throw InvalidArgument("order must be >= 1");
    if (h == 0) throw InvalidArgument("horizon must be >= 1");
    const std::size_t n = series.size();
    if (start_index + h > n) {
        throw SeriesTooShort("start index " + std::to_string(start_index) + " leaves no h-step errors");
    }
    const std::size_t lead = method == Method::PlugIn ? 1 : h;
    if (start_index < k + lead) {
        throw InvalidArgument("start index " + std::to_string(start_index) + " precedes the first row");
    }
    GramAccumulator acc(k);
    for (std::size_t j = k; j + lead < start_index; ++j) acc.add_row(series, j, lead);

    CompensatedSum total;
    for (std::size_t i = start_index; i + h <= n; ++i) {
        acc.add_row(series, i - lead, lead);
        Eigen::VectorXd coeffs;
        try {
            coeffs = acc.solve();
        } catch (const SingularDesign& e) {
            throw SingularDesign(k, e.first_row(), e.last_row(),
                                 std::string(e.what()) + " at sample end i = " + std::to_string(i));
        }
        if (method == Method::PlugIn) {
            const Eigen::VectorXd one = coeffs;
            for (std::size_t step = 1; step < h; ++step) coeffs = companion_times(one, coeffs);
        }
        const double err = series[static_cast<std::ptrdiff_t>(i + h)] - coeffs.dot(series.regressor(i, k));
        total += err * err;
    }
    return total.value();
}

SelectionOutcome procedure_I(const TimeSeries& series, std::size_t h, std::size_t max_order) {
    check_candidate(1, h, max_order);
    const std::size_t m1 = min_start_index(series, max_order, 1);
    const std::size_t mh = min_start_index(series, max_order, h);
    std::vector<double> step1(max_order + 1, 0.0);
    std::vector<double> direct(max_order + 1, 0.0);
    std::vector<double> plugin(max_order + 1, 0.0);
    for (std::size_t k = 1; k <= max_order; ++k) {
        step1[k] = ape_from(series, k, 1, Method::Direct, m1);
        direct[k] = h == 1 ? step1[k] : ape_from(series, k, h, Method::Direct, mh);
        plugin[k] = ape_from(series, k, h, Method::PlugIn, mh);
    }
    SelectionOutcome out = three_steps(step1, direct, plugin, h, max_order);
    out.start_index_one_step = m1;
    out.start_index = mh;
    return out;
}

CriterionTerms pmic_terms(const TimeSeries& series, std::size_t k, std::size_t h, std::size_t max_order,
                          PenaltyWeight weight) {
    check_penalty_window(series, k, h, max_order);
    return pmic_with(make_context(series, h, max_order), k, h, weight);
}

CriterionTerms dmic_terms(const TimeSeries& series, std::size_t k, std::size_t h, std::size_t max_order,
                          PenaltyWeight weight) {
    check_penalty_window(series, k, h, max_order);
    return dmic_with(make_context(series, h, max_order), k, h, weight);
}

double pmic(const TimeSeries& series, std::size_t k, std::size_t h, std::size_t max_order,
            PenaltyWeight weight) {
    return pmic_terms(series, k, h, max_order, weight).value();
}

double dmic(const TimeSeries& series, std::size_t k, std::size_t h, std::size_t max_order,
            PenaltyWeight weight) {
    return dmic_terms(series, k, h, max_order, weight).value();
}

SelectionOutcome procedure_II(const TimeSeries& series, std::size_t h, std::size_t max_order,
                              PenaltyWeight weight) {
    const PenaltyWeight one[] = {weight};
    return procedure_II(series, h, max_order, std::span<const PenaltyWeight>(one)).front();
}

std::vector<SelectionOutcome> procedure_II(const TimeSeries& series, std::size_t h, std::size_t max_order,
                                           std::span<const PenaltyWeight> weights) {
    check_candidate(1, h, max_order);
    // Same length requirement as the accumulated-error procedure: 2K + h - 1 <= n - h.
    if (series.size() + 1 < 2 * max_order + 2 * h) {
        throw SeriesTooShort("series of length " + std::to_string(series.size()) + " too short for K = " +
                             std::to_string(max_order) + ", h = " + std::to_string(h));
    }
    const PenaltyContext ctx = make_context(series, h, max_order);
    // Terms do not depend on C_n beyond the weight field; evaluate once with a unit weight.
    const PenaltyWeight unit{1.0};
    std::vector<CriterionTerms> step1(max_order + 1);
    std::vector<CriterionTerms> direct(max_order + 1);
    std::vector<CriterionTerms> plugin(max_order + 1);
    for (std::size_t k = 1; k <= max_order; ++k) {
        step1[k] = dmic_with(ctx, k, 1, unit);
        direct[k] = h == 1 ? step1[k] : dmic_with(ctx, k, h, unit);
        plugin[k] = pmic_with(ctx, k, h, unit);
    }

    std::vector<SelectionOutcome> outcomes;
    outcomes.reserve(weights.size());
    for (const PenaltyWeight& w : weights) {
        const double cn = w.at(series.size());
        auto values = [&](const std::vector<CriterionTerms>& terms) {
            std::vector<double> v(terms.size(), 0.0);
            for (std::size_t k = 1; k < terms.size(); ++k) {
                CriterionTerms t = terms[k];
                t.weight = cn;
                v[k] = t.value();
            }
            return v;
        };
        SelectionOutcome out = three_steps(values(step1), values(direct), values(plugin), h, max_order);
        out.penalty = w;
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

}  // namespace arsel
