#include "oracles.hpp"

#include "arsel/errors.hpp"
#include "arsel/estimation.hpp"
#include "arsel/model.hpp"
#include "arsel/prediction.hpp"
#include "arsel/simulation.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace arsel;
using Catch::Approx;

namespace {

const std::vector<double> kM17{0.9, -0.81, 0.91};
const std::vector<double> kX{1.5, -0.5};

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

DgpSpec fixture(const std::vector<double>& levels, double noise_variance, double impulse = 0.0) {
    DgpSpec d;
    d.name = "fixture";
    d.levels = levels;
    d.unit_root = true;
    d.noise_variance = noise_variance;
    d.initial_impulse = impulse;
    return d;
}

}  // namespace

TEST_CASE("one-step fit", "[estimation]") {
    SECTION("noiseless AR(1) is identified exactly") {
        std::vector<double> x{1.0};
        for (int t = 1; t < 30; ++t) x.push_back(0.7 * x.back());
        const auto f = fit_one_step(TimeSeries(x), 1, x.size());
        CHECK(f.coeffs(0) == Approx(0.7).margin(1e-12));
        CHECK(f.method == Method::PlugIn);
        CHECK(f.horizon == 1);
    }
    SECTION("length-12 series against explicit elimination") {
        const auto x = simulate_path(fixture(kX, 1.0), 12, 42).values;
        const auto f = fit_one_step(TimeSeries(x), 2, 12);
        const auto o = oracle::least_squares(x, 2, 2, 11, 1);
        CHECK(f.coeffs(0) == Approx(o[0]).epsilon(1e-10));
        CHECK(f.coeffs(1) == Approx(o[1]).epsilon(1e-10));
    }
    SECTION("too few rows") {
        const TimeSeries s({1.0, 2.0, 0.5, 3.0, 1.0});
        CHECK_THROWS_AS(fit_one_step(s, 3, 5), SingularDesign);
        CHECK_THROWS_AS(fit_one_step(TimeSeries(std::vector<double>(40, 0.0)), 2, 40), SingularDesign);
        try {
            (void)fit_one_step(s, 3, 5);
        } catch (const SingularDesign& e) {
            CHECK(e.order() == 3);
            CHECK(e.first_row() == 3);
            CHECK(e.last_row() == 4);
        }
    }
}

TEST_CASE("plug-in powering", "[estimation]") {
    FittedCoefficients one{Eigen::Map<const Eigen::VectorXd>(kM17.data(), 3), 3, 1, Method::PlugIn, 100};
    const auto same = plug_in_multi(one, 1);
    CHECK(same.coeffs == one.coeffs);
    const auto three = plug_in_multi(one, 3);
    CHECK(three.coeffs(0) == Approx(0.181).margin(1e-12));
    CHECK(three.coeffs(1) == Approx(0.819).margin(1e-12));
    CHECK(three.coeffs(2) == Approx(0.0).margin(1e-12));
    CHECK(three.horizon == 3);

    FittedCoefficients x{Eigen::Map<const Eigen::VectorXd>(kX.data(), 2), 2, 1, Method::PlugIn, 100};
    const auto two = plug_in_multi(x, 2);
    CHECK(two.coeffs(0) == Approx(1.75).margin(1e-14));
    CHECK(two.coeffs(1) == Approx(-0.75).margin(1e-14));

    FittedCoefficients direct = x;
    direct.method = Method::Direct;
    CHECK_THROWS_AS(plug_in_multi(direct, 2), InvalidArgument);
}

TEST_CASE("direct fit", "[estimation]") {
    const auto x = simulate_path(fixture(kM17, 1.0), 200, 3).values;
    const TimeSeries s(x);
    SECTION("h = 1 coincides with the one-step fit") {
        for (std::size_t k = 1; k <= 5; ++k) {
            const auto a = fit_one_step(s, k, 150);
            const auto b = fit_direct(s, k, 1, 150);
            CHECK((a.coeffs - b.coeffs).norm() <= 1e-10);
        }
    }
    SECTION("explicit elimination oracle") {
        const auto f = fit_direct(s, 3, 4, 120);
        const auto o = oracle::least_squares(x, 3, 3, 116, 4);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(f.coeffs(static_cast<Eigen::Index>(i)) == Approx(o[i]).epsilon(1e-9));
        }
    }
    SECTION("noiseless M17 recovers the truncated direct coefficients") {
        const TimeSeries clean(simulate_path(fixture(kM17, 0.0, 1.0), 400, 1).values);
        const auto f = fit_direct(clean, 2, 3, 400);
        CHECK(f.coeffs(0) == Approx(0.181).margin(1e-6));
        CHECK(f.coeffs(1) == Approx(0.819).margin(1e-6));
    }
    SECTION("too short") { CHECK_THROWS_AS(fit_direct(s, 3, 5, 9), SingularDesign); }
}

TEST_CASE("plug-in and direct agree on noiseless data", "[estimation][property]") {
    for (const auto& levels : {kM17, kX, std::vector<double>{1.0}, std::vector<double>{0.0, 0.2, 0.8}}) {
        const TimeSeries clean(simulate_path(fixture(levels, 0.0, 1.0), 400, 1).values);
        const std::size_t k = levels.size();
        for (std::size_t h = 1; h <= 4; ++h) {
            const auto truth = direct_coefficients(levels, h);
            const auto plug = plug_in_multi(fit_one_step(clean, k, 400), h);
            for (std::size_t i = 0; i < k; ++i) {
                CHECK(plug.coeffs(static_cast<Eigen::Index>(i)) == Approx(truth.coeffs[i]).margin(1e-6));
            }
            const std::size_t kd = truth.minimal_order;
            const auto direct = fit_direct(clean, kd, h, 400);
            for (std::size_t i = 0; i < kd; ++i) {
                CHECK(direct.coeffs(static_cast<Eigen::Index>(i)) == Approx(truth.coeffs[i]).margin(1e-6));
            }
        }
    }
}

TEST_CASE("incremental accumulation matches fresh solves", "[estimation][property]") {
    const auto x = simulate_path(fixture(kM17, 25.0), 300, 17).values;
    const TimeSeries s(x);
    for (const std::size_t lead : {std::size_t{1}, std::size_t{3}}) {
        GramAccumulator acc(4);
        for (std::size_t i = 4 + lead; i <= 300; ++i) {
            acc.add_row(s, i - lead, lead);
            if (acc.count() < 8) continue;
            const Eigen::VectorXd inc = acc.solve();
            const auto fresh = lead == 1 ? fit_one_step(s, 4, i) : fit_direct(s, 4, lead, i);
            CHECK((inc - fresh.coeffs).lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(1.0, fresh.coeffs.norm()));
        }
    }
}

TEST_CASE("residual mean squared error", "[estimation]") {
    SECTION("exact coefficients on a noiseless series") {
        const TimeSeries clean(simulate_path(fixture(kM17, 0.0, 1.0), 100, 1).values);
        FittedCoefficients exact{Eigen::Map<const Eigen::VectorXd>(kM17.data(), 3), 3, 1, Method::PlugIn, 100};
        CHECK(residual_mse(clean, exact, 5) == Approx(0.0).margin(1e-20));
    }
    SECTION("zero series") {
        const TimeSeries zero(std::vector<double>(30, 0.0));
        FittedCoefficients f{Eigen::VectorXd::Ones(2), 2, 1, Method::PlugIn, 30};
        CHECK(residual_mse(zero, f, 3) == 0.0);
    }
    SECTION("explicit loop with the (n - h - K) divisor") {
        const auto x = simulate_path(fixture(kX, 1.0), 500, 8).values;
        const TimeSeries s(x);
        const auto f = fit_one_step(s, 5, 500);
        CHECK(residual_mse(s, f, 5) == Approx(oracle::residual_mse(x, to_vector(f.coeffs), 1, 5, 500)).epsilon(1e-12));
        const auto d = fit_direct(s, 2, 3, 500);
        CHECK(residual_mse(s, d, 5) == Approx(oracle::residual_mse(x, to_vector(d.coeffs), 3, 5, 500)).epsilon(1e-12));
    }
    SECTION("plug-in forms agree") {
        const auto x = simulate_path(fixture(kM17, 25.0), 300, 9).values;
        const TimeSeries s(x);
        const auto one = fit_one_step(s, 3, 300);
        const auto multi = plug_in_multi(one, 3);
        double sum = 0.0;
        for (std::size_t j = 6; j + 3 <= 300; ++j) {
            const double e = s[static_cast<std::ptrdiff_t>(j + 3)] - predict_iterated(s, one, 3, j);
            sum += e * e;
        }
        CHECK(residual_mse(s, multi, 6) == Approx(sum / (300.0 - 3 - 6)).epsilon(1e-10));
    }
    SECTION("sigma tilde does not depend on the method label") {
        const TimeSeries s(simulate_path(fixture(kX, 1.0), 200, 4).values);
        auto one = fit_one_step(s, 6, 200);
        auto direct = fit_direct(s, 6, 1, 200);
        CHECK(residual_mse(s, one, 6) == residual_mse(s, direct, 6));
    }
    SECTION("window too short") {
        const TimeSeries s({1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
        FittedCoefficients f{Eigen::VectorXd::Ones(1), 1, 1, Method::PlugIn, 6};
        CHECK_THROWS_AS(residual_mse(s, f, 5), WindowTooShort);
    }
}

TEST_CASE("fitted MA weights", "[estimation]") {
    FittedCoefficients rw{Eigen::VectorXd::Ones(1), 1, 1, Method::PlugIn, 10};
    for (const double b : fitted_ma_weights(rw, 5)) CHECK(b == 1.0);

    FittedCoefficients m17{Eigen::Map<const Eigen::VectorXd>(kM17.data(), 3), 3, 1, Method::PlugIn, 10};
    const auto b = fitted_ma_weights(m17, 4);
    const auto truth = ma_weights(ArModel::unit_root(kM17, 1.0), 4);
    REQUIRE(b.size() == 5);
    CHECK(b[1] == Approx(0.9));
    CHECK(b[2] == Approx(0.0).margin(1e-14));
    for (std::size_t j = 0; j <= 4; ++j) CHECK(b[j] == Approx(truth.b[j]).margin(1e-12));

    FittedCoefficients zero{Eigen::VectorXd::Zero(4), 4, 1, Method::PlugIn, 10};
    const auto z = fitted_ma_weights(zero, 3);
    CHECK(z == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}
