#include "oracles.hpp"

#include "arsel/errors.hpp"
#include "arsel/model.hpp"
#include "arsel/numeric.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace arsel;
using Catch::Approx;

namespace {

const std::vector<double> kM17{0.9, -0.81, 0.91};
const std::vector<double> kX{1.5, -0.5};

}  // namespace

TEST_CASE("time series reads zero before the sample", "[model]") {
    const TimeSeries s({1.0, 2.0, 3.0});
    CHECK(s[0] == 0.0);
    CHECK(s[-4] == 0.0);
    CHECK(s[1] == 1.0);
    CHECK(s[3] == 3.0);
    const Eigen::VectorXd r = s.regressor(2, 4);
    CHECK(r(0) == 2.0);
    CHECK(r(1) == 1.0);
    CHECK(r(2) == 0.0);
    CHECK(r(3) == 0.0);
    CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), InvalidArgument);
}

TEST_CASE("difference uses x_0 = 0", "[model]") {
    CHECK(difference(TimeSeries({3.0})).values()[0] == 3.0);
    const TimeSeries d = difference(TimeSeries({1.0, 3.0, 2.0}));
    CHECK(std::vector<double>(d.values().begin(), d.values().end()) == std::vector<double>{1.0, 2.0, -1.0});

    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    std::vector<double> e(50);
    std::vector<double> cum(50);
    double acc = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = z(rng);
        acc += e[i];
        cum[i] = acc;
    }
    const TimeSeries back = difference(TimeSeries(cum));
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(back.values()[i] == Approx(e[i]).margin(1e-12));
}

TEST_CASE("unit-root deflation", "[model]") {
    SECTION("M17") {
        const auto alpha = deflate_unit_root(kM17);
        REQUIRE(alpha.size() == 2);
        CHECK(alpha[0] == Approx(-0.1).margin(1e-14));
        CHECK(alpha[1] == Approx(-0.91).margin(1e-14));
    }
    SECTION("random walk has an empty stationary part") { CHECK(deflate_unit_root(std::vector<double>{1.0}).empty()); }
    SECTION("lag-2/3 model") {
        const std::vector<double> levels{0.0, 0.2, 0.8};
        const auto alpha = deflate_unit_root(levels);
        REQUIRE(alpha.size() == 2);
        CHECK(alpha[0] == Approx(-1.0).margin(1e-14));
        CHECK(alpha[1] == Approx(-0.8).margin(1e-14));
        // (1 - z)(1 + z + 0.8 z^2) = 1 - 0.2 z^2 - 0.8 z^3
        const auto prod = oracle::polymul({1.0, -1.0}, {1.0, 1.0, 0.8});
        CHECK(prod[1] == Approx(0.0).margin(1e-15));
        CHECK(prod[2] == Approx(-0.2));
        CHECK(prod[3] == Approx(-0.8));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(deflate_unit_root(std::vector<double>{0.5}), NotUnitRoot);
        CHECK_NOTHROW(deflate_unit_root(kX));
        // (1 - z)^2: alpha = (1) sits on the unit circle.
        CHECK_THROWS_AS(deflate_unit_root(std::vector<double>{2.0, -1.0}), UnstableStationaryPart);
    }
}

TEST_CASE("round trip from random stable alpha", "[model][property]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = static_cast<std::size_t>(trial % 5);
        const auto alpha = oracle::random_stable_alpha(rng, p, 0.05);
        const auto levels = oracle::levels_from_alpha(alpha);
        const auto back = deflate_unit_root(levels);
        REQUIRE(back.size() == alpha.size());
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            CHECK(back[i] == Approx(alpha[i]).epsilon(1e-12).margin(1e-12));
        }
    }
}

TEST_CASE("companion layout", "[model]") {
    const std::vector<double> one{0.5};
    const Eigen::MatrixXd a1 = companion_matrix(one);
    REQUIRE(a1.rows() == 1);
    CHECK(a1(0, 0) == 0.5);

    const Eigen::MatrixXd ax = companion_matrix(kX);
    CHECK(ax(0, 0) == 1.5);
    CHECK(ax(0, 1) == 1.0);
    CHECK(ax(1, 0) == -0.5);
    CHECK(ax(1, 1) == 0.0);

    const Eigen::MatrixXd am = companion_matrix(kM17);
    Eigen::Matrix3d expected;
    expected << 0.9, 1, 0, -0.81, 0, 1, 0.91, 0, 0;
    CHECK(am == expected);

    const Eigen::VectorXd v = Eigen::Vector3d(1.0, -2.0, 0.5);
    const Eigen::VectorXd first = Eigen::Map<const Eigen::VectorXd>(kM17.data(), 3);
    CHECK((companion_times(first, v) - am * v).norm() < 1e-15);
}

TEST_CASE("direct coefficients", "[model]") {
    SECTION("M17 at h = 3") {
        const auto d = direct_coefficients(kM17, 3);
        CHECK(d.coeffs[0] == Approx(0.181).margin(1e-12));
        CHECK(d.coeffs[1] == Approx(0.819).margin(1e-12));
        CHECK(d.coeffs[2] == Approx(0.0).margin(1e-12));
        CHECK(d.minimal_order == 2);
    }
    SECTION("h = 1 is the levels bitwise") {
        const auto d = direct_coefficients(kM17, 1);
        CHECK(d.coeffs == kM17);
        CHECK(d.minimal_order == 3);
    }
    SECTION("lag-10/11 model at h = 10") {
        std::vector<double> levels(11, 0.0);
        levels[9] = 0.2;
        levels[10] = 0.8;
        const auto d = direct_coefficients(levels, 10);
        CHECK(d.minimal_order == 2);
        CHECK(d.coeffs[0] == Approx(0.2).margin(1e-12));
        CHECK(d.coeffs[1] == Approx(0.8).margin(1e-12));
    }
    SECTION("substitution oracle for h <= 6, p <= 4") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 100; ++trial) {
            const auto alpha = oracle::random_stable_alpha(rng, static_cast<std::size_t>(trial % 5), 0.05);
            const auto levels = oracle::levels_from_alpha(alpha);
            for (std::size_t h = 1; h <= 6; ++h) {
                const auto d = direct_coefficients(levels, h);
                const auto expect = oracle::substitution(levels, h);
                for (std::size_t i = 0; i < levels.size(); ++i) {
                    CHECK(d.coeffs[i] == Approx(expect[i]).margin(1e-12));
                }
                CHECK(d.minimal_order <= levels.size());
                CHECK(d.minimal_order >= 1);
            }
        }
    }
}

TEST_CASE("MA weights", "[model]") {
    SECTION("geometric weights of the AR(1) difference") {
        const auto w = ma_weights(ArModel::unit_root(kX, 1.0), 6);
        const std::vector<double> c{1, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
        const std::vector<double> b{1, 1.5, 1.75, 1.875, 1.9375, 1.96875, 1.984375};
        for (std::size_t j = 0; j <= 6; ++j) {
            CHECK(w.c[j] == Approx(c[j]).margin(1e-15));
            CHECK(w.b[j] == Approx(b[j]).margin(1e-15));
        }
        CHECK(w.length() == 6);
    }
    SECTION("random walk") {
        const auto w = ma_weights(ArModel::unit_root({1.0}, 1.0), 5);
        for (std::size_t j = 1; j <= 5; ++j) {
            CHECK(w.c[j] == 0.0);
            CHECK(w.b[j] == 1.0);
        }
    }
    SECTION("M17: b_1 = 0.9, b_2 = 0") {
        const auto w = ma_weights(ArModel::unit_root(kM17, 1.0), 4);
        CHECK(w.b[1] == Approx(0.9).margin(1e-14));
        CHECK(w.b[2] == Approx(0.0).margin(1e-14));
    }
    SECTION("b equals the impulse response of the levels and the cumulative sum of c") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 50; ++trial) {
            const auto alpha = oracle::random_stable_alpha(rng, static_cast<std::size_t>(trial % 5), 0.05);
            const auto levels = oracle::levels_from_alpha(alpha);
            const auto w = ma_weights(ArModel::unit_root(levels, 1.0), 40);
            CHECK(w.c[0] == 1.0);
            CHECK(w.b[0] == 1.0);
            std::vector<double> b(41, 0.0);
            b[0] = 1.0;
            double cum = 0.0;
            for (std::size_t j = 0; j <= 40; ++j) {
                for (std::size_t l = 1; l <= std::min(j, levels.size()); ++l) b[j] += levels[l - 1] * b[j - l];
                cum += w.c[j];
                CHECK(w.b[j] == Approx(b[j]).epsilon(1e-12).margin(1e-12));
                CHECK(w.b[j] == Approx(cum).epsilon(1e-12).margin(1e-12));
            }
        }
    }
    SECTION("default truncation leaves a negligible tail") {
        const ArModel m = ArModel::unit_root(kM17, 1.0);
        const auto w = ma_weights(m);
        CHECK(std::abs(w.c.back()) < 1e-12);
    }
}

TEST_CASE("h-step innovation variance", "[model]") {
    CHECK(sigma_h_squared(ArModel::unit_root({1.0}, 1.0), 4) == Approx(4.0));
    CHECK(sigma_h_squared(ArModel::unit_root(kX, 1.0), 2) == Approx(3.25));
    CHECK(sigma_h_squared(ArModel::unit_root(kM17, 2.5), 1) == Approx(2.5));
    CHECK(sigma_h_squared(ArModel::unit_root(kM17, 1.0), 3) == Approx(1.0 + 0.81));
}

TEST_CASE("model validation", "[model]") {
    CHECK_THROWS_AS(ArModel::unit_root(kM17, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ArModel::unit_root({}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ArModel::unit_root({0.5, 0.5, 0.0}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ArModel::stationary({1.0}, 1.0), UnstableStationaryPart);
    CHECK(ArModel::classify(kM17, 1.0).has_unit_root());
    CHECK_FALSE(ArModel::classify({0.9, -0.81}, 1.0).has_unit_root());
    const ArModel m = ArModel::unit_root(kM17, 1.0);
    CHECK(m.order() == 3);
    CHECK(m.stationary_part().size() == 2);
}
