#include "arsel/errors.hpp"
#include "arsel/estimation.hpp"
#include "arsel/prediction.hpp"
#include "arsel/simulation.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace arsel;
using Catch::Approx;

TEST_CASE("point forecasts", "[prediction]") {
    SECTION("random-walk plug-in forecast is the last value") {
        const TimeSeries s({3.0, 5.0, 7.0});
        FittedCoefficients one{Eigen::VectorXd::Ones(1), 1, 1, Method::PlugIn, 3};
        for (std::size_t h = 1; h <= 5; ++h) CHECK(predict(s, plug_in_multi(one, h)).value == Approx(7.0));
    }
    SECTION("dot product with the tail") {
        const TimeSeries s({9.0, 3.0, 2.0, 1.0});
        FittedCoefficients f{Eigen::Vector3d(0.181, 0.819, 0.0), 3, 3, Method::PlugIn, 4};
        const Forecast fc = predict(s, f);
        CHECK(fc.value == Approx(1.819).margin(1e-12));
        CHECK(fc.origin == 4);
        CHECK(fc.horizon == 3);
        CHECK(fc.spec == PredictorSpec{3, Method::PlugIn, 3});
    }
    SECTION("zero series") {
        const TimeSeries s(std::vector<double>(5, 0.0));
        FittedCoefficients f{Eigen::Vector2d(0.3, -2.0), 2, 1, Method::Direct, 5};
        CHECK(predict(s, f).value == 0.0);
    }
    SECTION("insufficient history") {
        const TimeSeries s({1.0, 2.0});
        FittedCoefficients f{Eigen::Vector3d(1.0, 0.0, 0.0), 3, 1, Method::PlugIn, 2};
        CHECK_THROWS_AS(predict(s, f), InsufficientHistory);
        CHECK_THROWS_AS(predict(s, f, 1), InsufficientHistory);
    }
}

TEST_CASE("iterated forecasts equal companion-power forecasts", "[prediction][property]") {
    DgpSpec d = dgp_spec(DgpId::VII);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TimeSeries s = generate(d, 250, seed);
        for (std::size_t k = 1; k <= 5; ++k) {
            const auto one = fit_one_step(s, k, 250);
            for (std::size_t h = 1; h <= 8; ++h) {
                const double direct_form = predict(s, plug_in_multi(one, h), 250).value;
                const double iterated = predict_iterated(s, one, h, 250);
                CHECK(iterated == Approx(direct_form).epsilon(1e-10).margin(1e-10));
            }
        }
    }
}
