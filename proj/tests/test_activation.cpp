#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dagnet/activation.hpp"

using namespace dagnet;

namespace {

// Central finite difference used as an independent slope oracle.
double slope(const Activation& g, double x, double h) {
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

double slope2(const Activation& g, double x, double h) {
    return (g.derivative(x + h) - g.derivative(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("known activation values") {
    auto tanh_g = Activation::from_name("tanh");
    CHECK(tanh_g(0.0) == 0.0);
    CHECK(tanh_g(1.0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));

    auto logi = Activation::from_name("logistic");
    CHECK(logi(0.0) == 0.5);
    CHECK(logi(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-15));

    auto atan_g = Activation::from_name("atan");
    CHECK(atan_g(0.0) == 0.0);
    // (2/pi) * arctan(1) = 1/2 exactly up to rounding.
    CHECK(atan_g(1.0) == doctest::Approx(0.5).epsilon(1e-15));

    auto lin = Activation::from_name("linear");
    CHECK(lin(3.25) == 3.25);
    CHECK(lin.derivative(-7.0) == 1.0);
    CHECK(lin.second_derivative(4.0) == 0.0);

    CHECK_THROWS_AS((void)Activation::from_name("relu"), DomainError);
}

TEST_CASE("derivatives agree with finite differences") {
    const double pts[] = {-3.0, -1.3, -0.5, 0.0, 0.4, 1.0, 2.7};
    for (const char* name : {"tanh", "logistic", "atan", "linear"}) {
        auto g = Activation::from_name(name);
        for (double x : pts) {
            CHECK(g.derivative(x) ==
                  doctest::Approx(slope(g, x, 1e-5)).epsilon(1e-6));
            CHECK(g.second_derivative(x) ==
                  doctest::Approx(slope2(g, x, 1e-5)).epsilon(1e-6));
        }
    }
}

TEST_CASE("bound constants") {
    auto tanh_g = Activation::from_name("tanh");
    CHECK(tanh_g.bounded());
    CHECK(tanh_g.value_bound() == 1.0);
    CHECK(tanh_g.derivative_bound() == 1.0);
    // sup |tanh''| = 4/(3*sqrt(3))
    CHECK(tanh_g.second_derivative_bound() ==
          doctest::Approx(0.7698003589195010).epsilon(1e-15));

    auto logi = Activation::from_name("logistic");
    CHECK(logi.value_bound() == 1.0);
    CHECK(logi.derivative_bound() == 0.25);
    // sup |logistic''| = 1/(6*sqrt(3))
    CHECK(logi.second_derivative_bound() ==
          doctest::Approx(0.09622504486493763).epsilon(1e-15));

    auto atan_g = Activation::from_name("atan");
    CHECK(atan_g.value_bound() == 1.0);
    CHECK(atan_g.derivative_bound() ==
          doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
    // sup |atan''| for (2/pi) arctan is 9/(4*sqrt(3)*pi), attained at 1/sqrt(3).
    CHECK(atan_g.second_derivative_bound() ==
          doctest::Approx(0.41349667156634404).epsilon(1e-15));

    auto lin = Activation::from_name("linear");
    CHECK_FALSE(lin.bounded());
    CHECK(std::isinf(lin.value_bound()));
    CHECK(lin.derivative_bound() == 1.0);
    CHECK(lin.second_derivative_bound() == 0.0);
}

TEST_CASE("bounds dominate sampled values") {
    for (const char* name : {"tanh", "logistic", "atan"}) {
        auto g = Activation::from_name(name);
        for (int i = -800; i <= 800; ++i) {
            double x = i * 0.01;
            CHECK(std::abs(g(x)) <= g.value_bound() + 1e-12);
            CHECK(std::abs(g.derivative(x)) <= g.derivative_bound() + 1e-12);
            CHECK(std::abs(g.second_derivative(x)) <=
                  g.second_derivative_bound() + 1e-12);
        }
    }
    // The derivative bound is attained at the origin for tanh and atan.
    CHECK(Activation::from_name("tanh").derivative(0.0) == 1.0);
    CHECK(Activation::from_name("atan").derivative(0.0) ==
          doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("non-finite inputs are rejected") {
    auto g = Activation::from_name("tanh");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)g(nan), NonFiniteInput);
    CHECK_THROWS_AS((void)g.derivative(inf), NonFiniteInput);
    CHECK_THROWS_AS((void)g.second_derivative(-inf), NonFiniteInput);
}
