#include <doctest.h>

#include <cmath>
#include <limits>

#include "dagnet/gradients.hpp"
#include "dagnet/optimizer.hpp"

using namespace dagnet;

TEST_CASE("momentum coefficient formula") {
    // tau * |q| / |dv_prev|
    CHECK(momentum_coefficient(0.01, 5.0, 2.0) ==
          doctest::Approx(0.025).epsilon(1e-15));
    CHECK(momentum_coefficient(0.05, 0.0, 2.0) == 0.0);
    // First step: no previous update, coefficient defined as zero.
    CHECK(momentum_coefficient(0.05, 3.0, 0.0) == 0.0);
}

TEST_CASE("scalar worked update") {
    // eta = 0.1, s = 0.5 so tau = 0.05. Prime the state so the previous
    // update is exactly 1, then apply q = 2:
    //   coef = 0.05 * 2 / 1 = 0.1,  dv = 0.1 * 1 - 0.1 * 2 = -0.1.
    DagTopology t({1, 1}, {{0, 1}});
    WeightSet w(t);
    OptimizerState st(t, 0.1, 0.5);
    CHECK(st.tau() == doctest::Approx(0.05).epsilon(1e-15));

    GradientSet prime(t);
    prime.at({0, 1})(0, 0) = -10.0;  // dv = -eta * q = 1
    st.step(w, prime);
    CHECK(w.at({0, 1})(0, 0) == 1.0);
    CHECK(st.prev_delta().at({0, 1})(0, 0) == 1.0);

    GradientSet q(t);
    q.at({0, 1})(0, 0) = 2.0;
    st.step(w, q);
    CHECK(st.prev_delta().at({0, 1})(0, 0) ==
          doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(w.at({0, 1})(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(st.completed_steps() == 2);
}

TEST_CASE("randomized updates match an independent recomputation") {
    DagTopology t({2, 3, 2}, {{0, 1}, {0, 2}, {1, 2}});
    Rng rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        double eta = std::pow(10.0, rng.uniform(-4.0, -1.0));
        double s = rng.uniform(0.05, 0.95);
        WeightSet w = init_random(t, 1 + rep);
        WeightSet w_ref = w;
        OptimizerState st(t, eta, s);

        GradientSet q0(t);
        bool zero_first = rep % 5 == 0;
        if (!zero_first) {
            for (const Edge& e : t.edges()) {
                Matrix& m = q0.at(e);
                for (std::size_t k = 0; k < m.size(); ++k) {
                    m.data()[k] = rng.uniform(-2.0, 2.0);
                }
            }
        }
        GradientSet q1(t);
        for (const Edge& e : t.edges()) {
            Matrix& m = q1.at(e);
            for (std::size_t k = 0; k < m.size(); ++k) {
                m.data()[k] = rng.uniform(-2.0, 2.0);
            }
        }

        st.step(w, q0);
        // Reference state after the first step: dv0 = -eta * q0.
        EdgeMatrices dv_ref(t);
        for (const Edge& e : t.edges()) {
            Matrix& dm = dv_ref.at(e);
            const Matrix& qm = q0.at(e);
            Matrix& wm = w_ref.at(e);
            for (std::size_t k = 0; k < dm.size(); ++k) {
                dm.data()[k] = -eta * qm.data()[k];
                wm.data()[k] += dm.data()[k];
            }
        }

        st.step(w, q1);
        double tau = s * eta;
        for (const Edge& e : t.edges()) {
            const Matrix& qm = q1.at(e);
            Matrix& dm = dv_ref.at(e);
            Matrix& wm = w_ref.at(e);
            double qn = frobenius(qm);
            double dn = frobenius(dm);
            double coef = dn == 0.0 ? 0.0 : tau * qn / dn;
            for (std::size_t k = 0; k < dm.size(); ++k) {
                double nd = coef * dm.data()[k] - eta * qm.data()[k];
                dm.data()[k] = nd;
                wm.data()[k] += nd;
            }
            const Matrix& got_w = w.at(e);
            const Matrix& got_d = st.prev_delta().at(e);
            for (std::size_t k = 0; k < dm.size(); ++k) {
                CHECK(got_w.data()[k] ==
                      doctest::Approx(wm.data()[k]).epsilon(1e-14));
                CHECK(got_d.data()[k] ==
                      doctest::Approx(dm.data()[k]).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("per-edge update norm bound holds by construction") {
    DagTopology t({2, 4, 1}, {{0, 1}, {0, 2}, {1, 2}});
    double eta = 0.05, s = 0.5;
    OptimizerState st(t, eta, s);
    WeightSet w = init_random(t, 9);
    Rng rng(77);
    for (int step = 0; step < 50; ++step) {
        GradientSet q(t);
        for (const Edge& e : t.edges()) {
            Matrix& m = q.at(e);
            for (std::size_t k = 0; k < m.size(); ++k) {
                m.data()[k] = rng.uniform(-3.0, 3.0);
            }
        }
        st.step(w, q);
        for (std::size_t i = 0; i < t.edges().size(); ++i) {
            double dv = std::sqrt(st.prev_delta_norm_sq()[i]);
            double qn = frobenius(q.at(t.edges()[i]));
            CHECK(dv <= (eta + st.tau()) * qn + 1e-12 * (1.0 + dv));
        }
    }
}

TEST_CASE("learning-rate ceiling") {
    // (1 - s) / (C (s^2 + 1))
    CHECK(max_eta(0.5, 10.0) == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(max_eta(0.9, 1.0) ==
          doctest::Approx(0.05524861878453039).epsilon(1e-15));
    CHECK_THROWS_AS((void)max_eta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)max_eta(1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)max_eta(0.5, 0.0), DomainError);
    CHECK_THROWS_AS((void)max_eta(0.5, -2.0), DomainError);
}

TEST_CASE("optimizer parameter validation") {
    DagTopology t({1, 1}, {{0, 1}});
    CHECK_THROWS_AS(OptimizerState(t, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(OptimizerState(t, -1e-3, 0.5), DomainError);
    CHECK_THROWS_AS(OptimizerState(t, 0.1, 0.0), DomainError);
    CHECK_THROWS_AS(OptimizerState(t, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(FixedMomentumState(t, 0.1, 1.0), DomainError);
    CHECK_THROWS_AS(FixedMomentumState(t, 0.1, -0.1), DomainError);
}

TEST_CASE("non-finite gradients are refused") {
    DagTopology t({1, 1}, {{0, 1}});
    WeightSet w(t);
    OptimizerState st(t, 0.1, 0.5);
    GradientSet q(t);
    q.at({0, 1})(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(st.step(w, q), NonFiniteUpdate);
}

TEST_CASE("fixed momentum baseline") {
    DagTopology t({1, 1}, {{0, 1}});
    WeightSet w(t);
    // beta = 0 reduces to plain gradient descent.
    FixedMomentumState gd(t, 0.5, 0.0);
    GradientSet q(t);
    q.at({0, 1})(0, 0) = 2.0;
    gd.step(w, q);
    CHECK(w.at({0, 1})(0, 0) == -1.0);
    gd.step(w, q);
    CHECK(w.at({0, 1})(0, 0) == -2.0);

    // With beta = 0.5 the previous update carries over.
    WeightSet w2(t);
    FixedMomentumState mom(t, 0.5, 0.5);
    mom.step(w2, q);  // dv = -1
    mom.step(w2, q);  // dv = -0.5 - 1 = -1.5
    CHECK(w2.at({0, 1})(0, 0) == doctest::Approx(-2.5).epsilon(1e-15));
}
