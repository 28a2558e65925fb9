#include <doctest.h>

#include <cmath>

#include "dagnet/convergence.hpp"
#include "dagnet/train.hpp"

using namespace dagnet;

namespace {

IterationRecord make_record(long k, double error, double q_sq, double dv_sq,
                            double dh_sq, double predictor, double de) {
    IterationRecord r;
    r.k = k;
    r.error = error;
    r.q_sq_total = q_sq;
    r.dv_sq_total = dv_sq;
    r.dh_sq_total = dh_sq;
    r.predictor = predictor;
    r.error_change = de;
    r.max_abs_weight = 1.0;
    return r;
}

// Small teacher-student run used by several checks below.
TrainResult short_run(double eta, int iterations, unsigned long seed) {
    DagTopology t({2, 3, 1}, {{0, 1}, {0, 2}, {1, 2}});
    auto g = Activation::from_name("tanh");
    Rng rng(404);
    std::vector<Vector> xs;
    for (int i = 0; i < 12; ++i) {
        xs.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    }
    WeightSet base = init_random(t, seed);
    std::vector<Vector> ds = teacher_targets(t, g, base, xs, 0.05, seed + 99);

    TrainOptions opt;
    opt.eta = eta;
    opt.s = 0.5;
    opt.iterations = iterations;
    opt.seed = seed;
    opt.initial_weights = base;
    return train(t, g, xs, ds, opt);
}

}  // namespace

TEST_CASE("first-order predictor is the gradient-update inner product") {
    DagTopology t({2, 2, 1}, {{0, 1}, {0, 2}, {1, 2}});
    Rng rng(15);
    GradientSet q(t);
    EdgeMatrices dv(t);
    double expect = 0.0;
    for (const Edge& e : t.edges()) {
        Matrix& qm = q.at(e);
        Matrix& dm = dv.at(e);
        for (std::size_t k = 0; k < qm.size(); ++k) {
            qm.data()[k] = rng.uniform(-1.0, 1.0);
            dm.data()[k] = rng.uniform(-1.0, 1.0);
            expect += qm.data()[k] * dm.data()[k];
        }
    }
    CHECK(first_order_predictor(q, dv) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("descent inequality check on synthetic records") {
    double eta = 0.1, s = 0.5;  // tau - eta = -0.05
    // Predictor well below (tau - eta) * |q|^2 passes.
    CHECK(check_descent_inequality(make_record(0, 1.0, 4.0, 0, 0, -0.3, 0),
                                   eta, s));
    // Exactly at the bound passes (slack).
    CHECK(check_descent_inequality(make_record(0, 1.0, 4.0, 0, 0, -0.2, 0),
                                   eta, s));
    // Above the bound fails.
    CHECK_FALSE(check_descent_inequality(
        make_record(0, 1.0, 4.0, 0, 0, -0.1, 0), eta, s));
}

TEST_CASE("update bound check on synthetic records") {
    double eta = 0.1, s = 0.5;  // eta + tau = 0.15
    IterationRecord ok = make_record(0, 1.0, 4.0, 0.08, 0, -0.1, 0);
    ok.q_norm_sq = {4.0};
    ok.dv_norm_sq = {0.08};  // sqrt(0.08) < 0.15 * 2
    CHECK(check_update_bound(ok, eta, s));

    IterationRecord bad = ok;
    bad.dv_norm_sq = {0.1};  // sqrt(0.1) > 0.3
    CHECK_FALSE(check_update_bound(bad, eta, s));

    IterationRecord empty = make_record(0, 1.0, 4.0, 0.08, 0, -0.1, 0);
    CHECK_THROWS_AS((void)check_update_bound(empty, eta, s),
                    InsufficientData);
}

TEST_CASE("curvature ratio estimation") {
    std::vector<IterationRecord> rs;
    // |dE - Q| / (dh + dv): 0.5/1.0 and 0.2/0.1.
    rs.push_back(make_record(0, 2.0, 1.0, 0.5, 0.5, -0.7, -0.2));
    rs.push_back(make_record(1, 1.8, 1.0, 0.05, 0.05, -0.5, -0.3));
    auto ratios = curvature_ratios(rs);
    REQUIRE(ratios.size() == 2);
    CHECK(ratios[0].k == 0);
    CHECK(ratios[0].ratio == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ratios[1].k == 1);
    CHECK(ratios[1].ratio == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(estimate_C(rs) == doctest::Approx(2.0).epsilon(1e-12));

    // A 0/0 record is skipped, not counted.
    rs.push_back(make_record(2, 1.5, 0.0, 0.0, 0.0, -0.5, -0.5));
    CHECK(curvature_ratios(rs).size() == 2);

    // Zero denominator with a nonzero numerator cannot be attributed.
    std::vector<IterationRecord> bad;
    bad.push_back(make_record(0, 2.0, 1.0, 0.0, 0.0, -0.7, -0.2));
    CHECK_THROWS_AS((void)curvature_ratios(bad), UnboundedRatio);

    std::vector<IterationRecord> thin;
    thin.push_back(make_record(0, 2.0, 1.0, 0.5, 0.5, -0.7, -0.2));
    CHECK_THROWS_AS((void)estimate_C(thin), InsufficientData);
    CHECK_THROWS_AS((void)estimate_C({}), InsufficientData);
}

TEST_CASE("theorem verification on a real run") {
    TrainResult res = short_run(1e-2, 300, 21);
    REQUIRE(res.trajectory.size() >= 100);

    VerdictThresholds th;
    th.tail_threshold = 1e10;  // only structure checks here
    ConvergenceVerdict v = verify_theorem(res.trajectory, 1e-2, 0.5, th);
    CHECK(v.records_used == static_cast<long>(res.trajectory.size()));
    CHECK(v.monotone_descent);
    CHECK(v.descent_inequality_ok);
    CHECK(v.update_bound_ok);
    CHECK(v.tail_ok);
    CHECK(v.curvature_estimated);
    CHECK(std::isfinite(v.estimated_C));
    CHECK(v.estimated_C > 0.0);
    CHECK(v.max_eta_for_C > 0.0);
    CHECK(v.final_error == doctest::Approx(res.final_error).epsilon(1e-12));
    CHECK(v.converged());

    // The error sequence the verdict saw really is decreasing.
    for (std::size_t k = 1; k < res.trajectory.size(); ++k) {
        CHECK(res.trajectory[k].error <=
              res.trajectory[k - 1].error + 1e-12 * (1.0 + res.trajectory[k - 1].error));
    }
}

TEST_CASE("verification flags a manufactured increase") {
    TrainResult res = short_run(1e-2, 50, 22);
    auto records = res.trajectory;
    records[30].error_change = 0.5;  // pretend the error jumped
    ConvergenceVerdict v = verify_theorem(records, 1e-2, 0.5, {});
    CHECK_FALSE(v.monotone_descent);
    CHECK(v.first_increase == 30);
    CHECK_FALSE(v.converged());

    CHECK_THROWS_AS((void)verify_theorem({}, 1e-2, 0.5, {}), InsufficientData);
}

TEST_CASE("curvature estimate is stable under halving the rate") {
    TrainResult full = short_run(1e-2, 300, 23);
    TrainResult half = short_run(5e-3, 300, 23);
    double c_full = estimate_C(full.trajectory);
    double c_half = estimate_C(half.trajectory);
    CHECK(std::isfinite(c_full));
    CHECK(std::isfinite(c_half));
    // Same order of magnitude: within a factor of ten either way.
    CHECK(c_half <= 10.0 * c_full);
    CHECK(c_full <= 10.0 * c_half);
}

TEST_CASE("layer displacement stays within the update-driven budget") {
    DagTopology t({2, 3, 1}, {{0, 1}, {0, 2}, {1, 2}});
    TrainResult res = short_run(1e-2, 100, 24);
    auto ratios = layer_displacement_ratios(res.trajectory, t, 1e-2, 0.5);
    REQUIRE(ratios.size() == static_cast<std::size_t>(t.num_layers()));
    CHECK(ratios[0] == 0.0);  // input layer never moves
    for (std::size_t j = 1; j < ratios.size(); ++j) {
        CHECK(std::isfinite(ratios[j]));
        CHECK(ratios[j] > 0.0);
    }
}
