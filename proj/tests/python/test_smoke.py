"""Smoke checks for the Python bindings: builds a small network, trains it,
and exercises the metric and verification surface end to end."""

import math

import dagnet


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol * (1.0 + abs(b))


def main():
    # Topology and forward pass.
    topo = dagnet.DagTopology([1, 1, 1], [(0, 1), (0, 2), (1, 2)])
    act = dagnet.Activation.from_name("tanh")
    w = dagnet.init_random(topo, 1)
    for src, dst in [(0, 1), (0, 2), (1, 2)]:
        w.set_matrix(src, dst, [[1.0]])
    trace = dagnet.forward(topo, w, act, [1.0])
    y = trace.output
    assert len(y) == 1
    assert approx(y[0], 0.9426807890983486, 1e-15), y[0]

    # Gradients agree with finite differences.
    xs = [[1.0]]
    ds = [[0.0]]
    q = dagnet.batch_gradients(topo, w, act, xs, ds)
    fd = dagnet.finite_difference_gradients(topo, w, act, xs, ds)
    assert dagnet.max_relative_error(q, fd) < 1e-6

    # Optimizer scalar facts.
    assert approx(dagnet.momentum_coefficient(0.01, 5.0, 2.0), 0.025, 1e-15)
    assert approx(dagnet.max_eta(0.5, 10.0), 0.04, 1e-15)

    # Training descends and the verdict agrees.
    topo2 = dagnet.DagTopology([2, 3, 1], [(0, 1), (0, 2), (1, 2)])
    base = dagnet.init_random(topo2, 7)
    import random

    py_rng = random.Random(3)
    inputs = [[py_rng.uniform(-1, 1), py_rng.uniform(-1, 1)] for _ in range(8)]
    targets = dagnet.teacher_targets(topo2, act, base, inputs, 0.05, 9)

    opts = dagnet.TrainOptions()
    opts.eta = 1e-2
    opts.s = 0.5
    opts.iterations = 120
    opts.initial_weights = base
    result = dagnet.train(topo2, act, inputs, targets, opts)
    assert len(result.trajectory) == 120
    assert result.final_error < result.trajectory[0].error
    for rec in result.trajectory:
        assert rec.error_change <= 1e-12 * (1.0 + rec.error)

    verdict = dagnet.verify_theorem(result.trajectory, 1e-2, 0.5)
    assert verdict.monotone_descent
    assert verdict.descent_inequality_ok
    assert verdict.update_bound_ok
    assert math.isfinite(verdict.estimated_C)

    # Compression model round trip.
    ctopo = dagnet.crossencoder_topology([4, 3, 2, 3, 4], 2)
    model = dagnet.CompressionModel(ctopo, dagnet.init_random(ctopo, 4), act)
    x = [0.1, -0.2, 0.3, -0.4]
    rec = dagnet.decode(model, dagnet.encode(model, x))
    full = dagnet.forward(ctopo, model.weights, act, x).output
    assert rec == full, (rec, full)

    # Metrics.
    ref = [[0.0] * 4 for _ in range(4)]
    other = [[0.5] * 4 for _ in range(4)]
    assert approx(dagnet.psnr(ref, other), 6.020599913279624, 1e-12)
    assert dagnet.nrmse(other, other) == 0.0
    img = [[py_rng.random() for _ in range(16)] for _ in range(16)]
    assert dagnet.ssim(img, img) == 1.0

    # Errors cross the boundary as the dedicated exception type.
    try:
        dagnet.DagTopology([2, 1], [(1, 0)])
    except dagnet.DagnetError:
        pass
    else:
        raise AssertionError("backward edge accepted")

    # Data pipeline.
    faces = dagnet.synthetic_faces(4, 8, 8, 5)
    assert len(faces) == 4
    tr, te = dagnet.split(faces, 3, 1)
    assert len(tr) == 3 and len(te) == 1

    # Topology text round trip.
    text = dagnet.topology_to_text(ctopo)
    back = dagnet.topology_from_text(text)
    assert dagnet.topology_hash(back) == dagnet.topology_hash(ctopo)

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
