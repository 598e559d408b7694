"""Energy functionals: flux term F, data term G, total objective, Lagrangian."""

import numpy as np
import pytest

from pxdg import (DgScalar, DgVector, Domain, EnergyReport, ExponentField,
                  ProblemData, build_uniform_mesh, b_operator, eval_F,
                  eval_F_barycenter, eval_G, eval_Jh, eval_lagrangian, grad_F,
                  manufactured_exponent)

SQUARE = Domain(-1.0, 1.0, -1.0, 1.0)


def zero(x, y):
    return np.zeros_like(np.asarray(x, float))


def make_data(mesh, b=0.0, r=1.0, xi=zero, u_D=zero):
    return ProblemData(mesh=mesh, exponent=manufactured_exponent(b),
                       xi=xi, u_D=u_D, r=r)


def constant_exponent(value):
    return ExponentField(
        lambda x, y: np.full_like(np.asarray(x, float), value),
        p1=value, p2=value)


def test_eval_F_zero_field():
    mesh = build_uniform_mesh(SQUARE, 3, 3)
    data = make_data(mesh, b=0.25)
    q = DgVector(mesh, np.zeros((mesh.n_elements, 2)))
    assert eval_F(q, data) == 0.0
    assert eval_F_barycenter(q, data) == 0.0


def test_eval_F_constant_unit_flux():
    mesh = build_uniform_mesh(SQUARE, 2, 2)
    data = make_data(mesh, b=0.0)
    q = DgVector(mesh, np.tile([1.0, 0.0], (mesh.n_elements, 1)))
    # |q| = 1, p = 2: integrand 1/2 over area 4
    assert eval_F(q, data) == pytest.approx(2.0, rel=1e-13)
    assert eval_F_barycenter(q, data) == pytest.approx(2.0, rel=1e-13)


def test_eval_F_against_dense_oracle():
    mesh = build_uniform_mesh(SQUARE, 4, 4)
    data = make_data(mesh, b=0.25)
    q = DgVector(mesh, np.tile([1.0, 1.0], (mesh.n_elements, 1)))
    n = 2000
    xs = -1.0 + (np.arange(n) + 0.5) * (2.0 / n)
    xg, yg = np.meshgrid(xs, xs)
    p = data.exponent(xg, yg)
    want = float((np.sqrt(2.0) ** p / p).sum() * (2.0 / n) ** 2)
    assert eval_F(q, data) == pytest.approx(want, rel=1e-6)


def test_barycenter_F_matches_reference_for_constant_p():
    mesh = build_uniform_mesh(SQUARE, 5, 4)
    data = make_data(mesh, b=0.0)
    rng = np.random.default_rng(6)
    q = DgVector(mesh, rng.normal(size=(mesh.n_elements, 2)))
    assert eval_F_barycenter(q, data) == pytest.approx(eval_F(q, data), rel=1e-12)


def test_barycenter_F_differs_for_variable_p():
    mesh = build_uniform_mesh(SQUARE, 4, 4)
    data = make_data(mesh, b=0.5)
    q = DgVector(mesh, np.tile([1.0, 1.0], (mesh.n_elements, 1)))
    a, b = eval_F_barycenter(q, data), eval_F(q, data)
    assert abs(a - b) > 1e-6 * abs(b)


def test_grad_F_identity_at_p_two():
    mesh = build_uniform_mesh(SQUARE, 3, 3)
    data = make_data(mesh, b=0.0)
    rng = np.random.default_rng(10)
    q = DgVector(mesh, rng.normal(size=(mesh.n_elements, 2)))
    assert np.allclose(grad_F(q, data).values, q.values, rtol=1e-14)


def test_grad_F_hand_value():
    mesh = build_uniform_mesh(SQUARE, 1, 1)
    data = ProblemData(mesh=mesh, exponent=constant_exponent(1.5),
                       xi=zero, u_D=zero)
    q = DgVector(mesh, [[3.0, 4.0]])
    want = 5.0 ** (-0.5) * np.array([3.0, 4.0])
    assert np.allclose(grad_F(q, data).values[0], want, rtol=1e-14)
    z = DgVector(mesh, [[0.0, 0.0]])
    assert np.allclose(grad_F(z, data).values, 0.0)


def test_grad_F_matches_central_difference():
    mesh = build_uniform_mesh(SQUARE, 4, 3)
    data = make_data(mesh, b=0.5)
    rng = np.random.default_rng(14)
    # keep magnitudes away from the origin where F is not smooth
    angles = rng.uniform(0.0, 2.0 * np.pi, size=mesh.n_elements)
    radii = rng.uniform(0.5, 2.0, size=mesh.n_elements)
    qv = radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)])
    delta = rng.normal(size=qv.shape)
    grad = grad_F(DgVector(mesh, qv), data).values
    want = float((mesh.areas[:, None] * grad * delta).sum())
    eps = 1e-4
    plus = eval_F_barycenter(DgVector(mesh, qv + eps * delta), data)
    minus = eval_F_barycenter(DgVector(mesh, qv - eps * delta), data)
    got = (plus - minus) / (2.0 * eps)
    assert got == pytest.approx(want, rel=1e-6)


def test_eval_G_zero():
    mesh = build_uniform_mesh(SQUARE, 3, 3)
    data = make_data(mesh, b=0.25)
    v = DgScalar(mesh, np.zeros(mesh.n_elements))
    assert eval_G(v, data) == 0.0


def test_eval_G_constant_one_single_element():
    mesh = build_uniform_mesh(SQUARE, 1, 1)
    data = make_data(mesh, b=0.0)
    v = DgScalar(mesh, [1.0])
    # data term 4; four boundary edges each contribute weight(2)*|e| = 1
    assert eval_G(v, data) == pytest.approx(4.0, rel=1e-13)


def test_eval_G_jump_isolation():
    mesh = build_uniform_mesh(SQUARE, 2, 1)
    step = lambda x, y: np.where(np.asarray(x, float) < 0.0, 0.0, 1.0)
    data = make_data(mesh, b=0.0, xi=step, u_D=step)
    v = DgScalar(mesh, [0.0, 1.0])
    # only the jump term survives: 0.5 * w(2) * |e| * 1 = 0.5 * 0.5 * 2
    assert eval_G(v, data) == pytest.approx(0.5, rel=1e-13)


def test_eval_G_quadratic_second_difference():
    # G is quadratic in v, so second differences do not depend on the base
    mesh = build_uniform_mesh(SQUARE, 4, 4)
    data = make_data(mesh, b=0.25, xi=lambda x, y: x + y,
                     u_D=lambda x, y: x * y)
    rng = np.random.default_rng(15)
    d = rng.normal(size=mesh.n_elements)
    base1 = rng.normal(size=mesh.n_elements)
    base2 = rng.normal(size=mesh.n_elements)

    def second_diff(v):
        g0 = eval_G(DgScalar(mesh, v), data)
        g1 = eval_G(DgScalar(mesh, v + d), data)
        g2 = eval_G(DgScalar(mesh, v + 2.0 * d), data)
        return g2 - 2.0 * g1 + g0

    assert second_diff(base1) == pytest.approx(second_diff(base2), rel=1e-10)


def test_eval_Jh_report():
    mesh = build_uniform_mesh(SQUARE, 3, 3)
    data = make_data(mesh, b=0.25, xi=lambda x, y: x)
    v = DgScalar(mesh, np.full(mesh.n_elements, 0.3))
    report = eval_Jh(v, data)
    assert isinstance(report, EnergyReport)
    # constant fields have zero discrete gradient, so J reduces to G
    assert report.F_value == 0.0
    assert report.J_value == pytest.approx(report.G_value)
    assert report.constraint_residual == 0.0
    rng = np.random.default_rng(16)
    v2 = DgScalar(mesh, rng.normal(size=mesh.n_elements))
    rep2 = eval_Jh(v2, data)
    assert rep2.J_value == pytest.approx(rep2.F_value + rep2.G_value, rel=1e-14)


def test_lagrangian_at_feasible_point_equals_objective():
    mesh = build_uniform_mesh(SQUARE, 4, 3)
    data = make_data(mesh, b=0.25, xi=lambda x, y: x + 0.5 * y)
    rng = np.random.default_rng(18)
    v = DgScalar(mesh, rng.normal(size=mesh.n_elements))
    lam = DgVector(mesh, rng.normal(size=(mesh.n_elements, 2)))
    got = eval_lagrangian(v, b_operator(v), lam, data)
    assert got == pytest.approx(eval_Jh(v, data).J_value, rel=1e-12)


def test_lagrangian_all_zero():
    mesh = build_uniform_mesh(SQUARE, 3, 3)
    data = make_data(mesh, b=0.25, xi=lambda x, y: np.cos(x) * y)
    z = DgScalar(mesh, np.zeros(mesh.n_elements))
    zq = DgVector(mesh, np.zeros((mesh.n_elements, 2)))
    assert eval_lagrangian(z, zq, zq, data) == \
        pytest.approx(eval_G(z, data), rel=1e-14)


def test_lagrangian_r_scaling():
    mesh = build_uniform_mesh(SQUARE, 4, 4)
    rng = np.random.default_rng(19)
    v = DgScalar(mesh, rng.normal(size=mesh.n_elements))
    q = DgVector(mesh, rng.normal(size=(mesh.n_elements, 2)))
    lam = DgVector(mesh, rng.normal(size=(mesh.n_elements, 2)))
    r0 = 0.8
    low = eval_lagrangian(v, q, lam, make_data(mesh, b=0.5, r=r0))
    high = eval_lagrangian(v, q, lam, make_data(mesh, b=0.5, r=2.0 * r0))
    gap = b_operator(v).values - q.values
    penalty = float((mesh.areas[:, None] * gap**2).sum())
    assert high - low == pytest.approx(0.5 * r0 * penalty, rel=1e-10)


def test_objective_midpoint_convexity():
    mesh = build_uniform_mesh(SQUARE, 4, 4)
    data = make_data(mesh, b=0.5, xi=lambda x, y: x - y)
    rng = np.random.default_rng(20)
    for _ in range(20):
        v1 = rng.normal(size=mesh.n_elements)
        v2 = rng.normal(size=mesh.n_elements)
        jm = eval_Jh(DgScalar(mesh, 0.5 * (v1 + v2)), data).J_value
        j1 = eval_Jh(DgScalar(mesh, v1), data).J_value
        j2 = eval_Jh(DgScalar(mesh, v2), data).J_value
        assert jm <= 0.5 * (j1 + j2) + 1e-12 * max(1.0, abs(j1) + abs(j2))


def test_flux_energy_midpoint_convexity():
    mesh = build_uniform_mesh(SQUARE, 4, 4)
    data = make_data(mesh, b=0.5)
    rng = np.random.default_rng(21)
    for _ in range(20):
        q1 = rng.normal(size=(mesh.n_elements, 2))
        q2 = rng.normal(size=(mesh.n_elements, 2))
        fm = eval_F(DgVector(mesh, 0.5 * (q1 + q2)), data)
        f1 = eval_F(DgVector(mesh, q1), data)
        f2 = eval_F(DgVector(mesh, q2), data)
        assert fm <= 0.5 * (f1 + f2) + 1e-12 * max(1.0, f1 + f2)


def test_problem_data_requires_positive_r():
    mesh = build_uniform_mesh(SQUARE, 2, 2)
    with pytest.raises(ValueError):
        make_data(mesh, b=0.0, r=0.0)
    with pytest.raises(ValueError):
        make_data(mesh, b=0.0, r=-1.0)
