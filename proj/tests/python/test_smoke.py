import math

import pytest

import tasep


def test_free_particle():
    r = tasep.joint_probability([-1], [(1, 0, 1.0)])
    assert abs(r["value"] - (1 - math.exp(-1))) < 1e-10
    assert r["provenance"] == "fredholm"
    assert r["warnings"] == []


def test_two_times_against_poisson():
    r = tasep.joint_probability(tasep.step(1), [(1, 0, 1.0), (1, 1, 2.0)])
    assert abs(r["value"] - tasep.poisson_joint([1, 2], [1.0, 2.0])) < 1e-6


def test_ctmc_agreement():
    value, cert = tasep.ctmc_exact([-1, -2], [(2, -1, 1.0)])
    r = tasep.joint_probability([-1, -2], [(2, -1, 1.0)])
    assert abs(r["value"] - value) < 1e-6 + cert


def test_signed_total_probability():
    obs = [(1, 0, 1.0), (1, 1, 2.0)]
    total = sum(tasep.signed_probability([-1], obs, s)["value"] for s in ([], [1]))
    assert abs(total - (1 - 3 * math.exp(-2))) < 1e-6


def test_periodic_matches_line():
    p = tasep.periodic_probability([-1, -2], 5, [(2, -1, 1.0)])
    r = tasep.joint_probability([-1, -2], [(2, -1, 1.0)])
    assert abs(p["value"] - r["value"]) < 1e-6


def test_bethe_roots_quadratic():
    left, right = tasep.bethe_roots(2, 1, 0.1)
    assert abs(right[0] - (-1 + math.sqrt(1.4)) / 2) < 1e-12
    assert abs(left[0] - (-1 - math.sqrt(1.4)) / 2) < 1e-12


def test_limit_and_ladder():
    f = tasep.limit_probability("step", [(0.0, 1.0, 0.0)])
    assert 0.96 < f["value"] < 0.98
    gaps = [row["gap"] for row in tasep.t_ladder("step", [(0.0, 1.0, 0.0)], [8.0, 16.0])]
    assert gaps[1] < gaps[0]


def test_mc_deterministic():
    a = tasep.mc_joint([-1, -2], [(1, 0, 0.5), (2, 0, 1.5)], seed=3, samples=20000)
    b = tasep.mc_joint([-1, -2], [(1, 0, 0.5), (2, 0, 1.5)], seed=3, samples=20000)
    assert a == b


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        tasep.joint_probability([0, 0], [(1, 0, 1.0)])
    with pytest.raises(NotImplementedError):
        tasep.limit_probability("flat", [(0.0, 1.0, 0.0), (0.5, 1.0, 0.0)])
