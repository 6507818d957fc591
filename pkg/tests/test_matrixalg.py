import random
from fractions import Fraction as F

import pytest

from energyalg.automaton import normalize
from energyalg.funcalg import INF, bbot, identity
from energyalg.matrixalg import (
    DimensionError,
    apply_to_unit,
    contract,
    dot_predicate,
    eye,
    mat_join,
    mat_mul,
    omega_k_matrix,
    omega_matrix,
    permute,
    prefix_vector,
    star_block,
    star_fw,
    unit_vector,
    zeros,
)
from energyalg.oracle import iterate_buchi
from energyalg.textio import parse_automaton
from energyalg.textio import parse_function as P
from energyalg.vmod import NEVER, Threshold, omega
from helpers import DATA, powers, random_matrix, rat, sup_paths


def pump_matrix():
    a = parse_automaton((DATA / "pump.ea").read_text())
    return normalize(a)[0]


def test_identity_and_idempotence():
    rng = random.Random(1)
    for n in range(1, 5):
        a = random_matrix(rng, n)
        assert mat_mul(a, eye(n)) == a == mat_mul(eye(n), a)
        assert mat_join(a, a) == a


def test_dimension_errors():
    with pytest.raises(DimensionError):
        mat_mul(eye(2), eye(3))
    with pytest.raises(DimensionError):
        mat_join(eye(2), eye(3))
    with pytest.raises(DimensionError):
        omega_k_matrix(eye(2), 3)


def test_square_enters_then_loops():
    t = pump_matrix()
    t2 = mat_mul(t, t)
    # state 1 -> 2 then the loop at 2 once: 2(x+3)-2
    assert t2[1][0] == P("2x+4 | x>1")
    for x in (F(3, 2), F(2), F(10)):
        assert t2[1][0](x) == 2 * x + 4


def test_pump_closure():
    s = star_fw(pump_matrix())
    expected = {
        (0, 0): "x | x>=0",
        (1, 0): "inf | x>1",
        (2, 0): "inf | x>1",
        (1, 1): "x | x>=0, inf | x>2",
        (2, 1): "x-1 | x>1, inf | x>2",
        (1, 2): "x+1 | x>=0, inf | x>1",
        (2, 2): "x | x>=0, inf | x>1",
    }
    for i in range(3):
        for j in range(3):
            want = P(expected[(i, j)]) if (i, j) in expected else bbot()
            assert s[i][j] == want, (i, j)
    assert star_block(pump_matrix()) == s


def test_star_trivial_cases():
    assert star_fw(zeros(3)) == eye(3)
    f = P("2x-2 | x>=1")
    assert star_fw(((f,),)) == ((f.star(),),)


def test_star_algorithms_agree():
    rng = random.Random(2024)
    count = 0
    for case in range(220):
        n = 1 + case % 6
        m = random_matrix(rng, n, density=0.45 if n < 5 else 0.3, max_pieces=2)
        fw = star_fw(m)
        assert star_block(m, 1) == fw
        if n > 2:
            assert star_block(m, n - 1) == fw
        count += 1
    assert count >= 200


def test_star_unfold_and_idempotence():
    rng = random.Random(7)
    for n in range(1, 5):
        for _ in range(10):
            m = random_matrix(rng, n)
            s = star_fw(m)
            assert s == mat_join(eye(n), mat_mul(m, s))
            assert star_fw(s) == s


def test_closure_is_sup_ofpowers():
    rng = random.Random(99)
    for case in range(60):
        n = 1 + case % 4
        m = random_matrix(rng, n, density=0.5, max_pieces=2)
        s = star_fw(m)
        pw = powers(m, n)
        samples = {F(0), F(1), F(5, 2), F(20)}
        while len(samples) < 10:
            samples.add(rat(rng, 0, 8))
        for x in samples:
            for i in range(n):
                for j in range(n):
                    assert s[i][j](x) == sup_paths(m, pw, i, j, x), (case, i, j, x)


def test_omega_split_independent():
    rng = random.Random(5)
    for case in range(80):
        n = 2 + case % 4
        m = random_matrix(rng, n, density=0.45, max_pieces=2)
        base = omega_matrix(m, 1)
        for split in range(2, n):
            assert omega_matrix(m, split) == base


def test_omega_trivial_cases():
    f = P("2x-2 | x>=1")
    assert omega_matrix(((f,),)) == (omega(f),)
    e = identity()
    assert omega_matrix(((e, e), (e, e))) == (Threshold(F(0)), Threshold(F(0)))


def test_omega_k_extremes():
    rng = random.Random(11)
    for n in range(1, 5):
        m = random_matrix(rng, n)
        assert omega_k_matrix(m, n) == omega_matrix(m)
        assert omega_k_matrix(m, 0) == (NEVER,) * n


def test_omega_k_car():
    a = parse_automaton((DATA / "car.ea").read_text())
    m, order = normalize(a)
    assert [a.names[i] for i in order] == ["W", "R"]
    vec = omega_k_matrix(permute(m, order), 1)
    assert vec[0] == Threshold(F(12))


def test_omega_pump_middle_state():
    # from state 2 the loop 2 -> 3 -> 2 preserves energy once above 1
    vec = omega_matrix(pump_matrix())
    assert vec[1] == Threshold(F(1), True)
    a = parse_automaton((DATA / "pump.ea").read_text())
    for x0 in (F(1), F(101, 100), F(2), F(5)):
        verdict, _ = iterate_buchi(a, "2", ["1", "2", "3"], x0)
        assert bool(verdict) == vec[1](x0)


def test_unit_vectors():
    n = 4
    for s in range(n):
        u = unit_vector(n, s)
        assert apply_to_unit(eye(n), u) == u
        v = (Threshold(F(1)), NEVER, Threshold(F(3), True), Threshold(INF))
        assert dot_predicate(v, u) == v[s]
    with pytest.raises(DimensionError):
        unit_vector(3, 3)


def test_reach_contraction_pump():
    s = star_fw(pump_matrix())
    col = apply_to_unit(s, unit_vector(3, 0))
    got = contract(prefix_vector(3, 3), col)
    assert got == P("x | x>=0, inf | x>1")
