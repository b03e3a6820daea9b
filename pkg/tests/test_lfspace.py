import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from extremal.diagram import SimpleGraph, classify, named_diagram
from extremal.errors import (
    MissingDeltaValue,
    MissingParameter,
    NotDynkin,
    PreconditionViolated,
    UnknownBasisElement,
)
from extremal.exactalg import FieldSpec, axpy
from extremal.lfspace import (
    ParameterSet,
    ScalingVector,
    build_bracket,
    complete_parameters,
    extremal_form_lf,
    load_parameter_file,
    membership_in_X,
    project,
    scale,
)
from extremal.sandwich import MonomialWord, compute_sandwich

Q = FieldSpec(None)
F5 = FieldSpec(5)
W = MonomialWord.parse

_sand = {}


def sand(name, field=Q):
    if (name, field) not in _sand:
        _sand[(name, field)] = compute_sandwich(named_diagram(name), field)
    return _sand[(name, field)]


def a2_params(a, b, field=Q):
    z = field.zero
    return ParameterSet(
        field,
        {
            ("1", W("1")): z, ("1", W("2")): field(a), ("1", W("2.1")): z,
            ("2", W("1")): field(b), ("2", W("2")): z, ("2", W("2.1")): z,
        },
    )


def random_completion(name, field, rng):
    s = sand(name, field)
    d = classify(s.graph)
    edges = {e: field.random_element(rng) for e in s.graph.edges}
    delta = field.random_element(rng) if d.is_affine else None
    return s, complete_parameters(s, d, edges, delta)


def test_a2_member_and_non_member():
    s = sand("A2")
    assert membership_in_X(build_bracket(s, a2_params(3, 3)))
    v = membership_in_X(build_bracket(s, a2_params(3, 5)))
    assert not v.member
    kinds = {k for k, _ in v.witnesses}
    assert kinds and kinds <= {"syzygy", "antisymmetry", "jacobi", "words", "extremal"}


def test_a2_projection_examples():
    alg = build_bracket(sand("A2"), a2_params(3, 3))
    x = alg.sand.gen_index["1"]
    assert project(alg, "1.1.2") == {x: Q(3)}
    yx = alg.sand.index_of(W("2.1"))
    assert project(alg, "2.1.1.2") == {yx: Q(3)}
    assert project(alg, "1.1") == {}
    with pytest.raises(UnknownBasisElement):
        project(alg, "1.9")


def test_extremal_form_lf():
    alg = build_bracket(sand("A2"), a2_params(7, 7))
    s = alg.sand
    assert extremal_form_lf(alg, "1", s.gen_index["2"]) == 7
    assert extremal_form_lf(alg, "2", s.gen_index["1"]) == 7
    assert extremal_form_lf(alg, "1", s.gen_index["1"]) == 0
    with pytest.raises(UnknownBasisElement):
        extremal_form_lf(alg, "q", 0)


@pytest.mark.parametrize("name", ["A3", "triangle", "D4", "A3~"])
def test_zero_parameters_give_sandwich_algebra(name):
    s = sand(name)
    alg = build_bracket(s, ParameterSet.zero(s))
    n = s.dimension
    for i in range(n):
        for j in range(n):
            assert alg.pair(i, j) == s.pair(i, j)
    assert membership_in_X(alg)


@pytest.mark.parametrize("name", ["A3", "D4", "triangle", "A3~", "D4~"])
def test_top_degree_matches_sandwich(name):
    rng = random.Random(1)
    s, h = random_completion(name, Q, rng)
    alg = build_bracket(s, h)
    for i in range(s.dimension):
        for j in range(s.dimension):
            full = alg.pair(i, j)
            d = s.basis[i].degree + s.basis[j].degree
            top = {k: c for k, c in full.items() if s.basis[k].degree == d}
            assert top == s.pair(i, j)
            assert all(s.basis[k].degree < d for k in full if k not in top)


@pytest.mark.parametrize("name", ["A2", "A3", "D4", "triangle", "A3~", "D4~"])
@pytest.mark.parametrize("field", [Q, F5], ids=str)
def test_completed_parameters_are_members(name, field):
    rng = random.Random(f"{name}/{field}")
    for _ in range(3):
        s, h = random_completion(name, field, rng)
        assert membership_in_X(build_bracket(s, h)).member


def _xyxz_expansion_ok(alg):
    # 2 x y x z = f_x(yz) x - f_x(z) xy - f_x(y) xz
    s = alg.sand
    one = alg.field.one
    for x in s.graph.vertices:
        ux = {s.gen_index[x]: one}
        for y in range(s.dimension):
            uy = {y: one}
            for z in range(s.dimension):
                uz = {z: one}
                lhs = alg.bracket(ux, alg.bracket(uy, alg.bracket(ux, uz)))
                lhs = {k: 2 * c for k, c in lhs.items()}
                rhs = {}
                axpy(rhs, ux, alg.h(x, alg.bracket(uy, uz)))
                axpy(rhs, alg.bracket(ux, uy), -alg.h(x, uz))
                axpy(rhs, alg.bracket(ux, uz), -alg.h(x, uy))
                if axpy(lhs, rhs, -one):
                    return False
    return True


@settings(max_examples=10)
@given(st.sampled_from(["A2", "A3", "triangle", "D4", "A3~"]), st.integers(0, 10**6))
def test_xyxz_expansion_in_members(name, seed):
    s, h = random_completion(name, Q, random.Random(seed))
    assert _xyxz_expansion_ok(build_bracket(s, h))


def test_scale_examples():
    h = a2_params(4, 4)
    t = ScalingVector({"1": Q(2), "2": Q(1)})
    th = scale(t, h)
    # f_1(y) picks up t_1^{-1}, f_2(x) picks up t_1^{-1} through the letter
    assert th.get("1", W("2")) == 2 and th.get("2", W("1")) == 2
    with pytest.raises(ValueError):
        ScalingVector({"1": Q(0)})


@settings(max_examples=10)
@given(st.sampled_from(["A3", "triangle", "D4", "A3~"]), st.integers(0, 10**6))
def test_torus_equivariance(name, seed):
    rng = random.Random(seed)
    s, h = random_completion(name, Q, rng)
    t = ScalingVector({x: Q.random_element(rng, nonzero=True) for x in s.graph.vertices})
    a, b = build_bracket(s, h), build_bracket(s, scale(t, h))
    assert membership_in_X(b).member

    def tpow(weight):
        c = Q.one
        for x, k in zip(s.graph.vertices, weight):
            c = c * t.t[x] ** k
        return c

    # basis word b in L(th) corresponds to t^{-wt b} b in L(h)
    for i in range(s.dimension):
        for j in range(s.dimension):
            wi, wj = s.basis[i].weight, s.basis[j].weight
            got = b.pair(i, j)
            want = {}
            for k, c in a.pair(i, j).items():
                wk = s.basis[k].weight
                want[k] = c * tpow(wk) / (tpow(wi) * tpow(wj))
            assert got == want


def test_parameter_json_round_trip():
    s, h = random_completion("D4~", F5, random.Random(3))
    obj = json.loads(json.dumps(h.to_json(s)))
    assert ParameterSet.from_json(obj, F5) == h
    assert load_parameter_file(json.dumps(obj), s) == h


def test_partial_parameter_file():
    s = sand("triangle")
    text = json.dumps({"edges": {"0-1": "2", "1-2": "1/3", "0-2": "-1"}, "delta": "5"})
    h = load_parameter_file(text, s)
    assert h.get("0", W("1")) == 2 and h.get("1", W("0")) == 2
    assert h.get("2", W("1")) == Q("1/3")
    assert membership_in_X(build_bracket(s, h))


def test_missing_parameter():
    s = sand("A2")
    h = a2_params(1, 1)
    del h.values[("2", W("2.1"))]
    with pytest.raises(MissingParameter):
        build_bracket(s, h)


def test_completion_errors():
    a2, tri = sand("A2"), sand("triangle")
    da2, dtri = classify(a2.graph), classify(tri.graph)
    e = {"1-2": 1}
    with pytest.raises(PreconditionViolated):
        complete_parameters(a2, da2, e, 1)
    with pytest.raises(MissingParameter):
        complete_parameters(a2, da2, {})
    with pytest.raises(PreconditionViolated):
        complete_parameters(a2, da2, {"1-3": 1})
    with pytest.raises(MissingDeltaValue):
        complete_parameters(tri, dtri, {"0-1": 1, "1-2": 1, "0-2": 1})
    chord = SimpleGraph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c")])
    cs = compute_sandwich(chord, Q)
    with pytest.raises(NotDynkin):
        complete_parameters(cs, classify(chord), {})


def test_edge_keys_accept_pairs():
    s = sand("A2")
    h1 = complete_parameters(s, classify(s.graph), {("2", "1"): 5})
    h2 = complete_parameters(s, classify(s.graph), {"1-2": 5})
    assert h1 == h2


def test_deterministic_tables():
    s, h = random_completion("A3~", Q, random.Random(9))
    assert build_bracket(s, h).table() == build_bracket(s, h).table()


def test_non_member_affine_has_witnesses():
    s, h = random_completion("triangle", Q, random.Random(4))
    key = ("0", W("1"))
    h.values[key] = h.values[key] + 1
    v = membership_in_X(build_bracket(s, h))
    assert not v.member and v.witnesses


def test_a2_bracket_values():
    alg = build_bracket(sand("A2"), a2_params(5, 5))
    gi = alg.sand.gen_index
    x, y = {gi["1"]: Q.one}, {gi["2"]: Q.one}
    assert alg.bracket(x, alg.bracket(x, y)) == {gi["1"]: Q(5)}
    assert alg.bracket(y, alg.bracket(x, y)) == {gi["2"]: Q(-5)}


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_zero_edges_complete_to_zero(name):
    s = sand(name)
    h = complete_parameters(s, classify(s.graph), {e: 0 for e in s.graph.edges})
    assert h == ParameterSet.zero(s)


def test_unit_scaling_is_identity():
    s, h = random_completion("triangle", Q, random.Random(2))
    assert scale(ScalingVector({x: Q.one for x in s.graph.vertices}), h) == h
