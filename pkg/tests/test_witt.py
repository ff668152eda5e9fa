import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from latfrob import witt as W
from latfrob.cache import TableStore
from latfrob.errors import NotInImage
from latfrob.poly import parse_poly
from latfrob.rings import BaseSetup


def table(setup, n, op):
    return [str(f) for f in W.witt_table(setup, n, op).polys]


def test_closed_forms_p2(zz2):
    R = zz2.ring
    S = W.witt_table(zz2, 1, "add").polys
    Pm = W.witt_table(zz2, 1, "mul").polys
    F = W.witt_table(zz2, 1, "frobenius").polys
    assert S[1] == parse_poly("x_1 + y_1 - x_0*y_0", R)
    assert Pm[1] == parse_poly("x_0^2*y_1 + x_1*y_0^2 + 2*x_1*y_1", R)
    assert F[0] == parse_poly("x_0^2 + 2*x_1", R)


def test_closed_forms_p3(zz3):
    S = W.witt_table(zz3, 1, "add").polys
    assert S[1] == parse_poly("x_1 + y_1 - x_0^2*y_0 - x_0*y_0^2", zz3.ring)
    assert W.witt_table(zz3, 1, "frobenius").polys[0] == parse_poly("x_0^3 + 3*x_1", zz3.ring)


def test_char_p_tables(fq2):
    R = fq2.ring
    assert W.witt_table(fq2, 2, "add").polys == [parse_poly(f"x_{i} + y_{i}", R) for i in range(3)]
    assert W.witt_table(fq2, 1, "frobenius").polys[0] == parse_poly("x_0^2 + t*x_1", R)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_tables_verify(p, n):
    s = BaseSetup("char-zero", p)
    for op in ("add", "mul", "neg", "frobenius"):
        W.witt_table(s, n, op).verify()


def test_size_limits():
    with pytest.raises(ValueError):
        W.witt_table(BaseSetup("char-zero", 7), 1, "add")
    with pytest.raises(ValueError):
        W.witt_table(BaseSetup("char-zero", 2), 5, "add")


vec = st.lists(st.integers(-20, 20), min_size=3, max_size=3)


@settings(max_examples=100, deadline=None)
@given(vec, vec, st.sampled_from([2, 3]))
def test_arithmetic_matches_rational_oracle(u, v, p):
    s = BaseSetup("char-zero", p)
    R = s.ring
    U, V = W.WittVec(s, R, tuple(u)), W.WittVec(s, R, tuple(v))
    assert list((U + V).coords) == oracles.witt_add(u, v, p)
    assert list((U * V).coords) == oracles.witt_mul(u, v, p)
    assert list(W.frobenius(U).coords) == oracles.witt_frobenius(u, p)
    assert [int(g) for g in oracles.ghost(u, p)] == list(W.ghost(U))


def test_ghost_unghost_examples(zz2):
    R = zz2.ring
    assert W.ghost(W.WittVec(zz2, R, (2, -1))) == (2, 2)
    assert W.unghost([2, 2], zz2, R).coords == (2, -1)
    with pytest.raises(NotInImage) as info:
        W.unghost([0, 1], zz2, R)
    assert info.value.index == 1


def test_unghost_inverts_ghost_char_p(fq2):
    R = fq2.ring
    rng = random.Random(3)
    for _ in range(30):
        u = W.WittVec(fq2, R, tuple(R.random(rng) for _ in range(3)))
        assert W.unghost(W.ghost(u), fq2, R) == u


def test_teichmuller(zz2):
    R = zz2.ring
    assert W.teichmuller(0, 2, zz2, R).coords == (0, 0, 0)
    one = W.teichmuller(1, 2, zz2, R)
    assert one.coords == (1, 0, 0) and W.ghost(one) == (1, 1, 1)
    assert W.ghost(W.teichmuller(3, 1, zz2, R)) == (3, 9)
    A = BaseSetup("char-zero", 2).point_ring
    rng = random.Random(0)
    for _ in range(100):
        a, b = A.random(rng), A.random(rng)
        ta, tb = W.teichmuller(a, 2, zz2, A), W.teichmuller(b, 2, zz2, A)
        assert ta * tb == W.teichmuller(A.mul(a, b), 2, zz2, A)


def test_verschiebung_ghost(zz2):
    R = zz2.ring
    u = W.WittVec(zz2, R, (1, 0))
    # ghost(V u)_i = pi * w_{i-1}(u)
    assert W.ghost(W.verschiebung(u)) == (0, 2, 2)


def test_frobenius_after_verschiebung_is_pi_times(zz2):
    R = zz2.ring
    rng = random.Random(5)
    for _ in range(20):
        u = W.WittVec(zz2, R, tuple(rng.randint(-9, 9) for _ in range(3)))
        assert W.frobenius(W.verschiebung(u)) == W.exp_delta(zz2.p, 2, zz2, R) * u


def test_exp_delta(zz2):
    R = zz2.ring
    assert W.exp_delta(2, 1, zz2).coords == (2, -1)
    assert W.exp_delta(0, 3, zz2).coords == (0, 0, 0, 0)
    assert W.exp_delta(1, 3, zz2).coords == (1, 0, 0, 0)
    for r in range(-6, 7):
        assert W.exp_delta(r, 1, zz2, R).coords[1] == oracles.delta(r, 2)


def test_table_json_roundtrip(zz3):
    t = W.witt_table(zz3, 2, "mul")
    back = W.WittPolyTable.from_json(json.loads(json.dumps(t.to_json())))
    assert back.polys == t.polys


def test_cache_store_roundtrip_and_corruption(tmp_path):
    s = BaseSetup("char-zero", 3)
    store = TableStore(tmp_path)
    built = W._build(s, 2, "add")
    store.save(built)
    path = store.path(s, 2, "add")
    assert path.name == "witt-0-p3-e1-n2-add.json"
    assert store.load(s, 2, "add").polys == built.polys
    doc = json.loads(path.read_text())
    doc["polys"][2] = doc["polys"][2] + " + 1"
    path.write_text(json.dumps(doc))
    assert store.load(s, 2, "add") is None
    path.write_text("{not json")
    assert store.load(s, 2, "add") is None


def test_installed_store_rebuilds_corrupt_entry(tmp_path):
    s = BaseSetup("char-zero", 5)
    store = TableStore(tmp_path)
    path = store.path(s, 1, "add")
    tmp_path.mkdir(exist_ok=True)
    path.write_text(json.dumps({"schema_version": 1, "kind": "witt-table", "setup": s.to_json(), "n": 1,
                                "op": "add", "polys": ["x_0 + y_0", "x_1 + y_1"]}))
    W._TABLES.pop((s.key(), 1, "add"), None)
    W.set_table_store(store)
    try:
        polys = W.witt_table(s, 1, "add").polys
    finally:
        W.set_table_store(None)
    assert str(polys[1]).startswith("-") and len(polys[1]) > 2
    assert TableStore(tmp_path).load(s, 1, "add") is not None
