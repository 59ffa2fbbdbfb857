import pytest
from hypothesis import given, settings, strategies as st

from qrv import exactla as la
from qrv.moduli import (CASE_A, CASE_B, CASE_C, VIOLATION, check_weight, node_shape_check,
                        parse_weight, reduce_by_weight, restrict_representation, strip_node_maps)
from qrv.quiver import Algebra, MonomialRelations, Quiver, QuiverError, Representation
from qrv.verify import is_semistable_bruteforce
from qrv.verify.suites import semistable_suite
from qrv.verify.sweep import small_quivers

F2 = la.GF(2)
ARROW = Quiver.from_arrows(["1", "2"], [("a", "1", "2")])
PATH = Quiver.from_arrows(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


def rad2(q):
    return Algebra.radical_square_zero(q)


def test_parse_weight():
    assert parse_weight("1:2,3:-1", PATH) == {"1": 2, "2": 0, "3": -1}
    with pytest.raises(QuiverError):
        parse_weight("9:1", PATH)
    with pytest.raises(QuiverError):
        check_weight(PATH, {"1": 0})


def test_reduce_examples(loop_algebra):
    assert reduce_by_weight(loop_algebra, {"1": 0}).quiver.vertices == ()
    out = reduce_by_weight(rad2(ARROW), {"1": 1, "2": -1})
    assert out.quiver == ARROW
    out = reduce_by_weight(rad2(PATH), {"1": 0, "2": 0, "3": 0})
    assert out.quiver.vertices == () and out.quiver.arrows == ()


def test_reduce_wrong_signs_drop_the_arrow():
    out = reduce_by_weight(rad2(ARROW), {"1": -1, "2": 1})
    assert out.quiver.vertices == ("1", "2") and out.quiver.arrows == ()


def test_reduce_refuses_non_nodes():
    A = Algebra.path_algebra(PATH)
    with pytest.raises(QuiverError, match="non-node"):
        reduce_by_weight(A, {"1": 1, "2": 0, "3": -1})
    # restricting to the nodes is allowed; a zero weight only strips maps there
    out = reduce_by_weight(A, {"1": 0, "2": 0, "3": 0}, vertices=["1"])
    assert out.quiver.vertices == ("1", "2", "3")
    assert [a.id for a in out.quiver.arrows] == ["b"]


def test_reduce_drops_relations_on_deleted_arrows():
    q = Quiver.from_arrows(["1", "2"], [("a", "1", "2"), ("c", "2", "2")])
    A = Algebra(q, MonomialRelations(frozenset({("a", "c"), ("c", "c")}), False))
    out = reduce_by_weight(A, {"1": 1, "2": -1}, vertices=["2"])
    assert [a.id for a in out.quiver.arrows] == ["a"]
    assert list(out.relation_paths()) == []


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(small_quivers(3, 3))), st.data())
def test_reduced_quiver_is_bipartite(q, data):
    theta = {v: data.draw(st.integers(-2, 2)) for v in q.vertices}
    out = reduce_by_weight(rad2(q), theta).quiver
    for a in out.arrows:
        assert theta[a.tail] > 0 > theta[a.head]
    assert all(theta[v] != 0 for v in out.vertices)


def test_strip_and_restrict():
    M = Representation.from_lists(PATH, {"1": 1, "2": 1, "3": 1}, {"a": [[1]], "b": [[1]]}, F2)
    S = strip_node_maps(M, "1")
    assert S.matrices["a"].is_zero() and not S.matrices["b"].is_zero()
    A2 = reduce_by_weight(rad2(PATH), {"1": 1, "2": -1, "3": 0})
    R = restrict_representation(M, A2)
    assert R.quiver == A2.quiver and set(R.matrices) == {"a"}


def test_shape_examples(loop_algebra):
    A = rad2(ARROW)
    M = Representation.from_lists(ARROW, {"1": 1, "2": 1}, {"a": [[1]]}, F2)
    assert node_shape_check(A, M, {"1": 0, "2": 0}, "1") == CASE_C
    assert node_shape_check(A, M, {"1": 1, "2": -1}, "2") == CASE_A
    assert node_shape_check(A, M, {"1": 1, "2": -1}, "1") == CASE_B
    S = Representation.zero(ARROW, {"1": 0, "2": 1}, F2)
    assert node_shape_check(A, S, {"1": 1, "2": -1}, "2") == VIOLATION
    S = Representation.zero(loop_algebra.quiver, {"1": 1}, F2)
    assert node_shape_check(loop_algebra, S, {"1": -1}, "1") == VIOLATION
    with pytest.raises(QuiverError):
        node_shape_check(Algebra.path_algebra(PATH), Representation.zero(PATH, {"1": 1, "2": 1, "3": 1}),
                         {"1": 0, "2": 0, "3": 0}, "2")


def test_semistable_simple_is_case_consistent():
    # S_x with theta(x) < 0 fails semistability, so a violation is allowed there
    S = Representation.zero(ARROW, {"1": 0, "2": 1}, F2)
    assert not is_semistable_bruteforce(None, S, {"1": 1, "2": -1})


@pytest.mark.parametrize("arrows,d", [
    ([("a", "1", "2")], {"1": 2, "2": 2}),
    ([("a", "1", "2"), ("c", "2", "2")], {"1": 1, "2": 2}),
    ([("a", "1", "2"), ("b", "2", "1")], {"1": 1, "2": 1}),
    ([("a", "1", "2"), ("b", "1", "2")], {"1": 1, "2": 2}),
])
def test_reduction_and_shape_laws(arrows, d):
    q = Quiver.from_arrows(["1", "2"], arrows)
    for t in range(-2, 3):
        theta = {"1": t * d["2"], "2": -t * d["1"]}
        res = semistable_suite(rad2(q), d, theta, q=2)
        assert res["ok"], res["failures"][:3]
