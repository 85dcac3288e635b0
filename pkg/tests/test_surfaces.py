"""Combinatorial surfaces, decompositions, and their reports."""

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symsector.surfaces import (
    BUILTIN_NAMES,
    CombSurface,
    Component,
    SEV_ERROR,
    SEV_WARNING,
    UnknownHypersurfaceError,
    UnknownPieceError,
    builtin_surface,
    completion_of,
    component_symbol,
    corner_tag,
    counts_formula,
    enumerate_decomposition,
    euler_characteristic,
    fiber_of,
    is_valid,
    lg_labels,
    random_valid_surface,
    validate,
)


# ------------------------------------------------------------------- counts


def _counts(pieces, hypersurfaces, corners):
    return {"pieces": pieces, "hypersurfaces": hypersurfaces, "corners": corners}


def test_counts_formula():
    assert counts_formula(0, 1) == _counts(1, 0, 0)
    assert counts_formula(1, 2) == _counts(3, 2, 0)
    assert counts_formula(2, 3) == _counts(6, 6, 1)
    assert counts_formula(6, 6) == _counts(21, 36, 15)


@given(st.integers(0, 6), st.integers(1, 6), st.integers(0, 2 ** 31 - 1))
def test_random_surfaces_hit_formula(m, n, seed):
    rng = np.random.default_rng(seed)
    surface = random_valid_surface(m, n, rng)
    assert is_valid(surface)
    dec = enumerate_decomposition(surface)
    assert dec.counts() == counts_formula(m, n)


def test_three_disk_example_counts():
    surface = builtin_surface("example-5.3")
    dec = enumerate_decomposition(surface)
    assert dec.counts() == _counts(6, 6, 1)
    assert euler_characteristic(surface) == 1


def test_four_punctured_sphere_counts():
    surface = builtin_surface("p1-minus-4pts")
    dec = enumerate_decomposition(surface)
    assert dec.counts() == _counts(3, 2, 0)
    assert euler_characteristic(surface) == -2


def test_builtin_names():
    assert set(BUILTIN_NAMES) == {"example-5.3", "p1-minus-4pts"}
    with pytest.raises(KeyError):
        builtin_surface("unknown-surface")


# ----------------------------------------------------------- report content


def test_four_punctured_sphere_completions():
    rep = enumerate_decomposition(builtin_surface("p1-minus-4pts")).to_report()
    displays = {p["completion"]["display"] for p in rep["pieces"]}
    assert displays == {"(C*)^2", "P x C*", "C x C*"}


def test_four_punctured_sphere_lg_labels():
    rep = enumerate_decomposition(builtin_surface("p1-minus-4pts")).to_report()
    labels = rep["lg_labels"]
    assert labels["U_MM"] == "W=u1+u2 on (C*)^2"
    assert labels["U_PP"] == "W=u1 on C x C*"
    assert labels["U_MP+U_PP"] == "P x (C* with one stop)"
    assert "{xyz=0}" in labels["mirror"]


def test_lg_labels_only_for_special_structure():
    assert lg_labels(builtin_surface("example-5.3")) == {}
    assert set(lg_labels(builtin_surface("p1-minus-4pts"))) == {
        "U_MM", "U_PP", "U_MP+U_PP", "mirror",
    }


def test_fiber_adjacency_split():
    rep = enumerate_decomposition(builtin_surface("example-5.3")).to_report()
    for h in rep["hypersurfaces"]:
        fib = h["fiber"]
        if fib["adjacent"]:
            assert fib["text"].startswith("COMPLETION_OF(")
            assert f"BAND({h['saddle']})" in fib["text"]
        else:
            assert fib["text"].startswith(f"POINT({h['saddle']}) x ")


def test_corner_tags():
    rep = enumerate_decomposition(builtin_surface("example-5.3")).to_report()
    assert rep["corners"] == [
        {"pair": ["s1", "s2"], "tag": "C_{s1,s2} = gamma_{s1} x gamma_{s2}"}
    ]
    assert corner_tag("s2", "s5") == "C_{s2,s5} = gamma_{s2} x gamma_{s5}"


def test_fiber_and_completion_lookup():
    surface = builtin_surface("example-5.3")
    fib = fiber_of(surface, "s1", "m3")
    assert fib["text"] == "POINT(s1) x m3"
    comp = completion_of(surface, "m1", "m2")
    assert comp["form"] == "PRODUCT"
    with pytest.raises(UnknownHypersurfaceError):
        fiber_of(surface, "s9", "m1")
    with pytest.raises(UnknownPieceError):
        completion_of(surface, "m1", "nope")


def test_component_symbols():
    assert component_symbol(Component("x", 0, 3, [])) == "P"
    assert component_symbol(Component("x", 0, 2, [])) == "C*"
    assert component_symbol(Component("x", 0, 1, [])) == "C"
    assert component_symbol(Component("y", 1, 1, [])).startswith("Sigma-hat(")


def test_report_key_order_stable():
    surface = builtin_surface("p1-minus-4pts")
    a = json.dumps(enumerate_decomposition(surface).to_report(), sort_keys=True)
    b = json.dumps(enumerate_decomposition(surface).to_report(), sort_keys=True)
    assert a == b


# --------------------------------------------------------------- validation


def _pair_surface(**kw):
    comps = [
        Component("a", 0, 2, ["p"]),
        Component("b", 0, 2, ["q"]),
    ]
    return CombSurface(comps, [("p", "q")], **kw)


def test_valid_surface_clean():
    surface = _pair_surface()
    assert validate(surface) == []
    assert is_valid(surface)


def test_euler_characteristic_value():
    # two cylinders joined along one arc: (2-0-2)*2 - 1 = -1
    assert euler_characteristic(_pair_surface()) == -1
    assert is_valid(_pair_surface(expected_euler=-1))
    bad = _pair_surface(expected_euler=5)
    codes = {v["code"] for v in validate(bad)}
    assert "EULER_MISMATCH" in codes


@pytest.mark.parametrize(
    "components, arcs, code",
    [
        ([Component("a", 0, 1, []), Component("a", 0, 1, [])], [],
         "DUPLICATE_COMPONENT_ID"),
        ([Component("a", -1, 1, [])], [], "NEGATIVE_COUNT"),
        ([Component("a", 0, 1, ["p", "p"])], [], "DUPLICATE_SLOT"),
        ([Component("a", 0, 2, ["p", "q"])], [("p", "p")], "ARC_SELF_SLOT"),
        ([Component("a", 0, 1, ["p"])], [("p", "ghost")], "UNKNOWN_SLOT"),
        ([Component("a", 0, 2, ["p"]), Component("b", 0, 2, ["q", "r"])],
         [("p", "q"), ("p", "r")], "SLOT_REUSED"),
        ([Component("a", 0, 2, ["p", "q"]), Component("b", 0, 1, ["r"])],
         [("p", "r")], "SLOT_UNPAIRED"),
    ],
)
def test_validation_defects(components, arcs, code):
    surface = CombSurface(components, arcs)
    found = validate(surface)
    assert code in {v["code"] for v in found}
    assert all(v["severity"] in (SEV_ERROR, SEV_WARNING) for v in found)
    if code != "DISCONNECTED":
        assert not is_valid(surface)


def test_disconnected_is_warning_only():
    comps = [Component("a", 0, 1, []), Component("b", 0, 1, [])]
    surface = CombSurface(comps, [])
    found = validate(surface)
    assert {v["code"] for v in found} == {"DISCONNECTED"}
    assert found[0]["severity"] == SEV_WARNING
    assert is_valid(surface)


def test_enumerate_rejects_invalid():
    surface = CombSurface([Component("a", 0, 1, ["p"])], [("p", "ghost")])
    with pytest.raises(ValueError):
        enumerate_decomposition(surface)


# ------------------------------------------------------------- serialization


def test_json_round_trip():
    surface = builtin_surface("example-5.3")
    text = surface.dumps()
    back = CombSurface.loads(text)
    assert back.to_json_dict() == surface.to_json_dict()
    assert back.dumps() == text


def test_json_is_sorted_and_indented():
    text = builtin_surface("p1-minus-4pts").dumps()
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert "\n" in text
