"""Grid classification, CSV dumps, and SVG rendering."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from symsector.flow import FlowSettings
from symsector.gridplot import (
    CSV_HEADER,
    IM_FIXED,
    PALETTE,
    SliceSpec,
    Z1_FIXED,
    classify_grid,
    grid_csv,
    grid_svg,
    parse_slice,
)


def test_parse_slice_variants():
    assert parse_slice("im:0") == SliceSpec(IM_FIXED, 0.0)
    assert parse_slice("im_fixed:2.5") == SliceSpec(IM_FIXED, 2.5)
    assert parse_slice("z1:-3") == SliceSpec(Z1_FIXED, -3.0)
    assert parse_slice("z1_fixed:0.25") == SliceSpec(Z1_FIXED, 0.25)


@pytest.mark.parametrize("bad", ["", "im", "chi:1", "im:abc", "im:nan"])
def test_parse_slice_rejects(bad):
    with pytest.raises(ValueError):
        parse_slice(bad)


def test_grid_corner_labels(pure16):
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=9)
    assert res.labels.shape == (9, 9)
    assert res.labels[0, 0] == "U_MM"
    assert res.labels[-1, -1] == "U_PP"
    assert res.labels[0, -1] == "U_MP"
    assert res.labels[-1, 0] == "U_MP"
    assert np.all(np.isfinite(res.a)) and np.all(np.isfinite(res.b))


def test_grid_symmetry_under_pair_swap(pure16):
    # unordered pairs: the label grid is symmetric in the two coordinates
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=15)
    assert np.array_equal(res.labels, res.labels.T)


def test_z1_fixed_slice_runs(pure16):
    res = classify_grid(parse_slice("z1:-40"), pure16, FlowSettings(), grid_n=7)
    assert res.labels.shape == (7, 7)
    assert set(np.unique(res.labels)) <= {
        "U_MM", "U_MP", "U_PP", "H_MINUS", "H_PLUS", "UNRESOLVED", "ERROR",
    }


def test_csv_layout(pure16):
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=9)
    lines = grid_csv(res).splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 81
    first = lines[1].split(",")
    assert len(first) == 5
    assert first[2] in PALETTE
    # row-major: first axis varies slowest
    assert lines[1].split(",")[0] == lines[9].split(",")[0]


def test_csv_deterministic(pure16):
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=9)
    assert grid_csv(res) == grid_csv(res)


def test_svg_well_formed(pure16):
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=21)
    svg = grid_svg(res)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    body = ET.tostring(root, encoding="unicode")
    assert "rect" in body
    # both hypersurface traces cross this window
    assert "path" in body


def test_svg_deterministic(pure16):
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=11)
    assert grid_svg(res) == grid_svg(res)


def test_custom_box_and_band(pure16):
    res = classify_grid(parse_slice("im:0"), pure16, FlowSettings(), grid_n=5,
                        box=10.0, band_tol=1e-3)
    assert res.axis1[0] == -10.0 and res.axis1[-1] == 10.0
    assert res.axis2[0] == -10.0 and res.axis2[-1] == 10.0
