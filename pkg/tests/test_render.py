import re
import warnings

import numpy as np
import pytest

from oracles import pairwise_distances
from sciprofile import Embedding, MapStyle, classical_mds, distance_matrix, render_ascii, render_svg
from sciprofile.render import ascii_cells, svg_marker_centers


def countries_with_poles(n=80, seed=0):
    rng = np.random.default_rng(seed)
    labels = [f"{chr(65 + i // 26)}{chr(65 + i % 26)}" for i in range(n)] + ["F1", "F2", "F3"]
    regions = {lab: ("Africa", "Western Europe", "Latin America")[i % 3] for i, lab in enumerate(labels[:n])}
    return Embedding(labels, rng.normal(size=(n + 3, 2))), regions


def poles():
    return classical_mds(distance_matrix(np.eye(3), ["F1", "F2", "F3"]))


def test_marker_count():
    e, regions = countries_with_poles()
    svg = render_svg(e, regions)
    assert len(re.findall(r'class="marker', svg)) == 83
    assert len(svg_marker_centers(svg)) == 83


def test_svg_is_deterministic():
    e, regions = countries_with_poles()
    assert render_svg(e, regions).encode() == render_svg(e, regions).encode()


def test_svg_header_and_tooltips():
    e, regions = countries_with_poles(5)
    svg = render_svg(e, regions, names={"AA": "Aland & Co"}, title="t")
    assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')
    assert 'viewBox="0 0 800 600"' in svg
    assert "<title>Aland &amp; Co</title>" in svg
    assert "<script" not in svg


def test_poles_equilateral_in_pixels():
    c = svg_marker_centers(render_svg(poles(), {}))
    d = pairwise_distances(c)[np.triu_indices(3, 1)]
    assert d.max() / d.min() <= 1.02


def test_distance_ratios_preserved():
    e, regions = countries_with_poles(30, seed=4)
    c = svg_marker_centers(render_svg(e, regions))
    iu = np.triu_indices(len(e), 1)
    px, orig = pairwise_distances(c)[iu], pairwise_distances(e.x)[iu]
    ratio = px / orig
    assert ratio.max() / ratio.min() <= 1.01


def test_render_does_not_mutate():
    e, regions = countries_with_poles(10)
    before = e.x.copy()
    render_svg(e, regions)
    render_ascii(e)
    assert np.array_equal(e.x, before)


def test_missing_region_warns_and_uses_fallback():
    e = Embedding(["AA", "BB"], [[0, 0], [1, 1]])
    with pytest.warns(UserWarning, match="BB"):
        svg = render_svg(e, {"AA": "Africa"})
    assert "#999999" in svg


@pytest.mark.parametrize("kwargs", [{"width": 0}, {"palette": {"Africa": "red"}}, {"pole_color": "#12345"}])
def test_style_validation(kwargs):
    with pytest.raises(ValueError):
        MapStyle(**kwargs)


def test_empty_embedding():
    with pytest.raises(ValueError):
        render_svg(Embedding([], np.zeros((0, 2))), {})


def test_ascii_single_item_centered():
    text = render_ascii(Embedding(["AA"], [[3.0, 4.0]]), 40, 20)
    lines = text.splitlines()
    assert sum("AA" in line for line in lines) == 1
    row = next(i for i, line in enumerate(lines) if "AA" in line)
    assert row == 10 and lines[row].index("AA") == 20


def test_ascii_collision():
    e = Embedding(["BB", "AA", "CC"], [[0, 0], [0, 0], [5, 5]])
    text = render_ascii(e, 20, 10)
    assert "AA+1" in text and "BB" not in text


def test_ascii_poles_separate_cells():
    cells = ascii_cells(poles(), 40, 20)
    assert len(cells) == 3 and all(len(v) == 1 for v in cells.values())
    text = render_ascii(poles(), 40, 20)
    assert all(lab in text for lab in ("F1", "F2", "F3"))


def test_ascii_neighbours_do_not_overwrite():
    # AA and BB fall in adjacent columns of the same row
    e = Embedding(["AA", "BB", "CC"], [[0.0, 0.0], [1 / 39, 0.0], [1.0, 1.0]])
    text = render_ascii(e, 40, 10)
    assert "AA" in text and "BB" in text


def test_ascii_minimum_size():
    with pytest.raises(ValueError):
        render_ascii(poles(), 9, 20)
