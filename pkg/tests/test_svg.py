import re

import numpy as np
import pytest

from app.io.svg import Projection, element_id, project, render_svg

XML_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")
SQUARE = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]])


@pytest.mark.parametrize("label, expected", [
    ("circle(2)", "circle-2"),
    ("circular-helix(2,1)", "circular-helix-2-1"),
    ("bertrand[T](paper-example)", "bertrand-T-paper-example"),
    ("2,1", "curve-2-1"),
    ("()", "curve"),
])
def test_labels_become_xml_ids(label, expected):
    assert element_id(label, set()) == expected


def test_repeated_labels_get_distinct_ids():
    svg = render_svg([("circle(2)", SQUARE), ("circle(2)", SQUARE), ("unit sphere", SQUARE)],
                     Projection.XY, sphere=True)
    ids = re.findall(r'<polyline id="([^"]+)"', svg)
    assert ids == ["circle-2", "circle-2-2", "unit-sphere-2"]
    assert all(XML_ID.match(i) for i in re.findall(r'id="([^"]+)"', svg))


def test_iso_projection_keeps_unit_vectors_inside_unit_disc():
    rng = np.random.default_rng(7)
    v = rng.normal(size=(200, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    assert np.all(np.hypot(*project(v, Projection.ISO).T) <= 1.0 + 1e-12)


def test_non_finite_points_are_rejected():
    with pytest.raises(ValueError):
        render_svg([("bad", np.array([[0.0, 0.0, 0.0], [np.nan, 1.0, 0.0]]))])
