import json

import pytest

from real_conic_bundles.bundle import (
    BaseCurve,
    CircleData,
    ConicBundleSpec,
    Transformation,
    TransformationKind,
)
from real_conic_bundles.exactpoly import RationalFunction


def abstract_spec(genus, circles, transformations=()):
    """Spec over an abstract base; ``circles`` holds zero counts, or ``'+'``/``'-'`` for zero-free circles."""
    data = tuple(
        CircleData(0, c) if isinstance(c, str) else CircleData(c) for c in circles
    )
    return ConicBundleSpec(
        BaseCurve(genus=genus, real_circle_count=len(data)),
        data,
        tuple(Transformation(TransformationKind(k), t) for k, t in transformations),
    )


@pytest.fixture
def worked_g() -> RationalFunction:
    # (z^2 - 1)(z^2 - 4) / (z^4 + 1)
    return RationalFunction.from_coefficients((4, 0, -5, 0, 1), (1, 0, 0, 0, 1))


@pytest.fixture
def genus1_document() -> dict:
    return {
        "schema_version": "1",
        "base": {"kind": "abstract", "genus": 1, "real_circle_count": 2},
        "g": {"abstract": [{"zeros": 4}, {"zeros": 0, "sign": "+"}]},
        "transformations": [],
        "maps": [
            {"name": "wrap-torus", "degrees": {"1": 0, "2": 0, "3": 1}},
            {"name": "spheres-only", "degrees": {"1": 7, "2": -3, "3": 0}},
        ],
    }


@pytest.fixture
def worked_document() -> dict:
    return {
        "schema_version": "1",
        "base": {"kind": "p1"},
        "g": {
            "explicit": {
                "numerator": ["4", "0", "-5", "0", "1"],
                "denominator": ["1", "0", "0", "0", "1"],
            }
        },
    }


@pytest.fixture
def write_document(tmp_path):
    def write(document: dict, name: str = "spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return path

    return write
