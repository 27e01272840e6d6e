"""Shared fixtures and the raw-JSON membership oracle.

The oracle reads description files with nothing but json and Fraction, so
expected values in the tests never depend on the library under test.
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parent / "corpus"

VALID_B_FILES = [
    "sphere_a2_bm1.json",
    "sphere_a5_b0.json",
    "sphere_a0_bm4.json",
    "sphere_a20_bm20.json",
    "sphere_am3_bm7.json",
    "sphere_a1_b0.json",
    "sphere_halfbound.json",
    "chain3.json",
    "chain3_wide.json",
    "btorus.json",
    "btorus_4cycle.json",
    "product_k1.json",
    "product_k2.json",
    "product_k3.json",
    "product_k4.json",
    "product_k5.json",
    "skew.json",
    "skew_wide.json",
    "skew_neg.json",
    "strip_btorus.json",
    "strip_btorus_k2.json",
    "vert_sphere.json",
    "chain3_x_seg.json",
]

COMPACT_FILES = [
    "c_point.json",
    "c_seg_0_3.json",
    "c_seg_m2_0.json",
    "c_seg_m5_m1.json",
    "c_seg_m3_2.json",
    "c_square.json",
    "c_square_m1_0.json",
    "c_box_m3_0_x_m1_0.json",
    "c_triangle2.json",
]

NEGATIVE_FILES = [
    "neg_nonprimitive_weight.json",
    "neg_equal_signs.json",
    "neg_unmatched_tail.json",
    "neg_nonlattice_vertex.json",
    "neg_nondelzant_triangle.json",
]


def corpus_path(name):
    return CORPUS / name


def raw_description(name):
    with open(CORPUS / name, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _raw_inside(poly, weight):
    for inequality in poly["inequalities"]:
        value = sum(n * w for n, w in zip(inequality["normal"], weight))
        if value > Fraction(str(inequality["bound"])):
            return False
    return True


def raw_multiplicity(data, weight):
    """Signed membership count straight off the parsed JSON."""
    if data["kind"] == "compact_toric":
        return int(_raw_inside(data["polytope"], weight))
    return sum(
        component["sign"] * int(_raw_inside(component["polyhedron"], weight))
        for component in data["components"]
    )


@pytest.fixture
def load():
    import bquant

    def _load(name):
        return bquant.load_description(corpus_path(name))

    return _load
