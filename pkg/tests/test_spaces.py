"""Description parsing, validation and tail geometry."""

import json
import random
from fractions import Fraction

import pytest

from conftest import NEGATIVE_FILES, VALID_B_FILES, corpus_path, raw_description

import bquant
from bquant import (
    BSpaceDescription,
    CompactToricSpace,
    DimensionMismatchError,
    HypersurfaceRecord,
    LatticePolyhedron,
    NotValidatedError,
    PairingNotOneError,
    ParseError,
    leaf_embedding_basis,
    load_description,
    local_model,
    mapping_torus,
    normalize_splitting,
    parse_description,
    tail_threshold,
    validate_description,
)
from bquant.spaces import cross_section, tail_cut
from bquant import _linalg


def parse(data):
    return parse_description(json.dumps(data))


SPHERE = {
    "schema": "bquant/1", "kind": "b_toric", "rank": 1,
    "components": [
        {"sign": 1, "polyhedron": {"rank": 1, "inequalities": [
            {"normal": [1], "bound": 2}]}},
        {"sign": -1, "polyhedron": {"rank": 1, "inequalities": [
            {"normal": [1], "bound": -1}]}},
    ],
    "hypersurfaces": [
        {"modular_weight": [1], "splitting": [1],
         "leaf": {"rank": 0, "inequalities": []}, "adjacent": [0, 1]},
    ],
}

SEGMENT = {
    "schema": "bquant/1", "kind": "compact_toric", "rank": 1,
    "polytope": {"rank": 1, "inequalities": [
        {"normal": [1], "bound": 3}, {"normal": [-1], "bound": 0}]},
}


# ----------------------------------------------------------------------
# parsing


def test_parse_compact():
    space = parse(SEGMENT)
    assert isinstance(space, CompactToricSpace)
    assert space.rank == 1
    assert space.polytope.contains_point((3,))


def test_parse_b_toric():
    d = parse(SPHERE)
    assert isinstance(d, BSpaceDescription)
    assert [sign for sign, _ in d.components] == [1, -1]
    record = d.hypersurfaces[0]
    assert record.modular_weight == (1,)
    assert record.leaf.rank == 0
    assert record.adjacent == (0, 1)


def test_parse_corpus_round_trip():
    for name in VALID_B_FILES + NEGATIVE_FILES:
        description = load_description(corpus_path(name))
        assert description.rank in (1, 2)


def test_float_literals_rejected():
    bad = json.loads(json.dumps(SEGMENT))
    bad["polytope"]["inequalities"][0]["bound"] = 3.0
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert "not exact" in str(info.value)


def test_nonfinite_literals_rejected():
    text = json.dumps(SEGMENT).replace("3", "NaN", 1)
    with pytest.raises(ParseError) as info:
        parse_description(text)
    assert "NaN" in str(info.value)


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_description("{\n  broken")
    assert "line 2" in str(info.value)


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d.update(schema="bquant/2"), "schema"),
        (lambda d: d.update(kind="mystery"), "kind"),
        (lambda d: d.update(extra=1), "unknown field"),
        (lambda d: d.update(rank="1"), "expected an integer"),
        (lambda d: d.pop("components"), "components"),
        (lambda d: d["components"].clear(), "nonempty"),
        (lambda d: d["components"][0].update(sign=2), "sign"),
        (lambda d: d["components"][0].pop("polyhedron"), "polyhedron"),
        (lambda d: d["components"][0]["polyhedron"].update(rank=2), "match"),
        (lambda d: d["hypersurfaces"][0].pop("leaf"), "leaf"),
        (lambda d: d["hypersurfaces"][0].update(modular_weight=[1, 0]),
         "length"),
        (lambda d: d["hypersurfaces"][0].update(adjacent=[0, 5]),
         "out of range"),
        (lambda d: d["hypersurfaces"][0].update(adjacent=[0]), "length 2"),
        (lambda d: d["hypersurfaces"][0].update(
            leaf={"rank": 1, "inequalities": [
                {"normal": [1], "bound": 0}]}), "leaf.rank"),
        (lambda d: d["hypersurfaces"][0].update(surprise=3), "unknown field"),
    ],
)
def test_structural_errors(mutate, fragment):
    data = json.loads(json.dumps(SPHERE))
    mutate(data)
    with pytest.raises(ParseError) as info:
        parse(data)
    assert fragment in str(info.value)


def test_top_level_must_be_object():
    with pytest.raises(ParseError):
        parse_description("[1, 2]")


def test_load_description_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_description(tmp_path / "absent.json")


# ----------------------------------------------------------------------
# record construction


def test_hypersurface_record_validation():
    leaf0 = LatticePolyhedron(0, [])
    with pytest.raises(DimensionMismatchError):
        HypersurfaceRecord((1,), (1, 0), leaf0, (0, 1))
    with pytest.raises(DimensionMismatchError):
        HypersurfaceRecord((1, 0), (1, 0), leaf0, (0, 1))
    with pytest.raises(ValueError):
        HypersurfaceRecord((1,), (1,), leaf0, (0, 1, 2))


def test_description_validation():
    poly = LatticePolyhedron(1, [((1,), 0)])
    with pytest.raises(ValueError):
        BSpaceDescription(1, ((2, poly),), ())
    with pytest.raises(DimensionMismatchError):
        CompactToricSpace(2, poly)


# ----------------------------------------------------------------------
# splittings and leaf coordinates


def test_normalize_splitting_identity():
    assert normalize_splitting((1,), (1,)) == (1,)


def test_normalize_splitting_reduces_kernel_part():
    assert normalize_splitting((1, 0), (1, 7)) == (1, 0)
    assert normalize_splitting((1, 0), (1, -3)) == (1, 0)


def test_normalize_splitting_is_representative_independent():
    rng = random.Random(11)
    v = (2, 1, 0)
    x = (1, -1, 4)
    assert _linalg.dot(v, x) == 1
    reference = normalize_splitting(v, x)
    kernel = _linalg.lattice_kernel_basis(v)
    for _ in range(25):
        shift = x
        for row in kernel:
            k = rng.randint(-4, 4)
            shift = tuple(s + k * r for s, r in zip(shift, row))
        assert normalize_splitting(v, shift) == reference
    # the canonical representative still pairs to 1
    assert _linalg.dot(v, reference) == 1


def test_normalize_splitting_errors():
    with pytest.raises(PairingNotOneError):
        normalize_splitting((2,), (1,))
    with pytest.raises(DimensionMismatchError):
        normalize_splitting((1, 0), (1,))


def test_leaf_embedding_basis():
    basis = leaf_embedding_basis((1, 1))
    assert len(basis) == 1
    assert _linalg.dot((1, 1), basis[0]) == 0
    assert leaf_embedding_basis((1,)) == ()


def test_mapping_torus():
    record = parse(SPHERE).hypersurfaces[0]
    torus = mapping_torus(record)
    assert torus.monodromy == "identity"
    assert torus.circle_generator == (1,)
    bad = HypersurfaceRecord((2,), (1,), LatticePolyhedron(0, []), (0, 1))
    with pytest.raises(PairingNotOneError):
        mapping_torus(bad)


# ----------------------------------------------------------------------
# tail geometry


def test_tail_threshold_clears_every_vertex():
    d = parse(SPHERE)
    assert tail_threshold(d, 0) == 3  # vertices at 2 and -1, so extent 2
    torus = load_description(corpus_path("btorus.json"))
    assert tail_threshold(torus, 0) == 1  # full lines have no vertices
    half = load_description(corpus_path("sphere_halfbound.json"))
    assert tail_threshold(half, 0) == 3  # floor(5/2) + 1


def test_tail_cut():
    poly = LatticePolyhedron(1, [((1,), 2)])
    tail = tail_cut(poly, (1,), 3)
    assert tail.set_equals(LatticePolyhedron(1, [((1,), -3)]))


def test_cross_section_recovers_leaf_translate():
    d = load_description(corpus_path("skew.json"))
    record = d.hypersurfaces[0]
    basis = leaf_embedding_basis(record.splitting)
    _, polyhedron = d.components[0]
    section = cross_section(
        polyhedron, record.modular_weight, record.splitting, basis, -5
    )
    # the slice of the sheared strip is a unit segment in leaf coordinates
    assert section.is_bounded()
    assert len(section.lattice_points()) == 2


def test_cross_section_empty_slice_is_none():
    poly = LatticePolyhedron(1, [((1,), 2), ((-1,), 0)])
    assert cross_section(poly, (1,), (1,), (), -5) is None
    section = cross_section(poly, (1,), (1,), (), -0)
    assert section is not None and section.rank == 0


# ----------------------------------------------------------------------
# validation


def test_validate_compact_passes():
    report = validate_description(parse(SEGMENT))
    assert report.passed
    assert [c.name for c in report.checks] == [
        "compactness", "gamma-integrality", "delzant",
    ]


def test_validate_b_row_order():
    report = validate_description(parse(SPHERE))
    assert report.passed
    assert [c.name for c in report.checks] == [
        "modular-dichotomy", "gamma-integrality", "mu-integrality",
        "properness", "orientation", "tail-product", "delzant",
    ]


def test_validate_corpus():
    for name in VALID_B_FILES:
        report = validate_description(load_description(corpus_path(name)))
        assert report.passed, (name, report.lines())


def test_validation_is_memoized():
    d = parse(SPHERE)
    assert validate_description(d) is validate_description(d)


def test_compactness_check_fails_on_unbounded():
    space = CompactToricSpace(1, LatticePolyhedron(1, [((1,), 0)]))
    report = validate_description(space)
    names = {c.name: c for c in report.checks}
    assert not names["compactness"].passed
    assert names["compactness"].witness == (-1,)


def test_empty_polytope_fails_compactness():
    space = CompactToricSpace(
        1, LatticePolyhedron(1, [((1,), -1), ((-1,), 0)])
    )
    report = validate_description(space)
    assert not report.passed
    assert "empty" in report.checks[0].message


def test_orientation_check_rejects_same_component_twice():
    data = json.loads(json.dumps(SPHERE))
    data["components"][1]["sign"] = -1
    data["hypersurfaces"][0]["adjacent"] = [0, 0]
    report = validate_description(parse(data))
    rows = {c.name: c for c in report.checks}
    assert not rows["orientation"].passed
    assert "both sides" in rows["orientation"].message


def test_tail_product_detects_asymmetric_tails():
    data = json.loads(json.dumps(SPHERE))
    # bound the negative component below so its tail stops at -10
    data["components"][1]["polyhedron"]["inequalities"].append(
        {"normal": [-1], "bound": 10}
    )
    report = validate_description(parse(data))
    rows = {c.name: c for c in report.checks}
    assert not rows["tail-product"].passed


def test_tail_product_detects_wrong_leaf():
    raw = raw_description("product_k2.json")
    raw["hypersurfaces"][0]["leaf"]["inequalities"][0]["bound"] = 1  # was 2
    report = validate_description(parse(raw))
    rows = {c.name: c for c in report.checks}
    assert not rows["tail-product"].passed
    assert "translate of the leaf" in rows["tail-product"].message


def test_tail_product_detects_non_invariant_tail():
    # a wedge narrows forever, so it is not a product beyond any threshold
    wedge = {
        "schema": "bquant/1", "kind": "b_toric", "rank": 2,
        "components": [
            {"sign": 1, "polyhedron": {"rank": 2, "inequalities": [
                {"normal": [1, 2], "bound": 0},
                {"normal": [1, -2], "bound": 0}]}},
            {"sign": -1, "polyhedron": {"rank": 2, "inequalities": [
                {"normal": [1, 2], "bound": 0},
                {"normal": [1, -2], "bound": 0}]}},
        ],
        "hypersurfaces": [
            {"modular_weight": [1, 0], "splitting": [1, 0],
             "leaf": {"rank": 1, "inequalities": [
                 {"normal": [1], "bound": 0}, {"normal": [-1], "bound": 0}]},
             "adjacent": [0, 1]},
        ],
    }
    report = validate_description(parse(wedge))
    rows = {c.name: c for c in report.checks}
    assert not rows["tail-product"].passed


def test_validate_rejects_unknown_type():
    with pytest.raises(TypeError):
        validate_description("not a description")


def test_report_payload_shape():
    report = validate_description(parse(SPHERE))
    payload = report.payload()
    assert payload["passed"] is True
    assert len(payload["checks"]) == 7
    assert all(set(c) == {"check", "passed", "witness", "message"}
               for c in payload["checks"])


# ----------------------------------------------------------------------
# local models


def test_local_model_tails():
    model = local_model(parse(SPHERE), 0)
    assert model.threshold == 3
    signs = [sign for sign, _ in model.tails]
    assert signs == [1, -1]
    for _, tail in model.tails:
        assert tail.set_equals(LatticePolyhedron(1, [((1,), -3)]))


def test_local_model_errors():
    with pytest.raises(TypeError):
        local_model(parse(SEGMENT), 0)
    with pytest.raises(IndexError):
        local_model(parse(SPHERE), 1)
    bad = load_description(corpus_path("neg_equal_signs.json"))
    with pytest.raises(NotValidatedError) as info:
        local_model(bad, 0)
    assert info.value.report is not None
    assert "orientation" in str(info.value)


def test_negative_corpus_reports_are_surgical():
    expected = {
        "neg_nonprimitive_weight.json": ("mu-integrality", (0, [2])),
        "neg_equal_signs.json": ("orientation", (0, (1, 1))),
        "neg_unmatched_tail.json": ("properness", (0, (1,))),
        "neg_nonlattice_vertex.json":
            ("gamma-integrality", ("polytope", (Fraction(5, 2),))),
        "neg_nondelzant_triangle.json":
            ("delzant", ("polytope", (Fraction(1), Fraction(0)))),
    }
    for name, (check_name, witness) in expected.items():
        report = validate_description(load_description(corpus_path(name)))
        failing = [c for c in report.checks if not c.passed]
        assert len(failing) == 1, (name, report.lines())
        assert failing[0].name == check_name
        assert failing[0].witness == witness
