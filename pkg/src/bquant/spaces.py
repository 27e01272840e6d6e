"""Combinatorial descriptions of compact toric and b-toric spaces.

A compact toric space is presented by its moment polytope.  A b-toric space
is presented by the moment image of its open symplectic part: a list of
signed component polyhedra together with one record per singular
hypersurface.  Each hypersurface record carries

* ``modular_weight`` -- the primitive integer vector along which the moment
  image escapes to infinity (the tail direction is its negative),
* ``splitting``      -- an integer circle direction pairing to 1 with the
  modular weight; the affine coordinate cut by the tails,
* ``leaf``           -- the compact moment polytope of the symplectic leaf,
  presented in coordinates on the annihilator lattice of the splitting
  (canonical basis: :func:`leaf_embedding_basis`),
* ``adjacent``       -- the indices (plus side, minus side) of the two
  components whose tails the hypersurface glues; they must carry opposite
  signs.

Validation certifies, with exact arithmetic, that beyond the computed
integer threshold each matched tail is a product of a half-line with a
common translate of the leaf polytope, and that every unbounded direction
of every component is claimed by exactly one hypersurface end.  Those are
precisely the facts the quantization engine's tail cancellation consumes.

File format (version ``bquant/1``)::

    {"schema": "bquant/1", "kind": "compact_toric", "rank": 1,
     "polytope": {"rank": 1, "inequalities": [
         {"normal": [1], "bound": "3"}, {"normal": [-1], "bound": "0"}]}}

    {"schema": "bquant/1", "kind": "b_toric", "rank": 1,
     "components": [
         {"sign": 1,  "polyhedron": {...}},
         {"sign": -1, "polyhedron": {...}}],
     "hypersurfaces": [
         {"modular_weight": [1], "splitting": [1],
          "leaf": {"rank": 0, "inequalities": []}, "adjacent": [0, 1]}]}

Numbers are integers or exact ``"p/q"`` strings; floating-point literals are
rejected outright.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor

from . import _linalg
from .checks import (
    CheckReport,
    check_gamma_integrality,
    check_modular_dichotomy,
    check_mu_integrality,
    check_properness,
)
from .errors import (
    DimensionMismatchError,
    EmptyPolyhedronError,
    NoVerticesError,
    NotValidatedError,
    PairingNotOneError,
    ParseError,
)
from .polyhedra import LatticePolyhedron

__all__ = [
    "CompactToricSpace",
    "HypersurfaceRecord",
    "BSpaceDescription",
    "MappingTorus",
    "LocalModel",
    "ValidationReport",
    "parse_description",
    "load_description",
    "validate_description",
    "local_model",
    "mapping_torus",
    "normalize_splitting",
    "leaf_embedding_basis",
    "tail_threshold",
    "tail_cut",
    "cross_section",
]

SCHEMA = "bquant/1"


@dataclass(frozen=True)
class CompactToricSpace:
    rank: int
    polytope: LatticePolyhedron

    def __post_init__(self):
        if self.polytope.rank != self.rank:
            raise DimensionMismatchError(
                f"polytope rank {self.polytope.rank} != space rank {self.rank}"
            )


@dataclass(frozen=True)
class HypersurfaceRecord:
    modular_weight: tuple
    splitting: tuple
    leaf: LatticePolyhedron
    adjacent: tuple  # (plus-side component index, minus-side component index)

    def __post_init__(self):
        object.__setattr__(self, "modular_weight", tuple(self.modular_weight))
        object.__setattr__(self, "splitting", tuple(self.splitting))
        object.__setattr__(self, "adjacent", tuple(self.adjacent))
        n = len(self.modular_weight)
        if len(self.splitting) != n:
            raise DimensionMismatchError(
                "modular weight and splitting have different lengths"
            )
        if self.leaf.rank != n - 1:
            raise DimensionMismatchError(
                f"leaf rank {self.leaf.rank} != {n - 1} for a rank-{n} record"
            )
        if len(self.adjacent) != 2:
            raise ValueError("adjacent must list exactly two component indices")


@dataclass(frozen=True)
class BSpaceDescription:
    rank: int
    components: tuple  # ((sign, LatticePolyhedron), ...)
    hypersurfaces: tuple  # (HypersurfaceRecord, ...)

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple((s, p) for s, p in self.components)
        )
        object.__setattr__(self, "hypersurfaces", tuple(self.hypersurfaces))
        for sign, polyhedron in self.components:
            if sign not in (1, -1):
                raise ValueError(f"component sign must be +1 or -1, got {sign!r}")
            if polyhedron.rank != self.rank:
                raise DimensionMismatchError(
                    f"component rank {polyhedron.rank} != space rank {self.rank}"
                )
        for record in self.hypersurfaces:
            if len(record.modular_weight) != self.rank:
                raise DimensionMismatchError(
                    "hypersurface record rank does not match the space"
                )
            for side in record.adjacent:
                if not 0 <= side < len(self.components):
                    raise ValueError(
                        f"adjacent component index {side} out of range"
                    )


@dataclass(frozen=True)
class MappingTorus:
    """A singular hypersurface as (circle factor) x (symplectic leaf).

    The monodromy of the torus bundle is recorded explicitly: it is always
    the identity in this model, so the hypersurface is an honest product.
    """

    circle_generator: tuple
    leaf: LatticePolyhedron
    monodromy: str = "identity"


@dataclass(frozen=True)
class LocalModel:
    """The two signed truncated tails at one hypersurface."""

    hypersurface: int
    threshold: int
    tails: tuple  # ((sign, polyhedron), (sign, polyhedron)) in (plus, minus) order


# ----------------------------------------------------------------------
# parsing


def _reject_float(literal):
    raise ParseError(
        f"floating-point literal {literal!r} is not exact; "
        "use integers or 'p/q' strings"
    )


def _reject_constant(literal):
    raise ParseError(f"non-finite literal {literal!r} is not allowed")


def _expect_int(value, where):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{where}: expected an integer")
    return value


def _expect_int_list(value, where, length=None):
    if not isinstance(value, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in value
    ):
        raise ParseError(f"{where}: expected a list of integers")
    if length is not None and len(value) != length:
        raise ParseError(f"{where}: expected length {length}, got {len(value)}")
    return tuple(value)


def _no_unknown_fields(data, allowed, where):
    unknown = set(data) - set(allowed)
    if unknown:
        raise ParseError(f"{where}: unknown field {sorted(unknown)[0]!r}")


def parse_description(text):
    """Parse a description from JSON text.  Structural checks only; geometric
    validation is a separate, explicit step (:func:`validate_description`)."""
    try:
        data = json.loads(
            text, parse_float=_reject_float, parse_constant=_reject_constant
        )
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ParseError("top level: expected an object")
    if data.get("schema") != SCHEMA:
        raise ParseError(
            f"schema: expected {SCHEMA!r}, got {data.get('schema')!r}"
        )
    kind = data.get("kind")
    if kind == "compact_toric":
        _no_unknown_fields(data, ("schema", "kind", "rank", "polytope"), "top level")
        rank = _expect_int(data.get("rank"), "rank")
        if "polytope" not in data:
            raise ParseError("compact_toric description needs 'polytope'")
        polytope = LatticePolyhedron.from_payload(data["polytope"], "polytope")
        if polytope.rank != rank:
            raise ParseError(
                f"polytope.rank: {polytope.rank} does not match rank {rank}"
            )
        return CompactToricSpace(rank=rank, polytope=polytope)
    if kind == "b_toric":
        _no_unknown_fields(
            data,
            ("schema", "kind", "rank", "components", "hypersurfaces"),
            "top level",
        )
        rank = _expect_int(data.get("rank"), "rank")
        raw_components = data.get("components")
        if not isinstance(raw_components, list) or not raw_components:
            raise ParseError("components: expected a nonempty list")
        components = []
        for index, item in enumerate(raw_components):
            where = f"components[{index}]"
            if not isinstance(item, dict):
                raise ParseError(f"{where}: expected an object")
            _no_unknown_fields(item, ("sign", "polyhedron"), where)
            sign = item.get("sign")
            if sign not in (1, -1):
                raise ParseError(f"{where}.sign: expected 1 or -1, got {sign!r}")
            if "polyhedron" not in item:
                raise ParseError(f"{where}: needs 'polyhedron'")
            polyhedron = LatticePolyhedron.from_payload(
                item["polyhedron"], f"{where}.polyhedron"
            )
            if polyhedron.rank != rank:
                raise ParseError(
                    f"{where}.polyhedron.rank: {polyhedron.rank} does not "
                    f"match rank {rank}"
                )
            components.append((sign, polyhedron))
        raw_hypersurfaces = data.get("hypersurfaces")
        if not isinstance(raw_hypersurfaces, list):
            raise ParseError("hypersurfaces: expected a list (may be empty)")
        records = []
        for index, item in enumerate(raw_hypersurfaces):
            where = f"hypersurfaces[{index}]"
            if not isinstance(item, dict):
                raise ParseError(f"{where}: expected an object")
            _no_unknown_fields(
                item, ("modular_weight", "splitting", "leaf", "adjacent"), where
            )
            for field in ("modular_weight", "splitting", "leaf", "adjacent"):
                if field not in item:
                    raise ParseError(f"{where}: needs {field!r}")
            modular_weight = _expect_int_list(
                item["modular_weight"], f"{where}.modular_weight", rank
            )
            splitting = _expect_int_list(
                item["splitting"], f"{where}.splitting", rank
            )
            leaf = LatticePolyhedron.from_payload(item["leaf"], f"{where}.leaf")
            if leaf.rank != rank - 1:
                raise ParseError(
                    f"{where}.leaf.rank: {leaf.rank} does not match rank "
                    f"{rank} - 1"
                )
            adjacent = _expect_int_list(item["adjacent"], f"{where}.adjacent", 2)
            for side in adjacent:
                if not 0 <= side < len(components):
                    raise ParseError(
                        f"{where}.adjacent: component index {side} out of range"
                    )
            records.append(
                HypersurfaceRecord(
                    modular_weight=modular_weight,
                    splitting=splitting,
                    leaf=leaf,
                    adjacent=adjacent,
                )
            )
        return BSpaceDescription(
            rank=rank, components=tuple(components), hypersurfaces=tuple(records)
        )
    raise ParseError(
        f"kind: expected 'compact_toric' or 'b_toric', got {kind!r}"
    )


def load_description(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_description(handle.read())


# ----------------------------------------------------------------------
# tail geometry helpers


def leaf_embedding_basis(splitting):
    """Canonical lattice basis of the annihilator of the splitting direction.

    Leaf polytopes are presented in these coordinates: a leaf point u embeds
    as level * modular_weight + sum_j u_j * basis_j.  The basis is the
    row-HNF lattice kernel of the splitting covector, so it is deterministic.
    """
    return tuple(_linalg.lattice_kernel_basis(tuple(splitting)))


def tail_threshold(description, index):
    """Integer cut level for the tails of hypersurface `index`: strictly
    beyond the extent of every adjacent component's vertices along the
    splitting coordinate."""
    record = description.hypersurfaces[index]
    extent = Fraction(0)
    for side in record.adjacent:
        _, polyhedron = description.components[side]
        if polyhedron.is_empty():
            continue
        for vertex in polyhedron.vertices():
            value = abs(sum(s * x for s, x in zip(record.splitting, vertex)))
            if value > extent:
                extent = value
    return floor(extent) + 1


def tail_cut(polyhedron, splitting, threshold):
    """The tail {x in polyhedron : <splitting, x> <= -threshold}."""
    return polyhedron.with_inequality(tuple(splitting), Fraction(-threshold))


def cross_section(polyhedron, modular_weight, splitting, basis, level):
    """Slice {x : <splitting, x> = level} in leaf coordinates, or None if empty.

    Points at the given level are level * modular_weight + basis @ u; the
    returned polyhedron constrains u.  Requires <modular_weight, splitting>
    = 1, which makes (modular_weight, basis) a lattice basis of Z^rank, so
    integer u correspond exactly to weight-lattice points of the slice.
    """
    n = polyhedron.rank
    inequalities = []
    for normal, bound in polyhedron.inequalities:
        projected = tuple(_linalg.dot(normal, direction) for direction in basis)
        shifted = bound - level * _linalg.dot(normal, modular_weight)
        if any(projected):
            inequalities.append((projected, shifted))
        elif shifted < 0:
            return None  # the whole slice is infeasible
    return LatticePolyhedron(n - 1, inequalities)


# ----------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def lines(self):
        return [check.line() for check in self.checks]

    def payload(self):
        return {
            "passed": self.passed,
            "checks": [check.payload() for check in self.checks],
        }


def _record_is_degenerate(record):
    """True when (modular weight, splitting) cannot define a tail frame;
    the mu-integrality row reports these, so structural rows skip them."""
    v = record.modular_weight
    return (
        not any(v)
        or _linalg.vector_gcd(v) != 1
        or _linalg.dot(v, record.splitting) != 1
    )


def _check_orientation(description):
    name = "orientation"
    for index, record in enumerate(description.hypersurfaces):
        plus_side, minus_side = record.adjacent
        if plus_side == minus_side:
            return CheckReport(
                name,
                False,
                witness=(index, plus_side),
                message="hypersurface adjoins the same component on both sides",
            )
        plus_sign = description.components[plus_side][0]
        minus_sign = description.components[minus_side][0]
        if plus_sign != -minus_sign:
            return CheckReport(
                name,
                False,
                witness=(index, (plus_sign, minus_sign)),
                message="adjacent components must carry opposite signs",
            )
    return CheckReport(name, True)


def _check_tail_product(description):
    name = "tail-product"
    for index, record in enumerate(description.hypersurfaces):
        if _record_is_degenerate(record):
            continue
        v = record.modular_weight
        splitting = record.splitting
        threshold = tail_threshold(description, index)
        basis = leaf_embedding_basis(splitting)
        leaf = record.leaf
        try:
            leaf_anchor = min(leaf.vertices()) if leaf.is_bounded() else None
        except (EmptyPolyhedronError, NoVerticesError):
            leaf_anchor = None
        if leaf_anchor is None:
            continue  # a broken leaf polytope is the integrality row's business
        tails = []
        for side in record.adjacent:
            _, polyhedron = description.components[side]
            if polyhedron.is_empty():
                return CheckReport(
                    name,
                    False,
                    witness=(index, side),
                    message="adjacent component is empty",
                )
            tail = tail_cut(polyhedron, splitting, threshold)
            if tail.is_empty():
                return CheckReport(
                    name,
                    False,
                    witness=(index, side),
                    message="component has no tail beyond the threshold",
                )
            shifted = tail.translate(tuple(-x for x in v))
            deeper = tail.with_inequality(
                tuple(splitting), Fraction(-threshold - 1)
            )
            if not shifted.set_equals(deeper):
                return CheckReport(
                    name,
                    False,
                    witness=(index, side),
                    message="tail is not translation-invariant along the "
                            "modular direction",
                )
            section = cross_section(tail, v, splitting, basis, -threshold)
            if section is None or section.is_empty():
                return CheckReport(
                    name,
                    False,
                    witness=(index, side),
                    message="tail cross-section is empty",
                )
            if not section.is_bounded():
                return CheckReport(
                    name,
                    False,
                    witness=(index, side),
                    message="tail cross-section is unbounded",
                )
            anchor = min(section.vertices())
            offset = tuple(a - b for a, b in zip(anchor, leaf_anchor))
            if not section.set_equals(leaf.translate(offset)):
                return CheckReport(
                    name,
                    False,
                    witness=(index, side),
                    message="tail cross-section is not a translate of the "
                            "leaf polytope",
                )
            tails.append(tail)
        if not tails[0].set_equals(tails[1]):
            return CheckReport(
                name,
                False,
                witness=(index,),
                message="the two matched tails differ as sets",
            )
    return CheckReport(name, True)


def _delzant_verdict(polyhedron, label):
    try:
        failure = polyhedron.delzant_failure()
    except (EmptyPolyhedronError, NoVerticesError):
        return None  # emptiness/properness rows report those situations
    if failure is None:
        return None
    vertex, reason = failure
    return CheckReport("delzant", False, witness=(label, vertex), message=reason)


def _check_delzant(description):
    name = "delzant"
    if not hasattr(description, "hypersurfaces"):
        verdict = _delzant_verdict(description.polytope, "polytope")
        return verdict or CheckReport(name, True)
    for index, record in enumerate(description.hypersurfaces):
        verdict = _delzant_verdict(record.leaf, f"hypersurface[{index}].leaf")
        if verdict is not None:
            return verdict
    for index, (_, polyhedron) in enumerate(description.components):
        if polyhedron.is_empty():
            continue
        verdict = _delzant_verdict(polyhedron, f"component[{index}]")
        if verdict is not None:
            return verdict
    return CheckReport(name, True)


def _check_compactness(space):
    name = "compactness"
    polytope = space.polytope
    if polytope.is_empty():
        return CheckReport(name, False, message="moment polytope is empty")
    rays = polytope.recession_rays()
    if rays:
        return CheckReport(
            name,
            False,
            witness=rays[0],
            message="moment polytope is unbounded",
        )
    return CheckReport(name, True)


@lru_cache(maxsize=None)
def validate_description(description):
    """Run every geometric check; the description is immutable, so the
    report is cached per value."""
    if isinstance(description, CompactToricSpace):
        reports = (
            _check_compactness(description),
            check_gamma_integrality(description),
            _check_delzant(description),
        )
        return ValidationReport(checks=reports)
    if isinstance(description, BSpaceDescription):
        reports = (
            check_modular_dichotomy(description),
            check_gamma_integrality(description),
            check_mu_integrality(description),
            check_properness(description),
            _check_orientation(description),
            _check_tail_product(description),
            _check_delzant(description),
        )
        return ValidationReport(checks=reports)
    raise TypeError(
        f"expected CompactToricSpace or BSpaceDescription, got "
        f"{type(description).__name__}"
    )


def require_validated(description):
    report = validate_description(description)
    if not report.passed:
        failing = [check.name for check in report.checks if not check.passed]
        raise NotValidatedError(
            f"description fails validation: {', '.join(failing)}", report
        )
    return report


# ----------------------------------------------------------------------
# models


def local_model(description, index):
    """The two signed truncated tails at hypersurface `index`."""
    if not isinstance(description, BSpaceDescription):
        raise TypeError("local models exist only for b_toric descriptions")
    if not 0 <= index < len(description.hypersurfaces):
        raise IndexError(
            f"hypersurface index {index} out of range "
            f"(have {len(description.hypersurfaces)})"
        )
    require_validated(description)
    record = description.hypersurfaces[index]
    threshold = tail_threshold(description, index)
    tails = []
    for side in record.adjacent:
        sign, polyhedron = description.components[side]
        tails.append((sign, tail_cut(polyhedron, record.splitting, threshold)))
    return LocalModel(
        hypersurface=index, threshold=threshold, tails=tuple(tails)
    )


def mapping_torus(record):
    """Present a hypersurface as circle x leaf with identity monodromy."""
    pairing = _linalg.dot(record.modular_weight, record.splitting)
    if pairing != 1:
        raise PairingNotOneError(
            f"modular weight pairs with the splitting to {pairing}, expected 1"
        )
    return MappingTorus(
        circle_generator=record.splitting, leaf=record.leaf, monodromy="identity"
    )


def normalize_splitting(modular_weight, splitting):
    """Canonical representative of the splitting modulo the integer kernel
    of the modular weight.

    The kernel lattice is put in row-HNF form and each pivot coordinate of
    the splitting is reduced into [0, pivot); the result is the unique such
    representative, hence independent of the input representative.
    """
    v = tuple(modular_weight)
    x = tuple(splitting)
    if len(v) != len(x):
        raise DimensionMismatchError(
            "modular weight and splitting have different lengths"
        )
    pairing = _linalg.dot(v, x)
    if pairing != 1:
        raise PairingNotOneError(
            f"modular weight pairs with the splitting to {pairing}, expected 1"
        )
    basis = _linalg.lattice_kernel_basis(v)
    return _linalg.reduce_mod_hnf(x, basis)
