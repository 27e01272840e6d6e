"""Quantization engines.

Compact case: the character is the lattice-point indicator of the moment
polytope.

Singular case: the description's formal character is the signed sum of the
component indicators, an infinite object.  Each hypersurface contributes two
truncated tails of opposite sign which agree as sets beyond an integer
threshold, so they cancel exactly; what survives is the signed sum of the
bounded cores plus bounded inclusion-exclusion corrections where tails of
distinct hypersurfaces overlap inside one component.  Every cancellation and
boundedness claim is certified before it is used; a description whose tails
fail to cancel raises NotFiniteError with the offending piece.  The final
character is re-checked pointwise against the formal character on a window
twice the size of its support.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iter_product
from math import ceil, floor

from . import _linalg
from .characters import PolyhedralCharacter, VirtualCharacter
from .errors import (
    DimensionMismatchError,
    EmptyPolyhedronError,
    NotFiniteError,
    NoVerticesError,
    SelfCheckError,
    ZeroModularWeightError,
)
from .spaces import (
    BSpaceDescription,
    CompactToricSpace,
    LocalModel,
    require_validated,
    tail_cut,
    tail_threshold,
)

__all__ = [
    "TailEnd",
    "ReducedSpaceResult",
    "QRReport",
    "formal_character",
    "tail_matching",
    "collapse_signed_tails",
    "quantize_compact_toric",
    "quantize_b",
    "quantize_description",
    "quantize_local_model",
    "reduced_space_quantization",
    "pointwise_multiplicity",
    "facet_boundary_weights",
    "verify_qr_product",
]


@dataclass(frozen=True)
class TailEnd:
    """One hypersurface's pair of signed tails, ready for cancellation."""

    hypersurface: int
    plus_component: int
    minus_component: int
    cut_normal: tuple  # splitting covector; tails satisfy <cut_normal, x> <= -threshold
    tail_ray: tuple  # primitive direction shared by both tails
    threshold: int


@dataclass(frozen=True)
class ReducedSpaceResult:
    """Signed point count of the reduced space at one weight."""

    weight: tuple
    count: int
    contributions: tuple  # per component, sign if the weight lies inside else 0


@dataclass(frozen=True)
class QRReport:
    """Two-route comparison of quantization and reduction on a product.

    `invariant_from_characters` pairs the two characters and reads off the
    invariant multiplicity; `invariant_from_geometry` counts reduced-space
    points directly, never forming a character.  `first_mismatch`, when not
    None, is (weight, character multiplicity, reduced-space count) at the
    lexicographically first weight where the routes disagree.
    """

    invariant_from_characters: int
    invariant_from_geometry: int
    checked_weights: int
    first_mismatch: tuple = None

    @property
    def matches(self):
        return (
            self.first_mismatch is None
            and self.invariant_from_characters == self.invariant_from_geometry
        )

    def payload(self):
        mismatch = None
        if self.first_mismatch is not None:
            weight, from_character, from_geometry = self.first_mismatch
            mismatch = {
                "weight": list(weight),
                "from_characters": from_character,
                "from_geometry": from_geometry,
            }
        return {
            "matches": self.matches,
            "invariant_from_characters": self.invariant_from_characters,
            "invariant_from_geometry": self.invariant_from_geometry,
            "checked_weights": self.checked_weights,
            "first_mismatch": mismatch,
        }


# ----------------------------------------------------------------------
# formal characters and tail matching


def formal_character(description):
    """The signed sum of component indicators (compact: one positive term)."""
    if isinstance(description, CompactToricSpace):
        return PolyhedralCharacter(description.rank, ((1, description.polytope),))
    return PolyhedralCharacter(description.rank, description.components)


def tail_matching(description):
    """Pair the two signed tail ends of every hypersurface.

    Plus and minus labels come from the component signs; equal signs on the
    two sides cannot cancel and are rejected immediately.
    """
    if not isinstance(description, BSpaceDescription):
        raise TypeError("tail matching applies to b_toric descriptions only")
    ends = []
    for index, record in enumerate(description.hypersurfaces):
        if not any(record.modular_weight):
            raise ZeroModularWeightError(
                f"hypersurface {index} has zero modular weight, so it has no "
                "tail direction to match"
            )
        first, second = record.adjacent
        sign_first = description.components[first][0]
        sign_second = description.components[second][0]
        if sign_first == sign_second:
            raise NotFiniteError(
                "tails at this hypersurface carry equal signs and reinforce "
                "instead of cancelling",
                witness=("hypersurface", index),
            )
        plus, minus = (first, second) if sign_first == 1 else (second, first)
        ends.append(
            TailEnd(
                hypersurface=index,
                plus_component=plus,
                minus_component=minus,
                cut_normal=tuple(record.splitting),
                tail_ray=_linalg.make_primitive(
                    tuple(-x for x in record.modular_weight)
                ),
                threshold=tail_threshold(description, index),
            )
        )
    return tuple(ends)


# ----------------------------------------------------------------------
# lattice enumeration (optionally fanned out over a thread pool)


def _enumerate_pieces(pieces, threads):
    """lattice_points for each polyhedron, merged back in input order."""
    if threads <= 1 or len(pieces) <= 1:
        return [polyhedron.lattice_points() for polyhedron in pieces]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: p.lattice_points(), pieces))


def _accumulate(table, points, coefficient):
    for point in points:
        total = table.get(point, 0) + coefficient
        if total:
            table[point] = total
        else:
            del table[point]


# ----------------------------------------------------------------------
# compact case


def quantize_compact_toric(space, threads=1):
    """Character of a compact toric space: each lattice point of the moment
    polytope contributes one weight with multiplicity 1."""
    if not isinstance(space, CompactToricSpace):
        raise TypeError("expected a CompactToricSpace")
    require_validated(space)
    polytope = space.polytope
    if threads <= 1 or polytope.rank == 0:
        points = polytope.lattice_points()
    else:
        # slab the first axis into contiguous chunks; each slab enumerates in
        # lexicographic order, so concatenation equals the sequential result
        values = [vertex[0] for vertex in polytope.vertices()]
        low, high = ceil(min(values)), floor(max(values))
        width = high - low + 1
        chunk = max(1, -(-width // threads))
        slabs = []
        start = low
        while start <= high:
            stop = min(start + chunk - 1, high)
            axis = (1,) + (0,) * (polytope.rank - 1)
            slabs.append(
                polytope.with_inequality(axis, Fraction(stop)).with_inequality(
                    tuple(-x for x in axis), Fraction(-start)
                )
            )
            start = stop + 1
        points = []
        for slab_points in _enumerate_pieces(slabs, threads):
            points.extend(slab_points)
    return VirtualCharacter(space.rank, ((point, 1) for point in points))


# ----------------------------------------------------------------------
# singular case


def collapse_signed_tails(formal, matching, threads=1, self_check=True):
    """Cancel matched opposite tails of a formal signed character exactly.

    For each term the integer cut at a matched end splits its lattice points
    into a core (inside every cut) and tails; the two tails of each end are
    certified set-equal with opposite signs, so they cancel without
    enumeration.  Overlaps of tails from distinct ends inside one term are
    restored by inclusion-exclusion; every surviving piece must be bounded.
    Raises NotFiniteError with the offending term and direction otherwise.

    The result is certified pointwise against `formal` on a window twice the
    size of its support (SelfCheckError on any disagreement).
    """
    if not isinstance(formal, PolyhedralCharacter):
        raise TypeError("expected a PolyhedralCharacter")
    rank = formal.rank
    ends_at = {}
    for end in matching:
        for side in (end.plus_component, end.minus_component):
            if not 0 <= side < len(formal.terms):
                raise IndexError(f"matching references missing term {side}")
        plus_sign = formal.terms[end.plus_component][0]
        minus_sign = formal.terms[end.minus_component][0]
        if plus_sign + minus_sign != 0:
            raise NotFiniteError(
                "matched tails carry equal signs and reinforce instead of "
                "cancelling",
                witness=("hypersurface", end.hypersurface),
            )
        plus_tail = tail_cut(
            formal.terms[end.plus_component][1], end.cut_normal, end.threshold
        )
        minus_tail = tail_cut(
            formal.terms[end.minus_component][1], end.cut_normal, end.threshold
        )
        if not plus_tail.set_equals(minus_tail):
            raise NotFiniteError(
                "matched tails differ as sets, leaving an uncancelled "
                "unbounded remainder",
                witness=("hypersurface", end.hypersurface),
            )
        ends_at.setdefault(end.plus_component, []).append(end)
        ends_at.setdefault(end.minus_component, []).append(end)

    # assemble the surviving bounded pieces in a fixed order
    pieces = []
    coefficients = []
    for index, (sign, polyhedron) in enumerate(formal.terms):
        ends = ends_at.get(index, [])
        core = polyhedron
        for end in ends:
            # keep <cut_normal, x> >= -threshold + 1; exact on lattice points
            core = core.with_inequality(
                tuple(-x for x in end.cut_normal), Fraction(end.threshold - 1)
            )
        if not core.is_bounded():
            ray = core.recession_rays()[0]
            raise NotFiniteError(
                f"term {index} keeps unbounded direction {ray} after every "
                "matched tail is cut off; no hypersurface end claims it",
                witness=(("term", index), ray),
            )
        pieces.append(core)
        coefficients.append(sign)
        for size in range(2, len(ends) + 1):
            for subset in combinations(ends, size):
                overlap = polyhedron
                for end in subset:
                    overlap = overlap.with_inequality(
                        end.cut_normal, Fraction(-end.threshold)
                    )
                if overlap.is_empty():
                    continue
                if not overlap.is_bounded():
                    ray = overlap.recession_rays()[0]
                    labels = tuple(end.hypersurface for end in subset)
                    raise NotFiniteError(
                        f"tails of hypersurfaces {labels} overlap in term "
                        f"{index} along unbounded direction {ray}",
                        witness=(("term", index) + labels, ray),
                    )
                pieces.append(overlap)
                coefficients.append(sign * (-1) ** (size + 1))

    table = {}
    for coefficient, points in zip(
        coefficients, _enumerate_pieces(pieces, threads)
    ):
        _accumulate(table, points, coefficient)
    character = VirtualCharacter(rank, table)

    if self_check:
        for weight in _verification_box(character, pieces):
            expected = formal.multiplicity(weight)
            found = character.multiplicity(weight)
            if found != expected:
                raise SelfCheckError(
                    f"collapsed character gives {found} at weight {weight} "
                    f"but the formal signed count is {expected}"
                )
    return character


def _verification_box(character, pieces):
    """Lattice window for the pointwise re-check: the character support
    widened by its own extent (plus margin), falling back to the bounding box
    of the collapsed pieces, falling back to a box around the origin."""
    rank = character.rank
    support = character.support()
    columns = None
    if support:
        columns = list(zip(*support))
    else:
        corner_pool = []
        for piece in pieces:
            if not piece.is_empty():
                corner_pool.extend(piece.vertices())
        if corner_pool:
            columns = list(zip(*corner_pool))
    if columns is None:
        ranges = [range(-2, 3)] * rank
    else:
        ranges = []
        for values in columns:
            low, high = floor(min(values)), ceil(max(values))
            pad = (high - low) // 2 + 1
            ranges.append(range(low - pad, high + pad + 1))
    if rank == 0:
        return [()]
    return iter_product(*ranges)


def quantize_b(description, threads=1, self_check=True):
    """Finite character of a validated singular description.

    Raises ZeroModularWeightError before validation when every modular
    weight vanishes: that is the other branch of the modular-weight
    dichotomy, where this engine does not apply.
    """
    if not isinstance(description, BSpaceDescription):
        raise TypeError("expected a BSpaceDescription")
    records = description.hypersurfaces
    if records and all(not any(r.modular_weight) for r in records):
        raise ZeroModularWeightError(
            "every modular weight vanishes; by the modular-weight dichotomy "
            "this description is not of singular type and has no tails to "
            "cancel"
        )
    require_validated(description)
    matching = tail_matching(description)
    return collapse_signed_tails(
        formal_character(description),
        matching,
        threads=threads,
        self_check=self_check,
    )


def quantize_description(description, threads=1, self_check=True):
    if isinstance(description, CompactToricSpace):
        return quantize_compact_toric(description, threads=threads)
    if isinstance(description, BSpaceDescription):
        return quantize_b(description, threads=threads, self_check=self_check)
    raise TypeError(
        f"cannot quantize {type(description).__name__}; expected "
        "CompactToricSpace or BSpaceDescription"
    )


def quantize_local_model(model):
    """Character of a two-tail local model; the certified answer is zero.

    The two tails must agree as sets and carry opposite signs; anything else
    leaves an unbounded remainder and raises NotFiniteError.  Lattice points
    in a box around the truncation face are additionally re-checked one by
    one.
    """
    if not isinstance(model, LocalModel):
        raise TypeError("expected a LocalModel")
    (sign_a, tail_a), (sign_b, tail_b) = model.tails
    if sign_a + sign_b != 0:
        raise NotFiniteError(
            "local model tails carry equal signs; their contributions "
            "reinforce instead of cancelling",
            witness=("hypersurface", model.hypersurface),
        )
    if not tail_a.set_equals(tail_b):
        raise NotFiniteError(
            "local model tails differ as sets, leaving an uncancelled "
            "unbounded remainder",
            witness=("hypersurface", model.hypersurface),
        )
    corners = ()
    if not tail_a.is_empty():
        try:
            corners = tail_a.vertices()
        except NoVerticesError:
            corners = ()
    if corners and tail_a.rank > 0:
        ranges = []
        for values in zip(*corners):
            ranges.append(range(floor(min(values)) - 1, ceil(max(values)) + 2))
        for point in iter_product(*ranges):
            total = sign_a * tail_a.contains_point(point) + (
                sign_b * tail_b.contains_point(point)
            )
            if total:
                raise SelfCheckError(
                    f"local model tails fail to cancel at lattice point "
                    f"{point} (signed count {total})"
                )
    return VirtualCharacter.zero(tail_a.rank)


# ----------------------------------------------------------------------
# reduction and the product verifier


def _as_integer_weight(weight, rank):
    weight = tuple(weight)
    if len(weight) != rank:
        raise DimensionMismatchError(
            f"weight of length {len(weight)} against rank {rank}"
        )
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in weight):
        raise ValueError(f"weight {weight!r} must have integer entries")
    return weight


def pointwise_multiplicity(description, weight):
    """Signed membership count of a weight in the moment data; the direct
    definition of the character multiplicity, no cancellation involved."""
    return formal_character(description).multiplicity(
        _as_integer_weight(weight, description.rank)
    )


def reduced_space_quantization(description, weight):
    """Quantization of the reduced space at one weight, counted directly."""
    require_validated(description)
    weight = _as_integer_weight(weight, description.rank)
    if isinstance(description, CompactToricSpace):
        contributions = (int(description.polytope.contains_point(weight)),)
    else:
        contributions = tuple(
            sign * int(polyhedron.contains_point(weight))
            for sign, polyhedron in description.components
        )
    return ReducedSpaceResult(
        weight=weight, count=sum(contributions), contributions=contributions
    )


def facet_boundary_weights(description, character):
    """Support weights lying on a facet hyperplane of some component they
    belong to.  Only these weights are sensitive to the closed-boundary
    membership convention, so they are reported for audit."""
    if isinstance(description, CompactToricSpace):
        terms = ((1, description.polytope),)
    else:
        terms = description.components
    out = []
    for weight in character.support():
        for _, polyhedron in terms:
            if not polyhedron.contains_point(weight):
                continue
            if any(
                _linalg.dot(normal, weight) == bound
                for normal, bound in polyhedron.inequalities
            ):
                out.append(weight)
                break
    return tuple(out)


def verify_qr_product(description, partner, character=None, threads=1):
    """Check that quantization commutes with reduction against a compact
    partner space.

    Route one pairs the two characters and reads off the invariant
    multiplicity.  Route two never forms the first character: it counts
    reduced-space points of `description` directly at each weight of the
    reflected partner polytope.  The per-weight comparison pins down the
    first disagreement, if any.

    `character` substitutes a precomputed character for `description`
    (route one and the per-weight scan then test that value), so a stale or
    corrupted cache is caught rather than silently trusted.
    """
    if not isinstance(partner, CompactToricSpace):
        raise TypeError("the partner space must be a CompactToricSpace")
    if description.rank != partner.rank:
        raise DimensionMismatchError(
            f"rank {description.rank} space paired with rank {partner.rank}"
        )
    require_validated(description)
    require_validated(partner)
    if character is None:
        character = quantize_description(description, threads=threads)
    partner_character = quantize_compact_toric(partner, threads=threads)
    invariant_from_characters = character.tensor(partner_character).invariant_part()

    reflected = partner.polytope.reflect_through_origin()
    invariant_from_geometry = 0
    checked = 0
    first_mismatch = None
    for weight in reflected.lattice_points():
        direct = pointwise_multiplicity(description, weight)
        invariant_from_geometry += direct
        checked += 1
        if first_mismatch is None and character.multiplicity(weight) != direct:
            first_mismatch = (weight, character.multiplicity(weight), direct)
    return QRReport(
        invariant_from_characters=invariant_from_characters,
        invariant_from_geometry=invariant_from_geometry,
        checked_weights=checked,
        first_mismatch=first_mismatch,
    )
