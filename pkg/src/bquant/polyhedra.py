"""Rational polyhedra in H-representation with exact lattice-point machinery.

A `LatticePolyhedron` is a finite set of inequalities <normal, x> <= bound
with primitive integer normals and exact rational bounds, interpreted as a
closed subset of R^rank.  Boundary points count as inside everywhere; the
quantization layer reports which support weights sit on facet boundaries so
that sensitivity to this convention can be audited.

All predicates are decided exactly: emptiness and inclusion through
Fourier-Motzkin feasibility, vertices through exhaustive facet-subset
intersection, recession rays through cone analysis over the lineality space.
Instances are immutable and safe to share across threads.
"""

from fractions import Fraction
from itertools import combinations, product as iter_product
from math import ceil, floor
import re

from . import _linalg
from .errors import (
    DimensionMismatchError,
    EmptyPolyhedronError,
    NoVerticesError,
    ParseError,
    UnboundedPolyhedronError,
)

__all__ = ["LatticePolyhedron"]

_FRACTION_TOKEN = re.compile(r"^-?\d+(/\d+)?$")


def _parse_exact_number(value, where):
    """Accept an int or a 'p/q' string; reject anything inexact."""
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected an exact number, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _FRACTION_TOKEN.match(value):
            raise ParseError(
                f"{where}: {value!r} is not an exact rational literal 'p/q'"
            )
        numerator, _, denominator = value.partition("/")
        if denominator:
            if int(denominator) == 0:
                raise ParseError(f"{where}: zero denominator in {value!r}")
            return Fraction(int(numerator), int(denominator))
        return Fraction(int(numerator))
    raise ParseError(
        f"{where}: expected an integer or 'p/q' string, got {type(value).__name__}"
    )


def _format_exact_number(value):
    return str(Fraction(value))


class LatticePolyhedron:
    """Closed rational polyhedron {x in R^rank : <normal_i, x> <= bound_i}."""

    __slots__ = ("rank", "inequalities", "_cache")

    def __init__(self, rank, inequalities):
        if not isinstance(rank, int) or rank < 0:
            raise ValueError(f"rank must be a nonnegative integer, got {rank!r}")
        merged = {}
        for normal, bound in inequalities:
            normal = tuple(normal)
            if len(normal) != rank:
                raise DimensionMismatchError(
                    f"normal {normal} has length {len(normal)}, expected rank {rank}"
                )
            if not all(isinstance(entry, int) and not isinstance(entry, bool)
                       for entry in normal):
                raise ValueError(f"normal {normal!r} must have integer entries")
            bound = Fraction(bound)
            g = _linalg.vector_gcd(normal)
            if g == 0:
                raise ValueError("inequality normals must be nonzero")
            if g > 1:
                normal = tuple(entry // g for entry in normal)
                bound /= g
            held = merged.get(normal)
            if held is None or bound < held:
                merged[normal] = bound
        object.__setattr__(self, "rank", rank)
        object.__setattr__(
            self, "inequalities", tuple(sorted(merged.items()))
        )
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("LatticePolyhedron is immutable")

    # ------------------------------------------------------------------
    # basics

    def __eq__(self, other):
        """Structural equality of canonical forms; see set_equals for set equality."""
        if not isinstance(other, LatticePolyhedron):
            return NotImplemented
        return self.rank == other.rank and self.inequalities == other.inequalities

    def __hash__(self):
        return hash((self.rank, self.inequalities))

    def __repr__(self):
        return f"LatticePolyhedron(rank={self.rank}, inequalities={self.inequalities!r})"

    def __str__(self):
        if not self.inequalities:
            return f"{{x in R^{self.rank}}}"
        return "{" + "; ".join(
            _inequality_text(normal, bound) for normal, bound in self.inequalities
        ) + "}"

    def _check_rank(self, other):
        if self.rank != other.rank:
            raise DimensionMismatchError(
                f"rank {self.rank} polyhedron combined with rank {other.rank}"
            )

    # ------------------------------------------------------------------
    # membership and feasibility

    def contains_point(self, point):
        point = tuple(point)
        if len(point) != self.rank:
            raise DimensionMismatchError(
                f"point of length {len(point)} tested against rank {self.rank}"
            )
        for normal, bound in self.inequalities:
            value = sum(n * x for n, x in zip(normal, point))
            if value * bound.denominator > bound.numerator:
                return False
        return True

    def _constraints(self):
        return [(normal, bound, False) for normal, bound in self.inequalities]

    def is_empty(self):
        cached = self._cache.get("empty")
        if cached is None:
            cached = not _linalg.fm_feasible(self._constraints(), self.rank)
            self._cache["empty"] = cached
        return cached

    def implies(self, normal, bound):
        """True iff every point of self satisfies <normal, x> <= bound."""
        normal = tuple(normal)
        bound = Fraction(bound)
        # violation set is {x in self : <normal, x> > bound}
        negated = tuple(-entry for entry in normal)
        system = self._constraints() + [(negated, -bound, True)]
        return not _linalg.fm_feasible(system, self.rank)

    def contains_polyhedron(self, other):
        """True iff other is a subset of self."""
        self._check_rank(other)
        return all(other.implies(normal, bound)
                   for normal, bound in self.inequalities)

    def set_equals(self, other):
        """Exact set equality, invariant under reordering/duplication of inequalities."""
        self._check_rank(other)
        if self.inequalities == other.inequalities:
            return True
        mine_in_other = all(self.implies(n, b) for n, b in other.inequalities)
        if not mine_in_other:
            return False
        return all(other.implies(n, b) for n, b in self.inequalities)

    # ------------------------------------------------------------------
    # vertices, rays, boundedness

    def vertices(self):
        """All vertices, sorted; empty tuple iff the polyhedron contains a line."""
        cached = self._cache.get("vertices")
        if cached is not None:
            return cached
        if self.is_empty():
            raise EmptyPolyhedronError("empty polyhedron has no vertices")
        normals = [n for n, _ in self.inequalities]
        bounds = [b for _, b in self.inequalities]
        found = set()
        for subset in combinations(range(len(normals)), self.rank):
            point = _linalg.solve_unique(
                [normals[i] for i in subset], [bounds[i] for i in subset]
            )
            if point is not None and self.contains_point(point):
                found.add(point)
        result = tuple(sorted(found))
        self._cache["vertices"] = result
        return result

    def recession_rays(self):
        """Primitive generators of the recession cone, sorted.

        For a pointed cone these are exactly the extreme rays.  When the cone
        has a lineality space (a full line of unbounded directions, as with
        torus-type components) the result is +-(a basis of that space) plus
        the extreme rays of the pointed remainder, which still generates the
        cone.  Empty iff the polyhedron is bounded.
        """
        cached = self._cache.get("rays")
        if cached is not None:
            return cached
        if self.is_empty():
            raise EmptyPolyhedronError("empty polyhedron has no recession cone")
        n = self.rank
        normals = [normal for normal, _ in self.inequalities]
        lineality = _linalg.rational_kernel_basis(normals, n)
        cone_normals = list(normals)
        for direction in lineality:
            cone_normals.append(direction)
            cone_normals.append(tuple(-x for x in direction))
        rays = set()
        for direction in lineality:
            rays.add(direction)
            rays.add(tuple(-x for x in direction))
        if n > 0:
            for subset in combinations(range(len(cone_normals)), n - 1):
                kernel = _linalg.rational_kernel_basis(
                    [cone_normals[i] for i in subset], n
                )
                if len(kernel) != 1:
                    continue
                generator = kernel[0]
                for candidate in (generator, tuple(-x for x in generator)):
                    if all(_linalg.dot(a, candidate) <= 0 for a in cone_normals):
                        rays.add(candidate)
        result = tuple(sorted(rays))
        self._cache["rays"] = result
        return result

    def is_bounded(self):
        if self.is_empty():
            return True
        return not self.recession_rays()

    # ------------------------------------------------------------------
    # lattice points

    def lattice_points(self):
        """All integer points, in lexicographic order.

        Enumerates the integer bounding box spanned by the vertices and
        filters by exact membership.  Raises UnboundedPolyhedronError when a
        recession ray exists; returns [] for the empty polyhedron.
        """
        cached = self._cache.get("lattice")
        if cached is not None:
            return list(cached)
        if self.is_empty():
            self._cache["lattice"] = ()
            return []
        rays = self.recession_rays()
        if rays:
            raise UnboundedPolyhedronError(
                f"cannot enumerate lattice points of an unbounded polyhedron "
                f"(recession ray {rays[0]})",
                ray=rays[0],
            )
        corners = self.vertices()
        ranges = []
        for coordinate in range(self.rank):
            values = [vertex[coordinate] for vertex in corners]
            ranges.append(range(ceil(min(values)), floor(max(values)) + 1))
        # integer-only membership test: <n, x> * q <= p per inequality
        tests = [
            (normal, bound.numerator, bound.denominator)
            for normal, bound in self.inequalities
        ]
        points = []
        for candidate in iter_product(*ranges):
            ok = True
            for normal, p, q in tests:
                if sum(n * x for n, x in zip(normal, candidate)) * q > p:
                    ok = False
                    break
            if ok:
                points.append(candidate)
        self._cache["lattice"] = tuple(points)
        return points

    def is_lattice_polytope(self):
        if self.is_empty():
            raise EmptyPolyhedronError("empty polyhedron is not a lattice polytope")
        if not self.is_bounded():
            raise UnboundedPolyhedronError(
                "lattice-polytope test requires a bounded polyhedron",
                ray=self.recession_rays()[0],
            )
        return all(
            coordinate.denominator == 1
            for vertex in self.vertices()
            for coordinate in vertex
        )

    # ------------------------------------------------------------------
    # smoothness

    def irredundant_inequalities(self):
        """Subset of inequalities defining the same set, none implied by the rest."""
        cached = self._cache.get("irredundant")
        if cached is not None:
            return cached
        kept = list(self.inequalities)
        changed = True
        while changed:
            changed = False
            for index in range(len(kept)):
                normal, bound = kept[index]
                rest = kept[:index] + kept[index + 1:]
                negated = tuple(-x for x in normal)
                system = [(n, b, False) for n, b in rest]
                system.append((negated, -bound, True))
                if not _linalg.fm_feasible(system, self.rank):
                    del kept[index]
                    changed = True
                    break
        result = tuple(kept)
        self._cache["irredundant"] = result
        return result

    def delzant_failure(self):
        """None when every vertex is smooth, else (vertex, reason).

        A vertex is smooth when it lies on exactly `rank` facets whose
        primitive normals form a basis of the integer lattice (determinant
        +-1).  A bounded polyhedron whose vertex set is a single point *is*
        that point; it counts as smooth (the moment image of a fixed point
        with trivial action), which keeps degenerate point factors
        quantizable.
        """
        if self.is_empty():
            raise EmptyPolyhedronError("empty polyhedron cannot be tested")
        corners = self.vertices()
        if not corners:
            raise NoVerticesError(
                "polyhedron contains a line, so the vertex test is undefined"
            )
        if len(corners) == 1 and self.is_bounded():
            return None
        facets = self.irredundant_inequalities()
        for vertex in corners:
            active = [
                normal
                for normal, bound in facets
                if sum(n * x for n, x in zip(normal, vertex)) == bound
            ]
            if len(active) != self.rank:
                return vertex, f"vertex lies on {len(active)} facets, expected {self.rank}"
            det = _linalg.determinant(active)
            if abs(det) != 1:
                return vertex, f"vertex cone has determinant {det}, expected +-1"
        return None

    def is_delzant(self):
        return self.delzant_failure() is None

    # ------------------------------------------------------------------
    # constructions

    def translate(self, shift):
        shift = tuple(shift)
        if len(shift) != self.rank:
            raise DimensionMismatchError(
                f"shift of length {len(shift)} applied to rank {self.rank}"
            )
        shift = tuple(Fraction(entry) for entry in shift)
        return LatticePolyhedron(
            self.rank,
            [
                (normal, bound + sum(n * s for n, s in zip(normal, shift)))
                for normal, bound in self.inequalities
            ],
        )

    def product(self, other):
        left = [
            (normal + (0,) * other.rank, bound)
            for normal, bound in self.inequalities
        ]
        right = [
            ((0,) * self.rank + normal, bound)
            for normal, bound in other.inequalities
        ]
        return LatticePolyhedron(self.rank + other.rank, left + right)

    def intersection(self, other):
        self._check_rank(other)
        return LatticePolyhedron(
            self.rank, list(self.inequalities) + list(other.inequalities)
        )

    def with_inequality(self, normal, bound):
        return LatticePolyhedron(
            self.rank, list(self.inequalities) + [(tuple(normal), Fraction(bound))]
        )

    def reflect_through_origin(self):
        """The set {-x : x in self}."""
        return LatticePolyhedron(
            self.rank,
            [(tuple(-n for n in normal), bound) for normal, bound in self.inequalities],
        )

    # ------------------------------------------------------------------
    # serialization

    def to_payload(self):
        return {
            "rank": self.rank,
            "inequalities": [
                {"normal": list(normal), "bound": _format_exact_number(bound)}
                for normal, bound in self.inequalities
            ],
        }

    @classmethod
    def from_payload(cls, data, where="polyhedron"):
        if not isinstance(data, dict):
            raise ParseError(f"{where}: expected an object, got {type(data).__name__}")
        unknown = set(data) - {"rank", "inequalities"}
        if unknown:
            raise ParseError(f"{where}: unknown field {sorted(unknown)[0]!r}")
        if "rank" not in data or "inequalities" not in data:
            raise ParseError(f"{where}: needs 'rank' and 'inequalities'")
        rank = data["rank"]
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
            raise ParseError(f"{where}.rank: expected a nonnegative integer")
        raw = data["inequalities"]
        if not isinstance(raw, list):
            raise ParseError(f"{where}.inequalities: expected a list")
        inequalities = []
        for index, item in enumerate(raw):
            spot = f"{where}.inequalities[{index}]"
            if not isinstance(item, dict):
                raise ParseError(f"{spot}: expected an object")
            unknown = set(item) - {"normal", "bound"}
            if unknown:
                raise ParseError(f"{spot}: unknown field {sorted(unknown)[0]!r}")
            if "normal" not in item or "bound" not in item:
                raise ParseError(f"{spot}: needs 'normal' and 'bound'")
            normal = item["normal"]
            if (not isinstance(normal, list)
                    or not all(isinstance(x, int) and not isinstance(x, bool)
                               for x in normal)):
                raise ParseError(f"{spot}.normal: expected a list of integers")
            bound = _parse_exact_number(item["bound"], f"{spot}.bound")
            if len(normal) != rank:
                raise ParseError(
                    f"{spot}.normal: length {len(normal)} does not match rank {rank}"
                )
            if not any(normal):
                raise ParseError(f"{spot}.normal: must be nonzero")
            inequalities.append((tuple(normal), bound))
        try:
            return cls(rank, inequalities)
        except (ValueError, DimensionMismatchError) as exc:
            raise ParseError(f"{where}: {exc}") from exc


def _inequality_text(normal, bound):
    terms = []
    for index, coefficient in enumerate(normal):
        if coefficient == 0:
            continue
        name = f"x{index + 1}"
        if coefficient == 1:
            piece = name
        elif coefficient == -1:
            piece = f"-{name}"
        else:
            piece = f"{coefficient}*{name}"
        if terms and not piece.startswith("-"):
            piece = "+ " + piece
        elif terms:
            piece = "- " + piece[1:]
        terms.append(piece)
    return f"{' '.join(terms)} <= {_format_exact_number(bound)}"
