"""Virtual characters of a torus with finitely supported integer multiplicities.

Weights of the rank-n torus are identified with Z^n through the standard
basis once and for all; a weight is a plain tuple of ints.  A
`VirtualCharacter` is a finitely supported map weight -> multiplicity in Z,
stored canonically (zero multiplicities dropped, iteration in lexicographic
weight order).  A `PolyhedralCharacter` is a formal signed combination of
polyhedron indicators; it performs no simplification, and collapsing one to
a finite `VirtualCharacter` is the quantization engine's job.
"""

from .errors import DimensionMismatchError
from .polyhedra import LatticePolyhedron

__all__ = [
    "Weight",
    "VirtualCharacter",
    "PolyhedralCharacter",
    "weight_multiplicity",
    "tensor_product",
    "invariant_part",
    "dimension",
    "negate",
]

Weight = tuple  # tuple[int, ...]


def _as_weight(weight, rank):
    weight = tuple(weight)
    if len(weight) != rank:
        raise DimensionMismatchError(
            f"weight of length {len(weight)} used with rank {rank}"
        )
    for entry in weight:
        if not isinstance(entry, int) or isinstance(entry, bool):
            raise ValueError(f"weight entries must be integers, got {entry!r}")
    return weight


class VirtualCharacter:
    """Finitely supported weight -> Z map in canonical form."""

    __slots__ = ("rank", "_multiplicities")

    def __init__(self, rank, multiplicities=None):
        if not isinstance(rank, int) or rank < 0:
            raise ValueError(f"rank must be a nonnegative integer, got {rank!r}")
        table = {}
        if multiplicities:
            items = multiplicities.items() if isinstance(multiplicities, dict) \
                else multiplicities
            for weight, multiplicity in items:
                weight = _as_weight(weight, rank)
                if not isinstance(multiplicity, int) or isinstance(multiplicity, bool):
                    raise ValueError(
                        f"multiplicity must be an integer, got {multiplicity!r}"
                    )
                total = table.get(weight, 0) + multiplicity
                if total:
                    table[weight] = total
                elif weight in table:
                    del table[weight]
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_multiplicities", dict(sorted(table.items())))

    def __setattr__(self, name, value):
        raise AttributeError("VirtualCharacter is immutable")

    @classmethod
    def zero(cls, rank):
        return cls(rank)

    @classmethod
    def delta(cls, weight, multiplicity=1):
        weight = tuple(weight)
        return cls(len(weight), {weight: multiplicity})

    # ------------------------------------------------------------------

    def multiplicity(self, weight):
        return self._multiplicities.get(_as_weight(weight, self.rank), 0)

    def items(self):
        """(weight, multiplicity) pairs in lexicographic weight order."""
        return list(self._multiplicities.items())

    def support(self):
        return list(self._multiplicities)

    def is_zero(self):
        return not self._multiplicities

    def dimension(self):
        """Signed total dimension: the sum of all multiplicities."""
        return sum(self._multiplicities.values())

    def invariant_part(self):
        """Multiplicity of the zero weight."""
        return self._multiplicities.get((0,) * self.rank, 0)

    def negate(self):
        return VirtualCharacter(
            self.rank, {w: -m for w, m in self._multiplicities.items()}
        )

    __neg__ = negate

    def __add__(self, other):
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        if self.rank != other.rank:
            raise DimensionMismatchError(
                f"cannot add characters of ranks {self.rank} and {other.rank}"
            )
        table = dict(self._multiplicities)
        for weight, multiplicity in other._multiplicities.items():
            table[weight] = table.get(weight, 0) + multiplicity
        return VirtualCharacter(self.rank, table)

    def __sub__(self, other):
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        return self + other.negate()

    def tensor(self, other):
        """Convolution of multiplicity maps (character of the tensor product)."""
        if not isinstance(other, VirtualCharacter):
            raise TypeError("tensor expects a VirtualCharacter")
        if self.rank != other.rank:
            raise DimensionMismatchError(
                f"cannot tensor characters of ranks {self.rank} and {other.rank}"
            )
        table = {}
        for wa, ma in self._multiplicities.items():
            for wb, mb in other._multiplicities.items():
                key = tuple(a + b for a, b in zip(wa, wb))
                table[key] = table.get(key, 0) + ma * mb
        return VirtualCharacter(self.rank, table)

    def __eq__(self, other):
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        return self.rank == other.rank and \
            self._multiplicities == other._multiplicities

    __hash__ = None

    def __repr__(self):
        return f"VirtualCharacter(rank={self.rank}, {self._multiplicities!r})"

    # ------------------------------------------------------------------

    def to_payload(self):
        """Canonical serialization; weights sorted lexicographically."""
        return {
            "rank": self.rank,
            "multiplicities": [
                {"weight": list(weight), "mult": multiplicity}
                for weight, multiplicity in self._multiplicities.items()
            ],
        }

    @classmethod
    def from_payload(cls, data):
        rank = data["rank"]
        pairs = [
            (tuple(entry["weight"]), entry["mult"])
            for entry in data["multiplicities"]
        ]
        return cls(rank, pairs)


class PolyhedralCharacter:
    """Formal signed combination of polyhedron indicator functions.

    Evaluation at a weight is the signed membership count.  Terms are kept
    verbatim (no cancellation): turning this into a finite VirtualCharacter
    is an explicit, certified step in the quantization engine.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank, terms):
        terms = tuple((sign, polyhedron) for sign, polyhedron in terms)
        for sign, polyhedron in terms:
            if sign not in (1, -1):
                raise ValueError(f"term sign must be +1 or -1, got {sign!r}")
            if not isinstance(polyhedron, LatticePolyhedron):
                raise TypeError("term must pair a sign with a LatticePolyhedron")
            if polyhedron.rank != rank:
                raise DimensionMismatchError(
                    f"rank {polyhedron.rank} term in rank {rank} character"
                )
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("PolyhedralCharacter is immutable")

    def multiplicity(self, weight):
        weight = _as_weight(weight, self.rank)
        return sum(
            sign for sign, polyhedron in self.terms
            if polyhedron.contains_point(weight)
        )

    def __repr__(self):
        return f"PolyhedralCharacter(rank={self.rank}, {len(self.terms)} terms)"


# ----------------------------------------------------------------------
# functional aliases matching the operation surface


def weight_multiplicity(character, weight):
    return character.multiplicity(weight)


def tensor_product(a, b):
    return a.tensor(b)


def invariant_part(character):
    return character.invariant_part()


def dimension(character):
    return character.dimension()


def negate(character):
    return character.negate()
