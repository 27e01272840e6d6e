"""Virtual characters and formal polyhedral characters."""

import pytest

from bquant import (
    DimensionMismatchError,
    LatticePolyhedron,
    PolyhedralCharacter,
    VirtualCharacter,
)
from bquant.characters import (
    dimension,
    invariant_part,
    negate,
    tensor_product,
    weight_multiplicity,
)


def char(pairs):
    rank = len(next(iter(pairs))[0])
    return VirtualCharacter(rank, pairs)


def test_canonical_form_drops_zeros_and_merges_duplicates():
    c = VirtualCharacter(1, [((0,), 2), ((0,), -2), ((1,), 1), ((1,), 2)])
    assert c.items() == [((1,), 3)]
    assert c.multiplicity((0,)) == 0


def test_items_sorted_lexicographically():
    c = VirtualCharacter(2, {(1, 0): 1, (0, 5): 2, (0, -1): 3})
    assert c.support() == [(0, -1), (0, 5), (1, 0)]


def test_zero_and_delta():
    assert VirtualCharacter.zero(3).is_zero()
    d = VirtualCharacter.delta((1, 2), -4)
    assert d.rank == 2
    assert d.multiplicity((1, 2)) == -4


def test_weight_validation():
    with pytest.raises(DimensionMismatchError):
        VirtualCharacter(1, [((1, 2), 1)])
    with pytest.raises(ValueError):
        VirtualCharacter(1, [((1,), "x")])
    with pytest.raises(ValueError):
        VirtualCharacter(1, {(True,): 1})


def test_addition_subtraction_negation():
    a = char([((0,), 1), ((1,), 2)])
    b = char([((1,), -2), ((2,), 5)])
    assert (a + b).items() == [((0,), 1), ((2,), 5)]
    assert (a - a).is_zero()
    assert (-a).multiplicity((1,)) == -2
    assert negate(a) == -a
    with pytest.raises(DimensionMismatchError):
        a + VirtualCharacter.zero(2)


def test_tensor_is_convolution():
    a = char([((0,), 1), ((1,), 1)])
    b = char([((0,), 1), ((1,), 1)])
    # (1 + t)^2 = 1 + 2t + t^2
    assert a.tensor(b).items() == [((0,), 1), ((1,), 2), ((2,), 1)]
    assert tensor_product(a, b) == a.tensor(b)


def test_tensor_dimension_multiplicative():
    a = char([((0,), 2), ((3,), -1)])
    b = char([((1,), 4), ((2,), 5)])
    assert a.tensor(b).dimension() == a.dimension() * b.dimension()
    assert dimension(a) == 1


def test_invariant_part_reads_zero_weight():
    a = char([((0, 0), 7), ((1, -1), 2)])
    assert a.invariant_part() == 7
    assert invariant_part(a) == 7
    # pairing against the reflected character counts weight coincidences
    b = char([((-1, 1), 3)])
    assert a.tensor(b).invariant_part() == 6


def test_payload_round_trip():
    a = char([((2, -1), 3), ((0, 0), -2)])
    assert VirtualCharacter.from_payload(a.to_payload()) == a
    assert a.to_payload()["multiplicities"][0]["weight"] == [0, 0]


def test_equality_and_rank():
    assert VirtualCharacter(1, [((1,), 1)]) == VirtualCharacter(1, {(1,): 1})
    assert VirtualCharacter.zero(1) != VirtualCharacter.zero(2)


def test_weight_multiplicity_alias():
    a = char([((5,), 9)])
    assert weight_multiplicity(a, (5,)) == 9


def test_polyhedral_character_signed_membership():
    plus = LatticePolyhedron(1, [((1,), 2)])
    minus = LatticePolyhedron(1, [((1,), -1)])
    f = PolyhedralCharacter(1, [(1, plus), (-1, minus)])
    assert f.multiplicity((-5,)) == 0
    assert f.multiplicity((0,)) == 1
    assert f.multiplicity((2,)) == 1
    assert f.multiplicity((3,)) == 0


def test_polyhedral_character_validation():
    p = LatticePolyhedron(1, [((1,), 0)])
    with pytest.raises(ValueError):
        PolyhedralCharacter(1, [(2, p)])
    with pytest.raises(TypeError):
        PolyhedralCharacter(1, [(1, "not a polyhedron")])
    with pytest.raises(DimensionMismatchError):
        PolyhedralCharacter(2, [(1, p)])
    with pytest.raises(AttributeError):
        PolyhedralCharacter(1, [(1, p)]).rank = 5
