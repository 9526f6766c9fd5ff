"""Normalized points of projective space over a finite field."""

from __future__ import annotations

import itertools
import re

from .field import FiniteField


class PointError(ValueError):
    pass


class ProjPoint:
    """A point [a:b:...] scaled so its first nonzero coordinate is 1.

    Rank-one coordinates give the canonical singleton point "[1]" used for
    cyclic algebras.
    """

    __slots__ = ("field", "coords")

    def __init__(self, field: FiniteField, coords):
        coords = [int(c) for c in coords]
        if not coords or not any(coords):
            raise PointError("degenerate point: all coordinates zero")
        if any(c < 0 or c >= field.q for c in coords):
            raise PointError(f"coordinates {coords} are not elements of {field}")
        lead = next(c for c in coords if c)
        inv = int(field.inv(lead))
        self.field = field
        self.coords = tuple(int(field.mul(inv, c)) for c in coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjPoint) and self.field == other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __lt__(self, other: "ProjPoint") -> bool:
        return sort_key(self) < sort_key(other)

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"

    def __repr__(self) -> str:
        return f"ProjPoint({self})"

    @property
    def dim(self) -> int:
        return len(self.coords)

    @classmethod
    def parse(cls, field: FiniteField, text: str) -> "ProjPoint":
        m = re.fullmatch(r"\s*\[\s*(\d+(?:\s*:\s*\d+)*)\s*\]\s*", text)
        if not m:
            raise PointError(f"malformed point {text!r}; expected e.g. [1:0]")
        return cls(field, [int(c) for c in m.group(1).split(":")])


def sort_key(pt: ProjPoint) -> tuple:
    # [1:0] < [1:1] < ... < [0:1]: leading-one position first, then the tail
    lead = next(i for i, c in enumerate(pt.coords) if c)
    return (lead, pt.coords[lead + 1:])


def rational_points(field: FiniteField, dim: int) -> list[ProjPoint]:
    """All points of P^(dim-1) over the field in a fixed order."""
    out = []
    for lead in range(dim):
        for tail in itertools.product(field.elements(), repeat=dim - lead - 1):
            out.append(ProjPoint(field, [0] * lead + [1] + list(tail)))
    return out
