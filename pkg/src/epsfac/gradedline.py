"""Graded lines with chosen bases: the value objects of every computation.

A trivialized graded line is a pair (grade, unit): an integer grade and
an invertible scalar recording the comparison of the produced basis with
the canonical one.  Tensor adds grades and multiplies units and never
reorders; the Koszul sign (-1)^(n1*n2) appears only through the explicit
braid operation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BaseMismatch
from .rings import BaseRing, RingElem


@dataclass(frozen=True)
class GradedLine:
    """A graded line together with a trivialization, stored as (grade, unit)."""

    base: BaseRing
    grade: int
    unit: RingElem

    def __post_init__(self):
        if self.unit.base != self.base:
            raise BaseMismatch("unit from a different base ring")
        if not self.unit.is_unit:
            raise ValueError(f"unit {self.unit} is not invertible")

    def __str__(self):
        return f"({self.grade}, {self.unit})"

    __repr__ = __str__

    def reduce_to(self, target: BaseRing) -> GradedLine:
        return GradedLine(target, self.grade, self.unit.reduce_to(target))


def gl_one(base: BaseRing) -> GradedLine:
    return GradedLine(base, 0, base.one())


def gl_tensor(a: GradedLine, b: GradedLine) -> GradedLine:
    if a.base != b.base:
        raise BaseMismatch("tensor of graded lines over different bases")
    return GradedLine(a.base, a.grade + b.grade, a.unit * b.unit)


def gl_inverse(a: GradedLine) -> GradedLine:
    return GradedLine(a.base, -a.grade, a.unit.inverse())


def gl_braid_sign(a: GradedLine, b: GradedLine) -> RingElem:
    """The symmetry-constraint sign (-1)^(grade_a * grade_b)."""
    if a.base != b.base:
        raise BaseMismatch("braid of graded lines over different bases")
    return a.base(-1 if (a.grade % 2 and b.grade % 2) else 1)


def grdet_of_graded_vector_spaces(
    base: BaseRing,
    dims: dict[int, int] | list[tuple[int, int]],
    units: dict[int, RingElem] | None = None,
) -> GradedLine:
    """Alternating graded determinant of a finite graded dimension vector.

    grade = sum (-1)^i h^i; unit = prod unit_i^((-1)^i), defaulting to 1
    (canonical bases).
    """
    pairs = dims.items() if isinstance(dims, dict) else dims
    grade = 0
    unit = base.one()
    for degree, h in pairs:
        if h < 0:
            raise ValueError("negative dimension")
        grade += h if degree % 2 == 0 else -h
        if units and degree in units:
            u = units[degree]
            unit = unit * (u if degree % 2 == 0 else u.inverse())
    return GradedLine(base, grade, unit)
