"""Lattices in A((t))^r and their relative graded determinants.

A lattice is presented by a square basis matrix over A((t)) (columns
span it over A[[t]]) together with an optional scalar factor kept
symbolically so that unit-scaled lattices retain exact matrix entries.

The unit of a relative determinant is a ratio of *frame units*: for a
presented basis B, the frame unit eta(B) is the constant term of
det(U)^-1 over all integral column operations U that bring B into its
canonical cell form (monomial pivots in distinct rows, all other entries
supported strictly below the pivot exponent of their row).  Because eta
is a single global functional, transitivity, antisymmetry and
common-twist invariance of relative determinants hold exactly by
construction; an independent brute-force quotient computation
(relative_det_bruteforce) cross-checks it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BaseMismatch,
    Indeterminate,
    InsufficientPrecision,
    NonFreeQuotient,
    NotAUnit,
)
from .gradedline import GradedLine, gl_tensor
from .rings import QQ, BaseRing, RingElem
from .series import DEFAULT_PREC, LaurentSeries

Matrix = tuple[tuple[LaurentSeries, ...], ...]  # row-major: m[i][j]


# ---------------------------------------------------------------------------
# matrix helpers over A((t))
# ---------------------------------------------------------------------------


def mat_identity(base: BaseRing, r: int) -> Matrix:
    one = LaurentSeries.one(base)
    zero = LaurentSeries.zero(base)
    return tuple(
        tuple(one if i == j else zero for j in range(r)) for i in range(r)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    r, mid, c = len(a), len(b), len(b[0])
    out = []
    for i in range(r):
        row = []
        for j in range(c):
            acc = None
            for k in range(mid):
                term = a[i][k] * b[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_det(m: Matrix) -> LaurentSeries:
    """Laplace expansion; fine for the small ranks in play."""
    n = len(m)
    if n == 1:
        return m[0][0]
    base = m[0][0].base
    total = LaurentSeries.zero(base)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = tuple(
            tuple(m[i][k] for k in range(n) if k != j) for i in range(1, n)
        )
        term = m[0][j] * mat_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def mat_solve(b: Matrix, y: Matrix, prec: int = DEFAULT_PREC) -> Matrix:
    """Solve b @ x = y by elimination with valuation pivoting.

    Pivots are chosen by least exponent of the reduction; raises
    InsufficientPrecision when a pivot cannot be found within precision.
    """
    r = len(b)
    cols = len(y[0])
    work = [[b[i][j].truncate(prec) for j in range(r)] + [y[i][j].truncate(prec) for j in range(cols)] for i in range(r)]
    perm_rows = list(range(r))
    for col in range(r):
        piv, piv_val = None, None
        for i in range(col, r):
            red = work[i][col].reduction()
            if red.coeffs:
                v = min(red.coeffs)
                if piv_val is None or v < piv_val:
                    piv, piv_val = i, v
        if piv is None:
            raise InsufficientPrecision(
                "matrix is singular modulo nilpotents to the working precision"
            )
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col].invert(prec=prec)
        work[col] = [e * inv for e in work[col]]
        for i in range(r):
            if i == col or work[i][col].is_zero():
                continue
            f = work[i][col]
            work[i] = [a - f * c for a, c in zip(work[i], work[col])]
    return tuple(tuple(work[i][r + j] for j in range(cols)) for i in range(r))


def _min_support(m: Matrix) -> int:
    out = 0
    for row in m:
        for e in row:
            me = e.min_exp()
            if me is not None and me < out:
                out = me
    return out


def _max_support(m: Matrix) -> int:
    out = 0
    for row in m:
        for e in row:
            if e.coeffs:
                out = max(out, max(e.coeffs))
    return out


# ---------------------------------------------------------------------------
# the Lattice type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """Full-rank A[[t]]-submodule of A((t))^r given by scalar * matrix."""

    base: BaseRing
    rank: int
    matrix: Matrix
    scalar: LaurentSeries

    def __post_init__(self):
        if len(self.matrix) != self.rank or any(
            len(row) != self.rank for row in self.matrix
        ):
            raise ValueError("basis matrix shape does not match the rank")

    # -- presentations -----------------------------------------------------

    def basis(self, prec: int = DEFAULT_PREC) -> Matrix:
        """Materialized basis matrix scalar * matrix."""
        if self.scalar == LaurentSeries.one(self.base):
            return self.matrix
        s = self.scalar if self.scalar.prec is None else self.scalar.truncate(prec)
        return tuple(tuple(s * e for e in row) for row in self.matrix)

    def column(self, j: int) -> list[LaurentSeries]:
        return [self.matrix[i][j] for i in range(self.rank)]

    def __str__(self):
        rows = [
            "[" + ", ".join(str(e) for e in row) + "]" for row in self.basis()
        ]
        return "[" + ", ".join(rows) + "]"

    __repr__ = __str__

    def reduce_to(self, target: BaseRing) -> Lattice:
        return Lattice(
            target,
            self.rank,
            tuple(tuple(e.reduce_to(target) for e in row) for row in self.matrix),
            self.scalar.reduce_to(target),
        )


def lattice_from_matrix(base: BaseRing, matrix) -> Lattice:
    m = tuple(tuple(row) for row in matrix)
    return Lattice(base, len(m), m, LaurentSeries.one(base))


def standard_lattice(base: BaseRing, r: int) -> Lattice:
    return Lattice(base, r, mat_identity(base, r), LaurentSeries.one(base))


def scale_lattice(lat: Lattice, f: LaurentSeries) -> Lattice:
    """The lattice f * L, with f a unit of A((t))."""
    if f.base != lat.base:
        raise BaseMismatch("scalar over a different base")
    try:
        f.valuation()
    except Indeterminate:
        raise NotAUnit("scale factor has zero reduction to available precision")
    return Lattice(lat.base, lat.rank, lat.matrix, lat.scalar * f)


def shift_lattice(lat: Lattice, m: int) -> Lattice:
    """t^-m * L."""
    return scale_lattice(lat, LaurentSeries.monomial(lat.base, -m))


def direct_sum(a: Lattice, b: Lattice) -> Lattice:
    if a.base != b.base:
        raise BaseMismatch("direct sum over different bases")
    if a.scalar == b.scalar:
        scalar = a.scalar
        ma, mb = a.matrix, b.matrix
    else:
        scalar = LaurentSeries.one(a.base)
        ma, mb = a.basis(), b.basis()
    r, s = a.rank, b.rank
    zero = LaurentSeries.zero(a.base)
    rows = []
    for i in range(r):
        rows.append(tuple(ma[i]) + (zero,) * s)
    for i in range(s):
        rows.append((zero,) * r + tuple(mb[i]))
    return Lattice(a.base, r + s, tuple(rows), scalar)


# ---------------------------------------------------------------------------
# containment, equality, common sublattices
# ---------------------------------------------------------------------------


def _is_integral(m: Matrix) -> bool:
    for row in m:
        for e in row:
            me = e.min_exp()
            if me is not None and me < 0:
                return False
            if e.prec is not None and e.prec < 0:
                raise InsufficientPrecision(
                    "cannot certify integrality at this precision"
                )
    return True


def transition_matrix(src: Lattice, dst: Lattice, prec: int = DEFAULT_PREC) -> Matrix:
    """The matrix T with basis(src) @ T = basis(dst)."""
    _check_pair(src, dst)
    return mat_solve(src.basis(prec), dst.basis(prec), prec)


def lattice_contains(outer: Lattice, inner: Lattice) -> bool:
    """Whether inner is an A[[t]]-submodule of outer."""
    return _is_integral(transition_matrix(outer, inner))


def lattices_equal(a: Lattice, b: Lattice) -> bool:
    return lattice_contains(a, b) and lattice_contains(b, a)


def common_sublattice(a: Lattice, b: Lattice) -> Lattice:
    """t^N * a for the least N making it contained in both."""
    _check_pair(a, b)
    t = transition_matrix(b, a)
    drop = _min_support(t)
    n = max(0, -drop)
    return shift_lattice(a, -n)


def _check_pair(a: Lattice, b: Lattice):
    if a.base != b.base:
        raise BaseMismatch("lattices over different bases")
    if a.rank != b.rank:
        raise ValueError("lattices of different ranks")


# ---------------------------------------------------------------------------
# elementary divisors relative to the standard flag
# ---------------------------------------------------------------------------


def smith_exponents(a: Lattice, b: Lattice) -> list[int]:
    """Exponents a_1 <= ... <= a_r of a diagonal t-power form of the
    change of basis from a to b; their sum is the valuation of its
    determinant.  Pivoting happens on the reduction."""
    t = transition_matrix(a, b)
    red = [[t[i][j].reduction() for j in range(len(t))] for i in range(len(t))]
    r = len(red)
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    exps = []
    for _ in range(r):
        best = None
        for j in range(r):
            if j in used_cols:
                continue
            for i in range(r):
                if i in used_rows:
                    continue
                if red[i][j].coeffs:
                    v = min(red[i][j].coeffs)
                    if best is None or (v, i, j) < best:
                        best = (v, i, j)
        if best is None:
            raise InsufficientPrecision(
                "change of basis is singular to the working precision"
            )
        v, pi, pj = best
        exps.append(v)
        inv = red[pi][pj].invert()
        for j in range(r):
            if j == pj or j in used_cols:
                continue
            q = red[pi][j] * inv
            if q.is_zero():
                continue
            for i in range(r):
                red[i][j] = red[i][j] - q * red[i][pj]
        used_rows.add(pi)
        used_cols.add(pj)
    return sorted(exps)


# ---------------------------------------------------------------------------
# canonical cell form and the frame unit
# ---------------------------------------------------------------------------


@dataclass
class CellForm:
    """Result of canonical column reduction of a basis matrix."""

    columns: list[list[LaurentSeries]]  # columns[j][i], sorted by pivot row
    pivot_rows: list[int]  # pivot row of column j (equals j after sorting)
    pivot_vals: list[int]
    det_u_const: RingElem  # det(U)(0) for the accumulated operations U

    @property
    def eta(self) -> RingElem:
        return self.det_u_const.inverse()


def _entry_val(e: LaurentSeries) -> int | None:
    red = e.reduction()
    return min(red.coeffs) if red.coeffs else None


def canonical_cell_form(matrix: Matrix, base: BaseRing) -> CellForm:
    r = len(matrix)
    lo = _min_support(matrix)
    hi = _max_support(matrix)
    window = hi + (hi - lo + 2) * (r + 1) + 8
    iprec = window - 3 * lo + 8  # inversion precision: keeps products >= window
    cols: list[list[LaurentSeries]] = [
        [matrix[i][j] for i in range(r)] for j in range(r)
    ]
    det_u = base.one()

    # phase A: staircase on the reductions by total pivoting
    pivot_row: list[int | None] = [None] * r
    pivot_val: list[int | None] = [None] * r
    unprocessed = set(range(r))
    unassigned = set(range(r))
    for _ in range(r):
        best = None
        for j in sorted(unprocessed):
            for i in sorted(unassigned):
                v = _entry_val(cols[j][i])
                if v is not None and (best is None or (v, i, j) < best):
                    best = (v, i, j)
        if best is None:
            raise InsufficientPrecision(
                "basis matrix singular modulo nilpotents within precision"
            )
        v, pi, pj = best
        pivot_row[pj], pivot_val[pj] = pi, v
        # clear the reduction of row pi in the other unprocessed columns
        piv_red = cols[pj][pi].reduction()
        inv_red = piv_red.invert(prec=iprec)
        for j in unprocessed:
            if j == pj:
                continue
            ent_red = cols[j][pi].reduction()
            if ent_red.is_zero():
                continue
            q = (ent_red * inv_red).lift_to(base)
            cols[j] = [a - q * b for a, b in zip(cols[j], cols[pj])]
        unprocessed.discard(pj)
        unassigned.discard(pi)

    row_owner = {pivot_row[j]: j for j in range(r)}

    # phase B: normalize pivots to monomials and clear everything at or
    # above a pivot's exponent in its row; induced junk strictly descends
    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            raise InsufficientPrecision("cell reduction did not stabilize")
        changed = False
        # V2: own pivot must be exactly t^v
        for j in range(r):
            i, v = pivot_row[j], pivot_val[j]
            entry = cols[j][i]
            upper = {k - v: c for k, c in entry.coeffs.items() if k >= v}
            if upper == {0: base.one()}:
                continue
            u = LaurentSeries(base, upper, None if entry.prec is None else entry.prec - v)
            u0 = u.coefficient(0)
            if not u0.is_unit:
                raise InsufficientPrecision("pivot lost its unit leading coefficient")
            uinv = u.invert(prec=iprec)
            cols[j] = [e * uinv for e in cols[j]]
            det_u = det_u * u0.inverse()
            changed = True
        # V3: entries in pivot rows must vanish at exponents >= that pivot's val
        for j in range(r):
            for i in range(r):
                beta = row_owner[i]
                if beta == j:
                    continue
                vb = pivot_val[beta]
                entry = cols[j][i]
                if entry.prec is not None and entry.prec < window:
                    bad = [e for e in range(max(vb, entry.prec), window)]
                    if bad:
                        raise InsufficientPrecision(
                            "cannot certify cell form: coefficients beyond precision"
                        )
                dirt = sorted(e for e in entry.coeffs if vb <= e < window)
                while dirt:
                    e = dirt[0]
                    c = cols[j][i].coefficient(e)
                    if not c.is_zero:
                        shift = LaurentSeries.monomial(base, e - vb, 1)
                        cols[j] = [
                            a - (shift * b).scale(c)
                            for a, b in zip(cols[j], cols[beta])
                        ]
                        changed = True
                    entry = cols[j][i]
                    dirt = sorted(x for x in entry.coeffs if vb <= x < window)
        if not changed:
            break

    # canonical column order: by pivot row
    order = sorted(range(r), key=lambda j: pivot_row[j])
    sign = _perm_sign(order)
    if sign < 0:
        det_u = -det_u
    cols = [cols[j] for j in order]
    rows_sorted = [pivot_row[j] for j in order]
    vals_sorted = [pivot_val[j] for j in order]
    return CellForm(cols, rows_sorted, vals_sorted, det_u)


def _perm_sign(perm: list[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def frame_unit(lat: Lattice) -> RingElem:
    """The global trivialization constant eta of a presented lattice."""
    eta = canonical_cell_form(lat.matrix, lat.base).eta
    if lat.scalar != LaurentSeries.one(lat.base):
        eta = eta * lat.scalar.middle_unit() ** lat.rank
    return eta


def lattice_val_det(lat: Lattice) -> int:
    """Valuation of det(basis), computed on the reduction."""
    d = mat_det(tuple(tuple(e.reduction() for e in row) for row in lat.matrix))
    if d.is_zero():
        raise InsufficientPrecision("determinant vanishes to the working precision")
    v = min(d.coeffs)
    if lat.scalar != LaurentSeries.one(lat.base):
        v += lat.rank * lat.scalar.reduction().valuation()
    return v


# ---------------------------------------------------------------------------
# relative determinants
# ---------------------------------------------------------------------------


def relative_det(a: Lattice, b: Lattice) -> GradedLine:
    """The graded line grdet(a : b) = (grade, unit).

    grade is the valuation of det of the change of basis from a to b;
    unit is the ratio of frame units eta(b)/eta(a).
    """
    _check_pair(a, b)
    grade = lattice_val_det(b) - lattice_val_det(a)
    unit = frame_unit(b) * frame_unit(a).inverse()
    return GradedLine(a.base, grade, unit)


def transitivity_check(l1: Lattice, l2: Lattice, l3: Lattice) -> bool:
    lhs = gl_tensor(relative_det(l1, l2), relative_det(l2, l3))
    rhs = relative_det(l1, l3)
    return lhs == rhs


# ---------------------------------------------------------------------------
# brute-force oracle: literal finite quotients over a deep common sublattice
# ---------------------------------------------------------------------------


def _containment_depth(lat: Lattice, prec: int = DEFAULT_PREC) -> int:
    """Least K with t^K O^r inside the lattice."""
    inv = mat_solve(lat.basis(prec), mat_identity(lat.base, lat.rank), prec)
    return max(0, -_min_support(inv))


def _spread_depth(lat: Lattice, prec: int = DEFAULT_PREC) -> int:
    """Least K' with the lattice inside t^-K' O^r."""
    return max(0, -_min_support(lat.basis(prec)))


def _quotient_vectors(lat: Lattice, k_deep: int, k_wide: int, prec: int):
    """Images of t^j * (basis columns) in t^-k_wide O^r / t^k_deep O^r.

    Returns vectors as dicts keyed by (exponent, component).
    """
    basis = lat.basis(prec)
    r = lat.rank
    vecs = []
    for j in range(k_deep + k_wide + 1):
        for alpha in range(r):
            vec: dict[tuple[int, int], RingElem] = {}
            for i in range(r):
                entry = basis[i][alpha]
                if entry.prec is not None and entry.prec < k_deep - j:
                    raise InsufficientPrecision(
                        "quotient window exceeds entry precision"
                    )
                for e, c in entry.coeffs.items():
                    ee = e + j
                    if -k_wide <= ee < k_deep and not c.is_zero:
                        vec[(ee, i)] = vec.get((ee, i), lat.base.zero()) + c
            vec = {k: v for k, v in vec.items() if not v.is_zero}
            if vec:
                vecs.append(vec)
    return vecs


def _reduce_against(vec: dict, pivots, base: BaseRing) -> dict:
    for key, piv in pivots:
        c = vec.get(key)
        if c is not None and not c.is_zero:
            f = c * piv[key].inverse()
            for k2, v2 in piv.items():
                nv = vec.get(k2, base.zero()) - f * v2
                if nv.is_zero:
                    vec.pop(k2, None)
                else:
                    vec[k2] = nv
    return vec


def _free_rank(vectors, base: BaseRing) -> int:
    """A-rank of the span; NonFreeQuotient if the span is not free."""
    pivots: list[tuple[tuple[int, int], dict]] = []
    leftovers: list[dict] = []
    for vec in vectors:
        vec = _reduce_against(dict(vec), pivots, base)
        unit_keys = [k for k, v in vec.items() if v.is_unit]
        if unit_keys:
            pivots.append((min(unit_keys), vec))
        elif vec:
            leftovers.append(vec)
    # a nilpotent leftover may be explained by pivots found later
    for vec in leftovers:
        vec = _reduce_against(vec, pivots, base)
        if vec:
            raise NonFreeQuotient(
                "quotient module is not free over the nilpotent base"
            )
    return len(pivots)


def quotient_dimension(lat: Lattice, k_deep: int, prec: int = DEFAULT_PREC) -> int:
    """dim_A of lattice / t^k_deep O^r, assuming the containment holds."""
    k_wide = _spread_depth(lat, prec)
    return _free_rank(_quotient_vectors(lat, k_deep, k_wide, prec), lat.base)


def _kept_generator_det(cell: CellForm, base: BaseRing, k_deep: int) -> RingElem:
    """Honest determinant of the monomial-image generators of a cell form
    at the reduction pivot positions; the cell-form theorem predicts 1."""
    r = len(cell.columns)
    min_sup = 0
    for col in cell.columns:
        for entry in col:
            me = entry.min_exp()
            if me is not None and me < min_sup:
                min_sup = me
    vecs: list[tuple[tuple[int, int], dict]] = []  # (pivot key, vector)
    all_images: list[dict] = []
    for j in range(k_deep - min_sup + 1):
        for alpha in range(r):
            vec: dict[tuple[int, int], RingElem] = {}
            for i in range(r):
                entry = cell.columns[alpha][i]
                for e, c in entry.coeffs.items():
                    ee = e + j
                    if ee < k_deep:
                        vec[(ee, i)] = vec.get((ee, i), base.zero()) + c
            vec = {k: v for k, v in vec.items() if not v.is_zero}
            if vec:
                all_images.append(vec)
            if cell.pivot_vals[alpha] + j < k_deep:
                vecs.append(((cell.pivot_vals[alpha] + j, cell.pivot_rows[alpha]), vec))
    vecs.sort(key=lambda p: p[0])
    keys = [k for k, _ in vecs]
    if len(set(keys)) != len(keys):
        raise NonFreeQuotient("pivot pattern collision in oracle")
    # completeness: the spanned rank equals the size of the pivot pattern
    if _free_rank(all_images, base) != len(keys):
        raise NonFreeQuotient("generator images exceed the pivot pattern")
    mat = [[vec.get(key, base.zero()) for _, vec in vecs] for key in keys]
    from .series import ring_det

    return ring_det(mat) if mat else base.one()


def relative_det_bruteforce(
    a: Lattice, b: Lattice, extra_depth: int = 0, prec: int = DEFAULT_PREC
) -> GradedLine:
    """Independent path: grade from literal quotient dimensions over a deep
    monomial common sublattice, unit from frame constants crossed against
    honest kept-generator determinants at two depths."""
    _check_pair(a, b)
    k = max(_containment_depth(a, prec), _containment_depth(b, prec)) + extra_depth
    dim_a = quotient_dimension(a, k, prec)
    dim_b = quotient_dimension(b, k, prec)
    grade = dim_a - dim_b
    units = []
    for lat in (a, b):
        cell = canonical_cell_form(lat.matrix, lat.base)
        d1 = _kept_generator_det(cell, lat.base, k + _spread_depth(lat, prec) + 1)
        d2 = _kept_generator_det(cell, lat.base, k + _spread_depth(lat, prec) + 2)
        if d1 != d2:
            raise InsufficientPrecision("oracle determinant did not stabilize")
        eta = cell.eta * d1
        if lat.scalar != LaurentSeries.one(lat.base):
            eta = eta * lat.scalar.middle_unit() ** lat.rank
        units.append(eta)
    return GradedLine(a.base, grade, units[1] * units[0].inverse())
