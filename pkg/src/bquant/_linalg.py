"""Exact rational linear algebra helpers.

Everything here works over Python ints and fractions.Fraction; nothing is
ever rounded.  Scales are small (rank <= 3, handfuls of rows), so the
algorithms favour clarity over asymptotics.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

__all__ = [
    "vector_gcd",
    "make_primitive",
    "scale_to_coprime_ints",
    "dot",
    "matrix_rank",
    "solve_unique",
    "determinant",
    "rational_kernel_basis",
    "lattice_kernel_basis",
    "hnf_rows",
    "reduce_mod_hnf",
    "fm_feasible",
]


def vector_gcd(vec):
    g = 0
    for entry in vec:
        g = gcd(g, abs(entry))
    return g


def make_primitive(vec):
    """Divide an integer vector by the gcd of its entries (direction kept)."""
    g = vector_gcd(vec)
    if g == 0:
        return tuple(vec)
    return tuple(entry // g for entry in vec)


def scale_to_coprime_ints(vec):
    """Scale a rational vector by a positive rational into a coprime integer vector."""
    fracs = [Fraction(entry) for entry in vec]
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    return make_primitive(ints)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _row_reduce(rows):
    """Return (reduced rows, pivot column list); rows are lists of Fractions."""
    mat = [[Fraction(entry) for entry in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [entry * inv for entry in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def matrix_rank(rows):
    _, pivots = _row_reduce(rows)
    return len(pivots)


def solve_unique(rows, rhs):
    """Solve the square-ish system rows * x = rhs; None unless the solution is unique."""
    if not rows:
        return () if not rhs else None
    ncols = len(rows[0])
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    mat, pivots = _row_reduce(augmented)
    pivots_coeff = [c for c in pivots if c < ncols]
    if len(pivots_coeff) < ncols:
        return None  # underdetermined
    for row in mat[len(pivots_coeff):]:
        if row[ncols] != 0:
            return None  # inconsistent
    solution = [Fraction(0)] * ncols
    for row, c in zip(mat, pivots_coeff):
        solution[c] = row[ncols]
    return tuple(solution)


def determinant(rows):
    """Exact determinant via fraction-valued Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    mat = [[Fraction(entry) for entry in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            mat[c], mat[pivot_row] = mat[pivot_row], mat[c]
            det = -det
        det *= mat[c][c]
        inv = 1 / mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c] != 0:
                factor = mat[i][c] * inv
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[c])]
    return det


def rational_kernel_basis(rows, ncols):
    """Primitive integer vectors spanning {x : rows @ x = 0} over the rationals.

    The basis is the standard free-column one from reduced row echelon form,
    so it is deterministic; it need not generate the integer kernel lattice.
    """
    mat, pivots = _row_reduce(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, c in zip(mat, pivots):
            vec[c] = -row[free]
        basis.append(scale_to_coprime_ints(vec))
    return basis


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def lattice_kernel_basis(covector):
    """Z-basis of {u in Z^n : <covector, u> = 0}, in canonical row-HNF form.

    Found by unimodular column operations carrying covector to (g, 0, ..., 0);
    the transformed columns 2..n then form a complete lattice basis of the
    kernel (not merely a rational one).
    """
    n = len(covector)
    cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    work = list(covector)
    for j in range(1, n):
        if work[j] == 0:
            continue
        g, s, t = _xgcd(work[0], work[j])
        a_over_g, b_over_g = work[0] // g, work[j] // g
        col0, colj = cols[0], cols[j]
        new0 = [s * x + t * y for x, y in zip(col0, colj)]
        newj = [-b_over_g * x + a_over_g * y for x, y in zip(col0, colj)]
        cols[0], cols[j] = new0, newj
        work[0], work[j] = g, 0
    kernel_rows = [tuple(cols[j]) for j in range(1, n)]
    return hnf_rows(kernel_rows)


def hnf_rows(rows):
    """Row-style Hermite normal form basis of the lattice generated by `rows`.

    Pivots are positive, strictly right-moving, and entries above each pivot
    are reduced into [0, pivot), which makes the output canonical.
    """
    working = [list(r) for r in rows if any(r)]
    if not working:
        return []
    ncols = len(working[0])
    result = []
    col = 0
    while working and col < ncols:
        involved = [r for r in working if r[col] != 0]
        rest = [r for r in working if r[col] == 0]
        if not involved:
            col += 1
            continue
        # gcd out the column with integer row operations
        while len(involved) > 1:
            involved.sort(key=lambda r: abs(r[col]))
            base = involved[0]
            reduced = [base]
            for r in involved[1:]:
                q = r[col] // base[col]
                new = [x - q * y for x, y in zip(r, base)]
                if new[col] != 0:
                    reduced.append(new)
                elif any(new):
                    rest.append(new)
            involved = reduced
        pivot_row = involved[0]
        if pivot_row[col] < 0:
            pivot_row = [-x for x in pivot_row]
        result.append(pivot_row)
        working = rest
        col += 1
    # normalize entries above each pivot into [0, pivot)
    for i in range(len(result)):
        for j in range(i + 1, len(result)):
            pivot_col = next(c for c, x in enumerate(result[j]) if x != 0)
            p = result[j][pivot_col]
            q = result[i][pivot_col] // p
            if q:
                result[i] = [x - q * y for x, y in zip(result[i], result[j])]
    return [tuple(r) for r in result]


def reduce_mod_hnf(vec, hnf_basis):
    """Canonical representative of vec modulo the lattice with row-HNF basis."""
    out = list(vec)
    for row in hnf_basis:
        pivot_col = next(c for c, x in enumerate(row) if x != 0)
        q = out[pivot_col] // row[pivot_col]
        if q:
            out = [x - q * y for x, y in zip(out, row)]
    return tuple(out)


def _canonical_constraint(coeffs, bound, strict):
    """Scale (coeffs, bound) by a positive rational so coeffs are coprime ints."""
    fracs = [Fraction(c) for c in coeffs]
    bound = Fraction(bound)
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    bound *= denom_lcm
    g = vector_gcd(ints)
    if g > 1:
        ints = [x // g for x in ints]
        bound /= g
    return tuple(ints), bound, strict


def fm_feasible(constraints, nvars):
    """Exact feasibility of {x : <coeffs, x> <= bound (or < bound if strict)}.

    Fourier-Motzkin elimination with strictness tracking: the combination of
    two constraints is strict when either input is.  Fine at desk scale.
    """
    system = {}

    def absorb(coeffs, bound, strict):
        # keep only the tightest constraint per direction
        key = coeffs
        held = system.get(key)
        if held is None or bound < held[0] or (bound == held[0] and strict):
            system[key] = (bound, strict)

    for coeffs, bound, strict in constraints:
        absorb(*_canonical_constraint(coeffs, bound, strict))

    for var in reversed(range(nvars)):
        positive, negative, carried = [], [], {}
        for coeffs, (bound, strict) in system.items():
            coefficient = coeffs[var]
            if coefficient > 0:
                positive.append((coeffs, bound, strict))
            elif coefficient < 0:
                negative.append((coeffs, bound, strict))
            else:
                carried[coeffs] = (bound, strict)
        system = carried
        for up_coeffs, up_bound, up_strict in positive:
            alpha = up_coeffs[var]
            for lo_coeffs, lo_bound, lo_strict in negative:
                beta = lo_coeffs[var]  # beta < 0
                combo = tuple(
                    -beta * u + alpha * l for u, l in zip(up_coeffs, lo_coeffs)
                )
                bound = -beta * up_bound + alpha * lo_bound
                strict = up_strict or lo_strict
                coeffs, bound, strict = _canonical_constraint(combo, bound, strict)
                if any(coeffs):
                    held = system.get(coeffs)
                    if held is None or bound < held[0] or (bound == held[0] and strict):
                        system[coeffs] = (bound, strict)
                elif bound < 0 or (strict and bound == 0):
                    return False

    for _, (bound, strict) in system.items():
        if bound < 0 or (strict and bound == 0):
            return False
    return True


def unimodular_inverse(rows):
    """Exact inverse of an integer matrix with determinant +-1, as int rows."""
    n = len(rows)
    inverse = []
    for j in range(n):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        col = solve_unique(rows, rhs)
        if col is None:
            raise ValueError("matrix is singular")
        inverse.append(col)
    # inverse currently holds columns; transpose and cast to int
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = inverse[j][i]
            if entry.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(entry))
        out.append(tuple(row))
    return out


def subsets_of_size(items, size):
    return combinations(items, size)
