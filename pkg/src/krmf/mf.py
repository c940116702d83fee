"""Graded matrix factorizations with potential.

An object here is M = (M0, M1, d0, d1) with d0: M0 -> M1, d1: M1 -> M0
and d1 d0 = d0 d1 = w * id for the potential w.  Both halves are free
modules over a polynomial ring (some variables may be nilpotent of a
fixed order); summands carry integer q-shifts, and in M{m} the constants
sit in degree m.  The differential raises q-degree by ddeg = n + 1, so
the entry of d0 from a summand shifted by a into one shifted by b is
homogeneous of degree ddeg + a - b.

Basic pieces are Koszul factors K(p; q) = (R, R{(deg q - deg p)/2}, p, q)
with potential pq.  Tensor products follow the superalgebra sign rule
d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.  Tensoring is associative only
up to a permutation of summands, so composites are normalized to the
left-fold order: a tensor of rank-one factors is assembled directly from
its parity vectors, which agrees with folding tensor() over the factors
one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyring import (
    ONE,
    ZERO,
    Polynomial,
    coeffs_in_var,
    divmod_in_var,
    hbar,
    u_v_pair,
    var_degree,
    var_degree_of,
)


class MFError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sparse polynomial matrices


class PolyMatrix:
    """Sparse matrix over the polynomial ring: dict (row, col) -> entry."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), p in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise MFError("entry (%d,%d) outside %dx%d" % (i, j, rows, cols))
                if p:
                    self.entries[(i, j)] = p

    @staticmethod
    def identity(n: int, scale: Polynomial = ONE) -> "PolyMatrix":
        return PolyMatrix(n, n, {(i, i): scale for i in range(n)})

    @staticmethod
    def zero(rows: int, cols: int) -> "PolyMatrix":
        return PolyMatrix(rows, cols)

    @staticmethod
    def from_rows(rows_of_entries) -> "PolyMatrix":
        rows = len(rows_of_entries)
        cols = len(rows_of_entries[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows_of_entries):
            if len(row) != cols:
                raise MFError("ragged rows")
            for j, p in enumerate(row):
                p = p if isinstance(p, Polynomial) else Polynomial.const(p)
                if p:
                    ent[(i, j)] = p
        return PolyMatrix(rows, cols, ent)

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __bool__(self):
        return bool(self.entries)

    def get(self, i: int, j: int) -> Polynomial:
        return self.entries.get((i, j), ZERO)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MFError("shape mismatch in add")
        ent = dict(self.entries)
        for k, p in other.entries.items():
            s = ent.get(k, ZERO) + p
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return PolyMatrix(self.rows, self.cols, ent)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + other.scale(Polynomial.const(-1))

    def __neg__(self) -> "PolyMatrix":
        return self.scale(Polynomial.const(-1))

    def scale(self, c) -> "PolyMatrix":
        c = c if isinstance(c, Polynomial) else Polynomial.const(c)
        return PolyMatrix(self.rows, self.cols,
                          {k: c * p for k, p in self.entries.items()})

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise MFError("shape mismatch in mul: %dx%d by %dx%d"
                          % (self.rows, self.cols, other.rows, other.cols))
        by_row: dict = {}
        for (i, j), p in other.entries.items():
            by_row.setdefault(i, []).append((j, p))
        acc: dict = {}
        for (i, k), p in self.entries.items():
            for j, q in by_row.get(k, ()):
                key = (i, j)
                s = acc.get(key, ZERO) + p * q
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return PolyMatrix(self.rows, other.cols, acc)

    def map_entries(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols,
                          {k: fn(p) for k, p in self.entries.items()})

    def truncate(self, nilp: dict) -> "PolyMatrix":
        if not nilp:
            return self
        return self.map_entries(lambda p: p.truncate(nilp))

    def rename(self, mapping: dict) -> "PolyMatrix":
        return self.map_entries(lambda p: p.rename(mapping))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows,
                          {(j, i): p for (i, j), p in self.entries.items()})

    @staticmethod
    def kron(a: "PolyMatrix", b: "PolyMatrix") -> "PolyMatrix":
        ent = {}
        for (i1, j1), p in a.entries.items():
            for (i2, j2), q in b.entries.items():
                ent[(i1 * b.rows + i2, j1 * b.cols + j2)] = p * q
        return PolyMatrix(a.rows * b.rows, a.cols * b.cols, ent)

    @staticmethod
    def block(grid) -> "PolyMatrix":
        """grid is a 2d list of PolyMatrix with compatible shapes."""
        row_sizes = [grid[i][0].rows for i in range(len(grid))]
        col_sizes = [grid[0][j].cols for j in range(len(grid[0]))]
        ent = {}
        roff = 0
        for bi, row in enumerate(grid):
            coff = 0
            for bj, blk in enumerate(row):
                if blk.rows != row_sizes[bi] or blk.cols != col_sizes[bj]:
                    raise MFError("inconsistent block shapes")
                for (i, j), p in blk.entries.items():
                    ent[(roff + i, coff + j)] = p
                coff += blk.cols
            roff += row_sizes[bi]
        return PolyMatrix(sum(row_sizes), sum(col_sizes), ent)

    def __repr__(self):
        return "PolyMatrix(%d, %d, %r)" % (self.rows, self.cols, self.entries)


# ---------------------------------------------------------------------------
# factor records: rank-one building blocks of a tensor product

# ("koszul", p, q, m): (R{m}, R{m + (deg q - deg p)/2}, p, q)
# ("circle", y, m):    (0, (R/y^n){m + 1 - n}, 0, 0), y nilpotent
# ("empty", m):        (R{m}, 0, 0, 0)


def koszul_factor(p: Polynomial, q: Polynomial, m: int = 0):
    if p and q and (p * q).is_homogeneous() is False:
        raise MFError("koszul factor with inhomogeneous potential")
    return ("koszul", p, q, m)


def factor_ranks(f) -> tuple:
    kind = f[0]
    if kind == "koszul":
        return (1, 1)
    if kind == "circle":
        return (0, 1)
    if kind == "empty":
        return (1, 0)
    raise MFError("unknown factor %r" % (kind,))


def factor_shifts(f, n: int) -> tuple:
    """(shift of even generator or None, shift of odd generator or None)."""
    kind = f[0]
    if kind == "koszul":
        _, p, q, m = f
        if p and q:
            return (m, m + (q.degree() - p.degree()) // 2)
        if p:
            return (m, m + (n + 1) - p.degree())
        if q:
            return (m, m + q.degree() - (n + 1))
        raise MFError("koszul factor with both entries zero has no degree")
    if kind == "circle":
        _, y, m = f
        return (None, m + 1 - n)
    if kind == "empty":
        return (f[1], None)
    raise MFError("unknown factor")


def factor_potential(f) -> Polynomial:
    if f[0] == "koszul":
        return f[1] * f[2]
    return ZERO


# ---------------------------------------------------------------------------
# the matrix factorization object


@dataclass
class MF:
    pot: Polynomial
    shifts0: tuple
    shifts1: tuple
    d0: PolyMatrix       # rank1 x rank0
    d1: PolyMatrix       # rank0 x rank1
    n: int               # potential parameter: ddeg = n + 1
    nilp: dict
    factors: tuple = ()  # optional tensor decomposition metadata

    @property
    def rank0(self) -> int:
        return len(self.shifts0)

    @property
    def rank1(self) -> int:
        return len(self.shifts1)

    @property
    def ddeg(self) -> int:
        return self.n + 1

    def validate(self, deep: bool = True) -> "MF":
        if self.d0.rows != self.rank1 or self.d0.cols != self.rank0:
            raise MFError("d0 shape %dx%d does not match ranks (%d,%d)"
                          % (self.d0.rows, self.d0.cols, self.rank1, self.rank0))
        if self.d1.rows != self.rank0 or self.d1.cols != self.rank1:
            raise MFError("d1 shape mismatch")
        for (i, j), p in self.d0.entries.items():
            want = self.ddeg + self.shifts0[j] - self.shifts1[i]
            if not p.is_homogeneous() or (p and p.degree() != want):
                raise MFError("d0[%d,%d] has degree %s, expected %d"
                              % (i, j, p.degree(), want))
        for (i, j), p in self.d1.entries.items():
            want = self.ddeg + self.shifts1[j] - self.shifts0[i]
            if not p.is_homogeneous() or (p and p.degree() != want):
                raise MFError("d1[%d,%d] has degree %s, expected %d"
                              % (i, j, p.degree(), want))
        if deep:
            w = self.pot.truncate(self.nilp)
            sq0 = (self.d1 * self.d0).truncate(self.nilp)
            sq1 = (self.d0 * self.d1).truncate(self.nilp)
            if sq0 != PolyMatrix.identity(self.rank0, w).truncate(self.nilp):
                raise MFError("d1 d0 is not potential * id")
            if sq1 != PolyMatrix.identity(self.rank1, w).truncate(self.nilp):
                raise MFError("d0 d1 is not potential * id")
        return self

    def variables(self) -> set:
        vs = set(self.pot.variables())
        for mat in (self.d0, self.d1):
            for p in mat.entries.values():
                vs |= set(p.variables())
        vs |= set(self.nilp)
        return vs

    def rename(self, mapping: dict) -> "MF":
        facs = tuple(_rename_factor(f, mapping) for f in self.factors)
        return MF(self.pot.rename(mapping), self.shifts0, self.shifts1,
                  self.d0.rename(mapping), self.d1.rename(mapping),
                  self.n, {mapping.get(v, v): k for v, k in self.nilp.items()},
                  facs)

    def shift_q(self, m: int) -> "MF":
        # the whole shift is absorbed into the first factor so that
        # rebuilding from the metadata reproduces the shifted summands
        facs = (_shift_factor(self.factors[0], m),) + self.factors[1:] \
            if self.factors else ()
        return MF(self.pot, tuple(s + m for s in self.shifts0),
                  tuple(s + m for s in self.shifts1), self.d0, self.d1,
                  self.n, dict(self.nilp), facs)

    def twist(self) -> "MF":
        """Parity shift <1>: swap the halves and negate the differential."""
        return MF(self.pot, self.shifts1, self.shifts0,
                  -self.d1, -self.d0, self.n, dict(self.nilp), ())


def _rename_factor(f, mapping):
    if f[0] == "koszul":
        return ("koszul", f[1].rename(mapping), f[2].rename(mapping), f[3])
    if f[0] == "circle":
        return ("circle", mapping.get(f[1], f[1]), f[2])
    return f


def _shift_factor(f, m):
    if f[0] == "koszul":
        return ("koszul", f[1], f[2], f[3] + m)
    if f[0] == "circle":
        return ("circle", f[1], f[2] + m)
    return ("empty", f[1] + m)


# ---------------------------------------------------------------------------
# building an MF from a factor list


def parity_vectors(factors) -> tuple:
    """Summand order of the left-fold tensor: lists of per-factor parity
    vectors for the even and odd halves."""
    even, odd = [()], []
    for f in factors:
        r0, r1 = factor_ranks(f)
        # fold order: (new even) = even*e ++ odd*o, (new odd) = odd*e ++ even*o
        ne = ([v + (0,) for v in even] if r0 else []) + \
             ([v + (1,) for v in odd] if r1 else [])
        no = ([v + (0,) for v in odd] if r0 else []) + \
             ([v + (1,) for v in even] if r1 else [])
        even, odd = ne, no
    return even, odd


def mf_from_factors(factors, n: int, nilp: dict | None = None,
                    validate: bool = True) -> MF:
    factors = tuple(factors)
    nilp = dict(nilp or {})
    for f in factors:
        if f[0] == "circle":
            nilp.setdefault(f[1], n)
    even, odd = parity_vectors(factors)
    index_of = {("e", v): i for i, v in enumerate(even)}
    index_of.update({("o", v): i for i, v in enumerate(odd)})

    def shift_of(v):
        total = 0
        for f, p in zip(factors, v):
            s = factor_shifts(f, n)[p]
            total += s
        return total

    shifts0 = tuple(shift_of(v) for v in even)
    shifts1 = tuple(shift_of(v) for v in odd)

    d0_ent, d1_ent = {}, {}
    for par, vecs, ent, other in (("e", even, d0_ent, "o"), ("o", odd, d1_ent, "e")):
        for col, v in enumerate(vecs):
            sign = 1
            for i, f in enumerate(factors):
                if f[0] == "koszul":
                    p, q = f[1], f[2]
                    w = v[:i] + (1 - v[i],) + v[i + 1:]
                    coeff = p if v[i] == 0 else q
                    if coeff:
                        row = index_of[(other, w)]
                        c = coeff if sign > 0 else -coeff
                        ent[(row, col)] = c.truncate(nilp)
                if v[i] == 1:
                    sign = -sign
    pot = ZERO
    for f in factors:
        pot = pot + factor_potential(f)
    pot = pot.truncate(nilp)
    rank0, rank1 = len(even), len(odd)
    m = MF(pot, shifts0, shifts1,
           PolyMatrix(rank1, rank0, d0_ent), PolyMatrix(rank0, rank1, d1_ent),
           n, nilp, factors)
    if validate:
        m.validate()
    return m


def exterior_ops(m: MF, i: int) -> tuple:
    """Odd operators (mu_i, iota_i) on a factor-built MF: exterior
    multiplication by, and contraction against, the odd generator of
    Koszul factor i, with the superalgebra sign (-1)^(parity before i).
    Each operator is a pair (even-to-odd matrix, odd-to-even matrix).
    They satisfy mu_i iota_i + iota_i mu_i = id, anticommute for
    distinct indices, and d = sum_i (p_i mu_i + q_i iota_i)."""
    if not m.factors or m.factors[i][0] != "koszul":
        raise MFError("exterior operators need a koszul factor position")
    even, odd = parity_vectors(m.factors)
    index_of = {("e", v): k for k, v in enumerate(even)}
    index_of.update({("o", v): k for k, v in enumerate(odd)})
    one = ONE
    neg = -ONE

    def build(vecs, par, other, want):
        ent = {}
        for col, v in enumerate(vecs):
            if v[i] != want:
                continue
            w = v[:i] + (1 - v[i],) + v[i + 1:]
            sign = (-1) ** sum(v[:i])
            ent[(index_of[(other, w)], col)] = one if sign > 0 else neg
        return ent

    mu = (PolyMatrix(m.rank1, m.rank0, build(even, "e", "o", 0)),
          PolyMatrix(m.rank0, m.rank1, build(odd, "o", "e", 0)))
    iota = (PolyMatrix(m.rank1, m.rank0, build(even, "e", "o", 1)),
            PolyMatrix(m.rank0, m.rank1, build(odd, "o", "e", 1)))
    return mu, iota


def tensor(a: MF, b: MF, validate: bool = True) -> MF:
    """Superalgebra tensor product.  Agrees with mf_from_factors on the
    concatenated factor lists when b is a single factor (the left-fold
    pattern); other groupings list the same summands in a different
    order, and regroup_iso supplies the matching isomorphism."""
    if a.n != b.n:
        raise MFError("potential parameter mismatch")
    nilp = dict(a.nilp)
    for v, k in b.nilp.items():
        if nilp.setdefault(v, k) != k:
            raise MFError("conflicting nilpotency orders for %r" % v)

    sh0 = tuple(x + y for x in a.shifts0 for y in b.shifts0) + \
          tuple(x + y for x in a.shifts1 for y in b.shifts1)
    sh1 = tuple(x + y for x in a.shifts1 for y in b.shifts0) + \
          tuple(x + y for x in a.shifts0 for y in b.shifts1)
    i00 = PolyMatrix.identity(a.rank0)
    i01 = PolyMatrix.identity(a.rank1)
    ib0 = PolyMatrix.identity(b.rank0)
    ib1 = PolyMatrix.identity(b.rank1)
    k = PolyMatrix.kron
    d0 = PolyMatrix.block([
        [k(a.d0, ib0), -k(i01, b.d1)],
        [k(i00, b.d0), k(a.d1, ib1)],
    ])
    d1 = PolyMatrix.block([
        [k(a.d1, ib0), k(i00, b.d1)],
        [-k(i01, b.d0), k(a.d0, ib1)],
    ])
    facs = a.factors + b.factors if a.factors and b.factors else ()
    m = MF((a.pot + b.pot).truncate(nilp), sh0, sh1,
           d0.truncate(nilp), d1.truncate(nilp), a.n, nilp, facs)
    if validate:
        m.validate()
    return m


# ---------------------------------------------------------------------------
# restriction of scalars


def restrict_matrix(mat: PolyMatrix, var: str, modulus: Polynomial) -> PolyMatrix:
    """Expand a matrix over R[var]/(modulus) into one over R.

    Each slot splits into deg_var(modulus) slots spanned by the powers
    1, var, ..., var^(d-1); entry f becomes the block whose column b is
    f * var^b reduced mod the (monic) modulus, read off by var-power.
    """
    d = var_degree_of(modulus, var)
    x = Polynomial.var(var)
    out: dict = {}
    for (i, j), f in mat.entries.items():
        for b in range(d):
            _, rem = divmod_in_var(f * x ** b, var, modulus)
            for a, c in coeffs_in_var(rem, var).items():
                if c:
                    out[(i * d + a, j * d + b)] = c
    return PolyMatrix(mat.rows * d, mat.cols * d, out)


def restrict_scalars(m: MF, var: str, modulus: Polynomial) -> MF:
    """Present an MF over R[var]/(modulus) as one over R.

    The modulus must be monic in var with var-free lower coefficients
    (for a circle variable it is var^n, matching the nilpotency; for an
    internal edge variable it is the quadratic pinning it to two roots).
    Summand shifts grow by deg(var) per basis power.
    """
    pot = m.pot
    if var in pot.variables():
        # only the class mod the modulus matters; it must be var-free
        _, pot = divmod_in_var(pot, var, modulus)
        if var in pot.variables():
            raise MFError("potential depends on %s" % var)
    d = var_degree_of(modulus, var)
    if d <= 0:
        raise MFError("modulus must involve %s" % var)
    w = var_degree(var)
    shifts0 = tuple(s + k * w for s in m.shifts0 for k in range(d))
    shifts1 = tuple(s + k * w for s in m.shifts1 for k in range(d))
    nilp = {v: e for v, e in m.nilp.items() if v != var}
    return MF(pot, shifts0, shifts1,
              restrict_matrix(m.d0, var, modulus),
              restrict_matrix(m.d1, var, modulus),
              m.n, nilp, ())


def var_mult_matrix(var: str, modulus: Polynomial, slots: int) -> PolyMatrix:
    """Multiplication by var on slots restricted along the given modulus,
    as a block-diagonal matrix (one companion block per original slot)."""
    d = var_degree_of(modulus, var)
    x = Polynomial.var(var)
    comp: dict = {}
    for b in range(d):
        _, rem = divmod_in_var(x ** (b + 1), var, modulus)
        for a, c in coeffs_in_var(rem, var).items():
            if c:
                comp[(a, b)] = c
    out: dict = {}
    for s in range(slots):
        for (a, b), c in comp.items():
            out[(s * d + a, s * d + b)] = c
    return PolyMatrix(slots * d, slots * d, out)


# ---------------------------------------------------------------------------
# the basic diagrams


def arc_factor(head: str, tail: str, n: int):
    """Arc oriented tail -> head: K(hbar_n(head, tail); head - tail)."""
    return koszul_factor(hbar(n, [head, tail], n),
                         Polynomial.var(head) - Polynomial.var(tail))


def arc_mf(head: str, tail: str, n: int) -> MF:
    return mf_from_factors([arc_factor(head, tail, n)], n)


def circle_mf(y: str, n: int) -> MF:
    return mf_from_factors([("circle", y, 0)], n)


def empty_mf(n: int) -> MF:
    return mf_from_factors([("empty", 0)], n)


def wide_edge_factors(x1: str, x2: str, x3: str, x4: str, n: int):
    u, v = u_v_pair(n, x1, x2, x3, x4)
    p1 = Polynomial.var
    return [
        koszul_factor(u, p1(x3) + p1(x4) - p1(x1) - p1(x2)),
        koszul_factor(v, p1(x3) * p1(x4) - p1(x1) * p1(x2), m=-1),
    ]


def wide_edge_mf(x1: str, x2: str, x3: str, x4: str, n: int) -> MF:
    return mf_from_factors(wide_edge_factors(x1, x2, x3, x4, n), n)


def diagram_factors(d, n: int, circle_prefix: str = "y") -> list:
    """Factor list of a resolved diagram: arcs, wide edges, then circles,
    with variables named by the diagram's nodes."""
    facs = []
    for a, b in d.strands:
        facs.append(arc_factor(b, a, n))
    for w in d.wides:
        facs.extend(wide_edge_factors(*w, n))
    for i in range(d.circles):
        facs.append(("circle", "%s%d" % (circle_prefix, i), 0))
    if not facs:
        facs.append(("empty", 0))
    return facs


def mf_of_diagram(d, n: int, validate: bool = True) -> MF:
    return mf_from_factors(diagram_factors(d, n), n, validate=validate)


def potential_of_diagram(d, n: int) -> Polynomial:
    """Boundary potential: sum over boundary points of sign * (n/(n+1)) x^(n+1)."""
    total = ZERO
    c = Fraction(n, n + 1)
    for node, s in d.signs:
        total = total + Polynomial.var(node) ** (n + 1) * (c * s)
    return total


def operad_mul(outer, outer_mf: MF, inserts, validate: bool = True) -> MF:
    """Tensor the MF of the outer diagram with insert MFs, gluing insert
    boundary variables onto the outer hole nodes.  inserts is a list of
    (diagram, MF) pairs; insert-internal variables get a block prefix."""
    if len(inserts) != outer.k:
        raise MFError("need %d inserts" % outer.k)
    result = outer_mf
    for j, (dia, m) in enumerate(inserts, start=1):
        hole = outer.boundary[j]
        own = dia.boundary[0]
        if len(own) != len(hole):
            raise MFError("hole %d arity mismatch" % j)
        mapping = {v: "g%d.%s" % (j, v) for v in m.variables()}
        for b, v in enumerate(own):
            mapping[v] = hole[b]
        result = tensor(result, m.rename(mapping), validate=False)
    if validate:
        result.validate()
    return result
