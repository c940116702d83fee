"""Morphisms of matrix factorizations.

A morphism carries a parity and an integer q-degree.  Even morphisms
commute with the differentials, odd ones anticommute:

    even:  d_N f0 = f1 d_M   (f0: M0 -> N0, f1: M1 -> N1)
    odd:   d_N f0 = -f1 d_M  (f0: M0 -> N1, f1: M1 -> N0)

all equalities modulo the nilpotency truncation of the ambient ring.
The boundary of the morphism complex follows the supercommutator
convention: a map h of parity p has boundary d h - (-1)^p h d, so the
chain condition above says exactly that the boundary vanishes.

The module also houses the images of the elementary cobordisms (zip,
unzip, cup, cap, saddles, inclusion, projection, dots), the reduction
moves (exclusion of a linear Koszul row, stripping of unit entries)
together with their transport maps, and the slice-wise linear algebra:
null-homotopy solving and Ext dimensions on one graded slice, all over
exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .polyring import (
    ONE,
    ZERO,
    Polynomial,
    coeffs_in_var,
    exact_div,
    hbar,
    monomials_of_degree,
    poly_from_pairs,
    u_v_pair,
    var_degree_of,
)
from .mf import (
    MF,
    PolyMatrix,
    arc_factor,
    circle_mf,
    empty_mf,
    mf_from_factors,
    parity_vectors,
    restrict_matrix,
    restrict_scalars,
    tensor,
    wide_edge_factors,
    wide_edge_mf,
)


class MorphError(ValueError):
    pass


def _merge_nilp(a: dict, b: dict) -> dict:
    out = dict(a)
    for v, e in b.items():
        if out.get(v, e) != e:
            raise MorphError("conflicting nilpotency for %s" % v)
        out[v] = e
    return out


def _defect_mats(src: MF, tgt: MF, parity: int, f0: PolyMatrix,
                 f1: PolyMatrix) -> tuple:
    """Components of the boundary d f - (-1)^parity f d of a map of the
    given parity.  A map is a chain map iff both components vanish."""
    if parity == 0:
        return tgt.d0 * f0 - f1 * src.d0, tgt.d1 * f1 - f0 * src.d1
    return tgt.d1 * f0 + f1 * src.d0, tgt.d0 * f1 + f0 * src.d1


@dataclass
class MFMorphism:
    src: MF
    tgt: MF
    parity: int
    qdeg: int
    f0: PolyMatrix
    f1: PolyMatrix

    @property
    def nilp(self) -> dict:
        return _merge_nilp(self.src.nilp, self.tgt.nilp)

    def validate(self, deep: bool = True) -> "MFMorphism":
        m, n = self.src, self.tgt
        if self.parity == 0:
            shapes = ((self.f0, n.rank0, m.rank0), (self.f1, n.rank1, m.rank1))
            tgts = (n.shifts0, n.shifts1)
        else:
            shapes = ((self.f0, n.rank1, m.rank0), (self.f1, n.rank0, m.rank1))
            tgts = (n.shifts1, n.shifts0)
        for mat, rows, cols in shapes:
            if mat.rows != rows or mat.cols != cols:
                raise MorphError("component shape %dx%d, expected %dx%d"
                                 % (mat.rows, mat.cols, rows, cols))
        nilp = self.nilp
        for mat, srcsh, tgtsh in ((self.f0, m.shifts0, tgts[0]),
                                  (self.f1, m.shifts1, tgts[1])):
            for (i, j), p in mat.entries.items():
                want = self.qdeg + srcsh[j] - tgtsh[i]
                pt = p.truncate(nilp)
                if pt and (not pt.is_homogeneous() or pt.degree() != want):
                    raise MorphError("entry (%d,%d) degree %s, expected %d"
                                     % (i, j, pt.degree(), want))
        if deep and not self.is_chain():
            raise MorphError("chain condition fails")
        return self

    def is_chain(self) -> bool:
        a, b = _defect_mats(self.src, self.tgt, self.parity, self.f0, self.f1)
        nilp = self.nilp
        return not a.truncate(nilp) and not b.truncate(nilp)

    def is_zero(self) -> bool:
        nilp = self.nilp
        return not self.f0.truncate(nilp) and not self.f1.truncate(nilp)

    def __add__(self, other: "MFMorphism") -> "MFMorphism":
        if (self.parity, self.qdeg) != (other.parity, other.qdeg):
            raise MorphError("cannot add morphisms of different degree")
        return MFMorphism(self.src, self.tgt, self.parity, self.qdeg,
                          self.f0 + other.f0, self.f1 + other.f1)

    def __sub__(self, other: "MFMorphism") -> "MFMorphism":
        return self + (-other)

    def __neg__(self) -> "MFMorphism":
        return MFMorphism(self.src, self.tgt, self.parity, self.qdeg,
                          -self.f0, -self.f1)

    def scale(self, c) -> "MFMorphism":
        return MFMorphism(self.src, self.tgt, self.parity, self.qdeg,
                          self.f0.scale(c), self.f1.scale(c))

    def truncated(self) -> "MFMorphism":
        nilp = self.nilp
        return MFMorphism(self.src, self.tgt, self.parity, self.qdeg,
                          self.f0.truncate(nilp), self.f1.truncate(nilp))

    def __matmul__(self, other: "MFMorphism") -> "MFMorphism":
        return compose(self, other)

    def scalar(self) -> Fraction:
        """For an even endomorphism of a rank-(1,0) object: its entry."""
        if self.src.rank0 != 1 or self.src.rank1 != 0 or self.parity != 0:
            raise MorphError("not an endomorphism of a rank-(1,0) object")
        return self.f0.get(0, 0).as_scalar()


def identity_mor(m: MF) -> MFMorphism:
    return MFMorphism(m, m, 0, 0, PolyMatrix.identity(m.rank0),
                      PolyMatrix.identity(m.rank1))


def zero_mor(src: MF, tgt: MF, parity: int, qdeg: int) -> MFMorphism:
    if parity == 0:
        f0 = PolyMatrix.zero(tgt.rank0, src.rank0)
        f1 = PolyMatrix.zero(tgt.rank1, src.rank1)
    else:
        f0 = PolyMatrix.zero(tgt.rank1, src.rank0)
        f1 = PolyMatrix.zero(tgt.rank0, src.rank1)
    return MFMorphism(src, tgt, parity, qdeg, f0, f1)


def compose(g: MFMorphism, f: MFMorphism) -> MFMorphism:
    """g after f.  Parities add; the component wiring follows the parity
    of the inner map, with no extra sign (signs live in the tensor rule,
    not in composition)."""
    if (g.src.shifts0 != f.tgt.shifts0 or g.src.shifts1 != f.tgt.shifts1):
        raise MorphError("composition with mismatched middle object")
    if f.parity == 0:
        c0, c1 = g.f0 * f.f0, g.f1 * f.f1
    else:
        c0, c1 = g.f1 * f.f0, g.f0 * f.f1
    nilp = _merge_nilp(g.nilp, f.nilp)
    return MFMorphism(f.src, g.tgt, (g.parity + f.parity) % 2,
                      g.qdeg + f.qdeg, c0.truncate(nilp), c1.truncate(nilp))


def boundary_of(phi: MFMorphism) -> MFMorphism:
    """The supercommutator d.phi - (-1)^|phi| phi.d, as a morphism of
    the opposite parity and q-degree raised by n + 1.  It vanishes
    exactly when phi is a chain map, and its boundary vanishes always."""
    b0, b1 = _defect_mats(phi.src, phi.tgt, phi.parity, phi.f0, phi.f1)
    nilp = phi.nilp
    return MFMorphism(phi.src, phi.tgt, (phi.parity + 1) % 2,
                      phi.qdeg + phi.src.n + 1,
                      b0.truncate(nilp), b1.truncate(nilp))


def dot_mor(m: MF, var: str, power: int = 1) -> MFMorphism:
    """Multiplication by var^power: an even endomorphism of q-degree
    2 * power (a dot on the facet carrying that variable)."""
    c = Polynomial.var(var, power) if power else ONE
    nilp = m.nilp
    return MFMorphism(m, m, 0, 2 * power,
                      PolyMatrix.identity(m.rank0, c).truncate(nilp),
                      PolyMatrix.identity(m.rank1, c).truncate(nilp))


def restrict_mor(phi: MFMorphism, var: str, modulus: Polynomial) -> MFMorphism:
    """Transport a morphism through restrict_scalars on both sides.
    Any matrix morphism is var-linear, so this is always defined."""
    return MFMorphism(restrict_scalars(phi.src, var, modulus),
                      restrict_scalars(phi.tgt, var, modulus),
                      phi.parity, phi.qdeg,
                      restrict_matrix(phi.f0, var, modulus),
                      restrict_matrix(phi.f1, var, modulus))


# ---------------------------------------------------------------------------
# tensor product of morphisms and factor-local constructions


def _sub_blocks(parity: int):
    # summand layout of a binary tensor: even half = A0.B0 ++ A1.B1,
    # odd half = A1.B0 ++ A0.B1
    return ((0, 0), (1, 1)) if parity == 0 else ((1, 0), (0, 1))


def tensor_mor(phi: MFMorphism, psi: MFMorphism) -> MFMorphism:
    """(phi (x) psi)(x (x) y) = (-1)^(|psi| |x|) phi(x) (x) psi(y)."""
    A, B, C, D = phi.src, phi.tgt, psi.src, psi.tgt
    src = tensor(A, C, validate=False)
    tgt = tensor(B, D, validate=False)
    p = (phi.parity + psi.parity) % 2
    halves_src = {0: [A.rank0 * C.rank0, A.rank1 * C.rank1],
                  1: [A.rank1 * C.rank0, A.rank0 * C.rank1]}
    halves_tgt = {0: [B.rank0 * D.rank0, B.rank1 * D.rank1],
                  1: [B.rank1 * D.rank0, B.rank0 * D.rank1]}
    ents = {0: {}, 1: {}}
    for a in (0, 1):
        for c in (0, 1):
            s = (a + c) % 2
            a2, c2 = (a + phi.parity) % 2, (c + psi.parity) % 2
            t = (a2 + c2) % 2
            col0 = sum(halves_src[s][:_sub_blocks(s).index((a, c))])
            row0 = sum(halves_tgt[t][:_sub_blocks(t).index((a2, c2))])
            fa = phi.f0 if a == 0 else phi.f1
            gc = psi.f0 if c == 0 else psi.f1
            blk = PolyMatrix.kron(fa, gc)
            if psi.parity and a:
                blk = -blk
            for (i, j), val in blk.entries.items():
                ents[s][(row0 + i, col0 + j)] = val
    if p == 0:
        shapes = ((tgt.rank0, src.rank0), (tgt.rank1, src.rank1))
    else:
        shapes = ((tgt.rank1, src.rank0), (tgt.rank0, src.rank1))
    nilp = _merge_nilp(src.nilp, tgt.nilp)
    return MFMorphism(src, tgt, p, phi.qdeg + psi.qdeg,
                      PolyMatrix(*shapes[0], ents[0]).truncate(nilp),
                      PolyMatrix(*shapes[1], ents[1]).truncate(nilp))


def _vector_index(factors) -> dict:
    """parity vector -> (parity, index within that half)."""
    evens, odds = parity_vectors(factors)
    out = {v: (0, i) for i, v in enumerate(evens)}
    out.update({v: (1, i) for i, v in enumerate(odds)})
    return out


def _vector_of(factors) -> dict:
    """(parity, index) -> parity vector, inverse of _vector_index."""
    return {pi: v for v, pi in _vector_index(factors).items()}


def tensor_id(src_factors, tgt_factors, i0: int, span: int,
              phi_small: MFMorphism, n: int,
              nilp: dict | None = None) -> MFMorphism:
    """Extend a morphism of the factors [i0, i0 + span) of a fold-built
    tensor by the identity on all other factors.

    phi_small maps the fold of src_factors[i0:i0+span] to the fold of
    the replaced range of tgt_factors; the lists must agree outside it.
    Crossing the factors to the left costs the Koszul sign
    (-1)^(|phi| * parity of the left part)."""
    src_factors = list(src_factors)
    tgt_factors = list(tgt_factors)
    tspan = len(tgt_factors) - (len(src_factors) - span)
    if tspan < 0 or src_factors[:i0] != tgt_factors[:i0] or \
       src_factors[i0 + span:] != tgt_factors[i0 + tspan:]:
        raise MorphError("factor lists differ outside the replaced range")
    src = mf_from_factors(src_factors, n, nilp, validate=False)
    tgt = mf_from_factors(tgt_factors, n, nilp, validate=False)
    p = phi_small.parity
    small_src_idx = _vector_index(src_factors[i0:i0 + span])
    small_tgt_vec = _vector_of(tgt_factors[i0:i0 + tspan])
    big_tgt_idx = _vector_index(tgt_factors)
    small = {0: phi_small.f0, 1: phi_small.f1}
    ents = {0: {}, 1: {}}
    for v, (sv, iv) in _vector_index(src_factors).items():
        left, mid, right = v[:i0], v[i0:i0 + span], v[i0 + span:]
        ms, mi = small_src_idx[mid]
        sign = -1 if (p and sum(left) % 2) else 1
        comp = small[ms]
        for (r, c), val in comp.entries.items():
            if c != mi:
                continue
            w = small_tgt_vec[((ms + p) % 2, r)]
            tv, ti = big_tgt_idx[left + w + right]
            cur = ents[sv].get((ti, iv), ZERO)
            ents[sv][(ti, iv)] = cur + (val if sign > 0 else -val)
    if p == 0:
        shapes = ((tgt.rank0, src.rank0), (tgt.rank1, src.rank1))
    else:
        shapes = ((tgt.rank1, src.rank0), (tgt.rank0, src.rank1))
    nil = _merge_nilp(src.nilp, tgt.nilp)
    return MFMorphism(src, tgt, p, phi_small.qdeg,
                      PolyMatrix(*shapes[0], ents[0]).truncate(nil),
                      PolyMatrix(*shapes[1], ents[1]).truncate(nil))


def permute_factors(m: MF, perm) -> tuple:
    """Reorder the factors of a fold-built MF; returns (new MF, iso).

    perm[k] is the old position of the factor placed at slot k.  Each
    summand maps to its reordered parity vector with the Koszul sign
    (-1)^(number of inversions of perm among the odd slots)."""
    if not m.factors:
        raise MorphError("permute_factors needs factor metadata")
    facs = [m.factors[k] for k in perm]
    out = mf_from_factors(facs, m.n, dict(m.nilp), validate=False)
    new_idx = _vector_index(facs)
    ents = {0: {}, 1: {}}
    for v, (sv, iv) in _vector_index(m.factors).items():
        w = tuple(v[perm[k]] for k in range(len(perm)))
        inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm))
                  if perm[a] > perm[b] and w[a] and w[b])
        _, ti = new_idx[w]
        ents[sv][(ti, iv)] = ONE if inv % 2 == 0 else -ONE
    iso = MFMorphism(m, out, 0, 0,
                     PolyMatrix(out.rank0, m.rank0, ents[0]),
                     PolyMatrix(out.rank1, m.rank1, ents[1]))
    return out, iso


def regroup_iso(parts, n: int, nilp: dict | None = None) -> MFMorphism:
    """Isomorphism from the fold of the concatenated factor lists to the
    left fold of the per-part tensors.

    Regrouping keeps every elementary tensor in place and only changes
    where its summand sits in the block layout, so both components are
    permutation matrices with unit entries and no Koszul signs."""
    parts = [list(p) for p in parts]
    if not parts or any(not p for p in parts):
        raise MorphError("regroup_iso needs nonempty factor lists")
    src = mf_from_factors([f for p in parts for f in p], n, nilp,
                          validate=False)
    folds = [mf_from_factors(p, n, nilp, validate=False) for p in parts]
    tgt = folds[0]
    for f in folds[1:]:
        tgt = tensor(tgt, f, validate=False)
    idx = [_vector_index(p) for p in parts]

    def target_pos(chunks):
        h, i = idx[0][chunks[0]]
        r0, r1 = folds[0].rank0, folds[0].rank1
        for k in range(1, len(parts)):
            h2, i2 = idx[k][chunks[k]]
            s0, s1 = folds[k].rank0, folds[k].rank1
            # block layout of tensor(): even = P0.Q0 ++ P1.Q1,
            # odd = P1.Q0 ++ P0.Q1
            if h2 == 0:
                i = i * s0 + i2
            elif h == 0:
                i = r1 * s0 + i * s1 + i2
            else:
                i = r0 * s0 + i * s1 + i2
            h = (h + h2) % 2
            r0, r1 = r0 * s0 + r1 * s1, r1 * s0 + r0 * s1
        return h, i

    lens = [len(p) for p in parts]
    ents = {0: {}, 1: {}}
    for v, (sv, iv) in _vector_index([f for p in parts for f in p]).items():
        chunks, off = [], 0
        for w in lens:
            chunks.append(v[off:off + w])
            off += w
        th, ti = target_pos(chunks)
        if th != sv:
            raise MorphError("regroup parity bookkeeping is inconsistent")
        ents[sv][(ti, iv)] = ONE
    return MFMorphism(src, tgt, 0, 0,
                      PolyMatrix(tgt.rank0, src.rank0, ents[0]),
                      PolyMatrix(tgt.rank1, src.rank1, ents[1]))


# ---------------------------------------------------------------------------
# elementary cobordism morphisms


def oriented_pair_factors(x1: str, x2: str, x3: str, x4: str, n: int):
    """The two disjoint arcs x1 -> x4 and x2 -> x3: the oriented
    smoothing with the same boundary as the wide edge on x1..x4.  The
    factor order (x4 row first) is the one against which the zip and
    unzip matrices below are chain maps."""
    return [arc_factor(x4, x1, n), arc_factor(x3, x2, n)]


def oriented_pair_mf(x1: str, x2: str, x3: str, x4: str, n: int) -> MF:
    return mf_from_factors(oriented_pair_factors(x1, x2, x3, x4, n), n)


def zip_alpha(n: int, x1: str, x2: str, x3: str, x4: str) -> Polynomial:
    """The correction entry of the zip and unzip matrices: the exact
    quotient ((x3-x1) v - hbar_n(x4,x1) + hbar_n(x3,x2)) / (x3+x4-x1-x2)
    where v is the second potential quotient of the wide edge."""
    X1, X2, X3, X4 = (Polynomial.var(v) for v in (x1, x2, x3, x4))
    _, v = u_v_pair(n, x1, x2, x3, x4)
    num = (X3 - X1) * v - hbar(n, [x4, x1], n) + hbar(n, [x3, x2], n)
    return exact_div(num, X4 + X3 - X1 - X2)


def zip_mor(n: int, xs=("x1", "x2", "x3", "x4")) -> MFMorphism:
    """Oriented smoothing -> wide edge; even, q-degree 1."""
    x1, x2, x3, x4 = xs
    X1, X3 = Polynomial.var(x1), Polynomial.var(x3)
    a = zip_alpha(n, *xs)
    src = oriented_pair_mf(*xs, n)
    tgt = wide_edge_mf(*xs, n)
    f0 = PolyMatrix.from_rows([[X1 - X3, ZERO], [a, ONE]])
    f1 = PolyMatrix.from_rows([[X1, -X3], [-ONE, ONE]])
    return MFMorphism(src, tgt, 0, 1, f0, f1).validate()


def unzip_mor(n: int, xs=("x1", "x2", "x3", "x4")) -> MFMorphism:
    """Wide edge -> oriented smoothing; even, q-degree 1."""
    x1, x2, x3, x4 = xs
    X1, X3 = Polynomial.var(x1), Polynomial.var(x3)
    a = zip_alpha(n, *xs)
    src = wide_edge_mf(*xs, n)
    tgt = oriented_pair_mf(*xs, n)
    f0 = PolyMatrix.from_rows([[ONE, ZERO], [-a, X1 - X3]])
    f1 = PolyMatrix.from_rows([[ONE, X3], [ONE, X1]])
    return MFMorphism(src, tgt, 0, 1, f0, f1).validate()


def saddle_mor(n: int, variant: int = 1,
               xs=("x1", "x2", "x3", "x4")) -> MFMorphism:
    """The saddle between the two planar pairings of four boundary
    points; odd, q-degree n-1.  Variant 1 goes from the pairing
    (x3 x4)(x1 x2) to (x3 x2)(x1 x4), variant 2 back.  Each is defined
    only up to a global sign (rotating the cobordism by 180 degrees
    negates it); the matrices here fix one representative."""
    x1, x2, x3, x4 = xs
    h123 = hbar(n - 1, [x1, x2, x3], n)
    h134 = hbar(n - 1, [x1, x3, x4], n)
    split = [arc_factor(x3, x4, n), arc_factor(x1, x2, n)]
    joined = [arc_factor(x3, x2, n), arc_factor(x1, x4, n)]
    if variant == 1:
        src, tgt = mf_from_factors(split, n), mf_from_factors(joined, n)
    else:
        src, tgt = mf_from_factors(joined, n), mf_from_factors(split, n)
        h123, h134 = h134, h123
    f0 = PolyMatrix.from_rows([[h123, -ONE], [-h134, -ONE]])
    f1 = PolyMatrix.from_rows([[-ONE, ONE], [h123, h134]])
    return MFMorphism(src, tgt, 1, n - 1, f0, f1).validate()


def circle_restricted(y: str, n: int) -> MF:
    """The circle presented as a rank-(0, n) factorization over the
    ground ring, with basis 1, y, ..., y^(n-1)."""
    return restrict_scalars(circle_mf(y, n), y, Polynomial.var(y) ** n)


def cup_mor(n: int, y: str = "y", variant: int = 1) -> MFMorphism:
    """Birth of a circle: empty -> circle; odd, q-degree 1-n.  Both
    variants of the cup give the same map, the unit 1."""
    src = empty_mf(n)
    tgt = circle_restricted(y, n)
    f0 = PolyMatrix(n, 1, {(0, 0): ONE})
    f1 = PolyMatrix.zero(0, 0)
    return MFMorphism(src, tgt, 1, 1 - n, f0, f1).validate()


def cap_mor(n: int, y: str = "y", variant: int = 1) -> MFMorphism:
    """Death of a circle: circle -> empty; odd, q-degree 1-n.  The map
    is the divided derivative (1/n!) (d/dy)^(n-1), which reads off the
    y^(n-1) coefficient with a factor 1/n; both variants coincide."""
    src = circle_restricted(y, n)
    tgt = empty_mf(n)
    f0 = PolyMatrix.zero(0, 0)
    f1 = PolyMatrix(1, n, {(0, n - 1): Polynomial.const(Fraction(1, n))})
    return MFMorphism(src, tgt, 1, 1 - n, f0, f1).validate()


def circle_dot_mor(n: int, y: str = "y", power: int = 1) -> MFMorphism:
    """Multiplication by y^power on the restricted circle."""
    return restrict_mor(dot_mor(circle_mf(y, n), y, power),
                        y, Polynomial.var(y) ** n)


# ---------------------------------------------------------------------------
# the doubled wide edge: inclusion and projection


def doubled_wide_mf(n: int, xs=("x1", "x2", "x3", "x4"),
                    alpha: str = "a") -> MF:
    """Two wide edges composed through a pair of internal points, in its
    finite model: the internal variable alpha survives with minimal
    polynomial (alpha - x3)(alpha - x4), and restricting scalars yields
    the sum of a copy of the wide edge shifted by {-1} (spanned by 1)
    and one shifted by {+1} (spanned by alpha)."""
    x1, x2, x3, x4 = xs
    A = Polynomial.var(alpha)
    X3, X4 = Polynomial.var(x3), Polynomial.var(x4)
    base = wide_edge_mf(*xs, n).shift_q(-1)
    return restrict_scalars(base, alpha, (A - X3) * (A - X4))


def doubled_alpha_mor(n: int, xs=("x1", "x2", "x3", "x4"),
                      alpha: str = "a") -> MFMorphism:
    """Multiplication by the internal variable on the doubled model."""
    x1, x2, x3, x4 = xs
    A = Polynomial.var(alpha)
    X3, X4 = Polynomial.var(x3), Polynomial.var(x4)
    base = wide_edge_mf(*xs, n).shift_q(-1)
    return restrict_mor(dot_mor(base, alpha), alpha, (A - X3) * (A - X4))


def inclusion_mor(n: int, xs=("x1", "x2", "x3", "x4"),
                  alpha: str = "a") -> MFMorphism:
    """Wide edge -> doubled wide edge: the inclusion of the {-1}
    summand; even, q-degree -1."""
    src = wide_edge_mf(*xs, n)
    tgt = doubled_wide_mf(n, xs, alpha)
    f0 = PolyMatrix(tgt.rank0, src.rank0,
                    {(2 * j, j): ONE for j in range(src.rank0)})
    f1 = PolyMatrix(tgt.rank1, src.rank1,
                    {(2 * j, j): ONE for j in range(src.rank1)})
    return MFMorphism(src, tgt, 0, -1, f0, f1).validate()


def projection_mor(n: int, xs=("x1", "x2", "x3", "x4"),
                   alpha: str = "a") -> MFMorphism:
    """Doubled wide edge -> wide edge: the difference quotient in the
    two internal variables, which reads off the coefficient of alpha
    and kills the {-1} summand; even, q-degree -1.  In particular
    projection . inclusion = 0, and projection . alpha . inclusion is
    the identity."""
    src = doubled_wide_mf(n, xs, alpha)
    tgt = wide_edge_mf(*xs, n)
    f0 = PolyMatrix(tgt.rank0, src.rank0,
                    {(j, 2 * j + 1): ONE for j in range(tgt.rank0)})
    f1 = PolyMatrix(tgt.rank1, src.rank1,
                    {(j, 2 * j + 1): ONE for j in range(tgt.rank1)})
    return MFMorphism(src, tgt, 0, -1, f0, f1).validate()


# ---------------------------------------------------------------------------
# reductions: exclusion of a linear Koszul row, stripping of units


@dataclass
class Reduction:
    """A homotopy equivalence src <-> dst recorded by its transports.

    pi (src -> dst, components p0/p1) and iota (dst -> src, components
    i0/i1) are even chain maps with pi . iota = id; subs is the variable
    substitution that is part of pi, applied after its matrix (empty for
    unit stripping)."""
    src: MF
    dst: MF
    p0: PolyMatrix
    p1: PolyMatrix
    i0: PolyMatrix
    i1: PolyMatrix
    subs: dict

    def _sub(self, mat: PolyMatrix) -> PolyMatrix:
        if not self.subs:
            return mat
        return mat.map_entries(lambda p: p.subs(self.subs))

    def check(self) -> "Reduction":
        m, d = self.src, self.dst
        d.validate()
        nilp = _merge_nilp(m.nilp, d.nilp)
        if self._sub(self.p0 * self.i0) != PolyMatrix.identity(d.rank0) or \
           self._sub(self.p1 * self.i1) != PolyMatrix.identity(d.rank1):
            raise MorphError("pi . iota is not the identity")
        if self._sub(self.p1 * m.d0 - d.d0 * self.p0).truncate(nilp) or \
           self._sub(self.p0 * m.d1 - d.d1 * self.p1).truncate(nilp):
            raise MorphError("pi is not a chain map")
        if (m.d0 * self.i0 - self.i1 * d.d0).truncate(nilp) or \
           (m.d1 * self.i1 - self.i0 * d.d1).truncate(nilp):
            raise MorphError("iota is not a chain map")
        return self


def _subs_factor(f, sub):
    if f[0] == "koszul":
        return ("koszul", f[1].subs(sub), f[2].subs(sub), f[3])
    return f


def exclude_koszul_row(m: MF, index: int, var: str) -> Reduction:
    """Contract the Koszul factor K(p; q) at the given index, where
    q = c var + r with a nonzero scalar c and var-free r.  The factor is
    removed and var is replaced by -r/c throughout.  iota carries
    difference-quotient corrections into the odd summands of the
    contracted factor, which make it an honest chain map over the full
    ring, while pi needs the substitution."""
    if not m.factors:
        raise MorphError("exclusion needs factor metadata")
    if var in m.pot.variables():
        raise MorphError("potential depends on %s" % var)
    fac = m.factors[index]
    if fac[0] != "koszul":
        raise MorphError("factor %d is not a Koszul row" % index)
    q = fac[2]
    if var_degree_of(q, var) != 1:
        raise MorphError("q is not linear in %s" % var)
    cq = coeffs_in_var(q, var)
    try:
        c = cq[1].as_scalar()
    except ValueError:
        raise MorphError("coefficient of %s is not a scalar" % var)
    z0 = cq.get(0, ZERO) * Polynomial.const(Fraction(-1) / c)
    sub = {var: z0}
    rest = [f for k, f in enumerate(m.factors) if k != index]
    dst = mf_from_factors(rest, m.n, dict(m.nilp), validate=False)
    if fac[3]:
        dst = dst.shift_q(fac[3])
    dst = MF(dst.pot.subs(sub), dst.shifts0, dst.shifts1,
             dst.d0.map_entries(lambda p: p.subs(sub)),
             dst.d1.map_entries(lambda p: p.subs(sub)),
             dst.n, dst.nilp,
             tuple(_subs_factor(f, sub) for f in dst.factors))
    big_idx = _vector_index(m.factors)
    small_idx = _vector_index(rest)
    big_vec = _vector_of(m.factors)

    def drop(v):
        return v[:index] + v[index + 1:]

    p_ent = {0: {}, 1: {}}
    i_ent = {0: {}, 1: {}}
    for v, (sv, iv) in big_idx.items():
        if v[index] != 0:
            continue
        _, ti = small_idx[drop(v)]
        p_ent[sv][(ti, iv)] = ONE
        i_ent[sv][(iv, ti)] = ONE
    vz = Polynomial.var(var) - z0
    for which, dmat in ((0, m.d0), (1, m.d1)):
        for (iu, iv), entry in dmat.entries.items():
            u = big_vec[((which + 1) % 2, iu)]
            v = big_vec[(which, iv)]
            if u[index] != 0 or v[index] != 0:
                continue
            delta = exact_div(entry - entry.subs(sub), vz)
            if not delta:
                continue
            sgn = -1 if sum(u[:index]) % 2 else 1
            flip = u[:index] + (1,) + u[index + 1:]
            pf, fi = big_idx[flip]
            _, jsrc = small_idx[drop(v)]
            coef = delta * Polynomial.const(Fraction(-sgn) / c)
            cur = i_ent[pf].get((fi, jsrc), ZERO)
            i_ent[pf][(fi, jsrc)] = cur + coef
    red = Reduction(
        m, dst,
        PolyMatrix(dst.rank0, m.rank0, p_ent[0]),
        PolyMatrix(dst.rank1, m.rank1, p_ent[1]),
        PolyMatrix(m.rank0, dst.rank0, i_ent[0]),
        PolyMatrix(m.rank1, dst.rank1, i_ent[1]),
        sub)
    return red.check()


def strip_unit(m: MF) -> Reduction | None:
    """Gaussian elimination of one scalar unit entry of the
    differential, or None when every entry has positive degree.  Factor
    metadata does not survive."""
    for which, dmat in ((0, m.d0), (1, m.d1)):
        for (i, j) in sorted(dmat.entries):
            p = dmat.entries[(i, j)].truncate(m.nilp)
            if not p or p.degree() != 0:
                continue
            return _strip_at(m, which, i, j, p.as_scalar())
    return None


def _strip_at(m: MF, which: int, i: int, j: int, u: Fraction) -> Reduction:
    if which == 1:
        # a unit in d1 is a unit in d0 of the parity-shifted object
        tw = _strip_at(m.twist(), 0, i, j, -u)
        return Reduction(m, tw.dst.twist(), tw.p1, tw.p0,
                         tw.i1, tw.i0, {}).check()
    uinv = Polynomial.const(Fraction(1) / u)
    keep0 = [k for k in range(m.rank0) if k != j]
    keep1 = [k for k in range(m.rank1) if k != i]
    ent = {}
    for r, t in enumerate(keep1):
        ct = m.d0.get(t, j)
        for c, s in enumerate(keep0):
            val = m.d0.get(t, s) - ct * uinv * m.d0.get(i, s)
            if val:
                ent[(r, c)] = val
    d0n = PolyMatrix(len(keep1), len(keep0), ent)
    d1n = PolyMatrix(len(keep0), len(keep1),
                     {(r, c): m.d1.get(s, t)
                      for r, s in enumerate(keep0)
                      for c, t in enumerate(keep1) if m.d1.get(s, t)})
    dst = MF(m.pot, tuple(m.shifts0[k] for k in keep0),
             tuple(m.shifts1[k] for k in keep1), d0n, d1n,
             m.n, dict(m.nilp), ())
    p0 = PolyMatrix(len(keep0), m.rank0,
                    {(r, s): ONE for r, s in enumerate(keep0)})
    p1e = {(r, t): ONE for r, t in enumerate(keep1)}
    for r, t in enumerate(keep1):
        ct = m.d0.get(t, j)
        if ct:
            p1e[(r, i)] = -ct * uinv
    i0e = {(s, r): ONE for r, s in enumerate(keep0)}
    for c, s in enumerate(keep0):
        bs = m.d0.get(i, s)
        if bs:
            i0e[(j, c)] = -uinv * bs
    red = Reduction(
        m, dst, p0,
        PolyMatrix(len(keep1), m.rank1, p1e),
        PolyMatrix(m.rank0, len(keep0), i0e),
        PolyMatrix(m.rank1, len(keep1),
                   {(t, r): ONE for r, t in enumerate(keep1)}),
        {})
    return red.check()


def reduce_mf(m: MF, exclude_vars=(), max_strip: int | None = None) -> tuple:
    """Exclude the listed internal variables (each must occur linearly
    with a scalar coefficient in some Koszul row), then strip unit
    entries until none remain.  Returns (reduced MF, list of steps)."""
    steps = []
    cur = m
    for var in exclude_vars:
        for k, f in enumerate(cur.factors):
            if f[0] != "koszul" or var_degree_of(f[2], var) != 1:
                continue
            try:
                coeffs_in_var(f[2], var)[1].as_scalar()
            except ValueError:
                continue
            step = exclude_koszul_row(cur, k, var)
            steps.append(step)
            cur = step.dst
            break
        else:
            raise MorphError("no linear scalar row found for %s" % var)
    count = 0
    while max_strip is None or count < max_strip:
        step = strip_unit(cur)
        if step is None:
            break
        steps.append(step)
        cur = step.dst
        count += 1
    return cur, steps


def transport(phi: MFMorphism, src_steps=(), tgt_steps=()) -> MFMorphism:
    """Push a morphism through reductions of its source and target:
    pi_tgt . phi . iota_src.  The recorded substitutions are applied
    after the matrix products, in step order; variables excluded on the
    target side disappear from the result."""
    f0, f1 = phi.f0, phi.f1
    src, tgt = phi.src, phi.tgt
    for st in src_steps:
        f0, f1 = f0 * st.i0, f1 * st.i1
        src = st.dst
    subs_seq = []
    for st in tgt_steps:
        if phi.parity == 0:
            f0, f1 = st.p0 * f0, st.p1 * f1
        else:
            f0, f1 = st.p1 * f0, st.p0 * f1
        if st.subs:
            subs_seq.append(st.subs)
        tgt = st.dst
    for sub in subs_seq:
        f0 = f0.map_entries(lambda p, s=sub: p.subs(s))
        f1 = f1.map_entries(lambda p, s=sub: p.subs(s))
    nilp = _merge_nilp(src.nilp, tgt.nilp)
    return MFMorphism(src, tgt, phi.parity, phi.qdeg,
                      f0.truncate(nilp), f1.truncate(nilp))


# ---------------------------------------------------------------------------
# slice-wise linear algebra: homotopies and Ext dimensions


def _entry_monomials(qdeg, src_shifts, tgt_shifts, variables, nilp):
    out = {}
    for j, sj in enumerate(src_shifts):
        for i, ti in enumerate(tgt_shifts):
            d = qdeg + sj - ti
            out[(i, j)] = monomials_of_degree(variables, d, nilp) \
                if d >= 0 else []
    return out


def _morphism_unknowns(src: MF, tgt: MF, parity: int, qdeg: int):
    """Basis of the (parity, qdeg) slice of maps src -> tgt: a list of
    (component, row, col, monomial), with the ambient variables and the
    merged nilpotency."""
    variables = sorted(set(src.variables()) | set(tgt.variables()))
    nilp = _merge_nilp(src.nilp, tgt.nilp)
    if parity == 0:
        specs = ((src.shifts0, tgt.shifts0), (src.shifts1, tgt.shifts1))
    else:
        specs = ((src.shifts0, tgt.shifts1), (src.shifts1, tgt.shifts0))
    slots = []
    for comp, (ss, ts) in enumerate(specs):
        table = _entry_monomials(qdeg, ss, ts, variables, nilp)
        for (i, j) in sorted(table):
            for mo in table[(i, j)]:
                slots.append((comp, i, j, mo))
    return slots, variables, nilp


def _tagged_components(src: MF, tgt: MF, parity: int, slots) -> tuple:
    """The generic map of the slice: each unknown appears as its
    monomial times a fresh tag variable #u<k>."""
    if parity == 0:
        shapes = ((tgt.rank0, src.rank0), (tgt.rank1, src.rank1))
    else:
        shapes = ((tgt.rank1, src.rank0), (tgt.rank0, src.rank1))
    ents = {0: {}, 1: {}}
    for k, (comp, i, j, mo) in enumerate(slots):
        term = poly_from_pairs([(mo, Fraction(1))]) * \
            Polynomial.var("#u%d" % k)
        ents[comp][(i, j)] = ents[comp].get((i, j), ZERO) + term
    return (PolyMatrix(*shapes[0], ents[0]), PolyMatrix(*shapes[1], ents[1]))


def _split_tag(mono):
    tagidx = None
    rest = []
    for v, e in mono:
        if v.startswith("#u"):
            tagidx = int(v[2:])
        else:
            rest.append((v, e))
    return tagidx, tuple(rest)


def _defect_buckets(src, tgt, parity, f0, f1, nilp) -> dict:
    """Rows of the linearized boundary operator applied to a tagged
    generic map: (component, row, col, monomial) -> {tag: coefficient}."""
    a, b = _defect_mats(src, tgt, parity, f0, f1)
    buckets = {}
    for comp, mat in ((0, a), (1, b)):
        for (i, j), poly in mat.entries.items():
            poly = poly.truncate(nilp)
            for mono, coef in poly.terms.items():
                tagidx, rest = _split_tag(mono)
                if tagidx is None:
                    raise MorphError("untagged term in defect")
                row = buckets.setdefault((comp, i, j, rest), {})
                row[tagidx] = row.get(tagidx, Fraction(0)) + coef
    return buckets


def _matrices_from_solution(src, tgt, parity, slots, values) -> tuple:
    if parity == 0:
        shapes = ((tgt.rank0, src.rank0), (tgt.rank1, src.rank1))
    else:
        shapes = ((tgt.rank1, src.rank0), (tgt.rank0, src.rank1))
    ents = {0: {}, 1: {}}
    for (comp, i, j, mo), v in zip(slots, values):
        if not v:
            continue
        cur = ents[comp].get((i, j), ZERO)
        ents[comp][(i, j)] = cur + poly_from_pairs([(mo, v)])
    return (PolyMatrix(*shapes[0], ents[0]), PolyMatrix(*shapes[1], ents[1]))


def _rank(rows, ncols) -> int:
    """Rank of a list of sparse rows (dict col -> Fraction), by exact
    elimination with first-nonzero pivoting."""
    dense = []
    for r in rows:
        vec = [Fraction(0)] * ncols
        for c, v in r.items():
            vec[c] = v
        dense.append(vec)
    rank, col, nrows = 0, 0, len(dense)
    while rank < nrows and col < ncols:
        piv = next((r for r in range(rank, nrows) if dense[r][col]), None)
        if piv is None:
            col += 1
            continue
        dense[rank], dense[piv] = dense[piv], dense[rank]
        prow = dense[rank]
        pv = prow[col]
        for r in range(nrows):
            if r != rank and dense[r][col]:
                f = dense[r][col] / pv
                row = dense[r]
                for c in range(col, ncols):
                    if prow[c]:
                        row[c] -= f * prow[c]
        rank += 1
        col += 1
    return rank


def _solve_affine(rows, rhs, ncols):
    """One exact solution of rows . x = rhs, or None if inconsistent."""
    dense = []
    for r, b in zip(rows, rhs):
        vec = [Fraction(0)] * (ncols + 1)
        for c, v in r.items():
            vec[c] = v
        vec[ncols] = b
        dense.append(vec)
    rank, col, nrows = 0, 0, len(dense)
    pivots = []
    while rank < nrows and col < ncols:
        piv = next((r for r in range(rank, nrows) if dense[r][col]), None)
        if piv is None:
            col += 1
            continue
        dense[rank], dense[piv] = dense[piv], dense[rank]
        prow = dense[rank]
        pv = prow[col]
        for r in range(nrows):
            if r != rank and dense[r][col]:
                f = dense[r][col] / pv
                row = dense[r]
                for c in range(col, ncols + 1):
                    if prow[c]:
                        row[c] -= f * prow[c]
        pivots.append(col)
        rank += 1
        col += 1
    if any(dense[r][ncols] for r in range(rank, nrows)):
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = dense[r][ncols] / dense[r][c]
    return x


def solve_homotopy(phi: MFMorphism) -> MFMorphism | None:
    """Find h with phi = d h - (-1)^|h| h d, or None when none exists.
    h has the opposite parity and q-degree qdeg - (n+1); the answer is
    verified by substitution before returning."""
    src, tgt = phi.src, phi.tgt
    hp = (phi.parity + 1) % 2
    hq = phi.qdeg - (src.n + 1)
    slots, _, nilp = _morphism_unknowns(src, tgt, hp, hq)
    h0, h1 = _tagged_components(src, tgt, hp, slots)
    buckets = _defect_buckets(src, tgt, hp, h0, h1, nilp)
    goal = {0: phi.f0.truncate(nilp), 1: phi.f1.truncate(nilp)}
    for comp in (0, 1):
        for (i, j), poly in goal[comp].entries.items():
            for mono in poly.terms:
                buckets.setdefault((comp, i, j, mono), {})
    rows, rhs = [], []
    for key in sorted(buckets):
        comp, i, j, mono = key
        rows.append(buckets[key])
        rhs.append(goal[comp].get(i, j).coeff(mono))
    sol = _solve_affine(rows, rhs, len(slots))
    if sol is None:
        return None
    m0, m1 = _matrices_from_solution(src, tgt, hp, slots, sol)
    h = MFMorphism(src, tgt, hp, hq, m0, m1)
    a, b = _defect_mats(src, tgt, hp, h.f0, h.f1)
    if (a - phi.f0).truncate(nilp) or (b - phi.f1).truncate(nilp):
        raise MorphError("homotopy verification failed")
    return h


def is_null_homotopic(phi: MFMorphism) -> bool:
    return solve_homotopy(phi) is not None


def _composite_of(F: MFMorphism, terms) -> MFMorphism:
    out = None
    for c, post, pre in terms:
        g = F if pre is None else compose(F, pre)
        if post is not None:
            g = compose(post, g)
        if c != 1:
            g = g.scale(Fraction(c))
        out = g if out is None else out + g
    return out


def solve_composite_equations(src: MF, tgt: MF, parity: int, qdeg: int,
                              equations, require_unique: bool = False
                              ) -> MFMorphism | None:
    """A chain map F in the (parity, qdeg) slice solving a list of
    linear composite equations, or None when there is none.

    Each equation is a pair (terms, rhs) asserting
    sum_t coeff_t . post_t . F . pre_t = rhs, where terms is a list of
    (coeff, post, pre); post or pre may be None for the identity, and
    rhs may be None for zero.  The answer is verified by substitution,
    and with require_unique the slice must not admit a second
    solution."""
    slots, _, nilp = _morphism_unknowns(src, tgt, parity, qdeg)
    f0, f1 = _tagged_components(src, tgt, parity, slots)
    F = MFMorphism(src, tgt, parity, qdeg, f0, f1)
    buckets = _defect_buckets(src, tgt, parity, f0, f1, nilp)
    rows, rhs = [], []
    for key in sorted(buckets):
        rows.append(buckets[key])
        rhs.append(Fraction(0))
    for terms, want in equations:
        g = _composite_of(F, terms)
        enilp = g.nilp if want is None else _merge_nilp(g.nilp, want.nilp)
        ebuckets = {}
        for comp, mat in ((0, g.f0), (1, g.f1)):
            for (i, j), poly in mat.entries.items():
                for mono, coef in poly.truncate(enilp).terms.items():
                    tagidx, rest = _split_tag(mono)
                    if tagidx is None:
                        raise MorphError("untagged term in equation")
                    row = ebuckets.setdefault((comp, i, j, rest), {})
                    row[tagidx] = row.get(tagidx, Fraction(0)) + coef
        wants = None
        if want is not None:
            if (g.parity, g.qdeg) != (want.parity, want.qdeg):
                raise MorphError("equation degree mismatch")
            wants = {0: want.f0.truncate(enilp), 1: want.f1.truncate(enilp)}
            for comp in (0, 1):
                for (i, j), poly in wants[comp].entries.items():
                    for mono in poly.terms:
                        ebuckets.setdefault((comp, i, j, mono), {})
        for key in sorted(ebuckets):
            comp, i, j, mono = key
            rows.append(ebuckets[key])
            rhs.append(wants[comp].get(i, j).coeff(mono)
                       if wants is not None else Fraction(0))
    if require_unique and _rank(rows, len(slots)) != len(slots):
        raise MorphError("composite equations do not pin the map")
    sol = _solve_affine(rows, rhs, len(slots))
    if sol is None:
        return None
    m0, m1 = _matrices_from_solution(src, tgt, parity, slots, sol)
    out = MFMorphism(src, tgt, parity, qdeg, m0, m1).validate()
    for terms, want in equations:
        g = _composite_of(out, terms)
        bad = g if want is None else g - want
        if not bad.is_zero():
            raise MorphError("composite equation verification failed")
    return out


def chain_map_slice_dim(src: MF, tgt: MF, parity: int, qdeg: int) -> int:
    """Dimension over Q of the chain maps in one graded slice."""
    slots, _, nilp = _morphism_unknowns(src, tgt, parity, qdeg)
    if not slots:
        return 0
    f0, f1 = _tagged_components(src, tgt, parity, slots)
    rows = _defect_buckets(src, tgt, parity, f0, f1, nilp)
    return len(slots) - _rank([rows[k] for k in sorted(rows)], len(slots))


def ext_dim_slice(src: MF, tgt: MF, parity: int, qdeg: int) -> int:
    """dim over Q of chain maps modulo boundaries in one graded slice.
    Boundaries are the image of d h - (-1)^|h| h d over maps h of the
    opposite parity and q-degree qdeg - (n+1)."""
    slots, _, nilp = _morphism_unknowns(src, tgt, parity, qdeg)
    if not slots:
        return 0
    f0, f1 = _tagged_components(src, tgt, parity, slots)
    crows = _defect_buckets(src, tgt, parity, f0, f1, nilp)
    cycles = len(slots) - _rank([crows[k] for k in sorted(crows)], len(slots))
    if cycles == 0:
        return 0
    hp = (parity + 1) % 2
    hq = qdeg - (src.n + 1)
    hslots, _, _ = _morphism_unknowns(src, tgt, hp, hq)
    if not hslots:
        return cycles
    h0, h1 = _tagged_components(src, tgt, hp, hslots)
    brows = _defect_buckets(src, tgt, hp, h0, h1, nilp)
    return cycles - _rank([brows[k] for k in sorted(brows)], len(hslots))


def ext_profile(src: MF, tgt: MF, parity: int, q_range=None) -> dict:
    """Ext dimensions per q-degree.  Without an explicit range the
    ambient ring must have no free variables (a closed diagram); the
    possible degrees are then the finitely many shift differences."""
    if q_range is None:
        if set(src.variables()) | set(tgt.variables()):
            raise MorphError("q_range needed when free variables remain")
        if parity == 0:
            pairs = ((src.shifts0, tgt.shifts0), (src.shifts1, tgt.shifts1))
        else:
            pairs = ((src.shifts0, tgt.shifts1), (src.shifts1, tgt.shifts0))
        diffs = [t - s for ss, ts in pairs for s in ss for t in ts]
        if not diffs:
            return {}
        q_range = range(min(diffs), max(diffs) + 1)
    out = {}
    for q in q_range:
        d = ext_dim_slice(src, tgt, parity, q)
        if d:
            out[q] = d
    return out


# ---------------------------------------------------------------------------
# the trivalent vertex
# ---------------------------------------------------------------------------


def _rref(vectors, ncols):
    """Fully reduced echelon form of dense rational rows; returns the
    nonzero rows and their pivot columns."""
    dense = [list(v) for v in vectors]
    rank, col, nrows = 0, 0, len(dense)
    pivots = []
    while rank < nrows and col < ncols:
        piv = next((r for r in range(rank, nrows) if dense[r][col]), None)
        if piv is None:
            col += 1
            continue
        dense[rank], dense[piv] = dense[piv], dense[rank]
        prow = dense[rank]
        pv = prow[col]
        for r in range(nrows):
            if r != rank and dense[r][col]:
                f = dense[r][col] / pv
                row = dense[r]
                for c in range(col, ncols):
                    if prow[c]:
                        row[c] -= f * prow[c]
        pivots.append(col)
        rank += 1
        col += 1
    return dense[:rank], pivots


def _slot_vector(mats, coord):
    vec = [Fraction(0)] * len(coord)
    for comp, mat in enumerate(mats):
        for (i, j), poly in mat.entries.items():
            for mono, c in poly.terms.items():
                key = (comp, i, j, mono)
                if key not in coord:
                    raise MorphError("entry outside the graded slice")
                vec[coord[key]] += c
    return vec


def _null_homotopy_vectors(src, tgt, parity, qdeg, coord):
    """Coordinate vectors, in the slot basis of the (parity, qdeg) slice,
    of the boundaries of all single-monomial maps one step below."""
    hp, hq = (parity + 1) % 2, qdeg - (src.n + 1)
    hslots, _, _ = _morphism_unknowns(src, tgt, hp, hq)
    if hp == 0:
        shapes = ((tgt.rank0, src.rank0), (tgt.rank1, src.rank1))
    else:
        shapes = ((tgt.rank1, src.rank0), (tgt.rank0, src.rank1))
    out = []
    for comp, i, j, mono in hslots:
        ents = {0: {}, 1: {}}
        ents[comp][(i, j)] = poly_from_pairs([(mono, Fraction(1))])
        h = MFMorphism(src, tgt, hp, hq,
                       PolyMatrix(*shapes[0], ents[0]),
                       PolyMatrix(*shapes[1], ents[1]))
        b = boundary_of(h)
        out.append(_slot_vector((b.f0, b.f1), coord))
    return out


def reduce_mod_null_homotopies(phi: MFMorphism) -> MFMorphism:
    """The canonical representative of phi's homotopy class: the unique
    chain map homotopic to phi that vanishes on the pivot coordinates of
    the null-homotopic subspace of its graded slice."""
    src, tgt = phi.src, phi.tgt
    slots, _, nilp = _morphism_unknowns(src, tgt, phi.parity, phi.qdeg)
    coord = {key: k for k, key in enumerate(slots)}
    vec = _slot_vector((phi.f0.truncate(nilp), phi.f1.truncate(nilp)), coord)
    basis, pivots = _rref(
        _null_homotopy_vectors(src, tgt, phi.parity, phi.qdeg, coord),
        len(slots))
    for prow, pc in zip(basis, pivots):
        if vec[pc]:
            f = vec[pc] / prow[pc]
            vec = [a - f * b for a, b in zip(vec, prow)]
    m0, m1 = _matrices_from_solution(src, tgt, phi.parity, slots, vec)
    return MFMorphism(src, tgt, phi.parity, phi.qdeg, m0, m1)


def _pinned_chain_solve(src, tgt, parity, qdeg, pins):
    """Deterministic chain map with prescribed entries, or None.  pins
    maps (component, row, col) to the exact polynomial wanted there; all
    remaining entries are solved from the chain condition, free
    coordinates set to zero."""
    slots, _, nilp = _morphism_unknowns(src, tgt, parity, qdeg)
    f0, f1 = _tagged_components(src, tgt, parity, slots)
    buckets = _defect_buckets(src, tgt, parity, f0, f1, nilp)
    rows = [buckets[k] for k in sorted(buckets)]
    rhs = [Fraction(0)] * len(rows)
    seen = {}
    for k, (comp, i, j, mono) in enumerate(slots):
        if (comp, i, j) in pins:
            rows.append({k: Fraction(1)})
            rhs.append(pins[(comp, i, j)].coeff(mono))
            seen.setdefault((comp, i, j), set()).add(mono)
    for key, poly in pins.items():
        missing = set(poly.terms) - seen.get(key, set())
        if any(poly.coeff(m) for m in missing):
            return None
    sol = _solve_affine(rows, rhs, len(slots))
    if sol is None:
        return None
    m0, m1 = _matrices_from_solution(src, tgt, parity, slots, sol)
    phi = MFMorphism(src, tgt, parity, qdeg, m0, m1)
    phi.validate()
    return phi


_TRI_SRC = (("b", "a", "x5", "x6"), ("c", "x3", "x4", "a"),
            ("x1", "x2", "c", "b"))
_TRI_SRC_STEPS = ((0, "a"), (1, "c"))
_TRI_SRC_BASE = ("b", "x5", "x6")
_TRI_TGT = (("l", "m", "x4", "x5"), ("x1", "w", "l", "x6"),
            ("x2", "x3", "m", "w"))
_TRI_TGT_STEPS = ((0, "l"), (1, "w"))
_TRI_TGT_BASE = ("m", "x4", "x5")


def _tri_stack(n, edges, steps, base):
    facs = []
    for e in edges:
        facs.extend(wide_edge_factors(*e, n))
    m = mf_from_factors(facs, n)
    for row, name in steps:
        m = exclude_koszul_row(m, row, name).dst
    var, r1, r2 = base
    x = Polynomial.var
    quad = (x(var) - x(r1)) * (x(var) - x(r2))
    qi = next((i for i, f in enumerate(m.factors)
               if f[0] == "koszul" and f[2] in (quad, -quad)), None)
    if qi is None:
        raise MorphError("no quadratic row over %s after exclusion" % var)
    rest = [f for i, f in enumerate(m.factors) if i != qi]
    kept = mf_from_factors(rest, n).shift_q(m.factors[qi][3])
    return restrict_scalars(kept, var, quad)


@lru_cache(maxsize=None)
def trivalent_models(n: int) -> tuple:
    """The two stackings of three wide edges around a trivalent thick
    vertex, boundary x1, x2, x3 in and x4, x5, x6 out.  The two internal
    variables occurring linearly are excluded; the Koszul row left over
    cuts out a monic quadratic q in the last internal variable s and is
    absorbed by extending scalars to Q[x1..x6][s]/(q).  Both stackings
    come out with rank (8, 8), equal shifts and equal potential, written
    over Q[x1..x6] in the per-corner basis 1, s."""
    if n < 2:
        raise MorphError("n must be at least 2")
    return (_tri_stack(n, _TRI_SRC, _TRI_SRC_STEPS, _TRI_SRC_BASE),
            _tri_stack(n, _TRI_TGT, _TRI_TGT_STEPS, _TRI_TGT_BASE))


@lru_cache(maxsize=None)
def trivalent_mor(n: int, variant: int = 1) -> MFMorphism:
    """The distinguished even degree-(0, 0) morphism between the two
    stackings, realized from its divided-difference coefficients: the
    corner generator maps to 1, its internal multiple to x5 + x6 - x3,
    and the rest is solved deterministically from the chain condition.
    Zero for n = 2, where the whole Ext slice vanishes.  variant 2 is
    the same class reduced modulo null-homotopic maps; it differs from
    variant 1 by an exact term.  Taking the divided difference in the
    other internal pair yields exactly the negative of this map."""
    if variant not in (1, 2):
        raise MorphError("variant must be 1 or 2")
    src, tgt = trivalent_models(n)
    if n == 2:
        return zero_mor(src, tgt, 0, 0)
    if variant == 2:
        return reduce_mod_null_homotopies(trivalent_mor(n, 1))
    x = Polynomial.var
    pins = {(0, 0, 0): ONE,
            (0, 0, 1): x("x5") + x("x6") - x("x3"),
            (0, 1, 0): ZERO,
            (0, 1, 1): ZERO}
    phi = _pinned_chain_solve(src, tgt, 0, 0, pins)
    if phi is None:
        raise MorphError("trivalent profile admits no chain map")
    return phi


def trivalent(n: int) -> MFMorphism:
    """The trivalent vertex morphism: zero for n = 2, essential for
    n >= 3."""
    return trivalent_mor(n, 1)
