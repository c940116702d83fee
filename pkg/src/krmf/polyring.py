"""Exact multivariate polynomial arithmetic over Q with even q-gradings.

Everything downstream (matrix factorizations, chain maps, homology) works
with homogeneous polynomials whose variables carry q-degree 2 by default.
Coefficients are `fractions.Fraction`; arithmetic is exact everywhere.

A monomial is a tuple of (variable, exponent) pairs, sorted by variable
name, exponents strictly positive.  A polynomial is an immutable mapping
monomial -> coefficient with zero coefficients dropped.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

Mono = tuple  # tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

# q-degree per variable.  Only even degrees make sense for the gradings
# used here; nothing in the package registers anything other than 2.
_VAR_DEGREE: dict[str, int] = {}


def set_var_degree(name: str, degree: int) -> None:
    if degree <= 0 or degree % 2 != 0:
        raise ValueError("variable q-degree must be a positive even integer")
    _VAR_DEGREE[name] = degree


def var_degree(name: str) -> int:
    return _VAR_DEGREE.get(name, 2)


def mono_degree(mono: Mono) -> int:
    return sum(e * var_degree(v) for v, e in mono)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Scalar] | None = None):
        clean: dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------

    @staticmethod
    def const(c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return Polynomial({(): c} if c else {})

    @staticmethod
    def var(name: str, power: int = 1) -> "Polynomial":
        if power < 0:
            raise ValueError("negative power")
        if power == 0:
            return ONE
        return Polynomial({((name, power),): Fraction(1)})

    # -- ring structure ----------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO_FRAC) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return _raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = _coerce(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        if len(a) > len(b):
            a, b = b, a
        out: dict[Mono, Fraction] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, _ZERO_FRAC) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return _raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- grading -----------------------------------------------------

    def degree(self) -> int | None:
        """Top q-degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(mono_degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return _raw({m: c for m, c in self.terms.items() if mono_degree(m) == d})

    def variables(self) -> set[str]:
        out: set[str] = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def coeff(self, mono: Mono) -> Fraction:
        return self.terms.get(tuple(sorted(mono)), _ZERO_FRAC)

    def constant_term(self) -> Fraction:
        return self.terms.get((), _ZERO_FRAC)

    def as_scalar(self) -> Fraction:
        """The value of a constant polynomial; raises if non-constant."""
        if not self.terms:
            return _ZERO_FRAC
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        raise ValueError("polynomial is not constant: %s" % self)

    # -- substitution ------------------------------------------------

    def subs(self, mapping: Mapping[str, "Polynomial | str | int"]) -> "Polynomial":
        """Simultaneous substitution.  Values may be polynomials, variable
        names, or integers; variables absent from the mapping are kept."""
        if not mapping:
            return self
        vals: dict[str, Polynomial] = {}
        for k, v in mapping.items():
            if isinstance(v, str):
                vals[k] = Polynomial.var(v)
            elif isinstance(v, Polynomial):
                vals[k] = v
            else:
                vals[k] = Polynomial.const(v)
        out = ZERO
        for m, c in self.terms.items():
            term = Polynomial.const(c)
            for v, e in m:
                rep = vals.get(v)
                if rep is None:
                    term = term * Polynomial.var(v, e)
                else:
                    term = term * rep ** e
            out = out + term
        return out

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Variable renaming; faster special case of subs."""
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            nm = tuple(sorted(((mapping.get(v, v), e) for v, e in m)))
            # renaming may merge variables
            merged: dict[str, int] = {}
            for v, e in nm:
                merged[v] = merged.get(v, 0) + e
            key = tuple(sorted(merged.items()))
            s = out.get(key, _ZERO_FRAC) + c
            if s:
                out[key] = s
            else:
                del out[key]
        return _raw(out)

    def truncate(self, nilpotent: Mapping[str, int]) -> "Polynomial":
        """Drop monomials containing v^e with e >= nilpotent[v]."""
        if not nilpotent:
            return self
        out = {m: c for m, c in self.terms.items()
               if all(e < nilpotent.get(v, e + 1) for v, e in m)}
        if len(out) == len(self.terms):
            return self
        return _raw(out)

    # -- leading terms and division -----------------------------------

    def leading_mono(self) -> Mono:
        """Leading monomial in graded-lex order (degree first, then lex
        exponent vector over the sorted union of variables)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=_grlex_key)

    def __repr__(self) -> str:
        return render(self)

    __str__ = __repr__


def _raw(terms: dict) -> Polynomial:
    p = Polynomial.__new__(Polynomial)
    p.terms = terms
    p._hash = None
    return p


_ZERO_FRAC = Fraction(0)
ZERO = Polynomial()
ONE = Polynomial.const(1)


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.const(x)
    raise TypeError("cannot coerce %r to Polynomial" % (x,))


def _grlex_key(m: Mono):
    # graded, then lexicographic by exponent vector: a variable that is
    # globally smaller in name order weighs more.  Encode as sortable tuple.
    return (mono_degree(m), tuple((v, -e) for v, e in m) or ((chr(0x10FFFF), 0),))


def _mono_divides(a: Mono, b: Mono) -> bool:
    da = dict(a)
    for v, e in b:
        if da.get(v, 0) < e:
            return False
    return True


def _mono_div(a: Mono, b: Mono) -> Mono:
    d = dict(a)
    for v, e in b:
        d[v] -= e
        if d[v] == 0:
            del d[v]
    return tuple(sorted(d.items()))


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact quotient f / g; raises ValueError when g does not divide f.

    Single-divisor division in graded-lex order.  For exact quotients the
    leading term of the remainder is always divisible by lt(g), so the
    loop either terminates with zero remainder or proves non-divisibility.
    """
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return ZERO
    lg = g.leading_mono()
    cg = g.terms[lg]
    q: dict[Mono, Fraction] = {}
    r = f
    while r:
        lr = r.leading_mono()
        if not _mono_divides(lr, lg):
            raise ValueError("non-exact division")
        m = _mono_div(lr, lg)
        c = r.terms[lr] / cg
        q[m] = q.get(m, _ZERO_FRAC) + c
        r = r - _raw({m: c}) * g
    return _raw({m: c for m, c in q.items() if c})


def divided_difference(f: Polynomial, a: str, b: str) -> Polynomial:
    """(f - f|swap(a,b)) / (a - b), the divided difference operator.

    Satisfies the twisted Leibniz rule
    divided_difference(f*g) = dd(f)*g.swap + f*dd(g).
    """
    swapped = f.rename({a: b, b: a})
    num = f - swapped
    if not num:
        return ZERO
    return exact_div(num, Polynomial.var(a) - Polynomial.var(b))


def coeffs_in_var(f: Polynomial, var: str) -> dict[int, Polynomial]:
    """Write f = sum_k c_k * var^k and return {k: c_k} with c_k free of var."""
    out: dict[int, dict[Mono, Fraction]] = {}
    for m, c in f.terms.items():
        k = 0
        rest = []
        for v, e in m:
            if v == var:
                k = e
            else:
                rest.append((v, e))
        out.setdefault(k, {})[tuple(rest)] = c
    return {k: _raw(d) for k, d in out.items()}


def var_degree_of(f: Polynomial, var: str) -> int:
    """Highest power of var appearing in f (0 for var-free, -1 for zero)."""
    if not f:
        return -1
    best = 0
    for m, _ in f.terms.items():
        for v, e in m:
            if v == var and e > best:
                best = e
    return best


def divmod_in_var(f: Polynomial, var: str, q: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Polynomial division of f by q along the single variable var.

    q must be monic in var (leading var-coefficient equal to 1) with
    var-free lower coefficients.  Returns (quotient, remainder) with the
    remainder of var-degree strictly below deg_var(q).
    """
    d = var_degree_of(q, var)
    if d <= 0:
        raise ValueError("divisor must have positive degree in %s" % var)
    qc = coeffs_in_var(q, var)
    if qc.get(d) != ONE:
        raise ValueError("divisor is not monic in %s" % var)
    if any(var in c.variables() for k, c in qc.items() if k < d):
        raise ValueError("divisor coefficients must not involve %s" % var)
    quo = ZERO
    rem = f
    x = Polynomial.var(var)
    while True:
        rc = coeffs_in_var(rem, var)
        top = max((k for k in rc if k >= d), default=None)
        if top is None:
            return quo, rem
        t = rc[top] * x ** (top - d)
        quo = quo + t
        rem = rem - t * q


# -- symmetric function helpers --------------------------------------


def complete_symmetric(k: int, variables: Iterable[str]) -> Polynomial:
    """Complete homogeneous symmetric polynomial h_k in the given variables."""
    vs = list(variables)
    if k < 0:
        raise ValueError("negative degree")
    if k == 0:
        return ONE
    if not vs:
        return ZERO
    # dp over prefixes: h_k(v_1..v_m) = h_k(v_1..v_{m-1}) + v_m * h_{k-1}(v_1..v_m)
    prev = [ONE] + [ZERO] * k  # h_j of the empty set
    for v in vs:
        cur = [ONE]
        xv = Polynomial.var(v)
        for j in range(1, k + 1):
            cur.append(prev[j] + xv * cur[j - 1])
        prev = cur
    return prev[k]


def hbar(k: int, variables: Iterable[str], n: int) -> Polynomial:
    """(n/(n+1)) * h_k; the scaled complete symmetric function used in
    the arc factorization differentials."""
    return Fraction(n, n + 1) * complete_symmetric(k, variables)


def p_poly(n: int, e1: str = "e1", e2: str = "e2") -> Polynomial:
    """The unique P with P(x+y, xy) = x^{n+1} + y^{n+1}.

    Computed via the two-variable Newton recurrence
    p_k = e1 * p_{k-1} - e2 * p_{k-2}, p_0 = 2, p_1 = e1.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    E1, E2 = Polynomial.var(e1), Polynomial.var(e2)
    p_prev, p_cur = Polynomial.const(2), E1  # p_0, p_1
    for _ in range(n):
        p_prev, p_cur = p_cur, E1 * p_cur - E2 * p_prev
    return p_cur


def power_sum_potential(signs: Iterable[int], variables: Iterable[str], n: int) -> Polynomial:
    """sum_i eps_i * (n/(n+1)) * x_i^{n+1} for a boundary coloring."""
    c = Fraction(n, n + 1)
    out = ZERO
    for eps, v in zip(signs, variables, strict=True):
        if eps not in (1, -1):
            raise ValueError("signs must be +1/-1")
        out = out + (c * eps) * Polynomial.var(v, n + 1)
    return out


def u_v_pair(n: int, x1: str, x2: str, x3: str, x4: str) -> tuple[Polynomial, Polynomial]:
    """The wide-edge potentials (u, v) with
    u*(x3+x4-x1-x2) + v*(x3*x4-x1*x2) = w(x3)+w(x4)-w(x1)-w(x2),
    w(x) = (n/(n+1)) x^{n+1}.  Both quotients are exact by construction."""
    X1, X2, X3, X4 = (Polynomial.var(v) for v in (x1, x2, x3, x4))
    P = p_poly(n)
    c = Fraction(n, n + 1)

    def p_at(a: Polynomial, b: Polynomial) -> Polynomial:
        return P.subs({"e1": a, "e2": b})

    top_e1, bot_e1 = X3 + X4, X1 + X2
    top_e2, bot_e2 = X3 * X4, X1 * X2
    u = c * exact_div(p_at(top_e1, top_e2) - p_at(bot_e1, top_e2), top_e1 - bot_e1)
    v = c * exact_div(p_at(bot_e1, top_e2) - p_at(bot_e1, bot_e2), top_e2 - bot_e2)
    return u, v


def graded_basis(variables: Iterable[str], d: int) -> list[Polynomial]:
    """Monomials of q-degree d in the given variables, as polynomials,
    in descending lex order of exponent vectors (matches stars-and-bars
    enumeration anchored at the first variable)."""
    vs = list(variables)
    if d < 0 or d % 2 != 0:
        return []
    target = d // 2  # all default-degree variables
    for v in vs:
        if var_degree(v) != 2:
            raise NotImplementedError("graded_basis assumes q-degree 2 variables")
    out: list[Polynomial] = []

    def rec(i: int, remaining: int, acc: list):
        if i == len(vs) - 1:
            out.append(_mono_poly(acc + [(vs[i], remaining)] if remaining else acc))
            return
        for e in range(remaining, -1, -1):
            rec(i + 1, remaining - e, acc + ([(vs[i], e)] if e else []))

    if not vs:
        return [ONE] if d == 0 else []
    rec(0, target, [])
    return out


def _mono_poly(pairs: list) -> Polynomial:
    return _raw({tuple(sorted(pairs)): Fraction(1)})


def graded_dim(num_vars: int, d: int) -> int:
    """Number of degree-d monomials in num_vars q-degree-2 variables."""
    if d < 0 or d % 2:
        return 0
    k = d // 2
    if num_vars == 0:
        return 1 if k == 0 else 0
    return math.comb(k + num_vars - 1, num_vars - 1)


def monomials_of_degree(variables: list[str], d: int,
                        nilpotent: Mapping[str, int] | None = None) -> list[Mono]:
    """All monomials of q-degree d, respecting nilpotency truncations.
    Deterministic order (descending lex, as graded_basis)."""
    if d < 0 or d % 2:
        return []
    target = d // 2
    nil = nilpotent or {}
    out: list[Mono] = []

    def rec(i: int, remaining: int, acc: list):
        if i == len(variables):
            if remaining == 0:
                out.append(tuple(sorted(acc)))
            return
        v = variables[i]
        cap = min(remaining, nil.get(v, remaining + 1) - 1 if v in nil else remaining)
        for e in range(cap, -1, -1):
            rec(i + 1, remaining - e, acc + ([(v, e)] if e else []))

    rec(0, target, [])
    return out


# -- rendering --------------------------------------------------------


def render(p: Polynomial) -> str:
    """Deterministic text form: terms sorted by (degree, lex), coefficients
    always explicit as leading rationals, e.g. '2/3*x1^2*x2 + x3'."""
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda mc: _grlex_key(mc[0]))
    parts = []
    for m, c in items:
        factors = []
        if c == -1 and m:
            head = "-"
        elif c == 1 and m:
            head = ""
        else:
            head = str(c)
            if m:
                head += "*"
        for v, e in m:
            factors.append(v if e == 1 else "%s^%d" % (v, e))
        parts.append(head + "*".join(factors) if m else str(c))
    return " + ".join(parts).replace("+ -", "- ")


def poly_from_pairs(pairs: Iterable[tuple[Mapping[str, int] | Mono, Scalar]]) -> Polynomial:
    """Convenience constructor from (exponent mapping, coefficient) pairs."""
    terms: dict[Mono, Fraction] = {}
    for m, c in pairs:
        if isinstance(m, Mapping):
            key = tuple(sorted((v, e) for v, e in m.items() if e))
        else:
            key = tuple(sorted(m))
        c = Fraction(c)
        if c:
            terms[key] = terms.get(key, _ZERO_FRAC) + c
    return Polynomial(terms)
