"""Local relations of the cobordism calculus in the matrix
factorization realization.

The closed sector works over disjoint unions of circles, kept as tensor
products of the rank-(0, n) restricted circle models with one label per
circle.  Words of cups, caps, dots and the two pants maps realize to
chain maps between these models, and closed words evaluate to exact
rational scalars.  The pants maps are the closed saddles: they are the
unique chain maps satisfying the cylinder isotopies and the dot slides,
so their matrices are written down directly here while the test suite
re-derives them from those equations through solve_composite_equations.

verify_relation checks each transcribed relation of the local relation
set: scalar relations by closed evaluation, sheet relations by exact
morphism algebra on the wide edge models, and the trivalent relation
through the homotopy solver.  Every report records the global sign the
check needed relative to the relation's reference coefficients, and
sign_table asserts that the recorded signs cohere across relations
sharing generators.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .polyring import Polynomial, ONE
from .mf import MF, PolyMatrix, tensor, empty_mf, wide_edge_mf
from .planar import ResolvedDiagram
from .mfmorph import (
    MFMorphism,
    cap_mor,
    circle_dot_mor,
    circle_restricted,
    compose,
    cup_mor,
    dot_mor,
    doubled_alpha_mor,
    doubled_wide_mf,
    identity_mor,
    inclusion_mor,
    is_null_homotopic,
    oriented_pair_mf,
    projection_mor,
    tensor_mor,
    trivalent,
    unzip_mor,
    zip_mor,
)


class RelationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# the pants maps on restricted circle models


def merge_mor(n: int, u: str = "u", v: str = "v", w: str = "w") -> MFMorphism:
    """The pants map joining two circles: u^a (x) v^b goes to w^(a+b);
    odd, q-degree n-1.  It satisfies merge . (cup x id) = id and
    merge . (id x cup) = -id, the sign being the Koszul sign of a cup
    passing an odd circle, and together with the dot slides these pin
    it uniquely in its slice."""
    src = tensor(circle_restricted(u, n), circle_restricted(v, n))
    tgt = circle_restricted(w, n)
    ents = {}
    for a in range(n):
        for b in range(n):
            if a + b < n:
                ents[(a + b, a * n + b)] = ONE
    return MFMorphism(src, tgt, 1, n - 1,
                      PolyMatrix(n, n * n, ents),
                      PolyMatrix(0, 0, {})).validate()


def split_mor(n: int, w: str = "w", u: str = "u", v: str = "v") -> MFMorphism:
    """The pants map dividing a circle: w^c goes to n times the sum of
    u^i (x) v^j over i + j = n - 1 + c; odd, q-degree n-1.  The factor
    n against the cap's top coefficient 1/n makes (cap x id) . split
    the identity, and (id x cap) . split is minus the identity."""
    src = circle_restricted(w, n)
    tgt = tensor(circle_restricted(u, n), circle_restricted(v, n))
    cn = Polynomial.const(Fraction(n))
    ents = {}
    for c in range(n):
        for i in range(n):
            j = n - 1 + c - i
            if 0 <= j < n:
                ents[(i * n + j, c)] = cn
    return MFMorphism(src, tgt, 1, n - 1,
                      PolyMatrix(0, 0, {}),
                      PolyMatrix(n * n, n, ents)).validate()


# ---------------------------------------------------------------------------
# cobordism words

# circle-sector generators and how they change the number of circles
_CIRCLE_GENS = {"cup": 1, "cap": -1, "dot": 0, "merge": -1, "split": 1}
# sheet-sector generators on the fixed four boundary points x1..x4
_SHEET_GENS = {"zip": ("arcs", "wide"), "unzip": ("wide", "arcs")}


@dataclass(frozen=True)
class Step:
    """One generator application: the generator name, the slot it acts
    at (a circle index, or an x-variable index for boundary dots), and
    the dot exponent."""

    gen: str
    slot: int = 0
    power: int = 1


@dataclass(frozen=True)
class CobordismWord:
    """A composable sequence of generator applications.

    start is the ambient the word begins on: a number of circles, or
    one of the tags "arcs" (the oriented two-arc smoothing) and "wide"
    (the wide edge), both on the boundary x1..x4.  The trace of
    intermediate ambients is recomputed on demand and must be
    consistent step by step."""

    steps: tuple
    start: object = 0

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        self.trace()

    def trace(self) -> tuple:
        """The ambient before each step plus the final one."""
        state = self.start
        out = [state]
        for s in self.steps:
            state = _step_ambient(s, state)
            out.append(state)
        return tuple(out)

    @property
    def end(self):
        return self.trace()[-1]

    def is_closed(self) -> bool:
        return self.start == 0 and self.end == 0

    def then(self, gen: str, slot: int = 0, power: int = 1) -> "CobordismWord":
        return CobordismWord(self.steps + (Step(gen, slot, power),),
                             self.start)

    def diagrams(self) -> tuple:
        """The ambients of trace() as resolved diagrams."""
        return tuple(_ambient_diagram(a) for a in self.trace())


def _step_ambient(s: Step, state):
    if isinstance(state, int):
        if s.gen not in _CIRCLE_GENS:
            raise RelationError("generator %r needs a sheet ambient" % s.gen)
        span = 0 if s.gen == "cup" else (2 if s.gen == "merge" else 1)
        if not 0 <= s.slot <= state - span:
            raise RelationError("slot %d out of range for %d circles"
                                % (s.slot, state))
        if s.gen == "dot" and not s.power >= 0:
            raise RelationError("negative dot power")
        return state + _CIRCLE_GENS[s.gen]
    if s.gen == "bdot":
        if not 1 <= s.slot <= 4:
            raise RelationError("boundary dot slot must be 1..4")
        return state
    if s.gen not in _SHEET_GENS:
        raise RelationError("generator %r undefined on ambient %r"
                            % (s.gen, state))
    fr, to = _SHEET_GENS[s.gen]
    if state != fr:
        raise RelationError("%s expects ambient %r, found %r"
                            % (s.gen, fr, state))
    return to


def _ambient_diagram(state) -> ResolvedDiagram:
    if isinstance(state, int):
        return ResolvedDiagram.build(((),), (), (), (), state)
    signs = (("x1", -1), ("x2", -1), ("x3", 1), ("x4", 1))
    if state == "arcs":
        return ResolvedDiagram.build((("x1", "x2", "x3", "x4"),), signs,
                                     (("x1", "x4"), ("x2", "x3")))
    return ResolvedDiagram.build((("x1", "x2", "x3", "x4"),), signs,
                                 (), (("x1", "x2", "x3", "x4"),))


def sphere_word(dots: int = 0) -> CobordismWord:
    steps = [Step("cup", 0)]
    if dots:
        steps.append(Step("dot", 0, dots))
    steps.append(Step("cap", 0))
    return CobordismWord(tuple(steps))


def torus_word() -> CobordismWord:
    return CobordismWord((Step("cup", 0), Step("split", 0),
                          Step("merge", 0), Step("cap", 0)))


def disjoint_union(a: CobordismWord, b: CobordismWord) -> CobordismWord:
    if not (a.is_closed() and b.is_closed()):
        raise RelationError("disjoint union needs closed words")
    return CobordismWord(a.steps + b.steps)


# ---------------------------------------------------------------------------
# realization


def _object(labels, n: int) -> MF:
    if not labels:
        return empty_mf(n)
    return reduce(tensor, (circle_restricted(y, n) for y in labels))


def _place(local: MFMorphism, left, right, n: int) -> MFMorphism:
    # identity on the labels left resp. right of the acting range;
    # the Koszul signs live inside tensor_mor
    f = local
    if right:
        f = tensor_mor(f, identity_mor(_object(right, n)))
    if left:
        f = tensor_mor(identity_mor(_object(left, n)), f)
    return f


def _circle_step(s: Step, labels, fresh, n: int):
    i = s.slot
    if s.gen == "cup":
        lbl = next(fresh)
        return (_place(cup_mor(n, lbl), labels[:i], labels[i:], n),
                labels[:i] + [lbl] + labels[i:])
    if s.gen == "cap":
        return (_place(cap_mor(n, labels[i]), labels[:i], labels[i + 1:], n),
                labels[:i] + labels[i + 1:])
    if s.gen == "dot":
        return (_place(circle_dot_mor(n, labels[i], s.power),
                       labels[:i], labels[i + 1:], n), list(labels))
    if s.gen == "merge":
        lbl = next(fresh)
        local = merge_mor(n, labels[i], labels[i + 1], lbl)
        return (_place(local, labels[:i], labels[i + 2:], n),
                labels[:i] + [lbl] + labels[i + 2:])
    lbl1, lbl2 = next(fresh), next(fresh)
    local = split_mor(n, labels[i], lbl1, lbl2)
    return (_place(local, labels[:i], labels[i + 1:], n),
            labels[:i] + [lbl1, lbl2] + labels[i + 1:])


def _sheet_step(s: Step, n: int) -> MFMorphism:
    if s.gen == "zip":
        return zip_mor(n)
    if s.gen == "unzip":
        return unzip_mor(n)
    obj = oriented_pair_mf("x1", "x2", "x3", "x4", n)
    return dot_mor(obj, "x%d" % s.slot, s.power)


def realize(w: CobordismWord, n: int) -> MFMorphism:
    """The chain map of a word: the composite of its generator images.

    Circle ambients compose cups, caps, dots and pants maps placed by
    tensoring with identities; sheet ambients compose the zip, unzip
    and boundary dot maps on the models over x1..x4."""
    if isinstance(w.start, int):
        labels = ["c%d" % i for i in range(w.start)]
        fresh = iter("c%d" % i for i in range(w.start, w.start + 2 * len(w.steps)))
        mor = identity_mor(_object(labels, n))
        for s in w.steps:
            step_mor, labels = _circle_step(s, labels, fresh, n)
            mor = compose(step_mor, mor)
        return mor
    ambients = {"arcs": oriented_pair_mf("x1", "x2", "x3", "x4", n),
                "wide": wide_edge_mf("x1", "x2", "x3", "x4", n)}
    mor = identity_mor(ambients[w.start])
    for s, state in zip(w.steps, w.trace()):
        local = _sheet_step(s, n)
        if s.gen == "bdot" and state == "wide":
            local = dot_mor(ambients["wide"], "x%d" % s.slot, s.power)
        mor = compose(local, mor)
    return mor


def evaluate_closed(w: CobordismWord, n: int) -> Fraction:
    """The scalar of a closed word: the single entry of its realization
    as an endomorphism of the empty diagram."""
    if not w.is_closed():
        raise RelationError("word is not closed")
    return realize(w, n).scalar()


# ---------------------------------------------------------------------------
# the relation suite

HOLDS = "holds exactly"
HOLDS_SIGN = "holds up to global sign"
FAILS = "fails"


@dataclass(frozen=True)
class RelationReport:
    rid: str
    n: int
    status: str
    sign: int          # realized = sign * reference; 0 when the check failed
    detail: str

    @property
    def ok(self) -> bool:
        return self.status != FAILS


def _scalar_report(rid, n, value, reference, what) -> RelationReport:
    if value == reference:
        return RelationReport(rid, n, HOLDS, 1, "%s = %s" % (what, value))
    if reference and value == -reference:
        return RelationReport(rid, n, HOLDS_SIGN, -1,
                              "%s = %s, reference %s" % (what, value, reference))
    return RelationReport(rid, n, FAILS, 0,
                          "%s = %s, reference %s" % (what, value, reference))


def _morphism_report(rid, n, lhs, rhs, what) -> RelationReport:
    diff = lhs - rhs
    if diff.is_zero():
        return RelationReport(rid, n, HOLDS, 1, "%s: sides equal" % what)
    if is_null_homotopic(diff):
        return RelationReport(rid, n, HOLDS, 1, "%s: sides homotopic" % what)
    back = lhs + rhs
    if back.is_zero():
        return RelationReport(rid, n, HOLDS_SIGN, -1,
                              "%s: sides equal after a sign flip" % what)
    if is_null_homotopic(back):
        return RelationReport(rid, n, HOLDS_SIGN, -1,
                              "%s: sides homotopic after a sign flip" % what)
    return RelationReport(rid, n, FAILS, 0,
                          "%s: difference is essential" % what)


def _check_dotted_spheres(rid, n):
    rng = range(1, n - 1)
    if not rng:
        return RelationReport(rid, n, HOLDS, 1,
                              "no admissible dot counts at n = %d" % n)
    vals = {l: evaluate_closed(sphere_word(l), n) for l in rng}
    bad = {l: v for l, v in vals.items() if v}
    if bad:
        return RelationReport(rid, n, FAILS, 0, "nonzero spheres: %r" % bad)
    return RelationReport(rid, n, HOLDS, 1,
                          "spheres with %d..%d dots vanish" % (1, n - 2))


def _check_top_sphere(rid, n):
    ref = Fraction((-1) ** (n - 1), n)
    return _scalar_report(rid, n, evaluate_closed(sphere_word(n - 1), n),
                          ref, "sphere with %d dots" % (n - 1))


def _neck_sum(n) -> MFMorphism:
    cup = cup_mor(n, "y")
    cap = cap_mor(n, "y")
    acc = None
    for k in range(n):
        term = compose(circle_dot_mor(n, "y", k),
                       compose(cup, compose(cap,
                               circle_dot_mor(n, "y", n - 1 - k))))
        acc = term if acc is None else acc + term
    return acc


def _check_neck_cut(rid, n):
    lhs = identity_mor(circle_restricted("y", n))
    rhs = _neck_sum(n).scale(Fraction((-1) ** (n - 1) * n))
    return _morphism_report(rid, n, lhs, rhs, "circle cylinder vs cut sum")


def _check_sheet_cut(rid, n):
    # identity of the doubled wide edge against its three cut terms
    inpr = compose(inclusion_mor(n), projection_mor(n))
    alpha = doubled_alpha_mor(n)
    dd = doubled_wide_mf(n)
    rhs = compose(inpr, alpha) + compose(alpha, inpr) \
        - (compose(dot_mor(dd, "x3"), inpr) + compose(dot_mor(dd, "x4"), inpr))
    return _morphism_report(rid, n, identity_mor(dd), rhs,
                            "doubled edge identity vs sheet cut")


def _check_plain_sphere(rid, n):
    return _scalar_report(rid, n, evaluate_closed(sphere_word(0), n),
                          Fraction(0), "undotted sphere")


def _check_high_spheres(rid, n):
    vals = {}
    for alpha in (1, 2):
        for k in range(0, n - 1):
            dots = alpha * n + k
            v = evaluate_closed(sphere_word(dots), n)
            if v:
                vals[dots] = v
    if vals:
        return RelationReport(rid, n, FAILS, 0, "nonzero spheres: %r" % vals)
    return RelationReport(rid, n, HOLDS, 1,
                          "spheres with a*n + k dots vanish, a in 1..2")


def _check_torus(rid, n):
    return _scalar_report(rid, n, evaluate_closed(torus_word(), n),
                          Fraction(n), "torus")


def _check_trivalent_zero(rid, n):
    t = trivalent(n)
    return _morphism_report(rid, n, t, t.scale(Fraction(0)),
                            "trivalent vertex at n = 2")


_SUITE = (
    ("R1a", None, _check_dotted_spheres),
    ("R1b", None, _check_dotted_spheres),
    ("R2a", None, _check_top_sphere),
    ("R2b", None, _check_top_sphere),
    ("R3a", None, _check_neck_cut),
    ("R3b", None, _check_neck_cut),
    ("R4", None, _check_sheet_cut),
    ("R14", 2, _check_trivalent_zero),
    ("Ra", None, _check_plain_sphere),
    ("Rb", None, _check_high_spheres),
    ("Rd", None, _check_torus),
)

#: relation ids stated in the relation set but not reconstructed from
#: the generator calculus; verify_relation refuses them
NOT_TRANSCRIBED = ("R5", "R6", "R7", "R8", "R9", "R10", "R11", "R12",
                   "R13", "Rc", "Re", "Rf", "Rg", "Rh")


def relation_ids(n: int | None = None) -> tuple:
    """Transcribed relation ids, restricted to those applicable at n."""
    return tuple(rid for rid, only, _ in _SUITE
                 if n is None or only is None or only == n)


def verify_relation(rid: str, n: int) -> RelationReport:
    """Check one relation at one n and report its status and sign.

    Orientation-paired ids (the a/b forms) share a realization because
    the restricted circle model does not see the orientation."""
    for known, only, chk in _SUITE:
        if known == rid:
            if only is not None and n != only:
                raise RelationError("relation %s is stated only at n = %d"
                                    % (rid, only))
            return chk(rid, n)
    if rid in NOT_TRANSCRIBED:
        raise RelationError("no transcription for relation %r" % rid)
    raise RelationError("unknown relation %r" % rid)


def verify_all(n: int) -> tuple:
    return tuple(verify_relation(rid, n) for rid in relation_ids(n))


def sign_table(n: int) -> dict:
    """Recorded signs of the sign-carrying relations plus the coherence
    checks between them: orientation pairs must agree, and the torus,
    whose reference value n arises by closing the cut relation and
    evaluating with the top sphere, must carry the product of their
    signs."""
    signs = {rid: verify_relation(rid, n).sign
             for rid in ("R2a", "R2b", "R3a", "R3b", "R4", "Rd")}
    checks = {
        "orientation pair R2": signs["R2a"] == signs["R2b"] != 0,
        "orientation pair R3": signs["R3a"] == signs["R3b"] != 0,
        "torus sign is the product of its parts":
            signs["Rd"] == signs["R2a"] * signs["R3a"] != 0,
        "sheet cut carries no sign": signs["R4"] == 1,
    }
    return {"n": n, "signs": signs, "checks": checks,
            "consistent": all(checks.values())}
