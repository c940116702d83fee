"""Planar arc diagrams, tangle diagrams, and their gluing operad.

A resolved diagram lives in a disk with k holes.  Its 1-dimensional part
consists of oriented strands, 4-valent wide edges, and free circles.
Nodes are the meeting points: boundary endpoints (on the outer circle or
a hole) and wide-edge ports.  Every node carries exactly one flow-in and
one flow-out attachment:

    flow in:   boundary sign -1, strand end, wide-edge out-port (slot 3/4)
    flow out:  boundary sign +1, strand start, wide-edge in-port (slot 1/2)

Boundary words are read counterclockwise from a base point at the bottom
of each circle.  The canonical form captures this combinatorial incidence
structure; winding and circle nesting are deliberately not tracked (the
factorization functor is blind to them).
"""

from __future__ import annotations

from dataclasses import dataclass

SIGNS = (-1, 1)

# wide-edge slots: flow enters at slots 0,1 (the x1/x2 corners) and
# leaves at slots 2,3 (x3/x4).
IN_SLOTS = (0, 1)
OUT_SLOTS = (2, 3)

# outer coloring of a crossing-shaped diagram, positions (SE, NE, NW, SW)
CROSSING_COLORS = (-1, -1, 1, 1)


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class ResolvedDiagram:
    """Crossingless diagram in a k-holed disk.

    boundary[0] is the outer circle, boundary[1..k] the holes; each entry
    lists node names counterclockwise from that circle's base point.
    strands are (start, end) node pairs; wides are 4-tuples of node names
    in slot order; circles counts free circles.
    """

    k: int
    boundary: tuple
    signs: tuple          # ((node, +-1), ...) for boundary nodes, sorted
    strands: tuple        # ((start, end), ...)
    wides: tuple          # ((n1, n2, n3, n4), ...)
    circles: int = 0

    # -- construction helpers -----------------------------------------

    @staticmethod
    def build(boundary, signs, strands, wides=(), circles=0) -> "ResolvedDiagram":
        boundary = tuple(tuple(c) for c in boundary)
        d = ResolvedDiagram(
            k=len(boundary) - 1,
            boundary=boundary,
            signs=tuple(sorted(dict(signs).items())),
            strands=tuple(tuple(s) for s in strands),
            wides=tuple(tuple(w) for w in wides),
            circles=circles,
        )
        d.validate()
        return d

    def sign_of(self, node) -> int:
        return dict(self.signs)[node]

    def coloring(self) -> tuple:
        sg = dict(self.signs)
        return tuple(tuple(sg[n] for n in circle) for circle in self.boundary)

    def boundary_nodes(self) -> set:
        return {n for circle in self.boundary for n in circle}

    def all_nodes(self) -> set:
        nodes = self.boundary_nodes()
        for a, b in self.strands:
            nodes.add(a)
            nodes.add(b)
        for w in self.wides:
            nodes.update(w)
        return nodes

    def validate(self) -> None:
        bn = self.boundary_nodes()
        flat = [n for circle in self.boundary for n in circle]
        if len(flat) != len(bn):
            raise DiagramError("repeated boundary node")
        sg = dict(self.signs)
        if set(sg) != bn:
            raise DiagramError("signs must cover exactly the boundary nodes")
        if not all(s in SIGNS for s in sg.values()):
            raise DiagramError("signs must be +1/-1")
        if self.circles < 0:
            raise DiagramError("negative circle count")
        flow_in: dict = {}
        flow_out: dict = {}

        def add(table, node, what):
            if node in table:
                raise DiagramError("node %r has two %s attachments" % (node, what))
            table[node] = what

        for n in bn:
            add(flow_in if sg[n] == -1 else flow_out, n, "boundary")
        for a, b in self.strands:
            if a == b:
                raise DiagramError("strand loop at %r; should be a circle" % (a,))
            add(flow_out, a, "strand start")
            add(flow_in, b, "strand end")
        for w in self.wides:
            if len(w) != 4:
                raise DiagramError("wide edge needs 4 ports")
            for s in IN_SLOTS:
                add(flow_out, w[s], "wide in-port")
            for s in OUT_SLOTS:
                add(flow_in, w[s], "wide out-port")
        if set(flow_in) != set(flow_out):
            missing = set(flow_in) ^ set(flow_out)
            raise DiagramError("unbalanced nodes: %s" % sorted(missing))

    # -- canonical form ------------------------------------------------

    def canonical(self) -> "ResolvedDiagram":
        """Deterministic node relabeling: boundary node at circle j,
        position b becomes 'b{j}.{b}'; wide edges are ordered by an
        iteratively refined signature (with individualization on ties)
        and their off-boundary ports become 'w{i}.{slot}'."""
        rename = {}
        for j, circle in enumerate(self.boundary):
            for b, n in enumerate(circle):
                rename[n] = "b%d.%d" % (j, b)
        order = _canonical_wide_order(self, rename)
        for i, w_idx in enumerate(order):
            for slot, n in enumerate(self.wides[w_idx]):
                rename.setdefault(n, "w%d.%d" % (i, slot))
        return ResolvedDiagram(
            k=self.k,
            boundary=tuple(tuple(rename[n] for n in c) for c in self.boundary),
            signs=tuple(sorted((rename[n], s) for n, s in self.signs)),
            strands=tuple(sorted((rename[a], rename[b]) for a, b in self.strands)),
            wides=tuple(tuple(rename[n] for n in self.wides[i]) for i in order),
            circles=self.circles,
        )

    def encode(self) -> str:
        c = self.canonical()
        return repr((c.k, c.boundary, c.signs, c.strands, c.wides, c.circles))


def _wide_signatures(d: ResolvedDiagram, bnames: dict, seed: dict) -> dict:
    """One refinement sweep: signature of each wide edge from what its
    ports attach to (boundary positions, strands to boundary or to other
    wide edges tagged with their current signature and slot)."""
    starting_at = {}
    ending_at = {}
    for a, b in d.strands:
        starting_at[a] = (a, b)
        ending_at[b] = (a, b)
    port_occ: dict = {}
    for i, w in enumerate(d.wides):
        for slot, n in enumerate(w):
            port_occ.setdefault(n, []).append((i, slot))

    def node_ref(n):
        if n in bnames:
            return ("b", bnames[n])
        return ("w",) + tuple(sorted((seed[i], slot) for i, slot in port_occ[n]))

    sigs = {}
    for i, w in enumerate(d.wides):
        parts = []
        for slot, n in enumerate(w):
            if n in bnames:
                parts.append(("port-on-boundary", bnames[n]))
            elif slot in IN_SLOTS and n in ending_at:
                parts.append(("strand-from", node_ref(ending_at[n][0])))
            elif slot in OUT_SLOTS and n in starting_at:
                parts.append(("strand-to", node_ref(starting_at[n][1])))
            else:
                # port shared directly between two wide-edge slots
                parts.append(("shared", node_ref(n)))
        sigs[i] = (seed[i], tuple(parts))
    return sigs


def _canonical_wide_order(d: ResolvedDiagram, bound_rename: dict) -> list:
    m = len(d.wides)
    if m == 0:
        return []
    bnames = {n: bound_rename[n] for n in d.boundary_nodes()}
    seed = {i: 0 for i in range(m)}
    for _ in range(m + 2):
        sigs = _wide_signatures(d, bnames, seed)
        ranked = sorted(set(sigs.values()))
        new = {i: ranked.index(sigs[i]) for i in range(m)}
        if new == seed:
            break
        seed = new
    groups: dict = {}
    for i, r in seed.items():
        groups.setdefault(r, []).append(i)
    if all(len(g) == 1 for g in groups.values()):
        return [g[0] for _, g in sorted((r, g) for r, g in groups.items())]
    # ties: individualize each candidate in the first tied class and keep
    # the lexicographically smallest full encoding.  Diagrams are tiny.
    best = None
    tied = min((g for g in groups.values() if len(g) > 1), key=min)
    for pick in tied:
        forced = dict(seed)
        forced[pick] = (-1, pick)  # strictly smallest
        order = _finish_order(d, bnames, forced)
        key = _order_key(d, bound_rename, order)
        if best is None or key < best[0]:
            best = (key, order)
    return best[1]


def _finish_order(d: ResolvedDiagram, bnames: dict, seed: dict) -> list:
    cur = {i: (s,) if not isinstance(s, tuple) else s for i, s in seed.items()}
    for _ in range(len(d.wides) + 2):
        sigs = _wide_signatures(d, bnames, cur)
        ranked = sorted(set(sigs.values()))
        new = {i: (ranked.index(sigs[i]),) for i in range(len(d.wides))}
        if new == cur:
            break
        cur = new
    return [i for _, i in sorted((cur[i], i) for i in range(len(d.wides)))]


def _order_key(d: ResolvedDiagram, bound_rename: dict, order: list) -> str:
    rename = dict(bound_rename)
    for i, w_idx in enumerate(order):
        for slot, n in enumerate(d.wides[w_idx]):
            rename.setdefault(n, "w%d.%d" % (i, slot))
    return repr((
        tuple(sorted((rename[a], rename[b]) for a, b in d.strands)),
        tuple(tuple(rename[n] for n in d.wides[i]) for i in order),
    ))


def is_isotopic(a: ResolvedDiagram, b: ResolvedDiagram) -> bool:
    """Equality of canonical encodings.  Coarse by design: winding and
    nesting are not part of the encoding (see package docs)."""
    return a.encode() == b.encode()


# -- operad structure --------------------------------------------------


def unit_diagram(signs) -> ResolvedDiagram:
    """Type-1 diagram of parallel strands: outer coloring `signs`, hole
    coloring flipped, matching endpoints joined."""
    signs = tuple(signs)
    outer = tuple("o%d" % i for i in range(len(signs)))
    hole = tuple("h%d" % i for i in range(len(signs)))
    strands = []
    sg = {}
    for i, s in enumerate(signs):
        if s not in SIGNS:
            raise DiagramError("bad sign")
        sg[outer[i]] = s
        sg[hole[i]] = -s
        if s == 1:
            strands.append((hole[i], outer[i]))
        else:
            strands.append((outer[i], hole[i]))
    return ResolvedDiagram.build((outer, hole), sg, strands).canonical()


def oriented_resolution_diagram() -> ResolvedDiagram:
    """Two parallel arcs on the crossing boundary: x2 -> x3 over the top,
    x1 -> x4 along the bottom."""
    b = ("p0", "p1", "p2", "p3")
    sg = dict(zip(b, CROSSING_COLORS))
    return ResolvedDiagram.build((b,), sg, [("p1", "p2"), ("p0", "p3")]).canonical()


def wide_resolution_diagram() -> ResolvedDiagram:
    """A single wide edge filling the crossing disk."""
    b = ("p0", "p1", "p2", "p3")
    sg = dict(zip(b, CROSSING_COLORS))
    return ResolvedDiagram.build((b,), sg, [], wides=[b]).canonical()


def compose(outer: ResolvedDiagram, inserts) -> ResolvedDiagram:
    """Glue insert j into hole j of `outer`.  Hole colorings must match the
    insert outer colorings with flipped signs; the result's holes are the
    inserts' holes in block order."""
    inserts = list(inserts)
    if len(inserts) != outer.k:
        raise DiagramError(
            "need %d inserts for a type-%d diagram, got %d"
            % (outer.k, outer.k, len(inserts)))
    col = outer.coloring()
    for j, ins in enumerate(inserts, start=1):
        want = tuple(-s for s in col[j])
        got = ins.coloring()[0]
        if want != got:
            raise DiagramError(
                "hole %d coloring mismatch: hole expects insert boundary %s, got %s"
                % (j, want, got))

    # disjoint namespaces, then union-find over glued pairs
    def oname(n):
        return "o:%s" % (n,)

    def iname(j, n):
        return "i%d:%s" % (j, n)

    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    glued = set()
    for j, ins in enumerate(inserts, start=1):
        for b, hole_node in enumerate(outer.boundary[j]):
            u = iname(j, ins.boundary[0][b])
            h = oname(hole_node)
            union(u, h)
            glued.add(find(h))
    glued = {find(g) for g in glued}

    strands = [(find(oname(a)), find(oname(b))) for a, b in outer.strands]
    wides = [tuple(find(oname(n)) for n in w) for w in outer.wides]
    circles = outer.circles
    new_bound = [tuple(find(oname(n)) for n in outer.boundary[0])]
    sg = {find(oname(n)): s for n, s in outer.signs
          if find(oname(n)) not in glued}
    for j, ins in enumerate(inserts, start=1):
        isg = dict(ins.signs)
        strands += [(find(iname(j, a)), find(iname(j, b))) for a, b in ins.strands]
        wides += [tuple(find(iname(j, n)) for n in w) for w in ins.wides]
        circles += ins.circles
        for circle in ins.boundary[1:]:
            new_bound.append(tuple(find(iname(j, n)) for n in circle))
            for n in circle:
                sg[find(iname(j, n))] = isg[n]

    strands, extra = _fuse_through(strands, glued,
                                   ports={n for w in wides for n in w})
    circles += extra
    d = ResolvedDiagram.build(new_bound, sg, strands, wides, circles)
    return d.canonical()


def _fuse_through(strands, glued, ports):
    """Remove valence-2 glued nodes sitting between two strands; glued
    nodes that became wide-edge ports stay.  Closed strand cycles through
    glued nodes only become free circles."""
    fuse = {n for n in glued if n not in ports}
    by_start = {}
    for s in strands:
        if s[0] in by_start:
            raise DiagramError("two strands leaving %r" % (s[0],))
        by_start[s[0]] = s
    out = []
    seen = set()
    extra_circles = 0
    for s in strands:
        if s in seen:
            continue
        if s[0] in fuse:
            continue  # handled when we walk onto it
        chain = [s]
        seen.add(s)
        while chain[-1][1] in fuse:
            nxt = by_start.get(chain[-1][1])
            if nxt is None:
                raise DiagramError("dangling glued node %r" % (chain[-1][1],))
            chain.append(nxt)
            seen.add(nxt)
        out.append((chain[0][0], chain[-1][1]))
    for s in strands:
        if s not in seen and s[0] in fuse:
            # pure cycle through glued nodes
            cur = s
            while True:
                seen.add(cur)
                cur = by_start[cur[1]]
                if cur == s:
                    break
            extra_circles += 1
    return out, extra_circles


def compose_one(outer: ResolvedDiagram, j: int, insert: ResolvedDiagram) -> ResolvedDiagram:
    """Glue a single hole, leaving the others open (units elsewhere)."""
    col = outer.coloring()
    inserts = []
    for i in range(1, outer.k + 1):
        if i == j:
            inserts.append(insert)
        else:
            inserts.append(unit_diagram(tuple(-s for s in col[i])))
    return compose(outer, inserts)


def braid_act(i: int, d: ResolvedDiagram) -> ResolvedDiagram:
    """Action of the braid generator b_i: holes i and i+1 trade places.
    The encoding tracks no winding, so the action factors through the
    symmetric group; all braid-relation laws still hold on the nose."""
    if not (1 <= i < d.k):
        raise DiagramError("generator b_%d needs at least %d holes" % (i, i + 1))
    bound = list(d.boundary)
    bound[i], bound[i + 1] = bound[i + 1], bound[i]
    return ResolvedDiagram(
        k=d.k, boundary=tuple(bound), signs=d.signs,
        strands=d.strands, wides=d.wides, circles=d.circles,
    ).canonical()


def braid_act_word(word, d: ResolvedDiagram) -> ResolvedDiagram:
    for g in word:
        d = braid_act(abs(g), d)
    return d


# -- tangles ------------------------------------------------------------


@dataclass(frozen=True)
class TangleDiagram:
    """Outer resolved diagram (one hole per crossing, colored like a
    crossing boundary) plus the crossing signs."""

    outer: ResolvedDiagram
    crossing_signs: tuple

    def __post_init__(self):
        if len(self.crossing_signs) != self.outer.k:
            raise DiagramError("one sign per crossing required")
        if any(s not in SIGNS for s in self.crossing_signs):
            raise DiagramError("crossing signs must be +1/-1")
        col = self.outer.coloring()
        want = tuple(-s for s in CROSSING_COLORS)
        for j in range(1, self.outer.k + 1):
            if col[j] != want:
                raise DiagramError("hole %d is not crossing-shaped: %s" % (j, col[j]))

    @property
    def n_crossings(self) -> int:
        return self.outer.k

    def is_closed(self) -> bool:
        return not self.outer.boundary[0]

    def resolve_all(self, modes) -> ResolvedDiagram:
        """modes[j] is 'o' (oriented) or 'w' (wide) per crossing."""
        if len(modes) != self.n_crossings:
            raise DiagramError("one resolution mode per crossing")
        ins = [oriented_resolution_diagram() if m == "o" else wide_resolution_diagram()
               for m in modes]
        return compose(self.outer, ins)

    def resolve_crossing(self, j: int, mode: str) -> "TangleDiagram":
        ins = oriented_resolution_diagram() if mode == "o" else wide_resolution_diagram()
        outer = compose_one(self.outer, j, ins)
        signs = self.crossing_signs[:j - 1] + self.crossing_signs[j:]
        # compose_one re-blocks holes: hole j was filled by a type-0 insert,
        # remaining holes keep their relative order
        return TangleDiagram(outer, signs)

    def oriented_resolution(self) -> ResolvedDiagram:
        return self.resolve_all("o" * self.n_crossings)

    def link_components(self) -> int:
        """Connected components of the underlying 1-manifold: ambient
        strands joined through each crossing along x1-x3 and x2-x4."""
        parent: dict = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for a, b in self.outer.strands:
            union(a, b)
        for j in range(1, self.outer.k + 1):
            h = self.outer.boundary[j]
            union(h[0], h[2])
            union(h[1], h[3])
        classes = {find(n) for n in parent}
        return len(classes) + self.outer.circles


# -- braid input ---------------------------------------------------------


def from_braid(word, width: int | None = None, closed: bool = False) -> TangleDiagram:
    """Braid word as signed generator indices (sigma_i = i, inverse = -i).
    Strands run right to left at heights 1..width, bottom to top; the
    closure joins left ends back to right ends.  'Closure of "1 1 1" on
    two strands' is the right-handed trefoil with three positive crossings."""
    word = list(word)
    if any(g == 0 for g in word):
        raise DiagramError("generator indices are nonzero integers")
    width = width or (max((abs(g) for g in word), default=0) + 1)
    if any(abs(g) >= width for g in word):
        raise DiagramError("generator index exceeds braid width")

    holes = []
    sg = {}
    strands = []
    cur: dict = {}
    first_need: dict = {}

    def connect(height, target):
        if height in cur:
            strands.append((cur.pop(height), target))
        else:
            first_need[height] = target

    for j, g in enumerate(word, start=1):
        i = abs(g)
        h = tuple("c%d.%d" % (j, s) for s in range(4))
        holes.append(h)
        for node, s in zip(h, CROSSING_COLORS):
            sg[node] = -s  # hole coloring is the flipped crossing coloring
        connect(i, h[0])        # SE takes the lower incoming strand
        connect(i + 1, h[1])    # NE the upper
        cur[i] = h[3]           # SW continues at the lower height
        cur[i + 1] = h[2]       # NW at the upper

    circles = 0
    outer_word: tuple = ()
    if closed:
        for height in range(1, width + 1):
            if height in cur:
                strands.append((cur[height], first_need[height]))
            else:
                circles += 1
    else:
        right = ["r%d" % h for h in range(1, width + 1)]
        left = ["l%d" % h for h in range(1, width + 1)]
        for h in range(1, width + 1):
            sg[right[h - 1]] = -1
            sg[left[h - 1]] = 1
            if h in first_need:
                strands.append((right[h - 1], first_need[h]))
            else:
                cur.setdefault(h, right[h - 1])
            strands.append((cur[h], left[h - 1]))
        # counterclockwise from the bottom base point: up the right side,
        # then back down the left side
        outer_word = tuple(right) + tuple(reversed(left))

    outer = ResolvedDiagram.build(
        (outer_word, *holes), sg, strands, (), circles).canonical()
    return TangleDiagram(outer, tuple(1 if g > 0 else -1 for g in word))


def parse_braid_word(text: str) -> list:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as e:
        raise DiagramError("braid word must be whitespace-separated integers: %s" % e)


# -- PD input -------------------------------------------------------------


def from_pd(text: str) -> TangleDiagram:
    """PD notation: crossings 'X(a,b,c,d)' with edge labels listed
    counterclockwise from the incoming under-strand.  Orientations are
    inferred from label succession along each component; the crossing
    sign comes from the resulting over/under directions.  Labels seen
    once are tangle boundary points, ordered by label (a PD code carries
    no boundary cyclic order)."""
    crossings = _parse_pd_text(text)
    occurrences: dict = {}
    for ci, (a, b, c, d) in enumerate(crossings):
        for slot, lab in enumerate((a, b, c, d)):
            occurrences.setdefault(lab, []).append((ci, slot))
    for lab, occ in occurrences.items():
        if len(occ) > 2:
            raise DiagramError("edge label %r used more than twice" % (lab,))

    over_in_slot, role = _orient_pd(crossings, occurrences)

    holes = []
    sg = {}
    signs = []
    for ci in range(len(crossings)):
        h = tuple("c%d.%d" % (ci + 1, s) for s in range(4))
        holes.append(h)
        for node, s in zip(h, CROSSING_COLORS):
            sg[node] = -s
        signs.append(-1 if over_in_slot[ci] == 1 else 1)

    def node_at(ci, slot):
        # over in at b: CCW slots (a,b,c,d) sit at positions (x1..x4);
        # over in at d: positions are (d,a,b,c)
        pos = slot if over_in_slot[ci] == 1 else (slot + 1) % 4
        return holes[ci][pos]

    strands = []
    boundary_pts = []
    for lab, occ in sorted(occurrences.items()):
        if len(occ) == 2:
            roles = {role[o] for o in occ}
            if roles != {"in", "out"}:
                raise DiagramError("cannot orient PD edge %r" % (lab,))
            src = next(o for o in occ if role[o] == "out")
            dst = next(o for o in occ if role[o] == "in")
            strands.append((node_at(*src), node_at(*dst)))
        else:
            (o,) = occ
            t = "t%s" % lab
            if role[o] == "in":
                sg[t] = -1
                strands.append((t, node_at(*o)))
            else:
                sg[t] = 1
                strands.append((node_at(*o), t))
            boundary_pts.append((lab, t))

    outer_word = tuple(n for _, n in sorted(boundary_pts))
    outer = ResolvedDiagram.build((outer_word, *holes), sg, strands).canonical()
    return TangleDiagram(outer, tuple(signs))


def _parse_pd_text(text: str) -> list:
    out = []
    for chunk in text.replace(";", " ").split("X")[1:]:
        chunk = chunk.strip()
        if not chunk.startswith("("):
            raise DiagramError("malformed PD crossing near %r" % chunk[:20])
        body = chunk[1:chunk.index(")")]
        labs = [int(t) for t in body.replace(",", " ").split()]
        if len(labs) != 4:
            raise DiagramError("PD crossing needs 4 labels: %r" % body)
        out.append(tuple(labs))
    if not out:
        raise DiagramError("no crossings found in PD code")
    return out


def _orient_pd(crossings, occurrences):
    """Decide, per crossing, whether the over-strand enters at slot 1 (b)
    or slot 3 (d).  Slot a is always the incoming under, slot c outgoing.

    Treat 'x_ci = over enters at b' as a GF(2) variable.  The role of an
    occurrence is then a constant (slots a, c) or a linear form (slot b:
    in iff x; slot d: in iff 1+x), and every closed edge label demands
    one 'in' plus one 'out'.  Propagating these constraints settles every
    crossing whose over strand ever runs under something; components that
    stay free (a strand lying entirely on top) are oriented by label
    succession votes.  Returns (over_in slot per crossing, role table)."""
    m = len(crossings)
    const = {}
    formv = {}  # occurrence -> (ci, add): role_in = add + x_ci mod 2
    for ci in range(m):
        const[(ci, 0)] = 1
        const[(ci, 2)] = 0
        formv[(ci, 1)] = (ci, 0)
        formv[(ci, 3)] = (ci, 1)

    forced: dict = {}
    edges: dict = {ci: [] for ci in range(m)}  # ci -> [(cj, parity)]

    def force(ci, val):
        if forced.get(ci, val) != val:
            raise DiagramError("inconsistent PD orientation at crossing %d" % (ci + 1))
        forced[ci] = val

    for lab, occ in occurrences.items():
        if len(occ) != 2:
            continue
        o1, o2 = occ
        if o1 in const and o2 in const:
            if const[o1] + const[o2] != 1:
                raise DiagramError("cannot orient PD edge %r" % (lab,))
        elif o1 in const or o2 in const:
            oc, of = (o1, o2) if o1 in const else (o2, o1)
            ci, add = formv[of]
            force(ci, (1 + const[oc] + add) % 2 == 1)
        else:
            c1, a1 = formv[o1]
            c2, a2 = formv[o2]
            p = (1 + a1 + a2) % 2  # x_c1 + x_c2 = p
            if c1 == c2:
                if p:
                    raise DiagramError("cannot orient PD edge %r" % (lab,))
            else:
                edges[c1].append((c2, p))
                edges[c2].append((c1, p))

    value: dict = {}

    def flood(start, val):
        stack = [(start, val)]
        comp = []
        while stack:
            ci, v = stack.pop()
            if ci in value:
                if value[ci] != v:
                    raise DiagramError("inconsistent PD orientation at crossing %d" % (ci + 1))
                continue
            value[ci] = v
            comp.append(ci)
            for cj, p in edges[ci]:
                stack.append((cj, v ^ bool(p)))
        return comp

    for ci, val in sorted(forced.items()):
        flood(ci, val)
    for ci in range(m):
        if ci in value:
            continue
        # free component: both choices satisfy the role constraints, so
        # orient by label succession (the over strand leaves a crossing
        # carrying the entry label plus one)
        comp = flood(ci, True)

        def score():
            s = 0
            for cj in comp:
                _, b, _, d = crossings[cj]
                lin, lout = (b, d) if value[cj] else (d, b)
                s += (lout == lin + 1)
            return s
        s_true = score()
        for cj in comp:
            value[cj] = not value[cj]
        if score() <= s_true:
            for cj in comp:
                value[cj] = not value[cj]

    over_in = {ci: (1 if value[ci] else 3) for ci in range(m)}
    role = dict()
    for ci in range(m):
        role[(ci, 0)] = "in"
        role[(ci, 2)] = "out"
        role[(ci, 1)] = "in" if value[ci] else "out"
        role[(ci, 3)] = "out" if value[ci] else "in"
    return over_in, role
