"""Oriented link diagrams as lists of crossing records.

A crossing is a 5-tuple ``(under_in, under_out, over_in, over_out, sign)``
of arc labels plus the crossing sign.  Arcs are abstract labels; each arc
has exactly one head (an ``*_in`` slot) and one tail (an ``*_out`` slot).
Circles without crossings cannot carry arcs and are tracked by the
``free_loops`` counter.

The classical planar presentation with 4-tuples ``X[i, j, k, l]`` (arcs
counterclockwise from the incoming under-strand) maps to records as

* positive crossing, over strand runs ``l -> j``:  ``(i, k, l, j, +1)``
* negative crossing, over strand runs ``j -> l``:  ``(i, k, j, l, -1)``
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .braids import BraidWord, perm_cycles, perm_of


class DiagramError(ValueError):
    pass


Crossing = tuple[int, int, int, int, int]


@dataclass
class Diagram:
    crossings: list[Crossing]
    components: list[list[int]] = field(default_factory=list)
    free_loops: int = 0

    @property
    def total_components(self) -> int:
        return len(self.components) + self.free_loops

    def copy(self) -> "Diagram":
        return Diagram([c for c in self.crossings], [list(c) for c in self.components], self.free_loops)


def _successors(crossings: list[Crossing]) -> dict[int, int]:
    succ: dict[int, int] = {}
    for ui, uo, oi, oo, _ in crossings:
        for a, b in ((ui, uo), (oi, oo)):
            if a in succ:
                raise DiagramError("arc %d has two heads" % a)
            succ[a] = b
    return succ


def walk_components(crossings: list[Crossing]) -> list[list[int]]:
    """Oriented circles of the diagram as arc cycles, ordered by their
    smallest arc label."""
    succ = _successors(crossings)
    tails = set(succ.values())
    if set(succ) != tails:
        raise DiagramError("every arc needs one head and one tail")
    comps = []
    seen: set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        a = succ[start]
        while a != start:
            cyc.append(a)
            seen.add(a)
            a = succ[a]
        comps.append(cyc)
    return comps


def from_braid(b: BraidWord) -> Diagram:
    """Diagram of the braid closure.

    Components are ordered with the cycle through strand position 1 first,
    then the remaining cycles by decreasing minimal strand position.
    Strands that meet no crossing close up into free loops.
    """
    n = b.strands
    cur = list(range(1, n + 1))
    nxt = n + 1
    crossings: list[Crossing] = []
    for x in b.letters:
        i = abs(x)
        a, bb = cur[i - 1], cur[i]
        xa, ya = nxt, nxt + 1
        nxt += 2
        if x > 0:
            crossings.append((a, ya, bb, xa, 1))
        else:
            crossings.append((bb, xa, a, ya, -1))
        cur[i - 1], cur[i] = xa, ya
    rename = {}
    free = 0
    for p in range(n):
        if cur[p] == p + 1:
            free += 1
        else:
            rename[cur[p]] = p + 1
    crossings = [tuple(rename.get(a, a) for a in c[:4]) + (c[4],) for c in crossings]
    comps_by_min = walk_components(crossings)
    cycles = perm_cycles(perm_of(b))
    order: list[list[int]] = []
    used_cycles = [cyc for cyc in cycles if cur[cyc[0]] != cyc[0] + 1]
    first = [cyc for cyc in used_cycles if 0 in cyc]
    rest = sorted((cyc for cyc in used_cycles if 0 not in cyc), key=lambda cyc: -min(cyc))
    for cyc in first + rest:
        start_arc = min(cyc) + 1
        match = [c for c in comps_by_min if start_arc in c]
        if len(match) != 1:
            raise DiagramError("closure bookkeeping lost strand %d" % (min(cyc) + 1))
        comp = match[0]
        j = comp.index(start_arc)
        order.append(comp[j:] + comp[:j])
    return Diagram(crossings, order, free)


def from_pd(tuples: list[tuple[int, int, int, int]], free_loops: int = 0) -> Diagram:
    """Build a diagram from planar 4-tuples, inferring over-strand
    directions by constraint propagation.

    The under strand runs from the first to the third entry.  The over
    direction at each crossing is fixed by demanding that every arc gets
    exactly one head and one tail; crossings left free (closed all-over
    circles) fall back on consecutive arc numbering.
    """
    for i, j, k, l in tuples:
        if i == k:
            raise DiagramError(
                "crossing X[%d,%d,%d,%d] is orientation-inconsistent: a closed "
                "curve cannot cross another exactly once" % (i, j, k, l)
            )
        if j == l:
            raise DiagramError(
                "crossing X[%d,%d,%d,%d] is orientation-inconsistent: over "
                "strand enters and leaves on the same arc" % (i, j, k, l)
            )
    heads: dict[int, int] = {}
    tails: dict[int, int] = {}

    def claim(table, arc, what):
        table[arc] = table.get(arc, 0) + 1
        if table[arc] > 1:
            raise DiagramError("arc %d has two %s" % (arc, what))

    for i, j, k, l in tuples:
        claim(heads, i, "heads")
        claim(tails, k, "tails")
    # sign[t] = +1 when over runs l->j, -1 when over runs j->l
    sign: list[int | None] = [None] * len(tuples)
    changed = True
    while changed:
        changed = False
        for t, (i, j, k, l) in enumerate(tuples):
            if sign[t] is not None:
                continue
            if heads.get(j) or tails.get(l):
                s = 1  # j must be a tail, so over runs l -> j
            elif tails.get(j) or heads.get(l):
                s = -1
            else:
                continue
            sign[t] = s
            if s == 1:
                claim(heads, l, "heads")
                claim(tails, j, "tails")
            else:
                claim(heads, j, "heads")
                claim(tails, l, "tails")
            changed = True
    for t, (i, j, k, l) in enumerate(tuples):
        if sign[t] is None:
            s = 1 if (l + 1 == j) else (-1 if j + 1 == l else 1)
            sign[t] = s
            if s == 1:
                claim(heads, l, "heads")
                claim(tails, j, "tails")
            else:
                claim(heads, j, "heads")
                claim(tails, l, "tails")
    crossings: list[Crossing] = []
    for t, (i, j, k, l) in enumerate(tuples):
        if sign[t] == 1:
            crossings.append((i, k, l, j, 1))
        else:
            crossings.append((i, k, j, l, -1))
    comps = walk_components(crossings)
    return Diagram(crossings, comps, free_loops)


def pd_tuples(d: Diagram) -> list[tuple[int, int, int, int]]:
    out = []
    for ui, uo, oi, oo, s in d.crossings:
        if s > 0:
            out.append((ui, oo, uo, oi))
        else:
            out.append((ui, oi, uo, oo))
    return out


def _component_of_arc(d: Diagram) -> dict[int, int]:
    where = {}
    for idx, comp in enumerate(d.components):
        for a in comp:
            where[a] = idx
    return where


def linking_matrix(d: Diagram) -> list[list[int]]:
    """Pairwise linking numbers; free loops contribute zero rows at the
    end of the matrix."""
    n = d.total_components
    where = _component_of_arc(d)
    acc = [[0] * n for _ in range(n)]
    for ui, _, oi, _, s in d.crossings:
        cu, co = where[ui], where[oi]
        if cu != co:
            acc[cu][co] += s
            acc[co][cu] += s
    for r in range(n):
        for c in range(n):
            if acc[r][c] % 2:
                raise DiagramError("odd crossing count between components %d and %d" % (r, c))
            acc[r][c] //= 2
    return acc


def mirror_diagram(d: Diagram) -> Diagram:
    out = [(oi, oo, ui, uo, -s) for ui, uo, oi, oo, s in d.crossings]
    return Diagram(out, [list(c) for c in d.components], d.free_loops)


def reverse_diagram(d: Diagram) -> Diagram:
    out = [(uo, ui, oo, oi, s) for ui, uo, oi, oo, s in d.crossings]
    comps = [list(reversed(c)) for c in d.components]
    return Diagram(out, comps, d.free_loops)


def reverse_component(d: Diagram, idx: int) -> Diagram:
    """Reverse the orientation of a single component."""
    where = _component_of_arc(d)
    out: list[Crossing] = []
    for ui, uo, oi, oo, s in d.crossings:
        under_in = where[ui] == idx
        over_in = where[oi] == idx
        if under_in and over_in:
            out.append((uo, ui, oo, oi, s))
        elif under_in:
            out.append((uo, ui, oi, oo, -s))
        elif over_in:
            out.append((ui, uo, oo, oi, -s))
        else:
            out.append((ui, uo, oi, oo, s))
    comps = [list(reversed(c)) if i == idx else list(c) for i, c in enumerate(d.components)]
    return Diagram(out, comps, d.free_loops)


def _relabel(d: Diagram, offset: int) -> Diagram:
    cr = [tuple(a + offset for a in c[:4]) + (c[4],) for c in d.crossings]
    comps = [[a + offset for a in c] for c in d.components]
    return Diagram(cr, comps, d.free_loops)


def max_arc(d: Diagram) -> int:
    m = 0
    for c in d.crossings:
        m = max(m, *c[:4])
    return m


def disjoint_sum(d1: Diagram, d2: Diagram) -> Diagram:
    off = max_arc(d1)
    e2 = _relabel(d2, off)
    return Diagram(d1.crossings + e2.crossings, [list(c) for c in d1.components] + e2.components,
                   d1.free_loops + d2.free_loops)


def connected_sum(d1: Diagram, d2: Diagram, c1: int = 0, c2: int = 0) -> Diagram:
    """Join component ``c1`` of ``d1`` to component ``c2`` of ``d2`` by a
    trivial band at their first arcs."""
    if not d1.components or not d2.components:
        raise DiagramError("connected summands need at least one arc-bearing component")
    off = max_arc(d1)
    e2 = _relabel(d2, off)
    a1 = d1.components[c1][0]
    a2 = e2.components[c2][0]

    def swap_in(crossings):
        out = []
        for ui, uo, oi, oo, s in crossings:
            nui = a2 if ui == a1 else (a1 if ui == a2 else ui)
            noi = a2 if oi == a1 else (a1 if oi == a2 else oi)
            out.append((nui, uo, noi, oo, s))
        return out

    crossings = swap_in(d1.crossings + e2.crossings)
    merged = walk_components(crossings)
    # keep d1's ordering, with the fused component at slot c1
    order: list[list[int]] = []
    placed = set()

    def place(start_arc):
        for comp in merged:
            if start_arc in comp and id(comp) not in placed:
                j = comp.index(start_arc)
                order.append(comp[j:] + comp[:j])
                placed.add(id(comp))
                return
        raise DiagramError("lost a component while joining")

    for i, comp in enumerate(d1.components):
        place(comp[0])
    for i, comp in enumerate(e2.components):
        if i != c2:
            place(comp[0])
    return Diagram(crossings, order, d1.free_loops + d2.free_loops)


def remove_crossings(d: Diagram, kill: set[int], joins: list[tuple[int, int]]) -> Diagram:
    """Delete the crossings with the given indices and fuse arcs pairwise.

    Arc classes that end up meeting no surviving crossing close into free
    loops.  Components are recomputed and ordered by smallest arc label.
    """
    parent: dict[int, int] = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in joins:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    survivors = [c for t, c in enumerate(d.crossings) if t not in kill]
    relabeled = [tuple(find(a) for a in c[:4]) + (c[4],) for c in survivors]
    present = set()
    for c in relabeled:
        present.update(c[:4])
    extinct = set()
    for t in kill:
        for a in d.crossings[t][:4]:
            r = find(a)
            if r not in present:
                extinct.add(r)
    comps = walk_components(relabeled)
    return Diagram(relabeled, comps, d.free_loops + len(extinct))


def simplify_diagram(d: Diagram) -> Diagram:
    """Remove kinks and cancelling clasp pairs until none remain.

    Only moves that shrink the crossing count are applied, so this always
    terminates; it is a cheap preprocessor, not a full simplifier.
    """
    cur = Diagram([c for c in d.crossings], [list(c) for c in d.components], d.free_loops)
    changed = True
    while changed:
        changed = False
        # kinks: the loop arc is absorbed into the continuing strand
        for t, (ui, uo, oi, oo, s) in enumerate(cur.crossings):
            if ui == oo:
                cur = remove_crossings(cur, {t}, [(oi, ui), (ui, uo)])
                changed = True
                break
            if uo == oi:
                cur = remove_crossings(cur, {t}, [(ui, uo), (uo, oo)])
                changed = True
                break
        if changed:
            continue
        # clasp pairs: two crossings of opposite sign joined by an arc in the
        # over slots and an arc in the under slots (same strand on top twice);
        # both connecting arcs are absorbed into the strands that pass through
        m = len(cur.crossings)
        for t1 in range(m):
            if changed:
                break
            ui1, uo1, oi1, oo1, s1 = cur.crossings[t1]
            for t2 in range(m):
                if t1 == t2:
                    continue
                ui2, uo2, oi2, oo2, s2 = cur.crossings[t2]
                if s1 + s2 != 0 or oo1 != oi2:
                    continue
                joins = [(oi1, oo1), (oo1, oo2)]
                if uo1 == ui2:
                    joins += [(ui1, uo1), (uo1, uo2)]
                elif uo2 == ui1:
                    joins += [(ui2, uo2), (uo2, uo1)]
                else:
                    continue
                cur = remove_crossings(cur, {t1, t2}, joins)
                changed = True
                break
    return cur


def zero_linking_sublinks(m: list[list[int]]) -> list[tuple[int, ...]]:
    """Proper nonempty component subsets whose total linking number with
    the complement vanishes."""
    n = len(m)
    out = []
    for mask in range(1, (1 << n) - 1):
        s = [i for i in range(n) if mask >> i & 1]
        rest = [i for i in range(n) if not mask >> i & 1]
        if sum(m[i][j] for i in s for j in rest) == 0:
            out.append(tuple(s))
    return out
