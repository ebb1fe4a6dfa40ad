"""Braid words, Garside normal forms, quasipositive factorizations.

Letters are nonzero integers: ``i`` stands for the elementary positive
half-twist of strands ``i`` and ``i+1``, ``-i`` for its inverse.  Words act
left to right.  Strand positions are 1-based in the public interface.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on ``strands`` strands."""

    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError("strand count must be positive, got %r" % (self.strands,))
        object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if not isinstance(x, int) or x == 0:
                raise BraidError("braid letters must be nonzero integers, got %r" % (x,))
            if abs(x) >= self.strands:
                raise BraidError(
                    "letter %d needs at least %d strands, word declares %d"
                    % (x, abs(x) + 1, self.strands)
                )

    def __len__(self):
        return len(self.letters)

    @property
    def writhe(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)


@dataclass(frozen=True)
class QPFactorization:
    """A product of conjugated positive generators ``w σ_j w^{-1}``.

    ``factors`` holds pairs ``(conjugator_letters, j)`` with ``j > 0``.
    """

    strands: int
    factors: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        fixed = []
        for conj, j in self.factors:
            conj = tuple(conj)
            if j <= 0:
                raise BraidError("quasipositive generator index must be positive, got %r" % (j,))
            fixed.append((conj, j))
        object.__setattr__(self, "factors", tuple(fixed))


def expand_qp(fac: QPFactorization) -> BraidWord:
    """Multiply out a quasipositive factorization into a plain braid word."""
    letters: list[int] = []
    for conj, j in fac.factors:
        letters.extend(conj)
        letters.append(j)
        letters.extend(-x for x in reversed(conj))
    return BraidWord(fac.strands, tuple(letters))


def qp_chi(fac: QPFactorization) -> int:
    """Euler characteristic of the braided surface built from the factors."""
    return fac.strands - len(fac.factors)


def bennequin_chi(b: BraidWord) -> int:
    """Euler characteristic of the banded surface of the closure: n - length."""
    return b.strands - len(b.letters)


def mirror(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(-x for x in b.letters))


def reverse(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(reversed(b.letters)))


def concat(a: BraidWord, b: BraidWord) -> BraidWord:
    if a.strands != b.strands:
        raise BraidError("cannot concatenate words on %d and %d strands" % (a.strands, b.strands))
    return BraidWord(a.strands, a.letters + b.letters)


def shift_indices(b: BraidWord, by: int, strands: int) -> BraidWord:
    """Reindex every letter by ``by`` inside a wider braid group."""
    return BraidWord(strands, tuple(x + by if x > 0 else x - by for x in b.letters))


def split_sum_word(a: BraidWord, b: BraidWord) -> BraidWord:
    """Word whose closure is the split union of the two closures."""
    n = a.strands + b.strands
    return BraidWord(n, a.letters + shift_indices(b, a.strands, n).letters)


def connected_sum_word(a: BraidWord, b: BraidWord) -> BraidWord:
    """Word whose closure is a connected sum of the closures.

    The last strand of ``a`` is fused with the first strand of ``b``, which
    joins the closure components running through those strands.
    """
    n = a.strands + b.strands - 1
    return BraidWord(n, a.letters + shift_indices(b, a.strands - 1, n).letters)


# -- permutations -----------------------------------------------------------
#
# A permutation is a tuple p with p[x] = final position of the strand that
# starts at position x (0-based).  Word concatenation u,v corresponds to
# pmul(p_u, p_v).


def pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(b[a[x]] for x in range(len(a)))


def pinv(a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


def _gen_perm(n: int, i: int) -> tuple[int, ...]:
    p = list(range(n))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def perm_of(b: BraidWord) -> tuple[int, ...]:
    p = tuple(range(b.strands))
    for x in b.letters:
        p = pmul(p, _gen_perm(b.strands, abs(x)))
    return p


def perm_cycles(p: tuple[int, ...]) -> list[list[int]]:
    """Cycles of a permutation, each starting at its least element,
    ordered by least element."""
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        cyc = [s]
        seen[s] = True
        x = p[s]
        while x != s:
            cyc.append(x)
            seen[x] = True
            x = p[x]
        out.append(cyc)
    return out


def component_count(b: BraidWord) -> int:
    return len(perm_cycles(perm_of(b)))


def braid_stats(b: BraidWord) -> dict:
    """Summary numbers for a word: strands, length, writhe, closure
    component count and the Bennequin Euler characteristic."""
    return {
        "strands": b.strands,
        "length": len(b.letters),
        "writhe": b.writhe,
        "components": component_count(b),
        "bennequin_chi": bennequin_chi(b),
    }


# -- Garside left-canonical form --------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    strands: int
    delta_power: int
    factors: tuple[tuple[int, ...], ...]


def _w0(n: int) -> tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


def _tau(p: tuple[int, ...], n: int) -> tuple[int, ...]:
    w = _w0(n)
    return pmul(pmul(w, p), w)


def _left_descents(p: tuple[int, ...]) -> set[int]:
    return {i for i in range(1, len(p)) if p[i - 1] > p[i]}


def _right_descents(p: tuple[int, ...]) -> set[int]:
    return _left_descents(pinv(p))


def normal_form(b: BraidWord) -> NormalForm:
    """Garside left-canonical form: ``Delta^d . A_1 ... A_k`` with each
    factor a permutation and consecutive pairs left-weighted."""
    n = b.strands
    ident = tuple(range(n))
    w0 = _w0(n)
    d = 0
    factors: list[tuple[int, ...]] = []
    for x in b.letters:
        if x > 0:
            factors.append(_gen_perm(n, x))
        else:
            d -= 1
            factors = [_tau(f, n) for f in factors]
            factors.append(pmul(w0, _gen_perm(n, -x)))
    # left-weighting passes
    changed = True
    while changed:
        changed = False
        t = 0
        while t < len(factors) - 1:
            a, bb = factors[t], factors[t + 1]
            moved = True
            while moved:
                moved = False
                cand = _left_descents(bb) - _right_descents(a)
                if cand:
                    i = min(cand)
                    a = pmul(a, _gen_perm(n, i))
                    bb = pmul(_gen_perm(n, i), bb)
                    moved = True
                    changed = True
            factors[t], factors[t + 1] = a, bb
            t += 1
        # absorb full twists, drop identities
        t = 0
        while t < len(factors):
            if factors[t] == w0:
                d += 1
                for s in range(t):
                    factors[s] = _tau(factors[s], n)
                del factors[t]
                changed = True
            elif factors[t] == ident:
                del factors[t]
                changed = True
            else:
                t += 1
    return NormalForm(n, d, tuple(factors))


def braid_equal(a: BraidWord, b: BraidWord) -> bool:
    if a.strands != b.strands:
        raise BraidError("braid_equal needs words on the same strand count")
    return normal_form(a) == normal_form(b)


# -- word rewriting moves ----------------------------------------------------


def reduce_word(b: BraidWord) -> BraidWord:
    """Free reduction: cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in b.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return BraidWord(b.strands, tuple(out))


def isolated_indices(b: BraidWord) -> list[int]:
    counts: dict[int, int] = {}
    for x in b.letters:
        counts[abs(x)] = counts.get(abs(x), 0) + 1
    return sorted(i for i, c in counts.items() if c == 1)


def destabilize_isolated(b: BraidWord) -> BraidWord | None:
    """Remove the smallest generator index that occurs exactly once.

    The closure is unchanged: the letters below the index commute with the
    letters above it, so the word sorts into two blocks joined by the lone
    band, and the closure is the connected sum of the two block closures.
    The output word is that sorted composite on one strand less.  Keeping
    the letters in place instead would interleave the blocks across the
    shared strand and generally change the link.
    """
    iso = isolated_indices(b)
    if not iso:
        return None
    i = iso[0]
    low = [x for x in b.letters if abs(x) < i]
    high = [x - 1 if x > 0 else x + 1 for x in b.letters if abs(x) > i]
    return BraidWord(b.strands - 1, tuple(low + high))


_RELATION_SIGNS = {
    (1, 1, 1): (1, 1, 1),
    (-1, -1, -1): (-1, -1, -1),
    (1, 1, -1): (-1, 1, 1),
    (-1, 1, 1): (1, 1, -1),
    (1, -1, -1): (-1, -1, 1),
    (-1, -1, 1): (1, -1, -1),
}


def _neighbors(word: tuple[int, ...], strands: int):
    """Rewriting moves that never increase word length.

    Yields (move name, new strand count, new word).  Flips come first;
    the witness path for a flip-then-reduce simplification is then found
    in that order.
    """
    # sign flips sigma^-1 -> sigma (sound for lower bounds, see chi search)
    for t, x in enumerate(word):
        if x < 0:
            yield ("flip", strands, word[:t] + (-x,) + word[t + 1 :])
    red = reduce_word(BraidWord(strands, word))
    if red.letters != word:
        yield ("reduce", strands, red.letters)
    dest = destabilize_isolated(BraidWord(strands, word))
    if dest is not None:
        yield ("destab", dest.strands, dest.letters)
    if len(word) > 1:
        yield ("rotate", strands, word[1:] + word[:1])
    for t in range(len(word) - 1):
        if abs(abs(word[t]) - abs(word[t + 1])) >= 2:
            swapped = list(word)
            swapped[t], swapped[t + 1] = swapped[t + 1], swapped[t]
            yield ("commute", strands, tuple(swapped))
    for t in range(len(word) - 2):
        a, b, c = word[t : t + 3]
        if abs(a) == abs(c) and abs(abs(a) - abs(b)) == 1:
            pat = (1 if a > 0 else -1, 1 if b > 0 else -1, 1 if c > 0 else -1)
            new = _RELATION_SIGNS.get(pat)
            if new is not None:
                i, j = abs(a), abs(b)
                repl = (new[0] * j, new[1] * i, new[2] * j)
                yield ("relation", strands, word[:t] + repl + word[t + 3 :])


@dataclass
class ChiSearchResult:
    score: int
    witness: list[tuple[str, BraidWord]] = field(default_factory=list)
    truncated: bool = False
    explored: int = 0


def chi_minus_lower_bound(b: BraidWord, budget: int = 100000) -> ChiSearchResult:
    """Best provable lower bound for the maximal Euler characteristic of a
    surface with negative double points bounded by the closure.

    Replacing a negative letter by a positive one can only drop the
    invariant, free reduction, commutation, braid relations, rotation and
    destabilization preserve the closure, and an all-positive word of
    length l on n strands realizes n - l exactly.  A best-first search on
    word length therefore yields sound bounds; ``witness`` lists the move
    sequence reaching the best terminal found.
    """
    start = reduce_word(b)
    start_key = (start.strands, start.letters)
    heap: list[tuple[int, int, tuple[int, ...], int]] = []
    counter = itertools.count()
    heapq.heappush(heap, (len(start.letters), next(counter), start.letters, start.strands))
    # visited set is word-level: braid-relation and commutation rewrites fix
    # the group element but change which flips and cancellations exist, so
    # collapsing nodes by normal form would cut off required simplifications
    parents: dict[tuple, tuple | None] = {start_key: None}
    best_score: int | None = None
    best_key = None
    if start.is_positive():
        best_score = start.strands - len(start.letters)
        best_key = start_key
    explored = 0
    truncated = False
    while heap:
        if explored >= budget:
            truncated = True
            break
        _, _, word, strands = heapq.heappop(heap)
        explored += 1
        key = (strands, word)
        for move, ns, nw in _neighbors(word, strands):
            nkey = (ns, nw)
            if nkey in parents:
                continue
            parents[nkey] = (key, move)
            # score on first encounter: positive words are exact realizations
            if all(x > 0 for x in nw):
                score = ns - len(nw)
                if best_score is None or score > best_score:
                    best_score = score
                    best_key = nkey
            heapq.heappush(heap, (len(nw), next(counter), nw, ns))
    if best_score is None:
        # fall back on flipping every remaining negative letter at once
        flip_all = BraidWord(start.strands, tuple(abs(x) for x in start.letters))
        red = reduce_word(flip_all)
        return ChiSearchResult(red.strands - len(red.letters), [], True, explored)
    path: list[tuple[str, BraidWord]] = []
    key = best_key
    while parents[key] is not None:
        pkey, move = parents[key]
        path.append((move, BraidWord(key[0], key[1])))
        key = pkey
    path.reverse()
    if b.letters != start.letters:
        path.insert(0, ("reduce", start))
    return ChiSearchResult(best_score, path, truncated, explored)


# -- Seifert form of the banded surface --------------------------------------


def seifert_matrix_of_closure(b: BraidWord) -> list[list[Fraction]]:
    """Seifert matrix of the banded surface spanned by the closure.

    Generators of first homology are the loops running through consecutive
    bands in a single column.  Self-linking and interaction constants
    follow the usual conventions for banded surfaces; they are pinned by
    the determinant and signature fixtures in the test suite.
    """
    cols: dict[int, list[tuple[int, int]]] = {}
    for t, x in enumerate(b.letters):
        cols.setdefault(abs(x), []).append((t, 1 if x > 0 else -1))
    loops = []  # (col, t_lo, t_hi, sign_lo, sign_hi)
    for i, occ in sorted(cols.items()):
        for (t1, s1), (t2, s2) in zip(occ, occ[1:]):
            loops.append((i, t1, t2, s1, s2))
    m = len(loops)
    v = [[Fraction(0) for _ in range(m)] for _ in range(m)]
    for a in range(m):
        i, t1, t2, s1, s2 = loops[a]
        v[a][a] = Fraction(-(s1 + s2), 2)
        for bidx in range(a + 1, m):
            j, u1, u2, r1, r2 = loops[bidx]
            if j == i and u1 == t2:
                # consecutive loops sharing the middle band
                if s2 > 0:
                    v[a][bidx], v[bidx][a] = Fraction(1), Fraction(0)
                else:
                    v[a][bidx], v[bidx][a] = Fraction(0), Fraction(-1)
            elif j == i + 1:
                if t1 < u1 < t2 < u2:
                    v[a][bidx], v[bidx][a] = Fraction(1), Fraction(0)
                elif u1 < t1 < u2 < t2:
                    v[a][bidx], v[bidx][a] = Fraction(0), Fraction(-1)
            elif j == i - 1:
                if u1 < t1 < u2 < t2:
                    v[a][bidx], v[bidx][a] = Fraction(1), Fraction(0)
                elif t1 < u1 < t2 < u2:
                    v[a][bidx], v[bidx][a] = Fraction(0), Fraction(-1)
    return v


def _symmetric_diagonal_signs(mat: list[list[Fraction]]) -> tuple[int, int, int]:
    """(positives, negatives, zeros) of a symmetric matrix over Q by
    congruence reduction."""
    m = [row[:] for row in mat]
    n = len(m)
    pos = neg = zero = 0
    idx = list(range(n))
    while idx:
        # find a nonzero diagonal entry among the remaining rows
        piv = None
        for a in idx:
            if m[a][a] != 0:
                piv = a
                break
        if piv is None:
            # look for an off-diagonal nonzero pair: contributes (+1, -1)
            hot = None
            for a in idx:
                for bidx in idx:
                    if a != bidx and m[a][bidx] != 0:
                        hot = (a, bidx)
                        break
                if hot:
                    break
            if hot is None:
                zero += len(idx)
                break
            a, bb = hot
            # row/col addition turns the hyperbolic pair into +/- diagonal
            for c in range(n):
                m[a][c] += m[bb][c]
            for r in range(n):
                m[r][a] += m[r][bb]
            continue
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(piv)
        for a in idx:
            f = m[a][piv] / d
            if f != 0:
                for c in range(n):
                    m[a][c] -= f * m[piv][c]
                for r in range(n):
                    m[r][a] -= f * m[r][piv]
    return pos, neg, zero


def signature_and_nullity(b: BraidWord) -> tuple[int, int]:
    """Signature and nullity of the closure, from the banded surface.

    The nullity counts the kernel of the symmetrized Seifert form plus one
    for each extra split piece of the surface beyond the first.
    """
    v = seifert_matrix_of_closure(b)
    n = len(v)
    sym = [[v[a][c] + v[c][a] for c in range(n)] for a in range(n)]
    pos, neg, zero = _symmetric_diagonal_signs(sym)
    # connected pieces of the surface: strands joined by used columns
    parent = list(range(b.strands))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in b.letters:
        i = abs(x)
        a, c = find(i - 1), find(i)
        if a != c:
            parent[a] = c
    pieces = len({find(s) for s in range(b.strands)})
    return pos - neg, zero + pieces - 1


def determinant_of_closure(b: BraidWord) -> int:
    """Link determinant |det(V + V^T)| of the closure; 0 for split links."""
    _, nullity = signature_and_nullity(b)
    if nullity > 0:
        return 0
    v = seifert_matrix_of_closure(b)
    n = len(v)
    m = [[v[a][c] + v[c][a] for c in range(n)] for a in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    assert det.denominator == 1
    return abs(int(det))


def murasugi_chi_upper(b: BraidWord) -> int:
    """Upper bound 1 - |signature| + nullity for the slice Euler
    characteristic of the closure."""
    sig, nul = signature_and_nullity(b)
    return 1 - abs(sig) + nul


def sub_braid(b: BraidWord, strand_set: set[int]) -> BraidWord:
    """Braid of the sublink traced by the given starting strands (1-based).

    Letters touching a kept and a removed strand drop out; the occupancy
    of positions is tracked so surviving letters reindex correctly.
    """
    keep = {s - 1 for s in strand_set}
    occupants = list(range(b.strands))
    letters = []
    for x in b.letters:
        i = abs(x)
        a, c = occupants[i - 1], occupants[i]
        if a in keep and c in keep:
            pos = sum(1 for y in occupants[: i - 1] if y in keep)
            letters.append((pos + 1) if x > 0 else -(pos + 1))
        occupants[i - 1], occupants[i] = c, a
    n = len(keep)
    return BraidWord(max(n, 1), tuple(letters))
