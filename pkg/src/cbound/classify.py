"""Rule engine over link records.

Builds two-sided bounds for the slice Euler characteristic and its
reversed-mirror variant, then runs a monotone fixpoint of membership
rules for the three nested link classes (quasipositive, strong boundary,
boundary).  Every yes/no cell carries derivation traces, and a report
compares the whole ledger against expected table fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .braids import (
    BraidWord,
    QPFactorization,
    bennequin_chi,
    braid_equal,
    chi_minus_lower_bound,
    determinant_of_closure,
    expand_qp,
    murasugi_chi_upper,
    perm_cycles,
    perm_of,
    qp_chi,
    sub_braid,
    signature_and_nullity,
)
from .diagrams import from_braid, linking_matrix, zero_linking_sublinks
from .homfly import LaurentPoly2, homfly_braid, unlink_poly, fwm_obstruction
from .notation import ParseError, parse_braid

CLASSES = ("Q", "SB", "B")
_VERDICTS = ("yes", "no")


class ClassifyError(ValueError):
    """Knowledge-base or inference failure."""


@dataclass(frozen=True)
class Axiom:
    """A certified membership fact that enters the ledger with a letter tag."""

    cls: str
    verdict: str
    letter: str

    def __post_init__(self):
        if self.cls not in CLASSES or self.verdict not in _VERDICTS:
            raise ClassifyError("bad axiom %s %s" % (self.cls, self.verdict))


@dataclass(frozen=True)
class CellExpectation:
    verdict: str
    letters: frozenset[str]


@dataclass
class LinkRecord:
    """One knowledge-base row: a link given by a braid word plus declared
    structure (mirror partner, sum decomposition, certificates, axioms)."""

    name: str
    braid: BraidWord
    certificate: QPFactorization | None = None
    invertible: bool = True
    mirror_of: str | None = None
    sum_kind: str | None = None  # "split" | "connected"
    summands: tuple[str, ...] = ()
    outer: bool = False
    axioms: tuple[Axiom, ...] = ()
    expected: dict[str, CellExpectation] = field(default_factory=dict)
    stated_chi_s: int | None = None
    stated_chi_minus: int | None = None


@dataclass(frozen=True)
class ChiBounds:
    chi_s: tuple[int, int]
    chi_s_minus: tuple[int, int]


@dataclass(frozen=True)
class Derivation:
    rule: str
    verdict: str
    letters: frozenset[str]
    why: str


@dataclass
class CellResult:
    verdict: str  # yes / no / unknown
    derivations: tuple[Derivation, ...]


@dataclass
class RowResult:
    name: str
    chi: ChiBounds
    cells: dict[str, CellResult]
    chi_sources: dict[str, dict[frozenset, tuple[int, str]]]
    search_witness: list
    search_truncated: bool


@dataclass
class Ledger:
    rows: dict[str, RowResult]


# -- tagged bound dictionaries ----------------------------------------------
#
# A bound value is kept per route tag-set, not just as a single extremum.
# The table's comment letters cite the route that produced a bound, so two
# derivations of the same inequality through different rules must both stay
# visible.  Values are clamped to the parity of the component count, which
# every surface characteristic shares.


class _Bound:
    def __init__(self, kind: str, mu: int):
        self.kind = kind  # "lo" or "hi"
        self.mu = mu
        self.data: dict[frozenset, tuple[int, str]] = {}

    def _clamp(self, v: int) -> int:
        if (v - self.mu) % 2 == 0:
            return v
        return v + 1 if self.kind == "lo" else v - 1

    def note(self, tags: frozenset, value: int, why: str) -> bool:
        value = self._clamp(value)
        cur = self.data.get(tags)
        if cur is not None:
            better = value > cur[0] if self.kind == "lo" else value < cur[0]
            if not better:
                return False
        self.data[tags] = (value, why)
        return True

    def best(self) -> tuple[int, str] | None:
        if not self.data:
            return None
        pick = min if self.kind == "hi" else max
        return pick(self.data.values(), key=lambda t: t[0])

    def entries(self):
        return list(self.data.items())


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = int(n**0.5)
    while r * r < n:
        r += 1
    return r * r == n


class _Row:
    """Working state for one record: cached invariants plus bound tables."""

    def __init__(self, rec: LinkRecord, skein_budget: int):
        self.rec = rec
        self.word = rec.braid
        self.skein_budget = skein_budget
        self.perm = perm_of(self.word)
        self.cycles = [frozenset(c + 1 for c in cyc) for cyc in perm_cycles(self.perm)]
        self.mu = len(self.cycles)
        self.lk = self._cycle_linking()
        self.s_lo = _Bound("lo", self.mu)
        self.s_hi = _Bound("hi", self.mu)
        self.m_lo = _Bound("lo", self.mu)
        self.m_hi = _Bound("hi", self.mu)
        self.derivs: dict[str, dict[tuple[str, frozenset], Derivation]] = {c: {} for c in CLASSES}
        self._poly: LaurentPoly2 | None = None
        self.search = None

    def _cycle_linking(self) -> list[list[int]]:
        which = {}
        for k, cyc in enumerate(self.cycles):
            for s in cyc:
                which[s - 1] = k
        acc = [[0] * self.mu for _ in range(self.mu)]
        occ = list(range(self.word.strands))
        for x in self.word.letters:
            i = abs(x)
            a, c = occ[i - 1], occ[i]
            ka, kc = which[a], which[c]
            if ka != kc:
                s = 1 if x > 0 else -1
                acc[ka][kc] += s
                acc[kc][ka] += s
            occ[i - 1], occ[i] = c, a
        return [[v // 2 for v in row] for row in acc]

    @property
    def poly(self) -> LaurentPoly2:
        if self._poly is None:
            self._poly = homfly_braid(self.word, self.skein_budget)
        return self._poly

    def component_word(self, k: int) -> BraidWord:
        return sub_braid(self.word, set(self.cycles[k]))

    def disk_census(self) -> tuple[int, bool]:
        """Count components that could bound a disk on their own: zero total
        linking with the rest, zero signature, square determinant.  Also
        report whether any component is knotted, which decides the route tag.
        """
        eligible = 0
        knotted = False
        for k in range(self.mu):
            w = self.component_word(k)
            if w.letters and homfly_braid(w, self.skein_budget) != LaurentPoly2.const(1):
                knotted = True
            total = sum(self.lk[k][j] for j in range(self.mu) if j != k)
            if total != 0:
                continue
            sig, _ = signature_and_nullity(w)
            if sig != 0:
                continue
            if _is_square(determinant_of_closure(w)):
                eligible += 1
        return eligible, knotted

    def derive(self, cls: str, verdict: str, letters: frozenset, rule: str, why: str) -> bool:
        key = (verdict, letters)
        if key in self.derivs[cls]:
            return False
        self.derivs[cls][key] = Derivation(rule, verdict, letters, why)
        return True

    def verdict(self, cls: str) -> str:
        seen = {v for v, _ in self.derivs[cls]}
        if len(seen) > 1:
            lines = ["%s/%s derived both ways for %s:" % (cls, "contradiction", self.rec.name)]
            for d in self.derivs[cls].values():
                lines.append("  %s -> %s (%s): %s" % (d.rule, d.verdict, fmt_letters(d.letters), d.why))
            raise ClassifyError("\n".join(lines))
        return next(iter(seen)) if seen else "unknown"

    def check_chi(self):
        for label, lo, hi in (("chi_s", self.s_lo, self.s_hi), ("chi_s^-", self.m_lo, self.m_hi)):
            bl, bh = lo.best(), hi.best()
            if bl and bh and bl[0] > bh[0]:
                raise ClassifyError(
                    "%s bounds clash for %s: lower %d (%s) exceeds upper %d (%s)"
                    % (label, self.rec.name, bl[0], bl[1], bh[0], bh[1])
                )


def fmt_letters(letters: frozenset) -> str:
    return ",".join(sorted(letters)) if letters else "-"


# -- knowledge-base parsing --------------------------------------------------


def parse_certificate(strands: int, text: str) -> QPFactorization:
    """Factor list in the compact form ``conj:j`` per factor, conjugator
    letters comma-separated (possibly empty), e.g. ``-1:2 :1 :2``."""
    factors = []
    for piece in text.split():
        if ":" not in piece:
            raise ClassifyError("certificate factor %r lacks ':'" % piece)
        conj_text, _, gen_text = piece.rpartition(":")
        try:
            conj = tuple(int(t) for t in conj_text.split(",") if t.strip())
            j = int(gen_text)
        except ValueError:
            raise ClassifyError("bad certificate factor %r" % piece) from None
        factors.append((conj, j))
    return QPFactorization(strands, tuple(factors))


def render_certificate(fac: QPFactorization) -> str:
    out = []
    for conj, j in fac.factors:
        out.append("%s:%d" % (",".join(str(x) for x in conj), j))
    return " ".join(out)


def _parse_letterset(text: str) -> frozenset[str]:
    if text == "-":
        return frozenset()
    letters = frozenset(text.split(","))
    for l in letters:
        if len(l) != 1 or not ("a" <= l <= "j"):
            raise ClassifyError("unknown comment letter %r" % l)
    return letters


def parse_kb(text: str) -> list[LinkRecord]:
    """Read the line-based knowledge-base format.

    Every stanza starts with ``link NAME`` and carries indented-or-not
    property lines until the next stanza.  Unknown keys are an error; the
    format is deliberately small.
    """
    records: list[LinkRecord] = []
    cur: dict | None = None

    def flush():
        nonlocal cur
        if cur is None:
            return
        if cur.get("braid") is None:
            raise ClassifyError("record %s has no braid" % cur["name"])
        rec = LinkRecord(
            name=cur["name"],
            braid=cur["braid"],
            certificate=cur.get("cert"),
            invertible=cur.get("invertible", True),
            mirror_of=cur.get("mirror_of"),
            sum_kind=cur.get("sum_kind"),
            summands=tuple(cur.get("summands", ())),
            outer=cur.get("outer", False),
            axioms=tuple(cur.get("axioms", ())),
            expected=cur.get("expected", {}),
            stated_chi_s=cur.get("chi_s"),
            stated_chi_minus=cur.get("chi_minus"),
        )
        records.append(rec)
        cur = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # '#' opens a comment only at the start or after whitespace; link
        # names themselves contain the character
        if line.startswith("#"):
            continue
        cut = line.find(" #")
        if cut >= 0:
            line = line[:cut].rstrip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "link":
                flush()
                if len(parts) != 2:
                    raise ClassifyError("link stanza wants exactly one name")
                cur = {"name": parts[1], "expected": {}, "axioms": [], "summands": []}
                continue
            if cur is None:
                raise ClassifyError("property before any link stanza")
            if key == "braid":
                cur["braid"] = parse_braid(" ".join(parts[1:]))
            elif key == "cert":
                if "braid" not in cur:
                    raise ClassifyError("cert must follow the braid line")
                cur["cert"] = parse_certificate(cur["braid"].strands, " ".join(parts[1:]))
            elif key == "invertible":
                cur["invertible"] = parts[1] == "yes"
            elif key == "mirror-of":
                cur["mirror_of"] = parts[1]
            elif key in ("split-sum-of", "connected-sum-of"):
                cur["sum_kind"] = "split" if key.startswith("split") else "connected"
                cur["summands"] = parts[1:]
                if len(parts) < 3:
                    raise ClassifyError("a sum needs at least two summands")
            elif key == "outer":
                cur["outer"] = parts[1] == "yes"
            elif key == "axiom":
                cur["axioms"].append(Axiom(parts[1], parts[2], parts[3]))
            elif key == "expect":
                if parts[1] not in CLASSES or parts[2] not in _VERDICTS:
                    raise ClassifyError("bad expectation %r" % line)
                letters = _parse_letterset(parts[3]) if len(parts) > 3 else frozenset()
                cur["expected"][parts[1]] = CellExpectation(parts[2], letters)
            elif key == "chi_s":
                cur["chi_s"] = None if parts[1] == "-" else int(parts[1])
            elif key == "chi_minus":
                cur["chi_minus"] = None if parts[1] == "-" else int(parts[1])
            else:
                raise ClassifyError("unknown key %r" % key)
        except (ClassifyError, ParseError, IndexError, ValueError) as e:
            raise ClassifyError("kb line %d: %s" % (lineno, e)) from None
    flush()
    _validate_records(records)
    return records


def _validate_records(records: list[LinkRecord]):
    byname = {}
    for r in records:
        if r.name in byname:
            raise ClassifyError("duplicate record name %r" % r.name)
        byname[r.name] = r
    for r in records:
        for ref in (r.summands or ()) + ((r.mirror_of,) if r.mirror_of else ()):
            if ref not in byname:
                raise ClassifyError("record %s refers to unknown link %r" % (r.name, ref))
    # relations must not loop back
    state: dict[str, int] = {}

    def visit(name: str):
        if state.get(name) == 1:
            raise ClassifyError("cyclic relation through %s" % name)
        if state.get(name) == 2:
            return
        state[name] = 1
        r = byname[name]
        if r.mirror_of:
            visit(r.mirror_of)
        for s in r.summands:
            visit(s)
        state[name] = 2

    for r in records:
        visit(r.name)


def verify_certificates(records: list[LinkRecord]) -> list[str]:
    """Check each stored factorization against its braid word.  Returns
    human-readable failure messages; callers abort before rule application
    when any come back."""
    bad = []
    for r in records:
        if r.certificate is None:
            continue
        got = expand_qp(r.certificate)
        if got.strands != r.braid.strands or not braid_equal(got, r.braid):
            bad.append(
                "certificate of %s expands to %r which is not the declared word %r"
                % (r.name, got.letters, r.braid.letters)
            )
    return bad


# -- the engine ---------------------------------------------------------------


def _seed_chi(row: _Row, search_budget: int):
    rec = row.rec
    row.s_lo.note(frozenset(), bennequin_chi(row.word), "banded surface of the given word")
    row.s_hi.note(frozenset(), murasugi_chi_upper(row.word), "signature bound")
    eligible, knotted = row.disk_census()
    tag = frozenset("g") if (row.mu >= 2 and knotted) else frozenset()
    row.s_hi.note(tag, eligible, "at most %d components can bound disks" % eligible)
    row.search = chi_minus_lower_bound(row.word, search_budget)
    row.m_lo.note(frozenset(), row.search.score, "switch-and-reduce search")
    row.m_hi.note(frozenset(), row.mu, "component count cap")
    if rec.certificate is not None:
        v = qp_chi(rec.certificate)
        why = "braided surface from the factorization is optimal"
        for b in (row.s_lo, row.s_hi, row.m_lo, row.m_hi):
            b.note(frozenset(), v, why)


def _copy_entries(dst: _Bound, src: _Bound, note: str) -> bool:
    changed = False
    for tags, (v, why) in src.entries():
        changed |= dst.note(tags, v, "%s; %s" % (note, why))
    return changed


def _combine(dst: _Bound, parts: list[_Bound], offset: int, extra: frozenset, note: str) -> bool:
    """Push every tag-set combination of summand bounds into dst."""
    changed = False
    combos: list[tuple[frozenset, int, list[str]]] = [(frozenset(), offset, [])]
    for b in parts:
        nxt = []
        for tags, acc, whys in combos:
            for t2, (v2, why2) in b.entries():
                nxt.append((tags | t2, acc + v2, whys + [why2]))
        combos = nxt
    for tags, total, whys in combos:
        changed |= dst.note(tags | extra, total, "%s from %s" % (note, "; ".join(whys)))
    return changed


def _chi_pass(rows: dict[str, _Row]) -> bool:
    changed = False
    for row in rows.values():
        rec = row.rec
        if rec.mirror_of:
            other = rows[rec.mirror_of]
            # the slice characteristic does not feel a reflection of the
            # four-ball, so upper and lower transfer both ways; the immersed
            # variant is chiral and must not be copied
            changed |= _copy_entries(row.s_lo, other.s_lo, "mirror of %s" % other.rec.name)
            changed |= _copy_entries(row.s_hi, other.s_hi, "mirror of %s" % other.rec.name)
            changed |= _copy_entries(other.s_lo, row.s_lo, "mirror of %s" % rec.name)
            changed |= _copy_entries(other.s_hi, row.s_hi, "mirror of %s" % rec.name)
        if rec.summands:
            parts = [rows[s] for s in rec.summands]
            off = 0 if rec.sum_kind == "split" else 1 - len(parts)
            changed |= _combine(row.s_lo, [p.s_lo for p in parts], off, frozenset(), "summand surfaces glued")
            changed |= _combine(row.m_lo, [p.m_lo for p in parts], off, frozenset(), "summand surfaces glued")
            if all(p.verdict("SB") == "yes" for p in parts):
                changed |= _combine(
                    row.s_hi, [p.s_hi for p in parts], off, frozenset("e"), "additivity over strong summands"
                )
            if rec.sum_kind == "split":
                changed |= _combine(
                    row.m_hi, [p.m_hi for p in parts], 0, frozenset(), "split pieces bound separately"
                )
        changed |= _copy_entries(row.m_lo, row.s_lo, "embedded surfaces count")
        changed |= _copy_entries(row.s_hi, row.m_hi, "immersed bound dominates")
        if row.verdict("SB") == "yes":
            changed |= _copy_entries(row.s_lo, row.m_lo, "both characteristics agree for strong boundaries")
            changed |= _copy_entries(row.m_hi, row.s_hi, "both characteristics agree for strong boundaries")
        row.check_chi()
    return changed


def _membership_pass(rows: dict[str, _Row], use_axioms: bool) -> bool:
    changed = False
    order = list(rows.values())
    for row in order:
        rec = row.rec
        if use_axioms:
            for ax in rec.axioms:
                changed |= row.derive(
                    ax.cls, ax.verdict, frozenset(ax.letter), "axiom", "certified construction, cited as (%s)" % ax.letter
                )
        if rec.certificate is not None:
            changed |= row.derive("Q", "yes", frozenset(), "certificate", "verified quasipositive factorization")

    for row in order:
        rec = row.rec
        # inclusion chain, both directions
        if row.verdict("Q") == "yes":
            changed |= row.derive("SB", "yes", frozenset(), "chain", "quasipositive links are strong boundaries")
        if row.verdict("SB") == "yes":
            changed |= row.derive("B", "yes", frozenset(), "chain", "strong boundaries are boundaries")
        if row.verdict("B") == "no":
            changed |= row.derive("SB", "no", frozenset(), "chain", "not even a plain boundary")
        if row.verdict("SB") == "no":
            changed |= row.derive("Q", "no", frozenset(), "chain", "not a strong boundary")

        # a nontrivial quasipositive link bars its mirror from the class
        if rec.mirror_of and row.verdict("Q") != "yes":
            other = rows[rec.mirror_of]
            for a, b in ((row, other), (other, row)):
                if a.verdict("Q") == "yes" and a.poly != unlink_poly(a.mu):
                    changed |= b.derive(
                        "Q", "no", frozenset(), "mirror-exclusion",
                        "mirror %s is quasipositive and nontrivial" % a.rec.name,
                    )

        # a sum with a non-quasipositive summand is not quasipositive
        for s in rec.summands:
            if rows[s].verdict("Q") == "no":
                changed |= row.derive(
                    "Q", "no", frozenset("c"), "sum-obstruction", "summand %s is not quasipositive" % s
                )

        # strong boundaries have agreeing characteristics
        for tags_h, (vh, why_h) in row.s_hi.entries():
            for tags_l, (vl, why_l) in row.m_lo.entries():
                if vh < vl:
                    changed |= row.derive(
                        "SB", "no", frozenset("a") | tags_h | tags_l, "chi-gap",
                        "chi_s <= %d (%s) stays below chi_s^- >= %d (%s)" % (vh, why_h, vl, why_l),
                    )

        # no sublink of zero total linking means no bounded piece to shed
        if row.verdict("SB") == "no" and not zero_linking_sublinks(row.lk):
            changed |= row.derive(
                "B", "no", frozenset("b"), "linked-throughout",
                "not strong, and every component subset links its complement",
            )

        # declared sums of strong boundaries stay strong; boundary sums need
        # outer components, which strength supplies automatically
        if rec.summands:
            parts = [rows[s] for s in rec.summands]
            if all(p.verdict("SB") == "yes" for p in parts):
                changed |= row.derive(
                    "SB", "yes", frozenset(), "sum-closure", "all summands are strong boundaries"
                )
            if all(p.verdict("B") == "yes" and (p.verdict("SB") == "yes" or p.rec.outer) for p in parts):
                changed |= row.derive(
                    "B", "yes", frozenset(), "sum-closure", "boundary summands with outer components"
                )

        # a strong boundary with nonpositive chi_s rules out the reversed
        # mirror; with invertibility that is the plain mirror partner
        if rec.mirror_of and rec.invertible:
            other = rows[rec.mirror_of]
            for a, b in ((row, other), (other, row)):
                for tags, (v, why) in a.s_hi.entries():
                    if v > 0:
                        continue
                    if a.verdict("SB") == "yes":
                        changed |= b.derive(
                            "B", "no", frozenset("f") | tags, "reversed-mirror",
                            "%s is a strong boundary with chi_s <= %d (%s)" % (a.rec.name, v, why),
                        )
                    if b.verdict("B") == "yes":
                        changed |= a.derive(
                            "SB", "no", frozenset("f") | tags, "reversed-mirror",
                            "%s bounds while chi_s <= %d here (%s)" % (b.rec.name, v, why),
                        )

        # braid-index style obstruction from the polynomial
        for tags, (v, why) in row.s_hi.entries():
            ob = fwm_obstruction(row.poly, v)
            if ob["refuted"]:
                changed |= row.derive(
                    "Q", "no", frozenset("i") | tags, "order-bound",
                    "ord_v=%d falls short of %d required with chi_s <= %d (%s)"
                    % (ob["ord_v"], ob["required_at_least"], v, why),
                )
    return changed


def apply_rules(
    records: list[LinkRecord],
    *,
    skein_budget: int = 1 << 20,
    search_budget: int = 100000,
    use_axioms: bool = True,
    jobs: int = 1,
) -> Ledger:
    """Run the bound assembly and the membership fixpoint over the records.

    The fixpoint itself is sequential; ``jobs`` only parallelizes the
    per-record invariant work (polynomials, searches), whose results do not
    depend on scheduling.  Raises ClassifyError on certificate failures,
    contradictory cells or clashing bounds; those are data bugs, not
    expected outcomes.
    """
    failures = verify_certificates(records)
    if failures:
        raise ClassifyError("certificate verification failed:\n  " + "\n  ".join(failures))
    rows = {r.name: _Row(r, skein_budget) for r in records}
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        def warm(row: _Row):
            _seed_chi(row, search_budget)
            row.poly

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(warm, rows.values()))
    else:
        for row in rows.values():
            _seed_chi(row, search_budget)
    for _ in range(200):
        busy = _chi_pass(rows)
        busy |= _membership_pass(rows, use_axioms)
        if not busy:
            break
    else:
        raise ClassifyError("rule fixpoint failed to settle")

    out: dict[str, RowResult] = {}
    for name, row in rows.items():
        cells = {}
        for cls in CLASSES:
            v = row.verdict(cls)
            cells[cls] = CellResult(v, tuple(row.derivs[cls].values()))
        sl, sh = row.s_lo.best(), row.s_hi.best()
        ml, mh = row.m_lo.best(), row.m_hi.best()
        chi = ChiBounds(
            (sl[0] if sl else -(10**9), sh[0] if sh else 10**9),
            (ml[0] if ml else -(10**9), mh[0] if mh else 10**9),
        )
        sources = {
            "chi_s.lo": dict(row.s_lo.data),
            "chi_s.hi": dict(row.s_hi.data),
            "chi_s_minus.lo": dict(row.m_lo.data),
            "chi_s_minus.hi": dict(row.m_hi.data),
        }
        out[name] = RowResult(
            name, chi, cells, sources, row.search.witness if row.search else [], bool(row.search and row.search.truncated)
        )
    _check_chain(out)
    return Ledger(out)


def chi_bounds_for(
    rec: LinkRecord,
    *,
    skein_budget: int = 1 << 20,
    search_budget: int = 100000,
) -> ChiBounds:
    """Bound assembly for one record in isolation.  Relations to other
    records cannot contribute here; use apply_rules for a full base."""
    solo = LinkRecord(
        name=rec.name,
        braid=rec.braid,
        certificate=rec.certificate,
        invertible=rec.invertible,
        axioms=rec.axioms,
    )
    led = apply_rules([solo], skein_budget=skein_budget, search_budget=search_budget)
    return led.rows[solo.name].chi


def _check_chain(rows: dict[str, RowResult]):
    rank = {"yes": 1, "unknown": 0, "no": -1}
    for r in rows.values():
        q, sb, b = (rank[r.cells[c].verdict] for c in CLASSES)
        if q > sb or sb > b:
            raise ClassifyError("inclusion chain violated for %s: Q=%s SB=%s B=%s"
                                % (r.name, r.cells["Q"].verdict, r.cells["SB"].verdict, r.cells["B"].verdict))


# -- reporting ---------------------------------------------------------------


def _match(cell: CellResult, want: CellExpectation) -> Derivation | None:
    if cell.verdict != want.verdict:
        return None
    for d in cell.derivations:
        if d.letters == want.letters:
            return d
    return None


def axiom_audit(
    records: list[LinkRecord],
    ledger: Ledger,
    *,
    skein_budget: int = 1 << 20,
    search_budget: int = 100000,
    jobs: int = 1,
) -> list[tuple[str, str, str, str]]:
    """Cells that the generic rules alone leave undecided, each attributed
    to the axioms it rests on.

    Attribution reruns the fixpoint with one axiom dropped at a time; a
    cell that goes dark in such a run depends on the dropped axiom, even
    when the axiom lives on a different record and acts through a cascade.
    """
    pure = apply_rules(records, skein_budget=skein_budget, search_budget=search_budget, use_axioms=False, jobs=jobs)
    targets = []
    for rec in records:
        for cls in CLASSES:
            v = ledger.rows[rec.name].cells[cls].verdict
            if v != "unknown" and pure.rows[rec.name].cells[cls].verdict == "unknown":
                targets.append((rec.name, cls, v))
    needs: dict[tuple[str, str], set[str]] = {(n, c): set() for n, c, _ in targets}
    axiom_list = [(r.name, ax) for r in records for ax in r.axioms]
    for owner, dropped in axiom_list:
        ablated = [
            LinkRecord(
                name=r.name,
                braid=r.braid,
                certificate=r.certificate,
                invertible=r.invertible,
                mirror_of=r.mirror_of,
                sum_kind=r.sum_kind,
                summands=r.summands,
                outer=r.outer,
                axioms=tuple(a for a in r.axioms if not (r.name == owner and a == dropped)),
                expected=r.expected,
                stated_chi_s=r.stated_chi_s,
                stated_chi_minus=r.stated_chi_minus,
            )
            for r in records
        ]
        partial = apply_rules(ablated, skein_budget=skein_budget, search_budget=search_budget, jobs=jobs)
        for name, cls, _ in targets:
            if partial.rows[name].cells[cls].verdict == "unknown":
                needs[(name, cls)].add(dropped.letter)
    return [(n, c, v, ",".join(sorted(needs[(n, c)])) or "?") for n, c, v in targets]


def table1_report(
    records: list[LinkRecord],
    ledger: Ledger,
    audit: list[tuple[str, str, str, str]] | None = None,
    machine: bool = False,
) -> tuple[str, int]:
    """Compare the ledger against the expected cells carried by the records.

    A membership cell matches when the verdict agrees and some derivation
    cites exactly the expected comment letters.  A stated chi_s is an upper
    bound and must equal the derived upper end; a stated chi_s^- is a lower
    bound and must equal the derived lower end.
    """
    lines: list[str] = []
    mism = 0
    for rec in records:
        row = ledger.rows[rec.name]
        cols = []
        for cls in CLASSES:
            want = rec.expected.get(cls)
            cell = row.cells[cls]
            if want is None:
                cols.append("%s %s ?" % (cls, cell.verdict))
                continue
            hit = _match(cell, want)
            if hit is None:
                mism += 1
                have = " or ".join(
                    "%s(%s)" % (d.verdict, fmt_letters(d.letters)) for d in cell.derivations
                ) or "nothing"
                cols.append("%s %s (%s) MISMATCH: derived %s" % (cls, want.verdict, fmt_letters(want.letters), have))
            else:
                cols.append("%s %s (%s) ok" % (cls, want.verdict, fmt_letters(want.letters)))
        chi_cols = []
        for label, stated, got in (
            ("chi_s", rec.stated_chi_s, row.chi.chi_s[1]),
            ("chi_s^-", rec.stated_chi_minus, row.chi.chi_s_minus[0]),
        ):
            if stated is None:
                chi_cols.append("%s -" % label)
            elif stated == got:
                chi_cols.append("%s %d ok" % (label, stated))
            else:
                mism += 1
                chi_cols.append("%s %d MISMATCH: derived %d" % (label, stated, got))
        if machine:
            for cls in CLASSES:
                want = rec.expected.get(cls)
                cell = row.cells[cls]
                hit = _match(cell, want) if want else None
                lines.append("row.%s.%s=%s" % (rec.name, cls, cell.verdict))
                lines.append("row.%s.%s.expected=%s" % (rec.name, cls, want.verdict if want else "-"))
                lines.append(
                    "row.%s.%s.letters=%s" % (rec.name, cls, fmt_letters(want.letters) if want else "-")
                )
                lines.append(
                    "row.%s.%s.status=%s" % (rec.name, cls, "ok" if (want is None or hit) else "mismatch")
                )
            lines.append("row.%s.chi_s=%d:%d" % (rec.name, *row.chi.chi_s))
            lines.append("row.%s.chi_s_minus=%d:%d" % (rec.name, *row.chi.chi_s_minus))
            lines.append("row.%s.chi_s.stated=%s" % (rec.name, rec.stated_chi_s if rec.stated_chi_s is not None else "-"))
            lines.append(
                "row.%s.chi_s_minus.stated=%s"
                % (rec.name, rec.stated_chi_minus if rec.stated_chi_minus is not None else "-")
            )
        else:
            lines.append("%-12s %s | %s" % (rec.name, " | ".join(cols), " | ".join(chi_cols)))
    if audit is not None:
        if machine:
            for name, cls, v, letters in audit:
                lines.append("axiom.%s.%s=%s:%s" % (name, cls, v, letters))
        else:
            lines.append("")
            lines.append("axiom-backed cells (underivable by the generic rules alone):")
            for name, cls, v, letters in audit:
                lines.append("  %-12s %s=%s rests on axiom (%s)" % (name, cls, v, letters))
    if machine:
        lines.append("rows=%d" % len(records))
        lines.append("mismatches=%d" % mism)
    else:
        lines.append("")
        lines.append("%d rows, %d mismatches" % (len(records), mism))
    return "\n".join(lines), mism


def describe_ledger(records: list[LinkRecord], ledger: Ledger, machine: bool = False) -> str:
    """Plain dump of verdicts, traces and bounds, independent of fixtures."""
    lines = []
    for rec in records:
        row = ledger.rows[rec.name]
        if machine:
            for cls in CLASSES:
                lines.append("ledger.%s.%s=%s" % (rec.name, cls, row.cells[cls].verdict))
            lines.append("ledger.%s.chi_s=%d:%d" % (rec.name, *row.chi.chi_s))
            lines.append("ledger.%s.chi_s_minus=%d:%d" % (rec.name, *row.chi.chi_s_minus))
            continue
        lines.append(rec.name)
        for cls in CLASSES:
            cell = row.cells[cls]
            lines.append("  %s: %s" % (cls, cell.verdict))
            for d in cell.derivations:
                lines.append("    via %s (%s): %s" % (d.rule, fmt_letters(d.letters), d.why))
        lines.append("  chi_s in [%d, %d], chi_s^- in [%d, %d]" % (*row.chi.chi_s, *row.chi.chi_s_minus))
    return "\n".join(lines)
