"""Words, strings, string modules, and the periodic witness construction.

A word walks arrows and formal inverses; a string additionally avoids
backtracks and relation factors.  String modules put one basis vector on
each word position and a single 1 entry per letter; all linear algebra is
exact (Fraction).

The witness builder produces a level-periodic bi-infinite string over the
string-variant double of a gentle one-cycle presentation with unbalanced
relation counts.  It grows a walk one letter at a time, preferring to turn
at a crossing and falling back (with backtracking) to extending the current
run, and closes the period when a segment key (arrow base, run direction)
recurs at a different level.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ClockCycleError, PreconditionError, WitnessBudgetError
from .linalg import matmul, nullspace, rank
from .presentation import Presentation, PathT, contains_factor
from .repetitive import (
    LArrow,
    RepetitiveWindow,
    arrow_from_name,
    build_repetitive_window,
    leveled,
    split_leveled,
    _structure,
)


@dataclass(frozen=True)
class Letter:
    arrow: str  # arrow name in the context presentation (may be leveled)
    inverse: bool = False

    def token(self) -> str:
        return ("-" if self.inverse else "") + self.arrow

    def shifted(self, k: int) -> "Letter":
        base, lvl = split_leveled(self.arrow)
        return Letter(leveled(base, lvl + k), self.inverse)


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...]
    at: str | None = None  # vertex hint, required when letters is empty

    def __len__(self):
        return len(self.letters)

    def tokens(self) -> str:
        """Display form, outermost (last-walked) letter first."""
        return " ".join(l.token() for l in reversed(self.letters))

    def shifted(self, k: int) -> "Word":
        return Word(tuple(l.shifted(k) for l in self.letters), self.at)


def parse_word(text: str) -> Word:
    """Parse CLI word syntax: space-separated tokens, outermost first,
    leading '-' marks an inverse letter, leveled arrows written 'a@3'."""
    toks = text.split()
    letters = []
    for tok in reversed(toks):
        inv = tok.startswith("-")
        letters.append(Letter(tok[1:] if inv else tok, inv))
    return Word(tuple(letters))


@lru_cache(maxsize=64)
def _window_presentation(w: RepetitiveWindow) -> Presentation:
    return w.as_presentation()


def _ctx(ctx) -> Presentation:
    if isinstance(ctx, RepetitiveWindow):
        return _window_presentation(ctx)
    return ctx


def _ends(p: Presentation, l: Letter) -> tuple[str, str]:
    a = p.quiver.arrow(l.arrow)
    return (a.tgt, a.src) if l.inverse else (a.src, a.tgt)


@dataclass(frozen=True)
class StringCheck:
    ok: bool
    violations: tuple[tuple[str, int, str], ...] = ()  # (code, position, message)


def validate_string(ctx, w: Word) -> StringCheck:
    """Check the two string conditions against the context's relations.

    Violations carry the 0-based index of the offending letter.  Unknown
    arrows raise; a malformed but known-arrow word is reported, not raised.
    """
    p = _ctx(ctx)
    for l in w.letters:
        if not p.quiver.has_arrow(l.arrow):
            raise PreconditionError("UNKNOWN_ARROW", f"arrow {l.arrow!r} not in context")
    violations: list[tuple[str, int, str]] = []
    if not w.letters:
        return StringCheck(False, (("EMPTY_WORD", 0, "strings must have length >= 1"),))
    for i in range(len(w.letters) - 1):
        a, b = w.letters[i], w.letters[i + 1]
        if _ends(p, a)[1] != _ends(p, b)[0]:
            violations.append(("NOT_COMPOSABLE", i + 1, f"{a.token()} then {b.token()}"))
        if a.arrow == b.arrow and a.inverse != b.inverse:
            violations.append(("BACKTRACK", i + 1, f"{b.token()} undoes {a.token()}"))
    # maximal same-direction runs, read as direct paths
    i = 0
    while i < len(w.letters):
        j = i
        while j + 1 < len(w.letters) and w.letters[j + 1].inverse == w.letters[i].inverse:
            j += 1
        run = [l.arrow for l in w.letters[i : j + 1]]
        path = tuple(reversed(run)) if w.letters[i].inverse else tuple(run)
        for rel in p.relations:
            if contains_factor(path, rel):
                violations.append(
                    ("RELATION_FACTOR", i, f"run contains zero relation {' '.join(reversed(rel))}")
                )
                break
        i = j + 1
    return StringCheck(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# string modules


@dataclass(frozen=True)
class StringModule:
    presentation: Presentation
    dims: tuple[tuple[str, int], ...]  # (vertex, dimension)
    matrices: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...]
    basis: tuple[tuple[str, int], ...] | None = None  # position -> (vertex, index)

    def __post_init__(self):
        object.__setattr__(self, "_dims", dict(self.dims))
        object.__setattr__(self, "_mats", dict(self.matrices))

    def dim(self, v: str) -> int:
        return self._dims.get(v, 0)

    def matrix(self, arrow: str):
        return self._mats[arrow]

    @property
    def total_dim(self) -> int:
        return sum(d for _, d in self.dims)

    def path_matrix(self, path: PathT):
        m = self.matrix(path[0])
        for name in path[1:]:
            m = matmul(self.matrix(name), m)
        return m


def string_module(ctx, w: Word) -> StringModule:
    """One basis vector per word position; each letter contributes one 1.

    Length-0 words are admitted as a degenerate input and give the simple
    module at ``w.at``.
    """
    p = _ctx(ctx)
    if not w.letters:
        if w.at is None or w.at not in p.quiver.vertices:
            raise PreconditionError("INVALID_STRING", "empty word needs a context vertex")
        verts = [w.at]
    else:
        check = validate_string(ctx, w)
        if not check.ok:
            raise PreconditionError("INVALID_STRING", f"not a string: {check.violations[0]}")
        verts = [_ends(p, w.letters[0])[0]]
        for l in w.letters:
            verts.append(_ends(p, l)[1])
    index: list[tuple[str, int]] = []
    counts: Counter[str] = Counter()
    for v in verts:
        index.append((v, counts[v]))
        counts[v] += 1
    dims = {v: counts[v] for v in p.quiver.vertices}
    mats = {
        a.name: [[0] * dims[a.src] for _ in range(dims[a.tgt])] for a in p.quiver.arrows
    }
    for k, l in enumerate(w.letters):
        a = p.quiver.arrow(l.arrow)
        lo, hi = index[k], index[k + 1]
        if l.inverse:
            # the walk steps from t(a) to s(a); the arrow maps hi back to lo
            mats[a.name][lo[1]][hi[1]] = 1
        else:
            mats[a.name][hi[1]][lo[1]] = 1
    return StringModule(
        presentation=p,
        dims=tuple(sorted(dims.items())),
        matrices=tuple(
            (name, tuple(tuple(row) for row in rows)) for name, rows in sorted(mats.items())
        ),
        basis=tuple(index),
    )


def trivial_string_module(ctx, vertex: str) -> StringModule:
    return string_module(ctx, Word((), at=vertex))


def direct_sum(a: StringModule, b: StringModule) -> StringModule:
    if a.presentation is not b.presentation and a.presentation != b.presentation:
        raise ValueError("direct sum needs modules over the same presentation")
    p = a.presentation
    dims = {v: a.dim(v) + b.dim(v) for v in p.quiver.vertices}
    mats = {}
    for arr in p.quiver.arrows:
        ma, mb = a.matrix(arr.name), b.matrix(arr.name)
        rows = []
        for i in range(dims[arr.tgt]):
            row = []
            for j in range(dims[arr.src]):
                if i < a.dim(arr.tgt) and j < a.dim(arr.src):
                    row.append(ma[i][j])
                elif i >= a.dim(arr.tgt) and j >= a.dim(arr.src):
                    row.append(mb[i - a.dim(arr.tgt)][j - a.dim(arr.src)])
                else:
                    row.append(0)
            rows.append(tuple(row))
        mats[arr.name] = tuple(rows)
    return StringModule(p, tuple(sorted(dims.items())), tuple(sorted(mats.items())), None)


# ---------------------------------------------------------------------------
# Hom spaces and indecomposability


def hom_basis(x: StringModule, y: StringModule) -> list[dict[str, tuple]]:
    """Basis of Hom(x, y): per-vertex matrices f_v with f_w X(a) = Y(a) f_v."""
    if x.presentation is not y.presentation and x.presentation != y.presentation:
        raise ValueError("Hom needs modules over the same presentation")
    p = x.presentation
    offsets: dict[str, int] = {}
    n = 0
    for v in p.quiver.vertices:
        offsets[v] = n
        n += y.dim(v) * x.dim(v)

    def var(v, r, c):  # entry f_v[r][c], shape y.dim(v) x x.dim(v)
        return offsets[v] + r * x.dim(v) + c

    rows: list[dict[int, Fraction]] = []
    for a in p.quiver.arrows:
        xa, ya = x.matrix(a.name), y.matrix(a.name)
        for i in range(y.dim(a.tgt)):
            for j in range(x.dim(a.src)):
                row: dict[int, Fraction] = {}
                for k in range(x.dim(a.tgt)):
                    if xa[k][j]:
                        row[var(a.tgt, i, k)] = row.get(var(a.tgt, i, k), Fraction(0)) + xa[k][j]
                for k in range(y.dim(a.src)):
                    if ya[i][k]:
                        row[var(a.src, k, j)] = row.get(var(a.src, k, j), Fraction(0)) - ya[i][k]
                if row:
                    rows.append(row)
    basis = nullspace(rows, n)
    out = []
    for vec in basis:
        f = {}
        for v in p.quiver.vertices:
            f[v] = tuple(
                tuple(vec[var(v, r, c)] for c in range(x.dim(v))) for r in range(y.dim(v))
            )
        out.append(f)
    return out


def end_basis(m: StringModule) -> list[dict[str, tuple]]:
    return hom_basis(m, m)


def _pairing(m: StringModule, f, g) -> Fraction:
    t = Fraction(0)
    for v, d in m.dims:
        if d:
            prod = matmul(f[v], g[v])
            t += sum(prod[i][i] for i in range(d))
    return t


def is_indecomposable(m: StringModule) -> bool:
    """Local endomorphism ring test by exact linear algebra.

    In characteristic zero the radical of the trace pairing tr(fg) on a
    faithful module is the Jacobson radical of End, so End is local with
    scalar residue field iff the pairing has rank 1.  Radical elements are
    certified nilpotent as a self-check.
    """
    if m.total_dim == 0:
        return False
    basis = end_basis(m)
    r = len(basis)
    if r == 1:
        return True
    gram = [[_pairing(m, basis[i], basis[j]) for j in range(r)] for i in range(r)]
    gram_rank = rank(gram)
    for vec in nullspace(
        [{j: gram[i][j] for j in range(r) if gram[i][j]} for i in range(r)], r
    ):
        f = {
            v: tuple(
                tuple(sum((vec[k] * basis[k][v][i][j] for k in range(r)), Fraction(0))
                      for j in range(m.dim(v)))
                for i in range(m.dim(v))
            )
            for v, _ in m.dims
        }
        power, steps = f, 1
        while steps < m.total_dim:
            power = {v: matmul(power[v], power[v]) for v in power}
            steps *= 2
        if any(x for v in power for row in power[v] for x in row):
            raise RuntimeError("trace-radical element is not nilpotent; pairing logic broken")
    return gram_rank == 1


# ---------------------------------------------------------------------------
# string enumeration (small contexts)


def enumerate_strings(ctx, max_len: int) -> list[Word]:
    """All strings of length 1..max_len over the context, both orientations."""
    p = _ctx(ctx)
    out: list[Word] = []
    frontier = [
        Word((Letter(a.name, inv),)) for a in p.quiver.arrows for inv in (False, True)
    ]
    for _ in range(max_len):
        out.extend(frontier)
        nxt = []
        for w in frontier:
            end = _ends(p, w.letters[-1])[1]
            for a in p.quiver.arrows:
                for inv in (False, True):
                    l = Letter(a.name, inv)
                    if _ends(p, l)[0] != end:
                        continue
                    cand = Word(w.letters + (l,))
                    if validate_string(p, cand).ok:
                        nxt.append(cand)
        frontier = nxt
    return out


# ---------------------------------------------------------------------------
# periodic strings


@dataclass(frozen=True)
class PeriodicString:
    presentation: Presentation
    period: tuple[Letter, ...]  # traversal order, leveled letters
    level_shift: int
    anchor: tuple[str, int]  # source vertex of the period instance

    def __post_init__(self):
        if self.level_shift == 0:
            raise ValueError("level shift must be nonzero")
        rs = _structure(self.presentation)
        pos = self.anchor
        for l in self.period:
            a = arrow_from_name(l.arrow)
            start, end = (rs.tgt(a), rs.src(a)) if l.inverse else (rs.src(a), rs.tgt(a))
            if start != pos:
                raise ValueError(f"period breaks at {l.token()}: at {pos}, letter starts {start}")
            pos = end
        want = (self.anchor[0], self.anchor[1] + self.level_shift)
        if pos != want:
            raise ValueError(f"period ends at {pos}, expected {want}")

    def shifted(self, k: int) -> "PeriodicString":
        return PeriodicString(
            self.presentation,
            tuple(l.shifted(k) for l in self.period),
            self.level_shift,
            (self.anchor[0], self.anchor[1] + k),
        )

    def positions(self) -> list[tuple[str, int]]:
        """Vertices of the distinct positions carried by one period."""
        rs = _structure(self.presentation)
        pos = self.anchor
        out = [pos]
        for l in self.period[:-1]:
            a = arrow_from_name(l.arrow)
            pos = rs.src(a) if l.inverse else rs.tgt(a)
            out.append(pos)
        return out

    def truncate(self, n_periods: int, start: int = 0) -> Word:
        letters = []
        for m in range(start, start + n_periods):
            letters.extend(l.shifted(m * self.level_shift) for l in self.period)
        return Word(tuple(letters))

    def level_range(self) -> tuple[int, int]:
        lvls = [split_leveled(l.arrow)[1] for l in self.period]
        return min(lvls), max(lvls)

    def window_for(self, lo_lvl: int, hi_lvl: int) -> RepetitiveWindow:
        return build_repetitive_window(self.presentation, lo_lvl - 1, hi_lvl + 1, "string")


# ---------------------------------------------------------------------------
# the witness walk


def _witness_preconditions(p: Presentation) -> None:
    from .classify import classify_biserial, clock_counts, underlying_graph_stats

    stats = underlying_graph_stats(p)
    if stats.components != 1:
        raise PreconditionError("PRECONDITION", "witness needs a connected quiver")
    if not classify_biserial(p).gentle:
        raise PreconditionError("PRECONDITION", "witness needs a gentle presentation")
    if stats.betti != 1:
        raise PreconditionError("PRECONDITION", f"witness needs betti 1, got {stats.betti}")
    cc = clock_counts(p)
    if cc.equal:
        raise PreconditionError(
            "PRECONDITION",
            f"relation counts along the cycle are balanced "
            f"({cc.with_traversal}, {cc.against_traversal}); no witness exists",
        )


def build_witness_string(p: Presentation, _seed_level: int = 0) -> PeriodicString:
    """Construct the level-periodic infinite string over the double.

    Depth-first walk seeded with a connecting arrow at level ``_seed_level``,
    trying maximal paths in id order: a connecting arrow attached to a
    pendant maximal path can be a dead end of the double (every composite
    through it is a full-path relation), in which case no infinite string
    passes through it and the next seed is tried.  At each step the walk
    prefers turning at a crossing over extending the current run and
    backtracks out of dead ends.  A segment closes at each turn and records
    (arrow base, run direction); recurrence of a key at two different levels
    yields the period, which is normalized to start with the smallest
    connecting letter and translated so its smallest level is 0.
    """
    _witness_preconditions(p)
    rs = _structure(p)
    budget = 4 * (len(p.quiver.arrows) + len(rs.paths)) + 4
    saw_cycle = False
    for mp in rs.paths:
        seed = LArrow("connecting", mp.cid, _seed_level)
        try:
            return _search_from(p, rs, seed, budget)
        except ClockCycleError:
            saw_cycle = True
        except WitnessBudgetError:
            pass
    if saw_cycle:
        raise ClockCycleError(
            "every walk closes up at a single level; input behaves clock-like"
        )
    raise WitnessBudgetError(f"no periodic string found within {budget} segments per seed")


def _search_from(p: Presentation, rs, seed: LArrow, budget: int) -> PeriodicString:
    walk: list[tuple[LArrow, bool]] = [(seed, False)]
    segments: list[tuple[tuple[str, bool], int, int]] = []  # (key, level, walk idx)
    run_path: list[LArrow] = [seed]
    run_inverse = False
    run_start = 0
    frontier = rs.tgt(seed)
    saw_cycle = False

    def moves():
        """Ordered candidate letters: turn first, then run extension."""
        last = walk[-1][0]
        out = []
        if not run_inverse:
            for e in rs.in_arrows(frontier):
                if e != last:
                    out.append(("turn", e))
            for b in rs.out_arrows(frontier):
                if rs.ok_append(run_path, b):
                    out.append(("continue", b))
        else:
            for b in rs.out_arrows(frontier):
                if b != last:
                    out.append(("turn", b))
            for e in rs.in_arrows(frontier):
                if rs.ok_prepend(e, run_path):
                    out.append(("continue", e))
        return out

    def close_record():
        for idx in range(run_start, len(walk)):
            a = walk[idx][0]
            if a.kind == "connecting":
                return (a.base, run_inverse), a.level, idx
        a = walk[run_start][0]
        return (a.base, run_inverse), a.level, run_start

    def snapshot(alts):
        return (len(walk), len(segments), list(run_path), run_inverse, run_start, frontier, alts)

    stack: list[tuple] = []
    alternatives = moves()
    iterations = 0

    while True:
        iterations += 1
        if iterations > 500_000:
            raise WitnessBudgetError("witness search exceeded its iteration cap")
        if not alternatives:
            if not stack:
                if saw_cycle:
                    raise ClockCycleError(
                        "walk can only close up at a single level; input behaves clock-like"
                    )
                raise WitnessBudgetError(f"no periodic string found within {budget} segments")
            wl, sl, rp, ri, rst, fr, alternatives = stack.pop()
            del walk[wl:]
            del segments[sl:]
            run_path, run_inverse, run_start, frontier = rp, ri, rst, fr
            continue
        kind, arrow = alternatives.pop(0)
        if kind == "turn":
            key, lvl, idx = close_record()
            closed_up = False
            found = None
            for (k0, l0, i0) in segments:
                if k0 != key:
                    continue
                if l0 == lvl:
                    closed_up = True
                    continue
                ps = _normalize(p, rs, walk[i0:idx], lvl - l0)
                if _splice_ok(ps):
                    found = ps
                    break
            if found is not None:
                return found
            if closed_up:
                saw_cycle = True
                continue
            if len(segments) + 1 > budget:
                continue
            stack.append(snapshot(alternatives))
            segments.append((key, lvl, idx))
            run_inverse = not run_inverse
            walk.append((arrow, run_inverse))
            run_path = [arrow]
            run_start = len(walk) - 1
            frontier = rs.src(arrow) if run_inverse else rs.tgt(arrow)
        else:
            stack.append(snapshot(alternatives))
            walk.append((arrow, run_inverse))
            if run_inverse:
                run_path = [arrow] + run_path
                frontier = rs.src(arrow)
            else:
                run_path = run_path + [arrow]
                frontier = rs.tgt(arrow)
        alternatives = moves()


def _normalize(p, rs, period, d) -> PeriodicString:
    conn = [
        (i, a) for i, (a, _inv) in enumerate(period) if a.kind == "connecting"
    ]
    if not conn:
        raise RuntimeError("period without connecting letters cannot shift levels")
    best_mp = min(rs.by_cid[a.base].index for _, a in conn)
    best = None
    for i, a in conn:
        if rs.by_cid[a.base].index != best_mp:
            continue
        rotated = list(period[i:]) + [(x.shifted(d), inv) for (x, inv) in period[:i]]
        t = -min(x.level for (x, _inv) in rotated)
        normal = [(x.shifted(t), inv) for (x, inv) in rotated]
        enc = tuple((x.base, x.level, inv) for (x, inv) in normal)
        if best is None or enc < best[0]:
            best = (enc, normal)
    letters = tuple(Letter(x.name, inv) for (x, inv) in best[1])
    first, first_inv = best[1][0]
    anchor = rs.tgt(first) if first_inv else rs.src(first)
    return PeriodicString(p, letters, d, anchor)


def _splice_ok(ps: PeriodicString) -> bool:
    # long relations can span several short periods; truncate generously
    rs = _structure(ps.presentation)
    span = max((len(mp.arrows) for mp in rs.paths), default=1) + 2
    n = span // max(1, len(ps.period)) + 3
    word = ps.truncate(n)
    lvls = [split_leveled(l.arrow)[1] for l in word.letters]
    win = ps.window_for(min(lvls), max(lvls))
    return validate_string(win, word).ok


# ---------------------------------------------------------------------------
# the periodic module and its checks


@dataclass(frozen=True)
class PeriodicModule:
    orbit_dims: tuple[tuple[str, int], ...]
    orbit_matrices: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...]

    def dim(self, key: str) -> int:
        return dict(self.orbit_dims).get(key, 0)

    def matrix(self, key: str):
        return dict(self.orbit_matrices)[key]


def _orbit_key(base: str, level: int, modulus: int) -> str:
    return base if modulus == 1 else f"{base}@{level % modulus}"


def _interior_truncation(ps: PeriodicString):
    """Truncation word and module with a fully surrounded middle instance.

    Returns (module, mid) where shifting period data by mid * level_shift
    lands inside the truncation far from both ends: every position the
    bi-infinite word contributes near the middle instance is present.
    """
    d = ps.level_shift
    lo, hi = ps.level_range()
    width = (hi - lo) // abs(d) + 1
    mid = width + 1
    word = ps.truncate(2 * width + 4)
    lvls = [split_leveled(l.arrow)[1] for l in word.letters]
    win = ps.window_for(min(lvls), max(lvls))
    return string_module(win, word), mid


def periodic_string_module(ps: PeriodicString) -> PeriodicModule:
    """Orbit dimensions and the level-independent arrow matrices.

    Matrices are read off a truncation with enough periods that the middle
    instance is unaffected by the cut, and cross-checked against the next
    instance; they are constant along shift orbits by construction.
    """
    m = abs(ps.level_shift)
    d = ps.level_shift
    dims = Counter(_orbit_key(v, lvl, m) for (v, lvl) in ps.positions())
    mod, mid = _interior_truncation(ps)

    mats: dict[str, tuple] = {}
    for l in ps.period:
        a = arrow_from_name(l.arrow)
        rep = a.shifted(mid * d)
        again = a.shifted((mid + 1) * d)
        if mod.matrix(rep.name) != mod.matrix(again.name):
            raise RuntimeError(f"orbit matrix not shift-constant at {a.name}")
        key = _orbit_key(a.base, a.level, m)
        if key in mats and mats[key] != mod.matrix(rep.name):
            raise RuntimeError(f"conflicting matrices within orbit {key}")
        mats[key] = mod.matrix(rep.name)
    return PeriodicModule(
        orbit_dims=tuple(sorted(dims.items())),
        orbit_matrices=tuple(sorted(mats.items())),
    )


def truncation_module(ps: PeriodicString, n_periods: int, start: int = 0) -> StringModule:
    """Explicit module of a finite stretch of the periodic string, over a
    string-variant window sized to the requested instances."""
    word = ps.truncate(n_periods, start)
    lvls = [split_leveled(l.arrow)[1] for l in word.letters]
    win = ps.window_for(min(lvls), max(lvls))
    return string_module(win, word)


@dataclass(frozen=True)
class LocalFinitenessReport:
    ok: bool
    max_dim: int
    orbit_dims: tuple[tuple[str, int], ...]
    detail: str = ""


def local_finiteness_check(ps: PeriodicString) -> LocalFinitenessReport:
    """Recompute per-vertex dimensions from a long truncation and confirm
    every leveled vertex carries a finite, shift-constant count.

    The count at a middle-instance vertex aggregates contributions from all
    neighbouring instances, so it must equal the per-orbit position count of
    a single period.
    """
    d = ps.level_shift
    per_orbit = Counter(_orbit_key(v, lvl, abs(d)) for (v, lvl) in ps.positions())
    mod, mid = _interior_truncation(ps)
    detail = ""
    ok = True
    for (v, lvl) in ps.positions():
        for probe in (mid, mid + 1):
            leveled_v = leveled(v, lvl + probe * d)
            expect = per_orbit[_orbit_key(v, lvl, abs(d))]
            if mod.dim(leveled_v) != expect:
                ok = False
                detail = (
                    f"vertex {leveled_v} carries {mod.dim(leveled_v)} positions, "
                    f"expected {expect}"
                )
    max_dim = max(per_orbit.values()) if per_orbit else 0
    return LocalFinitenessReport(
        ok=ok,
        max_dim=max_dim,
        orbit_dims=tuple(sorted(per_orbit.items())),
        detail=detail,
    )


# ---------------------------------------------------------------------------
# the bundled witness


@dataclass(frozen=True)
class Witness:
    string: PeriodicString
    module: PeriodicModule


def witness_doc(w: Witness) -> dict:
    ps = w.string
    return {
        "period": [
            {
                "arrow": split_leveled(l.arrow)[0],
                "level": split_leveled(l.arrow)[1],
                "dir": "-" if l.inverse else "+",
            }
            for l in reversed(ps.period)
        ],
        "level_shift": ps.level_shift,
        "anchor": {"vertex": ps.anchor[0], "level": ps.anchor[1]},
        "module": {
            "orbit_dims": {k: v for k, v in w.module.orbit_dims},
            "orbit_matrices": {k: [list(row) for row in m] for k, m in w.module.orbit_matrices},
        },
    }


def witness_json(w: Witness) -> str:
    return json.dumps(witness_doc(w), indent=2, sort_keys=True) + "\n"
