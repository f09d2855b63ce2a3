"""Finite windows of the doubled (repetitive) quiver of a gentle presentation.

Level i carries a copy of the quiver; each maximal permitted path p
contributes a connecting arrow from the end of p at level i to the start of
p at level i+1.  The "string" variant turns every full path through a
connecting arrow into a zero relation; the "hatted" variant keeps only the
longer zero relations and records the commutativity identifications as
metadata.

Leveled names are "<base>@<level>"; connecting arrows are named "~c<k>@<level>"
with k the index of the maximal path in the deterministic ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import PreconditionError
from .presentation import Presentation, Quiver, Arrow, PathT, permitted_paths

LVertex = tuple[str, int]


def leveled(base: str, level: int) -> str:
    return f"{base}@{level}"


def split_leveled(name: str) -> tuple[str, int]:
    base, _, lvl = name.rpartition("@")
    return base, int(lvl)


class LArrow(NamedTuple):
    kind: str  # "original" | "connecting"
    base: str
    level: int

    @property
    def name(self) -> str:
        return leveled(self.base, self.level)

    def shifted(self, k: int) -> "LArrow":
        return LArrow(self.kind, self.base, self.level + k)


@dataclass(frozen=True)
class MaximalPath:
    index: int
    arrows: PathT  # traversal order
    src: str
    tgt: str

    @property
    def cid(self) -> str:
        return f"~c{self.index}"


def maximal_paths(p: Presentation) -> list[PathT]:
    """Permitted paths with no permitted one-arrow extension on either side."""
    return [mp.arrows for mp in RepetitiveStructure(p).paths]


class RepetitiveStructure:
    """Level-free description of the doubled quiver of a gentle presentation.

    Answers adjacency and relation queries at arbitrary levels without
    materializing a window; windows are built from the same data.
    """

    def __init__(self, p: Presentation):
        from .classify import classify_biserial

        if not classify_biserial(p).gentle:
            raise PreconditionError("NOT_GENTLE", "repetitive construction needs a gentle presentation")
        incident = {v: 0 for v in p.quiver.vertices}
        for a in p.quiver.arrows:
            incident[a.src] += 1
            incident[a.tgt] += 1
        isolated = [v for v, n in incident.items() if n == 0]
        if isolated:
            raise PreconditionError("ISOLATED_VERTEX", f"isolated vertices: {', '.join(isolated)}")

        self.p = p
        all_paths = permitted_paths(p)
        maximal = []
        for q in all_paths:
            src, tgt = p.path_src(q), p.path_tgt(q)
            if any(p.is_permitted((a.name,) + q) for a in p.quiver.incoming(src)):
                continue
            if any(p.is_permitted(q + (a.name,)) for a in p.quiver.outgoing(tgt)):
                continue
            maximal.append(q)
        maximal.sort(key=lambda q: (len(q), q))
        self.paths = [
            MaximalPath(i, q, p.path_src(q), p.path_tgt(q)) for i, q in enumerate(maximal)
        ]
        self.by_cid = {mp.cid: mp for mp in self.paths}
        self.mp_starting = {v: [mp for mp in self.paths if mp.src == v] for v in p.quiver.vertices}
        self.mp_ending = {v: [mp for mp in self.paths if mp.tgt == v] for v in p.quiver.vertices}

        self._kinds: dict[str, str] = {}
        for v in p.quiver.vertices:
            ins = p.quiver.incoming(v)
            outs = p.quiver.outgoing(v)
            matched = sum(
                1 for a in ins for b in outs if p.is_permitted((a.name, b.name))
            )
            degree = len(ins) + len(outs) - matched
            if degree == 1:
                self._kinds[v] = "transition"
            elif degree == 2:
                self._kinds[v] = "crossing"
            else:
                raise PreconditionError(
                    "NOT_GENTLE", f"vertex {v} is neither crossing nor transition in the double"
                )

    def vertex_kind(self, base: str) -> str:
        return self._kinds[base]

    # -- leveled adjacency ---------------------------------------------------

    def src(self, a: LArrow) -> LVertex:
        if a.kind == "original":
            return (self.p.quiver.arrow(a.base).src, a.level)
        mp = self.by_cid[a.base]
        return (mp.tgt, a.level)

    def tgt(self, a: LArrow) -> LVertex:
        if a.kind == "original":
            return (self.p.quiver.arrow(a.base).tgt, a.level)
        mp = self.by_cid[a.base]
        return (mp.src, a.level + 1)

    def out_arrows(self, v: LVertex) -> list[LArrow]:
        base, lvl = v
        out = [LArrow("original", a.name, lvl) for a in self.p.quiver.outgoing(base)]
        out += [LArrow("connecting", mp.cid, lvl) for mp in self.mp_ending[base]]
        return out

    def in_arrows(self, v: LVertex) -> list[LArrow]:
        base, lvl = v
        ins = [LArrow("original", a.name, lvl) for a in self.p.quiver.incoming(base)]
        ins += [LArrow("connecting", mp.cid, lvl - 1) for mp in self.mp_starting[base]]
        return ins

    # -- anchored relation tests (string variant) ----------------------------

    def _instances_ending_with(self, x: LArrow):
        if x.kind == "original":
            for rel in self.p.relations:
                if rel[-1] == x.base:
                    yield tuple(LArrow("original", b, x.level) for b in rel)
            for mp in self.paths:
                L = len(mp.arrows)
                for t in range(1, L + 1):
                    if mp.arrows[t - 1] != x.base:
                        continue
                    s = L - t
                    i = x.level - 1
                    yield (
                        tuple(LArrow("original", b, i) for b in mp.arrows[L - s :])
                        + (LArrow("connecting", mp.cid, i),)
                        + tuple(LArrow("original", b, i + 1) for b in mp.arrows[:t])
                    )
            # mismatched junction: a connecting arrow followed by an arrow
            # that is not the first letter of its path is zero
            for mp in self.mp_starting[self.p.quiver.arrow(x.base).src]:
                if mp.arrows[0] != x.base:
                    yield (LArrow("connecting", mp.cid, x.level - 1), x)
        else:
            q = self.by_cid[x.base]
            for mp in self.paths:
                if mp.src == q.tgt:  # c_mp at level-1 composes into x
                    yield (LArrow("connecting", mp.cid, x.level - 1), x)
            yield tuple(LArrow("original", b, x.level) for b in q.arrows) + (x,)
            for a in self.p.quiver.incoming(q.tgt):
                if a.name != q.arrows[-1]:
                    yield (LArrow("original", a.name, x.level), x)

    def _instances_starting_with(self, y: LArrow):
        if y.kind == "original":
            for rel in self.p.relations:
                if rel[0] == y.base:
                    yield tuple(LArrow("original", b, y.level) for b in rel)
            for mp in self.paths:
                L = len(mp.arrows)
                for s in range(1, L + 1):
                    if mp.arrows[L - s] != y.base:
                        continue
                    t = L - s
                    i = y.level
                    yield (
                        tuple(LArrow("original", b, i) for b in mp.arrows[L - s :])
                        + (LArrow("connecting", mp.cid, i),)
                        + tuple(LArrow("original", b, i + 1) for b in mp.arrows[:t])
                    )
            for mp in self.mp_ending[self.p.quiver.arrow(y.base).tgt]:
                if mp.arrows[-1] != y.base:
                    yield (y, LArrow("connecting", mp.cid, y.level))
        else:
            p0 = self.by_cid[y.base]
            for mp in self.paths:
                if p0.src == mp.tgt:  # y composes into c_mp at level+1
                    yield (y, LArrow("connecting", mp.cid, y.level + 1))
            yield (y,) + tuple(LArrow("original", b, y.level + 1) for b in p0.arrows)
            for a in self.p.quiver.outgoing(p0.src):
                if a.name != p0.arrows[0]:
                    yield (y, LArrow("original", a.name, y.level + 1))

    def ok_append(self, path: list[LArrow], x: LArrow) -> bool:
        """May the direct run ``path`` be extended by ``x`` (no relation suffix)?"""
        full = tuple(path) + (x,)
        for inst in self._instances_ending_with(x):
            if len(inst) <= len(full) and full[len(full) - len(inst) :] == inst:
                return False
        return True

    def ok_prepend(self, y: LArrow, path: list[LArrow]) -> bool:
        full = (y,) + tuple(path)
        for inst in self._instances_starting_with(y):
            if len(inst) <= len(full) and full[: len(inst)] == inst:
                return False
        return True


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class WindowRelation:
    kind: str  # "original" | "connecting" | "full"
    word: tuple[str, ...]  # leveled arrow names, traversal order


@dataclass(frozen=True)
class RepetitiveWindow:
    source: Presentation
    lo: int
    hi: int
    variant: str
    vertices: tuple[LVertex, ...]
    arrows: tuple[LArrow, ...]
    relations: tuple[WindowRelation, ...]
    vertex_kinds: tuple[tuple[LVertex, str], ...]
    commutations: tuple[tuple[tuple[str, ...], ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_kind_map", dict(self.vertex_kinds))

    def kind_of(self, v: LVertex) -> str:
        return self._kind_map[v]

    def zero_relations(self) -> list[tuple[str, ...]]:
        return [r.word for r in self.relations]

    def hat_relations(self) -> list[tuple[str, ...]]:
        """Zero relations of the non-string flavour: shifted originals,
        consecutive connecting arrows, and mismatched junctions."""
        return [
            r.word
            for r in self.relations
            if r.kind in ("original", "connecting", "junction")
        ]

    def as_presentation(self) -> Presentation:
        rs = _structure(self.source)
        verts = tuple(leveled(b, i) for (b, i) in self.vertices)
        arrs = tuple(
            Arrow(a.name, leveled(*rs.src(a)), leveled(*rs.tgt(a))) for a in self.arrows
        )
        name = f"{self.source.name}.window.{self.lo}.{self.hi}"
        return Presentation(name, Quiver(verts, arrs), tuple(self.zero_relations()))

    def shifted(self, k: int) -> "RepetitiveWindow":
        def shift_name(n):
            b, l = split_leveled(n)
            return leveled(b, l + k)

        def shift_word(word):
            return tuple(shift_name(n) for n in word)

        return RepetitiveWindow(
            source=self.source,
            lo=self.lo + k,
            hi=self.hi + k,
            variant=self.variant,
            vertices=tuple((b, i + k) for (b, i) in self.vertices),
            arrows=tuple(a.shifted(k) for a in self.arrows),
            relations=tuple(WindowRelation(r.kind, shift_word(r.word)) for r in self.relations),
            vertex_kinds=tuple(((b, i + k), kind) for ((b, i), kind) in self.vertex_kinds),
            commutations=tuple(
                tuple(shift_word(word) for word in cls) for cls in self.commutations
            ),
        )


def arrow_from_name(name: str) -> LArrow:
    base, lvl = split_leveled(name)
    kind = "connecting" if base.startswith("~") else "original"
    return LArrow(kind, base, lvl)


def shift(entity, k: int):
    """Relabel levels by +k: works on leveled vertices (base, level) tuples,
    leveled arrows, windows, words, and periodic strings."""
    if isinstance(entity, tuple) and len(entity) == 2 and isinstance(entity[1], int):
        return (entity[0], entity[1] + k)
    return entity.shifted(k)


@lru_cache(maxsize=64)
def _structure(p: Presentation) -> RepetitiveStructure:
    return RepetitiveStructure(p)


def build_repetitive_window(
    p: Presentation, lo: int, hi: int, variant: str = "string"
) -> RepetitiveWindow:
    """Materialize levels lo..hi of the doubled quiver.

    String variant: every full path through a connecting arrow (suffix of p,
    the connecting arrow of p, prefix of p, with suffix+prefix lengths summing
    to len(p)) is a zero relation.  Hatted variant: only the longer words
    (length sum len(p)+1) vanish and the equal-length splittings are recorded
    as commutativity classes.
    """
    if variant not in ("string", "hatted"):
        raise ValueError(f"unknown variant {variant!r}")
    if hi - lo < 1:
        raise PreconditionError("WINDOW_TOO_SMALL", "need hi - lo >= 1")
    rs = _structure(p)

    vertices = tuple((v, i) for i in range(lo, hi + 1) for v in p.quiver.vertices)
    arrows = [LArrow("original", a.name, i) for i in range(lo, hi + 1) for a in p.quiver.arrows]
    arrows += [LArrow("connecting", mp.cid, i) for i in range(lo, hi) for mp in rs.paths]

    relations: list[WindowRelation] = []
    for i in range(lo, hi + 1):
        for rel in p.relations:
            relations.append(
                WindowRelation("original", tuple(leveled(b, i) for b in rel))
            )
    for i in range(lo, hi - 1):
        for mp_p in rs.paths:
            for mp_q in rs.paths:
                if mp_p.src == mp_q.tgt:
                    relations.append(
                        WindowRelation(
                            "connecting",
                            (leveled(mp_p.cid, i), leveled(mp_q.cid, i + 1)),
                        )
                    )
    # mismatched junctions: an arrow meeting the connecting arrow of a path
    # it does not belong to composes to zero
    for i in range(lo, hi):
        for mp in rs.paths:
            for a in p.quiver.incoming(mp.tgt):
                if a.name != mp.arrows[-1]:
                    relations.append(
                        WindowRelation("junction", (leveled(a.name, i), leveled(mp.cid, i)))
                    )
            for a in p.quiver.outgoing(mp.src):
                if a.name != mp.arrows[0] and i + 1 <= hi:
                    relations.append(
                        WindowRelation(
                            "junction", (leveled(mp.cid, i), leveled(a.name, i + 1))
                        )
                    )
    commutations: list[tuple[tuple[str, ...], ...]] = []
    for i in range(lo, hi):
        for mp in rs.paths:
            L = len(mp.arrows)

            def split_word(s: int, t: int) -> tuple[str, ...]:
                return (
                    tuple(leveled(b, i) for b in mp.arrows[L - s :])
                    + (leveled(mp.cid, i),)
                    + tuple(leveled(b, i + 1) for b in mp.arrows[:t])
                )

            if variant == "string":
                for s in range(0, L + 1):
                    relations.append(WindowRelation("full", split_word(s, L - s)))
            else:
                for s in range(1, L + 1):
                    relations.append(WindowRelation("full", split_word(s, L + 1 - s)))
                commutations.append(tuple(split_word(s, L - s) for s in range(0, L + 1)))

    kinds: list[tuple[LVertex, str]] = []
    for (b, i) in vertices:
        if i == lo or i == hi:
            kinds.append(((b, i), "boundary"))
        else:
            kinds.append(((b, i), rs.vertex_kind(b)))

    return RepetitiveWindow(
        source=p,
        lo=lo,
        hi=hi,
        variant=variant,
        vertices=vertices,
        arrows=tuple(arrows),
        relations=tuple(relations),
        vertex_kinds=tuple(kinds),
        commutations=tuple(commutations),
    )


# ---------------------------------------------------------------------------
# the expanded-gentle sanity check


@dataclass(frozen=True)
class ExpandedGentleReport:
    ok: bool
    violations: tuple[tuple[str, str], ...] = ()  # (code, entity)


def check_expanded_gentle(w: RepetitiveWindow) -> ExpandedGentleReport:
    """Verify the structural picture of the double on a string-variant window.

    Every interior vertex must be a crossing (two in, two out) or a
    transition (one in, one out with permitted composite), and every path at
    interior levels that avoids the length-2 zero relations must extend by
    exactly one arrow on each side.  The extension test deliberately ignores
    the full-path relations; those only truncate, they do not branch.
    """
    if w.variant != "string":
        raise ValueError("check_expanded_gentle expects a string-variant window")
    rs = _structure(w.source)
    violations: list[tuple[str, str]] = []

    by_name = {a.name: a for a in w.arrows}
    into: dict[LVertex, list[LArrow]] = {v: [] for v in w.vertices}
    outof: dict[LVertex, list[LArrow]] = {v: [] for v in w.vertices}
    for a in w.arrows:
        outof[rs.src(a)].append(a)
        into[rs.tgt(a)].append(a)

    hat = set(w.hat_relations())

    def hat_permitted(word: tuple[str, ...]) -> bool:
        return not any(
            word[i : i + len(rel)] == rel
            for rel in hat
            for i in range(len(word) - len(rel) + 1)
        )

    interior = [v for v in w.vertices if w.lo < v[1] < w.hi]
    interior_set = set(interior)
    for v in interior:
        n_in, n_out = len(into[v]), len(outof[v])
        if (n_in, n_out) == (2, 2):
            continue
        if (n_in, n_out) == (1, 1):
            word = (into[v][0].name, outof[v][0].name)
            if hat_permitted(word):
                continue
            violations.append(("NOT_TRANSITION", leveled(*v)))
        else:
            violations.append(("BAD_DEGREE", leveled(*v)))

    # enumerate hat-permitted paths supported on interior vertices; a sound
    # window keeps them below the structural length bound
    max_mp = max((len(mp.arrows) for mp in rs.paths), default=1)
    cap = (w.hi - w.lo + 1) * (max_mp + 2)
    paths: list[tuple[str, ...]] = []
    frontier = [
        (a.name,)
        for a in w.arrows
        if rs.src(a) in interior_set and rs.tgt(a) in interior_set
    ]
    while frontier:
        paths.extend(frontier)
        if len(frontier[0]) >= cap:
            # only possible when the window's relations are damaged
            violations.append(
                ("UNBOUNDED_INTERIOR_PATHS", "interior paths pump without bound")
            )
            break
        nxt = []
        for word in frontier:
            tail = by_name[word[-1]]
            for a in outof[rs.tgt(tail)]:
                if rs.tgt(a) in interior_set and hat_permitted(word + (a.name,)):
                    nxt.append(word + (a.name,))
        frontier = nxt

    for word in paths:
        head = by_name[word[0]]
        tail = by_name[word[-1]]
        left = sum(1 for a in into[rs.src(head)] if hat_permitted((a.name,) + word))
        right = sum(1 for a in outof[rs.tgt(tail)] if hat_permitted(word + (a.name,)))
        if left != 1:
            violations.append(("LEFT_EXTENSIONS", f"{left} for {' '.join(word)}"))
        if right != 1:
            violations.append(("RIGHT_EXTENSIONS", f"{right} for {' '.join(word)}"))

    return ExpandedGentleReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# exporters


def window_json(w: RepetitiveWindow) -> str:
    rs = _structure(w.source)
    doc = {
        "name": w.source.name,
        "window": [w.lo, w.hi],
        "variant": w.variant,
        "vertices": [
            {"id": leveled(b, i), "base": b, "level": i, "kind": w.kind_of((b, i))}
            for (b, i) in w.vertices
        ],
        "arrows": [
            {
                "id": a.name,
                "base": a.base,
                "level": a.level,
                "kind": a.kind,
                "src": leveled(*rs.src(a)),
                "tgt": leveled(*rs.tgt(a)),
            }
            for a in w.arrows
        ],
        "relations": [
            {"kind": r.kind, "word": list(reversed(r.word))} for r in w.relations
        ],
    }
    if w.variant == "hatted":
        doc["commutations"] = [
            [list(reversed(word)) for word in cls] for cls in w.commutations
        ]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def window_dot(w: RepetitiveWindow) -> str:
    rs = _structure(w.source)
    lines = [f'digraph "{w.source.name}_window" {{', "  rankdir=LR;"]
    for i in range(w.lo, w.hi + 1):
        members = "; ".join(f'"{leveled(b, j)}"' for (b, j) in w.vertices if j == i)
        lines.append(f'  {{ rank=same; {members}; }}')
    for (b, i) in w.vertices:
        lines.append(f'  "{leveled(b, i)}" [label="{b}[{i}]"];')
    for a in w.arrows:
        style = ', style=bold' if a.kind == "connecting" else ""
        lines.append(
            f'  "{leveled(*rs.src(a))}" -> "{leveled(*rs.tgt(a))}" [label="{a.name}"{style}];'
        )
    for r in w.relations:
        src = rs.src(arrow_from_name(r.word[0]))
        tgt = rs.tgt(arrow_from_name(r.word[-1]))
        lines.append(
            f'  "{leveled(*src)}" -> "{leveled(*tgt)}"'
            f' [label="{" ".join(reversed(r.word))}", style=dashed, constraint=false];'
        )
    for cls in w.commutations:
        words = " = ".join(" ".join(reversed(word)) for word in cls)
        lines.append(f"  // commutes: {words}")
    lines.append("}")
    return "\n".join(lines) + "\n"
