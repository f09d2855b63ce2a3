"""Seeded random gentle presentations for property suites.

Construction is local: whenever a new arrow meets existing arrows at a
vertex, each composable pair is assigned "permitted" or "relation" subject
to the gentle budgets (at most one permitted and one forbidden continuation
per arrow and side).  Cycles are laid out first, either oriented (all
arrows one way, at least one relation, always unbalanced) or as two
directed arcs between a source and a sink (relation counts on the arcs
balance or unbalance the cycle at will); remaining vertices hang off as
tree branches.
"""

from __future__ import annotations

import random
from collections import defaultdict

from .errors import InfeasibleError
from .presentation import Arrow, Presentation, Quiver, validate_presentation


class _Builder:
    def __init__(self):
        self.vertices: list[str] = []
        self.arrows: list[Arrow] = []
        self.ins: dict[str, list[str]] = defaultdict(list)
        self.outs: dict[str, list[str]] = defaultdict(list)
        self.pair: dict[tuple[str, str], str] = {}  # (pred, succ) -> "perm" | "rel"
        self.perm_succ: dict[str, int] = defaultdict(int)
        self.rel_succ: dict[str, int] = defaultdict(int)
        self.perm_pred: dict[str, int] = defaultdict(int)
        self.rel_pred: dict[str, int] = defaultdict(int)

    def add_vertex(self, v: str):
        self.vertices.append(v)

    def room(self, src: str, tgt: str) -> bool:
        return src != tgt and len(self.outs[src]) < 2 and len(self.ins[tgt]) < 2

    def _resolve(self, forced: list[str | None], rng) -> list[str] | None:
        """Fill None slots so that at most one 'perm' and one 'rel' result."""
        if len(forced) == 2 and forced[0] == forced[1] and forced[0] is not None:
            return None
        if len(forced) == 2:
            a, b = forced
            if a is None and b is None:
                a = rng.choice(["perm", "rel"])
            if a is None:
                a = "perm" if b == "rel" else "rel"
            if b is None:
                b = "perm" if a == "rel" else "rel"
            return [a, b]
        if len(forced) == 1:
            return [forced[0] if forced[0] is not None else rng.choice(["perm", "rel"])]
        return []

    def add_arrow(self, name: str, src: str, tgt: str, rng, overrides=None) -> bool:
        """Attach an arrow and assign all new composable pairs; False if the
        gentle budgets cannot be met (nothing is mutated on failure)."""
        if not self.room(src, tgt):
            return False
        overrides = overrides or {}

        preds = list(self.ins[src])
        forced_p: list[str | None] = []
        for a in preds:
            want = overrides.get((a, name))
            if self.perm_succ[a] and self.rel_succ[a]:
                return False
            if self.perm_succ[a]:
                forced = "rel"
            elif self.rel_succ[a]:
                forced = "perm"
            else:
                forced = None
            if want is not None and forced is not None and want != forced:
                return False
            forced_p.append(want if want is not None else forced)
        kinds_p = self._resolve(forced_p, rng)
        if kinds_p is None:
            return False

        succs = list(self.outs[tgt])
        forced_s: list[str | None] = []
        for b in succs:
            want = overrides.get((name, b))
            if self.perm_pred[b] and self.rel_pred[b]:
                return False
            if self.perm_pred[b]:
                forced = "rel"
            elif self.rel_pred[b]:
                forced = "perm"
            else:
                forced = None
            if want is not None and forced is not None and want != forced:
                return False
            forced_s.append(want if want is not None else forced)
        kinds_s = self._resolve(forced_s, rng)
        if kinds_s is None:
            return False

        for a, kind in zip(preds, kinds_p):
            self.pair[(a, name)] = kind
            if kind == "perm":
                self.perm_succ[a] += 1
                self.perm_pred[name] += 1
            else:
                self.rel_succ[a] += 1
                self.rel_pred[name] += 1
        for b, kind in zip(succs, kinds_s):
            self.pair[(name, b)] = kind
            if kind == "perm":
                self.perm_pred[b] += 1
                self.perm_succ[name] += 1
            else:
                self.rel_pred[b] += 1
                self.rel_succ[name] += 1
        self.arrows.append(Arrow(name, src, tgt))
        self.outs[src].append(name)
        self.ins[tgt].append(name)
        return True

    def presentation(self, name: str) -> Presentation:
        rels = tuple(sorted(pair for pair, kind in self.pair.items() if kind == "rel"))
        return Presentation(name, Quiver(tuple(self.vertices), tuple(self.arrows)), rels)


def _attach_branches(b: _Builder, rng, first: int, n: int) -> bool:
    for u in range(first, n + 1):
        v = str(u)
        b.add_vertex(v)
        hosts = [w for w in b.vertices if w != v]
        rng.shuffle(hosts)
        done = False
        for w in hosts:
            dirs = [(w, v), (v, w)]
            rng.shuffle(dirs)
            for src, tgt in dirs:
                if b.add_arrow(f"t{u}", src, tgt, rng):
                    done = True
                    break
            if done:
                break
        if not done:
            return False
    return True


def _oriented_cycle(b: _Builder, rng, m: int) -> None:
    for i in range(1, m + 1):
        b.add_vertex(str(i))
    k = rng.randint(1, m)
    rel_at = set(rng.sample(range(m), k))
    names = [f"a{i + 1}" for i in range(m)]
    for i in range(m):
        src, tgt = str(i + 1), str((i + 1) % m + 1)
        overrides = {}
        if i > 0:
            overrides[(names[i - 1], names[i])] = "rel" if (i - 1) in rel_at else "perm"
        if i == m - 1:
            overrides[(names[m - 1], names[0])] = "rel" if (m - 1) in rel_at else "perm"
        if not b.add_arrow(names[i], src, tgt, rng, overrides):
            raise InfeasibleError("oriented cycle layout failed")


def _split_cycle(b: _Builder, rng, m: int, balanced: bool | None) -> bool:
    l1 = rng.randint(1, m - 1)
    l2 = m - l1
    if balanced is False and max(l1, l2) < 2:
        return False
    if balanced is True:
        r = rng.randint(0, max(0, min(l1, l2) - 1))
        r1 = r2 = r
    elif balanced is False:
        options = [
            (x, y) for x in range(l1) for y in range(l2) if x != y
        ]
        if not options:
            return False
        r1, r2 = rng.choice(options)
    else:
        r1, r2 = rng.randint(0, l1 - 1), rng.randint(0, l2 - 1)

    # arc vertices: source "1", sink "2", interiors numbered onward
    b.add_vertex("1")
    b.add_vertex("2")
    nxt = 3

    def lay_arc(length: int, prefix: str, rels: int) -> None:
        nonlocal nxt
        stations = ["1"]
        for _ in range(length - 1):
            stations.append(str(nxt))
            b.add_vertex(str(nxt))
            nxt += 1
        stations.append("2")
        rel_at = set(rng.sample(range(length - 1), rels)) if length > 1 else set()
        names = [f"{prefix}{i + 1}" for i in range(length)]
        for i in range(length):
            overrides = {}
            if i > 0:
                overrides[(names[i - 1], names[i])] = "rel" if (i - 1) in rel_at else "perm"
            if not b.add_arrow(names[i], stations[i], stations[i + 1], rng, overrides):
                raise InfeasibleError("arc layout failed")

    lay_arc(l1, "a", r1)
    lay_arc(l2, "b", r2)
    return True


def generate_random_gentle(
    seed: int,
    n_vertices: int,
    want_cycle: bool,
    want_clock: bool | None = None,
) -> Presentation:
    """Deterministic-in-seed gentle presentation with the requested shape.

    ``want_clock`` (only meaningful with ``want_cycle``) asks for balanced
    (True) or unbalanced (False) relation counts along the cycle.  Raises
    InfeasibleError when the constraints cannot be met.
    """
    if n_vertices < 2:
        raise ValueError("need at least 2 vertices")
    rng = random.Random(seed)
    from .classify import classify_biserial, clock_counts, underlying_graph_stats

    for _ in range(64):
        b = _Builder()
        try:
            if want_cycle:
                style_oriented = want_clock is not True and rng.random() < 0.5
                m = rng.randint(2, n_vertices)
                if style_oriented:
                    _oriented_cycle(b, rng, m)
                elif not _split_cycle(b, rng, m, want_clock):
                    continue
                if not _attach_branches(b, rng, m + 1, n_vertices):
                    continue
            else:
                b.add_vertex("1")
                if not _attach_branches(b, rng, 2, n_vertices):
                    continue
        except InfeasibleError:
            continue
        p = b.presentation(f"rand{seed}")
        if not validate_presentation(p).ok:
            continue
        if not classify_biserial(p).gentle:
            continue
        stats = underlying_graph_stats(p)
        if stats.components != 1 or (stats.betti == 1) != want_cycle:
            continue
        if want_cycle and want_clock is not None:
            if clock_counts(p).equal != want_clock:
                continue
        return p
    raise InfeasibleError(
        f"no gentle presentation for seed={seed}, n={n_vertices}, "
        f"cycle={want_cycle}, clock={want_clock} within the attempt budget"
    )
