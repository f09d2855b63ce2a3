"""Algebra-class recognition and the generic-triviality decision.

The decision combines four ingredients computed from a presentation:
the special biserial / gentle conditions, the first Betti number of the
underlying undirected multigraph, the balance of relations along the unique
cycle (when there is one), and Dynkin recognition for relation-free inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .presentation import Presentation, Quiver, functional

#: tri-state: True / False / None (= unknown)
TriState = bool | None


@dataclass(frozen=True)
class BiserialReport:
    special_biserial: bool
    gentle: bool
    string_algebra: bool
    violated_conditions: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class GraphStats:
    components: int
    betti: int
    cycle: tuple[tuple[str, int], ...] | None = None  # (arrow, +1/-1) along traversal


@dataclass(frozen=True)
class ClockCounts:
    with_traversal: int
    against_traversal: int

    @property
    def equal(self) -> bool:
        return self.with_traversal == self.against_traversal


@dataclass(frozen=True)
class Equivalents:
    pure_semisimple: TriState
    perfect_complexes_locally_finite: TriState
    derived_discrete: TriState


@dataclass(frozen=True)
class TrivialityDecision:
    verdict: str  # "trivial" | "nontrivial" | "unknown"
    reason: str
    reason_text: str
    equivalents: Equivalents
    witness: object | None = None  # strings.Witness when requested


# ---------------------------------------------------------------------------
# biserial / gentle conditions


def classify_biserial(p: Presentation) -> BiserialReport:
    """Check the special biserial conditions and the two gentle extras.

    Requires a validated presentation; finiteness of permitted paths (the
    third biserial condition) is therefore taken as given.
    """
    q = p.quiver
    relset = set(p.relations)
    violations: list[tuple[str, str]] = []

    for v in q.vertices:
        if len(q.outgoing(v)) > 2 or len(q.incoming(v)) > 2:
            violations.append(("SB1", v))

    def permitted_pair(alpha: str, beta: str) -> bool:
        return p.is_permitted((alpha, beta))

    for b in q.arrows:
        preds = [a.name for a in q.incoming(b.src)]
        succs = [c.name for c in q.outgoing(b.tgt)]
        if sum(1 for a in preds if permitted_pair(a, b.name)) > 1:
            violations.append(("SB2", b.name))
        if sum(1 for c in succs if permitted_pair(b.name, c)) > 1:
            violations.append(("SB2", b.name))
        if sum(1 for a in preds if (a, b.name) in relset) > 1:
            violations.append(("G5", b.name))
        if sum(1 for c in succs if (b.name, c) in relset) > 1:
            violations.append(("G5", b.name))

    for rel in p.relations:
        if len(rel) != 2:
            violations.append(("G4", functional(rel)))

    sb = not any(code in ("SB1", "SB2") for code, _ in violations)
    gentle = sb and not any(code in ("G4", "G5") for code, _ in violations)
    return BiserialReport(
        special_biserial=sb,
        gentle=gentle,
        string_algebra=sb,  # relations are zero relations by construction
        violated_conditions=tuple(violations),
    )


# ---------------------------------------------------------------------------
# underlying multigraph


def underlying_graph_stats(p: Presentation) -> GraphStats:
    """Components and first Betti number of the underlying multigraph.

    When betti = 1 the unique cycle is returned with a deterministic
    traversal: start at the smallest cycle vertex id and move toward its
    smallest neighbour (arrow id breaks ties); +1 marks arrows pointing
    along the traversal.
    """
    q = p.quiver
    parent = {v: v for v in q.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in q.arrows:
        parent[find(a.src)] = find(a.tgt)
    components = len({find(v) for v in q.vertices})
    betti = len(q.arrows) - len(q.vertices) + components
    cycle = _unique_cycle(q) if betti == 1 else None
    return GraphStats(components=components, betti=betti, cycle=cycle)


def _unique_cycle(q: Quiver) -> tuple[tuple[str, int], ...]:
    # strip leaves; the 2-core of a betti-1 multigraph is its unique cycle
    alive = {a.name: a for a in q.arrows}
    incident: dict[str, list[str]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        incident[a.src].append(a.name)
        if a.tgt != a.src:
            incident[a.tgt].append(a.name)

    def degree(v):
        return sum(2 if alive[n].src == alive[n].tgt else 1 for n in incident[v] if n in alive)

    queue = [v for v in q.vertices if degree(v) == 1]
    while queue:
        v = queue.pop()
        live = [n for n in incident[v] if n in alive]
        if len(live) != 1:
            continue
        a = alive.pop(live[0])
        other = a.tgt if a.src == v else a.src
        if other != v and degree(other) == 1:
            queue.append(other)

    cycle_vertices = sorted({x for a in alive.values() for x in (a.src, a.tgt)})
    start = cycle_vertices[0]
    if len(alive) == 1:  # a loop
        name = next(iter(alive))
        return ((name, 1),)

    def other_end(a, v):
        return a.tgt if a.src == v else a.src

    first = min(
        (n for n in incident[start] if n in alive),
        key=lambda n: (other_end(alive[n], start), n),
    )
    order: list[tuple[str, int]] = []
    v, name = start, first
    used = set()
    while True:
        a = alive[name]
        order.append((name, 1 if a.src == v else -1))
        used.add(name)
        v = other_end(a, v)
        if v == start and len(used) == len(alive):
            break
        name = next(n for n in incident[v] if n in alive and n not in used)
    return tuple(order)


def clock_counts(p: Presentation) -> ClockCounts:
    """Count length-2 relations running along vs against the cycle traversal.

    Relations touching a non-cycle arrow, or whose two arrows sit on the
    cycle with opposite signs, are not counted.
    """
    rep = classify_biserial(p)
    if not rep.gentle:
        raise PreconditionError("NOT_GENTLE", "clock counts need a gentle presentation")
    stats = underlying_graph_stats(p)
    if stats.betti != 1:
        raise PreconditionError("NOT_ONE_CYCLE", f"betti is {stats.betti}, need exactly 1")
    sign = dict(stats.cycle)
    with_t = against_t = 0
    for rel in p.relations:
        if len(rel) != 2:
            continue
        a, b = rel
        if a in sign and b in sign:
            if sign[a] == 1 and sign[b] == 1:
                with_t += 1
            elif sign[a] == -1 and sign[b] == -1:
                against_t += 1
    return ClockCounts(with_t, against_t)


# ---------------------------------------------------------------------------
# Dynkin recognition


def dynkin_type(q: Quiver) -> str | None:
    """Label A/D/E when the underlying graph is a Dynkin tree, else None.

    Orientation is ignored.  Returns labels like "A3", "D5", "E8".
    """
    if not q.vertices:
        return None
    # connected tree check on the multigraph
    adj: dict[str, list[str]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        adj[a.src].append(a.tgt)
        adj[a.tgt].append(a.src)
    seen = {q.vertices[0]}
    stack = [q.vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(q.vertices):
        return None
    if len(q.arrows) != len(q.vertices) - 1:
        return None  # betti > 0 (includes loops and parallel edges)

    degrees = {v: len(adj[v]) for v in q.vertices}
    if any(d >= 4 for d in degrees.values()):
        return None
    branch_nodes = [v for v, d in degrees.items() if d == 3]
    n = len(q.vertices)
    if not branch_nodes:
        return f"A{n}"
    if len(branch_nodes) > 1:
        return None
    center = branch_nodes[0]
    lengths = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while degrees[cur] == 2:
            nxt = next(w for w in adj[cur] if w != prev)
            prev, cur = cur, nxt
            length += 1
        lengths.append(length)
    lengths.sort()
    if lengths[0] == 1 and lengths[1] == 1:
        return f"D{n}"
    if lengths == [1, 2, 2]:
        return "E6"
    if lengths == [1, 2, 3]:
        return "E7"
    if lengths == [1, 2, 4]:
        return "E8"
    return None


# ---------------------------------------------------------------------------
# relation cycles and derived discreteness


def has_relation_full_cycle(p: Presentation) -> bool:
    """Oriented arrow cycle all of whose consecutive composites are relations.

    Detected as a directed cycle in the graph on arrows with an edge a -> b
    whenever the composite b∘a is a relation; a sufficient condition for
    infinite global dimension.
    """
    relset = {rel for rel in p.relations if len(rel) == 2}
    succ: dict[str, list[str]] = {a.name: [] for a in p.quiver.arrows}
    for a, b in relset:
        succ[a].append(b)
    color = {a.name: 0 for a in p.quiver.arrows}

    def dfs(x) -> bool:
        color[x] = 1
        for y in succ[x]:
            if color[y] == 1 or (color[y] == 0 and dfs(y)):
                return True
        color[x] = 2
        return False

    return any(color[a.name] == 0 and dfs(a.name) for a in p.quiver.arrows)


@dataclass(frozen=True)
class DiscreteResult:
    value: TriState
    reason: str


def is_derived_discrete(p: Presentation) -> DiscreteResult:
    """Derived discreteness for hereditary and gentle inputs, else unknown."""
    stats = underlying_graph_stats(p)
    if stats.components != 1:
        raise PreconditionError("NOT_CONNECTED", "derived discreteness needs a connected quiver")
    rep = classify_biserial(p)
    if not p.relations:
        label = dynkin_type(p.quiver)
        if label is not None:
            return DiscreteResult(True, f"hereditary of Dynkin type {label}")
        return DiscreteResult(False, "hereditary of infinite representation type")
    if rep.gentle:
        if stats.betti == 0:
            return DiscreteResult(True, "gentle tree algebra, derived hereditary of type A")
        if stats.betti == 1:
            cc = clock_counts(p)
            if cc.equal:
                return DiscreteResult(
                    False,
                    f"gentle one-cycle with balanced relation counts "
                    f"({cc.with_traversal}, {cc.against_traversal})",
                )
            return DiscreteResult(
                True,
                f"gentle one-cycle with unbalanced relation counts "
                f"({cc.with_traversal}, {cc.against_traversal})",
            )
        return DiscreteResult(False, f"gentle with {stats.betti} independent cycles")
    return DiscreteResult(None, "not gentle and not hereditary; no classification applies")


# ---------------------------------------------------------------------------
# the top-level decision


def decide_generic_triviality(p: Presentation, want_witness: bool = False) -> TrivialityDecision:
    """Decide whether the unbounded derived category is generically trivial.

    First matching branch wins; gentle one-cycle with unbalanced relation
    counts beats the infinite-global-dimension shortcut so that an explicit
    witness can be attached.
    """
    stats = underlying_graph_stats(p)
    if stats.components != 1:
        raise PreconditionError("NOT_CONNECTED", "decision needs a connected quiver")
    rep = classify_biserial(p)
    dd = is_derived_discrete(p)

    def equivalents(verdict: str) -> Equivalents:
        if verdict == "trivial":
            return Equivalents(True, True, dd.value)
        if verdict == "nontrivial":
            return Equivalents(False, False, dd.value)
        return Equivalents(None, None, dd.value)

    def nontrivial(reason, text, witness=None):
        return TrivialityDecision("nontrivial", reason, text, equivalents("nontrivial"), witness)

    if not p.relations:
        label = dynkin_type(p.quiver)
        if label is not None:
            return TrivialityDecision(
                "trivial",
                "HEREDITARY_DYNKIN",
                f"hereditary algebra of Dynkin type {label}: no non-compact "
                "indecomposable endofinite objects exist",
                equivalents("trivial"),
            )
        return nontrivial(
            "HEREDITARY_INFINITE_TYPE",
            "hereditary of infinite representation type: a generic module exists "
            "and embeds as a generic object",
        )

    gentle_one_cycle = rep.gentle and stats.betti == 1
    unbalanced = gentle_one_cycle and not clock_counts(p).equal
    if unbalanced:
        witness = None
        if want_witness:
            from .strings import build_witness_string, periodic_string_module, Witness

            ps = build_witness_string(p)
            witness = Witness(ps, periodic_string_module(ps))
        return nontrivial(
            "GENTLE_ONE_CYCLE_NONCLOCK",
            "gentle one-cycle algebra with unbalanced relation counts along the "
            "cycle: the doubled quiver carries a locally finite infinite string "
            "whose module is a generic object",
            witness,
        )
    if has_relation_full_cycle(p):
        return nontrivial(
            "INFINITE_GLOBAL_DIMENSION",
            "an oriented cycle of consecutive relations forces infinite global "
            "dimension, so some bounded complex is a non-compact generic object",
        )
    if gentle_one_cycle:
        cc = clock_counts(p)
        return nontrivial(
            "GENTLE_ONE_CYCLE_CLOCK",
            f"gentle one-cycle algebra with balanced relation counts "
            f"({cc.with_traversal}, {cc.against_traversal}): derived equivalent to a "
            "representation-infinite hereditary algebra of extended type A",
        )
    if rep.gentle and stats.betti >= 2:
        return nontrivial(
            "GENTLE_MULTICYCLE",
            f"gentle algebra with {stats.betti} independent cycles is not derived "
            "discrete, hence not derived equivalent to a Dynkin-type hereditary algebra",
        )
    if rep.gentle:
        return TrivialityDecision(
            "trivial",
            "GENTLE_TREE",
            "gentle tree algebras are iterated tilted of type A (classical fact), "
            "hence derived equivalent to a hereditary algebra of Dynkin type A",
            equivalents("trivial"),
        )
    failed = []
    if not rep.gentle:
        conds = sorted({c for c, _ in rep.violated_conditions})
        failed.append("not gentle (violated: " + ", ".join(conds) + ")")
    failed.append("relations present")
    failed.append("global dimension undetermined")
    return TrivialityDecision(
        "unknown",
        "UNDETERMINED",
        "no classification branch applies: " + "; ".join(failed),
        equivalents("unknown"),
    )


# ---------------------------------------------------------------------------
# arithmetic utility


@dataclass(frozen=True)
class SupportBounds:
    forward: int
    backward: int | None = None


def support_bounds(n: int, d: int | None = None) -> SupportBounds:
    """Support bounds 2(n+1), and (n+1)(d+1) when a global dimension is given."""
    if n < 0 or (d is not None and d < 0):
        raise ValueError("support_bounds needs nonnegative inputs")
    return SupportBounds(2 * (n + 1), (n + 1) * (d + 1) if d is not None else None)
