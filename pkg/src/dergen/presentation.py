"""Bounded quiver presentations: data model, parser, validator, exporters.

A presentation is a finite quiver together with monomial zero relations.
Paths and relations are stored in traversal order: the first list entry is
the first arrow walked, so a stored path ``(a, b)`` is the composite ``b∘a``.
The file grammar and all serialized forms list relation words in the
opposite, functional order (outermost arrow first).
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass

ID_PATTERN = re.compile(r"[A-Za-z0-9_.]+\Z")
_ARROW_LINE = re.compile(r"arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*\Z")

#: Paths and relations are tuples of arrow names in traversal order.
PathT = tuple[str, ...]


class StructureError(ValueError):
    """A quiver or presentation violates a construction invariant."""


class BudgetExceededError(RuntimeError):
    """Unbounded enumeration detected (inadmissible relation set)."""


class ParseError(ValueError):
    def __init__(self, code: str, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{code} at {line}:{column}: {message}")
        self.code = code
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError("duplicate vertex id")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise StructureError("duplicate arrow id")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.src not in vset or a.tgt not in vset:
                raise StructureError(f"arrow {a.name} has undeclared endpoint")
        object.__setattr__(self, "_by_name", {a.name: a for a in self.arrows})

    def arrow(self, name: str) -> Arrow:
        return self._by_name[name]

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def outgoing(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def incoming(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tgt == v]


@dataclass(frozen=True)
class Presentation:
    name: str
    quiver: Quiver
    relations: tuple[PathT, ...]

    def __post_init__(self):
        for rel in self.relations:
            if not rel:
                raise StructureError("empty relation")
            _check_composable(self.quiver, rel)
        # canonical storage order, duplicates dropped
        rels = tuple(sorted(set(self.relations), key=lambda r: (len(r), r)))
        object.__setattr__(self, "relations", rels)

    def path_src(self, path: PathT) -> str:
        return self.quiver.arrow(path[0]).src

    def path_tgt(self, path: PathT) -> str:
        return self.quiver.arrow(path[-1]).tgt

    def is_permitted(self, path: PathT) -> bool:
        """True when no relation occurs as a contiguous factor of ``path``."""
        return not any(contains_factor(path, rel) for rel in self.relations)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[tuple[str, str, str], ...] = ()  # (code, message, entity)


def _check_composable(q: Quiver, path: PathT) -> None:
    for name in path:
        if not q.has_arrow(name):
            raise StructureError(f"unknown arrow {name!r} in path")
    for x, y in zip(path, path[1:]):
        if q.arrow(x).tgt != q.arrow(y).src:
            raise StructureError(
                f"path not composable: t({x}) = {q.arrow(x).tgt} != s({y}) = {q.arrow(y).src}"
            )


def contains_factor(path: PathT, factor: PathT) -> bool:
    k = len(factor)
    if k == 0 or k > len(path):
        return False
    return any(path[i : i + k] == factor for i in range(len(path) - k + 1))


def functional(path: PathT) -> str:
    """Display form: outermost (last-walked) arrow first."""
    return " ".join(reversed(path))


# ---------------------------------------------------------------------------
# parsing


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented presentation grammar.

    Declarations must precede use: vertices before arrows that mention them,
    arrows before relations.  Relations are written outermost arrow first
    ("rel b a" declares the composite b∘a).  Relations subsumed by a shorter
    relation are dropped with a warning so the stored generating set is
    minimal.
    """
    name = None
    vertices: list[str] = []
    arrows: list[Arrow] = []
    relations: list[PathT] = []
    seen_vertices: set[str] = set()
    seen_arrows: dict[str, Arrow] = {}

    def err(code, msg, lineno, raw, token=None):
        col = raw.find(token) + 1 if token and token in raw else 1
        raise ParseError(code, msg, lineno, col)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if name is None:
            if head != "quiver" or len(tokens) != 2:
                err("SYNTAX", "expected header 'quiver NAME'", lineno, raw)
            if not ID_PATTERN.match(tokens[1]):
                err("SYNTAX", f"bad quiver name {tokens[1]!r}", lineno, raw, tokens[1])
            name = tokens[1]
            continue
        if head == "quiver":
            err("SYNTAX", "duplicate 'quiver' header", lineno, raw)
        elif head == "vertex":
            if len(tokens) < 2:
                err("SYNTAX", "'vertex' needs at least one id", lineno, raw)
            for tok in tokens[1:]:
                if not ID_PATTERN.match(tok):
                    err("SYNTAX", f"bad vertex id {tok!r}", lineno, raw, tok)
                if tok in seen_vertices:
                    err("DUPLICATE_ID", f"vertex {tok!r} declared twice", lineno, raw, tok)
                seen_vertices.add(tok)
                vertices.append(tok)
        elif head == "arrow":
            m = _ARROW_LINE.match(line)
            if not m:
                err("SYNTAX", "expected 'arrow ID : SRC -> TGT'", lineno, raw)
            aname, src, tgt = m.groups()
            for tok in (aname, src, tgt):
                if not ID_PATTERN.match(tok):
                    err("SYNTAX", f"bad id {tok!r}", lineno, raw, tok)
            if aname in seen_arrows:
                err("DUPLICATE_ID", f"arrow {aname!r} declared twice", lineno, raw, aname)
            for v in (src, tgt):
                if v not in seen_vertices:
                    err("UNKNOWN_VERTEX", f"vertex {v!r} not declared", lineno, raw, v)
            seen_arrows[aname] = Arrow(aname, src, tgt)
            arrows.append(seen_arrows[aname])
        elif head == "rel":
            args = tokens[1:]
            for tok in args:
                if any(ch in tok for ch in "+-=*"):
                    err(
                        "LINEAR_COMBINATION",
                        "relations must be single paths (no k-linear combinations)",
                        lineno,
                        raw,
                        tok,
                    )
            if len(args) < 2:
                err("RELATION_TOO_SHORT", "relations need length >= 2", lineno, raw)
            for tok in args:
                if tok not in seen_arrows:
                    err("UNKNOWN_ARROW", f"arrow {tok!r} not declared", lineno, raw, tok)
            walk = tuple(reversed(args))
            for x, y in zip(walk, walk[1:]):
                if seen_arrows[x].tgt != seen_arrows[y].src:
                    err(
                        "NON_COMPOSABLE",
                        f"t({x}) = {seen_arrows[x].tgt} != s({y}) = {seen_arrows[y].src}",
                        lineno,
                        raw,
                        y,
                    )
            relations.append(walk)
        else:
            err("SYNTAX", f"unknown directive {head!r}", lineno, raw, head)

    if name is None:
        raise ParseError("SYNTAX", "empty input: missing 'quiver NAME' header", 1, 1)

    minimal = _drop_redundant(relations)
    return Presentation(name, Quiver(tuple(vertices), tuple(arrows)), tuple(minimal))


def _drop_redundant(relations: list[PathT]) -> list[PathT]:
    out: list[PathT] = []
    for rel in sorted(set(relations), key=lambda r: (len(r), r)):
        if any(contains_factor(rel, kept) for kept in out):
            warnings.warn(f"dropping redundant relation {functional(rel)!r}", stacklevel=3)
            continue
        out.append(rel)
    return out


# ---------------------------------------------------------------------------
# validation and permitted paths


def _permitted_cycle(p: Presentation, node_cap: int = 100_000) -> list[str] | None:
    """Arrow cycle every window of which is permitted, or None.

    Such a cycle pumps to arbitrarily long permitted paths, so its absence
    is exactly admissibility of the (monomial) relation set.
    """
    q = p.quiver
    r = max((len(rel) for rel in p.relations), default=1) - 1
    if r == 0:
        nodes: list[PathT] = [(v,) for v in q.vertices]  # dummy length-0 "paths"
        edges = {n: [] for n in nodes}
        for a in q.arrows:
            if p.is_permitted((a.name,)):
                edges[(a.src,)].append(((a.tgt,), a.name))
    else:
        level = [(a.name,) for a in q.arrows if p.is_permitted((a.name,))]
        for _ in range(r - 1):
            nxt = []
            for path in level:
                tgt = p.path_tgt(path)
                for a in q.outgoing(tgt):
                    cand = path + (a.name,)
                    if p.is_permitted(cand):
                        nxt.append(cand)
                if len(nxt) > node_cap:
                    raise BudgetExceededError("admissibility check exceeded node budget")
            level = nxt
        nodes = level
        node_set = set(nodes)
        edges = {n: [] for n in nodes}
        for path in nodes:
            tgt = p.path_tgt(path)
            for a in q.outgoing(tgt):
                if p.is_permitted(path + (a.name,)):
                    succ = path[1:] + (a.name,)
                    if succ in node_set:
                        edges[path].append((succ, a.name))

    # DFS cycle detection, returning the arrow labels around the cycle
    color = {n: 0 for n in nodes}
    stack_nodes: list = []
    stack_labels: list[str] = []

    def dfs(n) -> list[str] | None:
        color[n] = 1
        stack_nodes.append(n)
        for succ, label in edges[n]:
            if color[succ] == 1:
                i = stack_nodes.index(succ)
                return stack_labels[i:] + [label]
            if color[succ] == 0:
                stack_labels.append(label)
                found = dfs(succ)
                if found is not None:
                    return found
                stack_labels.pop()
        stack_nodes.pop()
        color[n] = 2
        return None

    for n in nodes:
        if color[n] == 0:
            found = dfs(n)
            if found is not None:
                return found
    return None


def validate_presentation(p: Presentation) -> ValidationReport:
    """Check the soft invariants: relation lengths, minimality, admissibility."""
    violations: list[tuple[str, str, str]] = []
    for rel in p.relations:
        if len(rel) < 2:
            violations.append(
                ("RELATION_TOO_SHORT", "relation shorter than 2 arrows", functional(rel))
            )
    for rel in p.relations:
        for other in p.relations:
            if other is not rel and contains_factor(rel, other):
                violations.append(
                    (
                        "REDUNDANT_RELATION",
                        f"relation contains {functional(other)!r} as a factor",
                        functional(rel),
                    )
                )
                break
    cycle = _permitted_cycle(p)
    if cycle is not None:
        violations.append(
            (
                "ADMISSIBLE_FAIL",
                "permitted arrow cycle pumps to infinitely many permitted paths",
                " ".join(cycle),
            )
        )
    return ValidationReport(not violations, tuple(violations))


def permitted_paths(p: Presentation, max_len: int | None = None) -> list[PathT]:
    """All permitted paths of length >= 1, sorted by (length, arrow word).

    Without ``max_len`` the presentation must be admissible; otherwise a
    BudgetExceededError is raised instead of looping forever.
    """
    if max_len is None and _permitted_cycle(p) is not None:
        raise BudgetExceededError(
            "presentation has infinitely many permitted paths; pass max_len"
        )
    out: list[PathT] = []
    level = sorted(
        (a.name,) for a in p.quiver.arrows if p.is_permitted((a.name,))
    )
    length = 1
    while level and (max_len is None or length <= max_len):
        out.extend(level)
        nxt = []
        for path in level:
            for a in p.quiver.outgoing(p.path_tgt(path)):
                cand = path + (a.name,)
                if p.is_permitted(cand):
                    nxt.append(cand)
        level = sorted(nxt)
        length += 1
    return sorted(out, key=lambda path: (len(path), path))


# ---------------------------------------------------------------------------
# exporters


def export_text(p: Presentation) -> str:
    lines = [f"quiver {p.name}"]
    if p.quiver.vertices:
        lines.append("vertex " + " ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        lines.append(f"arrow {a.name} : {a.src} -> {a.tgt}")
    for rel in p.relations:
        lines.append("rel " + functional(rel))
    return "\n".join(lines) + "\n"


def export_json(p: Presentation) -> str:
    doc = {
        "name": p.name,
        "vertices": list(p.quiver.vertices),
        "arrows": [{"id": a.name, "src": a.src, "tgt": a.tgt} for a in p.quiver.arrows],
        "relations": [list(reversed(rel)) for rel in p.relations],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def export_dot(p: Presentation) -> str:
    lines = [f'digraph "{p.name}" {{', "  rankdir=LR;"]
    for v in p.quiver.vertices:
        lines.append(f'  "{v}";')
    for a in p.quiver.arrows:
        lines.append(f'  "{a.src}" -> "{a.tgt}" [label="{a.name}"];')
    for rel in p.relations:
        lines.append(
            f'  "{p.path_src(rel)}" -> "{p.path_tgt(rel)}"'
            f' [label="{functional(rel)}", style=dashed, constraint=false];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(p: Presentation, fmt: str) -> str:
    if fmt == "canonical-text":
        return export_text(p)
    if fmt == "json":
        return export_json(p)
    if fmt == "dot":
        return export_dot(p)
    raise ValueError(f"unknown export format {fmt!r}")
