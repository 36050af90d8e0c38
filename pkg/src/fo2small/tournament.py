"""Complete directed edge-colored graphs with fixed orientation.

Vertex colors are integers 0..k-1 and edge colors 0..l-1 (the declared
alphabet sizes; some ids may be unrealized).  Every unordered pair of
distinct vertices carries exactly one directed, colored edge.  Between two
distinct vertex colors all edges point the same way; inside one color class
each edge's direction is stored explicitly.

The bridge to logic pairs such a graph with legends mapping color ids to
1-types and 2-types (`TypedTournament`); elements become vertices, 1-types
vertex colors, and the 2-type of each distinct pair, read in a fixed
per-color-pair direction, the edge color.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormatError, ProjectionMismatchError
from .formula import Vocabulary
from .typespace import (
    OneType,
    Structure,
    TwoType,
    one_type_code_of,
    project_x_code,
    project_y_code,
    two_type_code_of,
)


@dataclass(frozen=True, eq=True)
class ColoredTournament:
    num_colors: int
    num_edge_colors: int
    vertex_colors: tuple[int, ...]
    edges: dict = field(default_factory=dict)  # (u, v) -> color, u -> v stored once per pair

    def __post_init__(self):
        object.__setattr__(self, "vertex_colors", tuple(self.vertex_colors))

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_colors)

    def color_class(self, c: int) -> list[int]:
        return [v for v, col in enumerate(self.vertex_colors) if col == c]

    def realized_colors(self) -> list[int]:
        return sorted(set(self.vertex_colors))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def edge_color(self, u: int, v: int) -> int:
        """Color of the unique edge between u and v, ignoring direction."""
        if (u, v) in self.edges:
            return self.edges[(u, v)]
        return self.edges[(v, u)]

    def orientation(self) -> dict:
        """Map from each unordered pair of distinct colors {c1 < c2} to the
        color the edges point away from, as witnessed by the stored edges."""
        table = {}
        for (u, v) in sorted(self.edges):
            cu, cv = self.vertex_colors[u], self.vertex_colors[v]
            if cu == cv:
                continue
            key = (min(cu, cv), max(cu, cv))
            table.setdefault(key, cu)
        return table


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    message: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def validate(G: ColoredTournament) -> ValidationResult:
    """Check completeness, loop-freeness, color ranges, and fixed orientation.
    Reports the first violation in a deterministic scan order."""
    V = G.num_vertices
    for v, c in enumerate(G.vertex_colors):
        if not 0 <= c < G.num_colors:
            return ValidationResult(False, f"vertex {v} has color {c} outside 0..{G.num_colors - 1}", (v,))
    seen = {}
    for (u, v) in sorted(G.edges):
        d = G.edges[(u, v)]
        if u == v:
            return ValidationResult(False, f"self-loop at vertex {u}", (u,))
        if not (0 <= u < V and 0 <= v < V):
            return ValidationResult(False, f"edge ({u},{v}) endpoint out of range", (u, v))
        if not 0 <= d < G.num_edge_colors:
            return ValidationResult(False, f"edge ({u},{v}) has color {d} outside 0..{G.num_edge_colors - 1}", (u, v))
        key = (min(u, v), max(u, v))
        if key in seen:
            return ValidationResult(False, f"pair {{{key[0]},{key[1]}}} has two edges", key)
        seen[key] = (u, v)
    for a in range(V):
        for b in range(a + 1, V):
            if (a, b) not in seen:
                return ValidationResult(False, f"missing edge between {a} and {b}", (a, b))
    orient = {}
    for (a, b), (u, v) in sorted(seen.items()):
        cu, cv = G.vertex_colors[u], G.vertex_colors[v]
        if cu == cv:
            continue
        key = (min(cu, cv), max(cu, cv))
        if key not in orient:
            orient[key] = cu
        elif orient[key] != cu:
            return ValidationResult(
                False,
                f"orientation between colors {key[0]} and {key[1]} is not fixed: edge ({u},{v})",
                (u, v),
            )
    return ValidationResult(True)


def king_colors(G: ColoredTournament) -> frozenset[int]:
    counts = {}
    for c in G.vertex_colors:
        counts[c] = counts.get(c, 0) + 1
    return frozenset(c for c, k in counts.items() if k == 1)


def kings_of(G: ColoredTournament) -> list[tuple[int, int]]:
    """(vertex, color) per king, sorted by color."""
    kc = king_colors(G)
    return sorted(
        ((v, c) for v, c in enumerate(G.vertex_colors) if c in kc),
        key=lambda vc: vc[1],
    )


def profile_of(G: ColoredTournament, u: int) -> frozenset[tuple[int, int]]:
    """The set of (edge color, king color) pairs linking u to every king."""
    kc = king_colors(G)
    if G.vertex_colors[u] in kc:
        raise ValueError(f"vertex {u} is a king")
    return frozenset((G.edge_color(u, v), c) for v, c in kings_of(G))


def edge_colors_between(G: ColoredTournament, c1: int, c2: int) -> frozenset[int]:
    out = set()
    for (u, v), d in G.edges.items():
        cu, cv = G.vertex_colors[u], G.vertex_colors[v]
        if (cu, cv) == (c1, c2) or (cu, cv) == (c2, c1):
            out.add(d)
    return frozenset(out)


def d_sets(G: ColoredTournament) -> dict:
    """All D sets at once: {(c1 <= c2): frozenset of edge colors}."""
    out = {}
    for (u, v), d in G.edges.items():
        cu, cv = G.vertex_colors[u], G.vertex_colors[v]
        key = (min(cu, cv), max(cu, cv))
        out.setdefault(key, set()).add(d)
    return {key: frozenset(s) for key, s in out.items()}


# --- bridge to structures ------------------------------------------------

@dataclass(frozen=True)
class TypedTournament:
    """A tournament whose color ids stand for 1-types and 2-types."""

    graph: ColoredTournament
    vocab: Vocabulary
    one_types: tuple[OneType, ...]  # per vertex color id
    two_types: tuple[TwoType, ...]  # per edge color id


def lex_direction_rule(c1_code: int, c2_code: int) -> int:
    """Default orientation: from the smaller 1-type bit pattern to the larger."""
    return min(c1_code, c2_code)


def from_structure(S: Structure, direction_rule=lex_direction_rule) -> TypedTournament:
    """View a finite structure as a colored tournament.

    Vertex colors are the realized 1-types (sorted by code); between two
    distinct 1-types the direction fixed by `direction_rule` is used for
    every edge, and inside a class edges run from the smaller element id to
    the larger.  Edge colors are the 2-types read in the stored direction.
    """
    N = S.size
    pi = [one_type_code_of(S, a) for a in range(N)]
    color_codes = sorted(set(pi))
    color_id = {code: i for i, code in enumerate(color_codes)}
    vertex_colors = tuple(color_id[p] for p in pi)

    stored = {}
    for a in range(N):
        for b in range(a + 1, N):
            if pi[a] == pi[b]:
                u, v = a, b
            else:
                u, v = (a, b) if direction_rule(pi[a], pi[b]) == pi[a] else (b, a)
            stored[(u, v)] = two_type_code_of(S, u, v)

    edge_codes = sorted(set(stored.values()))
    edge_id = {code: i for i, code in enumerate(edge_codes)}
    edges = {pair: edge_id[code] for pair, code in stored.items()}

    graph = ColoredTournament(len(color_codes), len(edge_codes), vertex_colors, edges)
    return TypedTournament(
        graph,
        S.vocab,
        tuple(OneType(S.vocab, code) for code in color_codes),
        tuple(TwoType(S.vocab, code) for code in edge_codes),
    )


def to_structure(tt: TypedTournament) -> Structure:
    """Rebuild the structure a typed tournament denotes.

    Every stored edge's 2-type must project onto its endpoints' 1-types in
    the stored direction; a mismatch signals a corrupted graph.
    """
    G = tt.graph
    vocab = tt.vocab
    n, m = vocab.n, vocab.m
    N = G.num_vertices
    unary_facts = {p: set() for p in vocab.unary}
    binary_facts = {r: set() for r in vocab.binary}

    for v in range(N):
        code = tt.one_types[G.vertex_colors[v]].code
        for j, p in enumerate(vocab.unary):
            if (code >> j) & 1:
                unary_facts[p].add(v)
        for j, r in enumerate(vocab.binary):
            if (code >> (n + j)) & 1:
                binary_facts[r].add((v, v))

    for (u, v), d in G.edges.items():
        tau = tt.two_types[d].code
        if project_x_code(tau, n, m) != tt.one_types[G.vertex_colors[u]].code:
            raise ProjectionMismatchError(
                f"edge ({u},{v}) color {d}: x-projection disagrees with vertex {u}"
            )
        if project_y_code(tau, n, m) != tt.one_types[G.vertex_colors[v]].code:
            raise ProjectionMismatchError(
                f"edge ({u},{v}) color {d}: y-projection disagrees with vertex {v}"
            )
        for j, r in enumerate(vocab.binary):
            if (tau >> (2 * n + 2 * m + j)) & 1:
                binary_facts[r].add((u, v))
            if (tau >> (2 * n + 3 * m + j)) & 1:
                binary_facts[r].add((v, u))

    return Structure.build(vocab, N, unary_facts, binary_facts)


# --- files ---------------------------------------------------------------

def graph_to_text(G: ColoredTournament) -> str:
    lines = [f"colors {G.num_colors}", f"edgecolors {G.num_edge_colors}"]
    lines.extend(f"vertex {v} {c}" for v, c in enumerate(G.vertex_colors))
    lines.extend(f"edge {u} {v} {d}" for (u, v), d in sorted(G.edges.items()))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColoredTournament:
    num_colors = None
    num_edge_colors = None
    vertices = {}
    edges = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        parts = raw.split()
        try:
            if parts[0] == "colors" and len(parts) == 2:
                num_colors = int(parts[1])
            elif parts[0] == "edgecolors" and len(parts) == 2:
                num_edge_colors = int(parts[1])
            elif parts[0] == "vertex" and len(parts) == 3:
                v = int(parts[1])
                if v in vertices:
                    raise FormatError(f"line {lineno}: duplicate vertex {v}")
                vertices[v] = int(parts[2])
            elif parts[0] == "edge" and len(parts) == 4:
                u, v, d = int(parts[1]), int(parts[2]), int(parts[3])
                edges[(u, v)] = d
            else:
                raise FormatError(f"line {lineno}: unknown line {raw!r}")
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if num_colors is None or num_edge_colors is None:
        raise FormatError("missing 'colors' or 'edgecolors' header")
    if sorted(vertices) != list(range(len(vertices))):
        raise FormatError("vertex ids must be contiguous from 0")
    vertex_colors = tuple(vertices[v] for v in range(len(vertices)))
    return ColoredTournament(num_colors, num_edge_colors, vertex_colors, edges)


def save_graph(G: ColoredTournament, path) -> None:
    with open(path, "w") as fh:
        fh.write(graph_to_text(G))


def load_graph(path) -> ColoredTournament:
    with open(path) as fh:
        return parse_graph(fh.read())


_PALETTE = (
    "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
    "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928",
)


def graph_to_dot(G: ColoredTournament) -> str:
    lines = ["digraph tournament {", "  node [style=filled];"]
    for v, c in enumerate(G.vertex_colors):
        fill = _PALETTE[c % len(_PALETTE)]
        lines.append(f'  v{v} [label="{v}:c{c}", fillcolor="{fill}"];')
    for (u, v), d in sorted(G.edges.items()):
        lines.append(f'  v{u} -> v{v} [label="{d}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
