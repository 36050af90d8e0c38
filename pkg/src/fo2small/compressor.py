"""Rebuild a colored tournament so that every non-king color class gets a
fixed small size while kings, D sets, profiles, and per-vertex color
incidence are preserved.

Given a valid graph G with fixed orientation, the output H keeps the kings
and all king-king edges verbatim and replaces each realized non-king class
by a fresh class of `multiplicity` vertices, colored in three passes:

  step 1  king <-> class edges: per king, one block of the class exhausts
          the king/class D set; each block vertex then copies the full
          profile of a matching G vertex, and leftover vertices copy the
          profile of an already-completed one.
  step 2  edges inside one class: the class is cut into three parts; every
          vertex gets, toward the next part, outgoing and incoming edges
          exhausting the intra-class D set; remaining edges cycle through
          the D set from the lower vertex id to the higher.
  step 3  edges between two classes: both classes are cut in half; each
          vertex exhausts the cross D set toward the aligned half of the
          other class, and the opposite half covers the remaining edges.
          All cross edges keep G's orientation.

Every unordered pair of H is written exactly once; the builder enforces
this and `compress` is bit-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tournament import (
    ColoredTournament,
    TypedTournament,
    d_sets,
    from_structure,
    king_colors,
    kings_of,
    profile_of,
    to_structure,
    validate,
)
from .typespace import Structure

MODES = ("paper_exact", "tight")


@dataclass(frozen=True)
class CompressionConfig:
    mode: str = "paper_exact"
    seed: int = 0  # reserved; the construction is fully deterministic

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


def multiplicity_for(G: ColoredTournament, cfg: CompressionConfig) -> int:
    """Target size of every rebuilt non-king class."""
    if cfg.mode == "paper_exact":
        return G.num_colors * G.num_edge_colors
    realized = G.realized_colors()
    dmax = max((len(s) for s in d_sets(G).values()), default=0)
    return max(len(realized), 6) * dmax


def block_size_for(G: ColoredTournament, cfg: CompressionConfig) -> int:
    """Size of the per-king blocks; enough to exhaust any single D set."""
    if cfg.mode == "paper_exact":
        return G.num_edge_colors
    return max((len(s) for s in d_sets(G).values()), default=0)


@dataclass(frozen=True)
class PartitionPlan:
    """Contiguous id ranges carving up each rebuilt class.

    z_blocks: one block of `block_size` ids per king; y_parts: the three
    step-2 parts (first two of size 2*block_size); x_parts: the two step-3
    halves (first one of size exactly `block_size`).  The x split is shared
    by every counterpart class.
    """

    multiplicity: int
    block_size: int
    class_range: dict  # color -> range of H vertex ids
    z_blocks: dict     # color -> tuple[range, ...], one per king
    y_parts: dict      # color -> (range, range, range)
    x_parts: dict      # color -> (range, range)


def build_plan(G: ColoredTournament, cfg: CompressionConfig) -> PartitionPlan:
    kc = king_colors(G)
    nonking = [c for c in G.realized_colors() if c not in kc]
    t = len(kc)
    M = multiplicity_for(G, cfg)
    L = block_size_for(G, cfg)
    base = t  # kings occupy H ids 0..t-1
    class_range = {}
    z_blocks = {}
    y_parts = {}
    x_parts = {}
    for c in nonking:
        r = range(base, base + M)
        class_range[c] = r
        z_blocks[c] = tuple(
            range(r.start + i * L, r.start + (i + 1) * L) for i in range(t)
        )
        y_parts[c] = (
            range(r.start, r.start + 2 * L),
            range(r.start + 2 * L, r.start + 4 * L),
            range(r.start + 4 * L, r.stop),
        )
        x_parts[c] = (range(r.start, r.start + L), range(r.start + L, r.stop))
        base += M
    return PartitionPlan(M, L, class_range, z_blocks, y_parts, x_parts)


class HBuild:
    """Mutable H under construction, with write-once edge bookkeeping."""

    def __init__(self, G: ColoredTournament, cfg: CompressionConfig, plan: PartitionPlan):
        self.G = G
        self.cfg = cfg
        self.plan = plan
        self.kings = kings_of(G)  # (G vertex, color), sorted by color
        self.king_id = {c: i for i, (_, c) in enumerate(self.kings)}
        colors = [c for _, c in self.kings]
        for c, r in sorted(plan.class_range.items()):
            colors.extend([c] * len(r))
        self.vertex_colors = tuple(colors)
        self.edges = {}
        self.orientation = G.orientation()

    def oriented(self, u: int, v: int) -> tuple[int, int]:
        """Order (u, v) so the edge points per the fixed orientation."""
        cu, cv = self.vertex_colors[u], self.vertex_colors[v]
        if cu == cv:
            raise ValueError("direction inside a class must be chosen explicitly")
        key = (min(cu, cv), max(cu, cv))
        return (u, v) if self.orientation[key] == cu else (v, u)

    def set_edge(self, u: int, v: int, d: int) -> None:
        key = (min(u, v), max(u, v))
        if key in self.edges:
            raise AssertionError(f"pair {key} written twice")
        self.edges[key] = (u, v, d)

    def edge_color(self, u: int, v: int) -> int:
        return self.edges[(min(u, v), max(u, v))][2]

    def finish(self) -> ColoredTournament:
        V = len(self.vertex_colors)
        want = V * (V - 1) // 2
        if len(self.edges) != want:
            raise AssertionError(f"{len(self.edges)} of {want} pairs written")
        return ColoredTournament(
            self.G.num_colors,
            self.G.num_edge_colors,
            self.vertex_colors,
            {(u, v): d for (u, v, d) in self.edges.values()},
        )


def step1_king_edges(G: ColoredTournament, build: HBuild, plan: PartitionPlan) -> HBuild:
    """Color all edges between the kings and every rebuilt class."""
    dmap = d_sets(G)
    kings = build.kings
    t = len(kings)
    for c, rng in sorted(plan.class_range.items()):
        members = G.color_class(c)
        blocks = plan.z_blocks[c]
        for i, (gv, kcol) in enumerate(kings):
            allowed = sorted(dmap[(min(kcol, c), max(kcol, c))])
            for slot, u in enumerate(blocks[i]):
                d = allowed[slot % len(allowed)]
                uu, vv = build.oriented(u, i)
                build.set_edge(uu, vv, d)
                # lowest G vertex of the class whose king edge matches
                x = next(x for x in members if G.edge_color(x, gv) == d)
                for j, (gw, _) in enumerate(kings):
                    if j == i:
                        continue
                    uu, vv = build.oriented(u, j)
                    build.set_edge(uu, vv, G.edge_color(x, gw))
        covered = t * plan.block_size
        for offset, u in enumerate(rng[covered:]):
            if t == 0:
                break
            source = rng[offset % covered]
            for j in range(t):
                uu, vv = build.oriented(u, j)
                build.set_edge(uu, vv, build.edge_color(source, j))
    return build


def step2_intra_class(G: ColoredTournament, build: HBuild, plan: PartitionPlan, c: int) -> HBuild:
    """Color all edges inside the rebuilt class of color c."""
    allowed = sorted(d_sets(G)[(c, c)])
    s = len(allowed)
    parts = plan.y_parts[c]
    for i in range(3):
        nxt = parts[(i + 1) % 3]
        partners = list(nxt[: 2 * s])
        for u in parts[i]:
            for j in range(s):
                build.set_edge(u, partners[j], allowed[j])
            for j in range(s):
                build.set_edge(partners[s + j], u, allowed[j])
    counter = 0
    rng = plan.class_range[c]
    for u in rng:
        for v in rng:
            if v <= u or (u, v) in build.edges or (v, u) in build.edges:
                continue
            build.set_edge(u, v, allowed[counter % s])
            counter += 1
    return build


def step3_cross_class(
    G: ColoredTournament, build: HBuild, plan: PartitionPlan, c: int, c0: int
) -> HBuild:
    """Color all edges between the rebuilt classes of colors c and c0."""
    if c == c0:
        raise ValueError("step 3 needs two distinct classes")
    allowed = sorted(d_sets(G)[(min(c, c0), max(c, c0))])
    s = len(allowed)
    xc = plan.x_parts[c]
    xc0 = plan.x_parts[c0]
    for i in range(2):
        for u in xc[i]:
            for j, w in enumerate(xc0[i]):
                uu, vv = build.oriented(u, w)
                build.set_edge(uu, vv, allowed[j % s])
        for u in xc0[i]:
            for j, w in enumerate(xc[1 - i]):
                uu, vv = build.oriented(u, w)
                build.set_edge(uu, vv, allowed[j % s])
    return build


def compress(G: ColoredTournament, cfg: CompressionConfig = CompressionConfig()) -> ColoredTournament:
    """Build H from G.  Kings and king-king edges are copied verbatim; every
    realized non-king class is rebuilt at the configured multiplicity."""
    result = validate(G)
    if not result:
        raise ValueError(f"invalid input graph: {result.message}")
    if cfg.mode == "paper_exact" and G.num_colors < 6:
        raise ValueError(
            f"paper_exact mode needs at least 6 vertex colors, got {G.num_colors}"
        )
    plan = build_plan(G, cfg)
    build = HBuild(G, cfg, plan)

    kings = build.kings
    for i, (gu, _) in enumerate(kings):
        for j in range(i + 1, len(kings)):
            gv = kings[j][0]
            if (gu, gv) in G.edges:
                build.set_edge(i, j, G.edges[(gu, gv)])
            else:
                build.set_edge(j, i, G.edges[(gv, gu)])

    step1_king_edges(G, build, plan)
    for c in sorted(plan.class_range):
        step2_intra_class(G, build, plan, c)
    nonking = sorted(plan.class_range)
    for a in range(len(nonking)):
        for b in range(a + 1, len(nonking)):
            step3_cross_class(G, build, plan, nonking[a], nonking[b])

    return build.finish()


# --- verification --------------------------------------------------------

@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class PropertyReport:
    checks: tuple[PropertyCheck, ...]
    size_table: tuple[tuple[int, int], ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> PropertyCheck:
        return next(c for c in self.checks if c.name == name)

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            lines.append(
                f"property {c.name} PASS" if c.passed else f"property {c.name} FAIL witness={c.witness}"
            )
        lines.extend(f"class {c} {count}" for c, count in self.size_table)
        lines.append(f"total {sum(count for _, count in self.size_table)}")
        return "\n".join(lines) + "\n"


def verify_properties(
    G: ColoredTournament, H: ColoredTournament, cfg: CompressionConfig = CompressionConfig()
) -> PropertyReport:
    """Exhaustively check the five preservation properties of the rebuild:

      a  the king color sets agree,
      b  every realized non-king class of G has the configured size in H,
      c  the D sets agree for every color pair,
      d  every non-king vertex of H has a color-and-profile twin in G,
      e  between non-king colors, every vertex of H touches every D color.

    Pure reads over both graphs; nothing from the construction is reused.
    """
    for name, graph in (("before", G), ("after", H)):
        result = validate(graph)
        if not result:
            raise ValueError(f"{name} graph is invalid: {result.message}")

    checks = []
    kc_g = king_colors(G)
    kc_h = king_colors(H)

    if kc_g == kc_h:
        checks.append(PropertyCheck("a", True))
    else:
        diff = sorted(kc_g ^ kc_h)
        checks.append(PropertyCheck("a", False, f"king colors differ on {diff}"))

    expected = multiplicity_for(G, cfg)
    counts_h = {}
    for c in H.vertex_colors:
        counts_h[c] = counts_h.get(c, 0) + 1
    b_witness = ""
    for c in G.realized_colors():
        if c in kc_g:
            continue
        got = counts_h.get(c, 0)
        if got != expected:
            b_witness = f"class {c} has {got} vertices, expected {expected}"
            break
    checks.append(PropertyCheck("b", not b_witness, b_witness))

    dg = d_sets(G)
    dh = d_sets(H)
    c_witness = ""
    for key in sorted(set(dg) | set(dh)):
        if dg.get(key, frozenset()) != dh.get(key, frozenset()):
            before = sorted(dg.get(key, frozenset()))
            after = sorted(dh.get(key, frozenset()))
            c_witness = f"colors {key}: {before} before vs {after} after"
            break
    checks.append(PropertyCheck("c", not c_witness, c_witness))

    g_pairs = {
        (G.vertex_colors[v], profile_of(G, v))
        for v in range(G.num_vertices)
        if G.vertex_colors[v] not in kc_g
    }
    d_witness = ""
    for u in range(H.num_vertices):
        c = H.vertex_colors[u]
        if c in kc_h:
            continue
        if (c, profile_of(H, u)) not in g_pairs:
            d_witness = f"vertex {u} (color {c}) has a profile unseen in the input"
            break
    checks.append(PropertyCheck("d", not d_witness, d_witness))

    incident = {u: set() for u in range(H.num_vertices)}
    for (u, v), d in H.edges.items():
        incident[u].add((d, H.vertex_colors[v]))
        incident[v].add((d, H.vertex_colors[u]))
    nonking_g = [c for c in G.realized_colors() if c not in kc_g]
    e_witness = ""
    for c1 in nonking_g:
        for c2 in nonking_g:
            for d in sorted(dg.get((min(c1, c2), max(c1, c2)), frozenset())):
                for u in H.color_class(c1):
                    if (d, c2) not in incident[u]:
                        e_witness = f"vertex {u} (color {c1}) misses color {d} toward class {c2}"
                        break
                if e_witness:
                    break
            if e_witness:
                break
        if e_witness:
            break
    checks.append(PropertyCheck("e", not e_witness, e_witness))

    size_table = tuple((c, counts_h.get(c, 0)) for c in sorted(set(G.vertex_colors) | set(H.vertex_colors)))
    return PropertyReport(tuple(checks), size_table)


def compress_structure(S: Structure, cfg: CompressionConfig = CompressionConfig()) -> Structure:
    """Structure-level pipeline: view as typed tournament, rebuild, read back."""
    tt = from_structure(S)
    H = compress(tt.graph, cfg)
    return to_structure(TypedTournament(H, tt.vocab, tt.one_types, tt.two_types))
