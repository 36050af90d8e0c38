import hypothesis.strategies as st
import pytest

from fo2small.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Vocabulary,
)
from fo2small.satengine import candidate_count, structure_from_index
from fo2small.typespace import check_snf, evaluate


@pytest.fixture
def vocab_pr():
    return Vocabulary(("P",), ("R",))


@pytest.fixture
def vocab_r():
    return Vocabulary((), ("R",))


def atom_strategy(vocab, variables=("x", "y")):
    opts = [TRUE, FALSE]
    for p in vocab.unary:
        opts.extend(Atom(p, (v,)) for v in variables)
    for r in vocab.binary:
        opts.extend(Atom(r, (v1, v2)) for v1 in variables for v2 in variables)
    return st.sampled_from(opts)


def formula_strategy(vocab, quantifiers=True, max_leaves=12):
    variables = st.sampled_from(("x", "y"))
    extend = [
        lambda kids: st.builds(Not, kids),
        lambda kids: st.builds(And, kids, kids),
        lambda kids: st.builds(Or, kids, kids),
        lambda kids: st.builds(Implies, kids, kids),
        lambda kids: st.builds(Iff, kids, kids),
    ]
    if quantifiers:
        extend.append(lambda kids: st.builds(Forall, variables, kids))
        extend.append(lambda kids: st.builds(Exists, variables, kids))
    return st.recursive(
        atom_strategy(vocab),
        lambda kids: st.one_of(*[f(kids) for f in extend]),
        max_leaves=max_leaves,
    )


def delete_vertex(G, victim):
    """Copy of G without one vertex, remaining ids shifted down."""
    from fo2small.tournament import ColoredTournament

    remap = {v: v - (v > victim) for v in range(G.num_vertices) if v != victim}
    colors = tuple(
        G.vertex_colors[v] for v in range(G.num_vertices) if v != victim
    )
    edges = {
        (remap[u], remap[v]): d
        for (u, v), d in G.edges.items()
        if victim not in (u, v)
    }
    return ColoredTournament(G.num_colors, G.num_edge_colors, colors, edges)


def recolor_edge(G, u, v, d):
    """Copy of G with the stored edge between u and v recolored to d."""
    from fo2small.tournament import ColoredTournament

    key = (u, v) if (u, v) in G.edges else (v, u)
    edges = dict(G.edges)
    edges[key] = d
    return ColoredTournament(G.num_colors, G.num_edge_colors, G.vertex_colors, edges)


def correlated_profile_graph():
    """Two kings plus one class of two vertices whose king edges are fully
    correlated, so a mixed profile cannot occur.  Declares six vertex colors
    so the paper-mode size rule applies."""
    from fo2small.tournament import ColoredTournament

    return ColoredTournament(
        6,
        2,
        (0, 1, 2, 2),
        {(0, 1): 0, (0, 2): 0, (0, 3): 1, (1, 2): 0, (1, 3): 1, (2, 3): 0},
    )


def naive_first_model(target, vocab, max_size):
    """Independent oracle: walk the candidate enumeration with the recursive
    checker and return the first model, or None."""
    from fo2small.formula import ScottNormalForm

    for size in range(1, max_size + 1):
        for i in range(candidate_count(vocab, size)):
            S = structure_from_index(vocab, size, i)
            if isinstance(target, ScottNormalForm):
                if check_snf(S, target).ok:
                    return S
            elif evaluate(target, S):
                return S
    return None
