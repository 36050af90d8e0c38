"""Size bounds, brute-force satisfiability, the bounded decision procedure,
and seeded generators for tests.

Candidate structures of a given size are enumerated in lexicographic order
over the relation bit matrix (see `_purecore` for the exact layout),
smallest domain first, so returned witnesses are canonical minima.  A
resource guard refuses any single size whose candidate count exceeds the
ceiling (default 2**26, overridable via FO2_RESOURCE_CEILING or per call).
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .errors import ResourceLimitError
from .formula import (
    VARIABLES,
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    ScottNormalForm,
    Vocabulary,
    check_against_vocab,
    free_vars,
    pad_vocabulary,
    quantified_subformulas,
    to_scott_normal_form,
)
from .tournament import ColoredTournament
from .typespace import (
    Structure,
    TABLE_BITS_MAX,
    check_snf,
    diag_truth_table,
    evaluate,
    invert_code,
    one_type_code_of,
    pair_truth_table,
    project_x_code,
    two_type_code_of,
)

DEFAULT_CEILING = 1 << 26


def resource_ceiling(override=None) -> int:
    if override is not None:
        return override
    env = os.environ.get("FO2_RESOURCE_CEILING")
    return int(env) if env else DEFAULT_CEILING


# --- the size bound ------------------------------------------------------

@dataclass(frozen=True)
class SizeBound:
    """How large a model the decision procedure must search.

    In paper_exact mode every non-king 1-type class can be rebuilt at
    exactly 2**(3n+5m) elements (the number of 1-types times the number of
    2-types), so 2**(n+m) classes give the total 2**(4n+5m).  Tight mode is
    data dependent and carries only the formula.
    """

    n: int
    m: int
    mode: str
    per_type_multiplicity: int | None
    total_bound: int | None
    formula: str

    @property
    def one_type_count(self) -> int:
        return 1 << (self.n + self.m)


def size_bound(n: int, m: int, mode: str = "paper_exact") -> SizeBound:
    if mode == "paper_exact":
        if n + m < 3:
            raise ValueError("paper_exact bound needs n + m >= 3; pad the vocabulary first")
        mult = 1 << (3 * n + 5 * m)
        return SizeBound(n, m, mode, mult, (1 << (n + m)) * mult, "2^(n+m) * 2^(3n+5m)")
    if mode == "tight":
        return SizeBound(n, m, mode, None, None, "kings + classes * max(k',6) * l'")
    raise ValueError(f"unknown mode {mode!r}")


# --- candidate enumeration ----------------------------------------------

def candidate_bits(vocab: Vocabulary, size: int) -> int:
    return vocab.n * size + vocab.m * size * size


def candidate_count(vocab: Vocabulary, size: int) -> int:
    return 1 << candidate_bits(vocab, size)


def structure_from_index(vocab: Vocabulary, size: int, index: int) -> Structure:
    """Decode a candidate index (MSB-first bit matrix) into a structure."""
    T = candidate_bits(vocab, size)
    if not 0 <= index < (1 << T):
        raise ValueError("candidate index out of range")

    def bit(j):
        return (index >> (T - 1 - j)) & 1

    unary = {
        p: {a for a in range(size) if bit(j * size + a)}
        for j, p in enumerate(vocab.unary)
    }
    binary = {
        r: {
            (a, b)
            for a in range(size)
            for b in range(size)
            if bit(vocab.n * size + j * size * size + a * size + b)
        }
        for j, r in enumerate(vocab.binary)
    }
    return Structure.build(vocab, size, unary, binary)


def index_of_structure(S: Structure) -> int:
    T = candidate_bits(S.vocab, S.size)
    index = 0
    for j, facts in enumerate(S.unary):
        for a in facts:
            index |= 1 << (T - 1 - (j * S.size + a))
    for j, facts in enumerate(S.binary):
        for a, b in facts:
            index |= 1 << (T - 1 - (S.vocab.n * S.size + j * S.size * S.size + a * S.size + b))
    return index


def _snf_tables(snf: ScottNormalForm):
    vocab = snf.vocabulary
    n, m = vocab.n, vocab.m
    codes = np.arange(1 << (2 * n + 4 * m), dtype=np.int64)
    inv = invert_code(codes, n, m)
    apair = pair_truth_table(snf.alpha, vocab)
    alpha_pair = (apair & apair[inv]).astype(np.uint8)
    alpha_diag = diag_truth_table(snf.alpha, vocab).astype(np.uint8)
    beta_diag = np.zeros(1 << (n + m), dtype=np.uint64)
    beta_x = np.zeros(codes.shape, dtype=np.uint64)
    for i, beta in enumerate(snf.betas):
        beta_diag |= diag_truth_table(beta, vocab).astype(np.uint64) << np.uint64(i)
        beta_x |= pair_truth_table(beta, vocab).astype(np.uint64) << np.uint64(i)
    beta_y = beta_x[inv]
    full_mask = (1 << len(snf.betas)) - 1
    return alpha_diag, beta_diag, alpha_pair, beta_x, beta_y, full_mask


class _Search:
    """One prepared search problem: either a tabled normal form or a plain
    sentence, swept size by size."""

    def __init__(self, target, vocab):
        if isinstance(target, ScottNormalForm):
            if vocab is not None and vocab != target.vocabulary:
                raise ValueError("vocab argument conflicts with the normal form's")
            self.vocab = target.vocabulary
            n, m = self.vocab.n, self.vocab.m
            if 2 * n + 4 * m <= TABLE_BITS_MAX and len(target.betas) <= 64:
                self.tables = _snf_tables(target)
                self.sentence = None
            else:
                self.tables = None
                self.sentence = target.sentence()
        else:
            if vocab is None:
                raise ValueError("a bare formula needs an explicit vocabulary")
            check_against_vocab(target, vocab)
            if free_vars(target):
                raise ValueError("input must be a sentence")
            self.vocab = vocab
            self.tables = None
            self.sentence = target

    def first_model_index(self, size, stop):
        if self.tables is not None:
            return _kernel.search_tables(
                size, self.vocab.n, self.vocab.m, *self.tables, 0, stop
            )
        return _kernel.search_formula(self.sentence, self.vocab, size, 0, stop)


def brute_force_sat(target, max_size: int, vocab: Vocabulary = None, ceiling: int = None):
    """Smallest model (canonically minimal) with at most max_size elements,
    or None.  Sizes run 1..max_size; raises ResourceLimitError before
    touching a size whose candidate count exceeds the ceiling."""
    search = _Search(target, vocab)
    limit = resource_ceiling(ceiling)
    for size in range(1, max_size + 1):
        count = candidate_count(search.vocab, size)
        if count > limit:
            raise ResourceLimitError(
                f"size {size} has {count} candidates, over the ceiling {limit}; "
                "raise FO2_RESOURCE_CEILING to override"
            )
        hit = search.first_model_index(size, count)
        if hit >= 0:
            return structure_from_index(search.vocab, size, hit)
    return None


# --- the decision procedure ----------------------------------------------

SAT = "SAT"
UNSAT = "UNSAT"
RESOURCE_EXCEEDED = "RESOURCE_EXCEEDED"


@dataclass(frozen=True)
class SatResult:
    verdict: str
    bound: SizeBound
    searched_up_to: int
    complete: bool                    # an UNSAT that exhausted the full bound
    snf: ScottNormalForm
    witness: Structure | None = None  # model of the normal form
    reduct: Structure | None = None   # its restriction to the input vocabulary


def decide_sat(phi: Formula, vocab: Vocabulary, cap: int = None, ceiling: int = None) -> SatResult:
    """Convert to normal form, bound the model size, and search sizes
    1..min(bound, cap).  SAT verdicts carry a witness that passed the
    normal-form check and whose reduct satisfies the input; exhausting the
    guard yields RESOURCE_EXCEEDED, never a wrong verdict."""
    check_against_vocab(phi, vocab)
    if free_vars(phi):
        raise ValueError("input must be a sentence")
    snf = to_scott_normal_form(phi, vocab)
    padded = pad_vocabulary(snf.vocabulary)
    bound = size_bound(padded.n, padded.m, "paper_exact")
    limit_size = bound.total_bound if cap is None else min(bound.total_bound, cap)
    limit_count = resource_ceiling(ceiling)

    search = _Search(snf, None)
    searched = 0
    for size in range(1, limit_size + 1):
        count = candidate_count(snf.vocabulary, size)
        if count > limit_count:
            return SatResult(RESOURCE_EXCEEDED, bound, searched, False, snf)
        hit = search.first_model_index(size, count)
        if hit >= 0:
            witness = structure_from_index(snf.vocabulary, size, hit)
            if not check_snf(witness, snf).ok:
                raise AssertionError("witness failed the normal-form check")
            reduct = witness.reduct(vocab)
            if not evaluate(phi, reduct):
                raise AssertionError("witness reduct does not satisfy the input")
            return SatResult(SAT, bound, size, False, snf, witness, reduct)
        searched = size
    return SatResult(UNSAT, bound, searched, searched == bound.total_bound, snf)


# --- seeded generators ----------------------------------------------------

def random_tournament(num_colors, num_edge_colors, class_sizes, seed) -> ColoredTournament:
    """A valid graph with the requested class sizes (class i takes color i,
    ids are contiguous): the orientation per color pair is drawn once, edge
    colors uniformly.  Bit-deterministic in the seed."""
    if len(class_sizes) != num_colors:
        raise ValueError("one class size per color is required")
    if any(s < 1 for s in class_sizes):
        raise ValueError("class sizes must be at least 1")
    rng = random.Random(seed)
    vertex_colors = []
    for c, s in enumerate(class_sizes):
        vertex_colors.extend([c] * s)
    orientation = {}
    for c1 in range(num_colors):
        for c2 in range(c1 + 1, num_colors):
            orientation[(c1, c2)] = c1 if rng.random() < 0.5 else c2
    edges = {}
    V = len(vertex_colors)
    for a in range(V):
        for b in range(a + 1, V):
            ca, cb = vertex_colors[a], vertex_colors[b]
            if ca == cb:
                u, v = (a, b) if rng.random() < 0.5 else (b, a)
            else:
                u, v = (a, b) if orientation[(min(ca, cb), max(ca, cb))] == ca else (b, a)
            edges[(u, v)] = rng.randrange(num_edge_colors)
    return ColoredTournament(num_colors, num_edge_colors, tuple(vertex_colors), edges)


def random_structure(vocab: Vocabulary, size: int, seed) -> Structure:
    """Uniform random facts, bit-deterministic in the seed."""
    rng = random.Random(seed)
    unary = {
        p: {a for a in range(size) if rng.random() < 0.5} for p in vocab.unary
    }
    binary = {
        r: {(a, b) for a in range(size) for b in range(size) if rng.random() < 0.5}
        for r in vocab.binary
    }
    return Structure.build(vocab, size, unary, binary)


def _random_atom(rng, vocab, bound):
    bound = sorted(bound)
    if not bound or (not vocab.unary and not vocab.binary) or rng.random() < 0.05:
        return Const(rng.random() < 0.5)
    names = [("u", p) for p in vocab.unary] + [("b", r) for r in vocab.binary]
    kind, name = rng.choice(names)
    if kind == "u":
        return Atom(name, (rng.choice(bound),))
    return Atom(name, (rng.choice(bound), rng.choice(bound)))


def _random_formula(rng, vocab, depth, bound):
    if depth <= 0 or (bound and rng.random() < 0.35):
        return _random_atom(rng, vocab, bound)
    r = rng.random()
    if r < 0.20:
        var = rng.choice(VARIABLES)
        node = Forall if rng.random() < 0.5 else Exists
        return node(var, _random_formula(rng, vocab, depth - 1, bound | {var}))
    if r < 0.36:
        return Not(_random_formula(rng, vocab, depth - 1, bound))
    op = rng.choice((And, Or, Implies))
    return op(
        _random_formula(rng, vocab, depth - 1, bound),
        _random_formula(rng, vocab, depth - 1, bound),
    )


def random_sentence(vocab: Vocabulary, depth: int, seed, max_quantifiers: int = 3) -> Formula:
    """A random sentence of the given depth with a cap on the number of
    quantified subformulas, so the rewritten form stays within brute-force
    reach.  Deterministic in the seed."""
    rng = random.Random(seed)
    for _ in range(200):
        var = rng.choice(VARIABLES)
        root = Forall if rng.random() < 0.6 else Exists
        phi = root(var, _random_formula(rng, vocab, depth - 1, frozenset({var})))
        if rng.random() < 0.25:
            var2 = rng.choice(VARIABLES)
            root2 = Forall if rng.random() < 0.6 else Exists
            second = root2(var2, _random_formula(rng, vocab, max(depth - 2, 0), frozenset({var2})))
            phi = rng.choice((And, Or, Implies))(phi, second)
        if len(quantified_subformulas(phi)) <= max_quantifiers:
            return phi
    return Forall("x", _random_atom(rng, vocab, frozenset({"x"})))


# --- a normal form the structure is guaranteed to satisfy -----------------

def _fold(parts, op, empty):
    if not parts:
        return empty
    phi = parts[0]
    for part in parts[1:]:
        phi = op(phi, part)
    return phi


def _literal(atom, positive):
    return atom if positive else Not(atom)


def _pair_description(code, vocab):
    """Conjunction of all 2n+4m pair literals fixed by a 2-type code."""
    n, m = vocab.n, vocab.m
    parts = []
    for j, p in enumerate(vocab.unary):
        parts.append(_literal(Atom(p, ("x",)), (code >> j) & 1))
        parts.append(_literal(Atom(p, ("y",)), (code >> (n + j)) & 1))
    for j, r in enumerate(vocab.binary):
        parts.append(_literal(Atom(r, ("x", "x")), (code >> (2 * n + j)) & 1))
        parts.append(_literal(Atom(r, ("y", "y")), (code >> (2 * n + m + j)) & 1))
        parts.append(_literal(Atom(r, ("x", "y")), (code >> (2 * n + 2 * m + j)) & 1))
        parts.append(_literal(Atom(r, ("y", "x")), (code >> (2 * n + 3 * m + j)) & 1))
    return _fold(parts, And, Const(True))


def _diagonal_description(code, vocab):
    """Pair formula satisfied when y mirrors x with the given 1-type: holds
    at every diagonal pair of that type (and any pair that mimics one)."""
    n = vocab.n
    parts = []
    for j, p in enumerate(vocab.unary):
        bit = (code >> j) & 1
        parts.append(_literal(Atom(p, ("x",)), bit))
        parts.append(_literal(Atom(p, ("y",)), bit))
    for j, r in enumerate(vocab.binary):
        bit = (code >> (n + j)) & 1
        for args in (("x", "x"), ("y", "y"), ("x", "y"), ("y", "x")):
            parts.append(_literal(Atom(r, args), bit))
    return _fold(parts, And, Const(True))


def _subject_description(code, vocab):
    """Conjunction of the x-only literals of a 1-type code."""
    n = vocab.n
    parts = []
    for j, p in enumerate(vocab.unary):
        parts.append(_literal(Atom(p, ("x",)), (code >> j) & 1))
    for j, r in enumerate(vocab.binary):
        parts.append(_literal(Atom(r, ("x", "x")), (code >> (n + j)) & 1))
    return _fold(parts, And, Const(True))


def snf_of_structure(S: Structure) -> ScottNormalForm:
    """A normal form S satisfies by construction: the universal part is the
    disjunction of S's realized pair and diagonal descriptions, and each
    realized 1-type gets one existential part demanding a realized witness
    pattern (itself always qualifying)."""
    if S.size < 1:
        raise ValueError("needs a nonempty structure")
    vocab = S.vocab
    n, m = vocab.n, vocab.m
    realized1 = sorted({one_type_code_of(S, a) for a in range(S.size)})
    realized2 = sorted(
        {two_type_code_of(S, a, b) for a in range(S.size) for b in range(S.size) if a != b}
    )
    alpha = _fold(
        [_pair_description(t, vocab) for t in realized2]
        + [_diagonal_description(p, vocab) for p in realized1],
        Or,
        Const(False),
    )
    betas = []
    for p in realized1:
        witnesses = [
            _pair_description(t, vocab)
            for t in realized2
            if project_x_code(t, n, m) == p
        ]
        witnesses.append(_diagonal_description(p, vocab))
        betas.append(Implies(_subject_description(p, vocab), _fold(witnesses, Or, Const(False))))
    return ScottNormalForm(vocab, alpha, tuple(betas))
