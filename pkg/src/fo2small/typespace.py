"""1-types, 2-types, finite structures, model checking.

Types are fixed-width bit patterns in the canonical atom order induced by
the vocabulary.  With n unary predicates P_0..P_{n-1} and m binary
predicates r_0..r_{m-1}:

  1-type code, n + m bits (atom index = bit position, LSB first):
      P_j(x)              -> bit j
      r_j(x,x)            -> bit n + j

  2-type code, 2n + 4m bits:
      P_j(x)              -> bit j
      P_j(y)              -> bit n + j
      r_j(x,x)            -> bit 2n + j
      r_j(y,y)            -> bit 2n + m + j
      r_j(x,y)            -> bit 2n + 2m + j
      r_j(y,x)            -> bit 2n + 3m + j

"Lexicographically smaller" between type codes means plain integer order.
2-types describe ordered pairs of *distinct* elements; the diagonal is
covered by 1-types alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .formula import (
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    ScottNormalForm,
    Vocabulary,
    free_vars,
    parse_vocab_lines,
)

# Largest 2n+4m for which truth tables over all 2-type codes are built;
# beyond it the scalar evaluator is used instead.
TABLE_BITS_MAX = 22


def one_type_count(vocab: Vocabulary) -> int:
    return 1 << (vocab.n + vocab.m)


def two_type_count(vocab: Vocabulary) -> int:
    return 1 << (2 * vocab.n + 4 * vocab.m)


def one_type_atoms(vocab: Vocabulary) -> tuple[str, ...]:
    return tuple(f"{p}(x)" for p in vocab.unary) + tuple(f"{r}(x,x)" for r in vocab.binary)


def two_type_atoms(vocab: Vocabulary) -> tuple[str, ...]:
    labels = [f"{p}(x)" for p in vocab.unary]
    labels += [f"{p}(y)" for p in vocab.unary]
    labels += [f"{r}(x,x)" for r in vocab.binary]
    labels += [f"{r}(y,y)" for r in vocab.binary]
    labels += [f"{r}(x,y)" for r in vocab.binary]
    labels += [f"{r}(y,x)" for r in vocab.binary]
    return tuple(labels)


def _describe(labels, code):
    return " ".join(lab if (code >> i) & 1 else "!" + lab for i, lab in enumerate(labels))


@dataclass(frozen=True)
class OneType:
    vocab: Vocabulary
    code: int

    def __post_init__(self):
        if not 0 <= self.code < one_type_count(self.vocab):
            raise ValueError(f"1-type code {self.code} out of range")

    def holds(self, atom_index: int) -> bool:
        return bool((self.code >> atom_index) & 1)

    def describe(self) -> str:
        return _describe(one_type_atoms(self.vocab), self.code)


@dataclass(frozen=True)
class TwoType:
    vocab: Vocabulary
    code: int

    def __post_init__(self):
        if not 0 <= self.code < two_type_count(self.vocab):
            raise ValueError(f"2-type code {self.code} out of range")

    def holds(self, atom_index: int) -> bool:
        return bool((self.code >> atom_index) & 1)

    def describe(self) -> str:
        return _describe(two_type_atoms(self.vocab), self.code)


def invert_code(code: int, n: int, m: int):
    """Swap the x and y roles of a 2-type code: P(x)<->P(y), r(x,x)<->r(y,y),
    r(x,y)<->r(y,x).  Works elementwise on numpy arrays too."""
    umask = (1 << n) - 1
    bmask = (1 << m) - 1
    px = code & umask
    py = (code >> n) & umask
    rxx = (code >> (2 * n)) & bmask
    ryy = (code >> (2 * n + m)) & bmask
    rxy = (code >> (2 * n + 2 * m)) & bmask
    ryx = (code >> (2 * n + 3 * m)) & bmask
    return (
        py
        | (px << n)
        | (ryy << (2 * n))
        | (rxx << (2 * n + m))
        | (ryx << (2 * n + 2 * m))
        | (rxy << (2 * n + 3 * m))
    )


def pair_code(pi_x: int, pi_y: int, exy: int, eyx: int, n: int, m: int) -> int:
    """Assemble a 2-type code from two 1-type codes and the cross bits."""
    ux, dx = pi_x & ((1 << n) - 1), pi_x >> n
    uy, dy = pi_y & ((1 << n) - 1), pi_y >> n
    return (
        ux
        | (uy << n)
        | (dx << (2 * n))
        | (dy << (2 * n + m))
        | (exy << (2 * n + 2 * m))
        | (eyx << (2 * n + 3 * m))
    )


def project_x_code(code: int, n: int, m: int):
    return (code & ((1 << n) - 1)) | (((code >> (2 * n)) & ((1 << m) - 1)) << n)


def project_y_code(code: int, n: int, m: int):
    return ((code >> n) & ((1 << n) - 1)) | (((code >> (2 * n + m)) & ((1 << m) - 1)) << n)


def invert(t: TwoType) -> TwoType:
    return TwoType(t.vocab, invert_code(t.code, t.vocab.n, t.vocab.m))


def project_x(t: TwoType) -> OneType:
    return OneType(t.vocab, project_x_code(t.code, t.vocab.n, t.vocab.m))


def project_y(t: TwoType) -> OneType:
    return OneType(t.vocab, project_y_code(t.code, t.vocab.n, t.vocab.m))


# --- structures --------------------------------------------------------

@dataclass(frozen=True)
class Structure:
    """A finite model: elements 0..size-1, one fact set per predicate,
    aligned with the vocabulary's declaration order."""

    vocab: Vocabulary
    size: int
    unary: tuple[frozenset, ...]
    binary: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "unary", tuple(frozenset(s) for s in self.unary))
        object.__setattr__(self, "binary", tuple(frozenset(s) for s in self.binary))
        if len(self.unary) != self.vocab.n or len(self.binary) != self.vocab.m:
            raise ValueError("fact tuples do not match the vocabulary")
        for facts in self.unary:
            for a in facts:
                if not 0 <= a < self.size:
                    raise ValueError(f"element {a} out of range")
        for facts in self.binary:
            for a, b in facts:
                if not (0 <= a < self.size and 0 <= b < self.size):
                    raise ValueError(f"pair ({a},{b}) out of range")

    @classmethod
    def build(cls, vocab, size, unary_facts=None, binary_facts=None):
        unary_facts = unary_facts or {}
        binary_facts = binary_facts or {}
        for name in list(unary_facts) + list(binary_facts):
            if name not in vocab:
                raise ValueError(f"undeclared predicate {name!r}")
        return cls(
            vocab,
            size,
            tuple(frozenset(unary_facts.get(p, ())) for p in vocab.unary),
            tuple(frozenset((a, b) for a, b in binary_facts.get(r, ())) for r in vocab.binary),
        )

    def unary_holds(self, name, a):
        return a in self.unary[self.vocab.unary_index(name)]

    def binary_holds(self, name, a, b):
        return (a, b) in self.binary[self.vocab.binary_index(name)]

    def reduct(self, sub: Vocabulary) -> "Structure":
        if not self.vocab.covers(sub):
            raise ValueError("target vocabulary is not a subset")
        return Structure(
            sub,
            self.size,
            tuple(self.unary[self.vocab.unary_index(p)] for p in sub.unary),
            tuple(self.binary[self.vocab.binary_index(r)] for r in sub.binary),
        )


def one_type_code_of(S: Structure, a: int) -> int:
    if not 0 <= a < S.size:
        raise ValueError(f"element {a} out of range")
    code = 0
    for j, facts in enumerate(S.unary):
        if a in facts:
            code |= 1 << j
    n = S.vocab.n
    for j, facts in enumerate(S.binary):
        if (a, a) in facts:
            code |= 1 << (n + j)
    return code


def two_type_code_of(S: Structure, a: int, b: int) -> int:
    if a == b:
        raise ValueError("2-types are defined for distinct elements only")
    n, m = S.vocab.n, S.vocab.m
    exy = 0
    eyx = 0
    for j, facts in enumerate(S.binary):
        if (a, b) in facts:
            exy |= 1 << j
        if (b, a) in facts:
            eyx |= 1 << j
    return pair_code(one_type_code_of(S, a), one_type_code_of(S, b), exy, eyx, n, m)


def one_type_of(S: Structure, a: int) -> OneType:
    return OneType(S.vocab, one_type_code_of(S, a))


def two_type_of(S: Structure, a: int, b: int) -> TwoType:
    return TwoType(S.vocab, two_type_code_of(S, a, b))


def realized_one_types(S: Structure) -> frozenset[OneType]:
    return frozenset(one_type_of(S, a) for a in range(S.size))


def realized_two_types(S: Structure) -> frozenset[TwoType]:
    return frozenset(
        two_type_of(S, a, b) for a in range(S.size) for b in range(S.size) if a != b
    )


# --- evaluation --------------------------------------------------------

def evaluate(phi: Formula, S: Structure, assignment=None) -> bool:
    """Truth of phi in S under the given {variable: element} assignment.
    Quantifiers range over the whole domain; on the empty domain every
    universal is true and every existential false."""
    assignment = dict(assignment or {})
    missing = free_vars(phi) - set(assignment)
    if missing:
        raise ValueError(f"unbound free variable(s): {sorted(missing)}")
    return _eval(phi, S, assignment)


def _eval(phi, S, env):
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atom):
        if len(phi.args) == 1:
            return S.unary_holds(phi.pred, env[phi.args[0]])
        return S.binary_holds(phi.pred, env[phi.args[0]], env[phi.args[1]])
    if isinstance(phi, Not):
        return not _eval(phi.inner, S, env)
    if isinstance(phi, And):
        return _eval(phi.left, S, env) and _eval(phi.right, S, env)
    if isinstance(phi, Or):
        return _eval(phi.left, S, env) or _eval(phi.right, S, env)
    if isinstance(phi, Implies):
        return (not _eval(phi.left, S, env)) or _eval(phi.right, S, env)
    if isinstance(phi, Iff):
        return _eval(phi.left, S, env) == _eval(phi.right, S, env)
    if isinstance(phi, Forall):
        saved = env.get(phi.var)
        for a in range(S.size):
            env[phi.var] = a
            if not _eval(phi.body, S, env):
                _restore(env, phi.var, saved)
                return False
        _restore(env, phi.var, saved)
        return True
    if isinstance(phi, Exists):
        saved = env.get(phi.var)
        for a in range(S.size):
            env[phi.var] = a
            if _eval(phi.body, S, env):
                _restore(env, phi.var, saved)
                return True
        _restore(env, phi.var, saved)
        return False
    raise TypeError(f"not a formula: {phi!r}")


def _restore(env, var, saved):
    if saved is None:
        env.pop(var, None)
    else:
        env[var] = saved


# --- truth tables over type codes ---------------------------------------

def _table(phi, vocab, bit_of, width):
    codes = np.arange(1 << width, dtype=np.int64)

    def rec(node):
        if isinstance(node, Const):
            return np.full(codes.shape, node.value, dtype=bool)
        if isinstance(node, Atom):
            return ((codes >> bit_of(node)) & 1).astype(bool)
        if isinstance(node, Not):
            return ~rec(node.inner)
        if isinstance(node, And):
            return rec(node.left) & rec(node.right)
        if isinstance(node, Or):
            return rec(node.left) | rec(node.right)
        if isinstance(node, Implies):
            return ~rec(node.left) | rec(node.right)
        if isinstance(node, Iff):
            return rec(node.left) == rec(node.right)
        raise TypeError(f"quantifier in quantifier-free formula: {node!r}")

    return rec(phi)


def pair_truth_table(phi: Formula, vocab: Vocabulary) -> np.ndarray:
    """Truth of a quantifier-free formula at every 2-type code (x, y distinct)."""
    n, m = vocab.n, vocab.m

    def bit_of(atom):
        if len(atom.args) == 1:
            j = vocab.unary_index(atom.pred)
            return j if atom.args[0] == "x" else n + j
        j = vocab.binary_index(atom.pred)
        a, b = atom.args
        if a == "x" and b == "x":
            return 2 * n + j
        if a == "y" and b == "y":
            return 2 * n + m + j
        if a == "x" and b == "y":
            return 2 * n + 2 * m + j
        return 2 * n + 3 * m + j

    return _table(phi, vocab, bit_of, 2 * n + 4 * m)


def diag_truth_table(phi: Formula, vocab: Vocabulary) -> np.ndarray:
    """Truth of a quantifier-free formula at every 1-type code with y = x."""
    n = vocab.n

    def bit_of(atom):
        if len(atom.args) == 1:
            return vocab.unary_index(atom.pred)
        return n + vocab.binary_index(atom.pred)

    return _table(phi, vocab, bit_of, n + vocab.m)


def structure_codes(S: Structure):
    """Per-element 1-type codes and the full ordered-pair 2-type code matrix
    (diagonal entries are unused)."""
    N = S.size
    n, m = S.vocab.n, S.vocab.m
    pi = np.array([one_type_code_of(S, a) for a in range(N)], dtype=np.int64)
    e = np.zeros((N, N), dtype=np.int64)
    for j, facts in enumerate(S.binary):
        for a, b in facts:
            e[a, b] |= 1 << j
    ux = pi & ((1 << n) - 1)
    dx = pi >> n
    tau = (
        ux[:, None]
        | (ux[None, :] << n)
        | (dx[:, None] << (2 * n))
        | (dx[None, :] << (2 * n + m))
        | (e << (2 * n + 2 * m))
        | (e.T << (2 * n + 3 * m))
    )
    return pi, tau


# --- normal-form checking ----------------------------------------------

@dataclass(frozen=True)
class SnfCheckResult:
    ok: bool
    alpha_violation: tuple | None = None  # (a, b), possibly a == b
    beta_violation: tuple | None = None   # (element, beta index)

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "TRUE"
        if self.alpha_violation is not None:
            a, b = self.alpha_violation
            return f"FALSE alpha x={a} y={b}"
        a, i = self.beta_violation
        return f"FALSE beta x={a} index={i}"


def check_snf(S: Structure, snf: ScottNormalForm) -> SnfCheckResult:
    """Scan all pairs (diagonal included) for the universal part and find a
    witness (possibly the element itself) for every existential part.

    The scan order is fixed: the first alpha violation in row-major pair
    order wins; otherwise the first (element, beta index) without witness.
    """
    if S.vocab != snf.vocabulary:
        raise ValueError("vocabulary mismatch between structure and normal form")
    n, m = S.vocab.n, S.vocab.m
    if 2 * n + 4 * m <= TABLE_BITS_MAX:
        return _check_snf_tables(S, snf)
    return _check_snf_scalar(S, snf)


def _check_snf_tables(S, snf):
    N = S.size
    if N == 0:
        return SnfCheckResult(True)
    pi, tau = structure_codes(S)
    alpha_diag = diag_truth_table(snf.alpha, S.vocab)
    alpha_pair = pair_truth_table(snf.alpha, S.vocab)

    ok_pairs = alpha_pair[tau]
    np.fill_diagonal(ok_pairs, alpha_diag[pi])
    if not ok_pairs.all():
        flat = int(np.argmin(ok_pairs))
        return SnfCheckResult(False, alpha_violation=(flat // N, flat % N))

    K = len(snf.betas)
    if K == 0:
        return SnfCheckResult(True)
    cov = np.zeros((N, K), dtype=bool)
    off = ~np.eye(N, dtype=bool)
    for i, beta in enumerate(snf.betas):
        bt = pair_truth_table(beta, S.vocab)[tau]
        cov[:, i] = diag_truth_table(beta, S.vocab)[pi] | (bt & off).any(axis=1)
    if cov.all():
        return SnfCheckResult(True)
    flat = int(np.argmin(cov))
    return SnfCheckResult(False, beta_violation=(flat // K, flat % K))


def _check_snf_scalar(S, snf):
    env = {}
    for a in range(S.size):
        for b in range(S.size):
            env["x"], env["y"] = a, b
            if not _eval(snf.alpha, S, env):
                return SnfCheckResult(False, alpha_violation=(a, b))
    for a in range(S.size):
        for i, beta in enumerate(snf.betas):
            found = False
            for b in range(S.size):
                env["x"], env["y"] = a, b
                if _eval(beta, S, env):
                    found = True
                    break
            if not found:
                return SnfCheckResult(False, beta_violation=(a, i))
    return SnfCheckResult(True)


# --- files -------------------------------------------------------------

def structure_to_text(S: Structure) -> str:
    """Canonical serialization: vocab lines, domain line, then facts sorted
    by predicate declaration order and element id.  Equal structures yield
    byte-identical text."""
    vocab = S.vocab
    lines = [
        "vocab unary" + ("" if not vocab.unary else " " + " ".join(vocab.unary)),
        "vocab binary" + ("" if not vocab.binary else " " + " ".join(vocab.binary)),
        f"domain {S.size}",
    ]
    for name, facts in zip(vocab.unary, S.unary):
        lines.extend(f"{name} {a}" for a in sorted(facts))
    for name, facts in zip(vocab.binary, S.binary):
        lines.extend(f"{name} {a} {b}" for a, b in sorted(facts))
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> Structure:
    lines = [(i + 1, line) for i, line in enumerate(text.splitlines()) if line.strip()]
    vocab, rest = parse_vocab_lines(lines)
    size = None
    unary_facts: dict[str, set] = {p: set() for p in vocab.unary}
    binary_facts: dict[str, set] = {r: set() for r in vocab.binary}
    for lineno, raw in rest:
        parts = raw.split()
        if parts[0] == "domain":
            if size is not None:
                raise FormatError(f"line {lineno}: duplicate domain line")
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError(f"line {lineno}: expected 'domain N'")
            size = int(parts[1])
        elif parts[0] in unary_facts:
            if size is None:
                raise FormatError(f"line {lineno}: fact before domain line")
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError(f"line {lineno}: expected '{parts[0]} a'")
            a = int(parts[1])
            if a >= size:
                raise FormatError(f"line {lineno}: element {a} out of range")
            unary_facts[parts[0]].add(a)
        elif parts[0] in binary_facts:
            if size is None:
                raise FormatError(f"line {lineno}: fact before domain line")
            if len(parts) != 3 or not (parts[1].isdigit() and parts[2].isdigit()):
                raise FormatError(f"line {lineno}: expected '{parts[0]} a b'")
            a, b = int(parts[1]), int(parts[2])
            if a >= size or b >= size:
                raise FormatError(f"line {lineno}: pair ({a},{b}) out of range")
            binary_facts[parts[0]].add((a, b))
        else:
            raise FormatError(f"line {lineno}: unknown line {raw!r}")
    if size is None:
        raise FormatError("missing domain line")
    return Structure.build(vocab, size, unary_facts, binary_facts)


def save_structure(S: Structure, path) -> None:
    with open(path, "w") as fh:
        fh.write(structure_to_text(S))


def load_structure(path) -> Structure:
    with open(path) as fh:
        return parse_structure(fh.read())
