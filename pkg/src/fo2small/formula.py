"""Two-variable sentences: vocabulary, AST, parser, printer, and the
rewriting into the normal form  A x. A y. alpha  conjoined with
A x. E y. beta_i parts.

The concrete syntax is ASCII: quantifiers ``A x.`` / ``E y.``, connectives
``!`` ``&`` ``|`` ``->`` ``<->`` (unary strongest, arrows right-associative),
atoms ``P(x)`` / ``R(x,y)``, constants ``true`` / ``false``.  A quantifier
extends as far right as possible; parenthesize to cut its scope short.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FormatError, ParseError

VARIABLES = ("x", "y")

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RESERVED = ("true", "false")


def other_var(var: str) -> str:
    return "y" if var == "x" else "x"


@dataclass(frozen=True)
class Vocabulary:
    """Named unary and binary predicate symbols, in declaration order."""

    unary: tuple[str, ...] = ()
    binary: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "unary", tuple(self.unary))
        object.__setattr__(self, "binary", tuple(self.binary))
        seen = set()
        for name in self.unary + self.binary:
            if not _NAME_RE.fullmatch(name):
                raise FormatError(f"bad predicate name {name!r}")
            if name in _RESERVED:
                raise FormatError(f"predicate name {name!r} is reserved")
            if name in seen:
                raise FormatError(f"duplicate predicate name {name!r}")
            seen.add(name)

    @property
    def n(self) -> int:
        return len(self.unary)

    @property
    def m(self) -> int:
        return len(self.binary)

    def arity(self, name: str) -> int:
        if name in self.unary:
            return 1
        if name in self.binary:
            return 2
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return name in self.unary or name in self.binary

    def unary_index(self, name: str) -> int:
        return self.unary.index(name)

    def binary_index(self, name: str) -> int:
        return self.binary.index(name)

    def extend_unary(self, names) -> "Vocabulary":
        return Vocabulary(self.unary + tuple(names), self.binary)

    def covers(self, sub: "Vocabulary") -> bool:
        """True if every predicate of `sub` appears here with the same arity."""
        return set(sub.unary) <= set(self.unary) and set(sub.binary) <= set(self.binary)


# --- AST ---------------------------------------------------------------

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Not(Formula):
    inner: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


TRUE = Const(True)
FALSE = Const(False)

_BINARY = (And, Or, Implies, Iff)
_QUANT = (Forall, Exists)


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Const):
        return frozenset()
    if isinstance(phi, Atom):
        return frozenset(phi.args)
    if isinstance(phi, Not):
        return free_vars(phi.inner)
    if isinstance(phi, _BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, _QUANT):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Const, Atom)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.inner)
    if isinstance(phi, _BINARY):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def swap_xy(phi: Formula) -> Formula:
    """Exchange the roles of x and y everywhere (bound occurrences included)."""
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(other_var(v) for v in phi.args))
    if isinstance(phi, Not):
        return Not(swap_xy(phi.inner))
    if isinstance(phi, _BINARY):
        return type(phi)(swap_xy(phi.left), swap_xy(phi.right))
    if isinstance(phi, _QUANT):
        return type(phi)(other_var(phi.var), swap_xy(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def quantified_subformulas(phi: Formula) -> list[Formula]:
    out = []
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Not):
            stack.append(node.inner)
        elif isinstance(node, _BINARY):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, _QUANT):
            out.append(node)
            stack.append(node.body)
    return out


def check_against_vocab(phi: Formula, vocab: Vocabulary) -> None:
    """Raise ValueError unless every atom is declared with matching arity
    and only the variables x, y occur."""
    if isinstance(phi, Const):
        return
    if isinstance(phi, Atom):
        if phi.pred not in vocab:
            raise ValueError(f"undeclared predicate {phi.pred!r}")
        if vocab.arity(phi.pred) != len(phi.args):
            raise ValueError(f"arity mismatch for {phi.pred!r}")
        for v in phi.args:
            if v not in VARIABLES:
                raise ValueError(f"variable {v!r} not allowed")
        return
    if isinstance(phi, Not):
        check_against_vocab(phi.inner, vocab)
    elif isinstance(phi, _BINARY):
        check_against_vocab(phi.left, vocab)
        check_against_vocab(phi.right, vocab)
    elif isinstance(phi, _QUANT):
        if phi.var not in VARIABLES:
            raise ValueError(f"variable {phi.var!r} not allowed")
        check_against_vocab(phi.body, vocab)
    else:
        raise TypeError(f"not a formula: {phi!r}")


# --- parsing -----------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<iff><->)|(?P<imp>->)"
    r"|(?P<sym>[()!,.&|]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append((kind if kind != "sym" else value, value, match.start(kind)))
        pos = match.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, vocab):
        self.tokens = tokens
        self.vocab = vocab
        self.i = 0

    def peek(self, ahead=0):
        j = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[j]

    def take(self):
        tok = self.tokens[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self):
        phi = self.iff()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return phi

    def iff(self):
        left = self.imp()
        if self.peek()[0] == "iff":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self):
        left = self.disj()
        if self.peek()[0] == "imp":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self):
        phi = self.conj()
        while self.peek()[0] == "|":
            self.take()
            phi = Or(phi, self.conj())
        return phi

    def conj(self):
        phi = self.unary()
        while self.peek()[0] == "&":
            self.take()
            phi = And(phi, self.unary())
        return phi

    def unary(self):
        tok = self.peek()
        if tok[0] == "!":
            self.take()
            return Not(self.unary())
        if tok[0] == "(":
            self.take()
            phi = self.iff()
            self.expect(")", "')'")
            return phi
        if tok[0] == "name":
            if tok[1] in ("A", "E") and self.peek(1)[0] == "name" and self.peek(2)[0] == ".":
                return self.quantifier()
            return self.atom()
        raise ParseError(f"expected a formula, found {tok[1] or 'end of input'!r}", tok[2])

    def quantifier(self):
        kind = self.take()[1]
        var_tok = self.take()
        if var_tok[1] not in VARIABLES:
            raise ParseError(f"variable {var_tok[1]!r} not allowed (only x, y)", var_tok[2])
        self.expect(".", "'.'")
        body = self.iff()
        node = Forall if kind == "A" else Exists
        return node(var_tok[1], body)

    def atom(self):
        name_tok = self.take()
        name = name_tok[1]
        if name == "true":
            return TRUE
        if name == "false":
            return FALSE
        if self.peek()[0] != "(":
            raise ParseError(f"expected '(' after predicate {name!r}", self.peek()[2])
        if name not in self.vocab:
            raise ParseError(f"undeclared predicate {name!r}", name_tok[2])
        self.take()
        args = [self.variable()]
        if self.peek()[0] == ",":
            self.take()
            args.append(self.variable())
        self.expect(")", "')'")
        if self.vocab.arity(name) != len(args):
            raise ParseError(
                f"predicate {name!r} takes {self.vocab.arity(name)} argument(s), got {len(args)}",
                name_tok[2],
            )
        return Atom(name, tuple(args))

    def variable(self):
        tok = self.expect("name", "a variable")
        if tok[1] not in VARIABLES:
            raise ParseError(f"variable {tok[1]!r} not allowed (only x, y)", tok[2])
        return tok[1]


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    return _Parser(_tokenize(text), vocab).parse()


# --- printing ----------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Const: 6, Forall: 0, Exists: 0}


def print_formula(phi: Formula) -> str:
    return _pp(phi, 0)


def _pp(phi, minlevel):
    prec = _PREC[type(phi)]
    if isinstance(phi, Const):
        s = "true" if phi.value else "false"
    elif isinstance(phi, Atom):
        s = f"{phi.pred}({','.join(phi.args)})"
    elif isinstance(phi, Not):
        s = "!" + _pp(phi.inner, 5)
    elif isinstance(phi, And):
        s = _pp(phi.left, 4) + " & " + _pp(phi.right, 5)
    elif isinstance(phi, Or):
        s = _pp(phi.left, 3) + " | " + _pp(phi.right, 4)
    elif isinstance(phi, Implies):
        s = _pp(phi.left, 3) + " -> " + _pp(phi.right, 2)
    elif isinstance(phi, Iff):
        s = _pp(phi.left, 2) + " <-> " + _pp(phi.right, 1)
    elif isinstance(phi, (Forall, Exists)):
        tag = "A" if isinstance(phi, Forall) else "E"
        s = f"{tag} {phi.var}. " + _pp(phi.body, 0)
    else:
        raise TypeError(f"not a formula: {phi!r}")
    return "(" + s + ")" if prec < minlevel else s


# --- Scott normal form -------------------------------------------------

@dataclass(frozen=True)
class ScottNormalForm:
    """The sentence  A x. A y. alpha  conjoined with one  A x. E y. beta_i
    per entry, all parts quantifier-free over the (possibly extended)
    vocabulary."""

    vocabulary: Vocabulary
    alpha: Formula
    betas: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(self.betas))
        for part in (self.alpha,) + self.betas:
            if not is_quantifier_free(part):
                raise ValueError("normal form parts must be quantifier-free")
            check_against_vocab(part, self.vocabulary)

    def sentence(self) -> Formula:
        phi: Formula = Forall("x", Forall("y", self.alpha))
        for beta in self.betas:
            phi = And(phi, Forall("x", Exists("y", beta)))
        return phi


def _flatten_and(phi):
    if isinstance(phi, And):
        return _flatten_and(phi.left) + _flatten_and(phi.right)
    return [phi]


def _fold_and(parts):
    if not parts:
        return TRUE
    phi = parts[0]
    for part in parts[1:]:
        phi = And(phi, part)
    return phi


def _fresh_names(vocab, prefix):
    taken = set(vocab.unary) | set(vocab.binary)
    i = 0
    while True:
        name = f"{prefix}{i}"
        i += 1
        if name not in taken:
            taken.add(name)
            yield name


def _direct_shape(conjunct):
    """Recognize conjuncts that already fit the normal form.

    Returns ("alpha", qf), ("beta", qf), "drop", or None for the general
    rewriting path.  The subject variable is canonicalized to x.
    """
    if conjunct == TRUE:
        return "drop"
    if conjunct == FALSE:
        return ("alpha", FALSE)
    if isinstance(conjunct, Forall):
        inner = conjunct.body
        if isinstance(inner, Forall) and inner.var != conjunct.var and is_quantifier_free(inner.body):
            return ("alpha", inner.body)
        if isinstance(inner, Exists) and inner.var != conjunct.var and is_quantifier_free(inner.body):
            body = inner.body if conjunct.var == "x" else swap_xy(inner.body)
            return ("beta", body)
        if is_quantifier_free(inner):
            return ("alpha", inner if conjunct.var == "x" else swap_xy(inner))
    return None


def to_scott_normal_form(phi: Formula, vocab: Vocabulary) -> ScottNormalForm:
    """Rewrite a sentence into normal form over `vocab` extended with fresh
    unary predicates.

    Each innermost quantified subformula Q v. psi is replaced by a marker
    p(u) for the other variable u, with defining conjuncts
    A u. (p(u) -> Q v. psi) and A u. (!p(u) -> !Q v. psi); the quantifier-free
    remainder joins the universal part.  Conjuncts already of the target
    shape pass through untouched, so normal-form inputs gain no markers.
    Satisfiability is preserved cardinality-for-cardinality on nonempty
    domains, and reducts of models are models of the input.
    """
    check_against_vocab(phi, vocab)
    if free_vars(phi):
        raise ValueError("input must be a sentence")

    alpha_parts: list[Formula] = []
    betas: list[Formula] = []
    pending: list[Formula] = []
    for conjunct in _flatten_and(phi):
        shaped = _direct_shape(conjunct)
        if shaped is None:
            pending.append(conjunct)
        elif shaped == "drop":
            continue
        elif shaped[0] == "alpha":
            alpha_parts.append(shaped[1])
        else:
            betas.append(shaped[1])

    fresh: list[str] = []
    namer = _fresh_names(vocab, "_s")

    def rewrite(node):
        if isinstance(node, (Const, Atom)):
            return node
        if isinstance(node, Not):
            return Not(rewrite(node.inner))
        if isinstance(node, _BINARY):
            return type(node)(rewrite(node.left), rewrite(node.right))
        # quantifier: children first, so the body is quantifier-free here
        body = rewrite(node.body)
        subject = other_var(node.var)
        name = next(namer)
        fresh.append(name)
        psi = body if subject == "x" else swap_xy(body)
        marker = Atom(name, ("x",))
        if isinstance(node, Exists):
            betas.append(Implies(marker, psi))
            alpha_parts.append(Implies(Not(marker), Not(psi)))
        else:
            alpha_parts.append(Implies(marker, psi))
            betas.append(Implies(Not(marker), Not(psi)))
        return Atom(name, (subject,))

    for conjunct in pending:
        remainder = rewrite(conjunct)
        alpha_parts.append(remainder)

    return ScottNormalForm(vocab.extend_unary(fresh), _fold_and(alpha_parts), tuple(betas))


def pad_vocabulary(vocab: Vocabulary, min_total: int = 3) -> Vocabulary:
    """Add unconstrained fresh unary predicates until n + m >= min_total."""
    extra = []
    namer = _fresh_names(vocab, "_p")
    while vocab.n + vocab.m + len(extra) < min_total:
        extra.append(next(namer))
    return vocab.extend_unary(extra) if extra else vocab


# --- files -------------------------------------------------------------

def parse_vocab_lines(lines) -> tuple[Vocabulary, list]:
    """Consume leading `vocab unary ...` / `vocab binary ...` lines.

    Returns the vocabulary and the remaining (lineno, text) pairs.
    """
    unary: tuple[str, ...] = ()
    binary: tuple[str, ...] = ()
    seen = set()
    rest = []
    for lineno, raw in lines:
        parts = raw.split()
        if parts and parts[0] == "vocab" and not rest:
            if len(parts) < 2 or parts[1] not in ("unary", "binary"):
                raise FormatError(f"line {lineno}: expected 'vocab unary ...' or 'vocab binary ...'")
            if parts[1] in seen:
                raise FormatError(f"line {lineno}: duplicate 'vocab {parts[1]}' line")
            seen.add(parts[1])
            if parts[1] == "unary":
                unary = tuple(parts[2:])
            else:
                binary = tuple(parts[2:])
        else:
            rest.append((lineno, raw))
    try:
        vocab = Vocabulary(unary, binary)
    except FormatError as exc:
        raise FormatError(f"bad vocabulary: {exc}") from exc
    return vocab, rest


def _numbered_lines(text):
    return [(i + 1, line) for i, line in enumerate(text.splitlines()) if line.strip()]


def load_formula_file(text: str) -> tuple[Vocabulary, Formula]:
    """Parse a file of vocab header lines followed by one sentence (which
    may span several lines)."""
    vocab, rest = parse_vocab_lines(_numbered_lines(text))
    if not rest:
        raise FormatError("no formula found after the vocab lines")
    body = " ".join(raw for _, raw in rest)
    return vocab, parse_formula(body, vocab)


def format_formula_file(vocab: Vocabulary, phi: Formula) -> str:
    lines = [
        "vocab unary" + ("" if not vocab.unary else " " + " ".join(vocab.unary)),
        "vocab binary" + ("" if not vocab.binary else " " + " ".join(vocab.binary)),
        print_formula(phi),
    ]
    return "\n".join(lines) + "\n"


def format_snf(snf: ScottNormalForm) -> str:
    vocab = snf.vocabulary
    lines = [
        "vocab unary" + ("" if not vocab.unary else " " + " ".join(vocab.unary)),
        "vocab binary" + ("" if not vocab.binary else " " + " ".join(vocab.binary)),
        "alpha " + print_formula(snf.alpha),
    ]
    lines.extend("beta " + print_formula(beta) for beta in snf.betas)
    return "\n".join(lines) + "\n"


def parse_snf(text: str) -> ScottNormalForm:
    vocab, rest = parse_vocab_lines(_numbered_lines(text))
    alpha = None
    betas = []
    for lineno, raw in rest:
        key, _, body = raw.partition(" ")
        if key == "alpha":
            if alpha is not None:
                raise FormatError(f"line {lineno}: duplicate alpha line")
            alpha = parse_formula(body, vocab)
        elif key == "beta":
            betas.append(parse_formula(body, vocab))
        else:
            raise FormatError(f"line {lineno}: unknown line {raw!r}")
    if alpha is None:
        raise FormatError("missing alpha line")
    try:
        return ScottNormalForm(vocab, alpha, tuple(betas))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
