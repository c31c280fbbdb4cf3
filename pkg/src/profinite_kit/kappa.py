"""Terms over multiplication and omega powers, and pseudovariety membership.

A term is built from variables with binary multiplication and the unary
operations x -> x^(omega+q); the primitive signature is multiplication
together with x -> x^(omega-1), all other offsets being derived.  A
pseudoidentity is a formal equality of two terms; a finite semigroup
satisfies it when both sides evaluate equally under every assignment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import KitError
from .semigroups import FiniteSemigroup, omega_power


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Mul:
    left: "KappaTerm"
    right: "KappaTerm"


@dataclass(frozen=True)
class OmegaPow:
    """base^(omega+offset); offset may be any integer."""
    base: "KappaTerm"
    offset: int = 0


KappaTerm = Union[Var, Mul, OmegaPow]


def variables(term: KappaTerm) -> frozenset[str]:
    if isinstance(term, Var):
        return frozenset([term.name])
    if isinstance(term, Mul):
        return variables(term.left) | variables(term.right)
    return variables(term.base)


def mul_all(*terms: KappaTerm) -> KappaTerm:
    acc = terms[0]
    for t in terms[1:]:
        acc = Mul(acc, t)
    return acc


def term_to_str(term: KappaTerm) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Mul):
        return f"{term_to_str(term.left)}{term_to_str(term.right)}"
    base = term_to_str(term.base)
    if isinstance(term.base, (Mul, OmegaPow)) or len(base) > 1:
        base = f"({base})"
    q = term.offset
    if q == 0:
        return f"{base}^w"
    return f"{base}^(w{q:+d})"


def expand_to_primitive(term: KappaTerm) -> KappaTerm:
    """Rewrite so the only omega powers left carry offset -1.

    t^w becomes t^(w-1) t; positive offsets append plain factors of t and
    negative ones multiply copies of t^(w-1), both of which agree with the
    direct cyclic-exponent evaluation in every finite semigroup.
    """
    if isinstance(term, Var):
        return term
    if isinstance(term, Mul):
        return Mul(expand_to_primitive(term.left), expand_to_primitive(term.right))
    base = expand_to_primitive(term.base)
    q = term.offset
    if q == -1:
        return OmegaPow(base, -1)
    if q >= 0:
        acc: KappaTerm = Mul(OmegaPow(base, -1), base)  # base^w
        for _ in range(q):
            acc = Mul(acc, base)
        return acc
    return mul_all(*[OmegaPow(base, -1)] * (-q))


def eval_term(term: KappaTerm, s: FiniteSemigroup,
              assignment: Mapping[str, int]) -> int:
    if isinstance(term, Var):
        try:
            return assignment[term.name]
        except KeyError:
            raise KitError(f"unbound variable {term.name!r}") from None
    if isinstance(term, Mul):
        return s.table[eval_term(term.left, s, assignment)][eval_term(term.right, s, assignment)]
    return omega_power(s, eval_term(term.base, s, assignment), term.offset)


@dataclass(frozen=True)
class Pseudoidentity:
    lhs: KappaTerm
    rhs: KappaTerm

    @property
    def variables(self) -> frozenset[str]:
        return variables(self.lhs) | variables(self.rhs)

    def __str__(self) -> str:
        return f"{term_to_str(self.lhs)} = {term_to_str(self.rhs)}"


def satisfies(s: FiniteSemigroup, pid: Pseudoidentity) -> tuple[bool, Optional[dict[str, int]]]:
    """Check a pseudoidentity by brute force over all assignments.

    Returns (True, None) or (False, witness assignment).
    """
    names = sorted(pid.variables)
    for values in itertools.product(range(s.order), repeat=len(names)):
        assignment = dict(zip(names, values))
        if eval_term(pid.lhs, s, assignment) != eval_term(pid.rhs, s, assignment):
            return False, assignment
    return True, None


@dataclass(frozen=True)
class PseudovarietyDef:
    name: str
    basis: tuple[Pseudoidentity, ...]
    structural_check: Optional[str] = None  # predicate field name on StructuralProfile


def member(s: FiniteSemigroup, v: PseudovarietyDef) -> bool:
    return all(satisfies(s, pid)[0] for pid in v.basis)


def member_witness(s: FiniteSemigroup, v: PseudovarietyDef
                   ) -> tuple[bool, Optional[tuple[Pseudoidentity, dict[str, int]]]]:
    for pid in v.basis:
        ok, assignment = satisfies(s, pid)
        if not ok:
            assert assignment is not None
            return False, (pid, assignment)
    return True, None


def _x() -> Var:
    return Var("x")


def _y() -> Var:
    return Var("y")


def registry(experimental: bool = False) -> dict[str, PseudovarietyDef]:
    """Built-in pseudovariety definitions keyed by their usual names.

    Each basis is the standard finite one; the paired structural predicate
    is cross-checked exhaustively on small semigroups by the test suite.
    """
    x, y, z = _x(), _y(), Var("z")
    xw = OmegaPow(x)
    xy_w = OmegaPow(Mul(x, y))
    defs = {
        "S": PseudovarietyDef("S", ()),
        "A": PseudovarietyDef(
            "A", (Pseudoidentity(OmegaPow(x, 1), xw),), "is_aperiodic"),
        "G": PseudovarietyDef(
            "G",
            (Pseudoidentity(Mul(xw, y), y), Pseudoidentity(Mul(y, xw), y)),
            "is_group"),
        "J": PseudovarietyDef(
            "J",
            (Pseudoidentity(Mul(xy_w, x), xy_w), Pseudoidentity(Mul(y, xy_w), xy_w)),
            "is_j_trivial"),
        "Sl": PseudovarietyDef(
            "Sl",
            (Pseudoidentity(Mul(x, x), x), Pseudoidentity(Mul(x, y), Mul(y, x))),
            "is_semilattice"),
        "N": PseudovarietyDef(
            "N",
            (Pseudoidentity(Mul(xw, y), xw), Pseudoidentity(Mul(y, xw), xw)),
            "is_nilpotent"),
        "CR": PseudovarietyDef(
            "CR", (Pseudoidentity(OmegaPow(x, 1), x),), "is_completely_regular"),
    }
    if experimental:
        # local semilattices: no structural cross-check wired up
        exe = lambda t: Mul(Mul(xw, t), xw)  # noqa: E731 - x^w t x^w
        defs["LSl"] = PseudovarietyDef(
            "LSl",
            (
                Pseudoidentity(Mul(exe(y), exe(y)), exe(y)),
                Pseudoidentity(Mul(exe(y), exe(z)), Mul(exe(z), exe(y))),
            ),
        )
    return defs


def lookup(name: str, experimental: bool = False) -> PseudovarietyDef:
    defs = registry(experimental=experimental)
    try:
        return defs[name]
    except KeyError:
        raise KitError(f"unknown pseudovariety {name!r}; known: {sorted(defs)}") from None


# ---------------------------------------------------------------------------
# text syntax: variables are letters, juxtaposition or '*' multiplies,
# '^w' and '^(w+q)' / '^(w-q)' raise to omega powers, '^k' to plain powers.


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> KitError:
        return KitError(f"{message} at offset {self.pos} in term {self.text!r}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def parse(self) -> KappaTerm:
        term = self.parse_product()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return term

    def parse_product(self) -> KappaTerm:
        factors = [self.parse_factor()]
        while True:
            ch = self.peek()
            if ch == "*":
                self.take()
                factors.append(self.parse_factor())
            elif ch.isalpha() or ch == "(":
                factors.append(self.parse_factor())
            else:
                break
        return mul_all(*factors)

    def parse_factor(self) -> KappaTerm:
        ch = self.peek()
        if ch == "(":
            self.take()
            term = self.parse_product()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.take()
        elif ch.isalpha() and ch != "w":
            term = Var(self.take())
        elif ch.isalpha():
            raise self.error("'w' is reserved for omega")
        else:
            raise self.error("expected a variable or '('")
        while self.peek() == "^":
            self.take()
            term = self.parse_power(term)
        return term

    def parse_power(self, base: KappaTerm) -> KappaTerm:
        ch = self.peek()
        if ch == "w":
            self.take()
            return OmegaPow(base, 0)
        if ch == "(":
            self.take()
            if self.take() != "w":
                raise self.error("expected 'w'")
            sign = self.take()
            if sign not in "+-":
                raise self.error("expected '+' or '-'")
            digits = ""
            while self.peek().isdigit():
                digits += self.take()
            if not digits:
                raise self.error("expected digits")
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.take()
            offset = int(digits) if sign == "+" else -int(digits)
            return OmegaPow(base, offset)
        digits = ""
        while self.peek().isdigit():
            digits += self.take()
        if not digits:
            raise self.error("expected 'w', '(w±q)' or digits after '^'")
        k = int(digits)
        if k < 1:
            raise self.error("plain powers need exponent >= 1")
        return mul_all(*[base] * k)


def parse_term(text: str) -> KappaTerm:
    return _TermParser(text).parse()


def parse_pseudoidentity(text: str) -> Pseudoidentity:
    if text.count("=") != 1:
        raise KitError(f"a pseudoidentity needs exactly one '=': {text!r}")
    lhs, rhs = text.split("=")
    return Pseudoidentity(parse_term(lhs), parse_term(rhs))

