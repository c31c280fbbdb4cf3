"""Finite semigroups given by multiplication tables.

Everything downstream (syntactic semigroups, pseudoidentity checking,
kernels, the pro-V word metric) works over the immutable FiniteSemigroup
defined here.  The module also provides Green's relations, omega-power
profiles, a generic closure engine and exhaustive enumeration of small
semigroups up to isomorphism.
"""

from __future__ import annotations

import functools
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import KitError, MalformedTableError, UnsupportedOrderError

Table = tuple[tuple[int, ...], ...]

ENUMERATION_LIMIT = 4
THREADS_ENV_VAR = "PROFINITE_KIT_THREADS"


def _freeze_table(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(x) for x in row) for row in rows)


def check_associativity(rows: Sequence[Sequence[int]]) -> bool:
    """True iff the square table with in-range entries is associative."""
    n = len(rows)
    table = _freeze_table(rows)
    for row in table:
        if len(row) != n:
            raise MalformedTableError("table is not square")
        for x in row:
            if not 0 <= x < n:
                raise MalformedTableError(f"entry {x} outside [0, {n})")
    rng = range(n)
    for a in rng:
        ta = table[a]
        for b in rng:
            tab = table[ta[b]]
            tb = table[b]
            for c in rng:
                if tab[c] != ta[tb[c]]:
                    return False
    return True


def _find_identity(table: Table) -> Optional[int]:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x == table[x][e] for x in range(n)):
            return e
    return None


@dataclass(frozen=True)
class FiniteSemigroup:
    """A finite semigroup as an n-by-n table of element indices.

    Row index is the left factor: table[a][b] = a*b.  `identity` is the
    index of the neutral element when one exists, `labels` optional
    display names, `generators` an optional generating set.
    """

    order: int
    table: Table
    identity: Optional[int] = None
    labels: Optional[tuple[str, ...]] = None
    generators: Optional[frozenset[int]] = None

    def __post_init__(self):
        if self.order < 1 or len(self.table) != self.order:
            raise MalformedTableError("order does not match table size")
        if not check_associativity(self.table):
            raise MalformedTableError("table is not associative")
        if self.identity is not None:
            e = self.identity
            if not all(self.table[e][x] == x == self.table[x][e] for x in range(self.order)):
                raise MalformedTableError(f"element {e} is not an identity")
        if self.labels is not None and len(self.labels) != self.order:
            raise MalformedTableError("labels do not match order")
        if self.generators is not None:
            if not self.generators:
                raise MalformedTableError("generator set must be nonempty")
            if any(not 0 <= g < self.order for g in self.generators):
                raise MalformedTableError("generator outside element range")
            if subsemigroup_closure(self, self.generators) != frozenset(range(self.order)):
                raise MalformedTableError("generators do not generate the semigroup")

    @classmethod
    def from_table(cls, rows: Sequence[Sequence[int]], identity: Optional[int] = None,
                   labels: Optional[Sequence[str]] = None,
                   generators: Optional[Iterable[int]] = None) -> "FiniteSemigroup":
        table = _freeze_table(rows)
        if identity is None:
            identity = _find_identity(table)
        return cls(
            order=len(table),
            table=table,
            identity=identity,
            labels=tuple(labels) if labels is not None else None,
            generators=frozenset(generators) if generators is not None else None,
        )

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, elements: Iterable[int]) -> int:
        it = iter(elements)
        try:
            acc = next(it)
        except StopIteration:
            raise KitError("empty product has no value in a semigroup") from None
        for x in it:
            acc = self.table[acc][x]
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 1:
            raise KitError("semigroup powers need exponent >= 1")
        acc = a
        for _ in range(k - 1):
            acc = self.table[acc][a]
        return acc

    def idempotents(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.order) if self.table[x][x] == x)

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def label_of(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def restrict(self, subset: Iterable[int]) -> "FiniteSemigroup":
        """Induced table on a product-closed subset, in sorted index order."""
        elems = sorted(set(subset))
        pos = {x: i for i, x in enumerate(elems)}
        rows = []
        for a in elems:
            row = []
            for b in elems:
                ab = self.table[a][b]
                if ab not in pos:
                    raise KitError("subset is not closed under the product")
                row.append(pos[ab])
            rows.append(row)
        labels = tuple(self.label_of(x) for x in elems) if self.labels else None
        return FiniteSemigroup.from_table(rows, labels=labels)

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "table": [list(row) for row in self.table],
            "identity": self.identity,
            "labels": list(self.labels) if self.labels is not None else None,
            "generators": sorted(self.generators) if self.generators is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiniteSemigroup":
        try:
            rows = data["table"]
            order = data["order"]
        except (KeyError, TypeError) as exc:
            raise MalformedTableError(f"missing field in semigroup JSON: {exc}") from exc
        if len(rows) != order:
            raise MalformedTableError("declared order does not match the table")
        return cls.from_table(
            rows,
            identity=data.get("identity"),
            labels=data.get("labels"),
            generators=data.get("generators"),
        )

    @classmethod
    def from_json(cls, text: str) -> "FiniteSemigroup":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedTableError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)


def adjoin_identity(s: FiniteSemigroup) -> FiniteSemigroup:
    """S^1: adjoin a fresh identity as the last element (always fresh)."""
    n = s.order
    rows = [list(row) + [a] for a, row in enumerate(s.table)]
    rows.append(list(range(n + 1)))
    labels = tuple(s.labels) + ("1",) if s.labels is not None else None
    return FiniteSemigroup.from_table(rows, identity=n, labels=labels)


def monoid_of(s: FiniteSemigroup) -> FiniteSemigroup:
    """The semigroup itself when it has an identity, else S^1."""
    return s if s.identity is not None else adjoin_identity(s)


# ---------------------------------------------------------------------------
# omega powers


@dataclass(frozen=True)
class MonogenicProfile:
    """Index/period data of the cyclic subsemigroup generated by one element.

    s^index is the first power falling on the cycle, which has length
    period; omega is the unique idempotent power and omega_minus_one the
    inverse of s*omega within the cycle's group.
    """

    element: int
    index: int
    period: int
    omega: int
    omega_minus_one: int


def monogenic_profile(s: FiniteSemigroup, x: int) -> MonogenicProfile:
    if not 0 <= x < s.order:
        raise KitError(f"element {x} outside semigroup of order {s.order}")
    seen: dict[int, int] = {}
    powers = [x]
    seen[x] = 1
    cur = x
    k = 1
    while True:
        cur = s.table[cur][x]
        k += 1
        if cur in seen:
            index = seen[cur]
            period = k - index
            break
        seen[cur] = k
        powers.append(cur)
    omega = powers[_cycle_exponent(index, period, 0) - 1]
    omega_minus_one = powers[_cycle_exponent(index, period, -1) - 1]
    return MonogenicProfile(element=x, index=index, period=period,
                            omega=omega, omega_minus_one=omega_minus_one)


def _cycle_exponent(index: int, period: int, offset: int) -> int:
    """Least t >= max(index, 1) with t = offset (mod period)."""
    t = max(index, 1)
    shift = (offset - t) % period
    return t + shift


def omega_power(s: FiniteSemigroup, x: int, offset: int = 0) -> int:
    """x^(omega+offset) for any integer offset."""
    profile = monogenic_profile(s, x)
    t = _cycle_exponent(profile.index, profile.period, offset)
    return s.power(x, t)


# ---------------------------------------------------------------------------
# Green's relations


@dataclass(frozen=True)
class GreenData:
    """Partitions of the element set into R/L/J/H classes.

    Classes are tuples of sorted element indices, listed in order of their
    least member.  j_order contains a pair (i, j) when the i-th J-class is
    below-or-equal the j-th in the ideal order.
    """

    r_classes: tuple[tuple[int, ...], ...]
    l_classes: tuple[tuple[int, ...], ...]
    j_classes: tuple[tuple[int, ...], ...]
    h_classes: tuple[tuple[int, ...], ...]
    j_order: frozenset[tuple[int, int]]

    def class_of(self, which: str, x: int) -> tuple[int, ...]:
        classes = getattr(self, f"{which}_classes")
        for cls in classes:
            if x in cls:
                return cls
        raise KeyError(x)


def _partition_from_keys(keys: list) -> tuple[tuple[int, ...], ...]:
    groups: dict = {}
    for x, key in enumerate(keys):
        groups.setdefault(key, []).append(x)
    return tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: g[0]))


def green_relations(s: FiniteSemigroup) -> GreenData:
    """Green's relations computed from principal ideals in S^1."""
    m = monoid_of(s)
    n = s.order
    rng1 = range(m.order)
    right = [frozenset(m.table[x][y] for y in rng1) for x in range(n)]
    left = [frozenset(m.table[y][x] for y in rng1) for x in range(n)]
    two = [frozenset(m.table[m.table[y][x]][z] for y in rng1 for z in rng1)
           for x in range(n)]
    r_classes = _partition_from_keys(right)
    l_classes = _partition_from_keys(left)
    j_classes = _partition_from_keys(two)
    h_classes = _partition_from_keys(list(zip(right, left)))
    order = set()
    for i, ci in enumerate(j_classes):
        for j, cj in enumerate(j_classes):
            if two[ci[0]] <= two[cj[0]]:
                order.add((i, j))
    return GreenData(r_classes, l_classes, j_classes, h_classes, frozenset(order))


@dataclass(frozen=True)
class StructuralProfile:
    is_group: bool
    is_aperiodic: bool
    is_j_trivial: bool
    is_semilattice: bool
    is_nilpotent: bool
    is_completely_regular: bool


def structural_predicates(s: FiniteSemigroup) -> StructuralProfile:
    green = green_relations(s)
    idempotents = set(s.idempotents())
    single_h = len(green.h_classes) == 1
    is_group = single_h and bool(idempotents)
    is_aperiodic = all(monogenic_profile(s, x).period == 1 for x in range(s.order))
    is_j_trivial = all(len(c) == 1 for c in green.j_classes)
    is_semilattice = s.is_commutative() and len(idempotents) == s.order
    is_nilpotent = False
    if len(idempotents) == 1:
        z = next(iter(idempotents))
        is_nilpotent = all(s.table[z][x] == z == s.table[x][z] for x in range(s.order))
    is_completely_regular = all(
        any(e in cls for e in idempotents)
        for cls in green.h_classes
    )
    return StructuralProfile(
        is_group=is_group,
        is_aperiodic=is_aperiodic,
        is_j_trivial=is_j_trivial,
        is_semilattice=is_semilattice,
        is_nilpotent=is_nilpotent,
        is_completely_regular=is_completely_regular,
    )


# ---------------------------------------------------------------------------
# closure engine

UnaryRule = Callable[[int], Iterable[int]]


def subsemigroup_closure(s: FiniteSemigroup, seed: Iterable[int],
                         extra_rules: Sequence[UnaryRule] = (),
                         trace: Optional[list] = None) -> frozenset[int]:
    """Least superset of seed closed under the product and the given rules.

    Rules map an element to further elements that must be included.  When
    `trace` is a list, every addition is appended as (new, reason, source).
    """
    closed = set(seed)
    if not closed:
        raise KitError("closure seed must be nonempty")
    work = list(closed)
    while work:
        x = work.pop()
        for y in tuple(closed):
            for reason, z in (("product", s.table[x][y]), ("product", s.table[y][x])):
                if z not in closed:
                    closed.add(z)
                    work.append(z)
                    if trace is not None:
                        trace.append((z, reason, (x, y)))
        for rule_id, rule in enumerate(extra_rules):
            for z in rule(x):
                if z not in closed:
                    closed.add(z)
                    work.append(z)
                    if trace is not None:
                        trace.append((z, f"rule{rule_id}", x))
    return frozenset(closed)


# ---------------------------------------------------------------------------
# exhaustive enumeration of small semigroups


def _search_tables(n: int, fixed_first_row: Optional[tuple[int, ...]] = None) -> list[Table]:
    """Backtracking search for associative n-by-n tables.

    Cells are filled in row-major order; after each assignment only the
    triples that the new cell can complete are rechecked.
    """
    table = [[-1] * n for _ in range(n)]
    rng = range(n)
    out: list[Table] = []

    def consistent(a: int, b: int) -> bool:
        # Check every triple whose evaluation the cell (a, b) may complete:
        # it can appear as (x, y), as (y, z), inside the left side as
        # (x*y, z), or inside the right side as (x, y*z).
        c = table[a][b]
        ta, tb, tc = table[a], table[b], table[c]
        for z in rng:
            bz = tb[z]
            if bz >= 0:
                lhs = tc[z]
                rhs = ta[bz]
                if lhs >= 0 and rhs >= 0 and lhs != rhs:
                    return False
        for x in rng:
            xa = table[x][a]
            if xa >= 0:
                lhs = table[xa][b]
                rhs = table[x][c]
                if lhs >= 0 and rhs >= 0 and lhs != rhs:
                    return False
        for x in rng:
            tx = table[x]
            for y in rng:
                if tx[y] == a:
                    # triple (x, y, b): its left side is the new cell
                    yb = table[y][b]
                    if yb >= 0:
                        rhs = tx[yb]
                        if rhs >= 0 and rhs != c:
                            return False
        for y in rng:
            ty = table[y]
            for z in rng:
                if ty[z] == b:
                    # triple (a, y, z): its right side is the new cell
                    ay = ta[y]
                    if ay >= 0:
                        lhs = table[ay][z]
                        if lhs >= 0 and lhs != c:
                            return False
        return True

    cells = [(i, j) for i in rng for j in rng]
    start = 0
    if fixed_first_row is not None:
        for j, v in enumerate(fixed_first_row):
            table[0][j] = v
            if not consistent(0, j):
                return []
        start = n

    def fill(k: int):
        if k == len(cells):
            out.append(tuple(tuple(row) for row in table))
            return
        i, j = cells[k]
        for v in rng:
            table[i][j] = v
            if consistent(i, j):
                fill(k + 1)
        table[i][j] = -1

    fill(start)
    return out


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        count = int(raw)
    except ValueError:
        raise KitError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
    return max(1, count)


@functools.lru_cache(maxsize=None)
def associative_tables(n: int) -> tuple[Table, ...]:
    """All associative tables on {0..n-1}, in search order."""
    if not 1 <= n <= ENUMERATION_LIMIT:
        raise UnsupportedOrderError(f"enumeration supports orders 1..{ENUMERATION_LIMIT}")
    threads = _thread_count()
    if threads == 1 or n < 3:
        return tuple(_search_tables(n))
    first_rows = list(itertools.product(range(n), repeat=n))
    results: list[Table] = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for chunk in pool.map(functools.partial(_search_tables, n), first_rows):
            results.extend(chunk)
    return tuple(results)


def canonical_form(rows: Sequence[Sequence[int]]) -> Table:
    """Lexicographically least relabeling of the table (isomorphism only)."""
    table = _freeze_table(rows)
    n = len(table)
    best: Optional[Table] = None
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        relabeled = tuple(
            tuple(inv[table[perm[i]][perm[j]]] for j in range(n)) for i in range(n)
        )
        if best is None or relabeled < best:
            best = relabeled
    assert best is not None
    return best


@functools.lru_cache(maxsize=None)
def _canonical_tables(n: int) -> tuple[Table, ...]:
    seen: set[Table] = set()
    ordered: list[Table] = []
    for table in associative_tables(n):
        canon = canonical_form(table)
        if canon not in seen:
            seen.add(canon)
            ordered.append(canon)
    return tuple(ordered)


def enumerate_semigroups(n: int, upto_iso: bool = True) -> Iterator[FiniteSemigroup]:
    """Stream the semigroups of order n, one per isomorphism class by default."""
    tables = _canonical_tables(n) if upto_iso else associative_tables(n)
    for table in tables:
        yield FiniteSemigroup.from_table(table)


def all_semigroups_upto(max_order: int) -> Iterator[FiniteSemigroup]:
    for n in range(1, max_order + 1):
        yield from enumerate_semigroups(n)
