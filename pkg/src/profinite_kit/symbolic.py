"""Substitutions, sofic shifts, irreducibility and entropy.

A shift is handled through the deterministic automaton of a candidate
block language: the largest factorial sublanguage is carved out with a
suffix-tracking subset construction, then states off biinfinite paths
are discarded.  What remains is a presentation whose path language is
exactly the block language of the shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import KitError, NonPrimitiveError, NotASubshiftError
from .languages import Dfa, minimize_dfa

# ---------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class Substitution:
    """Endomorphism of A+ determined by nonempty letter images."""

    alphabet: tuple[str, ...]
    images: tuple[str, ...]

    def __post_init__(self):
        if len(self.alphabet) != len(self.images) or not self.alphabet:
            raise KitError("substitution needs one image per letter")
        for w in self.images:
            if not w or any(ch not in self.alphabet for ch in w):
                raise KitError(f"image {w!r} is empty or uses foreign letters")

    def image_of(self, ch: str) -> str:
        return self.images[self.alphabet.index(ch)]

    def apply(self, word: str) -> str:
        return "".join(self.image_of(ch) for ch in word)

    def incidence_matrix(self) -> np.ndarray:
        """M[b][a] counts occurrences of letter b in the image of a."""
        k = len(self.alphabet)
        m = np.zeros((k, k), dtype=np.int64)
        for a, image in enumerate(self.images):
            for ch in image:
                m[self.alphabet.index(ch)][a] += 1
        return m


def parse_substitution(text: str) -> Substitution:
    """Format: 'a->ab; b->ba' (letters single alphanumerics)."""
    letters = []
    images = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise KitError(f"substitution rule {part!r} lacks '->'")
        lhs, rhs = (side.strip() for side in part.split("->", 1))
        if len(lhs) != 1 or not lhs.isalnum():
            raise KitError(f"rule source must be a single letter, got {lhs!r}")
        if lhs in letters:
            raise KitError(f"duplicate rule for letter {lhs!r}")
        letters.append(lhs)
        images.append(rhs)
    return Substitution(alphabet=tuple(letters), images=tuple(images))


def wielandt_bound(k: int) -> int:
    return (k - 1) ** 2 + 1


def is_primitive(s: Substitution) -> bool:
    """Primitivity through the incidence matrix at the Wielandt exponent."""
    booleanized = (s.incidence_matrix() > 0).astype(np.int64)
    power = np.eye(len(s.alphabet), dtype=np.int64)
    for _ in range(wielandt_bound(len(s.alphabet))):
        power = ((power @ booleanized) > 0).astype(np.int64)
    return bool((power > 0).all())


def is_primitive_by_definition(s: Substitution) -> bool:
    """Direct check that some iterate writes every letter into every image."""
    k = len(s.alphabet)
    one_step = [frozenset(img) for img in s.images]
    occurs = list(one_step)
    for _ in range(wielandt_bound(k) - 1):
        if all(len(o) == k for o in occurs):
            return True
        occurs = [
            frozenset(ch for b in occ for ch in one_step[s.alphabet.index(b)])
            for occ in occurs
        ]
    return all(len(o) == k for o in occurs)


def substitution_blocks(s: Substitution, n: int) -> frozenset[str]:
    """All length-n blocks of the subshift of a primitive substitution.

    Iterates the substitution from every letter and accumulates length-n
    factors until the set is stable for two successive rounds, which is
    sound here because the accumulated sets grow monotonically toward
    the finite block set.
    """
    if n < 1:
        raise KitError("block length must be positive")
    if not is_primitive(s):
        raise NonPrimitiveError("block extraction requires a primitive substitution")
    words = list(s.images)
    blocks: set[str] = set()
    stable_rounds = 0
    while stable_rounds < 2:
        words = [s.apply(w) for w in words]
        before = len(blocks)
        for w in words:
            for i in range(len(w) - n + 1):
                blocks.add(w[i:i + n])
        if len(blocks) == before and all(len(w) >= n for w in words):
            stable_rounds += 1
        else:
            stable_rounds = 0
    return frozenset(blocks)


# ---------------------------------------------------------------------------
# sofic shifts


@dataclass(frozen=True)
class SoficShift:
    """A sofic shift given by its trimmed block presentation.

    `nodes` and `edges` form the graph whose path labels are exactly the
    blocks; `block_dfa` is its determinization (complete, with a sink),
    used for exact block counting; `presentation` is the input automaton.
    """

    alphabet: tuple[str, ...]
    presentation: Dfa
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, str, int], ...]
    block_dfa: Dfa

    def block_count(self, n: int) -> int:
        counts = [0] * self.block_dfa.n_states
        counts[self.block_dfa.initial] = 1
        for _ in range(n):
            nxt = [0] * self.block_dfa.n_states
            for state, c in enumerate(counts):
                if c:
                    for a in range(len(self.alphabet)):
                        nxt[self.block_dfa.transition[state][a]] += c
            counts = nxt
        return sum(c for state, c in enumerate(counts)
                   if c and state in self.block_dfa.finals)

    def blocks(self, n: int) -> frozenset[str]:
        out = []
        frontier: list[tuple[int, str]] = [(self.block_dfa.initial, "")]
        for _ in range(n):
            nxt = []
            for state, word in frontier:
                for a, ch in enumerate(self.alphabet):
                    t = self.block_dfa.transition[state][a]
                    if t in self.block_dfa.finals:
                        nxt.append((t, word + ch))
            frontier = nxt
        return frozenset(word for _, word in frontier)

    def is_block(self, word: str) -> bool:
        if not word:
            return False
        state = self.block_dfa.initial
        for ch in word:
            state = self.block_dfa.step(state, ch)
        return state in self.block_dfa.finals


def _suffix_graph(dfa: Dfa):
    """Deterministic graph of the largest factorial sublanguage.

    A node is the set of states reached by running every suffix of the
    word read so far from the initial state; a letter move survives only
    when all extended suffixes stay accepting, i.e. every factor ending
    at the new position belongs to the language.
    """
    start = frozenset([dfa.initial])
    nodes = {start: 0}
    order = [start]
    edges: dict[int, dict[str, int]] = {}
    k = 0
    while k < len(order):
        current = order[k]
        edges[k] = {}
        for a, ch in enumerate(dfa.alphabet):
            stepped = frozenset(dfa.transition[s][a] for s in current)
            if not stepped <= dfa.finals:
                continue
            nxt = stepped | {dfa.initial}
            if nxt not in nodes:
                nodes[nxt] = len(order)
                order.append(nxt)
            edges[k][ch] = nodes[nxt]
        k += 1
    return order, edges


def _biinfinite_trim(n_nodes: int, edges: dict[int, dict[str, int]]) -> set[int]:
    live = set(range(n_nodes))
    changed = True
    while changed:
        changed = False
        incoming = {q for p in live for q in edges[p].values() if q in live}
        for p in tuple(live):
            has_out = any(q in live for q in edges[p].values())
            if not has_out or p not in incoming:
                live.discard(p)
                changed = True
    return live


def _determinize_graph(alphabet: Sequence[str], starts: frozenset[int],
                       edges: dict[int, dict[str, int]],
                       live: set[int]) -> Dfa:
    """Subset construction over the multi-start path graph; sink completes."""
    start = frozenset(s for s in starts if s in live)
    nodes = {start: 0}
    order = [start]
    rows = []
    k = 0
    while k < len(order):
        current = order[k]
        row = []
        for ch in alphabet:
            stepped = frozenset(
                edges[p][ch] for p in current
                if ch in edges[p] and edges[p][ch] in live)
            if stepped not in nodes:
                nodes[stepped] = len(order)
                order.append(stepped)
            row.append(nodes[stepped])
        rows.append(row)
        k += 1
    finals = frozenset(i for i, ss in enumerate(order) if ss)
    return Dfa(n_states=len(order), alphabet=tuple(alphabet),
               transition=tuple(tuple(r) for r in rows), initial=0, finals=finals)


def factorial_trim(dfa: Dfa) -> SoficShift:
    """Extract the sofic shift presented by a candidate block language."""
    dfa = minimize_dfa(dfa)
    order, edges = _suffix_graph(dfa)
    live = _biinfinite_trim(len(order), edges)
    if not live:
        raise NotASubshiftError("no biinfinite paths: the language presents no subshift")
    node_ids = tuple(sorted(live))
    edge_list = tuple(sorted(
        (p, ch, q) for p in node_ids for ch, q in edges[p].items() if q in live))
    block_dfa = _determinize_graph(dfa.alphabet, frozenset(live), edges, live)
    return SoficShift(
        alphabet=dfa.alphabet,
        presentation=dfa,
        nodes=node_ids,
        edges=edge_list,
        block_dfa=block_dfa,
    )


def _strongly_connected_components(nodes: Iterable[int],
                                   succ: dict[int, set[int]]) -> list[set[int]]:
    # Kosaraju on the small presentation graphs handled here
    nodes = list(nodes)
    pred: dict[int, set[int]] = {p: set() for p in nodes}
    for p in nodes:
        for q in succ[p]:
            pred[q].add(p)
    seen: set[int] = set()
    post: list[int] = []
    for root in nodes:
        if root in seen:
            continue
        stack = [(root, iter(sorted(succ[root])))]
        seen.add(root)
        while stack:
            node, it = stack[-1]
            advanced = False
            for q in it:
                if q not in seen:
                    seen.add(q)
                    stack.append((q, iter(sorted(succ[q]))))
                    advanced = True
                    break
            if not advanced:
                post.append(node)
                stack.pop()
    components = []
    assigned: set[int] = set()
    for root in reversed(post):
        if root in assigned:
            continue
        comp = {root}
        stack = [root]
        assigned.add(root)
        while stack:
            node = stack.pop()
            for q in pred[node]:
                if q not in assigned:
                    assigned.add(q)
                    comp.add(q)
                    stack.append(q)
        components.append(comp)
    return components


def is_irreducible(shift: SoficShift) -> bool:
    """Does one strongly connected component carry the whole block language?

    Strong connectivity of the trimmed presentation suffices, but shifts
    with transient presentation states (such as the even shift) need the
    weaker test that some component's path language covers every block.
    """
    succ: dict[int, set[int]] = {p: set() for p in shift.nodes}
    for p, _ch, q in shift.edges:
        succ[p].add(q)
    components = _strongly_connected_components(shift.nodes, succ)
    if len(components) == 1:
        return True
    edges_by_node: dict[int, dict[str, int]] = {p: {} for p in shift.nodes}
    for p, ch, q in shift.edges:
        edges_by_node[p][ch] = q
    for comp in components:
        comp_dfa = _determinize_graph(
            shift.alphabet, frozenset(comp), edges_by_node, comp)
        if _covers(shift.block_dfa, comp_dfa):
            return True
    return False


def _covers(block_dfa: Dfa, candidate: Dfa) -> bool:
    """Is every word of block_dfa accepted by candidate (both factorial)?"""
    seen = {(block_dfa.initial, candidate.initial)}
    stack = [(block_dfa.initial, candidate.initial)]
    while stack:
        p, q = stack.pop()
        for a in range(len(block_dfa.alphabet)):
            p2 = block_dfa.transition[p][a]
            q2 = candidate.transition[q][a]
            if p2 not in block_dfa.finals:
                continue
            if q2 not in candidate.finals:
                return False
            if (p2, q2) not in seen:
                seen.add((p2, q2))
                stack.append((p2, q2))
    return True


def entropy(shift: SoficShift) -> float:
    """log2 of the spectral radius of the deterministic presentation."""
    live = sorted(shift.block_dfa.finals)
    index = {s: i for i, s in enumerate(live)}
    size = len(live)
    adjacency = np.zeros((size, size), dtype=np.float64)
    for s in live:
        for a in range(len(shift.alphabet)):
            t = shift.block_dfa.transition[s][a]
            if t in index:
                adjacency[index[s]][index[t]] += 1.0
    radius = max(abs(np.linalg.eigvals(adjacency)))
    return float(np.log2(radius))


def forbid_factor(shift: SoficShift, factor: str) -> SoficShift:
    """The subshift of all points of `shift` avoiding the given factor."""
    if not factor:
        raise KitError("the forbidden factor must be nonempty")
    base = shift.block_dfa
    # product with the automaton tracking the longest suffix matching a
    # prefix of the factor; hitting the full factor is fatal
    def advance(matched: int, ch: str) -> int:
        candidate = factor[:matched] + ch
        while candidate:
            if factor.startswith(candidate):
                return len(candidate)
            candidate = candidate[1:]
        return 0

    states: dict[tuple[int, int], int] = {(base.initial, 0): 0}
    order = [(base.initial, 0)]
    rows: list[list[int]] = []
    sink: Optional[int] = None
    k = 0
    while k < len(order):
        state, matched = order[k]
        row = []
        for a, ch in enumerate(base.alphabet):
            t = base.transition[state][a]
            m2 = advance(matched, ch)
            if t not in base.finals or m2 == len(factor):
                key = (-1, -1)  # joint sink
            else:
                key = (t, m2)
            if key not in states:
                states[key] = len(order)
                order.append(key)
            row.append(states[key])
        rows.append(row)
        k += 1
    finals = frozenset(i for i, key in enumerate(order) if key != (-1, -1))
    pruned = Dfa(n_states=len(order), alphabet=base.alphabet,
                 transition=tuple(tuple(r) for r in rows), initial=0, finals=finals)
    return factorial_trim(pruned)
