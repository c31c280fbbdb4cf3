"""Shared helpers: deterministic corpora of words, regexes and automata."""

import itertools
import random

from profinite_kit import languages
from profinite_kit.freegroup import GroupAutomaton, inverse_letter, reduce_word


def words_upto(alphabet, max_len, min_len=0):
    for n in range(min_len, max_len + 1):
        for tup in itertools.product(alphabet, repeat=n):
            yield "".join(tup)


def reduced_words_upto(alphabet, max_len):
    letters = [(ch, s) for ch in alphabet for s in (1, -1)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == inverse_letter(x):
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        frontier = nxt
    return out


def random_regex(rng, size, alphabet="ab"):
    if size <= 1:
        roll = rng.random()
        if roll < 0.80:
            return languages.Letter(rng.choice(alphabet))
        if roll < 0.90:
            return languages.Epsilon()
        return languages.Empty()
    roll = rng.random()
    if roll < 0.35:
        split = rng.randint(1, size - 1)
        return languages.Union(random_regex(rng, split, alphabet),
                               random_regex(rng, size - split, alphabet))
    if roll < 0.70:
        split = rng.randint(1, size - 1)
        return languages.Concat(random_regex(rng, split, alphabet),
                                random_regex(rng, size - split, alphabet))
    if roll < 0.85:
        return languages.Star(random_regex(rng, size - 1, alphabet))
    return languages.Plus(random_regex(rng, size - 1, alphabet))


def regex_corpus(count, seed=20240501, alphabet="ab", max_size=8):
    """Random regexes seeded deterministically, plus a few group languages."""
    rng = random.Random(seed)
    curated = ["(a|b)+", "((a|b)(a|b))+", "(ab)+", "(aa)*", "a+"]
    out = [languages.parse_regex(text, alphabet) for text in curated]
    while len(out) < count:
        out.append(random_regex(rng, rng.randint(1, max_size), alphabet))
    return out[:count]


def random_group_word(rng, alphabet, max_len, min_len=0):
    length = rng.randint(min_len, max_len)
    return reduce_word(
        [(rng.choice(alphabet), rng.choice((1, -1))) for _ in range(length)])


def random_group_automaton(rng, max_states=4, max_edges=6, alphabet="ab"):
    n = rng.randint(1, max_states)
    edges = set()
    for _ in range(rng.randint(1, max_edges)):
        p, q = rng.randrange(n), rng.randrange(n)
        edges.add((p, (rng.choice(alphabet), rng.choice((1, -1))), q))
    initials = frozenset(rng.sample(range(n), rng.randint(1, n)))
    finals = frozenset(rng.sample(range(n), rng.randint(1, n)))
    return GroupAutomaton(alphabet=tuple(sorted(alphabet)), n_states=n,
                          edges=frozenset(edges), initials=initials, finals=finals)


def subgroup_ball(gens, radius):
    """All subgroup elements reachable by products that stay within radius."""
    seeds = set()
    for g in gens:
        g = reduce_word(g)
        if g:
            seeds.add(g)
            seeds.add(tuple((ch, -s) for ch, s in reversed(g)))
    ball = {()} | {g for g in seeds if len(g) <= radius}
    frontier = set(ball)
    while frontier:
        fresh = set()
        for u in frontier:
            for g in seeds:
                w = reduce_word(u + g)
                if len(w) <= radius and w not in ball:
                    fresh.add(w)
        ball |= fresh
        frontier = fresh
    return ball
