"""Shared builders and brute-force oracles for the test suite.

The oracles here intentionally avoid the package's search paths: embedding
enumeration filters raw injections, isomorphism tries every bijection, and
structure counting enumerates all labeled structures before deduplicating.
"""

import itertools
import random

from arrowbench.structures import Signature, Structure, is_embedding

GRAPH_SIG = Signature((("edge", 2),))
ORDER_SIG = Signature((("lt", 2),))
SET_SIG = Signature(())


def graph(n, edges):
    both = [(u, v) for u, v in edges] + [(v, u) for u, v in edges]
    return Structure.make(GRAPH_SIG, n, {"edge": both})


def chain(n):
    return Structure.make(ORDER_SIG, n, {"lt": [(u, v) for u in range(n)
                                                for v in range(u + 1, n)]})


def pure_set(n):
    return Structure(SET_SIG, n, ())


def k_graph(n):
    return graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path(n):
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def brute_embeddings(a, b):
    """Oracle: filter every injection for the embedding property."""
    return [f for f in itertools.permutations(range(b.size), a.size)
            if is_embedding(f, a, b)]


def brute_isomorphic(a, b):
    """Oracle: try every bijection."""
    if a.signature != b.signature or a.size != b.size:
        return False
    return any(is_embedding(f, a, b) for f in itertools.permutations(range(a.size)))


def random_structure(rng: random.Random, max_size=6, signature=None):
    if signature is None:
        signature = Signature((("e", 2), ("u", 1)))
    n = rng.randint(1, max_size)
    rels = {}
    for name, arity in signature.symbols:
        tuples = []
        for t in itertools.product(range(n), repeat=arity):
            if rng.random() < 0.35:
                tuples.append(t)
        rels[name] = tuples
    return Structure.make(signature, n, rels)


def random_permutation(rng: random.Random, n):
    perm = list(range(n))
    rng.shuffle(perm)
    return tuple(perm)
