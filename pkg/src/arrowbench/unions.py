"""Incremental placement of parts into a growing union structure.

This is the engine behind joint-embedding enumeration, amalgamation
probes, union-witness searches and the unstable-sequence search: parts
are embedded one at a time into a host, enumerating first the
identification with existing vertices (the all-fresh placement comes
first, so the free join is the first candidate overall) and then the
relation completion on tuples that touch a fresh vertex, sparsest
completion first.  Every yielded host is a complete structure and a
member of the ambient age, so callers can prune eagerly after each
placement.
"""

from __future__ import annotations

import itertools
import time

from arrowbench.errors import ResourceLimitExceeded
from arrowbench.structures import Structure

_GLOBAL_DEADLINE: float | None = None


def set_time_budget(seconds: float | None) -> None:
    """Process-wide wall-clock cap enforced by every Budget; None clears it."""
    global _GLOBAL_DEADLINE
    _GLOBAL_DEADLINE = None if seconds is None else time.monotonic() + seconds


class Budget:
    """Shared node counter; raises once the cap (or the process-wide time
    budget) is exceeded."""

    def __init__(self, cap: int, what: str = "search"):
        self.cap = cap
        self.used = 0
        self.what = what

    def spend(self, amount: int = 1):
        self.used += amount
        if self.used > self.cap:
            raise ResourceLimitExceeded(
                f"{self.what}: node budget {self.cap} exceeded", budget=self.cap)
        if (_GLOBAL_DEADLINE is not None and self.used % 1024 == 0
                and time.monotonic() > _GLOBAL_DEADLINE):
            raise ResourceLimitExceeded(f"{self.what}: time budget exceeded")


def _pair_states(flags: frozenset):
    """Allowed (forward, backward) membership states of an unordered
    vertex pair under the binary axiom flags, sparsest first."""
    states = []
    for fwd, bwd in ((False, False), (True, False), (False, True), (True, True)):
        if "symmetric" in flags and fwd != bwd:
            continue
        if "antisymmetric" in flags and fwd and bwd:
            continue
        if "total" in flags and not (fwd or bwd):
            continue
        states.append((fwd, bwd))
    return tuple(states)


def place_part(host: Structure | None, part: Structure, spec, forced: dict[int, int] | None = None,
               max_size: int | None = None, budget: Budget | None = None):
    """Yield (extended_host, sigma) for every way to embed `part` into an
    extension of `host` by fresh vertices such that the extension is a
    member of `spec`.

    sigma maps part vertices into the extended host.  `forced` pins part
    vertices to existing host vertices.  Tuples among pre-existing
    vertices are never altered, so earlier placements stay valid.
    """
    sig = part.signature
    if host is None:
        n0 = 0
        host_rels: list[set] = [set() for _ in sig.symbols]
    else:
        n0 = host.size
        host_rels = [set(t) for t in host.relations]
    forced = forced or {}
    flags_by_symbol = (spec.axiom_flags() if spec is not None
                       else [frozenset()] * len(sig.symbols))

    p = part.size
    sigma = [-1] * p
    taken: set[int] = set()
    part_sets = part.rel_sets

    def assignment_ok(k: int, w: int) -> bool:
        # relations among already-assigned part vertices whose images are
        # all pre-existing; tuples touching a fresh image get forced later
        assigned = sorted(j for j in range(p) if sigma[j] >= 0 or j == k)
        for si, ((_, arity), tset) in enumerate(zip(sig.symbols, part_sets)):
            for t in itertools.product(assigned, repeat=arity):
                if k not in t:
                    continue
                img = tuple((sigma[j] if j != k else w) for j in t)
                if any(x >= n0 for x in img):
                    continue
                if (img in host_rels[si]) != (t in tset):
                    return False
        return True

    def candidates(k: int, m: int):
        if k in forced:
            w = forced[k]
            if w < n0 and w not in taken:
                yield w
            return
        if max_size is None or m < max_size:
            yield m  # fresh vertex first
        for w in range(m):
            if w not in taken:
                yield w

    def completions(m: int):
        fresh = set(range(n0, m))
        image = set(sigma)
        base_rels = [set(r) for r in host_rels]
        for si, tuples in enumerate(part.relations):
            for t in tuples:
                img = tuple(sigma[x] for x in t)
                if any(x in fresh for x in img):
                    base_rels[si].add(img)
        free_binary: list[tuple[int, tuple[int, int]]] = []
        free_other: list[tuple[int, tuple[int, ...]]] = []
        for si, (_, arity) in enumerate(sig.symbols):
            if arity == 2:
                seen_pairs = set()
                for f in sorted(fresh):
                    for u in range(m):
                        if u == f:
                            continue
                        pair = (min(f, u), max(f, u))
                        if pair in seen_pairs:
                            continue
                        seen_pairs.add(pair)
                        if f in image and u in image:
                            continue  # inside the part image: forced
                        free_binary.append((si, pair))
            else:
                for t in itertools.product(range(m), repeat=arity):
                    if not any(x in fresh for x in t):
                        continue
                    if all(x in image for x in t):
                        continue
                    free_other.append((si, t))
        free_binary.sort()
        free_other.sort()
        state_menus = [_pair_states(flags_by_symbol[si]) for si, _ in free_binary]

        def rec_other(idx: int, rels):
            if budget is not None:
                budget.spend()
            if idx == len(free_other):
                yield Structure(sig, m, tuple(tuple(sorted(r)) for r in rels))
                return
            si, t = free_other[idx]
            yield from rec_other(idx + 1, rels)  # absent first
            rels[si].add(t)
            yield from rec_other(idx + 1, rels)
            rels[si].remove(t)

        def rec_binary(idx: int, rels):
            if budget is not None:
                budget.spend()
            if idx == len(free_binary):
                yield from rec_other(0, rels)
                return
            si, (x, y) = free_binary[idx]
            for fwd, bwd in state_menus[idx]:
                added = []
                if fwd:
                    rels[si].add((x, y))
                    added.append((x, y))
                if bwd:
                    rels[si].add((y, x))
                    added.append((y, x))
                yield from rec_binary(idx + 1, rels)
                for t in added:
                    rels[si].remove(t)

        yield from rec_binary(0, base_rels)

    def assign(k: int, m: int):
        if budget is not None:
            budget.spend()
        if k == p:
            for cand in completions(m):
                if spec is None or spec.member(cand):
                    yield cand, tuple(sigma)
            return
        for w in candidates(k, m):
            if not assignment_ok(k, w):
                continue
            sigma[k] = w
            taken.add(w)
            yield from assign(k + 1, m + 1 if w == m else m)
            taken.discard(w)
            sigma[k] = -1

    yield from assign(0, n0)


def place_parts(parts, spec, max_size: int | None = None, budget: Budget | None = None,
                base: Structure | None = None, base_maps=()):
    """Yield (host, maps) for every joint placement of all parts, via
    sequential place_part calls with member-pruning after each part."""

    def rec(host, maps):
        if len(maps) == len(parts) + len(base_maps):
            yield host, tuple(maps)
            return
        part = parts[len(maps) - len(base_maps)]
        for h2, sigma in place_part(host, part, spec, None, max_size, budget):
            yield from rec(h2, maps + [sigma])

    yield from rec(base, list(base_maps))
