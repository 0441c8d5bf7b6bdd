"""Joint embeddings with union support and their isomorphism types.

A joint embedding of parts (A, Z^1, ..., Z^k) is a tuple of embeddings
into a common structure U whose every vertex lies in some part image.
Its pattern is realized as the canonical code of the mark-expanded
structure: one fresh unary relation per part-coordinate position, so two
joint embeddings share a code exactly when some isomorphism of their
targets commutes with every coordinate map.

Enumeration proceeds by overlap pattern first (which image vertices are
identified), then by relation completion within the age, pruning early
through age membership.  The pattern <-> double-coset correspondence
behind these objects is background only; nothing here depends on it.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from arrowbench.ages import AgeSpec
from arrowbench.errors import InputError, SignatureMismatch
from arrowbench.structures import (
    Embedding,
    Signature,
    Structure,
    canonical_form,
)
from arrowbench.unions import Budget, place_parts

PatternCode = bytes


@dataclass(frozen=True)
class JointEmbedding:
    """Embeddings (a, z1, ..., zk) into one union-supported target."""

    parts: tuple[Embedding, ...]

    def __post_init__(self):
        if not self.parts:
            raise InputError("a joint embedding needs at least one part")
        u = self.parts[0].target
        covered: set[int] = set()
        for e in self.parts:
            if e.target != u:
                raise InputError("joint-embedding parts must share one target")
            covered.update(e.map)
        if covered != set(range(u.size)):
            raise InputError("union-support violation: some target vertex is uncovered")

    @property
    def target(self) -> Structure:
        return self.parts[0].target

    @property
    def maps(self) -> tuple[tuple[int, ...], ...]:
        return tuple(e.map for e in self.parts)


@functools.lru_cache(maxsize=1024)
def marked_signature(base: Signature, shape: tuple[int, ...]) -> Signature:
    """Base signature extended by one unary mark per part coordinate."""
    marks = []
    for p, size in enumerate(shape):
        for i in range(size):
            marks.append((f"@{p}.{i}", 1))
    return Signature(base.symbols + tuple(marks))


def marked_structure(u: Structure, maps) -> Structure:
    """u with every part coordinate recorded as a distinguished unary mark."""
    shape = tuple(len(m) for m in maps)
    sig = marked_signature(u.signature, shape)
    rels = list(u.relations)
    for m in maps:
        for v in m:
            rels.append(((v,),))
    return Structure(sig, u.size, tuple(rels))


def pattern_of(j: JointEmbedding) -> PatternCode:
    """The joint-embedding pattern: canonical code of the marked target."""
    return canonical_form(marked_structure(j.target, j.maps))


def pattern_of_maps(u: Structure, maps) -> PatternCode:
    """pattern_of for raw vertex-map tuples (hot-path form).  The maps
    must cover u; use pair_pattern_code to restrict automatically."""
    covered = set()
    for m in maps:
        covered.update(m)
    if covered != set(range(u.size)):
        raise InputError("union-support violation: some target vertex is uncovered")
    return canonical_form(marked_structure(u, maps))


def pair_pattern_code(u: Structure, map_a, map_z) -> PatternCode:
    """Pattern of the pair (a, z) inside u, restricted to the union of
    the two images (so union support holds by construction)."""
    verts = sorted(set(map_a) | set(map_z))
    rank = {v: i for i, v in enumerate(verts)}
    keep = set(verts)
    rels = []
    for tuples in u.relations:
        rels.append(tuple(tuple(rank[x] for x in t) for t in tuples
                          if all(x in keep for x in t)))
    small = Structure(u.signature, len(verts), tuple(rels))
    return canonical_form(marked_structure(
        small, (tuple(rank[v] for v in map_a), tuple(rank[v] for v in map_z))))


def free_join(parts) -> tuple[Structure, tuple[tuple[int, ...], ...]]:
    """Disjoint union of the parts with no cross tuples, plus the part maps."""
    if not parts:
        raise InputError("free join needs at least one part")
    sig = parts[0].signature
    offset = 0
    rels = [[] for _ in sig.symbols]
    maps = []
    for s in parts:
        if s.signature != sig:
            raise SignatureMismatch("free join needs one common signature")
        maps.append(tuple(range(offset, offset + s.size)))
        for si, tuples in enumerate(s.relations):
            rels[si].extend(tuple(x + offset for x in t) for t in tuples)
        offset += s.size
    u = Structure(sig, offset, tuple(tuple(r) for r in rels))
    return u, tuple(maps)


def iter_joint_embeddings(spec: AgeSpec, a: Structure, zs, max_size: int | None = None,
                          budget: Budget | None = None):
    """Yield (u, maps) for every joint placement of (a, *zs) within the
    age, in deterministic search order, without pattern deduplication."""
    parts = [a, *zs]
    for s in parts:
        if s.signature != spec.signature:
            raise SignatureMismatch("joint embeddings need the age signature")
        if not spec.member(s):
            raise InputError("joint-embedding parts must be members of the age")
    cap = sum(s.size for s in parts)
    if max_size is not None:
        cap = min(cap, max_size)
    yield from place_parts(parts, spec, max_size=cap, budget=budget)


def joint_embeddings(spec: AgeSpec, a: Structure, zs, max_size: int | None = None,
                     candidate_cap: int = 2_000_000) -> list[JointEmbedding]:
    """One joint embedding per pattern, ordered by pattern code."""
    budget = Budget(candidate_cap, "joint_embeddings")
    found: dict[PatternCode, JointEmbedding] = {}
    for u, maps in iter_joint_embeddings(spec, a, zs, max_size, budget):
        code = pattern_of_maps(u, maps)
        if code not in found:
            parts = tuple(Embedding(s, u, m) for s, m in zip([a, *zs], maps))
            found[code] = JointEmbedding(parts)
    return [found[c] for c in sorted(found)]


def pattern_count(spec: AgeSpec, a: Structure, z: Structure,
                  candidate_cap: int = 2_000_000) -> int:
    """Number of joint-embedding patterns of (a, z) within the age; always
    finite here since the union size is capped at |a|+|z|.  Tabulating
    this as |a|, |z| grow probes precompactness behaviour."""
    return len(joint_embeddings(spec, a, (z,), candidate_cap=candidate_cap))
