"""Finite relational structures over vertex sets 0..n-1.

Provides the five base operations everything else is built on: parsing /
serialization of the structure file format, induced substructures,
embedding tests, embedding enumeration, and canonical forms.  Canonical
forms are computed by ordered-partition refinement with backtracking
(individualization-refinement), tie-broken by the lexicographically
least relation encoding, so two structures get equal codes exactly when
they are isomorphic.

All values are immutable after construction and safe to share across
threads; every operation is a pure function.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from arrowbench import kernels
from arrowbench.errors import InputError, ParseError, SignatureMismatch

# A CanonicalCode is an opaque byte string; equal codes <=> isomorphic
# structures (within one signature).
CanonicalCode = bytes

_NAME_RE = re.compile(r"[A-Za-z_@][A-Za-z0-9_@.\-]*")
_TUPLE_RE = re.compile(r"\((\d+(?:,\d+)*)\)")


@dataclass(frozen=True)
class Signature:
    """An ordered list of relation symbols with arities >= 1."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.symbols:
            if not _NAME_RE.fullmatch(name):
                raise InputError(f"invalid relation symbol name {name!r}")
            if name in ("signature", "size"):
                raise InputError(f"{name!r} is reserved by the file format")
            if arity < 1:
                raise InputError(f"arity of {name} must be >= 1, got {arity}")
            if name in seen:
                raise InputError(f"duplicate relation symbol {name!r}")
            seen.add(name)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.symbols):
            if n == name:
                return i
        raise InputError(f"unknown relation symbol {name!r}")

    def arity(self, name: str) -> int:
        return self.symbols[self.index(name)][1]

    @property
    def max_arity(self) -> int:
        return max((a for _, a in self.symbols), default=0)

    def key(self) -> str:
        return " ".join(f"{n}/{a}" for n, a in self.symbols)


@dataclass(frozen=True)
class Structure:
    """A finite relational structure on vertices 0..size-1.

    relations[i] holds the tuple set of signature symbol i, stored as a
    sorted tuple of tuples for deterministic iteration.
    """

    signature: Signature
    size: int
    relations: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.size < 1:
            raise InputError("structures are non-empty: size must be >= 1")
        if len(self.relations) != len(self.signature.symbols):
            raise InputError("relation list does not match signature")
        for (name, arity), tuples in zip(self.signature.symbols, self.relations):
            for t in tuples:
                if len(t) != arity:
                    raise InputError(f"tuple {t} has wrong arity for {name}/{arity}")
                for v in t:
                    if not 0 <= v < self.size:
                        raise InputError(f"vertex {v} out of range in relation {name}")
        # normalize: sorted, deduplicated
        norm = tuple(tuple(sorted(set(tuples))) for tuples in self.relations)
        object.__setattr__(self, "relations", norm)

    @classmethod
    def make(cls, signature: Signature, size: int, rels: dict[str, object]) -> "Structure":
        """Build from a {symbol: iterable of tuples} mapping; missing symbols are empty."""
        table = []
        for name, _ in signature.symbols:
            tuples = rels.get(name, ())
            table.append(tuple(tuple(t) for t in tuples))
        unknown = set(rels) - {n for n, _ in signature.symbols}
        if unknown:
            raise InputError(f"relations for symbols not in signature: {sorted(unknown)}")
        return cls(signature, size, tuple(table))

    def rel(self, name: str) -> tuple[tuple[int, ...], ...]:
        return self.relations[self.signature.index(name)]

    @functools.cached_property
    def rel_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(t) for t in self.relations)

    @functools.cached_property
    def vertices(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class Embedding:
    """An injective vertex map preserving and reflecting every relation."""

    source: Structure
    target: Structure
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if not is_embedding(self.map, self.source, self.target):
            raise InputError(f"map {self.map} is not an embedding")

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(self.map))

    def __call__(self, v: int) -> int:
        return self.map[v]


def compose(outer: Embedding, inner: Embedding) -> Embedding:
    """The composite embedding outer . inner (inner's target is outer's source)."""
    if inner.target is not outer.source and inner.target != outer.source:
        raise InputError("embeddings do not compose: target/source mismatch")
    return Embedding(inner.source, outer.target, tuple(outer.map[v] for v in inner.map))


# ---------------------------------------------------------------------------
# structure file format


def parse_structure(text: str) -> Structure:
    """Parse the line-oriented structure file format.

    Grammar (UTF-8, one item per line, '#' starts a comment line):
        signature: name/arity name/arity ...
        size: n
        name: (v,...) (v,...) ...      # one optional line per symbol
    """
    signature: Signature | None = None
    size: int | None = None
    rel_lines: list[tuple[int, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: value', got {line!r}", line=lineno)
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key == "signature":
            if signature is not None:
                raise ParseError("duplicate signature line", line=lineno)
            symbols = []
            for tok in rest.split():
                if "/" not in tok:
                    raise ParseError(f"signature token {tok!r} must be name/arity", line=lineno,
                                     column=raw.index(tok) + 1)
                name, _, ar = tok.partition("/")
                if not ar.isdigit():
                    raise ParseError(f"arity in {tok!r} must be an integer", line=lineno)
                symbols.append((name, int(ar)))
            try:
                signature = Signature(tuple(symbols))
            except InputError as e:
                raise ParseError(str(e), line=lineno) from None
        elif key == "size":
            if size is not None:
                raise ParseError("duplicate size line", line=lineno)
            if not rest.isdigit():
                raise ParseError(f"size must be a non-negative integer, got {rest!r}", line=lineno)
            size = int(rest)
            if size == 0:
                raise ParseError("size 0 rejected: structures are non-empty", line=lineno)
        else:
            if signature is None:
                raise ParseError("relation line before signature line", line=lineno)
            rel_lines.append((lineno, key, rest))

    if signature is None:
        raise ParseError("missing signature line")
    if size is None:
        raise ParseError("missing size line")

    rels: dict[str, list[tuple[int, ...]]] = {}
    for lineno, name, rest in rel_lines:
        try:
            sym_index = signature.index(name)
        except InputError:
            raise ParseError(f"relation line for unknown symbol {name!r}", line=lineno) from None
        if name in rels:
            raise ParseError(f"duplicate relation line for {name!r}", line=lineno)
        arity = signature.symbols[sym_index][1]
        tuples = []
        col = 0
        for tok in rest.split():
            col = rest.index(tok, col) + 1
            m = _TUPLE_RE.fullmatch(tok)
            if not m:
                raise ParseError(f"bad tuple token {tok!r}", line=lineno, column=col)
            entries = tuple(int(x) for x in m.group(1).split(","))
            if len(entries) != arity:
                raise ParseError(
                    f"tuple {tok} has {len(entries)} entries, {name} has arity {arity}",
                    line=lineno, column=col)
            for v in entries:
                if v >= size:
                    raise ParseError(f"vertex {v} out of range (size {size})",
                                     line=lineno, column=col)
            tuples.append(entries)
        rels[name] = tuples

    return Structure.make(signature, size, rels)


def serialize_structure(s: Structure) -> str:
    """Normalized textual form; parse(serialize(s)) == s bit-exactly."""
    lines = ["signature: " + " ".join(f"{n}/{a}" for n, a in s.signature.symbols)
             if s.signature.symbols else "signature:"]
    lines.append(f"size: {s.size}")
    for (name, _), tuples in zip(s.signature.symbols, s.relations):
        body = " ".join("(" + ",".join(str(v) for v in t) + ")" for t in tuples)
        lines.append(f"{name}: {body}" if body else f"{name}:")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# substructures, embeddings


def induced_substructure(s: Structure, vertices) -> Structure:
    """The substructure induced on the given (nonempty) vertex subset.

    Vertices are re-indexed in increasing order, so the inclusion map is
    the sorted vertex list.
    """
    vs = sorted(set(vertices))
    if not vs:
        raise InputError("empty vertex set rejected")
    for v in vs:
        if not 0 <= v < s.size:
            raise InputError(f"vertex {v} out of range")
    rank = {v: i for i, v in enumerate(vs)}
    keep = set(vs)
    rels = []
    for tuples in s.relations:
        rels.append(tuple(tuple(rank[x] for x in t) for t in tuples if all(x in keep for x in t)))
    return Structure(s.signature, len(vs), tuple(rels))


def inclusion_embedding(s: Structure, vertices) -> Embedding:
    """The inclusion of induced_substructure(s, vertices) back into s."""
    vs = tuple(sorted(set(vertices)))
    return Embedding(induced_substructure(s, vs), s, vs)


def relabel(s: Structure, perm) -> Structure:
    """Apply a vertex permutation (perm[v] = new label of v)."""
    perm = tuple(perm)
    if sorted(perm) != list(range(s.size)):
        raise InputError("relabeling must be a permutation of 0..size-1")
    rels = tuple(tuple(tuple(perm[x] for x in t) for t in tuples) for tuples in s.relations)
    return Structure(s.signature, s.size, rels)


def is_embedding(f, a: Structure, b: Structure) -> bool:
    """True iff f (total on a's vertices) is injective and preserves and
    reflects every relation.  Returns False on any violation, including
    out-of-range images."""
    if a.signature != b.signature:
        return False
    f = tuple(f)
    if len(f) != a.size:
        return False
    if any(not (0 <= v < b.size) for v in f):
        return False
    if len(set(f)) != a.size:
        return False
    image = set(f)
    inv = {v: i for i, v in enumerate(f)}
    for tuples_a, set_a, set_b in zip(a.relations, a.rel_sets, b.rel_sets):
        for t in tuples_a:
            if tuple(f[x] for x in t) not in set_b:
                return False
        for t in set_b:
            if all(x in image for x in t):
                if tuple(inv[x] for x in t) not in set_a:
                    return False
    return True


@functools.lru_cache(maxsize=8192)
def _binary_payload(s: Structure):
    """Labels vector (unary symbols folded into a bitmask) and flattened
    adjacency matrices for the binary symbols, for the fast kernel."""
    labels = [0] * s.size
    adj_blocks = []
    unary_index = 0
    for (_, arity), tuples in zip(s.signature.symbols, s.relations):
        if arity == 1:
            bit = 1 << unary_index
            unary_index += 1
            for (v,) in tuples:
                labels[v] |= bit
        elif arity == 2:
            m = bytearray(s.size * s.size)
            for (u, v) in tuples:
                m[u * s.size + v] = 1
            adj_blocks.append(bytes(m))
    return tuple(labels), len(adj_blocks), b"".join(adj_blocks)


@functools.lru_cache(maxsize=8192)
def _generic_plan(a: Structure):
    """Per-level membership checks for the generic kernel: for source
    vertex i, every tuple over 0..i containing i with its required
    membership bit."""
    import itertools

    levels = []
    for i in range(a.size):
        checks = []
        for si, ((_, arity), tset) in enumerate(zip(a.signature.symbols, a.rel_sets)):
            for t in itertools.product(range(i + 1), repeat=arity):
                if i in t:
                    checks.append((si, t, t in tset))
            # order: forced-present first is irrelevant; keep generation order
        levels.append(tuple(checks))
    return tuple(levels)


def _embedding_maps(a: Structure, b: Structure, first_only: bool = False) -> list[tuple[int, ...]]:
    """Raw embedding maps (tuples), lexicographic order."""
    if a.signature != b.signature:
        raise SignatureMismatch(
            f"signature mismatch: {a.signature.key()!r} vs {b.signature.key()!r}")
    if a.size > b.size:
        return []
    if a.signature.max_arity <= 2:
        labels_a, n_adj, a_flat = _binary_payload(a)
        labels_b, _, b_flat = _binary_payload(b)
        return kernels.embeddings_binary(
            a.size, b.size, labels_a, labels_b, n_adj, a_flat, b_flat, first_only)
    return kernels.embeddings_generic(
        a.size, b.size, _generic_plan(a), b.rel_sets, first_only)


def embeddings(a: Structure, b: Structure) -> list[Embedding]:
    """All embeddings of a into b, lexicographic on the map tuple."""
    return [Embedding(a, b, m) for m in _embedding_maps(a, b)]


def embedding_maps(a: Structure, b: Structure) -> list[tuple[int, ...]]:
    """Like embeddings() but returning raw map tuples (hot-path form)."""
    return _embedding_maps(a, b)


def has_embedding(a: Structure, b: Structure) -> bool:
    return bool(_embedding_maps(a, b, first_only=True))


# ---------------------------------------------------------------------------
# canonical forms


def _encode_labeled(sig_key: str, size: int, relations) -> bytes:
    parts = [sig_key, str(size)]
    for tuples in relations:
        parts.append(" ".join(",".join(str(v) for v in t) for t in sorted(tuples)))
    return "|".join(parts).encode()


def _refine(n: int, occurrences, colors: list[int]) -> list[int]:
    """Stable ordered-partition refinement.

    occurrences[v] lists (symbol, positions-of-v, tuple) for every
    relation tuple containing v; the tuple's color profile is recomputed
    each round.  Cell order is derived from sorted invariant keys, which
    are label-free, so the ordering is isomorphism-invariant.
    """
    while True:
        keys = []
        for v in range(n):
            inv = sorted(
                (si, occ, tuple(colors[x] for x in t)) for si, occ, t in occurrences[v]
            )
            keys.append((colors[v], inv))
        order = sorted(set(map(_freeze_key, keys)))
        rank = {k: i for i, k in enumerate(order)}
        new_colors = [rank[_freeze_key(k)] for k in keys]
        if len(order) == len(set(colors)):
            return new_colors
        colors = new_colors


def _freeze_key(key):
    c, inv = key
    return (c, tuple(inv))


def _occurrence_table(s: Structure):
    occ = [[] for _ in range(s.size)]
    for si, tuples in enumerate(s.relations):
        for t in tuples:
            for v in set(t):
                positions = tuple(i for i, x in enumerate(t) if x == v)
                occ[v].append((si, positions, t))
    return occ


def _cells_of(colors: list[int]) -> list[list[int]]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def _product_complete(s: Structure, colors: list[int]) -> bool:
    """True when every relation is a union of complete color-class
    products, in which case any within-cell vertex order yields the same
    canonical encoding and the branching phase can be skipped."""
    sizes: dict[int, int] = {}
    for c in colors:
        sizes[c] = sizes.get(c, 0) + 1
    for tuples in s.relations:
        by_profile: dict[tuple, int] = {}
        for t in tuples:
            prof = tuple(colors[x] for x in t)
            by_profile[prof] = by_profile.get(prof, 0) + 1
        for prof, count in by_profile.items():
            expect = 1
            # distinct vertices only: tuples may repeat a vertex, so the
            # full product formula must count repeats too; a profile is
            # "complete" when every vertex tuple with that color profile
            # is present.
            for c in prof:
                expect *= sizes[c]
            # subtract nothing: A^m tuples with repeats are legal members
            if count != expect:
                return False
    return True


def _canonical_search(s: Structure, sig_key: str):
    occurrences = _occurrence_table(s)
    n = s.size
    best: list = [None, None]  # encoding, perm

    def leaf(colors):
        perm = tuple(colors)
        enc = _encode_labeled(
            sig_key, n,
            [[tuple(perm[x] for x in t) for t in tuples] for tuples in s.relations])
        if best[0] is None or enc < best[0]:
            best[0], best[1] = enc, perm

    def descend(colors):
        cells = _cells_of(colors)
        if all(len(c) == 1 for c in cells):
            leaf(colors)
            return
        if _product_complete(s, colors):
            # any discrete refinement of the cell order gives the same code
            flat = [0] * n
            label = 0
            for cell in cells:
                for v in cell:
                    flat[v] = label
                    label += 1
            leaf(flat)
            return
        target = next(c for c in cells if len(c) > 1)
        for v in target:
            branched = [(c, 1) for c in colors]
            branched[v] = (colors[v], 0)
            order = sorted(set(branched))
            rank = {k: i for i, k in enumerate(order)}
            descend(_refine(n, occurrences, [rank[k] for k in branched]))

    descend(_refine(n, occurrences, [0] * n))
    return best[0], best[1]


_CANON_CACHE: dict[bytes, tuple[bytes, tuple[int, ...]]] = {}
_CANON_CACHE_MAX = 1 << 17


def canonical_labeling(s: Structure) -> tuple[CanonicalCode, tuple[int, ...]]:
    """Canonical code plus one labeling realizing it (perm[v] = new label)."""
    raw = _encode_labeled(s.signature.key(), s.size, s.relations)
    hit = _CANON_CACHE.get(raw)
    if hit is not None:
        return hit
    code, perm = _canonical_search(s, s.signature.key())
    if len(_CANON_CACHE) >= _CANON_CACHE_MAX:
        _CANON_CACHE.clear()
    _CANON_CACHE[raw] = (code, perm)
    return code, perm


def canonical_form(s: Structure) -> CanonicalCode:
    """Opaque code equal across structures iff they are isomorphic
    (within one signature); stable across runs."""
    return canonical_labeling(s)[0]


def canonical_representative(s: Structure) -> Structure:
    """The canonically relabeled copy of s (code-minimal labeling)."""
    _, perm = canonical_labeling(s)
    return relabel(s, perm)


def code_digest(code: CanonicalCode) -> str:
    """Short stable hex digest of a canonical code, for display."""
    import hashlib

    return hashlib.sha256(code).hexdigest()[:16]


def are_isomorphic(a: Structure, b: Structure) -> bool:
    if a.signature != b.signature or a.size != b.size:
        return False
    return canonical_form(a) == canonical_form(b)
