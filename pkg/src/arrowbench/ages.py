"""Hereditary families of finite structures (ages).

An age is specified by a signature, per-symbol axiom flags on the binary
symbols (irreflexive / symmetric / antisymmetric / total / transitive)
and a finite list of forbidden induced substructures.  A small built-in
catalog covers the running examples: pure sets, graphs, K_n-free graphs,
linear orders, tournaments and digraphs.

Enumeration up to isomorphism uses orderly generation: canonical
representatives are extended by one vertex and an extension is kept only
when removing its canonically-last vertex returns to the parent, so each
isomorphism type is produced exactly once without a global seen-set.

Amalgamation probes are bounded searches, never claims about the whole
age: a positive report only says "no failure up to this size bound", and
the completion search is capped at |B|+|C| vertices, which the report
records rather than asserts to be complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from arrowbench.errors import InputError, ParseError, SignatureMismatch
from arrowbench.structures import (
    Signature,
    Structure,
    canonical_form,
    canonical_labeling,
    canonical_representative,
    embedding_maps,
    has_embedding,
    induced_substructure,
    parse_structure,
    relabel,
)

AXIOM_FLAGS = ("irreflexive", "symmetric", "antisymmetric", "total", "transitive")


@dataclass(frozen=True)
class AgeSpec:
    """A hereditary class given by signature + axioms + forbidden substructures."""

    signature: Signature
    axioms: tuple[tuple[str, frozenset], ...] = ()
    forbidden: tuple[Structure, ...] = ()
    name: str | None = None

    def __post_init__(self):
        names = {n for n, _ in self.signature.symbols}
        for sym, flags in self.axioms:
            if sym not in names:
                raise InputError(f"axioms for unknown symbol {sym!r}")
            if self.signature.arity(sym) != 2 and flags:
                raise InputError(f"axiom flags only apply to binary symbols, not {sym!r}")
            for f in flags:
                if f not in AXIOM_FLAGS:
                    raise InputError(f"unknown axiom flag {f!r}")
            if {"symmetric", "antisymmetric", "total"} <= flags:
                raise InputError(
                    f"inconsistent flags on {sym!r}: symmetric+antisymmetric+total "
                    "is unsatisfiable on two or more vertices")
        for s in self.forbidden:
            if s.signature != self.signature:
                raise SignatureMismatch("forbidden structures must share the age signature")

    def flags_of(self, symbol: str) -> frozenset:
        for sym, flags in self.axioms:
            if sym == symbol:
                return flags
        return frozenset()

    def axiom_flags(self) -> list[frozenset]:
        """Flags aligned with signature symbol order."""
        return [self.flags_of(n) for n, _ in self.signature.symbols]

    def member(self, s: Structure) -> bool:
        return member(self, s)

    def describe(self) -> str:
        if self.name:
            return self.name
        parts = [self.signature.key() or "(empty signature)"]
        for sym, flags in self.axioms:
            if flags:
                parts.append(f"{sym}[{','.join(sorted(flags))}]")
        if self.forbidden:
            parts.append(f"{len(self.forbidden)} forbidden")
        return "; ".join(parts)


def _satisfies_axioms(spec: AgeSpec, s: Structure) -> bool:
    for (name, arity), tuples in zip(s.signature.symbols, s.relations):
        if arity != 2:
            continue
        flags = spec.flags_of(name)
        if not flags:
            continue
        tset = set(tuples)
        if "irreflexive" in flags and any(u == v for u, v in tset):
            return False
        if "symmetric" in flags and any((v, u) not in tset for u, v in tset):
            return False
        if "antisymmetric" in flags and any(u != v and (v, u) in tset for u, v in tset):
            return False
        if "total" in flags:
            for u in range(s.size):
                for v in range(u + 1, s.size):
                    if (u, v) not in tset and (v, u) not in tset:
                        return False
        if "transitive" in flags:
            for (u, v) in tset:
                for (v2, w) in tset:
                    if v2 == v and (u, w) not in tset:
                        return False
    return True


def member(spec: AgeSpec, s: Structure) -> bool:
    """True iff s satisfies all axiom flags and embeds no forbidden structure."""
    if s.signature != spec.signature:
        raise SignatureMismatch("member() needs the age signature")
    if not _satisfies_axioms(spec, s):
        return False
    for bad in spec.forbidden:
        if bad.size <= s.size and has_embedding(bad, s):
            return False
    return True


# ---------------------------------------------------------------------------
# built-in catalog


def _graph_signature() -> Signature:
    return Signature((("edge", 2),))


def complete_graph(n: int) -> Structure:
    sig = _graph_signature()
    edges = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Structure.make(sig, n, {"edge": edges})


def chain(n: int) -> Structure:
    """The n-element linear order 0 < 1 < ... < n-1."""
    sig = Signature((("lt", 2),))
    return Structure.make(sig, n, {"lt": [(u, v) for u in range(n) for v in range(u + 1, n)]})


def pure_set(n: int) -> Structure:
    return Structure(Signature(()), n, ())


def catalog_age(name: str) -> AgeSpec:
    """Built-in ages: set, graph, graph_kfree:N, linear_order, tournament, digraph."""
    if name == "set":
        return AgeSpec(Signature(()), (), (), name="set")
    if name == "graph":
        return AgeSpec(_graph_signature(),
                       (("edge", frozenset({"irreflexive", "symmetric"})),),
                       (), name="graph")
    if name.startswith("graph_kfree:"):
        k = name.split(":", 1)[1]
        if not k.isdigit() or int(k) < 3:
            raise InputError("graph_kfree:N needs N >= 3")
        return AgeSpec(_graph_signature(),
                       (("edge", frozenset({"irreflexive", "symmetric"})),),
                       (complete_graph(int(k)),), name=name)
    if name == "linear_order":
        return AgeSpec(Signature((("lt", 2),)),
                       (("lt", frozenset({"irreflexive", "antisymmetric", "total",
                                          "transitive"})),),
                       (), name="linear_order")
    if name == "tournament":
        return AgeSpec(Signature((("arc", 2),)),
                       (("arc", frozenset({"irreflexive", "antisymmetric", "total"})),),
                       (), name="tournament")
    if name == "digraph":
        return AgeSpec(Signature((("arc", 2),)),
                       (("arc", frozenset({"irreflexive"})),),
                       (), name="digraph")
    raise InputError(f"unknown catalog age {name!r}")


def load_age(source: str, read_file=None) -> AgeSpec:
    """Resolve an --age argument: a catalog name, or a path to an age file.

    Age file format: either a single `age: <catalog-name>` line, or
    `signature:` / `axioms: <symbol> <flag>...` / `forbidden: <paths>` /
    `name:` lines.  read_file(path) -> text is injectable for tests.
    """
    import os

    if read_file is None:
        def read_file(path):
            with open(path, "r", encoding="utf-8") as fh:
                return fh.read()

    try:
        return catalog_age(source)
    except InputError:
        pass
    if not os.path.exists(source):
        raise InputError(f"--age {source!r}: not a catalog name and not a file")
    text = read_file(source)
    base = os.path.dirname(os.path.abspath(source))

    signature: Signature | None = None
    axioms: list[tuple[str, frozenset]] = []
    forbidden: list[Structure] = []
    name: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if key == "age":
            return catalog_age(rest)
        if key == "signature":
            toks = []
            for tok in rest.split():
                nm, _, ar = tok.partition("/")
                if not ar.isdigit():
                    raise ParseError(f"bad signature token {tok!r}", line=lineno)
                toks.append((nm, int(ar)))
            signature = Signature(tuple(toks))
        elif key == "axioms":
            toks = rest.split()
            if not toks:
                raise ParseError("axioms line needs a symbol", line=lineno)
            axioms.append((toks[0], frozenset(toks[1:])))
        elif key == "forbidden":
            for path in rest.split():
                full = path if os.path.isabs(path) else os.path.join(base, path)
                forbidden.append(parse_structure(read_file(full)))
        elif key == "name":
            name = rest
        else:
            raise ParseError(f"unknown age-file key {key!r}", line=lineno)
    if signature is None:
        raise ParseError("age file needs a signature line (or an age: line)")
    return AgeSpec(signature, tuple(axioms), tuple(forbidden), name=name)


# ---------------------------------------------------------------------------
# enumeration up to isomorphism


def _single_vertex_members(spec: AgeSpec) -> list[Structure]:
    sig = spec.signature
    out = []
    options = []
    for _, arity in sig.symbols:
        options.append(((), ((0,) * arity,)))
    for choice in itertools.product(*options) if options else [()]:
        rels = tuple(tuple(c) for c in choice)
        s = Structure(sig, 1, rels)
        if member(spec, s):
            out.append(canonical_representative(s))
    dedup = {canonical_form(s): s for s in out}
    return [dedup[c] for c in sorted(dedup)]


def _extensions(spec: AgeSpec, parent: Structure, budget) -> list[Structure]:
    """All age members obtained from parent by adding vertex n (one per
    completion of the tuples touching the new vertex)."""
    from arrowbench.unions import _pair_states

    sig = spec.signature
    n = parent.size
    m = n + 1
    new = n
    base_rels = [set(t) for t in parent.relations]
    flags = spec.axiom_flags()

    free_binary: list[tuple[int, tuple[int, int]]] = []
    free_diag: list[int] = []
    free_other: list[tuple[int, tuple[int, ...]]] = []
    for si, (_, arity) in enumerate(sig.symbols):
        if arity == 2:
            for u in range(n):
                free_binary.append((si, (u, new)))
            free_diag.append(si)
        else:
            for t in itertools.product(range(m), repeat=arity):
                if new in t:
                    free_other.append((si, t))

    out = []

    def emit(rels):
        s = Structure(sig, m, tuple(tuple(sorted(r)) for r in rels))
        if member(spec, s):
            out.append(s)

    def rec_other(idx, rels):
        budget.spend()
        if idx == len(free_other):
            emit(rels)
            return
        si, t = free_other[idx]
        rec_other(idx + 1, rels)
        rels[si].add(t)
        rec_other(idx + 1, rels)
        rels[si].remove(t)

    def rec_diag(idx, rels):
        budget.spend()
        if idx == len(free_diag):
            rec_other(0, rels)
            return
        si = free_diag[idx]
        rec_diag(idx + 1, rels)
        if "irreflexive" not in flags[si]:
            rels[si].add((new, new))
            rec_diag(idx + 1, rels)
            rels[si].remove((new, new))

    def rec_binary(idx, rels):
        budget.spend()
        if idx == len(free_binary):
            rec_diag(0, rels)
            return
        si, (u, v) = free_binary[idx]
        for fwd, bwd in _pair_states(flags[si]):
            added = []
            if fwd:
                rels[si].add((u, v))
                added.append((u, v))
            if bwd:
                rels[si].add((v, u))
                added.append((v, u))
            rec_binary(idx + 1, rels)
            for t in added:
                rels[si].remove(t)

    rec_binary(0, base_rels)
    return out


def enumerate_structures(spec: AgeSpec, n: int, candidate_cap: int = 2_000_000) -> list[Structure]:
    """All members of the age of size n, one canonical representative per
    isomorphism type, ordered by canonical code."""
    from arrowbench.unions import Budget

    if n < 1:
        raise InputError("n must be >= 1")
    budget = Budget(candidate_cap, "enumerate_structures")
    level = _single_vertex_members(spec)
    for _ in range(n - 1):
        next_level: dict[bytes, Structure] = {}
        for parent in level:
            parent_code = canonical_form(parent)
            seen_here: set[bytes] = set()
            for cand in _extensions(spec, parent, budget):
                code, perm = canonical_labeling(cand)
                if code in seen_here:
                    continue
                seen_here.add(code)
                # orderly filter: deleting the canonically-last vertex
                # must return to the parent
                vstar = perm.index(cand.size - 1)
                rest = [v for v in range(cand.size) if v != vstar]
                if canonical_form(induced_substructure(cand, rest)) != parent_code:
                    continue
                next_level[code] = relabel(cand, perm)
        level = [next_level[c] for c in sorted(next_level)]
        if not level:
            break
    return level


def enumerate_up_to(spec: AgeSpec, n: int, candidate_cap: int = 2_000_000) -> list[Structure]:
    """Members of every size 1..n, size-major then code order."""
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_structures(spec, k, candidate_cap))
    return out


# ---------------------------------------------------------------------------
# amalgamation probes


@dataclass(frozen=True)
class AmalgamationInstance:
    a: Structure | None  # None for joint-embedding instances
    b: Structure
    c: Structure
    f: tuple[int, ...]  # embedding map a -> b (empty for joint embedding)
    g: tuple[int, ...]  # embedding map a -> c


@dataclass(frozen=True)
class AmalgamationReport:
    property: str  # joint-embedding | amalgamation | free-amalgamation
    holds_up_to: int | None
    counterexample: AmalgamationInstance | None
    search_cap: str = "completions searched up to |B|+|C| vertices"
    instances_checked: int = 0


def _find_completion(spec: AgeSpec, inst: AmalgamationInstance, free: bool,
                     budget) -> tuple[Structure, tuple[int, ...], tuple[int, ...]] | None:
    """Search a completion D with embeddings beta: B->D, gamma: C->D such
    that beta.f == gamma.g; the free variant also requires no relation
    tuple to meet both new parts.  Returns (D, beta, gamma) or None."""
    from arrowbench.unions import place_part

    b, c = inst.b, inst.c
    forced = {}
    if inst.a is not None:
        for av in range(inst.a.size):
            forced[inst.g[av]] = inst.f[av]
    new_b = set(range(b.size)) - set(inst.f)
    for host, sigma in place_part(b, c, spec, forced=forced,
                                  max_size=b.size + c.size, budget=budget):
        if free:
            new_c = {sigma[v] for v in range(c.size)} - set(inst.f)
            bad = False
            for tuples in host.relations:
                for t in tuples:
                    tv = set(t)
                    if tv & new_b and tv & new_c:
                        bad = True
                        break
                if bad:
                    break
            if bad:
                continue
        beta = tuple(range(b.size))
        return host, beta, sigma
    return None


def amalgamation_probe(spec: AgeSpec, which: str, bound: int,
                       candidate_cap: int = 5_000_000) -> AmalgamationReport:
    """Test joint-embedding / amalgamation / free-amalgamation over every
    instance with |A|, |B|, |C| <= bound.

    joint-embedding quantifies over (B, C) only (no common part);
    amalgamation and free-amalgamation over (A, B, C, f, g).
    """
    from arrowbench.unions import Budget, place_part

    if bound < 1:
        raise InputError("bound must be >= 1")
    if which not in ("joint-embedding", "amalgamation", "free-amalgamation"):
        raise InputError(f"unknown amalgamation property {which!r}")
    budget = Budget(candidate_cap, "amalgamation_probe")
    reps = enumerate_up_to(spec, bound)
    checked = 0

    if which == "joint-embedding":
        for b in reps:
            for c in reps:
                checked += 1
                found = next(place_part(b, c, spec, forced=None,
                                        max_size=b.size + c.size, budget=budget), None)
                if found is None:
                    inst = AmalgamationInstance(None, b, c, (), ())
                    return AmalgamationReport(which, None, inst, instances_checked=checked)
        return AmalgamationReport(which, bound, None, instances_checked=checked)

    free = which == "free-amalgamation"
    for a in reps:
        for b in reps:
            if b.size < a.size:
                continue
            fs = embedding_maps(a, b)
            if not fs:
                continue
            for c in reps:
                if c.size < a.size:
                    continue
                gs = embedding_maps(a, c)
                for f in fs:
                    for g in gs:
                        checked += 1
                        inst = AmalgamationInstance(a, b, c, f, g)
                        if _find_completion(spec, inst, free, budget) is None:
                            return AmalgamationReport(which, None, inst,
                                                      instances_checked=checked)
    return AmalgamationReport(which, bound, None, instances_checked=checked)


def verify_amalgamation_counterexample(spec: AgeSpec, inst: AmalgamationInstance,
                                       which: str, candidate_cap: int = 5_000_000) -> bool:
    """Independent re-check: no completion exists within the size cap."""
    from arrowbench.unions import Budget

    budget = Budget(candidate_cap, "verify_amalgamation")
    return _find_completion(spec, inst, which == "free-amalgamation", budget) is None
