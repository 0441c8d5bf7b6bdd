"""Self-contained certificate files and their independent verifier.

A certificate is a JSON text document: envelope (operation, verdict,
input digests, parameters) plus the operation payload.  verify() never
consults the result cache and re-checks the claim from scratch using
only embedding enumeration and pattern codes: fail certificates are
re-scored directly, holds certificates are re-decided by an independent
route (exhaustive coloring enumeration for the classical arrow, raw
non-deduplicated joint-embedding enumeration for the pattern arrows).
"""

from __future__ import annotations

import json

from arrowbench import __version__
from arrowbench.ages import AgeSpec, verify_amalgamation_counterexample
from arrowbench.arrows import (
    ArrowCertificate,
    Coloring,
    check_coloring_is_counterexample,
    coloring_digest,
    exhaustive_classical_check,
    oscillation,
    REAL_TOL,
    _pattern_constant_b,
    _values_agree,
)
from arrowbench.errors import CertificateError, InputError
from arrowbench.patterns import iter_joint_embeddings, pair_pattern_code
from arrowbench.stability import UnstableWitness
from arrowbench.structures import (
    Embedding,
    Structure,
    canonical_form,
    code_digest,
    embedding_maps,
    is_embedding,
    parse_structure,
)
from arrowbench.unions import Budget

FORMAT = "arrowbench-certificate/1"


def input_digest(s: Structure) -> str:
    return code_digest(canonical_form(s))


def envelope(cert: ArrowCertificate, inputs: dict[str, Structure], age: str | None,
             params: dict) -> dict:
    doc = {
        "format": FORMAT,
        "tool_version": __version__,
        "operation": cert.operation,
        "verdict": cert.verdict,
        "degenerate": cert.degenerate,
        "reason": cert.reason,
        "age": age,
        "inputs": {name: input_digest(s) for name, s in sorted(inputs.items())},
        "params": dict(sorted(params.items())),
        "payload": cert.payload,
    }
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_certificate(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def load_certificate(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CertificateError(f"cannot read certificate: {e}") from None
    if doc.get("format") != FORMAT:
        raise CertificateError(f"unsupported certificate format {doc.get('format')!r}")
    return doc


def _check_digests(doc: dict, inputs: dict[str, Structure]) -> None:
    recorded = doc.get("inputs", {})
    for name, digest in recorded.items():
        if name.startswith("_"):
            continue
        if name not in inputs:
            raise CertificateError(f"certificate names input {name!r}: not provided")
        got = input_digest(inputs[name])
        if got != digest:
            raise CertificateError(
                f"digest mismatch on input {name!r}: certificate has {digest}, "
                f"provided file has {got}")


def _parse_emb(maps_payload):
    return [tuple(m) for m in maps_payload]


def _union_supported(u: Structure, maps) -> bool:
    covered = set()
    for m in maps:
        covered.update(m)
    return covered == set(range(u.size))


def _verify_arrow(doc, inputs, spec):
    a, b, c = inputs["a"], inputs["b"], inputs["c"]
    k = doc["params"]["colors"]
    if doc["verdict"] == "fails":
        if doc.get("degenerate"):
            return not embedding_maps(b, c)
        return check_coloring_is_counterexample(c, a, b, doc["payload"]["coloring"])
    if doc.get("degenerate"):
        return bool(embedding_maps(b, c)) and not embedding_maps(a, b)
    return exhaustive_classical_check(c, a, b, k)


def _verify_arrow_search(doc, inputs, spec):
    a, b = inputs["a"], inputs["b"]
    k = doc["params"]["colors"]
    if doc["verdict"] == "fails":
        # negative exhaustion over the age scan is re-checked by re-running
        from arrowbench.arrows import arrow_search

        again = arrow_search(spec, a, b, k, doc["params"]["max_n"])
        return again.verdict == "fails"
    c = parse_structure(doc["payload"]["c"])
    if not spec.member(c):
        return False
    return exhaustive_classical_check(c, a, b, k)


def _reenact_pattern_arrow(doc, inputs, spec, zs_names):
    """Independent holds-check: raw joint-embedding enumeration (no
    pattern deduplication), early-exit per candidate."""
    a, b, c = inputs["a"], inputs["b"], inputs["c"]
    zs = [inputs[name] for name in zs_names]
    emb_bc = embedding_maps(b, c)
    emb_ab = embedding_maps(a, b)
    if doc.get("degenerate"):
        if doc["verdict"] == "fails":
            return not emb_bc
        return bool(emb_bc) and not emb_ab
    budget = Budget(5_000_000, "verify_pattern_arrow")
    for u, maps in iter_joint_embeddings(spec, c, zs, budget=budget):
        c_map, z_maps = maps[0], list(maps[1:])
        if _pattern_constant_b(u, c_map, z_maps, emb_bc, emb_ab) is None:
            return False
    return True


def _verify_pattern_arrow_fail(doc, inputs, spec, zs_names):
    a, b, c = inputs["a"], inputs["b"], inputs["c"]
    off = doc["payload"]["offending"]
    u = parse_structure(off["u"])
    c_map = tuple(off["c_map"])
    z_maps = [tuple(z) for z in off["z_maps"]]
    zs = [inputs[name] for name in zs_names]
    if not spec.member(u):
        return False
    if not is_embedding(c_map, c, u):
        return False
    for z_struct, zm in zip(zs, z_maps):
        if not is_embedding(zm, z_struct, u):
            return False
    if not _union_supported(u, [c_map] + z_maps):
        return False
    emb_bc = embedding_maps(b, c)
    emb_ab = embedding_maps(a, b)
    return _pattern_constant_b(u, c_map, z_maps, emb_bc, emb_ab) is None


def _verify_definable(doc, inputs, spec):
    if doc["verdict"] == "fails" and not doc.get("degenerate"):
        return _verify_pattern_arrow_fail(doc, inputs, spec, ["z"])
    return _reenact_pattern_arrow(doc, inputs, spec, ["z"])


def _verify_stable(doc, inputs, spec):
    zs_names = sorted(n for n in doc["inputs"] if n.startswith("z"))
    if doc["verdict"] == "fails" and not doc.get("degenerate"):
        return _verify_pattern_arrow_fail(doc, inputs, spec, zs_names)
    return _reenact_pattern_arrow(doc, inputs, spec, zs_names)


def _verify_roelcke(doc, inputs, spec):
    a, b, z = inputs["a"], inputs["b"], inputs["z"]
    if doc["verdict"] == "fails":
        from arrowbench.arrows import roelcke_witness

        again = roelcke_witness(spec, a, b, z, doc["params"].get("max_n"))
        return again.verdict == "fails"
    u = parse_structure(doc["payload"]["u"])
    b_map = tuple(doc["payload"]["b_map"])
    z_map = tuple(doc["payload"]["z_map"])
    if not spec.member(u):
        return False
    if not is_embedding(b_map, b, u) or not is_embedding(z_map, z, u):
        return False
    if not _union_supported(u, [b_map, z_map]):
        return False
    codes = set()
    for am in embedding_maps(a, b):
        full = tuple(b_map[am[i]] for i in range(len(am)))
        codes.add(pair_pattern_code(u, full, z_map))
    return len(codes) <= 1


def _verify_epsilon(doc, inputs, spec, coloring: Coloring | None):
    if coloring is None:
        raise CertificateError("epsilon-witness verification needs the coloring")
    if doc["inputs"].get("_coloring") != coloring_digest(coloring):
        raise CertificateError("coloring digest mismatch")
    b = inputs["b"]
    eps = doc["params"]["epsilon"]
    if doc["verdict"] == "fails":
        from arrowbench.arrows import epsilon_constant_witness

        again = epsilon_constant_witness(coloring.universe, coloring, b, eps)
        return again.verdict == "fails"
    bm = tuple(doc["payload"]["b_map"])
    if not is_embedding(bm, b, coloring.universe):
        return False
    value_at = {m: v for m, v in zip(coloring.domain, coloring.values)}
    vals = [value_at[tuple(bm[x] for x in am)]
            for am in embedding_maps(coloring.source, b)]
    return oscillation(vals) < eps


def _verify_proximal_check(doc, inputs, spec, coloring):
    if coloring is None:
        raise CertificateError("proximal-check verification needs the coloring")
    if doc["inputs"].get("_coloring") != coloring_digest(coloring):
        raise CertificateError("coloring digest mismatch")
    from arrowbench.arrows import proximal_check

    again = proximal_check(inputs["u"], coloring, spec, doc["params"]["d_max"])
    entries = [[d, p, w] for d, p, w in again.entries]
    return entries == doc["payload"]["entries"]


def _verify_proximal_arrow(doc, inputs, spec, coloring):
    if coloring is None:
        raise CertificateError("proximal-arrow verification needs the coloring")
    if doc["inputs"].get("_coloring") != coloring_digest(coloring):
        raise CertificateError("coloring digest mismatch")
    a, b = inputs["a"], inputs["b"]
    value_at = {m: v for m, v in zip(coloring.domain, coloring.values)}
    if doc["verdict"] == "fails":
        for bm in embedding_maps(b, coloring.universe):
            vals = [value_at[tuple(bm[x] for x in am)] for am in embedding_maps(a, b)]
            if all(_values_agree(v, vals[0], coloring.kind) for v in vals[1:]):
                return False
        return True
    bm = tuple(doc["payload"]["b_map"])
    if not is_embedding(bm, b, coloring.universe):
        return False
    vals = [value_at[tuple(bm[x] for x in am)] for am in embedding_maps(a, b)]
    return all(_values_agree(v, vals[0], coloring.kind) for v in vals[1:])


def _verify_convex(doc, inputs, spec):
    a, b, c = inputs["a"], inputs["b"], inputs["c"]
    payload = doc["payload"]
    eps = doc["params"]["epsilon"]
    value = payload["value"]
    domain = embedding_maps(a, c)
    copies = embedding_maps(b, c)
    emb_ab = embedding_maps(a, b)
    if doc.get("degenerate"):
        return not emb_ab or not domain
    index = {m: i for i, m in enumerate(domain)}
    weights = {}
    for m, w in payload["combination"]:
        mt = tuple(m)
        if mt not in copies:
            return False
        weights[mt] = weights.get(mt, 0.0) + w
    if abs(sum(weights.values()) - 1.0) > 1e-6 or any(w < -REAL_TOL for w in weights.values()):
        return False
    lam = [weights.get(m, 0.0) for m in copies]
    slots = [tuple(index[tuple(bm[x] for x in am)] for am in emb_ab) for bm in copies]
    # exact worst oscillation of the certified combination over all
    # [0,1]-colorings: for each ordered pair, sum positive marginal gaps
    worst = 0.0
    for j1 in range(len(emb_ab)):
        for j2 in range(len(emb_ab)):
            if j1 == j2:
                continue
            margin = [0.0] * len(domain)
            for l, slot in zip(lam, slots):
                margin[slot[j1]] += l
                margin[slot[j2]] -= l
            worst = max(worst, sum(x for x in margin if x > 0))
    if worst > value + 1e-6:
        return False
    # adversary mixture re-scored as a lower bound
    adv = payload.get("adversary", [])
    if adv:
        total = sum(row["weight"] for row in adv)
        if abs(total - 1.0) > 1e-6:
            return False
        per_copy = []
        for ci, bm in enumerate(copies):
            acc = 0.0
            for row in adv:
                bits = row["coloring"]
                j1_map, j2_map = tuple(row["pair"][0]), tuple(row["pair"][1])
                am_list = [tuple(x) for x in embedding_maps(a, b)]
                j1, j2 = am_list.index(j1_map), am_list.index(j2_map)
                acc += row["weight"] * (bits[slots[ci][j1]] - bits[slots[ci][j2]])
            per_copy.append(acc)
        if min(per_copy) < value - 1e-6:
            return False
    holds = value <= eps + REAL_TOL
    return (doc["verdict"] == "holds") == holds


def _verify_stability(doc, inputs, spec):
    a, z = inputs["a"], inputs["z"]
    payload = doc["payload"]
    if doc["verdict"] == "holds":
        # a witness of instability
        host = parse_structure(payload["host"])
        if not spec.member(host):
            return False
        try:
            w = UnstableWitness(
                payload["depth"], host,
                tuple(Embedding(a, host, tuple(m)) for m in payload["a_maps"]),
                tuple(Embedding(z, host, tuple(m)) for m in payload["z_maps"]),
                bytes.fromhex(payload["tau_lt"]), bytes.fromhex(payload["tau_gt"]))
        except InputError:
            return False
        return w.verify()
    from arrowbench.stability import stable_up_to

    report = stable_up_to(spec, a, z, payload["depth"], payload["max_host"])
    return report.stable


def _verify_amalgamation(doc, inputs, spec):
    from arrowbench.ages import AmalgamationInstance, amalgamation_probe

    payload = doc["payload"]
    which = doc["params"]["property"]
    if doc["verdict"] == "holds":
        report = amalgamation_probe(spec, which, doc["params"]["bound"])
        return report.counterexample is None
    cex = payload["counterexample"]
    a = parse_structure(cex["a"]) if cex.get("a") else None
    inst = AmalgamationInstance(
        a, parse_structure(cex["b"]), parse_structure(cex["c"]),
        tuple(cex["f"]), tuple(cex["g"]))
    if a is not None:
        if not is_embedding(inst.f, a, inst.b) or not is_embedding(inst.g, a, inst.c):
            return False
    return verify_amalgamation_counterexample(spec, inst, which)


_VERIFIERS = {
    "arrow": _verify_arrow,
    "arrow-search": _verify_arrow_search,
    "definable-arrow": _verify_definable,
    "stable-arrow": _verify_stable,
    "roelcke-witness": _verify_roelcke,
    "convex-arrow": _verify_convex,
    "stability": _verify_stability,
    "amalgamation": _verify_amalgamation,
}

_COLORING_VERIFIERS = {
    "epsilon-witness": _verify_epsilon,
    "proximal-check": _verify_proximal_check,
    "proximal-arrow": _verify_proximal_arrow,
}


def verify_certificate(doc: dict, inputs: dict[str, Structure], spec: AgeSpec | None,
                       coloring: Coloring | None = None) -> bool:
    """Independent re-check of a certificate against the given inputs.
    Digest mismatches raise CertificateError; a sound certificate with a
    wrong claim returns False."""
    _check_digests(doc, inputs)
    op = doc.get("operation")
    if op in _VERIFIERS:
        return _VERIFIERS[op](doc, inputs, spec)
    if op in _COLORING_VERIFIERS:
        return _COLORING_VERIFIERS[op](doc, inputs, spec, coloring)
    raise CertificateError(f"operation {op!r} has no verifier")
