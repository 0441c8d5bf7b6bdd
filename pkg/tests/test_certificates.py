import json

import pytest

from arrowbench import certificates
from arrowbench.ages import catalog_age
from arrowbench.arrows import (
    Coloring,
    classical_arrow,
    coloring_digest,
    convex_arrow,
    definable_arrow,
    epsilon_constant_witness,
    proximal_check,
    roelcke_witness,
    stable_arrow,
)
from arrowbench.errors import CertificateError
from arrowbench.stability import unstable_witness
from arrowbench.structures import serialize_structure

from util import chain, k_graph, pure_set

GRAPHS = catalog_age("graph")
ORDERS = catalog_age("linear_order")
SETS = catalog_age("set")


def roundtrip(doc, tmp_path, name="c.cert"):
    p = tmp_path / name
    certificates.write_certificate(doc, str(p))
    return certificates.load_certificate(str(p))


def test_arrow_holds_roundtrip_verifies(tmp_path):
    a, b, c = chain(2), chain(3), chain(6)
    cert = classical_arrow(c, a, b, 2)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c}, "linear_order",
                                {"colors": 2})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(loaded, {"a": a, "b": b, "c": c}, ORDERS)


def test_arrow_fails_roundtrip_verifies(tmp_path):
    a, b, c = chain(2), chain(3), chain(5)
    cert = classical_arrow(c, a, b, 2)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c}, "linear_order",
                                {"colors": 2})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(loaded, {"a": a, "b": b, "c": c}, ORDERS)


def test_flipped_color_detected(tmp_path):
    a, b, c = chain(2), chain(3), chain(5)
    cert = classical_arrow(c, a, b, 2)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c}, "linear_order",
                                {"colors": 2})
    doc["payload"]["coloring"][0][1] ^= 1
    loaded = roundtrip(doc, tmp_path)
    assert not certificates.verify_certificate(loaded, {"a": a, "b": b, "c": c}, ORDERS)


def test_digest_mismatch_raises(tmp_path):
    a, b, c = chain(2), chain(3), chain(6)
    cert = classical_arrow(c, a, b, 2)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c}, "linear_order",
                                {"colors": 2})
    loaded = roundtrip(doc, tmp_path)
    with pytest.raises(CertificateError):
        certificates.verify_certificate(loaded, {"a": a, "b": b, "c": chain(5)}, ORDERS)


def test_malformed_certificate(tmp_path):
    p = tmp_path / "bad.cert"
    p.write_text("not json")
    with pytest.raises(CertificateError):
        certificates.load_certificate(str(p))
    p.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(CertificateError):
        certificates.load_certificate(str(p))


def test_definable_certificates(tmp_path):
    a, b, z = pure_set(1), pure_set(2), pure_set(1)
    c = pure_set(3)
    cert = definable_arrow(c, a, b, z, SETS)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c, "z": z}, "set", {})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(
        loaded, {"a": a, "b": b, "c": c, "z": z}, SETS)
    # failing instance
    cert2 = definable_arrow(chain(2), chain(1), chain(2), chain(1), ORDERS)
    assert not cert2.holds
    doc2 = certificates.envelope(
        cert2, {"a": chain(1), "b": chain(2), "c": chain(2), "z": chain(1)},
        "linear_order", {})
    loaded2 = roundtrip(doc2, tmp_path, "d.cert")
    assert certificates.verify_certificate(
        loaded2, {"a": chain(1), "b": chain(2), "c": chain(2), "z": chain(1)}, ORDERS)
    # corrupt the offending witness: z above both C points is NOT offending
    # (the pattern coloring is constant there), so verification must fail
    doc2["payload"]["offending"] = {
        "u": serialize_structure(chain(3)), "c_map": [0, 1], "z_maps": [[2]]}
    assert not certificates.verify_certificate(
        doc2, {"a": chain(1), "b": chain(2), "c": chain(2), "z": chain(1)}, ORDERS)


def test_stable_arrow_certificate(tmp_path):
    a, b, z, c = pure_set(1), pure_set(2), pure_set(1), pure_set(3)
    cert = stable_arrow(c, a, b, (z,), SETS, depth=4)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c, "z0": z}, "set",
                                {"depth": 4})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(
        loaded, {"a": a, "b": b, "c": c, "z0": z}, SETS)


def test_roelcke_certificate(tmp_path):
    a, b, z = k_graph(1), k_graph(2), k_graph(2)
    cert = roelcke_witness(GRAPHS, a, b, z)
    doc = certificates.envelope(cert, {"a": a, "b": b, "z": z}, "graph",
                                {"max_n": None})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(loaded, {"a": a, "b": b, "z": z}, GRAPHS)
    # tamper: drop an edge from the witness so b_map stops being an embedding
    doc["payload"]["u"] = serialize_structure(
        __import__("util").graph(4, [(0, 1)]))
    assert not certificates.verify_certificate(doc, {"a": a, "b": b, "z": z}, GRAPHS)


def test_stability_certificate(tmp_path):
    a = z = chain(1)
    w = unstable_witness(ORDERS, a, z, depth=4)
    payload = {"depth": w.depth, "host": serialize_structure(w.host),
               "a_maps": [list(e.map) for e in w.a_parts],
               "z_maps": [list(e.map) for e in w.z_parts],
               "tau_lt": w.tau_lt.hex(), "tau_gt": w.tau_gt.hex()}
    from arrowbench.arrows import ArrowCertificate

    cert = ArrowCertificate("stability", "holds", payload=payload)
    doc = certificates.envelope(cert, {"a": a, "z": z}, "linear_order", {"depth": 4})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(loaded, {"a": a, "z": z}, ORDERS)
    # swap two a-parts: the pattern constraints break
    doc["payload"]["a_maps"][0], doc["payload"]["a_maps"][1] = (
        doc["payload"]["a_maps"][1], doc["payload"]["a_maps"][0])
    assert not certificates.verify_certificate(doc, {"a": a, "z": z}, ORDERS)


def test_convex_certificate(tmp_path):
    a, b, c = pure_set(1), pure_set(2), pure_set(4)
    cert = convex_arrow(c, a, b, 0.3)
    doc = certificates.envelope(cert, {"a": a, "b": b, "c": c}, "set",
                                {"epsilon": 0.3})
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(loaded, {"a": a, "b": b, "c": c}, SETS)
    # understate the value: the direct-oscillation bound must catch it
    bad = convex_arrow(chain(2), chain(1), chain(2), 0.5)
    doc2 = certificates.envelope(bad, {"a": chain(1), "b": chain(2), "c": chain(2)},
                                 "linear_order", {"epsilon": 0.5})
    doc2["payload"]["value"] = 0.0
    doc2["verdict"] = "holds"
    assert not certificates.verify_certificate(
        doc2, {"a": chain(1), "b": chain(2), "c": chain(2)}, ORDERS)


def test_epsilon_certificate_needs_coloring(tmp_path):
    u = chain(4)
    chi = Coloring(u, chain(1), tuple(i / 3 for i in range(4)), kind="real")
    cert = epsilon_constant_witness(u, chi, chain(2), 0.4)
    doc = certificates.envelope(cert, {"b": chain(2), "u": u}, "linear_order",
                                {"epsilon": 0.4})
    doc["inputs"]["_coloring"] = coloring_digest(chi)
    loaded = roundtrip(doc, tmp_path)
    with pytest.raises(CertificateError):
        certificates.verify_certificate(loaded, {"b": chain(2), "u": u}, ORDERS)
    assert certificates.verify_certificate(loaded, {"b": chain(2), "u": u}, ORDERS,
                                           coloring=chi)


def test_proximal_check_certificate(tmp_path):
    u = chain(4)
    chi = Coloring(u, chain(1), (1, 0, 0, 0), colors=2)
    report = proximal_check(u, chi, ORDERS, d_max=1)
    from arrowbench.arrows import ArrowCertificate

    payload = {"d_max": report.d_max,
               "entries": [[d, p, list(w) if w is not None else None]
                           for d, p, w in report.entries]}
    cert = ArrowCertificate("proximal-check", "holds", payload=payload)
    doc = certificates.envelope(cert, {"u": u, "a": chain(1)}, "linear_order",
                                {"d_max": 1})
    doc["inputs"]["_coloring"] = coloring_digest(chi)
    loaded = roundtrip(doc, tmp_path)
    assert certificates.verify_certificate(loaded, {"u": u, "a": chain(1)}, ORDERS,
                                           coloring=chi)
