"""Benchmark: compiled embedding kernel vs the pure-Python twin.

Measures the raw kernel on representative payloads (dense/sparse random
graphs, linear orders, labeled structures) plus one end-to-end decider,
and prints a table with the speedup.  Run from the repo root:

    python benchmarks/bench_kernels.py

The compiled extension must be built (`pip install -e .`); if it is
missing, only the pure rows are reported.
"""

import random
import sys
import time

from arrowbench import _kernels_py
from arrowbench.structures import Signature, Structure, _binary_payload

try:
    from arrowbench import _kernels_c
except ImportError:
    _kernels_c = None


def mk_graph(rng, n, p):
    sig = Signature((("edge", 2),))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.extend([(u, v), (v, u)])
    return Structure.make(sig, n, {"edge": edges})


def mk_chain(n):
    sig = Signature((("lt", 2),))
    return Structure.make(sig, n, {"lt": [(u, v) for u in range(n)
                                          for v in range(u + 1, n)]})


def mk_labeled(rng, n, p):
    sig = Signature((("e", 2), ("u", 1)))
    edges = [(u, v) for u in range(n) for v in range(n)
             if u != v and rng.random() < p]
    us = [(v,) for v in range(n) if rng.random() < 0.5]
    return Structure.make(sig, n, {"e": edges, "u": us})


def payload(a, b):
    la, n_adj, af = _binary_payload(a)
    lb, _, bf = _binary_payload(b)
    return (a.size, b.size, la, lb, n_adj, af, bf)


def time_kernel(fn, args, repeat=5, inner=20):
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best.append((time.perf_counter() - t0) / inner)
    return min(best)


def main():
    rng = random.Random(2024)
    cases = [
        ("sparse graph 4->12", mk_graph(rng, 4, 0.3), mk_graph(rng, 12, 0.3)),
        ("dense graph 4->11", mk_graph(rng, 4, 0.7), mk_graph(rng, 11, 0.7)),
        ("order 3->11", mk_chain(3), mk_chain(11)),
        ("labeled digraph 3->10", mk_labeled(rng, 3, 0.15), mk_labeled(rng, 10, 0.35)),
    ]
    print(f"{'case':26} {'results':>8} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for name, a, b in cases:
        args = payload(a, b)
        out = _kernels_py.embeddings_binary(*args)
        t_py = time_kernel(_kernels_py.embeddings_binary, args)
        if _kernels_c is not None:
            out_c = _kernels_c.embeddings_binary(*args)
            assert out_c == out, "backend mismatch!"
            t_c = time_kernel(_kernels_c.embeddings_binary, args)
            print(f"{name:26} {len(out):>8} {t_py * 1e3:>10.3f} {t_c * 1e3:>14.3f} "
                  f"{t_py / t_c:>7.1f}x")
        else:
            print(f"{name:26} {len(out):>8} {t_py * 1e3:>10.3f} {'-':>14} {'-':>8}")

    # end-to-end: one decider dominated by embedding enumeration
    import os
    import subprocess

    script = ("from arrowbench.ages import catalog_age, enumerate_up_to\n"
              "from arrowbench.arrows import roelcke_witness\n"
              "import time\n"
              "g = catalog_age('graph')\n"
              "reps = enumerate_up_to(g, 3)\n"
              "t0 = time.perf_counter()\n"
              "for a in reps:\n"
              "    for b in reps:\n"
              "        for z in reps:\n"
              "            assert roelcke_witness(g, a, b, z).holds\n"
              "print(f'{time.perf_counter() - t0:.2f}')\n")
    print()
    for label, env_extra in (("compiled", {}), ("pure", {"ARROWBENCH_PURE": "1"})):
        if label == "compiled" and _kernels_c is None:
            continue
        env = dict(os.environ)
        env.update(env_extra)
        out = subprocess.run([sys.executable, "-c", script], env=env,
                             capture_output=True, text=True)
        print(f"roelcke sweep (343 triples), {label:8}: {out.stdout.strip()}s")


if __name__ == "__main__":
    main()
