"""Smoke test for the densegrowth Python extension.

Build and run from the repository root:

    cargo build --release -p densegrowth-py
    cp target/release/libdensegrowth_py.so python/densegrowth_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import densegrowth_py as dg


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    k5 = dg.Graph.complete(5)
    lo, hi = k5.growth_rate()
    assert lo <= 3.0 <= hi, (lo, hi)
    assert k5.girth() == 3

    sub = k5.subdivide_uniform(2)
    lo, hi = sub.growth_rate(tol=1e-10)
    assert lo - 1e-12 <= math.sqrt(3) <= hi + 1e-12, (lo, hi)

    c8 = dg.Graph.cycle(8)
    assert c8.growth_rate() == (1.0, 1.0)
    assert dg.Graph.decode(c8.encode()) == c8
    assert "graph G {" in c8.to_dot()

    k, n, eps_eff, girth = dg.select_parameters(2, 2.5, 0.3)
    assert (k, n, girth) == (1, 10, 12), (k, n, girth)

    cert = dg.synthesize(2, 1.5, 0.3, seed=7)
    lo, hi = cert.eigenvalue
    assert abs((lo + hi) / 2 - 1.5) + (hi - lo) / 2 < 0.3
    assert all(passed for _, passed, _ in cert.verify())
    again = dg.Certificate.decode(cert.encode())
    assert again.encode() == cert.encode()
    assert set(cert.graph.degrees()) <= {2, 4}

    g = cert.graph
    rep = dg.subgroup(g, 2)
    assert rep["rank"] == g.edge_count - len(g) + 1
    assert close(rep["omega_estimate"], (lo + hi) / 2, 0.05)
    gamma = [int(x) for x in rep["gamma"]]
    assert gamma[0] == 1 and gamma == sorted(gamma)

    rose = dg.subgroup(dg.Graph.rose(2), 2, nmax=20)
    assert rose["generators"] == ["a1", "a2"]

    try:
        dg.synthesize(2, 3.0, 0.1)
    except ValueError as e:
        assert "(1, 3)" in str(e)
    else:
        raise AssertionError("endpoint target accepted")

    print("python smoke test ok:", cert)


if __name__ == "__main__":
    main()
