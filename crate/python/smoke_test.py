"""Smoke test for the polyvortex extension module.

Build first, e.g. `pip install ./crates/python`, then run
`python python/smoke_test.py`.
"""

import math

import polyvortex as pv


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    # Two equal vortices form the n = 2 polygon: ω = (n-1)/(2n|s|²)·ΣΓ.
    pair = pv.VortexSystem([(1.0, 0.0), (-1.0, 0.0)], [1.0, 1.0])
    r = pair.classify()
    assert r.kind == "ROTATION", r
    assert close(r.omega, pv.polygon_omega(2, (1.0, 0.0), 2.0))
    assert close(r.omega, 0.5)

    eig = pv.circulant_spectrum(4, "C")
    for got, want in zip(eig, [1.5, 0.5, -0.5, 0.0]):
        assert abs(got - want) < 1e-12, eig

    sols = pv.solve_nested(2, 1.0, 1.0)
    assert sorted(s.alignment for s in sols) == ["ALIGNED", "ALIGNED", "STAGGERED"]
    for s in sols:
        again = pv.VortexSystem.from_json(s.system.to_json()).classify()
        assert again.kind == s.report.kind
        assert close(again.omega, s.report.omega)

    c = pv.classify_regime(3, -2.0)
    assert c["regime"] == "intermediate_opposite"
    assert c["aligned"] == (1, 3) and c["staggered"] == (2, 2)
    assert close(c["mu_n"], (3 + math.sqrt(5)) / 2, 1e-14)

    still = pv.absolute_equilibrium(3, 1.0)
    assert still.classify().kind == "ABSOLUTE"

    pts = pv.corotating_single(2)
    radii = sorted(p["radius"] for p in pts if p["ray"] != "ORIGIN")
    assert close(radii[0], math.sqrt(3)) and close(radii[-1], math.sqrt(5))

    aligned = [s for s in sols if s.alignment == "ALIGNED"]
    assert aligned[0].corotating_points()[0]["ray"] == "ORIGIN"

    traj = pair.integrate(2 * math.pi / r.omega, 1e-10)
    assert traj.return_error() < 1e-7
    assert traj.max_hamiltonian_drift < 1e-9

    try:
        pv.VortexSystem([(0.0, 0.0)], [1.0, 2.0])
    except ValueError:
        pass
    else:
        raise AssertionError("mismatched lengths accepted")

    print("polyvortex smoke test: ok")


if __name__ == "__main__":
    main()
