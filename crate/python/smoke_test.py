"""Smoke test for the plate_ham extension module."""

import json
import math

import plate_ham as ph


def main():
    b = ph.BoundarySpec()
    assert b.kind == "clamped" and b.lam == 0.0
    assert abs(b.mu - 2.0 / 0.7) < 1e-12

    f = ph.PolySeries([0.0, 1.0])
    img = b.apply_k(ph.PolySeries([1.0]))
    assert img == b.load_forcing()
    assert f.deflection_from_phi()(1.0) == 0.0

    r = ph.solve_q(5.0, -0.35, order=50)
    assert r.status == "max_iter"
    assert abs(r.w0_over_h - 0.62) < 0.005, r
    assert r.err < 1e-6

    r = ph.solve_a(5.0, -0.5, iterate=True, m=5, n=100)
    assert r.status == "converged"
    assert abs(r.q - 132.2) < 0.1, r
    assert json.loads(r.to_json())["status"] == "converged"
    assert r.iterations_to(1e-8) == 4
    err = ph.residual_err(r.phi, r.s, r.q)
    assert err <= 1e-12

    curve = ph.deflection_curve(r.phi, 11)
    assert curve[-1][2] == 0.0
    assert abs(curve[0][3] - ph.w_over_h(5.0)) < 1e-9

    c0, in_range = ph.empirical_c0_a(6.0)
    assert not in_range and math.isclose(c0, -11.0 / 47.0)
    assert math.isclose(ph.empirical_c0_q(1000.0, True), -23.0 / 1023.0)

    assert ph.equivalence_check(5.0, 0.35) <= 1e-12

    rows, argmin = ph.sweep_c0([-0.3, -0.2, -0.1], 100, a=5.0)
    assert len(rows) == 3 and argmin == -0.2

    try:
        ph.solve_q(1.0, precision="quad")
    except ValueError:
        pass
    else:
        raise AssertionError("bad precision accepted")

    print("smoke test passed:", r)


if __name__ == "__main__":
    main()
