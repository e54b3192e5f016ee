"""Smoke test for the puresep_py extension.

Build and install it first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import math
import os
import tempfile

import puresep_py as ps


def close(a, b, eps=1e-10):
    return abs(a - b) <= eps


def main():
    cat = ps.PureState.cat(3)
    assert cat.dims == [2, 2, 2]
    assert close(cat.amplitudes[0].real, 1 / math.sqrt(2))

    det = ps.check(cat, "det")
    assert not det.separable
    assert all(close(v, 0.25) for v in det.per_party)

    prop = ps.check(cat, "prop")
    assert prop.witness["kind"] == "column", prop.witness

    rho = cat.partial_trace(0)
    assert close(rho[0][0].real, 0.5) and close(abs(rho[0][1]), 0.0)
    assert len(cat.unfolding(1)) == 4 and len(cat.unfolding(1)[0]) == 2

    prod = ps.PureState.random_product([2, 3, 2], seed=5)
    verdict = ps.classify(prod)
    assert verdict.separable and len(verdict.reports) == 4
    assert verdict.fidelity >= 1 - 1e-9
    rebuilt = ps.PureState.product(verdict.factors)
    assert rebuilt.fidelity(prod) >= 1 - 1e-9

    factors, fidelity = ps.extract_factors(prod)
    assert len(factors) == 3 and fidelity >= 1 - 1e-9

    w = ps.oracle(ps.PureState.w(3))
    assert w.schmidt_numbers == [2, 2, 2] and not w.separable
    assert close(w.singular_values[0][0] ** 2, 2 / 3)

    tol = ps.Tolerance(rank=1e-6)
    assert close(tol.det, 1e-12, 1e-24)

    text = ps.format_state(prod, ["kind: random-product"])
    back, comments, rescaled = ps.parse_state(text)
    assert back.amplitudes == prod.amplitudes and comments == ["kind: random-product"]
    assert not rescaled

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "s.q")
        ps.write_state(path, cat)
        assert ps.read_state(path)[0].amplitudes == cat.amplitudes

    try:
        ps.PureState([2], [1.5, 0])
    except ps.SeparabilityError:
        pass
    else:
        raise AssertionError("unnormalized input accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
