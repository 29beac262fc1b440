"""Smoke test for the qctoeplitz extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import cmath
import math

import qctoeplitz as q


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    # index bridge: j(T_chi1) = -1
    assert q.winding("char:1") == 1
    assert q.operator_index("char:1") == -1
    chi = q.Symbol.character(-3)
    assert q.operator_index(chi) == 3

    # coefficients and the -i sgn(n) multiplier
    coeffs = dict(q.fourier_coefficients("trig:[1,0.5,0;-1,0.5,0]", degree=4))
    close(coeffs[1], 0.5, 1e-14)
    close(coeffs[0], 0.0, 1e-14)
    hil = dict(q.hilbert_coefficients("trig:[1,0.5,0;-1,0.5,0]", degree=4))
    close(hil[1], -0.5j, 1e-14)
    close(hil[-1], 0.5j, 1e-14)

    # samples agree with the closed form
    s = q.Symbol.trig([(0, 2.0), (1, 1j)])
    vals = s.samples(64)
    for j, v in enumerate(vals):
        t = 2 * math.pi * j / 64
        close(v, 2 + 1j * cmath.exp(1j * t), 1e-12)

    # factorization round trip
    f = q.Symbol.character(2) * q.Symbol.parse("trig:[1,0.2,0;-1,0.2,0]").exp()
    fac = q.factor(f)
    assert fac["winding"] == 2
    assert fac["residual"] < 1e-8

    # example H: sup at 0 is the direct sum of 1/(k ln k)
    summary = q.example_h_summary(1000)
    direct = sum(1.0 / (k * math.log(k)) for k in range(2, 1001))
    close(summary["sup_at_zero"], direct, 1e-10)
    assert summary["coefficient_identity_error"] == 0.0

    # oscillation: a semicircle indicator keeps oscillation 1/2 at every scale
    ind = q.Symbol.parse('{"type":"indicator","arcs":[["0","3.141592653589793"]]}')
    profile = q.oscillation_profile(ind)
    assert min(o for _, o in profile) >= 0.4
    assert not q.vmo_consistent(ind)
    assert q.vmo_consistent(q.Symbol.parse("trig:[1,0.5,0;-1,0.5,0]").hilbert())

    # classification and finite sections
    assert q.compare("char:1", "char:2") == "different"
    assert q.compare("char:1", q.Symbol.character(1) * q.Symbol.parse("trig:[1,0.1,0;-1,0.1,0]").exp()) == "same"
    close(q.section_norm("trig:[0,2,0;1,0.5,0;-1,0.5,0]", 256), 3.0, 1e-3)
    assert q.kernel_count("char:4", 64) == 4

    outcome = q.run_criterion(1)
    assert outcome["passed"], outcome

    try:
        q.winding("trig:[0,0.5,0;1,0.5,0]")
    except ValueError as e:
        assert "fredholm_index" in str(e)
    else:
        raise AssertionError("non-invertible symbol accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
