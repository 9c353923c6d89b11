"""End-to-end smoke checks through the python module."""

import cmath
import math
import sys

import circlenf


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    failures = []

    def check(name, ok):
        print(("ok  " if ok else "FAIL") + " " + name)
        if not ok:
            failures.append(name)

    # torsion of the first family against its closed form
    rep = circlenf.normalize(family="A", omega="golden", a="-1", d=1, order=8, bits=256)
    omega = circlenf.omega_value("golden", 256)
    lam = cmath.exp(2j * math.pi * omega)
    n1_expected = -(math.pi * lam / (1 - lam)).imag
    n1 = float(rep["n"][0]["value"])
    check("normalize torsion n1", rep["n"][0]["s"] == 1 and close(n1, n1_expected, 1e-12))
    check("normalize residual tiny", float(rep["residual"]) < 1e-40)

    # zero-coupling tongue scan: every plateau has zero width
    scan = circlenf.tongues(family="arnold", t=0.0, grid="0:1:41")
    widths = [p["width"] for p in scan["plateaus"]]
    check("tongues t=0 widths", widths and max(widths) == 0.0)

    # rigid rotation recovered exactly
    rho, err, conv = circlenf.rotation_number_arnold(0.375, 0.0)
    check("rotation of a shift", close(rho, 0.375, 1e-12) and conv)

    # a wrong first torsion coefficient destroys summability
    run = circlenf.neumann(
        family="A", omega="golden", a="-1", d=1, order=10,
        z="0.1", ladder="1000:128000", n_deviation="k=1",
    )
    check("neumann deviation diverges", run["verdict"] == "diverging")

    # eventually periodic continued fraction => definitive verdict
    rep = circlenf.diagnose(what="brjuno", omega="golden", depth=20)
    check("brjuno golden verdict", rep["verdict"] == "yes")
    check("brjuno quotients", all(float(a) == 1.0 for a in rep["cf"]["a"][1:]))

    # map evaluation preserves the foliation circles
    w = circlenf.eval_map("A", "golden", -1.0, 1, 0.05 + 0.02j)
    w2 = circlenf.eval_map("A", "golden", -1.0, 1, complex(0.05, -0.02))
    check("eval modulus foliation", close(abs(w), abs(w2), 1e-15))

    if failures:
        print("failed:", ", ".join(failures))
        return 1
    print("all python smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
