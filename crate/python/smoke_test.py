#!/usr/bin/env python3
"""Builds the maxprop_py extension and exercises every binding once.

Run from anywhere: `python3 python/smoke_test.py`.
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(["cargo", "build", "-p", "maxprop-py"], cwd=ROOT, check=True)
    debug = ROOT / "target" / "debug"
    for name in ("libmaxprop_py.so", "libmaxprop_py.dylib", "maxprop_py.dll"):
        built = debug / name
        if built.exists():
            break
    else:
        sys.exit("extension library not found under target/debug")
    stage = Path(tempfile.mkdtemp(prefix="maxprop_py_"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage / f"maxprop_py{suffix}")
    sys.path.insert(0, str(stage))
    import maxprop_py

    return maxprop_py


def main():
    mp = build_and_import()

    # Norm evaluation: the frozen James-norm example and a plain lp check.
    assert abs(mp.norm("james:p=2", [1.0, 0.0, -1.0]) - math.sqrt(5)) < 1e-12
    assert abs(mp.norm("lp:p=2", [3.0, 4.0]) - 5.0) < 1e-12
    assert abs(mp.james_norm([1.0, 0.0, -1.0]) - math.sqrt(5)) < 1e-12

    # Moduli: c0 has the exact kink modulus, so lower == upper == max(0, t-1).
    for t, lo, hi in mp.modulus_bounds("c0", [0.5, 1.0, 1.5, 2.0]):
        assert lo == hi == max(0.0, t - 1.0)
    desc = mp.describe_space("lp:p=2")
    assert desc["flags"]["reflexive"] and desc["delta"]["power_type"]["exponent"] == 2.0

    # Absolute norm on the plane: pow 2 reproduces the Euclidean norm,
    # kink the max norm, identity the l1 norm.
    assert abs(mp.n2phi("pow 2", 3.0, 4.0) - 5.0) < 1e-12
    assert mp.n2phi("kink", 3.0, 4.0) == 4.0
    assert mp.n2phi("identity", 3.0, 4.0) == 7.0

    # Pair checker: the lp -> lq verdict with its rule, and a known failure.
    verdict = mp.check_pair("lp:p=2", "lp:p=3")
    wmp = verdict["claims"][0]
    assert wmp["property"] == "WMP" and wmp["status"] == "holds"
    assert wmp["rule"] == "modulus-domination"
    failing = mp.check_pair("r_oplus_inf_l2", "c0")
    assert failing["claims"][0]["status"] == "fails"

    # Orlicz report: t^2 is reflexive with both indices 2.
    rep = mp.orlicz_report("pow 2")
    assert abs(rep["index_p"] - 2.0) < 1e-3 and abs(rep["index_q"] - 2.0) < 1e-3
    assert rep["reflexive_sequence_space"]

    # Lipschitz-free quantities on a 3-point space: the free norm of a unit
    # molecule at distance 2 from the base is 2; the coordinate function's
    # best Lipschitz constant on {0, 1, 2} in R is 1.
    pts = [[0.0], [1.0], [2.0]]
    assert abs(mp.free_norm(pts, [0.0, 1.0]) - 2.0) < 1e-12
    assert abs(mp.lipschitz_constant(pts, [0.0, 1.0, 2.0]) - 1.0) < 1e-12

    # Example verifiers end-to-end.
    assert mp.verify_example("opD", n=50)["passed"]
    assert mp.verify_example("schur", n=10)["passed"]

    print("smoke test passed")


if __name__ == "__main__":
    main()
