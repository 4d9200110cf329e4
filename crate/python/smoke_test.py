#!/usr/bin/env python3
"""Smoke test for the qconvex_py extension module.

Builds nothing itself: run `cargo build -p qconvex-py` first, then
`python3 python/smoke_test.py`. The script locates the compiled cdylib in
target/, exposes it under the importable name, and exercises the main entry
points against known values.
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_extension() -> Path:
    candidates = []
    for profile in ("debug", "release"):
        d = REPO / "target" / profile
        candidates += list(d.glob("libqconvex_py.so"))
        candidates += list(d.glob("qconvex_py.dll"))
        candidates += list(d.glob("libqconvex_py.dylib"))
    if not candidates:
        sys.exit("extension not found; run `cargo build -p qconvex-py` first")
    return max(candidates, key=lambda p: p.stat().st_mtime)


def import_module():
    src = locate_extension()
    tmp = Path(tempfile.mkdtemp(prefix="qconvex_py_"))
    suffix = ".pyd" if src.suffix == ".dll" else ".so"
    shutil.copy2(src, tmp / f"qconvex_py{suffix}")
    sys.path.insert(0, str(tmp))
    import qconvex_py  # noqa: E402

    return qconvex_py


def approx(a, b, tol=1e-12):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    q = import_module()

    # torus anchors at n=4, p=1, r=1/sqrt(2)
    r = math.sqrt(0.5)
    spec = q.torus_spectrum(4, 1, r)
    for got, want in zip(spec, [-1.0, 1.0, 1.0, 1.0]):
        approx(got, want)
    approx(q.torus_mean_curvature(4, 1, r), 0.5)
    approx(q.torus_qconvexity_threshold(1, 2), r, tol=1e-15)

    # margins and the sharp bound
    margin, status = q.qconvex_margin([-1.0, 1.0, 1.0, 1.0], 2)
    approx(margin, 0.0)
    assert status == "nonnegative"
    approx(q.tmin_lower_bound(4, 1, 2, 2.0), -3.0)
    assert q.rigidity_check([-1.0, 1.0, 1.0, 1.0], 1, 2) == "boundary_rigid"
    assert q.rigidity_check([0.0, 1.0, 1.0, 1.0], 1, 2) == "interior"

    # closed form vs dense eigensolver on a diagonal example
    closed = q.closed_form_spectrum([-1.0, 1.0, 2.0, 3.0], 2)
    values = sorted(v for _, v in closed)
    dense = q.dense_extension_spectrum(
        [[-1.0, 0.0, 0.0, 0.0],
         [0.0, 1.0, 0.0, 0.0],
         [0.0, 0.0, 2.0, 0.0],
         [0.0, 0.0, 0.0, 3.0]],
        2,
    )
    for a, b in zip(values, dense):
        approx(a, b, tol=1e-9)

    # pointwise bound vanishes on the sharp boundary
    approx(q.bochner_pointwise_bound(1.0, 4, 2, 1, 0.5), 0.0)
    approx(q.pinching_threshold(4, 2, 1, 1.0), 0.5)

    # scan row at the sharp radius
    rows = q.sharpness_scan(4, 1, 2, [r])
    row = rows[0]
    approx(row["margin"], 0.0)
    approx(row["lambda_min"], -3.0)
    assert row["rigid"] is True

    # certification round trip through JSON
    scenario = json.dumps(
        {
            "n": 4,
            "q": 2,
            "p": 1,
            "ambient": {"c": 1.0},
            "points": [{"curvatures": [-1.0, 1.0, 1.0, 1.0]}],
        }
    )
    report = json.loads(q.certify_scenario(scenario))
    beta1 = report["certificate"]["degrees"][1]
    assert beta1["status"] == {"kind": "bounded_binomial", "bound": 4}
    assert beta1["rigidity_boundary"] is True

    # invalid input raises
    try:
        q.torus_spectrum(4, 1, 1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for r outside (0, 1)")

    # deterministic sweep
    a = q.random_sweep("tmin_bound", seed=7, n_max=6, samples=50)
    b = q.random_sweep("tmin_bound", seed=7, n_max=6, samples=50)
    assert a == b
    assert json.loads(a)["failures"] == 0

    print("qconvex_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
