#!/usr/bin/env python3
"""Smoke test for the vcdlab_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/ (release
preferred), stages it under the importable name, and checks a handful of
known values end to end.

    cargo build -p vcdlab-py
    python3 python/smoke_test.py
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> Path:
    candidates = [
        REPO / "target" / "release" / "libvcdlab_py.so",
        REPO / "target" / "debug" / "libvcdlab_py.so",
        REPO / "target" / "release" / "libvcdlab_py.dylib",
        REPO / "target" / "debug" / "libvcdlab_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p vcdlab-py")
    stage = Path(tempfile.mkdtemp(prefix="vcdlab-py-"))
    shutil.copy2(built, stage / "vcdlab_py.so")
    return stage


def main() -> None:
    sys.path.insert(0, str(stage_module()))
    import vcdlab_py as vl

    # Cohomology of small spaces.
    circle = vl.Complex.cycle(5)
    assert circle.betti(0) == 1 and circle.betti(1) == 1
    arc = circle.induced_subcomplex([1, 2, 3, 4])
    dim, basis = circle.restriction_kernel(arc, 1)
    assert dim == 1 and len(basis) == 1, (dim, basis)
    dim_full, _ = circle.restriction_kernel(circle.full_subcomplex(), 1)
    assert dim_full == 0

    # Grid arrangement: Betti number, kernel spectrum, instance schema.
    assert vl.grid_betti(3) == 4
    dims = vl.grid_sweep_kernel_dimensions(3)
    assert dims == [0, 1, 2, 3, 4], dims
    assert vl.grid_distinct_kernel_count(6) == 26
    inst = json.loads(vl.grid_instance_json(3))
    assert inst["schema"] == "vcdlab-instance/1" and inst["kind"] == "grid"

    # Generic hyperplanes: 5 lines in the projective plane realize 16 patterns.
    assert vl.hyperplane_pattern_count(2, 5, seed=42) == 16

    # Pencil construction: C(4,2) special kernels plus the generic one.
    assert vl.pencil_distinct_kernel_count(4, seed=5) == 7

    # Slope fitting on an exact power law.
    slope, _, r2 = vl.fit_slope([(n, n * n) for n in range(2, 12)])
    assert math.isclose(slope, 2.0, abs_tol=1e-9) and math.isclose(r2, 1.0, abs_tol=1e-12)

    # Shatter-function facts: intervals have VC dimension 2.
    ground = 8
    sets = [0]
    for a in range(ground):
        for b in range(a + 1, ground + 1):
            sets.append(((1 << b) - 1) & ~((1 << a) - 1))
    assert vl.vc_dimension(ground, sets) == 2
    assert vl.sauer_shelah(ground, sets, 2)

    # Seeded epsilon-net experiment is reproducible and near-certain here.
    net_size, rate = vl.epsilon_net_experiment(
        40, eps="1/4", c_const="2", density_bound=2, trials=50, seed=777
    )
    assert net_size == 23 and rate >= 0.9, (net_size, rate)

    print("vcdlab_py smoke test: OK")


if __name__ == "__main__":
    main()
