"""Time the compiled shrinkage kernels against their numpy twins.

Shapes follow the default pipeline: 3000 atoms x 12 leads, one group per
atom or one group per shift. A full C-HiLasso solve is timed with each
backend in a subprocess so the shrinkage share of the total is visible.

    python benchmarks/bench_kernels.py [--repeat 200]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from bsecg._core import _fallback
from bsecg.solvers import GroupPartition

try:
    from bsecg._core import _kernels
except ImportError:
    _kernels = None

SOLVE = """
import json, time, numpy as np
from bsecg import _core
from bsecg.solvers import GroupPartition, chilasso
rng = np.random.default_rng(0)
B = rng.standard_normal((80, 3000)) / 9.0
Y = B[:, ::250] @ rng.standard_normal((12, 12))
t = time.perf_counter()
res = chilasso(B, Y, GroupPartition.equal(3000, {groups}), 0.05, 0.05)
print(json.dumps({{"backend": _core.BACKEND, "seconds": time.perf_counter() - t,
                   "iterations": res.iterations}}))
"""


def time_kernels(repeat, groups):
    rng = np.random.default_rng(1)
    v = rng.standard_normal((3000, 12))
    bounds = GroupPartition.equal(3000, groups).bounds
    rows = []
    for name, args in (("soft_threshold", (v, 0.5)),
                       ("group_norms", (v, bounds)),
                       ("hierarchical_prox", (v, bounds, 0.5, 0.5)),
                       ("hierarchical_penalty", (v, bounds, 0.5, 0.5))):
        py = getattr(_fallback, name)
        t_py = min(timeit.repeat(lambda: py(*args), number=repeat, repeat=3)) / repeat
        if _kernels is None:
            rows.append((name, groups, t_py, float("nan")))
            continue
        cy = getattr(_kernels, name)
        t_cy = min(timeit.repeat(lambda: cy(*args), number=repeat, repeat=3)) / repeat
        rows.append((name, groups, t_py, t_cy))
    return rows


def time_solve(groups, pure):
    env = dict(os.environ)
    env.pop("BSECG_PURE_PYTHON", None)
    if pure:
        env["BSECG_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", SOLVE.format(groups=groups)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--no-solve", action="store_true", help="skip the full-solve timing")
    args = ap.parse_args(argv)

    print(f"{'kernel':<22}{'groups':>7}{'numpy us':>11}{'cython us':>11}{'speedup':>9}")
    for groups in (3000, 100):
        for name, g, t_py, t_cy in time_kernels(args.repeat, groups):
            print(f"{name:<22}{g:>7}{t_py * 1e6:>11.1f}{t_cy * 1e6:>11.1f}{t_py / t_cy:>9.2f}")
    if args.no_solve or _kernels is None:
        return 0
    print()
    print(f"{'solve':<22}{'groups':>7}{'backend':>11}{'seconds':>11}{'iters':>9}")
    for groups in (3000, 100):
        for pure in (False, True):
            r = time_solve(groups, pure)
            print(f"{'chilasso 80x3000x12':<22}{groups:>7}{r['backend']:>11}"
                  f"{r['seconds']:>11.3f}{r['iterations']:>9d}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
