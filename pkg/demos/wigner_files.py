#!/usr/bin/env python3
"""Round-trip a cat state through the WIGNER-GRID text format.

Samples the Wigner function of a cat state, writes it to disk, reloads it,
and scores the file without any reference to the original density matrix.
Also reads off the interference fringe frequency, which grows linearly with
the separation of the two branches.

Run:
    python3 demos/wigner_files.py [output.wig]
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

from macroq import catalog, phasespace
from macroq.measure import measure_operator, measure_wigner_grid


def main():
    alpha = 1.8
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(tempfile.gettempdir()) / "cat.wig"

    rho = catalog.make_scs(alpha)
    grid = phasespace.wigner_of(rho, points=241)
    grid.meta["state"] = f"scs alpha={alpha}"
    phasespace.save_wigner(grid, target)
    print(f"wrote {target} ({target.stat().st_size / 1024:.0f} kB, "
          f"{grid.values.shape[0]}x{grid.values.shape[1]} points)")

    loaded = phasespace.load_wigner(target)
    scored = measure_wigner_grid(loaded)
    direct = measure_operator(rho)
    print(f"size from the file:   {scored.value:.10f} "
          f"(err estimate {scored.err_estimate:.1e})")
    print(f"size from the matrix: {direct.value:.10f}")
    print(f"difference:           {abs(scored.value - direct.value):.2e}")

    freq = phasespace.fringe_frequency(loaded)
    print(f"\nfringe frequency along p at x=0: {freq:.4f} cycles per unit")
    print(f"expected 2 alpha / pi          : {2 * alpha / np.pi:.4f}")


if __name__ == "__main__":
    main()
