#!/usr/bin/env python3
"""Closed-form decoherence curves: cats versus squeezed states.

Sweeps the loss parameter r (fraction of the field amplitude lost) for cat
states and squeezed vacua of comparable size.  Small losses favor the cat,
but beyond roughly ten percent energy loss the squeezed state keeps a larger
fraction of its size, an order of magnitude more by r = 0.6.

Run:
    python3 demos/decoherence_curves.py
"""

import numpy as np

from macroq import catalog


def size_scs(alpha, r):
    x = 1.0 - r * r
    tau = np.inf if x == 0.0 else -np.log(x)
    return catalog.closed_form_decohered_scs(alpha, tau).value


def size_squeezed(s, r):
    a0, b0 = catalog.squeezed_char_params(s)
    x = 1.0 - r * r
    tau = np.inf if x == 0.0 else -np.log(x)
    return catalog.gaussian_measure(*catalog.gaussian_decohere(a0, b0, tau)).value


def main():
    alpha, s = 2.0, 1.5
    print(f"cat alpha={alpha} starts at {size_scs(alpha, 0.0):.4f}, "
          f"squeezed s={s} starts at {size_squeezed(s, 0.0):.4f}\n")
    print(f"{'r':>5} {'I cat':>12} {'I squeezed':>12}   relative survival (cat vs squeezed)")
    i0c, i0s = size_scs(alpha, 0.0), size_squeezed(s, 0.0)
    for r in np.arange(0.0, 0.71, 0.05):
        ic, isq = size_scs(alpha, r), size_squeezed(s, r)
        print(f"{r:>5.2f} {ic:>12.6f} {isq:>12.6f}   {100*ic/i0c:>6.2f}% vs {100*isq/i0s:>6.2f}%")
    print("\nboth sizes cross zero at r = 1/sqrt(2) and dip slightly negative")
    print("before the state empties into the vacuum; a negative value simply")
    print("means the purity is momentarily growing under the loss channel")


if __name__ == "__main__":
    main()
