#!/usr/bin/env python3
"""Regenerates tests/fixtures/phase_fixture.csv.

Each row holds {t * n^c} computed with mpmath at 200 bits. t and c are
written with repr() so the C++ side parses exactly the same binary doubles
the reference used.
"""

import random
import sys

import mpmath

mpmath.mp.prec = 200

FIXED = [
    (1.0, 4, 0.5),
    (0.5, 3, 1.0),
    (1.0, 10**6, 1.2),
    (1.0, 2, 1.0),
    (0.5, 999983, 1.05),
    (0.5, 9999991, 1.05),
    (-0.5, 99999989, 1.05),
    (10.0, 999999937, 1.47),
    (1e6, 999999937, 1.1),
    (3.75, 10**9, 1.3),
    (1e-3, 123456789, 1.9),
    (1.0, 999999937, 2.0),
    (-7.25, 65537, 1.61803398875),
    (1.0, 10**7, 0.995),
    (2.0, 10**8 + 7, 0.9),
]


def reference(t, n, c):
    v = mpmath.mpf(t) * mpmath.power(mpmath.mpf(n), mpmath.mpf(c))
    return v - mpmath.floor(v), v


def main(path):
    rng = random.Random(20221)
    rows = list(FIXED)
    while len(rows) < 64:
        t = rng.choice([1.0, 0.5, -0.5, 0.001, 10.0, 1000.0, -3.3]) * rng.uniform(0.5, 2.0)
        n = rng.randint(1, 10**rng.randint(1, 9))
        c = rng.uniform(0.05, 2.0)
        rows.append((t, n, c))

    with open(path, "w") as f:
        f.write("t,n,c,frac\n")
        for t, n, c in rows:
            fr, v = reference(t, n, c)
            if abs(v) >= mpmath.mpf(2) ** 70:
                continue
            text = mpmath.nstr(fr, 30, min_fixed=-mpmath.inf, max_fixed=mpmath.inf, strip_zeros=False)
            f.write(f"{t!r},{n},{c!r},{text}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/phase_fixture.csv")
