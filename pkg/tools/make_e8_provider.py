#!/usr/bin/env python3
"""Generate data/e8_weight4_level1.coeffs, the weight-4 level-1 coefficient
table consumed by the Fourier projection pipeline.

The degree-2 Siegel Eisenstein series of weight 4 and level 1 equals the
genus-2 theta series of the E8 root lattice: the weight-4 level-1 space is
one-dimensional and both have constant term 1.  Its coefficient at an
integral Gram class [[a,b],[b,c]] is therefore the number of pairs x, y in
E8 with <x,x> = a, <x,y> = b, <y,y> = c, an exact integer.

Pair counts are evaluated with a dynamic program over the 8 coordinates of
y (state: partial norm, partial inner product with x, partial coordinate sum
mod 4, in doubled coordinates), run once per W(D8)-symmetry class of x.
Only the symmetry W(D8) < Aut(E8) (coordinate permutations and even sign
changes) is used; no transitivity assumptions enter.  Classes with odd
diagonal cannot be represented by an even lattice and are written as 0.

Self-checks: rank-1 shell sizes against 240*sigma_3, the symmetry
N(a,b,c) = N(c,b,a), and a brute-force pair enumeration for small norms.
"""

from __future__ import annotations

import sys
from math import isqrt
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from siegeleis.lattices import reduced_posdef_forms  # noqa: E402

DET_BOUND = 144
CONTENT_BOUND = 36
OUT = Path(__file__).resolve().parent.parent / "data" / "e8_weight4_level1.coeffs"


def enumerate_e8_doubled(norm_bound: int) -> list[tuple[int, ...]]:
    """All x in E8 with <x,x> <= norm_bound, as doubled coordinates 2x."""
    out = []
    cap4 = 4 * norm_bound

    def dfs(prefix, norm4, parity_kind):
        i = len(prefix)
        if i == 8:
            # E8: 2x has all-even or all-odd coords, and sum(2x) = 0 mod 4
            if sum(prefix) % 4 == 0:
                out.append(tuple(prefix))
            return
        k = isqrt(cap4 - norm4)
        start = -k if (k - parity_kind) % 2 == 0 else -(k - 1)
        for t in range(start, k + 1, 2):
            dfs(prefix + [t], norm4 + t * t, parity_kind)

    dfs([], 0, 0)  # integer coordinates (doubled even)
    dfs([], 0, 1)  # half-integer coordinates (doubled odd)
    return out


def d8_class_key(X: tuple[int, ...]):
    """Invariant of the W(D8) orbit: sorted |coords| plus the parity of the
    number of negative coordinates (absorbable when a zero is present)."""
    mags = tuple(sorted((abs(t) for t in X), reverse=True))
    parity = 0 if 0 in mags else sum(1 for t in X if t < 0) % 2
    return mags, parity


def d8_class_rep(key) -> tuple[int, ...]:
    mags, parity = key
    rep = list(mags)
    if parity:
        rep[-1] = -rep[-1]
    return tuple(rep)


def pair_counts_for(X: tuple[int, ...], norm_cap: int) -> dict[tuple[int, int], int]:
    """{(c, b): #y in E8 with <y,y> = c <= norm_cap and <x,y> = b} for the
    fixed x = X/2, via the coordinate DP in doubled units."""
    n4max = 4 * norm_cap
    a4 = sum(t * t for t in X)
    dmax = isqrt(a4 * n4max) + 1
    counts: dict[tuple[int, int], int] = {}
    for kind in (0, 1):  # doubled-even / doubled-odd y coordinates
        dp = np.zeros((n4max + 1, 2 * dmax + 1, 4), dtype=np.int64)
        dp[0, dmax, 0] = 1
        for i in range(8):
            ndp = np.zeros_like(dp)
            k = isqrt(n4max)
            start = -k if (k - kind) % 2 == 0 else -(k - 1)
            for t in range(start, k + 1, 2):
                nsq = t * t
                if nsq > n4max:
                    continue
                shift = X[i] * t
                lo = max(0, -shift)
                hi = min(2 * dmax + 1, 2 * dmax + 1 - shift)
                if lo >= hi:
                    continue
                src = dp[: n4max + 1 - nsq, lo:hi, :]
                dst = ndp[nsq:, lo + shift : hi + shift, :]
                for s in range(4):
                    dst[:, :, (s + t) % 4] += src[:, :, s]
            dp = ndp
        sheet = dp[:, :, 0]
        for c4, d4i in zip(*np.nonzero(sheet)):
            d4 = int(d4i) - dmax
            assert c4 % 4 == 0 and d4 % 4 == 0, (c4, d4)
            key = (int(c4) // 4, d4 // 4)
            counts[key] = counts.get(key, 0) + int(sheet[c4, d4i])
    return counts


def sigma3(n: int) -> int:
    return sum(d**3 for d in range(1, n + 1) if n % d == 0)


def main() -> None:
    max_a = isqrt(4 * DET_BOUND // 3)
    vectors = enumerate_e8_doubled(max_a)
    classes: dict = {}
    for X in vectors:
        key = d8_class_key(X)
        classes[key] = classes.get(key, 0) + 1

    # shell sizes r(m) for the rank-1 entries (an X = 0 run of the same DP)
    zero_counts = pair_counts_for((0,) * 8, CONTENT_BOUND)
    shells = {m: zero_counts.get((m, 0), 0) for m in range(CONTENT_BOUND + 1)}
    for n in range(1, CONTENT_BOUND // 2 + 1):
        assert shells[2 * n] == 240 * sigma3(n), f"shell {2*n} mismatch"
        assert shells[2 * n - 1] == 0

    # accumulate N(a, b, c) = sum over x-classes of |class| * count_class(c, b)
    table: dict[tuple[int, int, int], int] = {}
    for key, size in sorted(classes.items()):
        X = d8_class_rep(key)
        a4 = sum(t * t for t in X)
        if a4 == 0:
            continue
        a = a4 // 4
        c_cap = (DET_BOUND + (a // 2) ** 2) // a + 1
        for (c, b), n in pair_counts_for(X, c_cap).items():
            table[(a, b, c)] = table.get((a, b, c), 0) + size * n

    def coefficient(a: int, b: int, c: int) -> int:
        return table.get((a, b, c), 0)

    # symmetry self-check inside the window where both orderings were computed
    for a in range(1, max_a + 1):
        for c in range(a, max_a + 1):
            for b in range(0, a // 2 + 1):
                assert coefficient(a, b, c) == coefficient(c, b, a), (a, b, c)

    # brute-force cross-check on small norms
    small = [X for X in enumerate_e8_doubled(8)]
    arr = np.array(small, dtype=np.int64)
    norms = (arr * arr).sum(axis=1) // 4
    brute: dict[tuple[int, int, int], int] = {}
    sel = arr[norms == 2]
    dots = sel @ arr.T
    for i in range(sel.shape[0]):
        for j in range(arr.shape[0]):
            d = int(dots[i, j])
            assert d % 4 == 0
            kk = (2, d // 4, int(norms[j]))
            brute[kk] = brute.get(kk, 0) + 1
    for c in range(2, 9):
        for b in range(0, 2):
            assert coefficient(2, b, c) == brute.get((2, b, c), 0), (2, b, c)
    assert coefficient(2, 0, 2) == 30240 and coefficient(2, 1, 2) == 13440

    lines = [
        "# Fourier coefficients of the degree-2 Siegel Eisenstein series of",
        "# weight 4 and level 1, indexed by integral Gram classes [[a,b],[b,c]].",
        "# Provenance: the weight-4 level-1 space is one-dimensional, so the",
        "# series equals the genus-2 theta series of the E8 root lattice",
        "# (both normalized with constant term 1); each value below is the",
        "# exact number of pairs x, y in E8 with <x,x>=a, <x,y>=b, <y,y>=c,",
        "# counted by an integer dynamic program (tools/make_e8_provider.py).",
        "# Odd-diagonal classes are not represented by an even lattice: 0.",
        "!weight 4 level 1 group GL2",
        "0 0 0 1",
    ]
    for m in range(1, CONTENT_BOUND + 1):
        lines.append(f"{m} 0 0 {shells[m]}")
    for f in reduced_posdef_forms(DET_BOUND):
        lines.append(f"{f.a} {f.b} {f.c} {coefficient(f.a, f.b, f.c)}")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(lines)} lines)")


if __name__ == "__main__":
    main()
