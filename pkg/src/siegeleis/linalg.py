"""Dense exact linear algebra over cyclotomic-rational fields.

Matrices carry CycNum entries; vectors are plain lists.  Kernel, minimal
polynomial and eigen decomposition are all exact.  Eigen decomposition splits
the minimal polynomial only by trial roots drawn from the matrix entries
(plus a bounded rational-root search); whatever does not split inside the
working field is reported as an unsplit factor rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm as _int_lcm

from .cyclotomic import CycNum, as_cyc

_ZERO = CycNum.zero()
_ONE = CycNum.one()


class Poly:
    """Polynomial with CycNum coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [as_cyc(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    @staticmethod
    def one() -> "Poly":
        return Poly([_ONE])

    @staticmethod
    def from_roots(roots) -> "Poly":
        p = Poly.one()
        for r in roots:
            p = p * Poly([-as_cyc(r), _ONE])
        return p

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.coeffs[-1].inverse()
        return Poly([c * inv for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else _ZERO)
                + (other.coeffs[i] if i < len(other.coeffs) else _ZERO)
                for i in range(n)
            ]
        )

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = Poly([other])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, den: "Poly"):
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dd = den.degree
        lead_inv = den.coeffs[-1].inverse()
        q = [_ZERO] * max(len(r) - dd, 1)
        for i in range(len(r) - dd - 1, -1, -1):
            c = r[i + dd] * lead_inv
            if not c.is_zero():
                q[i] = c
                for j, d in enumerate(den.coeffs):
                    r[i + j] = r[i + j] - c * d
        return Poly(q), Poly(r)

    def __floordiv__(self, den):
        return self.divmod(den)[0]

    def __mod__(self, den):
        return self.divmod(den)[1]

    def __call__(self, x):
        x = as_cyc(x)
        val = _ZERO
        for c in reversed(self.coeffs):
            val = val * x + c
        return val

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            t = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                parts.append(f"{c!r}")
            elif c.is_one():
                parts.append(t)
            else:
                parts.append(f"({c!r})*{t}")
        return "Poly(" + " + ".join(parts) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly([])
    g = poly_gcd(a, b)
    return ((a * b) // g).monic()


# -- vectors ----------------------------------------------------------------


def vec(entries) -> list[CycNum]:
    return [as_cyc(e) for e in entries]


def vec_add(a, b):
    return [x + y for x, y in zip(a, b)]


def vec_scale(a, s):
    return [x * s for x in a]


def vec_is_zero(a) -> bool:
    return all(x.is_zero() for x in a)


class _Span:
    """Row space kept fully reduced (RREF); optionally tracks, for every
    stored row, its expression over the raw vectors inserted so far."""

    def __init__(self, track=False):
        self.rows: list[tuple[int, list[CycNum], list[CycNum] | None]] = []
        self.track = track
        self.count = 0  # raw vectors inserted so far

    def _reduce(self, v):
        w = list(v)
        combo = [_ZERO] * self.count + [_ONE] if self.track else None
        for piv, u, uc in self.rows:
            f = w[piv]
            if f.is_zero():
                continue
            for j, x in enumerate(u):
                if not x.is_zero():
                    w[j] = w[j] - f * x
            if self.track:
                for j, x in enumerate(uc):
                    if not x.is_zero():
                        combo[j] = combo[j] - f * x
        return w, combo

    def insert(self, v):
        """Insert a raw vector; return None if independent, else coefficients
        expressing it over the previously inserted raw vectors."""
        w, combo = self._reduce(v)
        piv = next((j for j, x in enumerate(w) if not x.is_zero()), None)
        if piv is None:
            self.count += 1
            if self.track:
                return [-c for c in combo[:-1]]
            return []
        inv = w[piv].inverse()
        w = [x * inv for x in w]
        if self.track:
            combo = [c * inv for c in combo]
        # keep stored rows reduced against the new pivot
        for idx, (p2, u2, uc2) in enumerate(self.rows):
            f = u2[piv]
            if f.is_zero():
                continue
            u2 = [x - f * y for x, y in zip(u2, w)]
            if self.track:
                uc2 = uc2 + [_ZERO] * (len(combo) - len(uc2))
                uc2 = [x - f * y for x, y in zip(uc2, combo)]
            self.rows[idx] = (p2, u2, uc2)
        self.rows.append((piv, w, combo))
        self.count += 1
        return None

    def contains(self, v) -> bool:
        w, _ = self._reduce(v)
        return vec_is_zero(w)

    @property
    def rank(self) -> int:
        return len(self.rows)


class CycMatrix:
    """Immutable dense matrix of CycNum entries, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_data):
        data = tuple(tuple(as_cyc(e) for e in row) for row in rows_data)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", len(data[0]) if data else 0)
        object.__setattr__(self, "data", data)

    def __setattr__(self, *a):
        raise AttributeError("CycMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "CycMatrix":
        return CycMatrix(
            [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(r: int, c: int) -> "CycMatrix":
        return CycMatrix([[_ZERO] * c for _ in range(r)])

    @staticmethod
    def diagonal(entries) -> "CycMatrix":
        es = [as_cyc(e) for e in entries]
        n = len(es)
        return CycMatrix(
            [[es[i] if i == j else _ZERO for j in range(n)] for i in range(n)]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, CycMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb)
            )
        )

    def __add__(self, other):
        self._same_shape(other)
        return CycMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other):
        self._same_shape(other)
        return CycMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shape mismatch")

    def __mul__(self, scalar):
        s = as_cyc(scalar)
        if s is NotImplemented:
            return NotImplemented
        return CycMatrix([[a * s for a in row] for row in self.data])

    __rmul__ = __mul__

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        bdata = other.data
        out = []
        for row in self.data:
            acc = [_ZERO] * other.cols
            for j, a in enumerate(row):
                if a.is_zero():
                    continue
                for l, b in enumerate(bdata[j]):
                    if not b.is_zero():
                        acc[l] = acc[l] + a * b
            out.append(acc)
        return CycMatrix(out)

    def mat_vec(self, v) -> list[CycNum]:
        if self.cols != len(v):
            raise ValueError("dimension mismatch")
        v = [as_cyc(x) for x in v]
        out = []
        for row in self.data:
            s = _ZERO
            for a, x in zip(row, v):
                if not a.is_zero() and not x.is_zero():
                    s = s + a * x
            out.append(s)
        return out

    def vec_mat(self, v) -> list[CycNum]:
        if self.rows != len(v):
            raise ValueError("dimension mismatch")
        acc = [_ZERO] * self.cols
        for x, row in zip(v, self.data):
            x = as_cyc(x)
            if x.is_zero():
                continue
            for j, a in enumerate(row):
                if not a.is_zero():
                    acc[j] = acc[j] + x * a
        return acc

    def transpose(self) -> "CycMatrix":
        return CycMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def commutes_with(self, other: "CycMatrix") -> bool:
        return (self @ other) == (other @ self)

    def _require_square(self):
        if self.rows != self.cols:
            raise ValueError("square matrix required")

    def kernel(self) -> list[list[CycNum]]:
        """Exact basis of the right null space {v : A v = 0}."""
        rows = [list(r) for r in self.data]
        pivots: list[tuple[int, int]] = []  # (row, col)
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [x * inv for x in rows[r]]
            prow = rows[r]
            for i in range(len(rows)):
                if i == r:
                    continue
                f = rows[i][c]
                if f.is_zero():
                    continue
                ri = rows[i]
                rows[i] = [x - f * y for x, y in zip(ri, prow)]
            pivots.append((r, c))
            r += 1
            if r == len(rows):
                break
        pivot_cols = {c for _, c in pivots}
        basis = []
        for f in range(self.cols):
            if f in pivot_cols:
                continue
            v = [_ZERO] * self.cols
            v[f] = _ONE
            for i, c in pivots:
                v[c] = -rows[i][f]
            basis.append(v)
        return basis

    def min_poly(self) -> Poly:
        """Monic minimal polynomial, exact."""
        self._require_square()
        n = self.rows
        if n == 0:
            return Poly.one()
        mp = Poly.one()
        seen = _Span()
        for s in range(n):
            if mp.degree == n:
                break
            e = [_ONE if i == s else _ZERO for i in range(n)]
            if seen.contains(e):
                continue
            local = _Span(track=True)
            v = e
            krylov = []
            while True:
                dep = local.insert(v)
                if dep is not None:
                    # v = sum dep[j] * A^j e  =>  annihilator x^d - sum dep[j] x^j
                    d = len(krylov)
                    coeffs = [-c for c in dep] + [_ONE]
                    mp = poly_lcm(mp, Poly(coeffs))
                    break
                krylov.append(v)
                v = self.mat_vec(v)
            for w in krylov:
                seen.insert(w)
        return mp

    def eigen(self) -> "EigenDecomposition":
        """Exact right eigen decomposition over the working field.

        Roots of the minimal polynomial are found by trial against the matrix
        entries and a bounded rational-root search; any factor that does not
        split this way is reported in ``unsplit`` instead of being guessed.
        """
        self._require_square()
        p = self.min_poly()
        rem = p
        roots: list[CycNum] = []
        for cand in self._root_candidates(p):
            if rem.degree < 1:
                break
            if any(cand == r for r in roots):
                continue
            hit = False
            while rem.degree >= 1 and rem(cand).is_zero():
                rem = rem // Poly([-cand, _ONE])
                hit = True
            if hit:
                roots.append(cand)
        pairs = []
        ident = CycMatrix.identity(self.rows)
        for lam in roots:
            space = (self - ident * lam).kernel()
            assert space, "minimal polynomial root without eigenvector"
            pairs.append((lam, space))
        unsplit = rem if rem.degree >= 1 else None
        return EigenDecomposition(min_poly=p, pairs=pairs, unsplit=unsplit)

    def _root_candidates(self, p: Poly):
        out: list[CycNum] = []

        def push(x):
            x = as_cyc(x)
            if all(not (x == y) for y in out):
                out.append(x)

        push(0)
        for row in self.data:
            for e in row:
                push(e)
        # bounded rational-root search for monic rational polynomials
        if all(c.is_rational() for c in p.coeffs) and not p.is_zero():
            den = _int_lcm(*(c.as_fraction().denominator for c in p.coeffs))
            c0 = p.coeffs[0].as_fraction() * den
            if c0 == 0:
                push(0)
            elif abs(c0.numerator) <= 10**9 and den <= 10**6:
                for d in _divisors(abs(int(c0))):
                    for q in _divisors(den):
                        push(Fraction(d, q))
                        push(Fraction(-d, q))
        return out

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.data]

    @staticmethod
    def from_json(obj) -> "CycMatrix":
        return CycMatrix([[CycNum.from_json(e) for e in row] for row in obj])

    def __repr__(self):
        body = "\n".join("  [" + ", ".join(repr(e) for e in row) + "]" for row in self.data)
        return f"CycMatrix {self.rows}x{self.cols}\n{body}"


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    small, big = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                big.append(n // d)
        d += 1
    return small + big[::-1]


@dataclass
class EigenDecomposition:
    """Roots of the minimal polynomial found in the working field, with exact
    right-eigenspace bases; ``unsplit`` is the leftover factor (None if the
    minimal polynomial split completely)."""

    min_poly: Poly
    pairs: list[tuple[CycNum, list[list[CycNum]]]]
    unsplit: Poly | None

    def eigenvalues(self) -> list[CycNum]:
        return [lam for lam, _ in self.pairs]


def intersect_spans(basis_a: list[list[CycNum]], basis_b: list[list[CycNum]]):
    """Exact basis of span(basis_a) intersect span(basis_b)."""
    if not basis_a or not basis_b:
        return []
    n = len(basis_a[0])
    stacked = CycMatrix(
        [
            [basis_a[i][j] if i < len(basis_a) else -basis_b[i - len(basis_a)][j]
             for i in range(len(basis_a) + len(basis_b))]
            for j in range(n)
        ]
    )
    out = []
    for combo in stacked.kernel():
        v = [_ZERO] * n
        for i, c in enumerate(combo[: len(basis_a)]):
            if not c.is_zero():
                for j, x in enumerate(basis_a[i]):
                    v[j] = v[j] + c * x
        if not vec_is_zero(v):
            out.append(v)
    return out
