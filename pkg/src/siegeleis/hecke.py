"""Exact Hecke action tables on the Eisenstein basis, the simultaneous
eigenbasis, and the relation operators that generate the space from the
corner basis vector.

Conventions.  Rows are indexed by the source basis element: the row of rho
holds the coefficients of E_rho|T in the ordered basis, so eigenvectors are
row vectors and operator words compose as left-to-right matrix products.
For a prime q dividing the level, the row of rho is supported on rho itself
and the one or two partitions obtained by moving q up one or two ranks;
every move raises ranks, so all tables are upper triangular in the basis
order.  The branch structure at q is decided by the local character: trivial,
quadratic (where the (-1|q) sign enters), or of higher order (where the
off-diagonal terms vanish).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import is_prime, legendre_epsilon
from .cyclotomic import CycNum, as_cyc
from .eisspace import EisSpace, EisVector, Partition, prime_factors
from .linalg import CycMatrix

_ZERO = CycNum.zero()
_ONE = CycNum.one()


@dataclass(frozen=True)
class HeckeOp:
    kind: str  # "T" (degree p) or "T1" (degree p^2)
    p: int

    def __post_init__(self):
        if self.kind not in ("T", "T1"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __str__(self):
        return f"T({self.p})" if self.kind == "T" else f"T1({self.p}^2)"

    def spec_string(self) -> str:
        return f"{self.kind}:{self.p}"


@dataclass
class HeckeMatrix:
    space: EisSpace
    op: HeckeOp
    mat: CycMatrix

    def to_json(self):
        return {
            "level": self.space.level,
            "weight": self.space.weight,
            "char": self.space.char.spec_string(),
            "op": self.op.spec_string(),
            "basis": [p.to_json() for p in self.space.basis],
            "matrix": self.mat.to_json(),
        }


def _chi_over(space: EisSpace, part_value: int, n: int) -> CycNum:
    """chi restricted to the primes of part_value, evaluated at n."""
    return space.char.eval_over(prime_factors(part_value), n)


def _row_prime_to_level(space: EisSpace, rho: Partition, op: HeckeOp) -> dict:
    """Diagonal action for p not dividing the level."""
    p, k = op.p, space.weight
    c0, c1, c2 = rho.n0, rho.n1, rho.n2
    if op.kind == "T":
        val = (
            _chi_over(space, c0, p * p) * _chi_over(space, c1, p) * p ** (2 * k - 3)
            + _chi_over(space, c0 * c2, p) * Fraction(p ** (k - 2) * (p + 1))
            + _chi_over(space, c1, p) * _chi_over(space, c2, p * p)
        )
    else:
        val = (p + 1) * (
            _chi_over(space, c0, p * p) * p ** (2 * k - 3)
            + space.char(p) * Fraction(p ** (k - 3) * (p - 1))
            + _chi_over(space, c2, p * p)
        )
    return {rho: val}


def _row_at_level_prime(space: EisSpace, rho: Partition, op: HeckeOp, q: int) -> dict:
    """Row of rho for T(q) or T1(q^2) with q dividing the level."""
    k = space.weight
    local = space.char.local(q)
    rank = rho.rank_of(q)
    c0, c1, c2 = rho.n0, rho.n1, rho.n2

    if rank == 2:
        if op.kind == "T":
            val = _chi_over(space, c0, q * q) * _chi_over(space, c1, q) * q ** (2 * k - 3)
        else:
            val = _chi_over(space, c0, q * q) * ((q + 1) * q ** (2 * k - 3))
        return {rho: val}

    if rank == 1:
        # q | N1 forces chi_q^2 = 1 (basis validity)
        up = Partition(c0, c1 // q, c2 * q)
        if op.kind == "T":
            pref = _chi_over(space, c0 * c2, q)
            row = {rho: pref * q ** (k - 1)}
            if local.is_trivial:
                row[up] = pref * Fraction(q ** (k - 3) * (q * q - 1))
            return row
        diag = (
            _chi_over(space, c0, q * q) * q ** (2 * k - 2)
            + _chi_over(space, c2, q * q) * q
        )
        row = {rho: diag}
        if local.is_trivial:
            chi_rest = space.char.eval_over(
                (r for r in prime_factors(space.level) if r != q), q
            )
            row[up] = (
                (chi_rest * q ** (k - 2) + _chi_over(space, c2, q * q))
                * Fraction(q * q - 1, q)
            )
        return row

    # rank 0: q | N0
    up1 = Partition(c0 // q, c1 * q, c2)
    up2 = Partition(c0 // q, c1, c2 * q)
    if op.kind == "T":
        pref = _chi_over(space, c1, q) * _chi_over(space, c2, q * q)
        row = {rho: pref}
        if local.is_trivial:
            row[up1] = pref * Fraction(q - 1, q)
            row[up2] = pref * Fraction(q - 1, q)
        elif local.is_real:
            row[up2] = pref * Fraction(legendre_epsilon(q) * (q - 1), q * q)
        return row
    chi2 = _chi_over(space, c2, q * q)
    row = {rho: chi2 * (q + 1)}
    if local.is_trivial:
        chi_rest = space.char.eval_over(
            (r for r in prime_factors(space.level) if r != q), q
        )
        row[up1] = (chi_rest * q ** (k - 1) + chi2) * Fraction(q - 1, q)
        row[up2] = chi2 * Fraction(q * q - 1, q * q)
    elif local.is_real:
        row[up2] = chi2 * Fraction(legendre_epsilon(q) * (q * q - 1), q * q)
    return row


def hecke_matrix(space: EisSpace, op: HeckeOp) -> HeckeMatrix:
    """Exact action table, rows indexed by the source basis element."""
    n = space.dimension
    at_level = space.level % op.p == 0
    rows = []
    for rho in space.basis:
        if at_level:
            entries = _row_at_level_prime(space, rho, op, op.p)
        else:
            entries = _row_prime_to_level(space, rho, op)
        row = [_ZERO] * n
        for target, val in entries.items():
            row[space.index_of(target)] = as_cyc(val)
        rows.append(row)
    return HeckeMatrix(space, op, CycMatrix(rows))


class SpaceOperators:
    """Per-space cache of constructed Hecke matrices.

    Construction is pure; each cache entry is published with a single dict
    assignment, so concurrent readers never observe a half-built table.
    """

    def __init__(self, space: EisSpace):
        self.space = space
        self._cache: dict[HeckeOp, HeckeMatrix] = {}

    def matrix(self, op: HeckeOp) -> HeckeMatrix:
        hit = self._cache.get(op)
        if hit is None:
            hit = hecke_matrix(self.space, op)
            self._cache[op] = hit
        return hit

    def stored(self) -> dict[HeckeOp, HeckeMatrix]:
        return dict(self._cache)

    def level_ops(self) -> list[HeckeOp]:
        return [
            HeckeOp(kind, q)
            for q in prime_factors(self.space.level)
            for kind in ("T", "T1")
        ]


# -- eigenbasis ---------------------------------------------------------------


def _coeff_a(space: EisSpace, rho: Partition, q: int) -> CycNum:
    # moves q from N0 to N1; nonzero only for trivial chi_q
    if not space.char.local(q).is_trivial:
        return _ZERO
    k = space.weight
    chi12 = _chi_over(space, rho.n1 * rho.n2, q)
    chi0 = _chi_over(space, rho.n0 // q, q)
    return -(chi12 * Fraction(q - 1, q)) / (chi0 * q ** (k - 1) - chi12)


def _coeff_b(space: EisSpace, rho: Partition, q: int) -> CycNum:
    # moves q from N0 to N2
    local = space.char.local(q)
    if not local.is_real:
        return _ZERO
    k = space.weight
    chi2_sq = _chi_over(space, rho.n2, q * q)
    chi0 = _chi_over(space, rho.n0 // q, q)
    chi0_sq = _chi_over(space, rho.n0 // q, q * q)
    if local.is_trivial:
        chi12 = _chi_over(space, rho.n1 * rho.n2, q)
        num = chi2_sq * Fraction(q - 1, q) * (chi0 * q ** (k - 3) - chi12)
        den = (chi0 * q ** (k - 1) - chi12) * (chi0_sq * q ** (2 * k - 3) - chi2_sq)
        return -(num / den)
    eps = legendre_epsilon(q)
    num = chi2_sq * Fraction(eps * (q - 1), q * q)
    return -(num / (chi0_sq * q ** (2 * k - 3) - chi2_sq))


def _coeff_c(space: EisSpace, rho: Partition, q: int) -> CycNum:
    # moves q from N1 to N2; nonzero only for trivial chi_q
    if not space.char.local(q).is_trivial:
        return _ZERO
    k = space.weight
    chi2 = _chi_over(space, rho.n2, q)
    chi01 = _chi_over(space, rho.n0 * (rho.n1 // q), q)
    return -(chi2 * Fraction(q * q - 1, q * q)) / (chi01 * q ** (k - 2) - chi2)


@dataclass
class EigenVectorEntry:
    partition: Partition
    vector: EisVector
    eigenvalues: dict[HeckeOp, CycNum]


@dataclass
class EigenSystem:
    space: EisSpace
    entries: list[EigenVectorEntry]

    def entry(self, rho: Partition) -> EigenVectorEntry:
        for e in self.entries:
            if e.partition == rho:
                return e
        raise KeyError(rho)

    def to_json(self):
        return [
            {
                "partition": e.partition.to_json(),
                "vector": e.vector.to_json(),
                "eigenvalues": {
                    op.spec_string(): lam.to_json()
                    for op, lam in sorted(
                        e.eigenvalues.items(), key=lambda t: (t[0].p, t[0].kind)
                    )
                },
            }
            for e in self.entries
        ]


def eigen_vector(space: EisSpace, rho: Partition) -> EisVector:
    """The simultaneous eigenvector attached to rho: a double sum over
    coprime divisor moves out of N0 and N1 with coefficients a, b, c
    extended multiplicatively."""
    primes0 = prime_factors(rho.n0)
    primes1 = prime_factors(rho.n1)
    coeffs: dict[Partition, CycNum] = {}

    def add_term(n0, n1, n2, coeff):
        target = Partition(n0, n1, n2)
        coeffs[target] = coeffs.get(target, _ZERO) + coeff

    def rec1(idx, n0, n1, n2, coeff):
        if coeff.is_zero():
            return
        if idx == len(primes1):
            add_term(n0, n1, n2, coeff)
            return
        q = primes1[idx]
        rec1(idx + 1, n0, n1, n2, coeff)
        rec1(idx + 1, n0, n1 // q, n2 * q, coeff * _coeff_c(space, rho, q))

    def rec0(idx, n0, n1, n2, coeff):
        if coeff.is_zero():
            return
        if idx == len(primes0):
            rec1(0, n0, n1, n2, coeff)
            return
        q = primes0[idx]
        rec0(idx + 1, n0, n1, n2, coeff)
        rec0(idx + 1, n0 // q, n1 * q, n2, coeff * _coeff_a(space, rho, q))
        rec0(idx + 1, n0 // q, n1, n2 * q, coeff * _coeff_b(space, rho, q))

    rec0(0, rho.n0, rho.n1, rho.n2, _ONE)
    return EisVector(space, coeffs)


def eigenbasis(ops: SpaceOperators) -> EigenSystem:
    """One verified eigenvector per basis partition.

    The level operators T(q), T1(q^2) for q | N are constructed if absent;
    each eigenvector is then checked exactly against every stored matrix
    (v.M = lambda.v with lambda the diagonal entry at rho).  A verification
    failure is an internal error, not a data condition.
    """
    space = ops.space
    for op in ops.level_ops():
        ops.matrix(op)
    stored = ops.stored()
    entries = []
    for rho in space.basis:
        vec = eigen_vector(space, rho)
        dense = vec.dense()
        i = space.index_of(rho)
        eigs: dict[HeckeOp, CycNum] = {}
        for op, hm in stored.items():
            lam = hm.mat[i, i]
            image = hm.mat.vec_mat(dense)
            for a, b in zip(image, dense):
                if not (a == lam * b):
                    raise RuntimeError(
                        f"eigenvector verification failed for rho={rho}, op={op}"
                    )
            eigs[op] = lam
        entries.append(EigenVectorEntry(rho, vec, eigs))
    return EigenSystem(space, entries)


# -- closed forms and comparison ----------------------------------------------


def eigenvalue_closed_form(space: EisSpace, rho: Partition, op: HeckeOp) -> CycNum:
    """The published eigenvalue tables, verbatim (including the p | N1 entry
    of the T1 table that the matrices contradict; see compare_eigenvalues)."""
    p, k = op.p, space.weight
    c0, c1, c2 = rho.n0, rho.n1, rho.n2
    N = space.level
    if N % p != 0:
        if op.kind == "T":
            return as_cyc(
                (_chi_over(space, c0 * c1, p) * p ** (k - 1) + _chi_over(space, c2, p))
                * (_chi_over(space, c0, p) * p ** (k - 2) + _chi_over(space, c1 * c2, p))
            )
        return as_cyc(
            (p + 1)
            * (
                _chi_over(space, c0, p * p) * p ** (2 * k - 3)
                + space.char(p) * Fraction(p ** (k - 3) * (p - 1))
                + _chi_over(space, c2, p * p)
            )
        )
    rank = rho.rank_of(p)
    if op.kind == "T":
        if rank == 2:
            return as_cyc(
                _chi_over(space, c0, p * p) * _chi_over(space, c1, p) * p ** (2 * k - 3)
            )
        if rank == 1:
            return as_cyc(_chi_over(space, c0 * c2, p) * p ** (k - 1))
        return as_cyc(_chi_over(space, c1, p) * _chi_over(space, c2, p * p))
    if rank == 2:
        return as_cyc(_chi_over(space, c0, p * p) * ((p + 1) * p ** (2 * k - 3)))
    if rank == 1:
        return as_cyc(
            _chi_over(space, c0, p * p) * p ** (2 * k - 3)
            + _chi_over(space, c2, p * p) * p
        )
    return as_cyc(_chi_over(space, c2, p * p) * (p + 1))


def compare_eigenvalues(ops: SpaceOperators, op_list=None) -> list[dict]:
    """Matrix-derived eigenvalues vs the closed-form tables, per (rho, op).

    The matrices are authoritative.  The only expected disagreement is
    T1(q^2) at partitions with q | N1, where the table entry has q^{2k-3}
    in place of the matrices' q^{2k-2}; those rows come back match=False
    with expected_mismatch=True.
    """
    space = ops.space
    if op_list is None:
        op_list = ops.level_ops()
    system = eigenbasis(ops)
    out = []
    for e in system.entries:
        for op in op_list:
            hm = ops.matrix(op)
            i = space.index_of(e.partition)
            mval = hm.mat[i, i]
            cval = eigenvalue_closed_form(space, e.partition, op)
            expected_mismatch = (
                op.kind == "T1"
                and space.level % op.p == 0
                and e.partition.rank_of(op.p) == 1
            )
            out.append(
                {
                    "partition": e.partition.to_json(),
                    "op": op.spec_string(),
                    "matrix_value": mval.to_json(),
                    "closed_form": cval.to_json(),
                    "match": bool(mval == cval),
                    "expected_mismatch": expected_mismatch,
                }
            )
    return out


# -- relation operators (corner-to-basis words) --------------------------------


def s_constant(space: EisSpace, q: int) -> CycNum:
    """c(q) = q^2 / ((q-1)(chi_{N/q}(q) q^k - 1)); needs trivial chi_q."""
    k = space.weight
    chi_rest = space.char.eval_over(
        (r for r in prime_factors(space.level) if r != q), q
    )
    return as_cyc(Fraction(q * q, q - 1)) / (chi_rest * q**k - 1)


def s_operator(ops: SpaceOperators, q: int, which: str) -> HeckeMatrix:
    """The Hecke-algebra elements S1(q), S2(q) as exact matrices.

    S1 moves the corner prime q into rank 1 and needs chi_q = 1; S2 moves it
    into rank 2 and needs chi_q^2 = 1 (with a separate form when chi_q is
    quadratic).
    """
    space = ops.space
    if space.level % q != 0:
        raise ValueError(f"{q} does not divide the level {space.level}")
    local = space.char.local(q)
    k = space.weight
    T = ops.matrix(HeckeOp("T", q)).mat
    T1 = ops.matrix(HeckeOp("T1", q)).mat
    ident = CycMatrix.identity(space.dimension)
    if which == "S1":
        if not local.is_trivial:
            raise ValueError(f"S1({q}) requires trivial chi_{q}")
        c = s_constant(space, q)
        mat = (
            T1 - T * Fraction(q + 1, q) - ident * Fraction(q * q - 1, q)
        ) * c
    elif which == "S2":
        if local.is_trivial:
            c = s_constant(space, q)
            chi_rest = space.char.eval_over(
                (r for r in prime_factors(space.level) if r != q), q
            )
            mat = (
                T * (chi_rest * q ** (k - 1) + 1)
                - T1
                - ident * ((chi_rest * q ** (k - 2) - 1) * q)
            ) * c
        elif local.is_real:
            eps = legendre_epsilon(q)
            mat = (T - ident) * Fraction(eps * q * q, q - 1)
        else:
            raise ValueError(f"S2({q}) requires chi_{q}^2 = 1")
    else:
        raise ValueError(f"unknown relation operator {which!r}; want S1 or S2")
    op = HeckeOp("T", q)  # carrier only; the word label lives in the caller
    return HeckeMatrix(space, op, mat)


def s_word(ops: SpaceOperators, n1: int, n2: int) -> CycMatrix:
    """Product S1(n1)S2(n2), primes ascending, S1 factors first.

    The factors commute, so the order is a determinism convention only.
    Requires chi trivial on n1, chi^2 trivial on n2, and n1*n2 | N coprime.
    """
    space = ops.space
    from math import gcd

    if gcd(n1, n2) != 1 or space.level % (n1 * n2) != 0:
        raise ValueError("need coprime n1*n2 dividing the level")
    for q in prime_factors(n1):
        if not space.char.local(q).is_trivial:
            raise ValueError(f"S1 word needs trivial chi at {q}")
    for q in prime_factors(n2):
        if not space.char.local(q).is_real:
            raise ValueError(f"S2 word needs chi_q^2 = 1 at {q}")
    mat = CycMatrix.identity(space.dimension)
    for q in prime_factors(n1):
        mat = mat @ s_operator(ops, q, "S1").mat
    for q in prime_factors(n2):
        mat = mat @ s_operator(ops, q, "S2").mat
    return mat
