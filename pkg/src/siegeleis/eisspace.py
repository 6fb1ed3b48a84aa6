"""Indexing of the Eisenstein basis by multiplicative partitions of the level.

A partition (N0, N1, N2) of square-free N assigns each prime of N a rank 0,
1 or 2.  The basis of the weight-k, character-chi space consists of the
partitions with chi_q^2 = 1 for every q | N1, ordered by total rank ascending
(which makes every Hecke action table upper triangular), ties broken by
(N2, N1) descending.  That tie-break is a fixed convention of this package;
it exists so JSON output and test fixtures are stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .characters import DirichletCharacter
from .cyclotomic import CycNum, factorize, is_squarefree


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorize(n)))


@dataclass(frozen=True)
class Partition:
    """Multiplicative partition rho = (N0, N1, N2), pairwise coprime and
    square-free with product equal to the level."""

    n0: int
    n1: int
    n2: int

    def __post_init__(self):
        for n in (self.n0, self.n1, self.n2):
            if n < 1 or not is_squarefree(n):
                raise ValueError(f"partition parts must be square-free positive: {self}")
        ps = prime_factors(self.n0) + prime_factors(self.n1) + prime_factors(self.n2)
        if len(set(ps)) != len(ps):
            raise ValueError(f"partition parts must be pairwise coprime: {self}")

    @property
    def level(self) -> int:
        return self.n0 * self.n1 * self.n2

    def rank_of(self, q: int) -> int:
        if self.n0 % q == 0:
            return 0
        if self.n1 % q == 0:
            return 1
        if self.n2 % q == 0:
            return 2
        raise ValueError(f"{q} does not divide the level {self.level}")

    def rank_vector(self) -> dict[int, int]:
        return {q: self.rank_of(q) for q in prime_factors(self.level)}

    @property
    def total_rank(self) -> int:
        return sum(self.rank_vector().values())

    def sort_key(self):
        return (self.total_rank, -self.n2, -self.n1)

    def to_json(self):
        return {"N0": self.n0, "N1": self.n1, "N2": self.n2}

    @staticmethod
    def from_json(obj) -> "Partition":
        return Partition(int(obj["N0"]), int(obj["N1"]), int(obj["N2"]))

    def __repr__(self):
        return f"({self.n0},{self.n1},{self.n2})"


class EisSpace:
    """Ordered Eisenstein basis for (level, weight, character)."""

    def __init__(self, level: int, weight: int, char: DirichletCharacter,
                 basis: tuple[Partition, ...], parity_ok: bool):
        self.level = level
        self.weight = weight
        self.char = char
        self.basis = basis
        self.parity_ok = parity_ok
        self._index = {p: i for i, p in enumerate(basis)}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def index_of(self, p: Partition) -> int:
        return self._index[p]

    def __contains__(self, p: Partition) -> bool:
        return p in self._index

    def descriptor(self) -> dict:
        return {
            "level": self.level,
            "weight": self.weight,
            "char": self.char.spec_string(),
            "dimension": self.dimension,
            "basis": [
                {"index": i, **p.to_json()} for i, p in enumerate(self.basis)
            ],
        }

    def __repr__(self):
        return (
            f"EisSpace(N={self.level}, k={self.weight}, "
            f"chi={self.char.spec_string()}, dim={self.dimension})"
        )


def enumerate_partitions(N: int, char: DirichletCharacter | None = None,
                         k: int = 4, forced: bool = False) -> EisSpace:
    """Build the ordered basis of valid partitions.

    Primes q with chi_q^2 != 1 may not sit in N1 (the rank-1 sum is not
    well-defined there), so the dimension is 3^a * 2^b with a the number of
    primes where chi_q^2 = 1 and b the rest.  A parity violation
    chi(-1) != (-1)^k means the series all vanish identically; by default
    that is an error, with forced=True the space is still built (the action
    tables remain formally defined) and flagged parity_ok=False.
    """
    if N < 1 or not is_squarefree(N):
        raise ValueError(f"level {N} is not square-free")
    if k < 4:
        raise ValueError(f"weight {k} < 4 is not supported (series diverge)")
    if char is None:
        char = DirichletCharacter.trivial(N)
    if char.modulus != N:
        raise ValueError("character modulus must equal the level")
    parity_ok = char.valid_for_weight(k)
    if not parity_ok and not forced:
        raise ValueError(
            f"parity violation: chi(-1) = {char.parity()} != (-1)^{k}; "
            f"the space is identically zero (use forced=True to build anyway)"
        )
    parts: list[Partition] = []

    def rec(rest: tuple[int, ...], n0: int, n1: int, n2: int):
        if not rest:
            parts.append(Partition(n0, n1, n2))
            return
        q, tail = rest[0], rest[1:]
        rec(tail, n0 * q, n1, n2)
        if char.is_real_at(q):
            rec(tail, n0, n1 * q, n2)
        rec(tail, n0, n1, n2 * q)

    rec(prime_factors(N), 1, 1, 1)
    parts.sort(key=Partition.sort_key)
    return EisSpace(N, k, char, tuple(parts), parity_ok)


class EisVector:
    """Row vector in the ordered basis, kept as a partition -> CycNum map."""

    def __init__(self, space: EisSpace, coeffs: dict[Partition, CycNum]):
        for p in coeffs:
            if p not in space:
                raise ValueError(f"{p} is not in the basis")
        self.space = space
        self.coeffs = {p: c for p, c in coeffs.items() if not c.is_zero()}

    def dense(self) -> list[CycNum]:
        zero = CycNum.zero()
        out = [zero] * self.space.dimension
        for p, c in self.coeffs.items():
            out[self.space.index_of(p)] = c
        return out

    def to_json(self):
        return [
            {"partition": p.to_json(), "coeff": c.to_json()}
            for p, c in sorted(self.coeffs.items(), key=lambda t: self.space.index_of(t[0]))
        ]

    def __repr__(self):
        terms = ", ".join(
            f"{p}: {c!r}" for p, c in sorted(
                self.coeffs.items(), key=lambda t: self.space.index_of(t[0])
            )
        )
        return f"EisVector({terms})"
