"""Formal Fourier expansions as class functions on reduced Gram forms, the
sublattice-sum Hecke action, provider-file ingestion, and the exact Krylov
spectral projection that splits an ingested level-1 expansion into the
eigencomponents attached to the level-N basis partitions.

An expansion stores a total coefficient table on a bounded domain: the zero
form, rank-1 classes [[m,0],[0,0]] with m <= content_bound, and positive
definite classes with det <= det_bound.  Lookups outside the bounds raise
CoverageError ("unknown"), missing keys inside the bounds are rejected at
construction time.

The sublattice-sum operator U(Q,P) maps the coefficient at a class T to the
sum of the coefficients at P * (H T H^t) over the index-Q sublattices H, so
determinant coverage shrinks by Q^2 P^2 and rank-1 content coverage by Q^2 P
per application.  U(Q,P) is implemented verbatim as its own normalization of
the Hecke algebra; its exact relation to the T(p), T1(p^2) tables is measured
by calibrate_normalization, never hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycNum, as_cyc, factorize, is_squarefree
from .eisspace import Partition, enumerate_partitions, prime_factors
from .hecke import HeckeOp, eigenvalue_closed_form
from .lattices import (
    GL2,
    SL2,
    GramForm,
    ZERO_FORM,
    class_key,
    key_representative,
    reduced_class_keys,
    reduced_posdef_forms,
    restrict_and_scale,
    sublattices,
)
from .linalg import _Span, Poly

_ZERO = CycNum.zero()
_ONE = CycNum.one()


class CoverageError(ValueError):
    """A lookup or operation needs coefficients beyond the stored bounds."""

    def __init__(self, message, missing_det=None, missing_content=None):
        super().__init__(message)
        self.missing_det = missing_det
        self.missing_content = missing_content


class LabelingError(ValueError):
    """Joint eigenvalue data does not determine the partition labels."""


@dataclass(frozen=True)
class UOperator:
    """Sublattice-sum operator: coefficient at T of f|U(Q,P) is the sum of
    f over the index-Q sublattices with the form scaled by P."""

    Q: int
    P: int

    def __post_init__(self):
        if self.Q < 1 or self.P < 1 or not is_squarefree(self.Q * self.P):
            raise ValueError(f"U({self.Q},{self.P}) needs square-free Q*P")

    @property
    def det_factor(self) -> int:
        return (self.Q * self.P) ** 2

    @property
    def content_factor(self) -> int:
        return self.Q * self.Q * self.P

    def spec_string(self) -> str:
        return f"U:{self.Q},{self.P}"

    def __str__(self):
        return self.spec_string()


class FourierExpansion:
    """Class function on reduced Gram classes, total on a bounded domain."""

    def __init__(self, mode: str, det_bound: int, content_bound: int,
                 coeffs: dict, validate: bool = True):
        if mode not in (GL2, SL2):
            raise ValueError(f"unknown group mode {mode!r}")
        if det_bound < 0 or content_bound < 0:
            raise ValueError("bounds must be nonnegative")
        self.mode = mode
        self.det_bound = det_bound
        self.content_bound = content_bound
        self.coeffs = {k: as_cyc(v) for k, v in coeffs.items()}
        if validate:
            for key in self.domain_keys():
                if key not in self.coeffs:
                    raise ValueError(f"missing coefficient for {key} within bounds")

    def domain_keys(self) -> list:
        return reduced_class_keys(self.det_bound, self.content_bound, self.mode)

    def _key_form(self, key) -> GramForm:
        return key if self.mode == GL2 else key[0]

    def value_of_key(self, key) -> CycNum:
        form = self._key_form(key)
        rank = form.rank()
        if rank == 1 and form.a > self.content_bound:
            raise CoverageError(
                f"rank-1 content {form.a} exceeds coverage {self.content_bound}",
                missing_content=form.a,
            )
        if rank == 2 and form.det > self.det_bound:
            raise CoverageError(
                f"determinant {form.det} exceeds coverage {self.det_bound}",
                missing_det=form.det,
            )
        return self.coeffs[key]

    def value(self, T: GramForm) -> CycNum:
        return self.value_of_key(class_key(T, self.mode))

    def scale(self, s) -> "FourierExpansion":
        s = as_cyc(s)
        return FourierExpansion(
            self.mode, self.det_bound, self.content_bound,
            {k: v * s for k, v in self.coeffs.items()}, validate=False,
        )

    def add(self, other: "FourierExpansion") -> "FourierExpansion":
        return combine([(_ONE, self), (_ONE, other)])

    def restricted(self, det_bound: int, content_bound: int) -> "FourierExpansion":
        if det_bound > self.det_bound or content_bound > self.content_bound:
            raise CoverageError("cannot enlarge coverage by restriction")
        keys = reduced_class_keys(det_bound, content_bound, self.mode)
        return FourierExpansion(
            self.mode, det_bound, content_bound,
            {k: self.coeffs[k] for k in keys}, validate=False,
        )

    def sample_vector(self, det_bound: int, content_bound: int) -> list[CycNum]:
        if det_bound > self.det_bound or content_bound > self.content_bound:
            raise CoverageError(
                f"sample domain (det<={det_bound}, content<={content_bound}) "
                f"exceeds coverage (det<={self.det_bound}, content<={self.content_bound})",
                missing_det=det_bound if det_bound > self.det_bound else None,
            )
        keys = reduced_class_keys(det_bound, content_bound, self.mode)
        return [self.coeffs[k] for k in keys]

    def agrees_with(self, other: "FourierExpansion") -> bool:
        db = min(self.det_bound, other.det_bound)
        cb = min(self.content_bound, other.content_bound)
        for key in reduced_class_keys(db, cb, self.mode):
            if not (self.coeffs[key] == other.coeffs[key]):
                return False
        return True

    def to_json(self):
        out = []
        for key in self.domain_keys():
            form = self._key_form(key)
            entry = {"form": form.to_json(), "value": self.coeffs[key].to_json()}
            if self.mode == SL2:
                entry["orient"] = key[1]
            out.append(entry)
        return {
            "group": self.mode,
            "det_bound": self.det_bound,
            "content_bound": self.content_bound,
            "coeffs": out,
        }

    def to_provider_lines(self, weight: int | None = None) -> list[str]:
        """Line format mirroring the provider files (GL2 only)."""
        if self.mode != GL2:
            raise ValueError("provider line format is defined for GL2 tables")
        lines = []
        if weight is not None:
            lines.append(f"!weight {weight} level 1 group GL2")
        for key in self.domain_keys():
            v = self.coeffs[key]
            if not v.is_rational():
                raise ValueError("provider line format stores rational values")
            lines.append(f"{key.a} {key.b} {key.c} {v.as_fraction()}")
        return lines


def expansion_from_function(mode: str, fn, det_bound: int, content_bound: int
                            ) -> FourierExpansion:
    keys = reduced_class_keys(det_bound, content_bound, mode)
    return FourierExpansion(
        mode, det_bound, content_bound, {k: as_cyc(fn(k)) for k in keys},
        validate=False,
    )


def constant_expansion(value, det_bound: int, content_bound: int,
                       mode: str = GL2) -> FourierExpansion:
    return expansion_from_function(mode, lambda k: value, det_bound, content_bound)


def combine(terms) -> FourierExpansion:
    """Exact linear combination sum(c_i * f_i) on the common domain."""
    terms = [(as_cyc(c), f) for c, f in terms]
    if not terms:
        raise ValueError("empty combination")
    mode = terms[0][1].mode
    if any(f.mode != mode for _, f in terms):
        raise ValueError("mixed group modes")
    db = min(f.det_bound for _, f in terms)
    cb = min(f.content_bound for _, f in terms)
    coeffs = {}
    for key in reduced_class_keys(db, cb, mode):
        total = _ZERO
        for c, f in terms:
            total = total + c * f.coeffs[key]
        coeffs[key] = total
    return FourierExpansion(mode, db, cb, coeffs, validate=False)


def apply_U(f: FourierExpansion, u: UOperator, *,
            min_det_bound: int | None = None) -> FourierExpansion:
    """Sublattice-sum action; output coverage shrinks by the operator's
    determinant and content factors.  If min_det_bound is given and the
    input cannot support it, the error names the first missing determinant."""
    db = f.det_bound // u.det_factor
    cb = f.content_bound // u.content_factor
    if min_det_bound is not None and db < min_det_bound:
        raise CoverageError(
            f"need input determinant coverage {u.det_factor * min_det_bound}, "
            f"have {f.det_bound}",
            missing_det=u.det_factor * (db + 1),
        )
    subs = sublattices(u.Q)
    coeffs = {}
    for key in reduced_class_keys(db, cb, f.mode):
        T = key_representative(key, f.mode)
        total = _ZERO
        for H in subs:
            total = total + f.value(restrict_and_scale(T, H, u.P))
        coeffs[key] = total
    return FourierExpansion(f.mode, db, cb, coeffs, validate=False)


# -- provider files -----------------------------------------------------------


@dataclass
class CoefficientProvider:
    """Externally derived level-1 coefficient table."""

    source: str
    weight: int
    level: int
    expansion: FourierExpansion


def provider_parse(lines, source: str = "<memory>") -> CoefficientProvider:
    weight = None
    level = None
    mode = GL2
    table: dict = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("!"):
            toks = line[1:].split()
            if (len(toks) != 6 or toks[0] != "weight" or toks[2] != "level"
                    or toks[4] != "group"):
                raise ValueError(
                    f"{source}:{lineno}: bad header; want "
                    f"'!weight k level 1 group GL2|SL2'"
                )
            weight = int(toks[1])
            level = int(toks[3])
            mode = toks[5]
            if mode not in (GL2, SL2):
                raise ValueError(f"{source}:{lineno}: unknown group {mode!r}")
            continue
        toks = line.split()
        if len(toks) not in (4, 5):
            raise ValueError(f"{source}:{lineno}: malformed line {line!r}")
        a, b, c = int(toks[0]), int(toks[1]), int(toks[2])
        val = as_cyc(Fraction(toks[3]))
        form = GramForm(a, b, c)
        if not form.is_psd():
            raise ValueError(f"{source}:{lineno}: form {form} is not psd")
        if mode == SL2:
            orient = int(toks[4]) if len(toks) == 5 else 1
            red = class_key(GramForm(a, b if orient > 0 else -b, c), SL2)
            key = red
        else:
            key = class_key(form, GL2)
        if key in table and not (table[key] == val):
            raise ValueError(
                f"{source}:{lineno}: inconsistent duplicate for class {key}"
            )
        table[key] = val
    if weight is None:
        raise ValueError(f"{source}: missing '!weight ...' header line")
    zero_key = class_key(ZERO_FORM, mode)
    if zero_key not in table:
        raise ValueError(f"{source}: zero-form coefficient missing")

    def form_of(key):
        return key if mode == GL2 else key[0]

    # content bound: longest full prefix of rank-1 classes
    cb = 0
    while class_key(GramForm(cb + 1, 0, 0), mode) in table:
        cb += 1
    # det bound: largest D with every reduced positive definite class covered
    posdef_dets = [form_of(k).det for k in table if form_of(k).rank() == 2]
    max_det = max(posdef_dets, default=0)
    db = 0
    keys_by_det: dict[int, list] = {}
    for key in reduced_class_keys(max_det, 0, mode):
        d = form_of(key).det
        if d > 0:
            keys_by_det.setdefault(d, []).append(key)
    for d in range(1, max_det + 1):
        if not all(k in table for k in keys_by_det.get(d, [])):
            break
        db = d
    exp = FourierExpansion(mode, db, cb, table, validate=False)
    return CoefficientProvider(source, weight, level, exp)


def provider_load(path) -> CoefficientProvider:
    with open(path, "r", encoding="utf-8") as fh:
        return provider_parse(fh, source=str(path))


# -- Krylov spectral projection ------------------------------------------------


@dataclass
class SpectralComponent:
    eigenvalues: dict[UOperator, CycNum]
    expansion: FourierExpansion


def _smooth_divisors(n: int, limit: int = 10**6) -> list[int] | None:
    """Divisors of |n| via trial factorization; None when n has a cofactor
    we refuse to factorize (root search is then skipped, not guessed)."""
    n = abs(n)
    if n == 0:
        return None
    fac: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= limit:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n > limit * limit:
            return None
        fac[n] = fac.get(n, 0) + 1
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def _poly_distinct_roots(p: Poly) -> list[CycNum]:
    """All roots of a monic polynomial found in the working field; raises if
    the polynomial does not split with distinct roots."""
    rem = p
    roots: list[CycNum] = []
    candidates: list[CycNum] = [_ZERO]
    if all(c.is_rational() for c in p.coeffs):
        from math import lcm

        den = lcm(*(c.as_fraction().denominator for c in p.coeffs))
        c0 = p.coeffs[0].as_fraction() * den
        num_divs = _smooth_divisors(int(c0)) if c0 else []
        den_divs = _smooth_divisors(den)
        if num_divs is not None and den_divs is not None:
            for nd in num_divs:
                for dd in den_divs:
                    candidates.append(as_cyc(Fraction(nd, dd)))
                    candidates.append(as_cyc(Fraction(-nd, dd)))
    for cand in candidates:
        if rem.degree < 1:
            break
        if any(cand == r for r in roots):
            continue
        mult = 0
        while rem.degree >= 1 and rem(cand).is_zero():
            rem = rem // Poly([-cand, _ONE])
            mult += 1
        if mult > 1:
            raise LabelingError(
                f"minimal polynomial has the repeated root {cand!r}; "
                f"components are not separable"
            )
        if mult:
            roots.append(cand)
    if rem.degree >= 1:
        raise LabelingError(
            f"minimal polynomial factor {rem!r} does not split over the "
            f"working field"
        )
    return roots


def _split_by(g: FourierExpansion, u: UOperator, sample_bound: int
              ) -> list[tuple[CycNum, FourierExpansion]]:
    """Split g into exact eigencomponents of u via a sampled Krylov space.

    The minimal monic relation among g, g|u, g|u^2, ... is detected on the
    sample domain (rank stabilization = first repeated rank); Lagrange
    projectors then rebuild the components on the largest common domain, and
    each component is re-checked to be an exact eigenvector on its full
    remaining coverage.  Insufficient coverage raises CoverageError."""
    krylov = [g]
    span = _Span(track=True)
    span.insert(g.sample_vector(sample_bound, sample_bound))
    rel = None
    while rel is None:
        try:
            nxt = apply_U(krylov[-1], u)
            sample = nxt.sample_vector(sample_bound, sample_bound)
        except CoverageError as exc:
            raise CoverageError(
                f"Krylov rank not stabilized for {u} within coverage; raise "
                f"determinant coverage (depth {len(krylov)}): {exc}",
                missing_det=exc.missing_det,
            ) from exc
        dep = span.insert(sample)
        if dep is None:
            krylov.append(nxt)
        else:
            rel = dep
    d = len(krylov)
    minpoly = Poly([-c for c in rel] + [_ONE])
    roots = _poly_distinct_roots(minpoly)
    if d == 1:
        # g itself is an eigenvector (relation x - lambda)
        return [(roots[0], g)]
    out = []
    for lam in roots:
        numer = Poly.from_roots([r for r in roots if not (r == lam)])
        denom = numer(lam)
        coeffs = [c / denom for c in numer.coeffs]
        comp = combine(list(zip(coeffs, krylov)))
        image = apply_U(comp, u)
        if not image.agrees_with(comp.scale(lam)):
            raise CoverageError(
                f"component validation failed for {u}; the sample domain "
                f"(<= {sample_bound}) is too small, raise coverage"
            )
        out.append((lam, comp))
    return out


def krylov_spectral(f: FourierExpansion, ops, sample_bound: int
                    ) -> list[SpectralComponent]:
    """Joint exact spectral decomposition of f under commuting U operators.

    Components always sum to f coefficientwise on the common domain; the
    caller is responsible for interpreting the eigenvalue tags."""
    ops = list(ops)
    _check_commuting(f, ops)
    comps = [SpectralComponent({}, f)]
    for u in ops:
        nxt = []
        for comp in comps:
            for lam, piece in _split_by(comp.expansion, u, sample_bound):
                tags = dict(comp.eigenvalues)
                tags[u] = lam
                nxt.append(SpectralComponent(tags, piece))
        comps = nxt
    total = combine([(_ONE, c.expansion) for c in comps])
    if not total.agrees_with(f):
        raise AssertionError("spectral components do not sum to the input")
    return comps


def _check_commuting(f: FourierExpansion, ops) -> None:
    for i, u in enumerate(ops):
        for v in ops[i + 1 :]:
            a = apply_U(apply_U(f, u), v)
            b = apply_U(apply_U(f, v), u)
            if not a.agrees_with(b):
                raise ValueError(f"sampled operators {u} and {v} do not commute")


# -- the level-N projection pipeline -------------------------------------------


def _rank_labels(comps: list[SpectralComponent], u: UOperator) -> dict[int, int]:
    """Map component index -> rank 0/1/2 by ascending eigenvalue of u."""
    vals = []
    for c in comps:
        lam = c.eigenvalues[u]
        if not lam.is_rational():
            raise LabelingError(
                f"eigenvalue {lam!r} of {u} is not rational; cannot order ranks"
            )
        vals.append(lam.as_fraction())
    distinct = sorted(set(vals))
    if len(distinct) != 3:
        raise LabelingError(
            f"expected 3 distinct eigenvalues of {u}, measured {len(distinct)}"
        )
    order = {v: i for i, v in enumerate(distinct)}
    return {i: order[v] for i, v in enumerate(vals)}


def project_components(provider: CoefficientProvider, N: int, k: int,
                       sample_bound: int = 2) -> list[tuple[Partition, SpectralComponent]]:
    """Split the ingested level-1 expansion into the 3^omega(N) joint
    eigencomponents and label each by its partition.

    Labels come from three independent signals that must agree: the unique
    component with nonzero zero-form coefficient is the corner (N,1,1); per
    prime, the eigenvalues of U(1,q) sorted ascending give the rank of q; and
    the U(q,1) eigenvalues must induce the same rank order.  Disagreement or
    ambiguity raises LabelingError rather than guessing."""
    if provider.weight != k:
        raise ValueError(
            f"provider weight {provider.weight} does not match k={k}"
        )
    if provider.level != 1:
        raise ValueError("the projection pipeline ingests level-1 tables")
    if N < 1 or not is_squarefree(N):
        raise ValueError(f"level {N} is not square-free")
    primes = prime_factors(N)
    ops: list[UOperator] = []
    for q in primes:
        ops.append(UOperator(1, q))
        ops.append(UOperator(q, 1))
    comps = krylov_spectral(provider.expansion, ops, sample_bound)
    expected = 3 ** len(primes)
    if len(comps) != expected:
        raise LabelingError(
            f"expected {expected} joint components for N={N}, got {len(comps)}"
        )
    # corner detection by the zero-form coefficient
    zk = class_key(ZERO_FORM, provider.expansion.mode)
    nonzero = [i for i, c in enumerate(comps) if not c.expansion.coeffs[zk].is_zero()]
    if len(nonzero) != 1:
        raise LabelingError(
            f"expected exactly one component with nonzero zero-form "
            f"coefficient, found {len(nonzero)}"
        )
    corner = nonzero[0]
    ranks: dict[int, dict[int, int]] = {}
    for q in primes:
        by_scaling = _rank_labels(comps, UOperator(1, q))
        by_sums = _rank_labels(comps, UOperator(q, 1))
        if by_scaling != by_sums:
            raise LabelingError(
                f"rank orders from U(1,{q}) and U({q},1) disagree"
            )
        if by_scaling[corner] != 0:
            raise LabelingError(
                f"corner component is not rank 0 at q={q}"
            )
        ranks[q] = by_scaling
    out = []
    seen = set()
    for i, comp in enumerate(comps):
        parts = [1, 1, 1]
        for q in primes:
            parts[ranks[q][i]] *= q
        rho = Partition(*parts)
        if rho in seen:
            raise LabelingError(f"two components labeled {rho}")
        seen.add(rho)
        out.append((rho, comp))
    out.sort(key=lambda t: t[0].sort_key())
    return out


def project_eisenstein(provider: CoefficientProvider, N: int, k: int,
                       sample_bound: int = 2) -> dict[Partition, FourierExpansion]:
    """Partition-labeled eigencomponents of the level-1 expansion; they sum
    to the input coefficientwise, and exactly the corner component has a
    nonzero zero-form coefficient."""
    return {
        rho: comp.expansion
        for rho, comp in project_components(provider, N, k, sample_bound)
    }


def _fit_relation(measured: list[CycNum], closed: list[CycNum]) -> dict:
    """Describe measured = alpha*closed (+ beta) over the rationals if such a
    relation exists; descriptive only."""
    pairs = list(zip(measured, closed))
    for mu, lam in pairs:
        if not lam.is_zero():
            alpha = mu / lam
            if all(m == alpha * l for m, l in pairs):
                return {"type": "scalar", "factor": alpha.to_json()}
            break
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            dl = pairs[i][1] - pairs[j][1]
            if dl.is_zero():
                continue
            alpha = (pairs[i][0] - pairs[j][0]) / dl
            beta = pairs[i][0] - alpha * pairs[i][1]
            if all(m == alpha * l + beta for m, l in pairs):
                return {
                    "type": "affine",
                    "factor": alpha.to_json(),
                    "offset": beta.to_json(),
                }
    return {"type": "none"}


def calibrate_normalization(provider: CoefficientProvider, N: int, k: int,
                            sample_bound: int = 2) -> dict:
    """Measured U eigenvalues per partition next to the closed-form tables,
    with the fitted rational relation when one exists.  The report documents
    the normalization empirically; nothing here is asserted."""
    from .hecke import SpaceOperators

    labeled = project_components(provider, N, k, sample_bound)
    space = enumerate_partitions(N, None, k, forced=(k % 2 == 1))
    ops = SpaceOperators(space)
    report = {
        "level": N,
        "weight": k,
        "sample_bound": sample_bound,
        "primes": {},
    }
    for q in prime_factors(N):
        entry = {}
        for u, hop in ((UOperator(1, q), HeckeOp("T", q)),
                       (UOperator(q, 1), HeckeOp("T1", q))):
            measured = [comp.eigenvalues[u] for _, comp in labeled]
            closed = [
                eigenvalue_closed_form(space, rho, hop) for rho, _ in labeled
            ]
            hm = ops.matrix(hop)
            diag = [
                hm.mat[space.index_of(rho), space.index_of(rho)]
                for rho, _ in labeled
            ]
            distinct_vals: list[CycNum] = []
            for m in measured:
                if all(not (m == seen) for seen in distinct_vals):
                    distinct_vals.append(m)
            entry[hop.kind] = {
                "op": u.spec_string(),
                "measured": {
                    str(rho): comp.eigenvalues[u].to_json()
                    for rho, comp in labeled
                },
                "closed_form": {
                    str(rho): c.to_json()
                    for (rho, _), c in zip(labeled, closed)
                },
                "matrix_diagonal": {
                    str(rho): d.to_json()
                    for (rho, _), d in zip(labeled, diag)
                },
                "distinct_count": len(distinct_vals),
                "relation_to_closed_form": _fit_relation(measured, closed),
                "relation_to_matrix": _fit_relation(measured, diag),
            }
        report["primes"][str(q)] = entry
    return report
