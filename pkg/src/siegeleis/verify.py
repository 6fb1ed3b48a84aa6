"""Independent oracle suite tying the modules together.

run_suite executes every module invariant at a configured scale and collects
one record per check with status pass, fail, or documented-mismatch.  The
documented-mismatch status is reserved for the one known disagreement
between the eigenvalue table and the action matrices (the T1 entry at
rank-1 primes); it keeps the suite green without hiding regressions, since
the mismatch must still have exactly the expected shape on both sides.

Reports are reproducible: the same config (including the seed) produces an
identical report.  Wall-clock timings are kept out of the serialized report
for that reason and exposed separately.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import enumerate_characters
from .cyclotomic import CycNum, as_cyc, is_squarefree
from .eisspace import EisSpace, Partition, enumerate_partitions, prime_factors
from .fourier import UOperator, apply_U, combine, constant_expansion, \
    expansion_from_function, krylov_spectral
from .hecke import HeckeOp, SpaceOperators, eigen_vector, eigenbasis, \
    eigenvalue_closed_form, s_word
from .lattices import GL2, GramForm, isotropic_lines, reduce_form, \
    sublattices, transform
from .linalg import intersect_spans

PASS = "pass"
FAIL = "fail"
DOCUMENTED = "documented-mismatch"

DESK_CONFIG = {
    "N_max": 30,
    "k_set": [4, 5, 6, 7],
    "prime_max": 13,
    "char_orders": [1, 2, 4],
    "trials": 1000,
    "seed": 7,
}

QUICK_CONFIG = {
    "N_max": 6,
    "k_set": [4, 5],
    "prime_max": 5,
    "char_orders": [1, 2],
    "trials": 50,
    "seed": 7,
}

PRESETS = {"desk": DESK_CONFIG, "quick": QUICK_CONFIG}


@dataclass
class CheckRecord:
    name: str
    parameters: dict
    status: str
    details: str = ""

    def to_json(self):
        return {
            "name": self.name,
            "parameters": self.parameters,
            "status": self.status,
            "details": self.details,
        }


@dataclass
class VerificationReport:
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, DOCUMENTED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self):
        return {
            "config": self.config,
            "counts": self.counts(),
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
        }


def subgroup_count_oracle(q: int) -> int:
    """Count the index-q subgroups of Z^2 by enumerating the kernels of the
    surjections Z^2 -> Z/qZ and deduplicating them as point sets."""
    if q > 50:
        raise ValueError("oracle is intended for primes q <= 50")
    kernels = set()
    for a in range(q):
        for b in range(q):
            if a == 0 and b == 0:
                continue
            if b % q:
                binv = pow(b, -1, q)
                pts = frozenset((t, (-a * t * binv) % q) for t in range(q))
            else:
                pts = frozenset((0, t) for t in range(q))
            kernels.add(pts)
    return len(kernels)


def _primes_up_to(n: int) -> list[int]:
    from .characters import is_prime

    return [p for p in range(2, n + 1) if is_prime(p)]


def spaces_in_scope(config) -> list[EisSpace]:
    out = []
    for N in range(1, config["N_max"] + 1):
        if not is_squarefree(N):
            continue
        for char in enumerate_characters(N, config["char_orders"]):
            for k in config["k_set"]:
                if not char.valid_for_weight(k):
                    continue
                out.append(enumerate_partitions(N, char, k))
    return out


def _expected_mismatch_values(space, rho, q):
    """The two sides of the known T1 disagreement at q | N1."""
    from .hecke import _chi_over

    k = space.weight
    matrix_side = (
        _chi_over(space, rho.n0, q * q) * q ** (2 * k - 2)
        + _chi_over(space, rho.n2, q * q) * q
    )
    table_side = (
        _chi_over(space, rho.n0, q * q) * q ** (2 * k - 3)
        + _chi_over(space, rho.n2, q * q) * q
    )
    return matrix_side, table_side


def run_suite(config: dict) -> VerificationReport:
    """Run every module invariant at the configured scale; see module doc."""
    config = dict(config)
    report = VerificationReport(config=config)
    rng = random.Random(config["seed"])
    checks = [
        ("exactmath-field-axioms", _check_field_axioms),
        ("eisspace-enumeration", _check_eisspace),
        ("hecke-commutativity", _check_commutativity),
        ("hecke-triangularity", _check_triangularity),
        ("hecke-eigen-exactness", _check_eigen_exactness),
        ("hecke-closed-form-comparison", _check_closed_forms),
        ("hecke-relation-words", _check_relation_words),
        ("hecke-level-one-specialization", _check_level_one_specialization),
        ("hecke-eigen-oracle", _check_eigen_oracle),
        ("lattice-sublattice-counts", _check_sublattice_counts),
        ("lattice-reduction-invariance", _check_reduction_invariance),
        ("lattice-isotropy", _check_isotropy),
        ("fourier-operator-properties", _check_fourier_properties),
    ]
    for name, fn in checks:
        t0 = time.perf_counter()
        report.checks.extend(fn(config, rng))
        report.timings[name] = time.perf_counter() - t0
    return report


# -- individual check groups ---------------------------------------------------


def _random_cyc(rng, base_m: int) -> CycNum:
    # a random divisor conductor keeps mixed-m arithmetic under the cap
    m = rng.choice([d for d in range(1, base_m + 1)
                    if base_m % d == 0 and d % 4 != 2])
    from .cyclotomic import euler_phi

    coeffs = [
        Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        for _ in range(euler_phi(m))
    ]
    return CycNum(m, coeffs)


def _check_field_axioms(config, rng):
    trials = config["trials"]
    bad = 0
    for _ in range(trials):
        base = rng.choice([m for m in range(1, 25) if m % 4 != 2])
        a = _random_cyc(rng, base)
        b = _random_cyc(rng, base)
        c = _random_cyc(rng, base)
        if not ((a + b) + c == a + (b + c)):
            bad += 1
        if not (a * (b + c) == a * b + a * c):
            bad += 1
        if not a.is_zero() and not (a * a.inverse() == 1):
            bad += 1
    status = PASS if bad == 0 else FAIL
    return [CheckRecord(
        "exactmath-field-axioms", {"trials": trials, "max_conductor": 24},
        status, f"{bad} violations",
    )]


def _check_eisspace(config, rng):
    out = []
    for space in spaces_in_scope(config):
        a = sum(1 for q in prime_factors(space.level) if space.char.is_real_at(q))
        b = len(prime_factors(space.level)) - a
        ok = space.dimension == 3**a * 2**b
        again = enumerate_partitions(space.level, space.char, space.weight)
        ok = ok and again.basis == space.basis
        out.append(CheckRecord(
            "eisspace-enumeration",
            {"level": space.level, "char": space.char.spec_string(),
             "weight": space.weight},
            PASS if ok else FAIL,
            f"dimension {space.dimension}",
        ))
    return out


def _sweep_ops(space, config) -> SpaceOperators:
    ops = SpaceOperators(space)
    for p in _primes_up_to(config["prime_max"]):
        ops.matrix(HeckeOp("T", p))
        ops.matrix(HeckeOp("T1", p))
    return ops


def _check_commutativity(config, rng):
    out = []
    for space in spaces_in_scope(config):
        ops = _sweep_ops(space, config)
        mats = [hm.mat for hm in ops.stored().values()]
        bad = 0
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if not (mats[i] @ mats[j]) == (mats[j] @ mats[i]):
                    bad += 1
        out.append(CheckRecord(
            "hecke-commutativity",
            {"level": space.level, "char": space.char.spec_string(),
             "weight": space.weight, "prime_max": config["prime_max"]},
            PASS if bad == 0 else FAIL,
            f"{len(mats)} operators, {bad} non-commuting pairs",
        ))
    return out


def _check_triangularity(config, rng):
    out = []
    for space in spaces_in_scope(config):
        ops = _sweep_ops(space, config)
        bad = 0
        for hm in ops.stored().values():
            for i, ri in enumerate(space.basis):
                rv_i = ri.rank_vector()
                for j, rj in enumerate(space.basis):
                    if hm.mat[i, j].is_zero():
                        continue
                    rv_j = rj.rank_vector()
                    if any(rv_j[q] < rv_i[q] for q in rv_i):
                        bad += 1
        out.append(CheckRecord(
            "hecke-triangularity",
            {"level": space.level, "char": space.char.spec_string(),
             "weight": space.weight},
            PASS if bad == 0 else FAIL,
            f"{bad} rank-decreasing entries",
        ))
    return out


def _check_eigen_exactness(config, rng):
    out = []
    for space in spaces_in_scope(config):
        ops = _sweep_ops(space, config)
        try:
            eigenbasis(ops)  # raises on any failed exact verification
            status, detail = PASS, f"{space.dimension} eigenvectors verified"
        except RuntimeError as exc:
            status, detail = FAIL, str(exc)
        out.append(CheckRecord(
            "hecke-eigen-exactness",
            {"level": space.level, "char": space.char.spec_string(),
             "weight": space.weight, "operators": 2 * len(_primes_up_to(config["prime_max"]))},
            status, detail,
        ))
    return out


def _check_closed_forms(config, rng):
    out = []
    for space in spaces_in_scope(config):
        ops = SpaceOperators(space)
        system = eigenbasis(ops)
        bad = 0
        matched = 0
        for e in system.entries:
            i = space.index_of(e.partition)
            for op in ops.level_ops():
                mval = ops.matrix(op).mat[i, i]
                cval = eigenvalue_closed_form(space, e.partition, op)
                exempt = op.kind == "T1" and e.partition.rank_of(op.p) == 1
                if exempt:
                    mwant, twant = _expected_mismatch_values(
                        space, e.partition, op.p
                    )
                    if mval == mwant and cval == twant and not (mval == cval):
                        out.append(CheckRecord(
                            "hecke-closed-form-comparison",
                            {"level": space.level,
                             "char": space.char.spec_string(),
                             "weight": space.weight,
                             "partition": str(e.partition),
                             "op": op.spec_string()},
                            DOCUMENTED,
                            "table q^(2k-3) vs matrix q^(2k-2), both sides "
                            "have the expected shape",
                        ))
                    else:
                        bad += 1
                elif mval == cval:
                    matched += 1
                else:
                    bad += 1
        out.append(CheckRecord(
            "hecke-closed-form-comparison",
            {"level": space.level, "char": space.char.spec_string(),
             "weight": space.weight},
            PASS if bad == 0 else FAIL,
            f"{matched} matches, {bad} unexpected mismatches",
        ))
    return out


def _check_relation_words(config, rng):
    out = []
    for N in range(1, config["N_max"] + 1):
        if not is_squarefree(N):
            continue
        for k in [k for k in config["k_set"] if k % 2 == 0]:
            space = enumerate_partitions(N, None, k)
            ops = SpaceOperators(space)
            corner = space.index_of(Partition(N, 1, 1))
            bad = 0
            for rho in space.basis:
                word = s_word(ops, rho.n1, rho.n2)
                row = word.data[corner]
                for j, v in enumerate(row):
                    want = 1 if j == space.index_of(rho) else 0
                    if not (v == want):
                        bad += 1
            out.append(CheckRecord(
                "hecke-relation-words",
                {"level": N, "weight": k, "char": "1"},
                PASS if bad == 0 else FAIL,
                f"{space.dimension} words checked, {bad} bad entries",
            ))
    return out


def _check_level_one_specialization(config, rng):
    # lambda(p) for N=1 must equal (p^(k-1)+1)(p^(k-2)+1) as a polynomial in
    # p: both sides are degree 2k-3, so agreement at 2k points is an identity.
    out = []
    for k in config["k_set"]:
        if (-1) ** k != 1:
            continue
        space = enumerate_partitions(1, None, k)
        rho = Partition(1, 1, 1)
        bad = 0
        for p in range(1, 2 * k + 2):
            lhs = (
                as_cyc(p ** (2 * k - 3))
                + p ** (k - 2) * (p + 1)
                + 1
            )
            rhs = as_cyc((p ** (k - 1) + 1) * (p ** (k - 2) + 1))
            if not (lhs == rhs):
                bad += 1
        # and the closed form agrees with the table at genuine primes
        for p in _primes_up_to(config["prime_max"]):
            tv = eigenvalue_closed_form(space, rho, HeckeOp("T", p))
            if not (tv == (p ** (k - 1) + 1) * (p ** (k - 2) + 1)):
                bad += 1
        out.append(CheckRecord(
            "hecke-level-one-specialization", {"weight": k},
            PASS if bad == 0 else FAIL,
            f"{bad} failures",
        ))
    return out


def _oracle_joint_eigenspaces(mats):
    """Joint row-eigenspace refinement using only the eigen decomposition
    machinery (independent of the closed-form eigenvector construction)."""
    pieces = [((), None)]  # (eigenvalue tags, row-space basis or None=all)
    for m in mats:
        ed = m.transpose().eigen()
        nxt = []
        for tags, basis in pieces:
            for lam, eigbasis in ed.pairs:
                inter = eigbasis if basis is None else intersect_spans(
                    basis, eigbasis
                )
                if inter:
                    nxt.append((tags + (lam,), inter))
        pieces = nxt
    return pieces


def _check_eigen_oracle(config, rng):
    out = []
    for space in spaces_in_scope(config):
        ops = SpaceOperators(space)
        level_ops = ops.level_ops()
        extra = [HeckeOp("T", p) for p in _primes_up_to(config["prime_max"])
                 if space.level % p != 0][:1]
        op_list = level_ops + extra
        mats = [ops.matrix(op).mat for op in op_list]
        system = eigenbasis(ops)
        pieces = _oracle_joint_eigenspaces(mats)
        bad = []
        if len(pieces) != space.dimension:
            bad.append(f"{len(pieces)} joint pieces for dim {space.dimension}")
        else:
            for tags, basis in pieces:
                if len(basis) != 1:
                    bad.append("joint eigenspace not 1-dimensional")
                    continue
                hits = [
                    e for e in system.entries
                    if all(e.eigenvalues[op] == lam
                           for op, lam in zip(op_list, tags))
                ]
                if len(hits) != 1:
                    bad.append(f"eigenvalue tags match {len(hits)} vectors")
                    continue
                dense = hits[0].vector.dense()
                v = basis[0]
                ratio = None
                okspan = True
                for x, y in zip(v, dense):
                    if y.is_zero() != x.is_zero():
                        okspan = False
                        break
                    if not y.is_zero():
                        r = x / y
                        if ratio is None:
                            ratio = r
                        elif not (r == ratio):
                            okspan = False
                            break
                if not okspan:
                    bad.append(f"span mismatch at {hits[0].partition}")
        out.append(CheckRecord(
            "hecke-eigen-oracle",
            {"level": space.level, "char": space.char.spec_string(),
             "weight": space.weight, "operators": len(op_list)},
            PASS if not bad else FAIL,
            "; ".join(bad) if bad else f"{space.dimension} joint eigenlines",
        ))
    return out


def _check_sublattice_counts(config, rng):
    out = []
    bad = []
    for q in _primes_up_to(50):
        n_list = len(sublattices(q))
        n_oracle = subgroup_count_oracle(q)
        if not (n_list == n_oracle == q + 1):
            bad.append(f"q={q}: list {n_list}, oracle {n_oracle}")
    out.append(CheckRecord(
        "lattice-sublattice-counts", {"primes": "q <= 50"},
        PASS if not bad else FAIL,
        "; ".join(bad) if bad else "all counts equal q+1",
    ))
    return out


def _random_unimodular(rng, bound: int, special: bool = False):
    while True:
        g = tuple(rng.randint(-bound, bound) for _ in range(4))
        det = g[0] * g[3] - g[1] * g[2]
        if det == 1 or (det == -1 and not special):
            return g


def _check_reduction_invariance(config, rng):
    trials = config["trials"]
    bad = 0
    done = 0
    while done < trials:
        a = rng.randint(1, 50)
        c = rng.randint(1, 50)
        b = rng.randint(-50, 50)
        T = GramForm(a, b, c)
        if T.det <= 0:
            continue
        done += 1
        G = _random_unimodular(rng, 10)
        if reduce_form(transform(T, G)) != reduce_form(T):
            bad += 1
        G = _random_unimodular(rng, 10, special=True)
        if reduce_form(transform(T, G), "SL2") != reduce_form(T, "SL2"):
            bad += 1
        if reduce_form(reduce_form(T)) != reduce_form(T):
            bad += 1
    return [CheckRecord(
        "lattice-reduction-invariance",
        {"trials": trials, "entry_bound": 50, "transform_bound": 10},
        PASS if bad == 0 else FAIL, f"{bad} violations",
    )]


def _check_isotropy(config, rng):
    bad = 0
    total = 0
    for p in _primes_up_to(13):
        for a in range(p):
            for b in range(p):
                for c in range(p):
                    T = GramForm(a, b, c)
                    rep = isotropic_lines(T, p)
                    total += 1
                    det = T.det % p
                    if det == 0:
                        if rep.kind != "rank_deficient" or rep.count not in (
                            1, p + 1,
                        ) and (a or b or c):
                            bad += 1
                        continue
                    if p == 2:
                        ok = (rep.count, rep.kind) in (
                            (1, "I_type"), (3, "split_type"),
                        )
                        ok = ok and (
                            rep.kind == "split_type"
                        ) == (a % 2 == 0 and c % 2 == 0 and b % 2 == 1)
                    else:
                        legendre = pow(-T.det % p, (p - 1) // 2, p)
                        ok = (rep.count, rep.kind) in (
                            (2, "hyperbolic"), (0, "anisotropic"),
                        )
                        ok = ok and (rep.count == 2) == (legendre == 1)
                    if not ok:
                        bad += 1
    return [CheckRecord(
        "lattice-isotropy", {"primes": "p <= 13", "forms": total},
        PASS if bad == 0 else FAIL, f"{bad} misclassifications",
    )]


def _check_fourier_properties(config, rng):
    out = []
    bad = []
    # identity
    f = constant_expansion(7, 40, 40)
    if not apply_U(f, UOperator(1, 1)).agrees_with(f):
        bad.append("U(1,1) is not the identity")
    # constant eigenvalue prod (q+1)
    g = apply_U(constant_expansion(1, 144, 72), UOperator(6, 1))
    if not all(v == 12 for v in g.coeffs.values()):
        bad.append("constant eigenvalue != prod(q+1)")
    g = apply_U(constant_expansion(1, 36, 36), UOperator(1, 3))
    if not all(v == 1 for v in g.coeffs.values()):
        bad.append("U(1,P) moved the constant function")
    # linearity
    a = expansion_from_function(
        GL2, lambda key: key.det + 1 if key.rank() == 2 else 3, 36, 36
    )
    b = expansion_from_function(
        GL2, lambda key: 2 * key.a if key.rank() == 1 else 5, 36, 36
    )
    u = UOperator(2, 1)
    lhs = apply_U(combine([(Fraction(2, 3), a), (1, b)]), u)
    rhs = combine([(Fraction(2, 3), apply_U(a, u)), (1, apply_U(b, u))])
    if not lhs.agrees_with(rhs):
        bad.append("apply_U is not linear")

    # krylov reconstruction on a synthetic eigen-mixture: content^s on the
    # rank-1 stratum is an exact eigenvector of U(Q,P)
    def h_s(s):
        return expansion_from_function(
            GL2, lambda key: key.a**s if key.rank() == 1 else 0, 400, 400
        )

    mix = combine([(3, h_s(0)), (5, h_s(1))])
    comps = krylov_spectral(mix, [UOperator(2, 1)], sample_bound=2)
    if len(comps) != 2:
        bad.append(f"expected 2 components, got {len(comps)}")
    else:
        for comp in comps:
            lam = comp.eigenvalues[UOperator(2, 1)]
            want = h_s(0).scale(3) if lam == 3 else h_s(1).scale(5)
            if not (lam == 3 or lam == 6) or not comp.expansion.agrees_with(want):
                bad.append("component reconstruction failed")
        total = combine([(1, c.expansion) for c in comps])
        if not total.agrees_with(mix):
            bad.append("components do not sum to the input")
    out.append(CheckRecord(
        "fourier-operator-properties", {},
        PASS if not bad else FAIL,
        "; ".join(bad) if bad else "identity, linearity, constants, krylov",
    ))
    return out
