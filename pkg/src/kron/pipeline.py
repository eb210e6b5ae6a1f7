"""User-facing Kronecker computations: validation, reductions, mode dispatch.

The trivial layers (content mismatch, single-row factors, two-factor Cauchy,
stabilization) are peeled off first; everything else becomes one branching
problem U(M) > SU(n_2) x ... x SU(n_s) handed to the residue engine.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import lcm

from .branching import branch_quasipoly
from .quasipoly import MPoly, QuasiPolynomial, RationalGF
from .rootdata import DEFAULT_SEED, Tope, build, deformation_vector

PREFIXES = ("lambda", "mu", "nu", "xi", "omega", "tau", "phi", "chi")


class DiagramError(ValueError):
    """Malformed Young diagram input."""


class ResourceCapError(RuntimeError):
    """Refused: the computation would exceed a configured resource cap."""


MAX_COSETS = 10**7


class DiagramTuple:
    """A tuple of Young diagrams (weakly decreasing nonnegative rows)."""

    def __init__(self, diagrams):
        self.diagrams = []
        for d in diagrams:
            d = list(d)
            if any(not isinstance(x, int) or x < 0 for x in d):
                raise DiagramError(f"invalid diagram {d}: entries must be integers >= 0")
            if d != sorted(d, reverse=True):
                raise DiagramError(f"invalid diagram {d}: rows must be weakly decreasing")
            while d and d[-1] == 0:
                d.pop()
            self.diagrams.append(tuple(d))
        self.contents = tuple(sum(d) for d in self.diagrams)

    def __iter__(self):
        return iter(self.diagrams)

    def __repr__(self):
        return " ".join("[" + ",".join(map(str, d)) + "]" for d in self.diagrams) or "[]"

    def scaled(self, k: int) -> "DiagramTuple":
        return DiagramTuple([[k * x for x in d] for d in self.diagrams])


class Normalized:
    """Outcome of the reduction layer: a trivial value or a branching problem."""

    def __init__(self, value=None, diagrams=None, rectangular_rows=None):
        self.value = value
        self.diagrams = diagrams
        self.rectangular_rows = rectangular_rows

    @property
    def trivial(self) -> bool:
        return self.value is not None


def normalize(t: DiagramTuple) -> Normalized:
    """Apply the trivial reductions; canonicalize the rest for branching."""
    if not isinstance(t, DiagramTuple):
        t = DiagramTuple(t)
    contents = {sum(d) for d in t.diagrams}
    if len(contents) > 1:
        return Normalized(value=0)
    diagrams = [d for d in t.diagrams if len(d) >= 2]
    if not diagrams:
        return Normalized(value=1)
    if len(diagrams) == 1:
        return Normalized(value=0)
    diagrams.sort(key=lambda d: (-len(d), d))
    if len(diagrams) == 2:
        return Normalized(value=1 if diagrams[0] == diagrams[1] else 0)
    n1 = len(diagrams[0])
    M = 1
    for d in diagrams[1:]:
        M *= len(d)
    if n1 > M:
        return Normalized(value=0)
    rect = len(set(diagrams[0])) == 1 and 2 <= len(diagrams[0]) <= M - 1
    return Normalized(diagrams=tuple(diagrams),
                      rectangular_rows=len(diagrams[0]) if rect else None)


def _mu_coords(data, diagrams):
    out = []
    for d, n in zip(diagrams[1:], data.factors):
        full = list(d) + [0] * (n - len(d))
        out.extend(full[i] - full[n - 1] for i in range(n - 1))
    return tuple(out)


def _lam_padded(data, diagram):
    return tuple(list(diagram) + [0] * (data.M - len(diagram)))


def _guard_cosets(data):
    if len(data.coset_reps) > MAX_COSETS:
        raise ResourceCapError(f"{len(data.coset_reps)} Weyl cosets exceed the cap")


class KronResult:
    """Result wrapper carrying mode, value and diagnostics."""

    def __init__(self, mode, value, validity=None, stats=None):
        self.mode = mode
        self.value = value
        self.validity = validity
        self.stats = stats or {}


def _prepare(norm: Normalized, use_rectangular=True, seed=DEFAULT_SEED,
             cache_dir=None):
    dims = tuple(len(d) for d in norm.diagrams)
    rect = norm.rectangular_rows if use_rectangular else None
    data = build(dims, rectangular_rows=rect)
    _guard_cosets(data)
    lam0 = _lam_padded(data, norm.diagrams[0])
    mu0 = _mu_coords(data, norm.diagrams)
    return data, lam0, mu0


def kronecker_number(t, seed: int = DEFAULT_SEED, cache_dir: str | None = None,
                     max_terms: int | None = None) -> int:
    """The Kronecker coefficient g(nu_1, ..., nu_s), exactly."""
    norm = normalize(t)
    if norm.trivial:
        return norm.value
    data, lam0, mu0 = _prepare(norm, seed=seed, cache_dir=cache_dir)
    qp = branch_quasipoly(data, lam0, mu0, mode="numeric", seed=seed,
                          cache_dir=cache_dir, max_terms=max_terms)
    val = qp.evaluate(())
    if val.denominator != 1 or val < 0:
        raise ArithmeticError(f"non-integral Kronecker value {val}")
    return int(val)


def kronecker_dilated(t, seed: int = DEFAULT_SEED, cache_dir: str | None = None,
                      max_terms: int | None = None) -> QuasiPolynomial:
    """The stretching quasi-polynomial k -> g(k nu_1, ..., k nu_s)."""
    norm = normalize(t)
    if norm.trivial:
        return (QuasiPolynomial.constant(("k",), 1) if norm.value == 1
                else QuasiPolynomial.zero(("k",)))
    data, lam0, mu0 = _prepare(norm, seed=seed, cache_dir=cache_dir)
    return branch_quasipoly(data, lam0, mu0, mode="dilated", seed=seed,
                            cache_dir=cache_dir, max_terms=max_terms)


def symbolic_variables(diagrams) -> tuple[str, ...]:
    out = []
    for i, d in enumerate(diagrams):
        prefix = PREFIXES[i] if i < len(PREFIXES) else f"p{i}_"
        out.extend(f"{prefix}{j + 1}" for j in range(len(d)))
    return tuple(out)


def kronecker_symbolic(t, seed: int = DEFAULT_SEED, cache_dir: str | None = None,
                       max_terms: int | None = None) -> KronResult:
    """A symbolic quasi-polynomial valid on the chamber of the input tuple."""
    t0 = time.time()
    norm = normalize(t)
    if norm.trivial:
        variables = symbolic_variables(getattr(t, "diagrams", list(t)))
        qp = (QuasiPolynomial.constant(variables, 1) if norm.value == 1
              else QuasiPolynomial.zero(variables))
        return KronResult("symbolic", qp, stats={"trivial": True})
    # symbolic mode always uses the padding Sigma so every row stays a variable
    data, lam0, mu0 = _prepare(norm, use_rectangular=False, seed=seed,
                               cache_dir=cache_dir)
    variables = symbolic_variables(norm.diagrams)
    nv = len(variables)
    idx = 0
    per_factor = []
    for d in norm.diagrams:
        per_factor.append([MPoly.variable(idx + j, nv) for j in range(len(d))])
        idx += len(d)
    lam_sym = per_factor[0] + [MPoly(nv) for _ in range(data.M - len(norm.diagrams[0]))]
    mu_sym = []
    for vars_j, d, n in zip(per_factor[1:], norm.diagrams[1:], data.factors):
        full = list(vars_j) + [MPoly(nv)] * (n - len(d))
        mu_sym.extend(full[i] - full[n - 1] for i in range(n - 1))
    qp = branch_quasipoly(data, lam0, mu0, mode="symbolic", variables=variables,
                          lam_sym=lam_sym, mu_sym=mu_sym, seed=seed,
                          cache_dir=cache_dir, max_terms=max_terms)
    eps, delta = deformation_vector(data, seed=seed, cache_dir=cache_dir)
    lam1 = tuple(Fraction(x) + e for x, e in zip(lam0, eps))
    mu1 = tuple(Fraction(x) + d for x, d in zip(mu0, delta))
    xi_id = tuple(a - b for a, b in zip(data.restrict(lam1), mu1))
    validity = {
        "witness_lambda": lam1,
        "witness_mu": mu1,
        "tope": Tope(xi_id, data.hyperplane_normals),
    }
    return KronResult("symbolic", qp, validity=validity,
                      stats={"seconds": time.time() - t0,
                             "terms": len(qp.terms)})


def hilbert_series(t, seed: int = DEFAULT_SEED,
                   cache_dir: str | None = None) -> RationalGF:
    """Hilbert series of the invariant ring for rectangular diagrams."""
    if not isinstance(t, DiagramTuple):
        t = DiagramTuple(t)
    for d in t.diagrams:
        if len(set(d)) > 1:
            raise DiagramError(f"hilbert series needs rectangular diagrams, got {list(d)}")
    if len(set(t.contents)) > 1:
        raise DiagramError("hilbert series needs equal contents")
    return kronecker_dilated(t, seed=seed, cache_dir=cache_dir).generating_function()


def saturation_factor(t, seed: int = DEFAULT_SEED,
                      cache_dir: str | None = None) -> int | None:
    """Smallest k >= 1 with g(k nu_1, ..., k nu_s) > 0; None outside the cone."""
    qp = kronecker_dilated(t, seed=seed, cache_dir=cache_dir)
    if qp.is_zero():
        return None
    Q = 1
    for p in qp.set_of_periods():
        Q = lcm(Q, p)
    for k in range(1, Q + 1):
        if qp.evaluate((k,)) > 0:
            return k
    return None
