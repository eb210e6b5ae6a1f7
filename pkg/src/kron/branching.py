"""Assembly of the branching quasi-polynomial by summed iterated residues.

For each Weyl coset representative w the character summand is polarized against
the regular element Y, filtered per gamma in Gamma_K / q Gamma_K down to the
factors that actually contribute poles, and its iterated residues over the OS
bases adapted to the deformed point are accumulated into a quasi-polynomial.
Vanishing restricted roots are first removed by the epsilon constant-term
limit, which rewrites the summand over the nonzero restricted roots.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .exact import CycloRat, as_scalar
from .linalg import in_cone, rank_int
from .osbases import cone_membership, os_bases
from .quasipoly import MPoly, QuasiPolynomial
from .residue import epsilon_constant_term, iterated_residue
from .rootdata import (DEFAULT_SEED, RestrictedRootData, deformation_vector,
                       index_of_list)

_F0 = Fraction(0)
_F1 = Fraction(1)


class PolarizedSystem:
    """Polarized restrictions of w(Delta_u): all pair positively with Y."""

    __slots__ = ("psi", "sign_count", "shift")

    def __init__(self, psi, sign_count, shift):
        self.psi = tuple(psi)
        self.sign_count = sign_count
        self.shift = tuple(shift)

    @property
    def sign(self) -> int:
        return -1 if self.sign_count % 2 else 1


def polarize(w, data: RestrictedRootData) -> PolarizedSystem:
    """Flip the restrictions of w(Delta_u) positive against Y."""
    psi = []
    flips = 0
    shift = [0] * data.r
    for (i, j) in data.delta_u:
        vec = data.root_restriction(w[i - 1], w[j - 1])
        if not any(vec):
            raise ValueError("zero restriction encountered; use the epsilon path")
        if data.pair_Y(vec) > 0:
            psi.append(vec)
        else:
            flipped = tuple(-x for x in vec)
            psi.append(flipped)
            flips += 1
            for k, x in enumerate(vec):
                shift[k] += x
    return PolarizedSystem(psi, flips, shift)


def pole_filter(psi_list, gamma, q: int):
    """Keep the members pairing to zero with gamma mod q (list semantics)."""
    return [v for v in psi_list
            if sum(a * b for a, b in zip(v, gamma)) % q == 0]


# ---------------------------------------------------------------------------
# gamma-pattern grouping, cached per (support, q)
# ---------------------------------------------------------------------------

_PATTERN_CACHE: dict = {}
_GAMMA_CHUNK = 1 << 20


def _canon_mod(vec, q):
    t = tuple(x % q for x in vec)
    s = tuple((-x) % q for x in vec)
    return min(t, s)


def gamma_patterns(support, q: int, r: int):
    """Group Gamma/qGamma by which support vectors pair to 0 mod q.

    support: sorted tuple of canonical (mod q, up to sign) vectors.
    Returns [(passmask tuple of bools, gamma list)], skipping all-fail groups.
    """
    key = (support, q)
    got = _PATTERN_CACHE.get(key)
    if got is not None:
        return got
    L = len(support)
    A = np.array(support, dtype=np.int64)  # L x r
    total = q**r
    groups: dict = {}
    for start in range(0, total, _GAMMA_CHUNK):
        stop = min(start + _GAMMA_CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        G = np.empty((stop - start, r), dtype=np.int64)
        rest = idx
        for col in range(r - 1, -1, -1):
            G[:, col] = rest % q
            rest = rest // q
        B = (G @ A.T) % q == 0  # (chunk, L)
        anyhit = B.any(axis=1)
        Bh = B[anyhit]
        Gh = G[anyhit]
        keys = np.packbits(Bh, axis=1).tobytes()
        stride = (L + 7) // 8
        for row in range(Bh.shape[0]):
            kk = keys[row * stride:(row + 1) * stride]
            groups.setdefault(kk, []).append(tuple(int(x) for x in Gh[row]))
    out = []
    for kk, gammas in groups.items():
        bits = np.unpackbits(np.frombuffer(kk, dtype=np.uint8))[:L]
        out.append((tuple(bool(b) for b in bits), gammas))
    _PATTERN_CACHE[key] = out
    return out


@lru_cache(maxsize=None)
def _support_index(support: tuple, r: int) -> int:
    return index_of_list(tuple(sorted(support, reverse=True)), r)


# ---------------------------------------------------------------------------
# affine integer forms (for zeta-symbol exponents)
# ---------------------------------------------------------------------------

def _affine_form(x, nvars: int):
    """(constant, coefficient tuple) of an integer affine expression."""
    if isinstance(x, MPoly):
        const = 0
        coeffs = [0] * nvars
        for e, c in x.terms.items():
            if isinstance(c, CycloRat):
                c = c.as_rational()
            if c.denominator != 1:
                raise ValueError("zeta exponent form is not integral")
            deg = sum(e)
            if deg == 0:
                const = int(c)
            elif deg == 1:
                coeffs[e.index(1)] = int(c)
            else:
                raise ValueError("zeta exponent form is not linear")
        return const, tuple(coeffs)
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError("zeta exponent form is not integral")
    return int(f), (0,) * nvars


# ---------------------------------------------------------------------------
# the main sum
# ---------------------------------------------------------------------------

class BranchTermKey:
    """Identifier of one residue term in the (w, gamma, sigma) sum."""

    __slots__ = ("w", "gamma", "sigma")

    def __init__(self, w, gamma, sigma):
        self.w = tuple(w)
        self.gamma = tuple(gamma)
        self.sigma = tuple(sigma)


def _epsilon_direction(M: int):
    """Deterministic Y1 with nonzero pairing against every root of U(M)."""
    return tuple(1 << i for i in range(M))


def _character_terms(data, w, lam, zeros, regulars, y1):
    """The summand of the restricted character at w as factored terms.

    regulars: {(i, j): restriction vector} over Delta_u roots with nonzero
    restriction; zeros: the remaining Delta_u roots.  Returns a list
    [(coeff, shift, den_dict)]: a single plain term when nothing vanishes,
    otherwise the epsilon constant-term rewriting.
    """
    if not zeros:
        den: dict = {}
        for vec in regulars.values():
            den[vec] = den.get(vec, 0) + 1
        return [(_F1, (0,) * data.r, den)]
    lam_pairing = 0
    for m in range(data.M):
        if not _is_zero(lam[m]):
            lam_pairing = lam_pairing + lam[m] * y1[w[m] - 1]
    zero_pairs = [y1[w[i - 1] - 1] - y1[w[j - 1] - 1] for (i, j) in zeros]
    regular_pairs = [(vec, y1[w[i - 1] - 1] - y1[w[j - 1] - 1])
                     for (i, j), vec in regulars.items()]
    raw = epsilon_constant_term(zero_pairs, regular_pairs, lam_pairing, data.r)
    out = []
    for coeff, shift, den2 in raw:
        ishift = tuple(_as_int(x) for x in shift)
        den = {}
        for (a, vec), m in den2:
            assert a == 0
            den[tuple(_as_int(x) for x in vec)] = m
        out.append((coeff, ishift, den))
    return out


def _is_zero(x):
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return not x


def _as_int(x) -> int:
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError("expected an integer coordinate")
    return int(f)


def branch_quasipoly(data: RestrictedRootData, lam0, mu0, mode: str = "numeric",
                     variables=(), lam_sym=None, mu_sym=None,
                     seed: int = DEFAULT_SEED, cache_dir: str | None = None,
                     max_terms: int | None = None) -> QuasiPolynomial:
    """The branching function as a quasi-polynomial on the tope of (lam0, mu0).

    lam0: dominant integer weight of U(M) (length M), constant on the
    Sigma-blocks of the data.  mu0: dominant integer weight of K in lattice
    coordinates (length r).  Modes fix the symbolic parameters: "numeric"
    substitutes (lam0, mu0); "dilated" uses k*(lam0, mu0) over the variable k;
    "symbolic" uses the caller-provided entries lam_sym / mu_sym over
    variables.
    """
    M, r, nvars = data.M, data.r, len(variables)
    lam0 = tuple(int(x) for x in lam0)
    mu0 = tuple(int(x) for x in mu0)
    if len(lam0) != M or len(mu0) != r:
        raise ValueError("weight dimensions do not match the root data")
    if not all(a >= b for a, b in zip(lam0, lam0[1:])):
        raise ValueError("lambda must be dominant")
    for blk in data.blocks:
        if len({lam0[m - 1] for m in blk}) > 1:
            raise ValueError("lambda is not Sigma-singular for the chosen Sigma")
    if mode == "numeric":
        variables = ()
        lam = [Fraction(x) for x in lam0]
        mu = [Fraction(x) for x in mu0]
    elif mode == "dilated":
        variables = ("k",)
        k = MPoly.variable(0, 1)
        lam = [k * x for x in lam0]
        mu = [k * x for x in mu0]
    elif mode == "symbolic":
        if lam_sym is None or mu_sym is None:
            raise ValueError("symbolic mode needs lam_sym and mu_sym")
        lam = list(lam_sym)
        mu = list(mu_sym)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    nvars = len(variables)

    eps, delta = deformation_vector(data, seed=seed, cache_dir=cache_dir)
    lam1 = [Fraction(x) + e for x, e in zip(lam0, eps)]
    mu1 = [Fraction(x) + d for x, d in zip(mu0, delta)]

    y1 = _epsilon_direction(M)
    parts: dict = {}
    terms_done = 0

    for w in data.coset_reps:
        # tope vector and the cheap positivity prune
        wl1 = data.restrict(data.apply_perm(w, lam1))
        xi = tuple(a - b for a, b in zip(wl1, mu1))
        if data.pair_Y(xi) <= 0:
            continue
        zeros = []
        regulars = {}
        for (i, j) in data.delta_u:
            vec = data.root_restriction(w[i - 1], w[j - 1])
            if any(vec):
                regulars[(i, j)] = vec
            else:
                zeros.append((i, j))
        char_terms = _character_terms(data, w, lam, zeros, regulars, y1)
        # cancel the Delta_k^+ numerator against each term's denominator
        assembled = []
        support = set()
        for coeff, shift, den in char_terms:
            den = dict(den)
            shift = list(shift)
            flips = 0
            leftover_num = []
            for beta in data.delta_k_plus:
                neg = tuple(-x for x in beta)
                if den.get(beta, 0) > 0:
                    den[beta] -= 1
                elif den.get(neg, 0) > 0:
                    den[neg] -= 1
                    flips += 1
                    for t, x in enumerate(beta):
                        shift[t] -= x
                else:
                    leftover_num.append(beta)
            den = {v: m for v, m in den.items() if m > 0}
            assembled.append((-coeff if flips % 2 else coeff, tuple(shift),
                              den, tuple(leftover_num)))
            for v in den:
                support.add(v if data.pair_Y(v) > 0 else tuple(-x for x in v))
        if not support:
            continue
        if not in_cone(sorted(support), xi):
            continue
        qw = _support_index(frozenset(support), r)
        canon_of = {v: _canon_mod(v, qw) for v in support}
        canon = sorted(set(canon_of.values()))
        canon_idx = {v: i for i, v in enumerate(canon)}
        # exponent of the numerator exponential, as coefficient objects
        wlam_bar = data.restrict(data.apply_perm(w, lam))
        base_exp = tuple(a - b for a, b in zip(wlam_bar, mu))
        base_forms = [_affine_form(x, nvars) for x in base_exp]

        # combined max multiplicities per polarized support vector
        maxmult: dict = {}
        for _, _, den, _ in assembled:
            for v, m in den.items():
                vv = v if data.pair_Y(v) > 0 else tuple(-x for x in v)
                maxmult[vv] = max(maxmult.get(vv, 0), m)

        for passmask, gammas in gamma_patterns(tuple(canon), qw, r):
            passing = {v for v in support if passmask[canon_idx[canon_of[v]]]}
            pole_list = []
            for v in sorted(passing, reverse=True):
                pole_list.extend([v] * maxmult[v])
            if not pole_list or rank_int(pole_list) < r:
                continue
            adapted = []
            for idx in os_bases(tuple(pole_list)):
                sigma = [pole_list[i] for i in idx]
                inside, coords = cone_membership(sigma, xi)
                if any(c == 0 for c in coords):
                    raise ArithmeticError("deformed point lies on a hyperplane")
                if inside:
                    adapted.append(tuple(sigma))
            if not adapted:
                continue
            for gamma in gammas:
                zc_const = 0
                zform = [0] * nvars
                for (cst, coeffs), g in zip(base_forms, gamma):
                    if g:
                        zc_const += cst * g
                        for t, cf in enumerate(coeffs):
                            if cf:
                                zform[t] += cf * g
                gamma_terms = []
                for coeff, shift, den, leftnum in assembled:
                    azc = (zc_const + sum(s * g for s, g in zip(shift, gamma))) % qw
                    c = coeff * CycloRat.zeta(qw, azc) if azc else coeff
                    den_list = tuple(
                        (((-sum(x * g for x, g in zip(v, gamma))) % qw, v), m)
                        for v, m in den.items())
                    num_list = tuple(
                        ((-sum(x * g for x, g in zip(v, gamma))) % qw, v)
                        for v in leftnum)
                    gamma_terms.append((c, tuple(map(Fraction, shift)),
                                        den_list, num_list))
                total = None
                for sigma in adapted:
                    val = iterated_residue(qw, list(sigma), base_exp, gamma_terms)
                    if _is_zero(val):
                        continue
                    total = val if total is None else total + val
                terms_done += len(adapted)
                if max_terms is not None and terms_done > max_terms:
                    raise TermCapError(f"more than {max_terms} residue terms")
                if total is not None and not _is_zero(total):
                    key = (qw, tuple(x % qw for x in zform))
                    poly = total if isinstance(total, MPoly) else MPoly.const(nvars, total)
                    prev = parts.get(key)
                    parts[key] = poly if prev is None else prev + poly
    return QuasiPolynomial.from_parts(tuple(variables), parts)


class TermCapError(RuntimeError):
    """The configured bound on residue terms was exceeded."""
