"""Root-system and lattice geometry of one Kronecker branching instance.

For row counts (n_1, ..., n_s) the branching pair is G = U(M), M = n_2...n_s,
against K = SU(n_2) x ... x SU(n_s) embedded by the tensor product.  Weights of
K live in Z^r, r = sum (n_j - 1), in the basis given by the images of the first
n_j - 1 coordinate weights of each U(n_j); the restriction of a U(M) weight and
all pairings with the dual lattice are integral in these coordinates.
"""

from __future__ import annotations

import json
import os
import random
import tempfile
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

import numpy as np

from .linalg import det_int, largest_elementary_divisor, primitive_normal

WeightVec = tuple

DEFAULT_SEED = 20177
CACHE_ENV = "KRON_CACHE_DIR"
DENOMINATOR_CAP = 10**6
RETRY_BUDGET = 64


def is_dominant(vec) -> bool:
    """Weakly decreasing coordinates (one U(n) factor)."""
    return all(a >= b for a, b in zip(vec, vec[1:]))


class SolidityError(ValueError):
    """The requested branching cone cannot be solid."""


class DeformationError(RuntimeError):
    """No valid deformation vector was found within the retry budget."""


class RestrictedRootData:
    """Immutable geometry of one problem signature."""

    def __init__(self, dims, sigma, active=None):
        dims = tuple(int(n) for n in dims)
        if len(dims) < 3:
            raise ValueError("need at least three tensor factors")
        if any(n < 2 for n in dims):
            raise ValueError("all row counts must be >= 2")
        self.dims = dims
        self.n1 = dims[0]
        self.factors = dims[1:]
        self.M = 1
        for n in self.factors:
            self.M *= n
        if self.n1 > self.M:
            raise ValueError("n1 must be at most the product of the others")
        self.active = tuple(active) if active is not None else (True,) * len(self.factors)
        if len(self.active) != len(self.factors):
            raise ValueError("active mask length mismatch")
        self.r = sum(n - 1 for n, a in zip(self.factors, self.active) if a)

        self.sigma = tuple(sorted(sigma))
        if any(not 1 <= a <= self.M - 1 for a in self.sigma):
            raise ValueError("sigma indexes simple roots 1..M-1")
        # Blocks of positions 1..M glued by the simple roots in sigma.
        blocks = []
        cur = [1]
        for a in range(1, self.M):
            if a in self.sigma:
                cur.append(a + 1)
            else:
                blocks.append(tuple(cur))
                cur = [a + 1]
        blocks.append(tuple(cur))
        self.blocks = tuple(blocks)

        self._basis_restrictions = tuple(self._restrict_basis(m) for m in range(1, self.M + 1))
        self.delta_g_plus = tuple((i, j) for i in range(1, self.M + 1)
                                  for j in range(i + 1, self.M + 1))
        inblock = {b: blk for blk in self.blocks for b in blk}
        self.delta_u = tuple((i, j) for (i, j) in self.delta_g_plus
                             if inblock[i] is not inblock[j])
        self.delta_k_plus = tuple(self._delta_k_plus())
        self.Y = self._regular_element()
        self.Psi = tuple(sorted((self.root_restriction(i, j)
                                 for (i, j) in self.delta_g_plus
                                 if any(self.root_restriction(i, j))), reverse=True))
        for psi in self.Psi:
            if self.pair_Y(psi) == 0:
                raise AssertionError("Y is not regular for the restricted roots")
        self.hyperplane_normals = admissible_hyperplanes(sorted(set(self.Psi), reverse=True),
                                                         self.r)
        if all(self.active):
            support = _list_difference(self.Psi, self.delta_k_plus)
        else:
            support = self.Psi
        self.q = index_of_list(tuple(sorted(set(support), reverse=True)), self.r)
        self.coset_reps = weyl_coset_reps(self.M, self.blocks)

    # -- coordinates ----------------------------------------------------
    def multi_index(self, m: int) -> tuple[int, ...]:
        """Position 1..M -> factor indices (i_2, ..., i_s), first factor fastest."""
        m -= 1
        out = []
        for n in self.factors:
            out.append(m % n + 1)
            m //= n
        return tuple(out)

    def _restrict_basis(self, m: int) -> tuple[int, ...]:
        idx = self.multi_index(m)
        coords = []
        for i, n, a in zip(idx, self.factors, self.active):
            if not a:
                continue
            if i < n:
                block = [0] * (n - 1)
                block[i - 1] = 1
            else:
                block = [-1] * (n - 1)
            coords.extend(block)
        return tuple(coords)

    def root_restriction(self, i: int, j: int) -> tuple[int, ...]:
        a = self._basis_restrictions[i - 1]
        b = self._basis_restrictions[j - 1]
        return tuple(x - y for x, y in zip(a, b))

    def restrict(self, weight) -> tuple:
        """Transpose of the torus embedding applied to a U(M) weight vector."""
        if len(weight) != self.M:
            raise ValueError(f"expected {self.M} coordinates")
        out = [0] * self.r
        for lam, basis in zip(weight, self._basis_restrictions):
            if isinstance(lam, int) and lam == 0:
                continue
            for k, c in enumerate(basis):
                if c:
                    out[k] = out[k] + c * lam
        return tuple(out)

    def _delta_k_plus(self):
        out = []
        offset = 0
        for n, a in zip(self.factors, self.active):
            if not a:
                continue
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    if j <= n - 1:
                        vec = [0] * (n - 1)
                        vec[i - 1] = 1
                        vec[j - 1] = -1
                    else:
                        vec = [1] * (n - 1)
                        vec[i - 1] = 2
                    full = [0] * self.r
                    full[offset:offset + n - 1] = vec
                    out.append(tuple(full))
            offset += n - 1
        return out

    def _regular_element(self):
        """Pairing vector of Y = (Y_2, ..., Y_s), Y_j spaced by prod_{i<j} n_i."""
        coords = []
        scale = 1
        for n, a in zip(self.factors, self.active):
            if a:
                coords.extend((n - 1 - 2 * i) * scale for i in range(n - 1))
            scale *= n
        return tuple(coords)

    def Y_full(self):
        """Y per factor in U(n_j) diagonal coordinates (active factors)."""
        out = []
        scale = 1
        for n, a in zip(self.factors, self.active):
            if a:
                out.append(tuple((n - 1 - 2 * i) * scale for i in range(n)))
            scale *= n
        return tuple(out)

    def pair_Y(self, vec) -> int:
        return sum(c * y for c, y in zip(vec, self.Y))

    def rho_k(self) -> tuple[int, ...]:
        """rho of K in lattice coordinates ((n-1, n-2, ..., 1) per factor)."""
        out = []
        for n, a in zip(self.factors, self.active):
            if a:
                out.extend(range(n - 1, 0, -1))
        return tuple(out)

    def apply_perm(self, w, weight):
        """w(weight) for a permutation w of positions (w[i] = image of i+1)."""
        out = [0] * self.M
        for i in range(self.M):
            out[w[i] - 1] = weight[i]
        return tuple(out)

    def signature(self) -> str:
        dims = "x".join(map(str, self.dims))
        sig = "s" + "-".join(map(str, self.sigma)) if self.sigma else "s0"
        act = "".join("1" if a else "0" for a in self.active)
        return f"{dims}_{sig}_a{act}"

    def __repr__(self):
        return (f"RestrictedRootData(dims={self.dims}, sigma={self.sigma}, "
                f"|Psi|={len(self.Psi)}, q={self.q}, r={self.r})")


def _list_difference(big, small):
    """List difference respecting multiplicity."""
    out = list(big)
    for x in small:
        if x in out:
            out.remove(x)
    return tuple(out)


def weyl_coset_reps(M: int, blocks) -> tuple[tuple[int, ...], ...]:
    """Minimal-length representatives of S_M / S_blocks, increasing per block."""
    reps = []

    def rec(block_idx, remaining, assignment):
        if block_idx == len(blocks):
            w = [0] * M
            for pos, val in assignment.items():
                w[pos - 1] = val
            reps.append(tuple(w))
            return
        blk = blocks[block_idx]
        for combo in combinations(sorted(remaining), len(blk)):
            new = dict(assignment)
            for pos, val in zip(blk, combo):
                new[pos] = val
            rec(block_idx + 1, remaining - set(combo), new)

    rec(0, set(range(1, M + 1)), {})
    return tuple(reps)


def admissible_hyperplanes(psi_distinct, r: int) -> tuple[tuple[int, ...], ...]:
    """Primitive integer normals of hyperplanes spanned by the vectors."""
    if r == 1:
        return ((1,),)
    normals = set()
    for subset in combinations(psi_distinct, r - 1):
        nrm = primitive_normal(list(subset), r)
        if nrm is not None:
            normals.add(nrm)
    return tuple(sorted(normals, reverse=True))


def index_of_list(support, r: int) -> int:
    """lcm of the largest elementary divisors over all bases from the support."""
    q = 1
    for subset in combinations(support, r):
        d = det_int([list(v) for v in subset])
        if d == 0 or q % abs(d) == 0:
            continue  # singular, or d_sigma | |det| | q already
        dsig = largest_elementary_divisor([tuple(v) for v in subset])
        q = lcm(q, dsig)
    return q


def build(dims, rectangular_rows: int | None = None, active=None) -> RestrictedRootData:
    """Build the geometry for sorted row counts dims = (n_1, ..., n_s).

    rectangular_rows = p selects the larger Sigma available when the first
    diagram is a rectangle with p rows (all simple roots except alpha_p);
    otherwise Sigma = {alpha_{n_1+1}, ..., alpha_{M-1}}.
    """
    dims = tuple(dims)
    n1 = dims[0]
    M = 1
    for n in dims[1:]:
        M *= n
    if rectangular_rows is not None:
        p = rectangular_rows
        if not 2 <= p <= M - 1:
            raise SolidityError(
                f"rectangular Sigma needs 2 <= p < M, got p={p}, M={M}")
        sigma = tuple(a for a in range(1, M) if a != p)
    else:
        sigma = tuple(range(n1 + 1, M))
    return RestrictedRootData(dims, sigma, active=active)


# ---------------------------------------------------------------------------
# deformation vector (epsilon, delta)
# ---------------------------------------------------------------------------

_PRIMES = (1009, 10007, 100003, 1000003)


def _marginal_spectra(zM, factors):
    """Sorted marginal spectra of a unit tensor given as an (M, n1) matrix.

    The M axis decomposes with the first factor fastest, matching multi_index.
    """
    shape = tuple(reversed(factors)) + (-1,)
    psi = zM.reshape(shape)
    spectra = []
    for jj in range(len(factors)):
        axis = len(factors) - 1 - jj
        t = np.moveaxis(psi, axis, 0).reshape(factors[jj], -1)
        rho = t @ t.conj().T
        ev = np.linalg.eigvalsh(rho)
        spectra.append(sorted((float(x) for x in ev), reverse=True))
    return spectra


def _sample_point(data: RestrictedRootData, rng: np.random.Generator):
    """Float (epsilon, marginal spectra) from the moment map of a random unit tensor."""
    M, n1 = data.M, data.n1
    rectangular = len(data.blocks[0]) > 1  # first block glued => rectangular Sigma
    if rectangular:
        p = len(data.blocks[0])
        z = rng.normal(size=(M, p)) + 1j * rng.normal(size=(M, p))
        frame, _ = np.linalg.qr(z)
        zM = np.zeros((M, n1), dtype=complex)
        zM[:, :p] = frame[:, :p] / np.sqrt(p)
        eps = [Fraction(1, p)] * p + [Fraction(0)] * (M - p)
        return eps, _marginal_spectra(zM, data.factors)
    z = rng.normal(size=(n1, M)) + 1j * rng.normal(size=(n1, M))
    z /= np.linalg.norm(z)
    rho1 = z @ z.conj().T
    ev = sorted((float(x) for x in np.linalg.eigvalsh(rho1)), reverse=True)
    eps = sorted((Fraction(max(x, 0.0)).limit_denominator(DENOMINATOR_CAP)
                  for x in ev), reverse=True)
    eps += [Fraction(0)] * (M - n1)
    return eps, _marginal_spectra(z.T, data.factors)


def _delta_coords(data: RestrictedRootData, spectra):
    out = []
    jj = 0
    for n, a in zip(data.factors, data.active):
        if a:
            s = spectra[jj]
            out.extend(s[i] - s[n - 1] for i in range(n - 1))
        jj += 1
    return out


def deformation_vector(data: RestrictedRootData, seed: int = DEFAULT_SEED,
                       cache_dir: str | None = None):
    """A verified (epsilon, delta) for the signature, cached on disk."""
    cached = _cache_load(data, seed, cache_dir)
    if cached is not None:
        return cached
    rng = np.random.default_rng(seed)
    pyrng = random.Random(seed)
    for _ in range(RETRY_BUDGET):
        eps, spectra = _sample_point(data, rng)
        delta_f = _delta_coords(data, spectra)
        d1 = 1
        for e in eps:
            d1 = lcm(d1, e.denominator)
        # The prime must stay visible in delta's denominators after rescaling.
        prime = next(p for p in _PRIMES
                     if p > 100 * max(1, len(data.hyperplane_normals)) and d1 % p)
        d2 = d1 * prime
        base = [round(x * d2) for x in delta_f]
        for _ in range(32):
            shift = [pyrng.randrange(prime) for _ in range(data.r)]
            cand = [b + s for b, s in zip(base, shift)]
            if all(sum(c * x for c, x in zip(cand, X)) % prime != 0
                   for X in data.hyperplane_normals):
                break
        else:
            continue
        delta = [Fraction(c, d2) for c in cand]
        scaled = _rescale_half(data, eps, delta)
        if scaled is None:
            continue
        eps, delta = scaled
        ok, _report = verify_deformation(data, eps, delta)
        if ok:
            _cache_store(data, seed, eps, delta, cache_dir)
            return tuple(eps), tuple(delta)
    raise DeformationError(
        "no valid deformation found; the branching cone may not be solid")


def _pair_bounds(data: RestrictedRootData, eps, X):
    """(min, max) over w in S_M of <restrict(w(eps)), X>."""
    c = [sum(b * x for b, x in zip(data._basis_restrictions[m], X))
         for m in range(data.M)]
    e_sorted = sorted(eps)
    c_sorted = sorted(c)
    mx = sum(a * b for a, b in zip(sorted(eps, reverse=True), sorted(c, reverse=True)))
    mn = sum(a * b for a, b in zip(e_sorted, sorted(c, reverse=True)))
    return mn, mx


def _rescale_half(data, eps, delta):
    bound = Fraction(0)
    for X in data.hyperplane_normals:
        mn, mx = _pair_bounds(data, eps, X)
        d = sum(t * x for t, x in zip(delta, X))
        bound = max(bound, mx - d, d - mn)
    if bound == 0:
        return None
    # Scale by a power of two: keeps the odd prime in delta's denominators.
    m = (2 * bound).numerator.bit_length() - (2 * bound).denominator.bit_length() + 1
    m = max(m, 0)
    while Fraction(1, 2**m) * bound >= Fraction(1, 2):
        m += 1
    s = Fraction(1, 2**m)
    return [e * s for e in eps], [t * s for t in delta]


def verify_deformation(data: RestrictedRootData, eps, delta):
    """Exact check of the deformation predicate.

    Nonvanishing of <restrict(w(eps)) - delta, X> for every w in S_M and
    normal X is certified arithmetically: all epsilon-side pairings lie in
    (1/D)Z while every delta-side pairing does not, so no difference is zero.
    The 1/2 bound is checked by the rearrangement inequality.
    """
    D = 1
    for e in eps:
        D = lcm(D, Fraction(e).denominator)
    report = []
    ok = True
    for X in data.hyperplane_normals:
        d = sum(Fraction(t) * x for t, x in zip(delta, X))
        if (d * D).denominator == 1:
            ok = False
            report.append(("on-wall-risk", X))
            continue
        mn, mx = _pair_bounds(data, eps, X)
        if max(mx - d, d - mn) >= Fraction(1, 2):
            ok = False
            report.append(("half-bound", X))
    return ok, report


# ---------------------------------------------------------------------------
# deformation cache
# ---------------------------------------------------------------------------

def cache_directory(override: str | None = None) -> str:
    return override or os.environ.get(CACHE_ENV) or ".kron-cache"


def _cache_path(data, seed, cache_dir):
    return os.path.join(cache_directory(cache_dir), f"def_{data.signature()}_seed{seed}.json")


def _cache_load(data, seed, cache_dir):
    path = _cache_path(data, seed, cache_dir)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            blob = json.load(fh)
        eps = tuple(Fraction(x) for x in blob["eps"])
        delta = tuple(Fraction(x) for x in blob["delta"])
        ok, _ = verify_deformation(data, eps, delta)
        if not ok or blob.get("psi_size") != len(data.Psi) or blob.get("q") != data.q:
            raise ValueError("stale or invalid cache entry")
        return eps, delta
    except Exception:
        try:
            os.replace(path, path + ".corrupt")
        except OSError:
            pass
        return None


def _cache_store(data, seed, eps, delta, cache_dir):
    path = _cache_path(data, seed, cache_dir)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    blob = {
        "dims": list(data.dims),
        "sigma": list(data.sigma),
        "active": list(data.active),
        "seed": seed,
        "psi_size": len(data.Psi),
        "normals": len(data.hyperplane_normals),
        "q": data.q,
        "eps": [str(Fraction(e)) for e in eps],
        "delta": [str(Fraction(d)) for d in delta],
    }
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(blob, fh)
    os.replace(tmp, path)


class Tope:
    """A certified chamber: a regular witness and its signs against the normals."""

    def __init__(self, witness, normals):
        self.witness = tuple(witness)
        self.signs = {}
        for X in normals:
            v = sum(Fraction(w) * x for w, x in zip(self.witness, X))
            if v == 0:
                raise ValueError("witness lies on an admissible hyperplane")
            self.signs[X] = 1 if v > 0 else -1
