"""Brute-force references: vector partition counts and Kronecker coefficients.

These are deliberately independent of the residue pipeline: partition counts
by bounded enumeration, Kronecker coefficients by the alternating Weyl sum
over the weight multiplicities of Sym^c of the tensor space.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb

from .linalg import in_cone


class NotPointedError(ValueError):
    """The cone spanned by the weight list is not pointed."""


class OracleCapError(RuntimeError):
    """Instance too large for the brute-force reference."""


def _positive_functional(psi):
    """Integer Y with <psi, Y> > 0 for all psi; None if the cone is not pointed."""
    dim = len(psi[0])
    # Pointed iff 0 is not a convex combination: check (psi_i, 1) generating (0,..,0,1).
    lifted = [tuple(v) + (1,) for v in psi]
    if in_cone(lifted, (0,) * dim + (1,)):
        return None
    # Search certified separators deterministically (works for small instances).
    import itertools
    for radius in range(1, 20):
        for cand in itertools.product(range(-radius, radius + 1), repeat=dim):
            if max(map(abs, cand)) != radius:
                continue
            if all(sum(a * b for a, b in zip(v, cand)) > 0 for v in psi):
                return cand
    raise NotPointedError("no separating functional found in search box")


def partition_count(psi, target) -> int:
    """Number of ways to write target as a nonnegative integer combination of psi.

    Requires Cone(psi) pointed.
    """
    psi = [tuple(v) for v in psi]
    target = tuple(target)
    if not psi:
        return 1 if not any(target) else 0
    Y = _positive_functional(psi)
    if Y is None:
        raise NotPointedError("Cone(Psi) is not pointed")
    pairings = [sum(a * b for a, b in zip(v, Y)) for v in psi]
    order = sorted(range(len(psi)), key=lambda i: -pairings[i])
    psi = [psi[i] for i in order]
    pairings = [pairings[i] for i in order]

    def rec(i, rem, budget):
        if budget == 0:
            return 1 if not any(rem) else 0
        if i == len(psi):
            return 0
        p = pairings[i]
        count = 0
        x = 0
        while x * p <= budget:
            nrem = tuple(r - x * v for r, v in zip(rem, psi[i]))
            if i + 1 == len(psi):
                if budget - x * p == 0 and not any(nrem):
                    count += 1
            else:
                count += rec(i + 1, nrem, budget - x * p)
            x += 1
        return count

    budget = sum(a * b for a, b in zip(target, Y))
    if budget < 0:
        return 0
    return rec(0, target, budget)


# ---------------------------------------------------------------------------
# Kronecker coefficients via the Kostant-type alternating sum
# ---------------------------------------------------------------------------

def tensor_weights(ns):
    """Weights of C^{n_1} x ... x C^{n_s} as concatenated unit vectors."""
    out = []
    for idx in product(*[range(n) for n in ns]):
        vec = []
        for i, n in zip(idx, ns):
            e = [0] * n
            e[i] = 1
            vec.extend(e)
        out.append(tuple(vec))
    return out


@lru_cache(maxsize=32)
def weight_table(ns: tuple[int, ...], content: int) -> dict:
    """Weight multiplicities of Sym^content(tensor space), keyed by weight."""
    weights = tensor_weights(ns)
    dim = sum(ns)
    table = {(0,) * dim: 1}
    for w in weights:
        # Snapshot, then graft every multiple of w onto each prior state; a
        # final multiset splits uniquely as (w-free part) + k*w, so this counts
        # each monomial weight exactly once.
        for vec, mult in list(table.items()):
            add = list(vec)
            k = sum(vec[:ns[0]])
            while k < content:
                add = [a + b for a, b in zip(add, w)]
                k += 1
                key = tuple(add)
                table[key] = table.get(key, 0) + mult
    return table


def _table_slice_total(ns, content) -> int:
    table = weight_table(tuple(ns), content)
    return sum(m for vec, m in table.items() if sum(vec[:ns[0]]) == content)


def kronecker_bruteforce(diagrams, content_cap: int = 10) -> int:
    """g(nu_1, ..., nu_s) by weight multiplicities and the Weyl alternating sum."""
    diagrams = [list(d) for d in diagrams]
    contents = [sum(d) for d in diagrams]
    if len(set(contents)) > 1:
        return 0
    if not diagrams:
        return 1
    c = contents[0]
    if c == 0:
        return 1
    if any(x < 0 for d in diagrams for x in d) or \
       any(list(d) != sorted(d, reverse=True) for d in diagrams):
        raise ValueError("diagrams must be weakly decreasing and nonnegative")
    ns = tuple(len(d) for d in diagrams)
    if c > content_cap:
        raise OracleCapError(f"content {c} exceeds cap {content_cap}")
    group_size = 1
    for n in ns:
        f = 1
        for i in range(2, n + 1):
            f *= i
        group_size *= f
    if group_size > 10**5:
        raise OracleCapError("Weyl group too large for brute force")
    table = weight_table(ns, content_cap)
    rhos = [tuple(range(n - 1, -1, -1)) for n in ns]
    total = 0
    for ws in product(*[list(permutations(range(n))) for n in ns]):
        sign = 1
        target = []
        for d, n, rho, w in zip(diagrams, ns, rhos, ws):
            sign *= _perm_sign(w)
            wrho = [0] * n
            for i in range(n):
                wrho[w[i]] = rho[i]
            target.extend(d[i] + rho[i] - wrho[i] for i in range(n))
        total += sign * table.get(tuple(target), 0)
    return total


def _perm_sign(w) -> int:
    seen = [False] * len(w)
    sign = 1
    for i in range(len(w)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = w[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def dimension_check(ns, content) -> bool:
    """Total weight multiplicity equals dim Sym^c = binom(c + N - 1, N - 1)."""
    N = 1
    for n in ns:
        N *= n
    return _table_slice_total(ns, content) == comb(content + N - 1, N - 1)
