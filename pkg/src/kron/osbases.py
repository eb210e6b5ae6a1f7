"""Orlik-Solomon bases of an ordered vector list, adapted to a tope.

An ordered basis sigma = [psi_{i_1}, ..., psi_{i_r}] (a sublist, i_1 < ... < i_r)
is OS when for each l there is no earlier j < i_l making {psi_j, psi_{i_l}, ...,
psi_{i_r}} linearly dependent.  Adapted bases are those whose cone contains the
tope of a given regular vector.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .linalg import RowSpan, adjugate_det, solve_in_basis


class RegularityError(ValueError):
    """The reference vector lies on an admissible hyperplane."""


@lru_cache(maxsize=None)
def os_bases(vectors: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """All OS bases of the ordered list, as index tuples (increasing).

    Returns the empty tuple when the list does not span.
    """
    n = len(vectors)
    if n == 0:
        return ()
    dim = len(vectors[0])
    full = RowSpan(dim)
    for v in vectors:
        full.add(v)
    if full.rank != dim:
        return ()

    prefix_spans = [RowSpan(dim)]
    for v in vectors:
        s = prefix_spans[-1].copy()
        s.add(v)
        prefix_spans.append(s)

    results: list[tuple[int, ...]] = []

    def rec(upper: int, span: RowSpan, chosen_rev: list[int]):
        if len(chosen_rev) == dim:
            results.append(tuple(reversed(chosen_rev)))
            return
        for i in range(upper - 1, -1, -1):
            if span.contains(vectors[i]):
                continue
            new_span = span.copy()
            new_span.add(vectors[i])
            # OS condition: no earlier vector falls in the span of the tail.
            ok = True
            for j in range(i):
                if new_span.contains(vectors[j]):
                    ok = False
                    break
            if not ok:
                continue
            # Completion must be possible from indices < i.
            if len(chosen_rev) + 1 < dim:
                probe = new_span.copy()
                for j in range(i):
                    probe.add(vectors[j])
                    if probe.rank == dim:
                        break
                if probe.rank < dim:
                    continue
            rec(i, new_span, chosen_rev + [i])

    rec(n, RowSpan(dim), [])
    results.sort()
    return tuple(results)


def cone_membership(sigma: list[tuple[int, ...]], xi) -> tuple[bool, list[Fraction]]:
    """Whether xi lies in the open cone of the basis sigma, with its coordinates."""
    adj, det = adjugate_det([tuple(v) for v in sigma])
    coords = solve_in_basis(adj, det, list(xi))
    return all(c > 0 for c in coords), coords


def os_bases_adapted(vectors, xi) -> list[tuple[tuple[int, ...], ...]]:
    """OS bases sigma of the list with xi interior to Cone(sigma).

    Returns lists of vectors (ordered).  Empty when the list does not span.
    Raises RegularityError if xi sits on a basis hyperplane (zero coordinate).
    """
    vecs = tuple(tuple(v) for v in vectors)
    out = []
    for idx in os_bases(vecs):
        sigma = [vecs[i] for i in idx]
        inside, coords = cone_membership(sigma, xi)
        if any(c == 0 for c in coords):
            raise RegularityError(f"xi lies on a hyperplane of basis {sigma}")
        if inside:
            out.append(tuple(sigma))
    return out


class OSBasis:
    """An ordered OS basis with its lattice determinant."""

    __slots__ = ("indices", "vectors", "det")

    def __init__(self, indices, vectors):
        self.indices = tuple(indices)
        self.vectors = tuple(tuple(v) for v in vectors)
        _, d = adjugate_det(list(self.vectors))
        self.det = abs(d)
