"""Iterated residues of products of exponential factors, by nested expansion.

Everything here manipulates functions of the shape

    coeff * e^{<v, z>} * prod (1 - zeta_q^a e^{-<n, z>}) / prod (1 - zeta_q^a e^{-<l, z>})^m

where the vectors are rational coordinates in an ordered basis.  Residues are
extracted one variable at a time, innermost (last basis vector) first: at each
stage every factor is expanded as a truncated Laurent series in the current
variable whose coefficients are again functions of the same shape in the
remaining variables, the series are multiplied on the needed window, and the
coefficient of z^-1 (z^0 for the epsilon limit) moves to the next stage.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import CycloRat, as_scalar, one_minus_zeta_inverse
from .linalg import adjugate_det, solve_in_basis

_F0 = Fraction(0)
_F1 = Fraction(1)


class IdenticallySingularError(ArithmeticError):
    """A denominator factor vanishes identically (needs the epsilon limit)."""


# ---------------------------------------------------------------------------
# scalar series caches
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _todd_coeffs(n: int) -> tuple[Fraction, ...]:
    """Coefficients of x / (1 - e^{-x}) up to order n."""
    # Invert sum_m (-1)^m x^m / (m+1)!.
    base = []
    fact = 1
    for m in range(n + 1):
        fact *= (m + 1) if m else 1
        base.append(Fraction((-1) ** m, fact))
    inv = [Fraction(1)]
    for k in range(1, n + 1):
        s = sum(base[j] * inv[k - j] for j in range(1, k + 1))
        inv.append(-s)
    return tuple(inv)


@lru_cache(maxsize=None)
def _pure_den_series(c: Fraction, mult: int, w: int) -> tuple[Fraction, ...]:
    """Coefficients of 1/(1-e^{-cz})^mult at orders -mult .. -mult+w."""
    todd = _todd_coeffs(w + mult)
    single = [todd[k] * c ** (k - 1) for k in range(w + mult + 1)]  # z^{k-1}
    out = [Fraction(1)] + [Fraction(0)] * w
    for _ in range(mult):
        new = [Fraction(0)] * (w + 1)
        for i in range(w + 1):
            if out[i]:
                for j in range(w + 1 - i):
                    if single[j]:
                        new[i + j] += out[i] * single[j]
        out = new
    return tuple(out)


def _ru_mul(a, b, zero=_F0):
    p = {}
    for j1, c1 in a[0].items():
        for j2, c2 in b[0].items():
            k = j1 + j2
            p[k] = p.get(k, zero) + c1 * c2
    return ({k: v for k, v in p.items() if v}, a[1] + b[1])


def _ru_add(a, b):
    pa, ba = a
    pb, bb = b
    bmax = max(ba, bb)
    pa = _ru_scale_one_minus_u(pa, bmax - ba)
    pb = _ru_scale_one_minus_u(pb, bmax - bb)
    out = dict(pa)
    for j, c in pb.items():
        s = out.get(j, _F0) + c
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return (out, bmax)


def _ru_scale_one_minus_u(p, k):
    for _ in range(k):
        q = {}
        for j, c in p.items():
            q[j] = q.get(j, _F0) + c
            q[j + 1] = q.get(j + 1, _F0) - c
        p = {j: c for j, c in q.items() if c}
    return p


@lru_cache(maxsize=None)
def _mixed_den_series(c: Fraction, mult: int, w: int):
    """Taylor of 1/(1 - u e^{-cz})^mult at orders 0..w, values p(u)/(1-u)^b."""
    fact = 1
    d = [({0: _F1, 1: -_F1}, 0)]  # 1 - u
    for t in range(1, w + 1):
        fact *= t
        d.append(({1: Fraction(-((-c) ** t), fact)}, 0))
    inv0 = ({0: _F1}, 1)  # 1/(1-u)
    inv = [inv0]
    for t in range(1, w + 1):
        acc = ({}, 0)
        for s in range(1, t + 1):
            acc = _ru_add(acc, _ru_mul(d[s], inv[t - s]))
        term = _ru_mul(inv0, acc)
        inv.append(({j: -cc for j, cc in term[0].items()}, term[1]))
    out = [({0: _F1}, 0)] + [({}, 0)] * w
    for _ in range(mult):
        new = [({}, 0) for _ in range(w + 1)]
        for i in range(w + 1):
            if out[i][0]:
                for j in range(w + 1 - i):
                    if inv[j][0]:
                        new[i + j] = _ru_add(new[i + j], _ru_mul(out[i], inv[j]))
        out = new
    return tuple(out)


@lru_cache(maxsize=None)
def _num_series(c: Fraction, w: int):
    """Taylor of (1 - u e^{-cz}) at orders 0..w, values as u-polynomials."""
    out = [({0: _F1, 1: -_F1}, 0)]
    fact = 1
    for t in range(1, w + 1):
        fact *= t
        out.append(({1: Fraction(-((-c) ** t), fact)}, 0))
    return tuple(out)


@lru_cache(maxsize=None)
def _const_inv_pow(q: int, a: int, b: int) -> CycloRat:
    return one_minus_zeta_inverse(q, a) ** b


@lru_cache(maxsize=None)
def _const_one_minus(q: int, a: int):
    return as_scalar(CycloRat.from_rat(1, q) - CycloRat.zeta(q, a))


@lru_cache(maxsize=None)
def _zeta_const(q: int, a: int):
    return as_scalar(CycloRat.zeta(q, a % q))


# ---------------------------------------------------------------------------
# term normalization
# ---------------------------------------------------------------------------

def _norm_term(q, coeff, shift, den, num):
    """Fold constant factors; returns None when the term is identically zero."""
    out_den = []
    for (a, vec), m in den:
        a %= q
        if any(vec):
            out_den.append(((a, vec), m))
            continue
        if a == 0:
            raise IdenticallySingularError(
                "denominator factor 1 - e^0 is identically zero")
        coeff = coeff * _const_inv_pow(q, a, m)
    out_num = []
    for a, vec in num:
        a %= q
        if any(vec):
            out_num.append((a, vec))
            continue
        if a == 0:
            return None
        coeff = coeff * _const_one_minus(q, a)
    if isinstance(coeff, (int, Fraction)) and not coeff:
        return None
    if isinstance(coeff, CycloRat) and not coeff:
        return None
    return as_scalar(coeff), tuple(shift), tuple(sorted(out_den)), tuple(sorted(out_num))


def _is_zero_coeff(c):
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return not c


# ---------------------------------------------------------------------------
# one extraction stage
# ---------------------------------------------------------------------------

def _stage(q, terms: dict, v_last, target: int) -> dict:
    """Extract the coefficient of z_d^target; returns terms in d-1 coordinates."""
    out: dict = {}
    for (shift, den, num), coeff in terms.items():
        d = len(shift)
        passive_den = []
        passive_num = []
        factors = []  # (kind, a, lp, c, mult)
        lead = 0
        for (a, vec), m in den:
            c = vec[-1]
            lp = vec[:-1]
            if c == 0:
                passive_den.append(((a, lp), m))
                continue
            if a == 0 and not any(lp):
                factors.append(("purden", a, lp, c, m))
                lead -= m
            else:
                factors.append(("mixden", a, lp, c, m))
        for a, vec in num:
            c = vec[-1]
            lp = vec[:-1]
            if c == 0:
                passive_num.append((a, lp))
                continue
            if a == 0 and not any(lp):
                factors.append(("purnum", a, lp, c, 1))
                lead += 1
            else:
                factors.append(("mixnum", a, lp, c, 1))
        if lead > target:
            continue
        w = target - lead
        vc = v_last + shift[-1]
        exp_nontrivial = not _is_zero_coeff(vc)
        if exp_nontrivial:
            factors.append(("exp", 0, None, vc, 1))
        # DP over absolute orders.
        base_shift = shift[:-1]
        state = {0: {((), ()): coeff}}
        min_rest = lead
        for kind, a, lp, c, mult in factors:
            fmin = -mult if kind == "purden" else (1 if kind == "purnum" else 0)
            min_rest -= fmin
            series = _factor_series(q, kind, a, lp, c, mult, w)
            new_state: dict = {}
            cap = target - min_rest
            for o, bucket in state.items():
                for so, contribs in series:
                    no = o + so
                    if no > cap:
                        continue
                    tgt = new_state.setdefault(no, {})
                    for (dshift, dden), cc in bucket.items():
                        for (c2, j, b) in contribs:
                            key = (dshift, dden)
                            if j or b:
                                ns = dshift + ((j, lp),) if j else dshift
                                nd = dden + (((a, lp), b),) if b else dden
                                key = (ns, nd)
                            val = cc * c2
                            prev = tgt.get(key)
                            tgt[key] = val if prev is None else prev + val
            state = new_state
            if not state:
                break
        bucket = state.get(target)
        if not bucket:
            continue
        for (dshift, dden), cc in bucket.items():
            if _is_zero_coeff(cc):
                continue
            new_shift = list(base_shift)
            for j, lp in dshift:
                for i, x in enumerate(lp):
                    if x:
                        new_shift[i] -= j * x
            dd = {}
            for (a2, lp2), b in list(passive_den) + list(dden):
                dd[(a2, lp2)] = dd.get((a2, lp2), 0) + b
            nt = _norm_term(q, cc, tuple(new_shift),
                            tuple(dd.items()), tuple(passive_num))
            if nt is None:
                continue
            c3, s3, d3, n3 = nt
            key = (s3, d3, n3)
            prev = out.get(key)
            tot = c3 if prev is None else prev + c3
            if _is_zero_coeff(tot):
                out.pop(key, None)
            else:
                out[key] = as_scalar(tot)
    return out


def _factor_series(q, kind, a, lp, c, mult, w):
    """[(order, [(coeff, u_power, den_power)])] for one factor up to window w."""
    if kind == "exp":
        out = [(0, [(_F1, 0, 0)])]
        power = _F1
        fact = 1
        for t in range(1, w + 1):
            fact *= t
            power = power * c if t > 1 else c
            out.append((t, [(power * Fraction(1, fact), 0, 0)]))
        return out
    if kind == "purden":
        coeffs = _pure_den_series(c, mult, w)
        return [(-mult + i, [(coeffs[i], 0, 0)]) for i in range(w + 1) if coeffs[i]]
    if kind == "purnum":
        fact = 1
        out = []
        for t in range(1, w + 2):
            fact *= t
            out.append((t, [(Fraction(-((-c) ** t), fact), 0, 0)]))
        return out
    if kind == "mixden":
        series = _mixed_den_series(c, mult, w)
    else:
        series = _num_series(c, w)
    constant_u = not any(lp)  # u = zeta^a is a constant
    out = []
    for t, (p, b) in enumerate(series):
        if not p:
            continue
        contribs = []
        if constant_u:
            val = _F0
            scale = _const_inv_pow(q, a, b) if b else 1
            for j, cc in p.items():
                val = val + cc * _zeta_const(q, a * j)
            val = as_scalar(val * scale)
            if not _is_zero_coeff(val):
                contribs.append((val, 0, 0))
        else:
            for j, cc in p.items():
                zc = cc * _zeta_const(q, a * j) if (a * j) % q else cc
                contribs.append((as_scalar(zc), j, b))
        if contribs:
            out.append((t, contribs))
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def iterated_residue(q: int, sigma, exponent, terms) -> object:
    """Iterated residue along the ordered basis sigma (innermost last).

    sigma: list of r ambient integer vectors forming a basis.
    exponent: ambient vector (entries scalars or polynomials) of the numerator
    exponential e^{<exponent, z>}.
    terms: iterable of (coeff, shift, den, num) in ambient coordinates, where
    den is [((a, vec), mult)] and num is [(a, vec)] for factors
    (1 - zeta_q^a e^{-<vec, z>}).

    Returns sum over the terms, including the 1/|det sigma| prefactor.
    """
    r = len(sigma)
    adj, det = adjugate_det([tuple(v) for v in sigma])
    conv_cache: dict = {}

    def conv(vec):
        key = tuple(vec)
        got = conv_cache.get(key)
        if got is None:
            got = tuple(solve_in_basis(adj, det, list(key)))
            conv_cache[key] = got
        return got

    v = []
    for i in range(r):
        acc = 0
        for j in range(r):
            if adj[i][j]:
                acc = acc + exponent[j] * Fraction(adj[i][j], det)
        v.append(acc)

    cur: dict = {}
    for coeff, shift, den, num in terms:
        nt = _norm_term(q, coeff,
                        conv(shift),
                        tuple(((a, conv(vec)), m) for (a, vec), m in den),
                        tuple((a, conv(vec)) for a, vec in num))
        if nt is None:
            continue
        c3, s3, d3, n3 = nt
        key = (s3, d3, n3)
        cur[key] = cur.get(key, 0) + c3
    for d in range(r, 0, -1):
        if not cur:
            return Fraction(0)
        cur = _stage(q, cur, v[d - 1], -1)
    total = 0
    for (s3, d3, n3), coeff in cur.items():
        assert not s3 and not d3 and not n3
        total = total + coeff
    if isinstance(total, int):
        return Fraction(total, abs(det))
    return total * Fraction(1, abs(det))


def epsilon_constant_term(zero_pairs, regular_pairs, lam_pairing, window_vars: int):
    """Constant term in eps of a character summand with vanishing restrictions.

    zero_pairs: Y1-pairings c of the roots with zero restriction (all nonzero).
    regular_pairs: [(vec, c)] for roots with restriction vec != 0 and Y1-pairing c.
    lam_pairing: <w(lambda), Y1> as a scalar or polynomial.
    window_vars: dimension r of the weight coordinates.

    Returns [(coeff, shift, den)] with den = [((0, vec), mult)], representing
    F_w = sum coeff * e^{<shift, z>} / prod (1 - e^{-<vec, z>})^mult.
    """
    if any(c == 0 for c in zero_pairs):
        raise ValueError("Y1 pairs to zero against a vanishing restricted root")
    r = window_vars
    den = []
    for c in zero_pairs:
        den.append(((0, (_F0,) * r + (Fraction(c),)), 1))
    for vec, c in regular_pairs:
        den.append(((0, tuple(Fraction(x) for x in vec) + (Fraction(c),)), 1))
    terms = {((_F0,) * (r + 1), tuple(sorted(_merge_mults(den))), ()): _F1}
    v_last = lam_pairing
    out = _stage(1, terms, v_last, 0)
    result = []
    for (shift, den2, num2), coeff in out.items():
        assert not num2
        result.append((coeff, shift, den2))
    return result


def _merge_mults(den):
    dd = {}
    for (a, vec), m in den:
        dd[(a, vec)] = dd.get((a, vec), 0) + m
    return tuple(dd.items())


# ---------------------------------------------------------------------------
# NestedLaurent: the series view used by the expansion operations
# ---------------------------------------------------------------------------

class NestedLaurent:
    """Truncated Laurent series in the innermost of an ordered variable list.

    Coefficients are term dictionaries over the remaining variables (the base
    case, no variables left, holds plain scalars/polynomials).
    """

    def __init__(self, nvars: int, window: tuple[int, int], coeffs: dict):
        self.nvars = nvars
        self.window = window
        self.coeffs = coeffs  # order -> {(shift, den, num): coeff}

    def coefficient(self, order: int):
        if not self.window[0] <= order <= self.window[1]:
            raise ValueError(f"order {order} outside window {self.window}")
        return self.coeffs.get(order, {})

    def scalar_coefficient(self, order: int):
        """The coefficient as a scalar (requires a factor-free term)."""
        bucket = self.coefficient(order)
        total = Fraction(0)
        for (shift, den, num), c in bucket.items():
            if any(any(v for v in vec) for vec in [shift]) or den or num:
                raise ValueError("coefficient is not scalar")
            total = total + c
        return as_scalar(total)

    def __mul__(self, other: "NestedLaurent") -> "NestedLaurent":
        assert self.nvars == other.nvars
        lo = self.window[0] + other.window[0]
        hi = min(self.window[0] + other.window[1], self.window[1] + other.window[0])
        out: dict = {}
        for o1, b1 in self.coeffs.items():
            for o2, b2 in other.coeffs.items():
                o = o1 + o2
                if o > hi:
                    continue
                tgt = out.setdefault(o, {})
                for (s1, d1, n1), c1 in b1.items():
                    for (s2, d2, n2), c2 in b2.items():
                        key = (tuple(x + y for x, y in zip(s1, s2)),
                               tuple(sorted(_merge_mults(d1 + d2))),
                               tuple(sorted(n1 + n2)))
                        prev = tgt.get(key)
                        val = c1 * c2
                        tgt[key] = val if prev is None else prev + val
        return NestedLaurent(self.nvars, (lo, hi), out)


def expand_one_minus_exp(q: int, a: int, ell, window: tuple[int, int]) -> NestedLaurent:
    """Series of 1/(1 - zeta_q^a e^{-<ell, z>}) in the last variable of ell."""
    ell = tuple(Fraction(x) for x in ell)
    a %= q
    if a == 0 and not any(ell):
        raise IdenticallySingularError("factor 1 - e^0 is identically singular")
    d = len(ell)
    c = ell[-1]
    lp = ell[:-1]
    zero_shift = (_F0,) * (d - 1)
    out: dict = {}
    if c == 0:
        # constant in the innermost variable
        key_den = (((a, lp), 1),)
        out[0] = {(zero_shift, key_den, ()): _F1}
        if a == 0 and not any(lp):
            raise IdenticallySingularError("factor is identically singular")
        return NestedLaurent(d, (0, window[1]), out)
    if a == 0 and not any(lp):
        coeffs = _pure_den_series(c, 1, window[1] + 1)
        lo = -1
        for i, cc in enumerate(coeffs):
            o = -1 + i
            if o > window[1] or not cc:
                continue
            out[o] = {(zero_shift, (), ()): cc}
        return NestedLaurent(d, (lo, window[1]), out)
    series = _mixed_den_series(c, 1, window[1])
    constant_u = not any(lp)
    for t, (p, b) in enumerate(series):
        bucket = {}
        if constant_u:
            val = _F0
            for j, cc in p.items():
                val = val + cc * _zeta_const(q, a * j)
            val = as_scalar(val * (_const_inv_pow(q, a, b) if b else 1))
            if not _is_zero_coeff(val):
                bucket[(zero_shift, (), ())] = val
        else:
            for j, cc in p.items():
                shift = tuple(-j * x for x in lp)
                den = (((a, lp), b),) if b else ()
                zc = cc * _zeta_const(q, a * j) if (a * j) % q else cc
                key = (shift, den, ())
                bucket[key] = bucket.get(key, _F0) + zc
        if bucket:
            out[t] = bucket
    return NestedLaurent(d, (0, window[1]), out)


def expand_exponential(v, window: tuple[int, int]) -> NestedLaurent:
    """Series of e^{<v, z>} in the last variable; v entries may be polynomials."""
    d = len(v)
    c = v[-1]
    zero_shift = (_F0,) * (d - 1)
    out = {0: {(zero_shift, (), ()): _F1}}
    power = 1
    fact = 1
    for t in range(1, window[1] + 1):
        fact *= t
        power = power * c
        val = power * Fraction(1, fact)
        if not _is_zero_coeff(val):
            out[t] = {(zero_shift, (), ()): val}
    # the outer coordinates of v stay in the exponent; callers track them
    return NestedLaurent(d, (0, window[1]), out)
