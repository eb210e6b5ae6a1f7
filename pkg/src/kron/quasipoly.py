"""Quasi-polynomials: zeta-term representation, coset view, generating functions.

A quasi-polynomial is stored as a finite sum of terms

    c * zeta_q^{L(vars)} * p(vars)

with c a cyclotomic constant, L an integer linear form and p a polynomial with
rational coefficients.  Evaluation at integer points is always rational; the
zeta contributions are conjugate-complete by construction of the pipeline.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .exact import (CycloRat, NonRationalValueError, as_scalar,
                    cyclotomic_polynomial, format_rat, parse_rat)


# ---------------------------------------------------------------------------
# multivariate polynomials (dict of exponent tuples)
# ---------------------------------------------------------------------------

class MPoly:
    """Multivariate polynomial; coefficients are Fractions or CycloRats."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = as_scalar(c)
                if c:
                    self.terms[tuple(e)] = c

    @staticmethod
    def const(nvars: int, c) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(i: int, nvars: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return MPoly(nvars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycloRat)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloRat)):
            other = MPoly.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = as_scalar(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloRat)):
            other = MPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloRat)):
            if not other:
                return MPoly(self.nvars)
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = as_scalar(out.get(e, 0) + c1 * c2)
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MPoly.const(self.nvars, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "MPoly":
        return self * c

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, point):
        out = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * Fraction(x) ** k
            out = out + v
        return as_scalar(out)

    def substitute(self, images: list["MPoly"]) -> "MPoly":
        """Map variable i to images[i] (all over the same new variable set)."""
        nv = images[0].nvars if images else 0
        out = MPoly(nv)
        for e, c in self.terms.items():
            term = MPoly.const(nv, c)
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            out = out + term
        return out

    def coefficients_rational(self) -> bool:
        return all(not isinstance(c, CycloRat) for c in self.terms.values())

    def __repr__(self):
        return f"MPoly({self.terms!r})"


# ---------------------------------------------------------------------------
# minimal cyclotomic field of an element (for honest period bookkeeping)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _subfield_basis(q: int, d: int):
    """Matrix of zeta_d-powers inside Q(zeta_q) for d | q, as coefficient rows."""
    from .exact import _euler_phi, _zeta_power_coeffs  # noqa: internal reuse
    return [_zeta_power_coeffs(q, (q // d) * j) for j in range(_euler_phi(d))]


def minimize_cyclo(c: CycloRat) -> CycloRat:
    """Rewrite c in the smallest cyclotomic field Q(zeta_d), d | q, containing it."""
    if c.is_rational():
        return CycloRat.from_rat(c.rational_part(), 1)
    q = c.q
    for d in sorted(k for k in range(1, q) if q % k == 0):
        basis = _subfield_basis(q, d)
        # Solve sum x_j * basis[j] = c.coeffs over Q, if possible.
        rows = len(basis)
        cols = len(c.coeffs)
        aug = [[basis[j][i] for j in range(rows)] + [c.coeffs[i]] for i in range(cols)]
        sol = _solve_exact(aug, rows)
        if sol is not None:
            return CycloRat(d, sol)
    return c


def _solve_exact(aug, nvars):
    """Solve an overdetermined exact linear system; None if inconsistent."""
    rows = [r[:] for r in aug]
    piv_cols = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1]:
            return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


# ---------------------------------------------------------------------------
# quasi-polynomials
# ---------------------------------------------------------------------------

class QPTerm:
    """One term c * zeta_q^{L(vars)} * poly(vars); poly has rational coefficients."""

    __slots__ = ("q", "form", "coeff", "poly")

    def __init__(self, q: int, form: tuple[int, ...], coeff: CycloRat, poly: MPoly):
        self.q = q
        self.form = form
        self.coeff = coeff
        self.poly = poly


class QuasiPolynomial:
    """Finite sum of (root of unity)^(linear form) times polynomial."""

    def __init__(self, variables: tuple[str, ...], terms: list[QPTerm]):
        self.vars = tuple(variables)
        self.terms = terms

    # -- construction ---------------------------------------------------
    @staticmethod
    def zero(variables=()) -> "QuasiPolynomial":
        return QuasiPolynomial(variables, [])

    @staticmethod
    def from_parts(variables, parts: dict) -> "QuasiPolynomial":
        """Build from {(q, form): MPoly-with-cyclo-coeffs} and canonically split."""
        terms: list[QPTerm] = []
        nv = len(variables)
        for (q, form), poly in parts.items():
            if poly.is_zero():
                continue
            # Group monomials by minimized coefficient field.
            by_field: dict[int, dict] = {}
            for e, c in poly.terms.items():
                if not isinstance(c, CycloRat):
                    c = CycloRat.from_rat(c, 1)
                c = minimize_cyclo(c)
                by_field.setdefault(c.q, {})[e] = c
            for qc, monos in sorted(by_field.items()):
                qq = lcm(q, qc)
                f2 = tuple(x * (qq // q) % qq for x in form)
                # Split on the zeta-power basis of Q(zeta_qc).
                phi = len(cyclotomic_polynomial(qc)) - 1
                for j in range(phi):
                    p = MPoly(nv, {e: c.coeffs[j] for e, c in monos.items() if c.coeffs[j]})
                    if p.is_zero():
                        continue
                    terms.append(QPTerm(qq, f2, CycloRat.zeta(qq, j * (qq // qc)), p))
        terms.sort(key=lambda t: (t.q, t.form))
        return QuasiPolynomial(variables, terms)

    @staticmethod
    def constant(variables, value) -> "QuasiPolynomial":
        nv = len(variables)
        p = MPoly.const(nv, Fraction(value))
        if p.is_zero():
            return QuasiPolynomial.zero(variables)
        one = CycloRat.from_rat(1, 1)
        return QuasiPolynomial(variables, [QPTerm(1, (0,) * nv, one, p)])

    # -- algebra ----------------------------------------------------------
    def _parts(self) -> dict:
        parts: dict = {}
        for t in self.terms:
            g = gcd(t.q, *t.form)
            q2 = t.q // g
            f2 = tuple((x // g) % q2 for x in t.form)
            key = (q2, f2)
            add = t.poly * t.coeff
            prev = parts.get(key)
            parts[key] = add if prev is None else prev + add
        return parts

    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        assert self.vars == other.vars
        parts = self._parts()
        for key, p in other._parts().items():
            parts[key] = parts[key] + p if key in parts else p
        return QuasiPolynomial.from_parts(self.vars, parts)

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        negated = QuasiPolynomial(other.vars, [QPTerm(t.q, t.form, t.coeff, -t.poly)
                                               for t in other.terms])
        return self + negated

    def __eq__(self, other):
        if not isinstance(other, QuasiPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        if not self.terms:
            return True
        for p in self._parts().values():
            if not p.is_zero():
                return False
        return True

    def degree(self) -> int | None:
        """Max total degree; None for the zero quasi-polynomial."""
        best = None
        for (q, form), p in self._parts().items():
            if not p.is_zero():
                d = p.total_degree()
                best = d if best is None else max(best, d)
        return best

    def set_of_periods(self) -> set[int]:
        periods = set()
        for (q, form), p in self._parts().items():
            if not p.is_zero():
                periods.add(q if any(form) else 1)
        return periods

    def evaluate(self, point) -> Fraction:
        """Exact value at an integer point; raises if the result is not rational."""
        if len(point) != len(self.vars):
            raise ValueError("point length mismatch")
        total = Fraction(0)
        for t in self.terms:
            pv = t.poly.evaluate(point)
            if not pv:
                continue
            a = int(sum(c * x for c, x in zip(t.form, point))) % t.q
            val = t.coeff * CycloRat.zeta(t.q, a) * pv
            total = total + val
        total = as_scalar(total)
        if isinstance(total, CycloRat):
            raise NonRationalValueError("quasi-polynomial value is not rational")
        return total

    def substitute(self, variables, images_poly: list[MPoly], images_form: list[dict]):
        """Substitute each old variable by an integer affine form in new variables.

        images_poly[i]: the affine form as an MPoly over the new variables;
        images_form[i]: the same form as {new_var_index: int, ...} plus
        optional constant under key -1 (needed to rewrite zeta exponents).
        """
        parts: dict = {}
        nv = len(variables)
        for t in self.terms:
            newform = [0] * nv
            const = 0
            for c, img in zip(t.form, images_form):
                if not c:
                    continue
                for k, v in img.items():
                    if k == -1:
                        const += c * v
                    else:
                        newform[k] += c * v
            q = t.q
            key = (q, tuple(x % q for x in newform))
            add = (t.poly.substitute(images_poly)
                   * (t.coeff * CycloRat.zeta(q, const % q)))
            parts[key] = parts[key] + add if key in parts else add
        return QuasiPolynomial.from_parts(variables, parts)

    def to_coset_form(self, grading_var: str) -> "CosetForm":
        gi = self.vars.index(grading_var)
        for t in self.terms:
            if any(c and i != gi for i, c in enumerate(t.form)):
                raise ValueError("zeta exponents depend on non-grading variables")
        Q = 1
        for p in self.set_of_periods():
            Q = lcm(Q, p)
        polys = []
        nv = len(self.vars)
        for f in range(Q):
            poly = MPoly(nv)
            for t in self.terms:
                zval = t.coeff * CycloRat.zeta(t.q, (t.form[gi] * f) % t.q)
                zval = as_scalar(zval)
                if isinstance(zval, CycloRat):
                    raise NonRationalValueError(
                        f"coset {f}: periodic part is not rational")
                if zval:
                    poly = poly + t.poly * zval
            if not poly.coefficients_rational():
                raise NonRationalValueError(f"coset {f}: polynomial not rational")
            polys.append(poly)
        out = CosetForm(Q, polys, self.vars, gi)
        # sanity: agree on a window of 2Q points (univariate case)
        if nv == 1:
            for k in range(2 * Q):
                assert out.evaluate_at(k) == self.evaluate((k,))
        return out

    def generating_function(self) -> "RationalGF":
        """Sum_{k>=0} p(k) t^k as a rational function (univariate p)."""
        if len(self.vars) != 1:
            raise ValueError("generating function needs a univariate quasi-polynomial")
        cf = self.to_coset_form(self.vars[0])
        Q = cf.modulus
        deg = max((p.total_degree() for p in cf.polys), default=-1)
        if deg < 0:
            return RationalGF([0], [1])
        # Per coset, write j |-> p(f+Qj) in the binomial basis binom(j+n, n);
        # solve from the top degree down (leading coefficient of B_n is 1/n!).
        D = 0
        binom_coeffs = []
        for f in range(Q):
            vals = [cf.evaluate_at(f + Q * j) for j in range(deg + 1)]
            g = _interpolate(vals)
            a = [Fraction(0)] * len(g)
            fact = 1
            for i in range(2, len(g)):
                fact *= i
            for n in range(len(g) - 1, -1, -1):
                fact = 1
                for i in range(2, n + 1):
                    fact *= i
                an = g[n] * fact
                a[n] = an
                if an:
                    g = _poly_add(g, [-an * c for c in _binom_poly(n)])
            assert not any(g)
            while a and a[-1] == 0:
                a.pop()
            binom_coeffs.append(a)
            D = max(D, len(a) - 1)
        one_minus_tQ = [1] + [0] * (Q - 1) + [-1]
        num = [Fraction(0)]
        for f, a in enumerate(binom_coeffs):
            for n_, an in enumerate(a):
                if an:
                    piece = _poly_pow(one_minus_tQ, D - n_)
                    piece = [Fraction(c) * an for c in piece]
                    piece = [Fraction(0)] * f + piece
                    num = _poly_add(num, piece)
        return RationalGF.from_fraction(num, Q, D + 1)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> str:
        terms = []
        for t in self.terms:
            terms.append({
                "q": t.q,
                "zeta_coeff": [format_rat(c) for c in t.coeff.coeffs],
                "exponent_form": {self.vars[i]: c for i, c in enumerate(t.form) if c},
                "poly": {",".join(map(str, e)): format_rat(c)
                         for e, c in sorted(t.poly.terms.items())},
            })
        return json.dumps({"vars": list(self.vars), "terms": terms})

    @staticmethod
    def from_json(s: str) -> "QuasiPolynomial":
        d = json.loads(s)
        variables = tuple(d["vars"])
        nv = len(variables)
        terms = []
        for t in d["terms"]:
            q = t["q"]
            coeff = CycloRat(q, [parse_rat(c) for c in t["zeta_coeff"]])
            form = [0] * nv
            for k, v in t["exponent_form"].items():
                form[variables.index(k)] = v
            poly = MPoly(nv, {tuple(int(x) for x in e.split(",")) if e else ():
                              parse_rat(c) for e, c in t["poly"].items()})
            terms.append(QPTerm(q, tuple(form), coeff, poly))
        return QuasiPolynomial(variables, terms)

    def pretty(self) -> str:
        if self.is_zero():
            return "0"
        chunks = []
        for t in self.terms:
            zeta = ""
            if any(t.form):
                expo = "+".join(f"{c}*{self.vars[i]}" if c != 1 else self.vars[i]
                                for i, c in enumerate(t.form) if c)
                base = "(-1)" if t.q == 2 else f"zeta_{t.q}"
                zeta = f"{base}^({expo})"
            cpart = "" if t.coeff == 1 else f"[{t.coeff!r}]*"
            chunks.append(f"{cpart}{zeta}{'*' if zeta else ''}({_poly_str(t.poly, self.vars)})")
        return " + ".join(chunks)

    def __repr__(self):
        return f"QuasiPolynomial({self.pretty()})"


def _poly_str(p: MPoly, variables) -> str:
    if p.is_zero():
        return "0"
    bits = []
    for e, c in sorted(p.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
        mono = "*".join(f"{variables[i]}^{k}" if k > 1 else variables[i]
                        for i, k in enumerate(e) if k)
        cs = format_rat(c) if not isinstance(c, CycloRat) else repr(c)
        bits.append(f"{cs}*{mono}" if mono else cs)
    return " + ".join(bits)


class CosetForm:
    """Polynomials indexed by residues of the grading variable mod Q."""

    def __init__(self, modulus: int, polys: list[MPoly], variables, grading_index: int):
        self.modulus = modulus
        self.polys = polys
        self.vars = tuple(variables)
        self.grading_index = grading_index

    def evaluate_at(self, k: int, rest=None):
        point = [0] * len(self.vars)
        if rest is not None:
            point = list(rest)
        point[self.grading_index] = k
        return self.polys[k % self.modulus].evaluate(point)


# ---------------------------------------------------------------------------
# univariate integer/rational polynomial helpers (dense lists, constant first)
# ---------------------------------------------------------------------------

def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_mul(a, b):
    if not a or not b:
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_pow(a, n):
    out = [1]
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


def _poly_trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod_q(a, b):
    a = [Fraction(x) for x in a]
    b = _poly_trim([Fraction(x) for x in b])
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    inv = Fraction(1) / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        q[i] = c
        if c:
            for j in range(len(b)):
                a[i + j] -= c * b[j]
    return _poly_trim(q), _poly_trim(a)


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


@lru_cache(maxsize=None)
def _binom_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of binom(j+n, n) as a polynomial in j."""
    out = [Fraction(1)]
    for i in range(1, n + 1):
        out = [Fraction(c, 1) for c in _poly_mul(out, [Fraction(i), Fraction(1)])]
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    return tuple(c / fact for c in out)


def _interpolate(vals) -> list[Fraction]:
    """Coefficients of the unique polynomial through (i, vals[i]), i = 0..n."""
    n = len(vals)
    poly = [Fraction(0)]
    basis = [Fraction(1)]  # prod (j - i) over processed points
    # Newton's divided differences with unit-spaced nodes.
    diffs = [Fraction(v) for v in vals]
    fact = 1
    for k in range(n):
        coef = diffs[0] / fact
        poly = _poly_add(poly, [coef * c for c in basis])
        basis = _poly_mul(basis, [Fraction(-k), Fraction(1)])
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        fact *= (k + 1)
    return _poly_trim(poly)


@lru_cache(maxsize=None)
def _one_minus_t_pow(a: int):
    return (1,) + (0,) * (a - 1) + (-1,)


class RationalGF:
    """P(t) / prod_i (1 - t^{a_i}), exact."""

    def __init__(self, numerator, denominator_exponents):
        self.numerator = [int(c) for c in _poly_trim(list(numerator))]
        self.denominator_exponents = sorted(int(a) for a in denominator_exponents)

    @staticmethod
    def from_fraction(num, Q: int, power: int) -> "RationalGF":
        """Normalize num / (1 - t^Q)^power into the product-of-(1-t^a) shape."""
        num = _poly_trim([Fraction(c) for c in num])
        # Multiplicity of each cyclotomic factor Phi_d (d | Q) in the denominator.
        mult = {d: power for d in range(1, Q + 1) if Q % d == 0}
        # Cancel against the numerator by trial division.
        for d in sorted(mult, reverse=True):
            phi_d = list(cyclotomic_polynomial(d))
            while mult[d] > 0:
                q, r = _poly_divmod_q(num, phi_d)
                if any(r):
                    break
                num = q
                mult[d] -= 1
        # Cover remaining cyclotomic multiplicities with factors (1 - t^a),
        # largest order first; deficits are pushed back into the numerator.
        exps = []
        while any(m > 0 for m in mult.values()):
            a = max(d for d, m in mult.items() if m > 0)
            exps.append(a)
            for d in mult:
                if a % d == 0:
                    mult[d] -= 1
        for d, m in mult.items():
            for _ in range(-m):
                num = _poly_mul(num, list(cyclotomic_polynomial(d)))
        den = 1
        for c in num:
            den = lcm(den, Fraction(c).denominator)
        if den != 1:
            raise NonRationalValueError("generating function is not integral")
        return RationalGF([int(c) for c in num], exps)

    # -- comparison as rational functions (cross multiplication) ----------
    def _den_poly(self):
        out = [1]
        for a in self.denominator_exponents:
            out = _poly_mul(out, list(_one_minus_t_pow(a)))
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalGF):
            return NotImplemented
        left = _poly_mul(self.numerator, other._den_poly())
        right = _poly_mul(other.numerator, self._den_poly())
        return _poly_trim(left) == _poly_trim(right)

    def __hash__(self):
        return hash((tuple(self.numerator), tuple(self.denominator_exponents)))

    def taylor(self, order: int) -> list[Fraction]:
        """Series coefficients up to t^order inclusive."""
        series = [Fraction(c) for c in self.numerator[:order + 1]]
        series += [Fraction(0)] * (order + 1 - len(series))
        for a in self.denominator_exponents:
            out = [Fraction(0)] * (order + 1)
            for n in range(order + 1):
                out[n] = series[n] + (out[n - a] if n >= a else 0)
            series = out
        return series

    def numerator_is_palindromic(self) -> bool:
        cs = _poly_trim(self.numerator)
        return cs == cs[::-1]

    def pretty(self) -> str:
        num = _format_int_poly(self.numerator)
        from collections import Counter
        parts = []
        for a, m in sorted(Counter(self.denominator_exponents).items()):
            base = f"(1-t^{a})" if a != 1 else "(1-t)"
            parts.append(base + (f"^{m}" if m > 1 else ""))
        den = "".join(parts)
        if not parts:
            return num
        if len(self.numerator) > 1:
            num = f"({num})"
        return f"{num}/({den})" if len(parts) > 1 else f"{num}/{den}"

    def to_json(self) -> str:
        return json.dumps({"numerator": self.numerator,
                           "denominator_exponents": self.denominator_exponents})

    @staticmethod
    def from_json(s: str) -> "RationalGF":
        d = json.loads(s)
        return RationalGF(d["numerator"], d["denominator_exponents"])

    def __repr__(self):
        return f"RationalGF({self.pretty()})"


def _format_int_poly(cs) -> str:
    if not any(cs):
        return "0"
    bits = []
    for i, c in enumerate(cs):
        if not c:
            continue
        if i == 0:
            bits.append(str(c))
        else:
            mono = "t" if i == 1 else f"t^{i}"
            if c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
    out = " + ".join(bits).replace("+ -", "- ")
    return out
