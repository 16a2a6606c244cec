"""Sparse multivariate polynomials over F_p and lazily reduced fractions.

Backend for the exact coefficient field F_p(x_11, x_21, ..., x_1r, x_2r).
Fractions keep their denominators in factored form so pipeline arithmetic
never runs a multivariate gcd; full reduction happens only on demand in
``RatScalar.normalize`` (canonical text, dumps, final equality of
representations).

The fixed monomial order on the x_ij used for normalization and canonical
text is graded lexicographic with x11 > x21 > x12 > x22 > ... .
"""

from __future__ import annotations

import functools


def _monkey(exps):
    # graded-lex sort key, descending order = sorted(..., reverse=True)
    return (sum(exps), exps)


class XPoly:
    """Polynomial in the 2r symbols x_ij over F_p, as {exponent tuple: coeff}."""

    __slots__ = ("p", "nvars", "terms", "_hash")

    def __init__(self, p, nvars, terms=None):
        self.p = p
        self.nvars = nvars
        self.terms = terms if terms is not None else {}
        self._hash = None

    @classmethod
    def const(cls, p, nvars, c):
        c %= p
        return cls(p, nvars, {} if c == 0 else {(0,) * nvars: c})

    @classmethod
    def var(cls, p, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls(p, nvars, {tuple(e): 1})

    @property
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def lead(self):
        """(exponents, coeff) of the graded-lex leading term."""
        e = max(self.terms, key=_monkey)
        return e, self.terms[e]

    def __eq__(self, other):
        return (
            isinstance(other, XPoly)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        p = self.p
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = (t.get(e, 0) + c) % p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return XPoly(p, self.nvars, t)

    def __neg__(self):
        p = self.p
        return XPoly(p, self.nvars, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        p = self.p
        if isinstance(other, int):
            other %= p
            if other == 0:
                return XPoly(p, self.nvars)
            return XPoly(p, self.nvars,
                         {e: (c * other) % p for e, c in self.terms.items()})
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = (t.get(e, 0) + c1 * c2) % p
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return XPoly(p, self.nvars, t)

    __rmul__ = __mul__

    def frobenius(self, m=1):
        """p^m-th power: coefficients are Frobenius-fixed, exponents scale."""
        q = self.p ** m
        return XPoly(self.p, self.nvars,
                     {tuple(a * q for a in e): c for e, c in self.terms.items()})

    def pow(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = XPoly.const(self.p, self.nvars, 1)
        base = self
        m = 0
        while n:
            d = n % self.p
            if d:
                piece = base
                for _ in range(d - 1):
                    piece = piece * base
                result = result * piece.frobenius(m)
            n //= self.p
            m += 1
        return result

    def exact_div(self, g):
        """Return self/g if g divides exactly, else None."""
        if g.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        rem = dict(self.terms)
        ge, gc = g.lead()
        gc_inv = pow(gc, p - 2, p)
        quot = {}
        while rem:
            e = max(rem, key=_monkey)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, ge))
            if any(a < 0 for a in qe):
                return None
            qc = (c * gc_inv) % p
            quot[qe] = qc
            for e2, c2 in g.terms.items():
                ee = tuple(a + b for a, b in zip(qe, e2))
                v = (rem.get(ee, 0) - qc * c2) % p
                if v:
                    rem[ee] = v
                else:
                    rem.pop(ee, None)
        return XPoly(p, self.nvars, quot)

    def monic(self):
        if self.is_zero:
            return self
        _, c = self.lead()
        return self * pow(c, self.p - 2, self.p)

    def text(self, names):
        """Canonical form: terms in descending graded-lex, 'c*x11^a*...'."""
        if self.is_zero:
            return "0"
        out = []
        for e in sorted(self.terms, key=_monkey, reverse=True):
            bits = [str(self.terms[e])]
            bits += [f"{names[i]}^{a}" for i, a in enumerate(e) if a]
            out.append("*".join(bits))
        return " + ".join(out)


@functools.lru_cache(maxsize=None)
def _sympy_ring(p, nvars):
    from sympy import GF
    from sympy.polys.rings import ring
    names = ",".join(f"v{i}" for i in range(nvars))
    R, *gens = ring(names, GF(p))
    return R


def xpoly_gcd(f: XPoly, g: XPoly) -> XPoly:
    """Monic gcd, via sympy's sparse modular rings (normalization only)."""
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    R = _sympy_ring(f.p, f.nvars)
    a = R.from_dict({e: c for e, c in f.terms.items()})
    b = R.from_dict({e: c for e, c in g.terms.items()})
    h = a.gcd(b)
    terms = {tuple(m): int(c) % f.p for m, c in h.items()}
    return XPoly(f.p, f.nvars, terms).monic()


def _merge_factors(da, db):
    out = dict(da)
    for f, e in db.items():
        out[f] = out.get(f, 0) + e
    return out


class RatScalar:
    """Fraction num / prod(factor^e) over F_p[x_ij], lazily reduced.

    den: dict {XPoly factor: exponent}.  All constructors keep constant
    factors folded into num, and drop factors that divide num exactly
    (cheap trial division); gcd-complete reduction happens in normalize().
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num: XPoly, den=None, reduce=True):
        self.field = field
        self.num = num
        self.den = den or {}
        if reduce:
            self._light_reduce()

    def _light_reduce(self):
        if self.num.is_zero:
            self.den = {}
            return
        den = {}
        num = self.num
        for f, e in self.den.items():
            if len(f.terms) == 1 and sum(f.lead()[0]) == 0:
                # constant factor: fold into the numerator
                c = f.lead()[1]
                inv = pow(c, self.field.p - 2, self.field.p)
                num = num * pow(inv, e, self.field.p)
                continue
            while e > 0:
                q = num.exact_div(f)
                if q is None:
                    break
                num = q
                e -= 1
            if e > 0:
                den[f] = den.get(f, 0) + e
        self.num = num
        self.den = den

    # -- arithmetic -------------------------------------------------------

    def _den_poly(self):
        prod = XPoly.const(self.num.p, self.num.nvars, 1)
        for f, e in self.den.items():
            prod = prod * f.pow(e)
        return prod

    def __add__(self, other):
        # numerators over the union denominator
        den = _merge_factors(self.den, other.den)
        na = self.num
        nb = other.num
        for f, e in den.items():
            ea = e - self.den.get(f, 0)
            eb = e - other.den.get(f, 0)
            if ea:
                na = na * f.pow(ea)
            if eb:
                nb = nb * f.pow(eb)
        return RatScalar(self.field, na + nb, den)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RatScalar(self.field, -self.num, dict(self.den), reduce=False)

    def __mul__(self, other):
        return RatScalar(self.field, self.num * other.num,
                         _merge_factors(self.den, other.den))

    def __truediv__(self, other):
        return self * other.inv()

    def inv(self):
        if self.num.is_zero:
            raise ZeroDivisionError("division by zero")
        return RatScalar(self.field, self._den_poly(), {self.num: 1})

    def frobenius(self, m=1):
        den = {f.frobenius(m): e for f, e in self.den.items()}
        return RatScalar(self.field, self.num.frobenius(m), den, reduce=False)

    def pow(self, n):
        if n < 0:
            return self.inv().pow(-n)
        den = {f: e * n for f, e in self.den.items()} if n else {}
        return RatScalar(self.field, self.num.pow(n), den, reduce=False)

    @property
    def is_zero(self):
        return self.num.is_zero

    def __eq__(self, other):
        if not isinstance(other, RatScalar):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        n, d = self.normalize()
        return hash((n, d))

    def normalize(self):
        """Fully reduced (num, den) pair: coprime, den monic."""
        num = self.num
        den = self._den_poly()
        g = xpoly_gcd(num, den)
        if not (len(g.terms) == 1 and sum(g.lead()[0]) == 0 and g.lead()[1] == 1):
            num = num.exact_div(g)
            den = den.exact_div(g)
        # make the denominator monic
        _, lc = den.lead()
        if lc != 1:
            inv = pow(lc, num.p - 2, num.p)
            num = num * inv
            den = den * inv
        return num, den

    def text(self, names):
        num, den = self.normalize()
        return f"{num.text(names)}/{den.text(names)}"

    def __repr__(self):
        names = [f"x{1 + (i % 2)}{1 + i // 2}" for i in range(self.num.nvars)]
        return f"RatScalar({self.text(names)})"
