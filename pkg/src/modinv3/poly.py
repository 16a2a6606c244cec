"""Sparse polynomials in X, Y, Z under grevlex with X < Y < Z.

Terms are kept strictly descending in grevlex: larger total degree first,
ties broken by smaller X exponent, then smaller Y exponent.  Coefficients
live in one of the fields from .fields and are carried as that field's
vectorized payload, so bulk arithmetic stays in numpy for the finite
modes.

Large homogeneous products in extension mode switch to a dense
(e_Y, e_Z)-grid representation multiplied by FFT; values are bounded well
below 2^53 so rounding back to integers is exact, which is asserted.

TPoly at the bottom covers polynomials in the presentation variables
t_0, ..., t_{s+2} (t_0 is the slot mapped to X on evaluation).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ContextMismatchError, InexactDivisionError


class Mono3(NamedTuple):
    ex: int
    ey: int
    ez: int

    @property
    def deg(self):
        return self.ex + self.ey + self.ez

    def __mul__(self, other):
        return Mono3(self.ex + other.ex, self.ey + other.ey, self.ez + other.ez)

    def text(self):
        if self.deg == 0:
            return "1"
        return "*".join(f"{v}^{e}" for v, e in
                        zip("XYZ", (self.ex, self.ey, self.ez)) if e)


def grevlex_cmp(m1: Mono3, m2: Mono3) -> int:
    """1 if m1 > m2, -1 if m1 < m2, 0 if equal.

    Degree first; on ties the rightmost nonzero entry of the difference of
    exponent vectors written in the order (Z, Y, X) must be negative for
    m1 > m2.
    """
    d1 = m1[0] + m1[1] + m1[2]
    d2 = m2[0] + m2[1] + m2[2]
    if d1 != d2:
        return 1 if d1 > d2 else -1
    for a, b in ((m1[0], m2[0]), (m1[1], m2[1]), (m1[2], m2[2])):
        if a != b:
            return 1 if a < b else -1
    return 0


def _sort_perm(exps):
    deg = exps[:, 0] + exps[:, 1] + exps[:, 2]
    return np.lexsort((exps[:, 1], exps[:, 0], -deg))


class Poly3:
    """Immutable sparse polynomial; (n, 3) exponent rows + field payload."""

    __slots__ = ("field", "exps", "coeffs", "_deg")

    def __init__(self, field, exps, coeffs, canonical=False):
        self.field = field
        if not canonical:
            exps, coeffs = _canonicalize(field, exps, coeffs)
        self.exps = exps
        self.coeffs = coeffs
        self._deg = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field, np.zeros((0, 3), dtype=np.int64),
                   field.arr_from_scalars([]), canonical=True)

    @classmethod
    def from_terms(cls, field, terms):
        """terms: iterable of ((ex, ey, ez), Scalar)."""
        terms = list(terms)
        exps = np.array([t[0] for t in terms], dtype=np.int64).reshape(-1, 3)
        coeffs = field.arr_from_scalars([t[1] for t in terms])
        return cls(field, exps, coeffs)

    @classmethod
    def monomial(cls, field, mono, coeff=None):
        coeff = field.one if coeff is None else coeff
        return cls.from_terms(field, [(tuple(mono), coeff)])

    @classmethod
    def variable(cls, field, name):
        e = {"X": (1, 0, 0), "Y": (0, 1, 0), "Z": (0, 0, 1)}[name]
        return cls.monomial(field, e)

    # -- inspection ---------------------------------------------------------
    @property
    def nterms(self):
        return self.exps.shape[0]

    @property
    def is_zero(self):
        return self.exps.shape[0] == 0

    def degree(self):
        """Total degree (homogeneous or not); -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return int((self.exps[:, 0] + self.exps[:, 1] + self.exps[:, 2]).max())

    def homogeneous_degree(self):
        """Degree if homogeneous, else None; cached."""
        if self._deg is None:
            if self.is_zero:
                self._deg = (True, 0)
            else:
                degs = self.exps[:, 0] + self.exps[:, 1] + self.exps[:, 2]
                d = int(degs[0])
                self._deg = (bool((degs == d).all()), d)
        ok, d = self._deg
        return d if ok else None

    def lm(self):
        if self.is_zero:
            return None
        return Mono3(*(int(v) for v in self.exps[0]))

    def lc(self):
        if self.is_zero:
            return self.field.zero
        return self.field.arr_to_scalars(self.field.arr_take(self.coeffs, [0]))[0]

    def terms(self):
        scal = self.field.arr_to_scalars(self.coeffs)
        return [(Mono3(*(int(v) for v in e)), c) for e, c in zip(self.exps, scal)]

    def coeff_of(self, mono):
        hit = np.flatnonzero((self.exps == np.asarray(mono)).all(axis=1))
        if len(hit) == 0:
            return self.field.zero
        return self.field.arr_to_scalars(
            self.field.arr_take(self.coeffs, hit[:1]))[0]

    def __eq__(self, other):
        if not isinstance(other, Poly3):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        raise TypeError("Poly3 is not hashable")

    # -- ring operations ----------------------------------------------------
    def _chk(self, other):
        if other.field is not self.field:
            raise ContextMismatchError("polynomials over different contexts")

    def __add__(self, other):
        self._chk(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        exps = np.concatenate([self.exps, other.exps])
        coeffs = self.field.arr_concat([self.coeffs, other.coeffs])
        return Poly3(self.field, exps, coeffs)

    def __neg__(self):
        return Poly3(self.field, self.exps, self.field.arr_neg(self.coeffs),
                     canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        if s.is_zero:
            return Poly3.zero(self.field)
        return Poly3(self.field, self.exps, self.field.arr_scale(self.coeffs, s),
                     canonical=True)

    def mul_xpow(self, e: int):
        if self.is_zero or e == 0:
            return self
        exps = self.exps.copy()
        exps[:, 0] += e
        return Poly3(self.field, exps, self.coeffs, canonical=True)

    def frobenius(self, m: int = 1):
        """p^m-th power (freshman's dream in characteristic p)."""
        if m == 0 or self.is_zero:
            return self
        q = self.field.p ** m
        return Poly3(self.field, self.exps * q,
                     self.field.arr_frobenius(self.coeffs, m), canonical=True)

    def __mul__(self, other):
        self._chk(other)
        return poly_mul(self, other)

    def __pow__(self, n):
        return poly_pow(self, n)

    # -- serialization ------------------------------------------------------
    def text(self):
        if self.is_zero:
            return "0"
        parts = []
        for m, c in self.terms():
            mt = m.text()
            parts.append(c.text() if mt == "1" else f"{c.text()}*{mt}")
        return " + ".join(parts)

    def json_terms(self):
        return [[int(m.ex), int(m.ey), int(m.ez), c.text()]
                for m, c in self.terms()]

    def __repr__(self):
        t = self.text()
        return f"Poly3({t if len(t) < 120 else t[:117] + '...'})"


def _canonicalize(field, exps, coeffs):
    n = exps.shape[0]
    if n == 0:
        return exps.reshape(0, 3), coeffs
    order = _sort_perm(exps)
    exps = exps[order]
    coeffs = field.arr_take(coeffs, order)
    if n > 1:
        same = (exps[1:] == exps[:-1]).all(axis=1)
        if same.any():
            starts = np.flatnonzero(np.concatenate([[True], ~same]))
            coeffs = field.arr_sum_runs(coeffs, starts)
            exps = exps[starts]
    mask = field.arr_nonzero_mask(coeffs)
    if not mask.all():
        keep = np.flatnonzero(mask)
        exps = exps[keep]
        coeffs = field.arr_take(coeffs, keep)
    return exps, coeffs


# ---------------------------------------------------------------------------
# multiplication

_SPARSE_PAIR_LIMIT = 1 << 21     # pairs per chunk in the sparse path
_DENSE_CELL_LIMIT = 9_000_000    # (d+1)^2 grid cells tolerated by the FFT path


def poly_mul(f: Poly3, g: Poly3, x_cap=None) -> Poly3:
    field = f.field
    if f.is_zero or g.is_zero:
        return Poly3.zero(field)
    if x_cap is not None:
        f = truncate_x(f, x_cap)
        g = truncate_x(g, x_cap)
        if f.is_zero or g.is_zero:
            return Poly3.zero(field)
    pairs = f.nterms * g.nterms
    df = f.homogeneous_degree()
    dg = g.homogeneous_degree()
    dense_ok = (
        getattr(field, "nplanes", None) is not None
        and df is not None and dg is not None
        and (df + dg + 1) ** 2 <= _DENSE_CELL_LIMIT
    )
    if dense_ok and pairs > _SPARSE_PAIR_LIMIT:
        out = _dense_fft_mul(f, g, df, dg)
    else:
        out = _sparse_mul(f, g, pairs)
    if x_cap is not None:
        out = truncate_x(out, x_cap)
    return out


def _sparse_mul(f, g, pairs):
    field = f.field
    if pairs <= _SPARSE_PAIR_LIMIT:
        ia = np.repeat(np.arange(f.nterms), g.nterms)
        ib = np.tile(np.arange(g.nterms), f.nterms)
        exps = f.exps[ia] + g.exps[ib]
        coeffs = field.arr_pairmul(f.coeffs, ia, g.coeffs, ib)
        return Poly3(field, exps, coeffs)
    # chunk the larger factor; accumulate canonical partials
    if f.nterms < g.nterms:
        f, g = g, f
    rows_per_chunk = max(1, _SPARSE_PAIR_LIMIT // g.nterms)
    partial_e = []
    partial_c = []
    for lo in range(0, f.nterms, rows_per_chunk):
        hi = min(lo + rows_per_chunk, f.nterms)
        ia = np.repeat(np.arange(lo, hi), g.nterms)
        ib = np.tile(np.arange(g.nterms), hi - lo)
        e = f.exps[ia] + g.exps[ib]
        c = field.arr_pairmul(f.coeffs, ia, g.coeffs, ib)
        e, c = _canonicalize(field, e, c)
        partial_e.append(e)
        partial_c.append(c)
    return Poly3(field, np.concatenate(partial_e), field.arr_concat(partial_c))


def to_dense(f: Poly3):
    """(d+1, d+1, k) int64 grid indexed [e_Y, e_Z]; homogeneous input only."""
    d = f.homogeneous_degree()
    if d is None:
        raise ValueError("dense form needs a homogeneous polynomial")
    k = f.field.nplanes
    D = np.zeros((d + 1, d + 1, k), dtype=np.int64)
    D[f.exps[:, 1], f.exps[:, 2]] = f.field.arr_to_planes(f.coeffs)
    return D, d


def from_dense(field, D, d) -> Poly3:
    nz = np.flatnonzero(D.any(axis=2))
    ey, ez = np.unravel_index(nz, D.shape[:2])
    ex = d - ey - ez
    exps = np.stack([ex, ey, ez], axis=1).astype(np.int64)
    coeffs = field.arr_from_planes(D.reshape(-1, D.shape[2])[nz])
    return Poly3(field, exps, coeffs)


def _dense_fft_mul(f, g, df, dg):
    from scipy import fft as sfft

    field = f.field
    k = field.nplanes
    A, _ = to_dense(f)
    B, _ = to_dense(g)
    n = df + dg + 1
    fy = sfft.next_fast_len(n)
    fz = sfft.next_fast_len(n)
    # exactness: each plane-pair convolution is bounded by
    # overlap * (p-1)^2, and k plane-pairs accumulate per output plane.
    bound = min(A.shape[0] ** 2, B.shape[0] ** 2) * (field.p - 1) ** 2 * k
    if bound >= 2 ** 52:
        raise ArithmeticError("dense FFT bound exceeded")
    FA = [sfft.rfft2(A[:, :, i].astype(np.float64), s=(fy, fz)) for i in range(k)]
    FB = [sfft.rfft2(B[:, :, i].astype(np.float64), s=(fy, fz)) for i in range(k)]
    out = np.zeros((n * n, k), dtype=np.int64)
    red = None if k == 1 else field._red
    for c in range(2 * k - 1):
        lo = max(0, c - k + 1)
        spec = None
        for a in range(lo, min(c, k - 1) + 1):
            term = FA[a] * FB[c - a]
            spec = term if spec is None else spec + term
        plane = sfft.irfft2(spec, s=(fy, fz))[:n, :n]
        plane_i = np.rint(plane).astype(np.int64).reshape(-1)
        if c < k:
            out[:, c] += plane_i
        else:
            out += plane_i[:, None] * red[c - k][None, :]
    out %= field.p
    return from_dense(field, out.reshape(n, n, k), df + dg)


def poly_pow(f: Poly3, n: int, x_cap=None) -> Poly3:
    """f^n via base-p digits: f^n = prod_a Frob^a(f^(d_a))."""
    field = f.field
    if n < 0:
        raise ValueError("negative polynomial power")
    if n == 0:
        return Poly3.monomial(field, (0, 0, 0))
    p = field.p
    pieces = []
    a = 0
    while n:
        d = n % p
        if d:
            small = f
            for _ in range(d - 1):
                small = poly_mul(small, f, x_cap=x_cap)
            pieces.append(small.frobenius(a))
        n //= p
        a += 1
    pieces.sort(key=lambda q: q.nterms)
    out = pieces[0]
    for q in pieces[1:]:
        out = poly_mul(out, q, x_cap=x_cap)
    return out


# ---------------------------------------------------------------------------
# the X-ideal operations used throughout the construction

def normal_form_mod_xy_ideal(f: Poly3, m: int) -> Poly3:
    """Delete exactly the terms in (X^(m+1), X^m Y): ex > m, or ex = m, ey >= 1."""
    if f.is_zero:
        return f
    ex = f.exps[:, 0]
    ey = f.exps[:, 1]
    keep = (ex < m) | ((ex == m) & (ey == 0))
    if keep.all():
        return f
    idx = np.flatnonzero(keep)
    return Poly3(f.field, f.exps[idx], f.field.arr_take(f.coeffs, idx),
                 canonical=True)


def divide_exact_x(f: Poly3, e: int) -> Poly3:
    """Divide by X^e; every term must carry at least X^e."""
    if e == 0 or f.is_zero:
        return f
    bad = np.flatnonzero(f.exps[:, 0] < e)
    if len(bad) > 0:
        mono = Mono3(*(int(v) for v in f.exps[bad[0]]))
        raise InexactDivisionError(
            f"inexact division by X^{e}: term {mono.text()}")
    exps = f.exps.copy()
    exps[:, 0] -= e
    return Poly3(f.field, exps, f.coeffs, canonical=True)


def truncate_x(f: Poly3, cap: int) -> Poly3:
    """Drop terms with X-exponent above cap (windowed construction mode)."""
    if f.is_zero or cap is None:
        return f
    keep = f.exps[:, 0] <= cap
    if keep.all():
        return f
    idx = np.flatnonzero(keep)
    return Poly3(f.field, f.exps[idx], f.field.arr_take(f.coeffs, idx),
                 canonical=True)


# ---------------------------------------------------------------------------
# polynomials in the presentation variables t_0..t_{s+2}

class TPoly:
    """Sparse polynomial in t_0, ..., t_{nvars-1} with Scalar coefficients."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        self.terms = {}
        for e, c in (terms or {}).items():
            if not c.is_zero:
                self.terms[tuple(e)] = c

    @classmethod
    def t_monomial(cls, field, nvars, exps, coeff=None):
        coeff = field.one if coeff is None else coeff
        return cls(field, nvars, {tuple(exps): coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v.is_zero:
                out.pop(e, None)
            else:
                out[e] = v
        return TPoly(self.field, self.nvars, out)

    def __neg__(self):
        return TPoly(self.field, self.nvars,
                     {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return TPoly(self.field, self.nvars,
                     {e: c * s for e, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                if e in out:
                    v = out[e] + v
                if v.is_zero:
                    out.pop(e, None)
                else:
                    out[e] = v
        return TPoly(self.field, self.nvars, out)

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, TPoly) and self.nvars == other.nvars
                and (self - other).is_zero)

    def weighted_degrees(self, weights):
        return sorted({sum(a * w for a, w in zip(e, weights))
                       for e in self.terms})

    def is_weighted_homogeneous(self, weights):
        return len(self.weighted_degrees(weights)) <= 1

    def sorted_exps(self):
        # higher t-variables first, matching the way relations are displayed
        return sorted(self.terms, key=lambda e: tuple(reversed(e)), reverse=True)

    def text(self):
        if not self.terms:
            return "0"
        parts = []
        for e in self.sorted_exps():
            bits = [self.terms[e].text()]
            bits += [f"t{i}^{a}" for i, a in enumerate(e) if a]
            parts.append("*".join(bits))
        return " + ".join(parts)

    def json_terms(self):
        return [[list(map(int, e)), self.terms[e].text()]
                for e in self.sorted_exps()]

    def __repr__(self):
        return f"TPoly({self.text()})"


def evaluate_t(template: TPoly, args, x_cap=None, pow_cache=None) -> Poly3:
    """Substitute args[i] for t_i (ring homomorphism; args[0] is X).

    args must be homogeneous; every t-monomial of the template must
    evaluate to a single degree (inhomogeneous evaluation is an error).
    """
    field = args[0].field
    degs = []
    for a in args:
        d = a.homogeneous_degree()
        if d is None:
            raise ValueError("inhomogeneous evaluation: args must be homogeneous")
        degs.append(d)
    span = max((len(e) for e in template.terms), default=0)
    if span > len(args):
        raise ValueError("argument list shorter than the template's span")
    tdegs = {sum(a * d for a, d in zip(e, degs)) for e in template.terms}
    if len(tdegs) > 1:
        raise ValueError(
            f"inhomogeneous evaluation: t-monomial degrees {sorted(tdegs)}")
    cache = pow_cache if pow_cache is not None else {}
    out = Poly3.zero(field)
    for e in template.sorted_exps():
        c = template.terms[e]
        prod = None
        for i, a in enumerate(e):
            if a == 0:
                continue
            key = (i, a, x_cap)
            piece = cache.get(key)
            if piece is None:
                piece = poly_pow(args[i], a, x_cap=x_cap)
                cache[key] = piece
            prod = piece if prod is None else poly_mul(prod, piece, x_cap=x_cap)
        if prod is None:
            prod = Poly3.monomial(field, (0, 0, 0))
        out = out + prod.scale(c)
    return truncate_x(out, x_cap) if x_cap is not None else out
