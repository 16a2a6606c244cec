"""Coefficient fields: F_p, F_{p^k}, and F_p(x_ij).

Three realizations of the coefficient field, all behind one Scalar/Field
interface:

* prime mode        -- F_p residues,
* extension mode    -- F_{p^k} as coefficient vectors modulo a
                       deterministically generated irreducible (randomized
                       identity testing lives here),
* rational mode     -- the exact function field F_p(x_11,...,x_2r), with
                       lazily reduced fractions (see ratfield).

Fields also expose a small vectorized API over "coefficient arrays" (the
payload carried by sparse polynomials): concatenation, grouped sums,
pairwise products, scalar multiples and Frobenius, so polynomial
arithmetic can stay in numpy for the two finite modes.

ZechField at the bottom is a separate, smaller GF(p^m) in logarithm
representation used only by the brute-force invariant-dimension oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .errors import ContextMismatchError, DegenerateSpecializationError
from .ratfield import RatScalar, XPoly


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n == q:
            return True
        if n % q == 0:
            return False
    i = 37
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def default_extension_degree(p: int) -> int:
    """Smallest k with p^k >= 2^61 (Schwartz-Zippel headroom)."""
    k = 1
    while p ** k < 2 ** 61:
        k += 1
    return k


# ---------------------------------------------------------------------------
# univariate helpers over F_p (coefficient lists, constant first)

def _poly_mul_mod(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_rem(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            f = (c * inv) % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * m[j]) % p
    a = a[:dm]
    while len(a) < dm:
        a.append(0)
    return a


def _poly_powmod(a, n, m, p):
    result = [1]
    base = _poly_rem(a, m, p)
    while n:
        if n & 1:
            result = _poly_rem(_poly_mul_mod(result, base, p), m, p)
        base = _poly_rem(_poly_mul_mod(base, base, p), m, p)
        n >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    def trim(x):
        while x and x[-1] == 0:
            x.pop()
        return x
    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while len(r) >= len(b) and trim(r):
            if not r:
                break
            f = (r[-1] * inv) % p
            off = len(r) - len(b)
            for j in range(len(b)):
                r[off + j] = (r[off + j] - f * b[j]) % p
            r = trim(r)
        a, b = b, r
    return a


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return sorted(out)


def is_irreducible(coeffs, p) -> bool:
    """Rabin test for a monic univariate polynomial over F_p."""
    k = len(coeffs) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    x = [0, 1]
    for ell in _prime_factors(k):
        h = _poly_powmod(x, p ** (k // ell), coeffs, p)
        h = list(h)
        h[1] = (h[1] - 1) % p
        g = _poly_gcd(h, coeffs, p)
        if len(g) - 1 != 0:
            return False
    h = _poly_powmod(x, p ** k, coeffs, p)
    h[1] = (h[1] - 1) % p
    return all(c == 0 for c in h)


@lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> tuple:
    """Deterministic monic irreducible of degree k over F_p (seeded search)."""
    rng = np.random.default_rng(abs(hash(("irr", p, k))) % (2 ** 63))
    while True:
        coeffs = [int(c) for c in rng.integers(0, p, size=k)] + [1]
        if coeffs[0] == 0:
            coeffs[0] = 1
        if is_irreducible(coeffs, p):
            return tuple(coeffs)


# ---------------------------------------------------------------------------
# context

@dataclass(frozen=True)
class FieldContext:
    """Which coefficient field a computation runs in.

    mode is one of 'prime', 'extension', 'rational'.  For extension mode k
    is the degree and `irreducible` the modulus (filled in automatically);
    for rational mode r is the rank (2r symbols x_ij).  seed feeds the
    specialization sampler only.
    """

    p: int
    mode: str = "prime"
    k: int = 1
    r: int = 0
    seed: int = 0
    irreducible: tuple = dc_field(default=None)

    def __post_init__(self):
        if not is_prime(self.p) or self.p <= 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.mode not in ("prime", "extension", "rational"):
            raise ValueError(f"unknown field mode {self.mode!r}")
        if self.mode == "extension":
            if self.k < 1:
                raise ValueError("extension degree must be positive")
            if self.irreducible is None:
                object.__setattr__(self, "irreducible", find_irreducible(self.p, self.k))
            elif not is_irreducible(list(self.irreducible), self.p):
                raise ValueError("modulus is not irreducible of the stated degree")
        if self.mode == "rational" and self.r < 1:
            raise ValueError("rational mode needs the rank r")

    def field(self):
        return _field_for(self)

    @property
    def order(self):
        if self.mode == "prime":
            return self.p
        if self.mode == "extension":
            return self.p ** self.k
        return math.inf


@lru_cache(maxsize=None)
def _field_for(ctx: FieldContext):
    if ctx.mode == "prime":
        return PrimeField(ctx)
    if ctx.mode == "extension":
        return ExtensionField(ctx)
    return RationalField(ctx)


def extension_context(p: int, k: int = None, seed: int = 0) -> FieldContext:
    if k is None:
        k = default_extension_degree(p)
    return FieldContext(p=p, mode="extension", k=k, seed=seed)


def rational_context(p: int, r: int) -> FieldContext:
    return FieldContext(p=p, mode="rational", r=r)


# ---------------------------------------------------------------------------
# scalars

class Scalar:
    """Field element; arithmetic closed within one FieldContext."""

    __slots__ = ("field", "v")

    def __init__(self, field, v):
        self.field = field
        self.v = v

    def _chk(self, other):
        if not isinstance(other, Scalar) or other.field is not self.field:
            raise ContextMismatchError(
                "scalars from different field contexts")
        return other

    def __add__(self, other):
        return Scalar(self.field, self.field._add(self.v, self._chk(other).v))

    def __sub__(self, other):
        return Scalar(self.field, self.field._sub(self.v, self._chk(other).v))

    def __mul__(self, other):
        return Scalar(self.field, self.field._mul(self.v, self._chk(other).v))

    def __truediv__(self, other):
        return Scalar(self.field, self.field._div(self.v, self._chk(other).v))

    def __neg__(self):
        return Scalar(self.field, self.field._neg(self.v))

    def inv(self):
        return Scalar(self.field, self.field._inv(self.v))

    def pow(self, n: int):
        return Scalar(self.field, self.field._pow(self.v, n))

    def frobenius(self, m: int = 1):
        return Scalar(self.field, self.field._frobenius(self.v, m))

    @property
    def is_zero(self):
        return self.field._is_zero(self.v)

    def __eq__(self, other):
        if not isinstance(other, Scalar) or other.field is not self.field:
            return NotImplemented
        return self.field._eq(self.v, other.v)

    def __hash__(self):
        return hash((id(self.field), self.field._hashable(self.v)))

    def text(self):
        return self.field.scalar_text(self.v)

    def __repr__(self):
        return f"<{self.text()} in {self.field.name}>"


class BaseField:
    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.p = ctx.p

    # scalar construction ---------------------------------------------------
    def scalar(self, v):
        return Scalar(self, v)

    def from_int(self, n: int) -> Scalar:
        return self.scalar(self._from_int(n))

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def _eq(self, a, b):
        return self._is_zero(self._sub(a, b))

    def _pow(self, a, n):
        if n < 0:
            return self._pow(self._inv(a), -n)
        result = self._from_int(1)
        base = a
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return result

    def _div(self, a, b):
        return self._mul(a, self._inv(b))


class PrimeField(BaseField):
    """F_p; scalar payload is an int in [0, p)."""

    def __init__(self, ctx):
        super().__init__(ctx)
        self.name = f"F_{self.p}"
        self.nplanes = 1

    def _from_int(self, n):
        return n % self.p

    def _add(self, a, b):
        return (a + b) % self.p

    def _sub(self, a, b):
        return (a - b) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def _pow(self, a, n):
        if n < 0:
            return self._inv(self._pow(a, -n))
        return pow(a, n, self.p)

    def _frobenius(self, a, m):
        return a  # prime subfield is Frobenius-fixed

    def _is_zero(self, a):
        return a % self.p == 0

    def _hashable(self, a):
        return a

    def scalar_text(self, a):
        return str(a % self.p)

    def scalar_parse(self, s):
        return self.scalar(int(s) % self.p)

    def random(self, rng):
        return self.scalar(int(rng.integers(0, self.p)))

    # coefficient-array API --------------------------------------------------
    def arr_from_scalars(self, scalars):
        return np.array([s.v for s in scalars], dtype=np.int64)

    def arr_to_scalars(self, arr):
        return [self.scalar(int(v)) for v in arr]

    def arr_len(self, arr):
        return len(arr)

    def arr_concat(self, arrs):
        return np.concatenate(arrs)

    def arr_take(self, arr, idx):
        return arr[idx]

    def arr_neg(self, arr):
        return (-arr) % self.p

    def arr_scale(self, arr, s: Scalar):
        return (arr * s.v) % self.p

    def arr_sum_runs(self, arr, starts):
        return np.add.reduceat(arr, starts) % self.p

    def arr_nonzero_mask(self, arr):
        return arr % self.p != 0

    def arr_pairmul(self, pa, ia, pb, ib):
        return (pa[ia] * pb[ib]) % self.p

    def arr_frobenius(self, arr, m):
        return arr % self.p

    def arr_to_planes(self, arr):
        return (arr % self.p).reshape(-1, 1)

    def arr_from_planes(self, mat):
        return mat[:, 0] % self.p

    def fold_conv_planes(self, planes):
        return planes % self.p


class ExtensionField(BaseField):
    """F_{p^k}; scalar payload is a tuple of k ints (low-to-high)."""

    def __init__(self, ctx):
        super().__init__(ctx)
        self.k = ctx.k
        self.m = list(ctx.irreducible)
        self.name = f"F_{self.p}^{self.k}"
        self.nplanes = self.k
        # x^(k+i) mod m as rows, for folding convolution planes
        red = np.zeros((self.k - 1, self.k), dtype=np.int64) if self.k > 1 else \
            np.zeros((0, 1), dtype=np.int64)
        cur = _poly_rem([0] * self.k + [1], self.m, self.p)
        for i in range(self.k - 1):
            red[i, :] = cur
            cur = _poly_rem([0] + cur, self.m, self.p)
        self._red = red
        # Frobenius as an F_p-linear map: row i = x^(i*p) mod m
        F = np.zeros((self.k, self.k), dtype=np.int64)
        for i in range(self.k):
            e = [0] * (i * self.p) + [1]
            F[i, :] = _poly_rem(e, self.m, self.p)
        self._frob_powers = {1: F}

    def _frob_matrix(self, m):
        m %= self.k
        if m == 0:
            return np.eye(self.k, dtype=np.int64)
        if m not in self._frob_powers:
            self._frob_powers[m] = self._frob_matrix(m - 1) @ self._frob_powers[1] % self.p
        return self._frob_powers[m]

    def _from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def from_coeffs(self, coeffs) -> Scalar:
        c = [int(x) % self.p for x in coeffs]
        if len(c) > self.k:
            c = _poly_rem(c, self.m, self.p)
        c += [0] * (self.k - len(c))
        return self.scalar(tuple(c))

    def _add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def _neg(self, a):
        return tuple((-x) % self.p for x in a)

    def _mul(self, a, b):
        conv = _poly_mul_mod(list(a), list(b), self.p)
        return tuple(_poly_rem(conv, self.m, self.p))

    def _inv(self, a):
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of zero")
        p = self.p

        def trim(x):
            while x and x[-1] == 0:
                x.pop()
            return x

        def divmod_poly(u, v):
            u = list(u)
            q = [0] * max(1, len(u) - len(v) + 1)
            inv = pow(v[-1], p - 2, p)
            while len(u) >= len(v):
                f = (u[-1] * inv) % p
                off = len(u) - len(v)
                q[off] = f
                for j in range(len(v)):
                    u[off + j] = (u[off + j] - f * v[j]) % p
                trim(u)
                if not u:
                    break
            return q, u

        # extended Euclid: t*a = gcd mod m
        r0, r1 = list(self.m), trim(list(a))
        t0, t1 = [0], [1]
        while len(r1) > 1:
            q, r = divmod_poly(r0, r1)
            qt = _poly_mul_mod(q, t1, p)
            t2 = [0] * max(len(t0), len(qt))
            for i, c in enumerate(t0):
                t2[i] = c
            for i, c in enumerate(qt):
                t2[i] = (t2[i] - c) % p
            r0, r1, t0, t1 = r1, r, t1, trim(t2) or [0]
        inv = pow(r1[0], p - 2, p)
        out = [(c * inv) % p for c in t1]
        out = _poly_rem(out, self.m, p) if len(out) > self.k else out
        out += [0] * (self.k - len(out))
        return tuple(out[:self.k])

    def _frobenius(self, a, m):
        if m == 0:
            return a
        F = self._frob_matrix(m % self.k)
        vec = np.array(a, dtype=np.int64) @ F % self.p
        return tuple(int(x) for x in vec)

    def _pow(self, a, n):
        if n < 0:
            return self._pow(self._inv(a), -n)
        # split off Frobenius-sized chunks: a^(c*p^j) = frob^j(a^c)
        result = self._from_int(1)
        j = 0
        while n:
            d = n % self.p
            if d:
                piece = self._from_int(1)
                for _ in range(d):
                    piece = self._mul(piece, a)
                result = self._mul(result, self._frobenius(piece, j))
            n //= self.p
            j += 1
        return result

    def _is_zero(self, a):
        return all(c % self.p == 0 for c in a)

    def _hashable(self, a):
        return a

    def scalar_text(self, a):
        return "[" + ",".join(str(c) for c in a) + "]"

    def scalar_parse(self, s):
        body = s.strip()[1:-1]
        return self.from_coeffs([int(c) for c in body.split(",")])

    def random(self, rng):
        return self.scalar(tuple(int(c) for c in rng.integers(0, self.p, size=self.k)))

    # coefficient-array API: payload (n, k) int64 -----------------------------
    def arr_from_scalars(self, scalars):
        return np.array([s.v for s in scalars], dtype=np.int64).reshape(-1, self.k)

    def arr_to_scalars(self, arr):
        return [self.scalar(tuple(int(c) for c in row)) for row in arr]

    def arr_len(self, arr):
        return arr.shape[0]

    def arr_concat(self, arrs):
        return np.concatenate(arrs, axis=0)

    def arr_take(self, arr, idx):
        return arr[idx]

    def arr_neg(self, arr):
        return (-arr) % self.p

    def _mul_matrix(self, s: Scalar):
        M = np.zeros((self.k, self.k), dtype=np.int64)
        row = list(s.v)
        for i in range(self.k):
            M[i, :] = row
            row = _poly_rem([0] + row, self.m, self.p)
        return M

    def arr_scale(self, arr, s: Scalar):
        return arr @ self._mul_matrix(s) % self.p

    def arr_sum_runs(self, arr, starts):
        return np.add.reduceat(arr, starts, axis=0) % self.p

    def arr_nonzero_mask(self, arr):
        return (arr % self.p).any(axis=1)

    def arr_pairmul(self, pa, ia, pb, ib):
        A = pa[ia]
        B = pb[ib]
        k = self.k
        conv = np.zeros((A.shape[0], 2 * k - 1), dtype=np.int64)
        for i in range(k):
            col = A[:, i:i + 1]
            conv[:, i:i + k] += col * B
        return self.fold_conv_planes(conv)

    def arr_frobenius(self, arr, m):
        return arr @ self._frob_matrix(m % self.k) % self.p

    def arr_to_planes(self, arr):
        return arr % self.p

    def arr_from_planes(self, mat):
        return mat % self.p

    def fold_conv_planes(self, planes):
        k = self.k
        if planes.shape[-1] == k:
            return planes % self.p
        low = planes[..., :k] + planes[..., k:] @ self._red
        return low % self.p


class RationalField(BaseField):
    """F_p(x_11,...,x_2r); scalar payload is a RatScalar.

    Symbol order (and text order) is x11, x21, x12, x22, ..., x1r, x2r.
    """

    def __init__(self, ctx):
        super().__init__(ctx)
        self.r = ctx.r
        self.nvars = 2 * ctx.r
        self.name = f"F_{self.p}(x_ij)"
        self.var_names = []
        for j in range(1, ctx.r + 1):
            self.var_names += [f"x1{j}", f"x2{j}"]
        self.nplanes = None  # no dense engine in rational mode

    def x(self, i: int, j: int) -> Scalar:
        """The symbol x_ij (i in {1,2}, j in 1..r)."""
        idx = 2 * (j - 1) + (i - 1)
        return self.scalar(RatScalar(self, XPoly.var(self.p, self.nvars, idx)))

    def _from_int(self, n):
        return RatScalar(self, XPoly.const(self.p, self.nvars, n))

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _inv(self, a):
        return a.inv()

    def _div(self, a, b):
        return a / b

    def _pow(self, a, n):
        return a.pow(n)

    def _frobenius(self, a, m):
        return a.frobenius(m)

    def _is_zero(self, a):
        return a.is_zero

    def _hashable(self, a):
        return a.normalize()

    def scalar_text(self, a):
        return a.text(self.var_names)

    def random(self, rng):
        # small random fraction, for property tests only
        def rand_poly():
            t = {}
            for _ in range(int(rng.integers(1, 4))):
                e = tuple(int(x) for x in rng.integers(0, 3, size=self.nvars))
                c = int(rng.integers(1, self.p))
                t[e] = c
            return XPoly(self.p, self.nvars, t)
        num = rand_poly()
        den = rand_poly()
        while den.is_zero:
            den = rand_poly()
        return self.scalar(RatScalar(self, num, {den: 1}))

    # coefficient-array API: payload is a plain list of RatScalar ------------
    def arr_from_scalars(self, scalars):
        return [s.v for s in scalars]

    def arr_to_scalars(self, arr):
        return [self.scalar(v) for v in arr]

    def arr_len(self, arr):
        return len(arr)

    def arr_concat(self, arrs):
        out = []
        for a in arrs:
            out.extend(a)
        return out

    def arr_take(self, arr, idx):
        return [arr[int(i)] for i in idx]

    def arr_neg(self, arr):
        return [-v for v in arr]

    def arr_scale(self, arr, s: Scalar):
        return [v * s.v for v in arr]

    def arr_sum_runs(self, arr, starts):
        out = []
        bounds = list(starts) + [len(arr)]
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            acc = arr[lo]
            for i in range(lo + 1, hi):
                acc = acc + arr[i]
            out.append(acc)
        return out

    def arr_nonzero_mask(self, arr):
        return np.array([not v.is_zero for v in arr], dtype=bool)

    def arr_pairmul(self, pa, ia, pb, ib):
        return [pa[int(i)] * pb[int(j)] for i, j in zip(ia, ib)]

    def arr_frobenius(self, arr, m):
        return [v.frobenius(m) for v in arr]


# ---------------------------------------------------------------------------
# specialization (probabilistic stand-in for the generic point)

@dataclass
class Specialization:
    """A sampled assignment x_ij -> F_{p^k} with its guard report."""

    ctx: FieldContext
    r: int
    assignment: dict           # (i, j) -> Scalar, i in {1,2}, j in 1..r
    guard_report: list         # [(guard name, True)]
    resamples: int


def _det(rows, field):
    """Determinant of a small square matrix of Scalars (exact elimination)."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inv()
        for i in range(c + 1, n):
            if m[i][c].is_zero:
                continue
            f = m[i][c] * inv
            for j in range(c, n):
                m[i][j] = m[i][j] - f * m[c][j]
    return det


def gamma_entry(x, i, j):
    """Entry of the Frobenius matrix: row 2m+1 is x_1j^(p^m), row 2m+2 is x_2j^(p^m)."""
    m, rem = divmod(i - 1, 2)
    return x[(rem + 1, j)].frobenius(m)


def specialize(ctx: FieldContext, r: int, guards, budget: int = 32) -> Specialization:
    """Sample x_ij in F_{p^k} until every guard minor is nonzero.

    guards: iterable of (name, row index list); rows address the
    (2r+2) x r Frobenius matrix.  Deterministic in (p, k, seed).
    """
    if ctx.mode != "extension":
        raise ValueError("specialize requires an extension-mode context")
    if ctx.order < 2 ** 61:
        raise ValueError("extension field too small: need p^k >= 2^61")
    field = ctx.field()
    rng = np.random.default_rng(ctx.seed)
    guards = list(guards)
    for attempt in range(budget):
        x = {(i, j): field.scalar(tuple(int(c) for c in rng.integers(0, ctx.p, size=ctx.k)))
             for i in (1, 2) for j in range(1, r + 1)}
        report = []
        ok = True
        for name, rows in guards:
            mat = [[gamma_entry(x, i, j) for j in range(1, r + 1)] for i in rows]
            nz = not _det(mat, field).is_zero
            report.append((name, nz))
            if not nz:
                ok = False
                break
        if ok:
            return Specialization(ctx, r, x, report, attempt)
    raise DegenerateSpecializationError(
        f"degenerate specialization: {budget} resamples exhausted")


# ---------------------------------------------------------------------------
# Zech-logarithm GF(p^m): the oracle field for exact linear algebra

class ZechField:
    """GF(p^m) in discrete-log representation with vectorized numpy ops.

    Elements are int64 codes: -1 encodes 0, otherwise the code is log_g.
    Used by the invariant-dimension oracle, where millions of additive
    operations make coefficient-vector arithmetic too slow.
    """

    ZERO = -1

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = list(find_irreducible(p, m))
        self._build_tables()

    def _find_generator(self):
        facs = _prime_factors(self.q - 1)
        # deterministic sweep over field elements, starting at the class of x
        for n in range(self.p, self.q):
            cand, t = [], n
            while t:
                cand.append(t % self.p)
                t //= self.p
            ok = True
            for f in facs:
                c = _poly_powmod(cand, (self.q - 1) // f, self.modulus, self.p)
                if c[0] == 1 and all(v == 0 for v in c[1:]):
                    ok = False
                    break
            if ok:
                return cand
        raise RuntimeError("no primitive element found")  # unreachable

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        g = self._find_generator()
        g_vec = np.zeros(m, dtype=np.int64)
        for i, c in enumerate(_poly_rem(g, self.modulus, p)):
            g_vec[i] = c
        red = np.zeros((m - 1, m), dtype=np.int64) if m > 1 else np.zeros((0, 1), np.int64)
        cur = _poly_rem([0] * m + [1], self.modulus, p)
        for i in range(m - 1):
            red[i, :] = cur
            cur = _poly_rem([0] + cur, self.modulus, p)

        # powers of g in blocks: V[i] = coeff vector of g^i
        val = np.zeros((q - 1, m), dtype=np.int64)
        val[0, 0] = 1
        block = min(4096, q - 1)
        # fill the first block by repeated multiplication with g
        for i in range(1, block):
            conv = np.zeros(2 * m - 1, dtype=np.int64)
            for t in range(m):
                conv[t:t + m] += val[i - 1, t] * g_vec
            low = conv[:m] + conv[m:] @ red
            val[i] = low % p
        filled = block
        gB = val[filled - 1].copy()  # g^(block-1)
        # multiply whole blocks by g^block
        conv = np.zeros(2 * m - 1, dtype=np.int64)
        for t in range(m):
            conv[t:t + m] += gB[t] * g_vec
        gB = (conv[:m] + conv[m:] @ red) % p  # g^block
        while filled < q - 1:
            n = min(block, q - 1 - filled)
            A = val[filled - block:filled - block + n]
            conv = np.zeros((n, 2 * m - 1), dtype=np.int64)
            for t in range(m):
                conv[:, t:t + m] += A[:, t:t + 1] * gB
            val[filled:filled + n] = (conv[:, :m] + conv[:, m:] @ red) % p
            filled += n
        # pack coefficient vectors into base-p integers for table lookups
        weights = p ** np.arange(m, dtype=np.int64)
        packed = val @ weights
        log = np.full(q, -1, dtype=np.int64)
        log[packed] = np.arange(q - 1, dtype=np.int64)
        if (log[packed] != np.arange(q - 1)).any():
            raise RuntimeError("generator is not primitive")
        # Zech table: zech[d] = log(1 + g^d), sentinel q-1 marks 1+g^d = 0
        plus_one = packed + 1 - (packed % p == p - 1) * p
        zech = np.where(plus_one == 0, q - 1, log[plus_one])
        self.val_packed = packed
        self.log = log
        self.zech = zech
        self.exp_table = val
        self._log_minus1 = 0 if p == 2 else (q - 1) // 2

    # --- vectorized ops on int64 code arrays --------------------------------
    def mul(self, a, b):
        out = a + b
        out %= (self.q - 1)
        return np.where((a == -1) | (b == -1), -1, out)

    def add(self, a, b):
        d = (b - a) % (self.q - 1)
        z = self.zech[d]
        out = (a + z) % (self.q - 1)
        out = np.where(z == self.q - 1, -1, out)   # b = -a
        out = np.where(a == -1, b, out)
        out = np.where(b == -1, a, out)
        return out

    def neg(self, a):
        return np.where(a == -1, -1, (a + self._log_minus1) % (self.q - 1))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        if np.any(a == -1):
            raise ZeroDivisionError("inverse of zero")
        return (-a) % (self.q - 1)

    def pow_int(self, a, n):
        if a == -1:
            return -1 if n else 0
        return (a * n) % (self.q - 1)

    def from_int(self, n):
        n %= self.p
        if n == 0:
            return -1
        return int(self.log[n])

    def sample(self, rng, size):
        """Uniform field elements as codes."""
        vals = rng.integers(0, self.q, size=size)
        return self.log[vals]

    def frobenius_code(self, a, m=1):
        return np.where(a == -1, -1, (a * pow(self.p, m, self.q - 1)) % (self.q - 1))
