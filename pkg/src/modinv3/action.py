"""The action of (Z/pZ)^r on k[X,Y,Z], invariance, norms, and the
brute-force invariant-dimension oracle.

Generator j acts by X -> X, Y -> x_1j X + Y,
Z -> (x_1j^2 + x_2j) X + 2 x_1j Y + Z; a general group element acts the
same way with u = sum g_j x_1j, v = sum g_j x_2j in place of x_1j, x_2j.

The dimension oracle works degreewise over a smaller exact field
GF(p^m) in Zech-logarithm form: it assembles the r action matrices on
the degree-d monomial basis and intersects the kernels of (action - id)
by exact elimination.  It shares the guard-minor discipline with the
main specialization but none of the construction machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError
from .fields import FieldContext, Specialization, ZechField, extension_context, specialize
from .minors import GammaMinorTable, guard_list
from .poly import Mono3, Poly3, poly_mul, poly_pow

NORM_BUDGET_DEFAULT = 2401
DIM_BUDGET_DEFAULT = 200


@dataclass
class RepContext:
    """A concrete 3-dimensional representation of (Z/pZ)^r."""

    fctx: FieldContext
    r: int
    x: dict                      # (i, j) -> Scalar
    specialization: Specialization = None

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("rank r must be at least 2")
        self._minors = None
        self._gen_cache = {}

    @property
    def p(self):
        return self.fctx.p

    @property
    def field(self):
        return self.fctx.field()

    @property
    def parity(self):
        return "odd" if self.r % 2 else "even"

    @property
    def s(self):
        return (self.r + 1) // 2

    @property
    def minor_table(self) -> GammaMinorTable:
        if self._minors is None:
            self._minors = GammaMinorTable(self.field, self.r, self.x)
        return self._minors

    @classmethod
    def rational(cls, p: int, r: int) -> "RepContext":
        fctx = FieldContext(p=p, mode="rational", r=r)
        F = fctx.field()
        x = {(i, j): F.x(i, j) for i in (1, 2) for j in range(1, r + 1)}
        return cls(fctx=fctx, r=r, x=x)

    @classmethod
    def specialized(cls, p: int, r: int, seed: int = 0, k: int = None) -> "RepContext":
        fctx = extension_context(p, k=k, seed=seed)
        sp = specialize(fctx, r, guard_list(r))
        return cls(fctx=fctx, r=r, x=sp.assignment, specialization=sp)


def _substitution_polys(ctx: RepContext, u, v):
    """Poly3 images of X, Y, Z under the element with parameters (u, v)."""
    F = ctx.field
    X = Poly3.variable(F, "X")
    ypoly = Poly3.from_terms(F, [((0, 1, 0), F.one), ((1, 0, 0), u)])
    w = u * u + v
    zpoly = Poly3.from_terms(
        F, [((0, 0, 1), F.one), ((0, 1, 0), F.from_int(2) * u), ((1, 0, 0), w)])
    return X, ypoly, zpoly


def _apply_substitution(ctx: RepContext, f: Poly3, u, v, cache_key=None):
    """Substitute Y -> Y + uX, Z -> Z + 2uY + (u^2+v)X, term by term.

    Expansions use base-p digit splitting, so each power of the
    substituted variables is a short product of Frobenius twists.
    """
    F = ctx.field
    p = ctx.p
    if f.is_zero:
        return f
    cache = ctx._gen_cache.setdefault(cache_key, {}) if cache_key else {}

    def digit_pows(kind, t, d):
        # ((var image)^(p^t))^d for d < p
        key = (kind, t, d)
        hit = cache.get(key)
        if hit is None:
            if kind == "Y":
                base = Poly3.from_terms(
                    F, [((0, 1, 0), F.one), ((1, 0, 0), u)]).frobenius(t)
            else:
                w = u * u + v
                base = Poly3.from_terms(
                    F, [((0, 0, 1), F.one), ((0, 1, 0), F.from_int(2) * u),
                        ((1, 0, 0), w)]).frobenius(t)
            hit = poly_pow(base, d)
            cache[key] = hit
        return hit

    def var_power(kind, e):
        key = (kind, "full", e)
        hit = cache.get(key)
        if hit is None:
            pieces = []
            t = 0
            ee = e
            while ee:
                d = ee % p
                if d:
                    pieces.append(digit_pows(kind, t, d))
                ee //= p
                t += 1
            if not pieces:
                hit = Poly3.monomial(F, (0, 0, 0))
            else:
                pieces.sort(key=lambda q: q.nterms)
                hit = pieces[0]
                for q in pieces[1:]:
                    hit = poly_mul(hit, q)
            cache[key] = hit
        return hit

    blocks_e = []
    blocks_c = []
    for (mono, coeff) in f.terms():
        a, b, c = mono
        img = None
        if b:
            img = var_power("Y", b)
        if c:
            zc = var_power("Z", c)
            img = zc if img is None else poly_mul(img, zc)
        if img is None:
            img = Poly3.monomial(F, (0, 0, 0))
        img = img.mul_xpow(a).scale(coeff)
        if not img.is_zero:
            blocks_e.append(img.exps)
            blocks_c.append(img.coeffs)
    if not blocks_e:
        return Poly3.zero(F)
    return Poly3(F, np.concatenate(blocks_e), F.arr_concat(blocks_c))


def apply_gen(ctx: RepContext, f: Poly3, j: int) -> Poly3:
    """Action of the canonical generator e_j."""
    if not 1 <= j <= ctx.r:
        raise IndexError(f"generator index {j} outside 1..{ctx.r}")
    u = ctx.x[(1, j)]
    v = ctx.x[(2, j)]
    return _apply_substitution(ctx, f, u, v, cache_key=("gen", j))


def apply(ctx: RepContext, f: Poly3, gvec) -> Poly3:
    """Action of the group element sum g_j e_j (componentwise mod p)."""
    F = ctx.field
    gvec = [int(g) % ctx.p for g in gvec]
    if len(gvec) != ctx.r:
        raise ValueError(f"group vector needs {ctx.r} components")
    u = F.zero
    v = F.zero
    for j, g in enumerate(gvec, start=1):
        if g:
            gs = F.from_int(g)
            u = u + gs * ctx.x[(1, j)]
            v = v + gs * ctx.x[(2, j)]
    if u.is_zero and v.is_zero:
        return f
    return _apply_substitution(ctx, f, u, v,
                               cache_key=("vec", tuple(gvec)))


def is_invariant(ctx: RepContext, f: Poly3) -> bool:
    """f is fixed by every e_j (the e_j generate the group)."""
    return all(apply_gen(ctx, f, j) == f for j in range(1, ctx.r + 1))


def norm_Z(ctx: RepContext, budget: int = NORM_BUDGET_DEFAULT) -> Poly3:
    """The orbit product of Z: nested norms over the cyclic factors."""
    if ctx.p ** ctx.r > budget:
        raise BudgetExceededError(
            f"norm too large: p^r = {ctx.p ** ctx.r} > budget {budget}")
    F = ctx.field
    N = Poly3.variable(F, "Z")
    gvec = [0] * ctx.r
    for j in range(1, ctx.r + 1):
        prod = N
        for m in range(1, ctx.p):
            gvec[j - 1] = m
            prod = poly_mul(prod, apply(ctx, N, gvec))
        gvec[j - 1] = 0
        N = prod
    return N


def poly_eval(f: Poly3, point):
    """Exact evaluation at a triple of Scalars, fully vectorized."""
    F = f.field
    if f.is_zero:
        return F.zero
    tables = []
    for var in range(3):
        mx = int(f.exps[:, var].max())
        tab = [F.one]
        val = point[var]
        for _ in range(mx):
            tab.append(tab[-1] * val)
        tables.append(F.arr_from_scalars(tab))
    acc = f.coeffs
    n = f.exps.shape[0]
    idx = np.arange(n)
    for var in range(3):
        acc = F.arr_pairmul(acc, idx, tables[var], f.exps[:, var])
    total = F.arr_sum_runs(acc, np.array([0]))
    return F.arr_to_scalars(total)[0]


def eval_invariance_probe(ctx: RepContext, f: Poly3, trials: int = 3,
                          seed: int = 0) -> bool:
    """sigma(f) = f checked at random points: sigma(f)(P) = f(sigma-matrix P).

    Exact arithmetic in F_{p^k}; each generator and each sampled point.
    Used on generators too large for the symbolic substitution.
    """
    F = ctx.field
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        pt = tuple(F.random(rng) for _ in range(3))
        base = poly_eval(f, pt)
        xv, yv, zv = pt
        for j in range(1, ctx.r + 1):
            u = ctx.x[(1, j)]
            v = ctx.x[(2, j)]
            w = u * u + v
            # image point: substitute into the variables
            ypt = u * xv + yv
            zpt = w * xv + F.from_int(2) * u * yv + zv
            if poly_eval(f, (xv, ypt, zpt)) != base:
                return False
    return True


# ---------------------------------------------------------------------------
# brute-force invariant dimension over a Zech-log field

def _oracle_degree(p: int, r: int) -> int:
    m = r + 1
    while p ** m < 2 ** 20:
        m += 1
    return m


@lru_cache(maxsize=None)
def _oracle_field(p: int, m: int) -> ZechField:
    return ZechField(p, m)


def _zech_scalar_det(Z: ZechField, mat) -> int:
    n = len(mat)
    m = [row[:] for row in mat]
    det = 0  # log(1)
    zero = -1
    sign_neg = False
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != zero), None)
        if piv is None:
            return zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign_neg = not sign_neg
        det = (det + m[c][c]) % (Z.q - 1)
        inv = (-m[c][c]) % (Z.q - 1)
        arr = np.array(m[c], dtype=np.int64)
        for i in range(c + 1, n):
            if m[i][c] == zero:
                continue
            f = (m[i][c] + inv) % (Z.q - 1)
            row = Z.add(np.array(m[i], dtype=np.int64),
                        Z.neg(Z.mul(np.full(n, f, dtype=np.int64), arr)))
            m[i] = [int(t) for t in row]
    if sign_neg:
        det = (det + Z._log_minus1) % (Z.q - 1)
    return det


def _oracle_specialize(Z: ZechField, r: int, seed: int, budget: int = 32):
    rng = np.random.default_rng(seed)
    guards = guard_list(r)
    qm1 = Z.q - 1
    pe = pow(Z.p, 1, qm1)
    for _ in range(budget):
        xs = {(i, j): int(Z.sample(rng, 1)[0])
              for i in (1, 2) for j in range(1, r + 1)}
        ok = True
        for name, rows in guards:
            mat = []
            for i in rows:
                mm, rem = divmod(i - 1, 2)
                row = []
                for j in range(1, r + 1):
                    code = xs[(rem + 1, j)]
                    row.append(-1 if code == -1 else (code * pow(Z.p, mm, qm1)) % qm1)
                mat.append(row)
            if _zech_scalar_det(Z, mat) == -1:
                ok = False
                break
        if ok:
            return xs
    raise RuntimeError("oracle specialization degenerate")


def _pascal_mod(p: int, n: int):
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[:, 0] = 1
    for i in range(1, n + 1):
        P[i, 1:i + 1] = (P[i - 1, 1:i + 1] + P[i - 1, 0:i]) % p
    return P


def _action_matrix(Z: ZechField, xs, j, d, pasc):
    """Matrix of e_j acting on degree-d monomials (grevlex-desc order)."""
    qm1 = Z.q - 1
    monos = [(d - b - c, b, c) for b in range(d, -1, -1) for c in range(d - b, -1, -1)]
    monos.sort(key=lambda m: (m[0], m[1]))  # grevlex desc: smaller ex first
    N = len(monos)
    col_of = {}
    for i, m in enumerate(monos):
        col_of[(m[1], m[2])] = i

    def code_mul(a, b):
        if a == -1 or b == -1:
            return -1
        return (a + b) % qm1

    def code_pow(a, e):
        if e == 0:
            return 0
        if a == -1:
            return -1
        return (a * e) % qm1

    u = xs[(1, j)]
    v = xs[(2, j)]
    # w = u^2 + v
    uu = code_pow(u, 2)
    w = int(Z.add(np.array([uu]), np.array([v]))[0])
    two_u = code_mul(int(Z.log[2 % Z.p]) if 2 % Z.p else -1, u)
    logs_small = Z.log  # log of packed ints; small ints 0..p-1 are packed as themselves
    M = np.full((N, N), -1, dtype=np.int64)
    add = Z.add
    for col, (a, b, c) in enumerate(monos):
        # (uX + Y)^b term i: C(b,i) u^(b-i) Y^i X^(b-i)
        ycoef = np.full(b + 1, -1, dtype=np.int64)
        for i in range(b + 1):
            binc = int(pasc[b, i])
            if binc == 0:
                continue
            t = code_mul(int(logs_small[binc]), code_pow(u, b - i))
            ycoef[i] = t
        # (wX + 2uY + Z)^c term (t2, t3): trinom * w^(c-t2-t3) (2u)^t2 Y^t2 Z^t3
        for t3 in range(c + 1):
            base3 = int(pasc[c, t3])
            if base3 == 0:
                continue
            for t2 in range(c - t3 + 1):
                tri = (base3 * int(pasc[c - t3, t2])) % Z.p
                if tri == 0:
                    continue
                zc = code_mul(int(logs_small[tri]),
                              code_mul(code_pow(w, c - t3 - t2), code_pow(two_u, t2)))
                if zc == -1:
                    continue
                # combine with every Y-part entry
                for i in range(b + 1):
                    if ycoef[i] == -1:
                        continue
                    row = col_of[(i + t2, t3)]
                    val = (ycoef[i] + zc) % qm1
                    M[row, col] = int(add(np.array([M[row, col]]),
                                          np.array([val]))[0])
    return M, monos


def _rref_kernel(Z: ZechField, A):
    """Kernel basis (cols x kdim codes) of A over GF(q), by exact RREF."""
    qm1 = Z.q - 1
    A = A.copy()
    rows, cols = A.shape
    piv_of_col = np.full(cols, -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        block = A[r:, c]
        nz = np.flatnonzero(block != -1)
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = (qm1 - A[r, c]) % qm1
        row = A[r]
        nzr = row != -1
        row[nzr] = (row[nzr] + inv) % qm1
        # eliminate every other row with a nonzero entry in column c
        colvals = A[:, c].copy()
        colvals[r] = -1
        tgt = np.flatnonzero(colvals != -1)
        if len(tgt):
            f = colvals[tgt]
            prod = np.where(row[None, :] == -1, -1,
                            (f[:, None] + row[None, :]) % qm1)
            A[tgt] = Z.add(A[tgt], Z.neg(prod))
        piv_of_col[c] = r
        r += 1
        if r == rows:
            break
    free = np.flatnonzero(piv_of_col == -1)
    K = np.full((cols, len(free)), -1, dtype=np.int64)
    for t, c in enumerate(free):
        K[c, t] = 0  # log(1)
    pivs = np.flatnonzero(piv_of_col != -1)
    if len(pivs) and len(free):
        # x_pivcol = -A[pivrow, freecol]
        block = A[np.ix_(piv_of_col[pivs], free)]
        K[pivs] = Z.neg(block)
    return K


def _zech_matmul(Z: ZechField, A, B):
    """A (n x m) @ B (m x t) over GF(q), vectorized per inner index."""
    n, m = A.shape
    t = B.shape[1]
    out = np.full((n, t), -1, dtype=np.int64)
    qm1 = Z.q - 1
    for i in range(m):
        acol = A[:, i]
        brow = B[i]
        if (acol == -1).all() or (brow == -1).all():
            continue
        prod = np.where((acol[:, None] == -1) | (brow[None, :] == -1), -1,
                        (acol[:, None] + brow[None, :]) % qm1)
        out = Z.add(out, prod)
    return out


def invariant_dimension(ctx: RepContext, d: int,
                        budget: int = DIM_BUDGET_DEFAULT, seed=None) -> int:
    """dim of degree-d invariants: joint kernel of the r maps (e_j - id).

    Runs over a dedicated GF(p^m) Zech field (own specialization, same
    guard minors, seeded from the context) sized for exact elimination.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d == 0:
        return 1
    if math.comb(d + 2, 2) > math.comb(budget + 2, 2):
        raise BudgetExceededError(f"degree {d} beyond linear-algebra budget")
    p, r = ctx.p, ctx.r
    Z = _oracle_field(p, _oracle_degree(p, r))
    if seed is None:
        seed = ctx.fctx.seed
    xs = _oracle_specialize(Z, r, seed)
    pasc = _pascal_mod(p, d)
    K = None
    for j in range(1, r + 1):
        M, _ = _action_matrix(Z, xs, j, d, pasc)
        # subtract the identity
        N = M.shape[0]
        diag = np.arange(N)
        one = np.zeros(N, dtype=np.int64)
        M[diag, diag] = Z.add(M[diag, diag], Z.neg(one))
        A = M if K is None else _zech_matmul(Z, M, K)
        B = _rref_kernel(Z, A)
        K = B if K is None else _zech_matmul(Z, K, B)
        if K.shape[1] == 0:
            return 0
    return K.shape[1]
