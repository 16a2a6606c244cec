"""Numerical semigroups, Watanabe gluing, and the recursive families H_s.

Gluing H' = <b, cH> (b in H, gcd(b,c) = 1, c > 1) keeps the semigroup
ring a complete intersection and contributes the binomial
t_new^c - prod t_i^(b_i).  Iterating from N produces, for each parity,
the semigroup of lead-monomial Y-exponents together with its toric
binomials.

Membership factorizations are deterministic: among all factorizations
the lexicographically greatest by exponents of the later generators is
chosen.  That tie-break reproduces the expressions used in the gluing
recursion (e.g. p^4+2 = (p^2-1) p^2 + 1 (p^2+2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import FieldContext
from .poly import TPoly


class NumericalSemigroup:
    """Additively closed subset of N given by generators (gcd 1 overall)."""

    #: cap on the membership table; min-gen*max-gen would be the safe
    #: Frobenius-style size but blows past memory for the largest (p, s),
    #: so tables grow on demand up to max(query, cap'd default)
    TABLE_CAP = 3_000_000

    def __init__(self, generators):
        gens = tuple(int(g) for g in generators)
        if not gens or any(g <= 0 for g in gens):
            raise ValueError("generators must be positive")
        self.gens = gens
        self._tables = None
        self._bound = -1

    def default_bound(self):
        frob = min(self.gens) * max(self.gens) + max(self.gens)
        return min(frob, max(self.TABLE_CAP, 2 * max(self.gens)))

    def _ensure(self, bound):
        bound = max(bound, self.default_bound())
        if self._tables is not None and self._bound >= bound:
            return
        tables = []
        reach = np.zeros(bound + 1, dtype=bool)
        reach[0] = True
        for g in self.gens:
            reach = reach.copy()
            # unbounded copies of one generator: doubling shift closure
            shift = g
            while shift <= bound:
                reach[shift:] = reach[shift:] | reach[:-shift]
                shift *= 2
            tables.append(reach)
        self._tables = tables
        self._bound = bound

    def contains(self, n: int) -> bool:
        if n < 0:
            return False
        self._ensure(n)
        return bool(self._tables[-1][n])

    def membership(self, n: int):
        """Factorization over the generators, or None.

        Deterministic: maximizes the exponent of the last generator, then
        the one before it, and so on.
        """
        if n < 0:
            return None
        self._ensure(n)
        if not self._tables[-1][n]:
            return None
        expo = [0] * len(self.gens)
        rem = n
        for i in range(len(self.gens) - 1, 0, -1):
            g = self.gens[i]
            prev = self._tables[i - 1]
            e = rem // g
            while not prev[rem - e * g]:
                e -= 1
            expo[i] = e
            rem -= e * g
        if rem % self.gens[0] != 0:
            raise AssertionError("membership table inconsistent")
        expo[0] = rem // self.gens[0]
        return tuple(expo)

    def membership_set(self, bound: int) -> np.ndarray:
        self._ensure(bound)
        return self._tables[-1][: bound + 1].copy()

    def __repr__(self):
        return f"NumericalSemigroup{self.gens}"


def semigroups_equal(a: NumericalSemigroup, b: NumericalSemigroup) -> bool:
    """Exact set equality: mutual generator membership, plus membership
    agreement on the (capped) DP window."""
    if not all(b.contains(g) for g in a.gens):
        return False
    if not all(a.contains(g) for g in b.gens):
        return False
    bound = max(a.default_bound(), b.default_bound())
    return bool((a.membership_set(bound) == b.membership_set(bound)).all())


@dataclass(frozen=True)
class GluingStep:
    b: int
    c: int
    expr: tuple  # b written over the previous semigroup's generators


def glue(H: NumericalSemigroup, b: int, c: int):
    """Gluing <b, cH>; returns (H', Watanabe relation record).

    The relation is t_(m+1)^c - prod t_i^(b_i) over the old generator
    order, with t_(m+1) the new generator.
    """
    if c <= 1:
        raise ValueError(f"gluing needs c > 1, got c={c}")
    if math.gcd(b, c) != 1:
        raise ValueError(f"gluing needs gcd(b, c) = 1, got ({b}, {c})")
    expr = H.membership(b)
    if expr is None:
        raise ValueError(f"gluing needs b in the semigroup, {b} not in {H.gens}")
    H2 = NumericalSemigroup((b,) + tuple(c * g for g in H.gens))
    return H2, GluingStep(b=b, c=c, expr=expr)


def glue_relation_tpoly(field, m: int, step: GluingStep) -> TPoly:
    """t_(m+1)^c - prod t_i^(b_i) with the t_0 slot reserved (nvars m+2)."""
    nv = m + 2
    e_new = [0] * nv
    e_new[m + 1] = step.c
    e_old = [0] * nv
    for i, a in enumerate(step.expr):
        e_old[i + 1] = a
    return TPoly(field, nv, {tuple(e_new): field.one,
                             tuple(e_old): -field.one})


@dataclass
class HsResult:
    semigroup: NumericalSemigroup      # generators in gluing order
    trace: list                        # GluingStep per stage
    binomials: list                    # TPoly in f-order t_1..t_(s+1), t_0 slot
    slots: tuple                       # slots[i] = f-index of gluing-order gen i
    degrees: tuple                     # f-ordered generator degrees d_1..d_(s+1)


def build_Hs(p: int, s: int, parity: str) -> HsResult:
    """The recursive semigroup of lead Y-exponents for rank 2s-1 or 2s."""
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be odd/even, got {parity!r}")
    if s < 1:
        raise ValueError("s must be >= 1")
    if parity == "odd" and p <= 2:
        raise ValueError("odd parity needs p > 2")
    if parity == "even" and p <= 3:
        raise ValueError("even parity needs p > 3")
    H = NumericalSemigroup((1,))
    slots = [2] if parity == "odd" else [1]
    trace = []
    raw = []  # (new_slot, c, expr over slots-before)
    if parity == "odd":
        stages = [(2, 1)] + [(p ** (2 * i - 2) + 2, i + 1) for i in range(2, s + 1)]
    else:
        stages = [(p ** (2 * i - 1) + 2, i + 1) for i in range(1, s + 1)]
    for b, new_slot in stages:
        H, step = glue(H, b, p)
        trace.append(step)
        raw.append((new_slot, step.c, tuple(zip(slots, step.expr))))
        slots = [new_slot] + slots
    nv = s + 3  # t_0 .. t_(s+2)
    field = FieldContext(p=p).field()
    binomials = []
    for new_slot, c, expr in raw:
        e_new = [0] * nv
        e_new[new_slot] = c
        e_old = [0] * nv
        for slot, a in expr:
            e_old[slot] = a
        # display convention: the monomial in the highest t-variable first
        if tuple(reversed(e_new)) > tuple(reversed(e_old)):
            terms = {tuple(e_new): field.one, tuple(e_old): -field.one}
        else:
            terms = {tuple(e_old): field.one, tuple(e_new): -field.one}
        binomials.append(TPoly(field, nv, terms))
    degrees = [0] * (s + 1)
    for i, g in enumerate(H.gens):
        degrees[slots[i] - 1] = g
    return HsResult(semigroup=H, trace=trace, binomials=binomials,
                    slots=tuple(slots), degrees=tuple(degrees))


def conjecture_y_exponents(p: int, r: int):
    """Lead-monomial Y-exponents d_1..d_(s+1) straight from the formulas."""
    if r % 2:
        s = (r + 1) // 2
        out = [2 * p ** (s - 1), p ** s]
        out += [p ** (s + i - 3) + 2 * p ** (s - i + 1) for i in range(3, s + 2)]
    else:
        s = r // 2
        out = [p ** s]
        out += [p ** (s + i - 2) + 2 * p ** (s - i + 1) for i in range(2, s + 2)]
    return out


# ---------------------------------------------------------------------------
# complete-intersection Hilbert series and the degree-product identity

def hilbert_series_ci(gen_degrees, rel_degrees, D: int):
    """First D+1 coefficients of prod(1-t^rel) / prod(1-t^gen)."""
    if len(gen_degrees) - len(rel_degrees) != 3:
        raise ValueError("complete intersection of Krull dimension 3 expected")
    coeff = np.zeros(D + 1, dtype=object)
    coeff[0] = 1
    for e in rel_degrees:
        nxt = coeff.copy()
        if e <= D:
            nxt[e:] -= coeff[: D + 1 - e]
        coeff = nxt
    for g in gen_degrees:
        for n in range(g, D + 1):
            coeff[n] += coeff[n - g]
    out = [int(v) for v in coeff]
    if any(v < 0 for v in out):
        raise ValueError("negative Hilbert coefficient: inconsistent degrees")
    return out


def _ppoly_mul(a: dict, b: dict) -> dict:
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def presentation_degree_polys(parity: str, s: int):
    """Generator and relation degrees as integer polynomials in p ({exp: coef})."""
    if parity == "odd":
        gens = [{0: 1}, {s - 1: 2}, {s: 1}]
        gens += [{s + j: 1, s - 2 - j: 2} for j in range(0, s - 1)]
        gens.append({2 * s - 1: 1})
        rels = [{s: 2}]
        rels += [{s + 1 + j: 1, s - 1 - j: 2} for j in range(0, s - 1)]
    else:
        gens = [{0: 1}, {s: 1}]
        gens += [{s + 1 + j: 1, s - 2 - j: 2} for j in range(-1, s - 1)]
        gens.append({2 * s: 1})
        rels = [{s + 2 + j: 1, s - 1 - j: 2} for j in range(-1, s - 1)]
    return gens, rels


def degree_product_identity(parity: str, s: int, p: int = None) -> bool:
    """prod(gen degrees) = p^r * prod(rel degrees); symbolic in p if p is None."""
    gens, rels = presentation_degree_polys(parity, s)
    r = 2 * s - 1 if parity == "odd" else 2 * s
    if p is not None:
        pg = 1
        for g in gens:
            pg *= sum(c * p ** e for e, c in g.items())
        pr = p ** r
        for q in rels:
            pr *= sum(c * p ** e for e, c in q.items())
        return pg == pr
    pg = {0: 1}
    for g in gens:
        pg = _ppoly_mul(pg, g)
    pr = {r: 1}
    for q in rels:
        pr = _ppoly_mul(pr, q)
    return pg == pr
