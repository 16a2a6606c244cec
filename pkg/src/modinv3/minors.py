"""The (2r+2) x r matrix of Frobenius powers and its named r x r minors.

Row 2m+1 carries x_1j^(p^m) and row 2m+2 carries x_2j^(p^m) for
m = 0..r.  All construction coefficients are minors of this matrix,
addressed through index patterns: plain indices, hatted (omitted)
indices, and alternating runs where the first index is omitted and the
rest alternate omit/keep.

Families (odd rank r = 2s-1): a_k, b_k, B(j, k);
         (even rank r = 2s):  c_m, d_m, C(j, K).
Out-of-range indices resolve to exact zero where the conventions say so.
"""

from __future__ import annotations

from .errors import ContextMismatchError
from .fields import _det as scalar_det, gamma_entry


class IndexPattern:
    """Sequence of tokens: ('plain', i), ('hat', i), ('run', first, last)."""

    def __init__(self, tokens, expect=None):
        self.tokens = list(tokens)
        self.expect = expect

    @classmethod
    def plain_range(cls, lo, hi, hat_at=None, run=None, expect=None):
        toks = []
        for i in range(lo, hi + 1):
            toks.append(("hat", i) if i == hat_at else ("plain", i))
        if run is not None:
            toks.append(("run", run[0], run[1]))
        return cls(toks, expect)

    def __repr__(self):
        bits = []
        for t in self.tokens:
            if t[0] == "plain":
                bits.append(str(t[1]))
            elif t[0] == "hat":
                bits.append(f"{t[1]}^")
            else:
                bits.append(f"{{{t[1]}^,...,{t[2]}}}")
        return "IndexPattern(" + ",".join(bits) + ")"


def expand_pattern(pattern: IndexPattern):
    """Expand to the row list: plain kept, hatted omitted, runs alternate
    omit/keep starting with an omission."""
    rows = []
    for tok in pattern.tokens:
        if tok[0] == "plain":
            rows.append(tok[1])
        elif tok[0] == "hat":
            pass
        elif tok[0] == "run":
            first, last = tok[1], tok[2]
            if last < first:
                raise ValueError(f"malformed run {first}..{last}")
            for off, i in enumerate(range(first, last + 1)):
                if off % 2 == 1:
                    rows.append(i)
        else:
            raise ValueError(f"malformed token {tok!r}")
    if any(b <= a for a, b in zip(rows, rows[1:])):
        raise ValueError(f"pattern rows not strictly increasing: {rows}")
    if pattern.expect is not None and len(rows) != pattern.expect:
        raise ValueError(
            f"wrong expansion length: got {len(rows)}, want {pattern.expect}")
    return tuple(rows)


# --- row sets of the named families (pure index arithmetic) ----------------

def named_pattern(family: str, r: int, *idx) -> IndexPattern | None:
    """Index pattern of a named minor, or None where the conventions give 0."""
    if family == "a":
        (k,) = idx
        if k > r:
            return None
        if k == 0:
            return IndexPattern.plain_range(1, r + 1, hat_at=r + 1, expect=r)
        return IndexPattern.plain_range(1, r + 1, hat_at=r + 1 - k, expect=r)
    if family == "b":
        (k,) = idx
        if k > r:
            return None
        if k == 0:
            return named_pattern("a", r, 0)
        toks = [("hat", i) if i == r + 1 - k else ("plain", i)
                for i in range(1, r + 1)] + [("plain", r + 2)]
        return IndexPattern(toks, expect=r)
    if family == "B":
        j, k = idx
        if j == -1:
            return named_pattern("a", r, k)
        if k < 0 or k > r - 2 * j - 2:
            return None
        if k == 0:
            return IndexPattern.plain_range(
                1, r - 2 * j - 2, run=(r - 2 * j - 1, r + 2 * j + 2), expect=r)
        return IndexPattern.plain_range(
            1, r - 2 * j, hat_at=r - 2 * j - 1 - k,
            run=(r - 2 * j + 1, r + 2 * j + 2), expect=r)
    if family == "c":
        (m,) = idx
        if m > r:
            return None
        if m == 0:
            return IndexPattern.plain_range(1, r + 1, hat_at=r + 1, expect=r)
        return IndexPattern.plain_range(1, r + 1, hat_at=r + 1 - m, expect=r)
    if family == "d":
        (m,) = idx
        if m > r:
            return None
        if m < 1:
            raise ValueError("d_m needs m >= 1")
        toks = [("hat", i) if i == r + 1 - m else ("plain", i)
                for i in range(1, r + 1)] + [("plain", r + 2)]
        return IndexPattern(toks, expect=r)
    if family == "C":
        j, K = idx
        if j == -1:
            return named_pattern("c", r, K)
        if K < 1 or K > r - 2 * j - 2:
            return None
        return IndexPattern.plain_range(
            1, r - 2 * j - 1, hat_at=r - 2 * j - 1 - K,
            run=(r - 2 * j, r + 2 * j + 3), expect=r)
    raise ValueError(f"unknown minor family {family!r}")


def named_rows(family, r, *idx):
    pat = named_pattern(family, r, *idx)
    return None if pat is None else expand_pattern(pat)


def guard_list(r: int):
    """Denominator minors that a specialization must keep nonzero."""
    s = (r + 1) // 2 if r % 2 else r // 2
    out = []
    if r % 2:  # odd
        out.append(("a0", named_rows("a", r, 0)))
        out.append(("b2", named_rows("b", r, 2)))
        for j in range(0, s - 1):
            out.append((f"B({j})", named_rows("B", r, j, 0)))
    else:
        out.append(("c0", named_rows("c", r, 0)))
        out.append(("c1", named_rows("c", r, 1)))
        for j in range(0, s - 1):
            out.append((f"C({j})", named_rows("C", r, j, 1)))
    # dedupe while preserving order
    seen = set()
    uniq = []
    for name, rows in out:
        if rows not in seen:
            seen.add(rows)
            uniq.append((name, rows))
    return uniq


class GammaMinorTable:
    """Minor cache over a concrete assignment of the x_ij."""

    def __init__(self, field, r, x):
        self.field = field
        self.r = r
        self.x = x
        self.nrows = 2 * r + 2
        self._cache = {}

    def entry(self, i, j):
        if not (1 <= i <= self.nrows and 1 <= j <= self.r):
            raise IndexError(f"Gamma entry ({i},{j}) out of range")
        return gamma_entry(self.x, i, j)

    def minor(self, rows):
        rows = tuple(rows)
        if len(rows) != self.r:
            raise ValueError(f"minor needs exactly {self.r} rows, got {len(rows)}")
        if len(set(rows)) != self.r:
            raise ValueError(f"minor rows must be distinct: {rows}")
        key = tuple(sorted(rows))
        if key != rows:
            raise ValueError(f"minor rows must be ascending: {rows}")
        hit = self._cache.get(key)
        if hit is None:
            mat = [[self.entry(i, j) for j in range(1, self.r + 1)] for i in key]
            hit = scalar_det(mat, self.field)
            self._cache[key] = hit
        return hit

    def named(self, family, *idx):
        rows = named_rows(family, self.r, *idx)
        if rows is None:
            return self.field.zero
        return self.minor(rows)

    def parity(self):
        return "odd" if self.r % 2 else "even"

    def check_parity(self, family):
        odd = family in ("a", "b", "B")
        if odd != (self.r % 2 == 1):
            raise ValueError(
                f"family {family!r} is for {'odd' if odd else 'even'} rank, r={self.r}")

    def named_checked(self, family, *idx):
        self.check_parity(family)
        return self.named(family, *idx)


def ordered_minor(mat_rows, field, row_seq):
    """Minor of a row sequence: 0 on repeats, sign-adjusted to sorted order."""
    seq = list(row_seq)
    if len(set(seq)) != len(seq):
        return field.zero
    # parity of the permutation sorting the sequence
    perm = sorted(range(len(seq)), key=lambda i: seq[i])
    sign = 1
    seen = [False] * len(seq)
    for i in range(len(seq)):
        if seen[i]:
            continue
        c = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            c += 1
        if c % 2 == 0:
            sign = -sign
    det = scalar_det([mat_rows[i - 1] for i in sorted(seq)], field)
    if sign < 0:
        det = -det
    return det


def plucker_sum(mat_rows, field, i_rows, j_rows):
    """sum_a (-1)^a nu_{i_1..i_{m-1}, j_a} * nu_{j_1..^j_a..j_{m+1}}.

    mat_rows: n x m matrix as a list of rows of Scalars (n > m).  Always 0;
    returned for assertion by the caller.
    """
    m = len(mat_rows[0])
    if len(i_rows) != m - 1 or len(j_rows) != m + 1:
        raise ValueError(
            f"need {m - 1} i-rows and {m + 1} j-rows for an n x {m} matrix")
    if any(not 1 <= i <= len(mat_rows) for i in list(i_rows) + list(j_rows)):
        raise ValueError("row index out of range")
    total = field.zero
    for a in range(1, m + 2):
        first = ordered_minor(mat_rows, field, list(i_rows) + [j_rows[a - 1]])
        rest = ordered_minor(mat_rows, field,
                             list(j_rows[:a - 1]) + list(j_rows[a:]))
        term = first * rest
        if a % 2 == 1:
            term = -term
        total = total + term
    return total


# --- the two coefficient-identity lemmas ------------------------------------

def lemma_mlo_check(table: GammaMinorTable, j: int, k: int) -> bool:
    """Odd parity: L2^j B(j,2+k)/B(j) + B(j,4+k)^p/B(j)^p - B(j-1,4+k)/B(j-1)
    equals B(j-1)^p B(j+1,k) / B(j)^(p+1)."""
    r = table.r
    s = (r + 1) // 2
    if not (0 <= j <= s - 2):
        raise ValueError(f"j={j} outside 0..{s - 2}")
    if not (0 <= k <= r - 2 * (j + 1) - 2):
        raise ValueError(f"k={k} outside 0..{r - 2 * (j + 1) - 2}")
    B = lambda jj, kk=0: table.named("B", jj, kk)
    Bj = B(j)
    Bjm = B(j - 1)
    frob = lambda v: v.frobenius(1)
    L2 = B(j - 1, 2) / Bjm - frob(B(j, 2) / Bj)
    lhs = L2 * B(j, 2 + k) / Bj + frob(B(j, 4 + k) / Bj) - B(j - 1, 4 + k) / Bjm
    rhs = frob(Bjm) * B(j + 1, k) / (frob(Bj) * Bj)
    return lhs == rhs


def lemma_ml_check(table: GammaMinorTable, j: int, k: int) -> bool:
    """Even parity, including the j = -1 variant against C(0, k+1)."""
    r = table.r
    s = r // 2
    frob = lambda v: v.frobenius(1)
    if j == -1:
        if not (0 <= k <= r - 3):
            raise ValueError(f"k={k} outside 0..{r - 3}")
        c = lambda m: table.named("c", m)
        d = lambda m: table.named("d", m)
        c0, c1 = c(0), c(1)
        ratio2 = frob(c(2) / c1)
        L2 = ratio2 * (c1 / c0) - frob(c(3) / c1) - d(1) / c0
        lhs = (L2 * c(3 + k) / c1 - ratio2 * c(3 + k) / c0
               + frob(c(k + 5) / c1) + d(3 + k) / c0)
        rhs = frob(c0) * table.named("C", 0, k + 1) / (frob(c1) * c1)
        return lhs == rhs
    if not (0 <= j <= s - 2):
        raise ValueError(f"j={j} outside -1..{s - 2}")
    if not (0 <= k <= r - 2 * (j + 1) - 3):
        raise ValueError(f"k={k} outside 0..{r - 2 * (j + 1) - 3}")
    C = lambda jj, KK=1: table.named("C", jj, KK)
    Cj = C(j)
    Cjm = C(j - 1)
    L2 = C(j - 1, 3) / Cjm - frob(C(j, 3) / Cj)
    lhs = L2 * C(j, 3 + k) / Cj + frob(C(j, 5 + k) / Cj) - C(j - 1, 5 + k) / Cjm
    rhs = frob(Cjm) * C(j + 1, k + 1) / (frob(Cj) * Cj)
    return lhs == rhs


def lemma_grid(r: int):
    """All admissible (j, k) pairs for the parity's minor lemma."""
    out = []
    if r % 2:
        s = (r + 1) // 2
        for j in range(0, s - 1):
            for k in range(0, r - 2 * (j + 1) - 1):
                out.append((j, k))
    else:
        s = r // 2
        for k in range(0, r - 2):
            out.append((-1, k))
        for j in range(0, s - 1):
            for k in range(0, r - 2 * (j + 1) - 2):
                out.append((j, k))
    return out
