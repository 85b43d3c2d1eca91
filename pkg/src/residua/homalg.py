"""Free complexes over Q[x] and Q[x]/I_Z: resolutions and their diagnostics.

Complexes store explicit ranks and row-major differential matrices, with
entries kept in normal form modulo the context relations.  Resolutions
iterate syzygy computations; minimality is reached by eliminating pivot
entries that are nonzero rational constants (an entry that is a unit
locally but not a constant only raises a diagnostic flag -- constant
terms of nonconstant entries are not inverted here).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from residua.groebner import (
    INFINITE_CODIM,
    Context,
    Ideal,
    QuotientContext,
    SubmoduleBasis,
    dimension,
    ideal_member,
    syzygies,
)
from residua.polyring import MonomialOrder, Polynomial, PolynomialRing, PolyVector, transport

Matrix = Tuple[Tuple[Polynomial, ...], ...]


# ---------------------------------------------------------------------------
# matrix helpers (shapes supplied by callers; zero-size matrices are legal)


def zero_matrix(ring: PolynomialRing, rows: int, cols: int) -> Matrix:
    z = ring.zero()
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity_matrix(ring: PolynomialRing, n: int) -> Matrix:
    return tuple(
        tuple(ring.one() if i == j else ring.zero() for j in range(n)) for i in range(n)
    )


def mat_mul(ring: PolynomialRing, A: Matrix, B: Matrix, rows: int, mid: int, cols: int) -> Matrix:
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(mid):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_is_zero(A: Matrix) -> bool:
    return all(e.is_zero() for row in A for e in row)


def mat_columns(ring: PolynomialRing, A: Matrix, rows: int, cols: int):
    return [PolyVector(ring, tuple(A[i][j] for i in range(rows))) for j in range(cols)]


def columns_to_matrix(ring: PolynomialRing, cols: Sequence[PolyVector], rows: int) -> Matrix:
    return tuple(tuple(v.entries[i] for v in cols) for i in range(rows))


def _poly_sort_key(p: Polynomial, order: MonomialOrder):
    return tuple((order.ring_key(m), c) for m, c in p.sorted_terms(order))


def canonical_matrix(ring: PolynomialRing, A: Matrix, rows: int, cols: int) -> Matrix:
    """Comparison form: columns scaled monic, columns and rows sorted
    descending by leading term, iterated to a fixed point (row moves shift
    which entry leads a column, so one pass is not enough).  For equality
    tests only -- the sorting ignores any chain structure around the
    matrix."""
    order = ring.default_order

    def col_key(v: PolyVector):
        lt = v.leading(order)
        head = ((-1, ()),) if lt is None else (order.term_key(lt[0]),)
        return (head, tuple(_poly_sort_key(e, order) for e in v.entries))

    def row_key(row):
        keys = [order.ring_key(e.lm(order)) for e in row if not e.is_zero()]
        head = max(keys) if keys else None
        return (head is not None, head, tuple(_poly_sort_key(e, order) for e in row))

    cur = tuple(tuple(row) for row in A)
    for _ in range(8):
        columns = [v.monic(order) for v in mat_columns(ring, cur, rows, cols)]
        columns.sort(key=col_key, reverse=True)
        rows_list = [tuple(v.entries[i] for v in columns) for i in range(rows)]
        rows_list.sort(key=row_key, reverse=True)
        nxt = tuple(rows_list)
        if nxt == cur:
            break
        cur = nxt
    return cur


def matrices_equal_canonically(ring, A, B, rows_a, cols_a, rows_b, cols_b) -> bool:
    if rows_a != rows_b or cols_a != cols_b:
        return False
    return canonical_matrix(ring, A, rows_a, cols_a) == canonical_matrix(ring, B, rows_b, cols_b)


# ---------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """... -> E_k -> E_{k-1} -> ... -> E_0 with diffs[k-1] = phi_k.

    Validates shapes and phi_k . phi_{k+1} = 0 (modulo the context) at
    construction; entries are stored in normal form mod the context.
    """

    __slots__ = ("ring", "context", "ranks", "diffs", "complete", "not_locally_minimal")

    def __init__(
        self,
        ring: PolynomialRing,
        ranks: Sequence[int],
        diffs: Sequence[Matrix],
        context: Context = None,
        complete: bool = True,
        not_locally_minimal: bool = False,
    ):
        ranks = tuple(int(r) for r in ranks)
        if not ranks or any(r < 0 for r in ranks):
            raise ValueError("ranks must be a nonempty tuple of nonnegative integers")
        if len(diffs) != len(ranks) - 1:
            raise ValueError("need exactly one differential per adjacent rank pair")
        if context is not None and context.ring != ring:
            raise ValueError("context ring mismatch")
        norm = []
        for k, M in enumerate(diffs, start=1):
            rows, cols = ranks[k - 1], ranks[k]
            M = tuple(tuple(row) for row in M)
            if len(M) != rows or any(len(row) != cols for row in M):
                raise ValueError(f"differential {k} has the wrong shape")
            for row in M:
                for e in row:
                    if e.ring != ring:
                        raise ValueError("matrix entry from a different ring")
            if context is not None:
                M = tuple(tuple(context.reduce(e) for e in row) for row in M)
            norm.append(M)
        for k in range(1, len(norm)):
            prod = mat_mul(ring, norm[k - 1], norm[k], ranks[k - 1], ranks[k], ranks[k + 1])
            if context is not None:
                prod = tuple(tuple(context.reduce(e) for e in row) for row in prod)
            if not mat_is_zero(prod):
                raise ValueError(f"differentials {k} and {k + 1} do not compose to zero")
        self.ring = ring
        self.context = context
        self.ranks = ranks
        self.diffs = tuple(norm)
        self.complete = bool(complete)
        self.not_locally_minimal = bool(not_locally_minimal)

    @property
    def length(self) -> int:
        return len(self.diffs)

    def diff(self, k: int) -> Matrix:
        """phi_k (1-indexed); zero-shaped beyond the stored length."""
        if 1 <= k <= self.length:
            return self.diffs[k - 1]
        raise IndexError(f"no differential {k}")

    def rank(self, k: int) -> int:
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def __eq__(self, other):
        return (
            isinstance(other, ChainComplex)
            and self.ring == other.ring
            and self.context == other.context
            and self.ranks == other.ranks
            and self.diffs == other.diffs
            and self.complete == other.complete
        )

    def __repr__(self):
        tail = "" if self.complete else ", truncated"
        return f"ChainComplex(ranks={list(self.ranks)}{tail})"


# ---------------------------------------------------------------------------
# resolutions


def free_resolution(
    I: Ideal, context: Context = None, cap: int = 16, minimal: bool = False
) -> ChainComplex:
    """Iterated-syzygy resolution of ring/I (or of the quotient module when
    a context is given): E_0 has rank one, phi_1 is the generator row, and
    each phi_{k+1} generates the syzygies of the columns of phi_k.  Stops
    early when the syzygy module vanishes, else truncates at cap."""
    if cap < 1:
        raise ValueError("cap must be positive")
    ring = I.ring
    if context is not None and context.ring != ring:
        raise ValueError("context ring mismatch")
    gens = []
    for g in I.gens:
        if context is not None:
            g = context.reduce(g)
        if not g.is_zero():
            gens.append(g)
    ranks = [1]
    diffs = []
    complete = False
    cols = [PolyVector(ring, (g,)) for g in gens]
    while cols:
        rows = ranks[-1]
        diffs.append(columns_to_matrix(ring, cols, rows))
        ranks.append(len(cols))
        syz = syzygies(SubmoduleBasis(ring, rows, cols), context=context)
        if not syz.gens:
            complete = True
            break
        if len(diffs) >= cap:
            break
        cols = list(syz.gens)
    else:
        complete = True
    out = ChainComplex(ring, ranks, diffs, context=context, complete=complete)
    return minimalize(out) if minimal else out


def minimalize(C: ChainComplex) -> ChainComplex:
    """Eliminate differential entries that are nonzero rational constants.

    Each pivot splits off a trivial two-term summand; the complex shrinks
    by one rank on each side of the pivot.  Entries that are invertible
    locally without being constants (nonzero constant term) are left in
    place and flagged via not_locally_minimal.
    """
    ring = C.ring
    ctx = C.context
    ranks = list(C.ranks)
    diffs = [[list(row) for row in M] for M in C.diffs]

    def reduce_entry(p):
        return ctx.reduce(p) if ctx is not None else p

    while True:
        pivot = None
        for k in range(1, len(diffs) + 1):
            M = diffs[k - 1]
            for i in range(ranks[k - 1]):
                for j in range(ranks[k]):
                    e = M[i][j]
                    if not e.is_zero() and e.is_constant():
                        pivot = (k, i, j, e.constant_term())
                        break
                if pivot:
                    break
            if pivot:
                break
        if pivot is None:
            break
        k, i, j, c = pivot
        M = diffs[k - 1]
        up = diffs[k] if k < len(diffs) else None  # phi_{k+1}
        down = diffs[k - 2] if k >= 2 else None  # phi_{k-1}
        # clear row i with column operations; compensate on phi_{k+1} rows
        for jp in range(ranks[k]):
            if jp == j or M[i][jp].is_zero():
                continue
            f = M[i][jp] * (1 / c)
            for r in range(ranks[k - 1]):
                M[r][jp] = reduce_entry(M[r][jp] - f * M[r][j])
            if up is not None:
                for cc in range(ranks[k + 1]):
                    up[j][cc] = reduce_entry(up[j][cc] + f * up[jp][cc])
        # clear column j with row operations; compensate on phi_{k-1} columns
        for ip in range(ranks[k - 1]):
            if ip == i or M[ip][j].is_zero():
                continue
            g = M[ip][j] * (1 / c)
            for cc in range(ranks[k]):
                M[ip][cc] = reduce_entry(M[ip][cc] - g * M[i][cc])
            if down is not None:
                for r in range(ranks[k - 2]):
                    down[r][i] = reduce_entry(down[r][i] + g * down[r][ip])
        # the complex property forces the adjacent row/column to vanish
        if up is not None:
            assert all(up[j][cc].is_zero() for cc in range(ranks[k + 1]))
        if down is not None:
            assert all(down[r][i].is_zero() for r in range(ranks[k - 2]))
        # delete row i / column j of phi_k, row j of phi_{k+1}, column i of phi_{k-1}
        diffs[k - 1] = [
            [M[r][cc] for cc in range(ranks[k]) if cc != j]
            for r in range(ranks[k - 1])
            if r != i
        ]
        if up is not None:
            diffs[k] = [up[r] for r in range(ranks[k]) if r != j]
        if down is not None:
            diffs[k - 2] = [
                [down[r][cc] for cc in range(ranks[k - 1]) if cc != i]
                for r in range(ranks[k - 2])
            ]
        ranks[k] -= 1
        ranks[k - 1] -= 1

    flagged = any(
        not e.is_zero() and not e.is_constant() and e.constant_term() != 0
        for M in diffs
        for row in M
        for e in row
    )
    return ChainComplex(
        ring,
        ranks,
        [tuple(tuple(row) for row in M) for M in diffs],
        context=ctx,
        complete=C.complete,
        not_locally_minimal=flagged,
    )


# ---------------------------------------------------------------------------
# Koszul and tensor complexes


def koszul_complex(fs: Sequence[Polynomial], context: Context = None) -> ChainComplex:
    """Exterior-algebra contraction complex on the tuple fs; a resolution
    exactly when fs is a regular sequence."""
    fs = list(fs)
    if not fs:
        raise ValueError("koszul complex of an empty tuple")
    ring = fs[0].ring
    if any(f.ring != ring for f in fs):
        raise ValueError("koszul entries must share one ring")
    p = len(fs)
    subsets = [list(itertools.combinations(range(p), k)) for k in range(p + 1)]
    ranks = [len(s) for s in subsets]
    diffs = []
    for k in range(1, p + 1):
        rows = {S: r for r, S in enumerate(subsets[k - 1])}
        M = [[ring.zero() for _ in subsets[k]] for _ in subsets[k - 1]]
        for col, S in enumerate(subsets[k]):
            for l, idx in enumerate(S):
                T = tuple(x for x in S if x != idx)
                sign = 1 if l % 2 == 0 else -1
                M[rows[T]][col] = M[rows[T]][col] + fs[idx] * sign
        diffs.append(tuple(tuple(row) for row in M))
    return ChainComplex(ring, ranks, diffs, context=context, complete=True)


def tensor_complexes(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Total complex of the double complex C (x) D.

    Level k is the direct sum of C_p (x) D_q over p+q=k, blocks ordered by
    descending p, each block row-major in (C index, D index).  The
    differential is phi (x) id + (-1)^p id (x) psi.
    """
    if C.ring != D.ring or C.context != D.context:
        raise ValueError("tensor factors must share one ring and context")
    if not (C.complete and D.complete):
        raise ValueError("tensor factors must be complete complexes")
    ring = C.ring
    nc, nd = C.length, D.length

    def blocks(k):
        out = []
        for p in range(min(k, nc), -1, -1):
            q = k - p
            if 0 <= q <= nd:
                out.append((p, q))
        return out

    def offsets(blist):
        off = {}
        pos = 0
        for p, q in blist:
            off[(p, q)] = pos
            pos += C.rank(p) * D.rank(q)
        return off, pos

    total = nc + nd
    ranks = []
    diffs = []
    prev_blocks = blocks(0)
    prev_off, prev_size = offsets(prev_blocks)
    ranks.append(prev_size)
    for k in range(1, total + 1):
        cur_blocks = blocks(k)
        cur_off, cur_size = offsets(cur_blocks)
        ranks.append(cur_size)
        M = [[ring.zero() for _ in range(cur_size)] for _ in range(prev_size)]
        for p, q in cur_blocks:
            src = cur_off[(p, q)]
            rc, rd = C.rank(p), D.rank(q)
            if p >= 1 and (p - 1, q) in prev_off:
                dst = prev_off[(p - 1, q)]
                phi = C.diff(p)
                for i2 in range(C.rank(p - 1)):
                    for i in range(rc):
                        e = phi[i2][i]
                        if e.is_zero():
                            continue
                        for j in range(rd):
                            M[dst + i2 * rd + j][src + i * rd + j] = (
                                M[dst + i2 * rd + j][src + i * rd + j] + e
                            )
            if q >= 1 and (p, q - 1) in prev_off:
                dst = prev_off[(p, q - 1)]
                psi = D.diff(q)
                sign = 1 if p % 2 == 0 else -1
                rd2 = D.rank(q - 1)
                for j2 in range(rd2):
                    for j in range(rd):
                        e = psi[j2][j]
                        if e.is_zero():
                            continue
                        for i in range(rc):
                            M[dst + i * rd2 + j2][src + i * rd + j] = (
                                M[dst + i * rd2 + j2][src + i * rd + j] + e * sign
                            )
        diffs.append(tuple(tuple(row) for row in M))
        prev_blocks, prev_off, prev_size = cur_blocks, cur_off, cur_size
    return ChainComplex(ring, ranks, diffs, context=C.context, complete=True)


def extend_ring(C: ChainComplex, target: PolynomialRing) -> ChainComplex:
    """Base change along a ring inclusion (matching variables by name)."""
    ctx = None
    if C.context is not None:
        ctx = QuotientContext(
            target, Ideal(target, tuple(transport(g, target) for g in C.context.relations.gens))
        )
    diffs = [
        tuple(tuple(transport(e, target) for e in row) for row in M) for M in C.diffs
    ]
    return ChainComplex(
        target,
        C.ranks,
        diffs,
        context=ctx,
        complete=C.complete,
        not_locally_minimal=C.not_locally_minimal,
    )


# ---------------------------------------------------------------------------
# rank loci and exactness diagnostics


def _det(ring, M, rows, cols):
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return M[rows[0]][cols[0]]
    acc = ring.zero()
    rest = rows[1:]
    for t, c in enumerate(cols):
        e = M[rows[0]][c]
        if e.is_zero():
            continue
        sub = _det(ring, M, rest, cols[:t] + cols[t + 1 :])
        term = e * sub
        acc = acc + term if t % 2 == 0 else acc - term
    return acc


def determinant(ring: PolynomialRing, M: Matrix, n: int) -> Polynomial:
    """Determinant of the leading n x n block, by Laplace expansion."""
    return _det(ring, M, tuple(range(n)), tuple(range(n)))


def minors_ideal(ring, M, rows, cols, r) -> Ideal:
    """Ideal of r x r minors, rows/columns enumerated lexicographically."""
    if r <= 0:
        return Ideal(ring, (ring.one(),))
    if r > min(rows, cols):
        return Ideal(ring, ())
    gens = []
    for rs in itertools.combinations(range(rows), r):
        for cs in itertools.combinations(range(cols), r):
            d = _det(ring, M, rs, cs)
            if not d.is_zero():
                gens.append(d.monic())
    seen = set()
    unique = []
    for g in gens:
        if g not in seen:
            seen.add(g)
            unique.append(g)
    return Ideal(ring, unique)


def generic_rank(ring, M, rows, cols) -> int:
    """Largest r with a nonzero r x r minor (early exit, lexicographic scan)."""
    for r in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), r):
            for cs in itertools.combinations(range(cols), r):
                if not _det(ring, M, rs, cs).is_zero():
                    return r
    return 0


def expected_ranks(C: ChainComplex):
    """Alternating-sum ranks r_k = sum_{i>=k} (-1)^{i-k} rank(E_i), k=1..N."""
    if not C.complete:
        raise ValueError("expected ranks are undefined for a truncated complex")
    n = C.length
    out = [0] * (n + 2)
    for k in range(n, 0, -1):
        out[k] = C.ranks[k] - out[k + 1]
    return out[1 : n + 1]


@dataclass(frozen=True)
class ResolutionDiagnostics:
    """Per-level Fitting loci of a complex's differentials."""

    ranks_used: tuple
    loci: tuple  # Ideal per level (context relations appended)
    codims: tuple
    level_ok: tuple  # codim Z_k >= k, the singular-locus bound
    containments: tuple  # generator membership of locus k in locus k+1, or None


def rank_loci(C: ChainComplex) -> ResolutionDiagnostics:
    """Fitting-ideal loci Z_k = V(I_{r_k}(phi_k)).

    r_k comes from expected_ranks for complete complexes and falls back to
    the generic rank for truncated ones (where the alternating sum has no
    meaning).  Over a quotient context the relation generators are added
    to every minor ideal; codimensions are ambient.
    """
    ring = C.ring
    extra = C.context.relations.gens if C.context is not None else ()
    if C.complete:
        rk = expected_ranks(C)
    else:
        rk = [
            generic_rank(ring, C.diff(k), C.ranks[k - 1], C.ranks[k])
            for k in range(1, C.length + 1)
        ]
    loci = []
    codims = []
    ok = []
    for k in range(1, C.length + 1):
        m = minors_ideal(ring, C.diff(k), C.ranks[k - 1], C.ranks[k], rk[k - 1])
        loc = Ideal(ring, m.gens + tuple(extra))
        loci.append(loc)
        cd = dimension(loc)[1]
        codims.append(cd)
        ok.append(cd >= k)
    contain = []
    for k in range(len(loci) - 1):
        a, b = loci[k], loci[k + 1]
        if not a.gens or not b.gens:
            contain.append(None)
            continue
        if dimension(a)[1] == INFINITE_CODIM or dimension(b)[1] == INFINITE_CODIM:
            contain.append(None)
            continue
        contain.append(all(ideal_member(g, b) for g in a.gens))
    return ResolutionDiagnostics(tuple(rk), tuple(loci), tuple(codims), tuple(ok), tuple(contain))


@dataclass(frozen=True)
class ExactnessLevel:
    level: int
    rank_ok: bool
    codim: object  # int or inf
    required: int
    codim_ok: bool


@dataclass(frozen=True)
class ExactnessReport:
    passes: bool
    generic_ranks: tuple
    levels: tuple


def buchsbaum_eisenbud_check(C: ChainComplex) -> ExactnessReport:
    """Exactness of 0 -> E_N -> ... -> E_0 via rank additivity plus the
    codimension bounds codim I_{r_k}(phi_k) >= k, with r_k the generic rank.

    Only finite complexes over the ambient ring are eligible: quotient
    rings admit infinite resolutions (truncations of which look periodic),
    and the criterion says nothing about those.
    """
    if not C.complete:
        raise ValueError(
            "exactness criterion needs a complete finite complex; truncated "
            "input is out of its scope"
        )
    if C.context is not None:
        raise ValueError(
            "exactness criterion applies over the ambient polynomial ring only; "
            "quotient-ring resolutions can be infinite and escape it"
        )
    ring = C.ring
    n = C.length
    rho = [0] * (n + 2)
    for k in range(1, n + 1):
        rho[k] = generic_rank(ring, C.diff(k), C.ranks[k - 1], C.ranks[k])
    levels = []
    passes = True
    for k in range(1, n + 1):
        rank_ok = rho[k] + rho[k + 1] == C.ranks[k]
        m = minors_ideal(ring, C.diff(k), C.ranks[k - 1], C.ranks[k], rho[k])
        cd = dimension(m)[1]
        codim_ok = cd >= k
        levels.append(ExactnessLevel(k, rank_ok, cd, k, codim_ok))
        passes = passes and rank_ok and codim_ok
    return ExactnessReport(passes, tuple(rho[1 : n + 1]), tuple(levels))


@dataclass(frozen=True)
class ProperIntersectionReport:
    passes: bool
    pairs: tuple  # (k, l, codim, required, ok)
    failures: tuple


def proper_intersection_check(
    C: ChainComplex, D: ChainComplex, codim_c: int, codim_d: int
) -> ProperIntersectionReport:
    """codim(Z^C_k cap Z^D_l) >= k + l for k >= codim_c, l >= codim_d --
    the geometric condition for the tensor complex to stay a resolution."""
    if C.ring != D.ring or C.context != D.context:
        raise ValueError("complexes must share one ring and context")
    dc = rank_loci(C)
    dd = rank_loci(D)
    ring = C.ring
    pairs = []
    failures = []
    for k in range(max(1, codim_c), C.length + 1):
        for l in range(max(1, codim_d), D.length + 1):
            sum_ideal = Ideal(ring, dc.loci[k - 1].gens + dd.loci[l - 1].gens)
            cd = dimension(sum_ideal)[1]
            ok = cd >= k + l
            pairs.append((k, l, cd, k + l, ok))
            if not ok:
                failures.append((k, l, cd, k + l))
    return ProperIntersectionReport(not failures, tuple(pairs), tuple(failures))


@dataclass(frozen=True)
class PeriodicityReport:
    detected: bool
    offset: Optional[int] = None
    period: Optional[int] = None


def detect_periodicity(C: ChainComplex) -> PeriodicityReport:
    """Smallest (offset, period) with phi_{k+period} = phi_k canonically for
    all computed k > offset.  Complete complexes report no periodicity;
    truncated input needs at least four computed differentials."""
    if C.complete:
        return PeriodicityReport(False)
    n = C.length
    if n < 4:
        raise ValueError("periodicity detection needs at least 4 computed differentials")
    ring = C.ring
    for offset in range(0, n - 1):
        for period in range(1, n // 2 + 1):
            ks = range(offset + 1, n - period + 1)
            if not ks:
                continue
            if all(
                matrices_equal_canonically(
                    ring,
                    C.diff(k),
                    C.diff(k + period),
                    C.ranks[k - 1],
                    C.ranks[k],
                    C.ranks[k + period - 1],
                    C.ranks[k + period],
                )
                for k in ks
            ):
                return PeriodicityReport(True, offset, period)
    return PeriodicityReport(False)


@dataclass(frozen=True)
class CMReport:
    is_cm: bool
    resolution_length: int
    codim: object


def cohen_macaulay_check(I: Ideal, cap: int = 0) -> CMReport:
    """ring/I Cohen-Macaulay iff the minimal free resolution length equals
    the codimension (ambient polynomial ring only)."""
    dim, codim = dimension(I)
    if codim == INFINITE_CODIM:
        raise ValueError("Cohen-Macaulay check needs a proper ideal")
    cap = cap or max(16, I.ring.n + 1)
    res = free_resolution(I, cap=cap, minimal=True)
    assert res.complete, "resolution over the ambient ring must terminate"
    return CMReport(res.length == codim, res.length, codim)
