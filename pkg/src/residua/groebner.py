"""Groebner bases, syzygies, and ideal arithmetic over Q[x1..xn].

The engine is Buchberger's algorithm with the normal selection strategy
and both classical pair criteria (coprime leads for ideals, the chain
criterion everywhere), always finishing with the unique reduced basis:
monic, auto-reduced, sorted descending by leading term.  Determinism is
the contract; speed is secondary at this input scale.

Quotient rings Q[x]/I_Z appear as contexts: membership, normal forms and
syzygies over the quotient are computed by appending I_Z relations to the
ambient problem and projecting back.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from residua import kernel
from residua.polyring import (
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    PolyVector,
    RingMismatchError,
    divide,
    poly_to_terms,
    terms_to_poly,
    terms_to_vector,
    transport,
    unit_vector,
    vector_to_terms,
)

INFINITE_CODIM = float("inf")  # sentinel codimension of the empty locus

_SATURATION_CAP = 64


# ---------------------------------------------------------------------------
# public containers


class Ideal:
    """A finitely generated ideal, given by an explicit generator list.

    Equality and hashing compare generator lists, not the ideals they
    generate; use ideals_equal for mathematical equality.  Zero
    generators are dropped.  Reduced bases are cached per order.
    """

    __slots__ = ("ring", "gens", "_gb_cache")

    def __init__(self, ring: PolynomialRing, gens: Iterable[Polynomial]):
        gens = tuple(g for g in gens if not g.is_zero())
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError("ideal generator from a different ring")
        self.ring = ring
        self.gens = gens
        self._gb_cache: dict = {}

    def groebner(self, order: Optional[MonomialOrder] = None) -> tuple:
        order = order or self.ring.default_order
        hit = self._gb_cache.get(order)
        if hit is None:
            hit = tuple(_ideal_groebner(self.ring, self.gens, order))
            self._gb_cache[order] = hit
        return hit

    def is_zero(self) -> bool:
        return not self.gens

    def __eq__(self, other):
        return (
            isinstance(other, Ideal) and self.ring == other.ring and self.gens == other.gens
        )

    def __hash__(self):
        return hash((self.ring.names, self.gens))

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")" if self.gens else "(0)"


class QuotientContext:
    """The quotient ring O_Z = ring / relations, used as a computation context."""

    __slots__ = ("ring", "relations")

    def __init__(self, ring: PolynomialRing, relations: Ideal):
        if relations.ring != ring:
            raise RingMismatchError("relations live in a different ring")
        self.ring = ring
        self.relations = relations
        relations.groebner()  # warm the default-order cache

    def reduce(self, f, order: Optional[MonomialOrder] = None):
        """Normal form modulo the relations (entrywise on vectors)."""
        gb = self.relations.groebner(order)
        if isinstance(f, PolyVector):
            return PolyVector(self.ring, tuple(_reduce_poly(p, gb, order) for p in f.entries))
        return _reduce_poly(f, gb, order)

    def __eq__(self, other):
        return (
            isinstance(other, QuotientContext)
            and self.ring == other.ring
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.ring.names, self.relations.gens))

    def __repr__(self):
        return f"{self.ring!r}/{self.relations!r}"


Context = Optional[QuotientContext]


class SubmoduleBasis:
    """Generators of a submodule of ring^rank."""

    __slots__ = ("ring", "rank", "gens", "order")

    def __init__(
        self,
        ring: PolynomialRing,
        rank: int,
        gens: Iterable[PolyVector],
        order: Optional[MonomialOrder] = None,
    ):
        gens = tuple(gens)
        for v in gens:
            if v.ring != ring or v.rank != rank:
                raise ValueError("generator rank mismatch")
            if v.is_zero():
                raise ValueError("zero generator in submodule basis")
        self.ring = ring
        self.rank = rank
        self.gens = gens
        self.order = order or ring.default_order

    def __repr__(self):
        return "<" + "; ".join(str(v) for v in self.gens) + f"> in O^{self.rank}"


# ---------------------------------------------------------------------------
# the Buchberger engine (term-map level)


def _spair_parts(lead_i, lead_j):
    lcm = kernel.exp_lcm(lead_i[1], lead_j[1])
    return lcm, kernel.exp_sub(lcm, lead_i[1]), kernel.exp_sub(lcm, lead_j[1])


def _scale_terms(tm: dict, c: Fraction) -> dict:
    return {k: v * c for k, v in tm.items()}


def _engine(inputs: Sequence[dict], keyfn, rank: int, track: bool):
    """Reduced Groebner basis of nonzero term maps, with representations.

    Returns (basis, leads, reps, exprs):
      basis  monic reduced basis, sorted descending by leading key
      leads  leading keys of basis entries
      reps   basis[k] = sum(reps[k]) over the inputs (term maps over
             positions 0..len(inputs)-1); None when track is false
      exprs  inputs[j] = sum_k exprs[j][k] * basis[k] (quotient term
             maps over ring monomials); None when track is false
    """
    items = []  # [terms, lead_key, rep]
    for j, tm in enumerate(inputs):
        lk = kernel.leading_key(tm, keyfn)
        assert lk is not None, "engine inputs must be nonzero"
        inv = 1 / tm[lk]
        rep = {(j, _zero_mono(tm)): Fraction(inv)} if track else None
        items.append([_scale_terms(tm, inv), lk, rep])

    pairs = {}  # (i, j) -> selection key, computed once at insertion
    done = set()

    def lcm_key(i, j):
        lcm, _, _ = _spair_parts(items[i][1], items[j][1])
        return (keyfn((items[i][1][0], lcm)), i, j)

    for j in range(len(items)):
        for i in range(j):
            if items[i][1][0] == items[j][1][0]:
                pairs[(i, j)] = lcm_key(i, j)

    while pairs:
        i, j = min(pairs, key=pairs.__getitem__)
        del pairs[(i, j)]
        done.add((i, j))
        li, lj = items[i][1], items[j][1]
        pos = li[0]
        lcm, ui, uj = _spair_parts(li, lj)
        # coprime-lead criterion (valid for the ideal case only)
        if rank == 1 and lcm == kernel.exp_add(li[1], lj[1]):
            continue
        # chain criterion
        skip = False
        for k in range(len(items)):
            if k in (i, j) or items[k][1][0] != pos:
                continue
            if not kernel.exp_divides(items[k][1][1], lcm):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a in done and b in done:
                skip = True
                break
        if skip:
            continue
        s: dict = {}
        kernel.add_scaled_inplace(s, items[i][0], Fraction(1), ui)
        kernel.add_scaled_inplace(s, items[j][0], Fraction(-1), uj)
        divisors = [(it[1], Fraction(1), it[0]) for it in items]
        quots, rem = kernel.reduce_terms(s, divisors, keyfn, track)
        if not rem:
            continue
        rep = None
        if track:
            rep = {}
            kernel.add_scaled_inplace(rep, items[i][2], Fraction(1), ui)
            kernel.add_scaled_inplace(rep, items[j][2], Fraction(-1), uj)
            for k, q in enumerate(quots):
                for m, c in q.items():
                    kernel.add_scaled_inplace(rep, items[k][2], -c, m)
        lk = kernel.leading_key(rem, keyfn)
        inv = 1 / rem[lk]
        t = len(items)
        items.append([_scale_terms(rem, inv), lk, _scale_terms(rep, inv) if track else None])
        for k in range(t):
            if items[k][1][0] == lk[0]:
                pairs[(k, t)] = lcm_key(k, t)

    # minimal pass: drop anything whose lead another kept element divides
    order_asc = sorted(range(len(items)), key=lambda k: keyfn(items[k][1]))
    kept: list = []
    for k in order_asc:
        lk = items[k][1]
        if any(
            items[m][1][0] == lk[0] and kernel.exp_divides(items[m][1][1], lk[1])
            for m in kept
        ):
            continue
        kept.append(k)
    items = [items[k] for k in kept]

    # interreduce tails (leads are now pairwise non-dividing, one pass)
    for idx in range(len(items)):
        others = [items[k] for k in range(len(items)) if k != idx]
        if not others:
            continue
        divisors = [(it[1], Fraction(1), it[0]) for it in others]
        quots, rem = kernel.reduce_terms(items[idx][0], divisors, keyfn, track)
        if track:
            rep = items[idx][2]
            for k, q in enumerate(quots):
                for m, c in q.items():
                    kernel.add_scaled_inplace(rep, others[k][2], -c, m)
        items[idx][0] = rem  # lead coefficient still 1

    items.sort(key=lambda it: keyfn(it[1]), reverse=True)
    basis = [it[0] for it in items]
    leads = [it[1] for it in items]
    reps = [it[2] for it in items] if track else None

    exprs = None
    if track:
        divisors = [(it[1], Fraction(1), it[0]) for it in items]
        exprs = []
        for tm in inputs:
            quots, rem = kernel.reduce_terms(tm, divisors, keyfn, True)
            assert not rem, "input does not reduce to zero against its own basis"
            exprs.append(quots)
    return basis, leads, reps, exprs


def _zero_mono(tm: dict):
    some_key = next(iter(tm))
    return (0,) * len(some_key[1])


def _keyfn(order: MonomialOrder):
    return order.term_key


def _ideal_groebner(ring, gens, order):
    if not gens:
        return []
    basis, _, _, _ = _engine([poly_to_terms(g) for g in gens], _keyfn(order), 1, False)
    return [terms_to_poly(ring, tm) for tm in basis]


def _reduce_poly(f: Polynomial, gb: Sequence[Polynomial], order=None) -> Polynomial:
    if not gb:
        return f
    order = order or f.ring.default_order
    divisors = [((0, g.lm(order)), g.lc(order), poly_to_terms(g)) for g in gb]
    _, rem = kernel.reduce_terms(poly_to_terms(f), divisors, _keyfn(order), False)
    return terms_to_poly(f.ring, rem)


def _reduce_vector(v: PolyVector, gb: Sequence[PolyVector], order=None) -> PolyVector:
    if not gb:
        return v
    order = order or v.ring.default_order
    divisors = [(g.leading(order)[0], g.leading(order)[1], vector_to_terms(g)) for g in gb]
    _, rem = kernel.reduce_terms(vector_to_terms(v), divisors, _keyfn(order), False)
    return terms_to_vector(v.ring, v.rank, rem)


# ---------------------------------------------------------------------------
# public operations


def groebner_basis(obj: Union[Ideal, SubmoduleBasis], order: Optional[MonomialOrder] = None):
    """Reduced Groebner basis of an ideal or submodule (monic, auto-reduced,
    sorted descending by leading term)."""
    if isinstance(obj, Ideal):
        return list(obj.groebner(order))
    if isinstance(obj, SubmoduleBasis):
        order = order or obj.order
        if not obj.gens:
            return []
        basis, _, _, _ = _engine(
            [vector_to_terms(v) for v in obj.gens], _keyfn(order), obj.rank, False
        )
        return [terms_to_vector(obj.ring, obj.rank, tm) for tm in basis]
    raise TypeError("expected an Ideal or SubmoduleBasis")


def normal_form(f, basis, order: Optional[MonomialOrder] = None, context: Context = None):
    """Remainder of f against a basis; reduces through the context first.

    Canonical (a membership test) when basis is a Groebner basis of an
    ideal containing the context relations.
    """
    basis = list(basis)
    if isinstance(f, PolyVector):
        if context is not None:
            f = context.reduce(f, order)
        return _reduce_vector(f, basis, order) if basis else f
    if context is not None:
        f = context.reduce(f, order)
    return _reduce_poly(f, basis, order) if basis else f


def lifted_ideal(I: Ideal, context: Context) -> Ideal:
    """The ambient preimage of I: generators of I followed by the relations."""
    if context is None:
        return I
    return Ideal(I.ring, I.gens + context.relations.gens)


def ideal_member(f: Polynomial, I: Ideal, context: Context = None) -> bool:
    """f in I (over the quotient ring when a context is given)."""
    if context is not None:
        key = ("member-ctx", context.relations.gens)
        combined = I._gb_cache.get(key)
        if combined is None:
            combined = lifted_ideal(I, context)
            I._gb_cache[key] = combined
        I = combined
    return _reduce_poly(f, I.groebner()).is_zero()


def ideals_equal(I: Ideal, J: Ideal, context: Context = None) -> bool:
    """Mathematical equality via mutual membership."""
    return all(ideal_member(g, J, context) for g in I.gens) and all(
        ideal_member(g, I, context) for g in J.gens
    )


def module_member(v: PolyVector, basis: SubmoduleBasis, context: Context = None) -> bool:
    gens = list(basis.gens)
    if context is not None:
        for z in context.relations.groebner():
            for pos in range(basis.rank):
                gens.append(unit_vector(basis.ring, basis.rank, pos).scale(z))
    if not gens:
        if context is not None:
            v = context.reduce(v)
        return v.is_zero()
    gb, _, _, _ = _engine([vector_to_terms(g) for g in gens], _keyfn(basis.order), basis.rank, False)
    gb_vecs = [terms_to_vector(basis.ring, basis.rank, tm) for tm in gb]
    return _reduce_vector(v, gb_vecs, basis.order).is_zero()


# -- syzygies ----------------------------------------------------------------


def _syzygies_termmaps(inputs: Sequence[dict], keyfn, rank: int):
    """Generators of the syzygy module of the given nonzero term maps.

    Schreyer's construction on the reduced basis, pushed back through the
    transformation: Syz(F) = A*Syz(G) + columns of (Id - A*B).
    """
    basis, leads, reps, exprs = _engine(inputs, keyfn, rank, True)
    s = len(inputs)
    zero = _zero_mono(inputs[0])
    out = []
    # pair syzygies of the reduced basis, mapped through A
    divisors = [(lk, Fraction(1), tm) for lk, tm in zip(leads, basis)]
    for j in range(len(basis)):
        for i in range(j):
            if leads[i][0] != leads[j][0]:
                continue
            lcm, ui, uj = _spair_parts(leads[i], leads[j])
            sp: dict = {}
            kernel.add_scaled_inplace(sp, basis[i], Fraction(1), ui)
            kernel.add_scaled_inplace(sp, basis[j], Fraction(-1), uj)
            quots, rem = kernel.reduce_terms(sp, divisors, keyfn, True)
            assert not rem, "S-pair of a Groebner basis must reduce to zero"
            syz: dict = {}
            kernel.add_scaled_inplace(syz, reps[i], Fraction(1), ui)
            kernel.add_scaled_inplace(syz, reps[j], Fraction(-1), uj)
            for k, q in enumerate(quots):
                for m, c in q.items():
                    kernel.add_scaled_inplace(syz, reps[k], -c, m)
            if syz:
                out.append(syz)
    # columns of Id - A*B
    for j in range(s):
        col = {(j, zero): Fraction(1)}
        for k, q in enumerate(exprs[j]):
            for m, c in q.items():
                kernel.add_scaled_inplace(col, reps[k], -c, m)
        if col:
            out.append(col)
    return out


def syzygies(obj: Union[Ideal, SubmoduleBasis], context: Context = None) -> SubmoduleBasis:
    """Generators of the syzygy module of the given generators.

    Over a quotient context the relation multiples of each unit vector
    are appended and the ambient syzygies are projected back down.
    """
    if isinstance(obj, Ideal):
        ring = obj.ring
        order = ring.default_order
        gens = [PolyVector(ring, (g,)) for g in obj.gens]
        rank = 1
    elif isinstance(obj, SubmoduleBasis):
        ring = obj.ring
        order = obj.order
        gens = list(obj.gens)
        rank = obj.rank
    else:
        raise TypeError("expected an Ideal or SubmoduleBasis")
    s = len(gens)
    if s == 0:
        return SubmoduleBasis(ring, 0, ())

    inputs = list(gens)
    if context is not None:
        for z in context.relations.groebner(order):
            for pos in range(rank):
                inputs.append(unit_vector(ring, rank, pos).scale(z))
    raw = _syzygies_termmaps([vector_to_terms(v) for v in inputs], _keyfn(order), rank)

    vecs = []
    for tm in raw:
        per = [ring.zero()] * s
        for (pos, m), c in tm.items():
            if pos < s:
                per[pos] = per[pos] + Polynomial(ring, {m: c})
        v = PolyVector(ring, tuple(per))
        if context is not None:
            v = context.reduce(v, order)
        if not v.is_zero():
            vecs.append(v.monic(order))

    # canonical output: dedupe, sort descending under the Schreyer order
    # induced by the input generators' leading terms
    sch = order.schreyer(tuple(g.leading(order)[0] for g in gens))
    seen = set()
    unique = []
    for v in vecs:
        sig = v.entries
        if sig not in seen:
            seen.add(sig)
            unique.append(v)
    # the transformation formula can emit several multiples of one simpler
    # syzygy; a reduced basis of the same span recovers it, so offer those
    # vectors as candidates too
    if unique:
        gb_tm, _, _, _ = _engine([vector_to_terms(v) for v in unique], _keyfn(sch), s, False)
        for tm in gb_tm:
            v = terms_to_vector(ring, s, tm)
            if context is not None:
                v = context.reduce(v, order)
                if v.is_zero():
                    continue
            v = v.monic(sch)
            if v.entries not in seen:
                seen.add(v.entries)
                unique.append(v)
    unique.sort(key=lambda v: sch.term_key(v.leading(sch)[0]), reverse=True)
    # drop generators the rest already produce (keeps iterated syzygy
    # computations from accumulating redundancy step after step)
    kept = []
    for i, v in enumerate(unique):
        others = kept + unique[i + 1 :]
        if others and module_member(v, SubmoduleBasis(ring, s, others), context):
            continue
        kept.append(v)
    return SubmoduleBasis(ring, s, kept)


# -- lifting through a module map -------------------------------------------


class ModuleLifter:
    """Solves sum(q_i * gens_i) = target repeatedly over one generator list."""

    def __init__(self, ring, rank: int, gens: Sequence[PolyVector], order=None):
        self.ring = ring
        self.rank = rank
        self.order = order or ring.default_order
        self.gens = list(gens)
        self._keyfn = _keyfn(self.order)
        if self.gens:
            basis, leads, reps, _ = _engine(
                [vector_to_terms(v) for v in self.gens], self._keyfn, rank, True
            )
            self._basis = basis
            self._divisors = [(lk, Fraction(1), tm) for lk, tm in zip(leads, basis)]
            self._reps = reps

    def lift(self, target: PolyVector):
        """Coefficients over gens, or None when target is not in the image."""
        if target.rank != self.rank:
            raise ValueError("target rank mismatch")
        if not self.gens:
            return [] if target.is_zero() else None
        quots, rem = kernel.reduce_terms(
            vector_to_terms(target), self._divisors, self._keyfn, True
        )
        if rem:
            return None
        out: dict = {}
        for k, q in enumerate(quots):
            for m, c in q.items():
                kernel.add_scaled_inplace(out, self._reps[k], c, m)
        per = [{} for _ in self.gens]
        for (pos, m), c in out.items():
            per[pos][m] = c
        return [Polynomial(self.ring, t) for t in per]


def module_lift(gens: Sequence[PolyVector], target: PolyVector, order=None):
    """One-shot lift; see ModuleLifter."""
    return ModuleLifter(target.ring, target.rank, gens, order).lift(target)


# -- elimination, intersection, quotient, saturation ------------------------


def elimination(I: Ideal, keep: Sequence[str]) -> Ideal:
    """Generators of I intersected with Q[keep], via a block order that
    makes the dropped variables infinitely expensive."""
    ring = I.ring
    keep = list(keep)
    for nm in keep:
        if nm not in ring.names:
            raise ValueError(f"unknown variable {nm!r}")
    keep_idx = [i for i, nm in enumerate(ring.names) if nm in keep]
    elim_idx = [i for i in range(ring.n) if i not in keep_idx]
    if not keep_idx:
        raise ValueError("must keep at least one variable")
    target = PolynomialRing(tuple(ring.names[i] for i in keep_idx), ring.default_order)
    if not elim_idx:
        return Ideal(target, I.groebner())

    base = ring.default_order

    def block_key(key):
        exps = key[1]
        hi = tuple(exps[i] for i in elim_idx)
        lo = tuple(exps[i] for i in keep_idx)
        return (-key[0], base.ring_key(hi), base.ring_key(lo))

    gens = [g for g in I.gens]
    if not gens:
        return Ideal(target, ())
    basis, _, _, _ = _engine([poly_to_terms(g) for g in gens], block_key, 1, False)
    kept = []
    for tm in basis:
        p = terms_to_poly(ring, tm)
        if all(all(m[i] == 0 for i in elim_idx) for m in p.terms):
            kept.append(
                Polynomial(target, {tuple(m[i] for i in keep_idx): c for m, c in p.terms.items()})
            )
    return Ideal(target, kept)


def _fresh_name(names):
    cand = "t"
    while cand in names:
        cand += "_"
    return cand


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via t*I + (1-t)*J and elimination of the tag variable."""
    ring = I.ring
    if J.ring != ring:
        raise RingMismatchError("ideals live in different rings")
    if I.is_zero() or J.is_zero():
        return Ideal(ring, ())
    tname = _fresh_name(ring.names)
    ext = ring.extend((tname,))
    t = ext.var(tname)
    gens = [t * transport(f, ext) for f in I.gens]
    gens += [(ext.one() - t) * transport(g, ext) for g in J.gens]
    elim = elimination(Ideal(ext, gens), ring.names)
    assert elim.ring == ring
    return elim


def ideal_quotient(I: Ideal, f: Polynomial, context: Context = None) -> Ideal:
    """The transporter (I : f) = {g : g*f in I}, over the context if given."""
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    ring = I.ring
    if context is not None:
        amb = ideal_quotient(lifted_ideal(I, context), f)
        gens = []
        for g in amb.gens:
            r = context.reduce(g)
            if not r.is_zero():
                gens.append(r)
        return Ideal(ring, gens)
    if I.is_zero():
        return Ideal(ring, ())
    inter = ideal_intersect(I, Ideal(ring, (f,)))
    gens = []
    for g in inter.gens:
        (q,), r = divide(g, [f])
        assert r.is_zero(), "intersection member not divisible in ideal quotient"
        gens.append(q.monic())
    return Ideal(ring, gens)


def saturation(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f^infinity), iterating transporters until they stabilize."""
    cur = I
    cur_gb = cur.groebner()
    for _ in range(_SATURATION_CAP):
        nxt = ideal_quotient(cur, f)
        nxt_gb = nxt.groebner()
        if list(nxt_gb) == list(cur_gb):
            return cur
        cur, cur_gb = nxt, nxt_gb
    raise RuntimeError(f"saturation did not stabilize within {_SATURATION_CAP} steps")


# -- dimension ---------------------------------------------------------------


def dimension(I: Ideal):
    """(Krull dimension of ring/I, codimension of V(I)).

    Computed as the largest variable subset independent modulo the
    leading-term ideal. The unit ideal gets (-1, inf); (0) gets (n, 0).
    """
    ring = I.ring
    gb = I.groebner()
    if any(g.is_constant() for g in gb):
        return (-1, INFINITE_CODIM)
    supports = []
    for g in gb:
        lm = g.lm()
        supports.append(frozenset(i for i, e in enumerate(lm) if e))
    n = ring.n
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        subset = {i for i in range(n) if mask >> i & 1}
        if all(not sup <= subset for sup in supports):
            best = size
    return (best, n - best)
