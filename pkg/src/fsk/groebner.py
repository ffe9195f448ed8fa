"""Groebner bases over F_p for ideals and submodules of free modules.

Buchberger with the Gebauer-Moeller pair update and normal (smallest lcm)
selection.  Output is always the reduced basis: monic, mutually tail
reduced, sorted by ascending leading term, so equal ideals (or modules)
produce identical bases under the same order.

Module elements are plain lists of Polynomials of a fixed length; the
order is position over term, smaller component index dominating.  The
coprime-head shortcut is applied in ideal mode only: it is not valid for
module pairs.
"""

import numpy as np

from ._kernels import combine_packed, nf_packed, sort_perm
from .orders import GREVLEX, Order
from .ring import Polynomial, PolyRing

GREVLEX_ORDER = Order()


class Context:
    """Packing conventions for one (ring, order, component count)."""

    def __init__(self, ring: PolyRing, order: Order = GREVLEX_ORDER, ncomp: int = 0):
        self.ring = ring
        self.order = order
        self.ncomp = ncomp
        self.mod = 1 if ncomp else 0
        self.kind = order.kind
        self.blk = order.blk_array(ring.nvars)
        self.p = ring.p

    def pack(self, elem):
        """Packed (exps, coeffs) sorted descending under the active order."""
        if self.ncomp == 0:
            e, c = elem.exps, elem.coeffs
            if self.kind == GREVLEX:
                return e, c  # storage order is already grevlex descending
        else:
            rows = []
            cofs = []
            for i, f in enumerate(elem):
                if f.is_zero():
                    continue
                block = np.empty((f.nterms(), self.ring.nvars + 1), np.int64)
                block[:, 0] = i
                block[:, 1:] = f.exps
                rows.append(block)
                cofs.append(f.coeffs)
            if not rows:
                return (np.zeros((0, self.ring.nvars + 1), np.int64),
                        np.zeros(0, np.int64))
            e = np.concatenate(rows)
            c = np.concatenate(cofs)
        perm = sort_perm(e, self.kind, self.blk, self.mod, descending=True)
        return e[perm], c[perm]

    def unpack(self, e, c):
        if self.ncomp == 0:
            return self.ring.from_terms(e, c)
        out = []
        for i in range(self.ncomp):
            pick = e[:, 0] == i
            out.append(self.ring.from_terms(e[pick][:, 1:], c[pick]))
        return out

    def term_key(self, row):
        """Ascending-comparable tuple for one packed exponent row."""
        s = self.mod
        x = row[s:]
        if self.kind == GREVLEX:
            mk = (int(x.sum()),) + tuple(int(-v) for v in x[::-1])
        elif self.kind == 1:
            mk = tuple(int(v) for v in x)
        else:
            b0 = self.blk == 0
            mk = ((int(x[b0].sum()),) + tuple(int(-v) for v in x[b0][::-1])
                  + (int(x[~b0].sum()),) + tuple(int(-v) for v in x[~b0][::-1]))
        if s:
            return (-int(row[0]),) + mk
        return mk

    def _divides(self, lead, term):
        if self.mod and lead[0] != term[0]:
            return False
        return bool((lead[self.mod:] <= term[self.mod:]).all())

    def _coprime(self, a, b):
        if self.mod:
            return False
        return not bool(((a > 0) & (b > 0)).any())


class PackedBasis:
    """A monic basis packed for repeated normal-form calls."""

    def __init__(self, ctx: Context, elems):
        self.ctx = ctx
        packed = []
        for g in elems:
            e, c = ctx.pack(g)
            if c.shape[0] == 0:
                continue
            inv = pow(int(c[0]), ctx.p - 2, ctx.p)
            packed.append((e, c * inv % ctx.p))
        self.items = packed
        k = ctx.ring.nvars + ctx.mod
        if packed:
            self.gexp = np.concatenate([e for e, _ in packed])
            self.gcoef = np.concatenate([c for _, c in packed])
            self.goff = np.concatenate(
                ([0], np.cumsum([len(c) for _, c in packed]))).astype(np.int64)
        else:
            self.gexp = np.zeros((0, k), np.int64)
            self.gcoef = np.zeros(0, np.int64)
            self.goff = np.zeros(1, np.int64)

    def reduce_packed(self, e, c):
        if not self.items or c.shape[0] == 0:
            return e, c
        return nf_packed(e, c, self.gexp, self.gcoef, self.goff,
                         self.ctx.p, self.ctx.kind, self.ctx.blk, self.ctx.mod)

    def reduce(self, elem):
        e, c = self.ctx.pack(elem)
        return self.ctx.unpack(*self.reduce_packed(e, c))


def _spoly(ctx, a, b, lead_a, lead_b):
    lcm = np.maximum(lead_a, lead_b)
    sa = lcm - lead_a
    sb = lcm - lead_b
    return combine_packed(a[0], a[1], 0, 1, sa,
                          b[0], b[1], 0, b[1].shape[0], ctx.p - 1, sb,
                          ctx.p, ctx.kind, ctx.blk, ctx.mod)


def _buchberger(ctx: Context, seed, stop=None):
    # with stop set (syzygy extraction), components >= stop form the
    # transcript block: its vectors are collected as found, never paired
    # with each other and never inter-reduced, because S-pairs inside the
    # transcript block only present the second syzygy module
    basis = []   # (e, c) monic, descending
    leads = []
    pairs = []   # (i, j, lcm_row)
    cat = [None]

    def reduce_full(e, c):
        if not basis or c.shape[0] == 0:
            return e, c
        if cat[0] is None:
            cat[0] = (np.concatenate([b[0] for b in basis]),
                      np.concatenate([b[1] for b in basis]),
                      np.concatenate(([0], np.cumsum([len(b[1]) for b in basis])))
                      .astype(np.int64))
        ge, gc, go = cat[0]
        return nf_packed(e, c, ge, gc, go, ctx.p, ctx.kind, ctx.blk, ctx.mod)

    def add(e, c):
        t = len(basis)
        newlead = e[0]
        if stop is not None and newlead[0] >= stop:
            basis.append((e, c))
            leads.append(newlead)
            cat[0] = None
            return
        # Gebauer-Moeller update of the pair set
        cand = []
        for i in range(t):
            if ctx.mod and leads[i][0] != newlead[0]:
                continue
            cand.append((i, np.maximum(leads[i], newlead)))
        kept = []
        for a, (i, lcm) in enumerate(cand):
            if ctx._coprime(leads[i], newlead):
                kept.append((i, lcm, True))
                continue
            dominated = False
            for bpos, (j, lcm2) in enumerate(cand):
                if bpos == a or (lcm2 > lcm).any():
                    continue
                if (lcm2 <= lcm).all() and (bpos < a or (lcm2 != lcm).any()):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, lcm, False))
        survivors = []
        for i, j, lcm in pairs:
            if not ctx._divides(newlead, lcm):
                survivors.append((i, j, lcm))
                continue
            if (np.maximum(leads[i], newlead) == lcm).all():
                survivors.append((i, j, lcm))
                continue
            if (np.maximum(leads[j], newlead) == lcm).all():
                survivors.append((i, j, lcm))
        pairs.clear()
        pairs.extend(survivors)
        for i, lcm, coprime in kept:
            if not coprime:
                pairs.append((i, t, lcm))
        basis.append((e, c))
        leads.append(newlead)
        cat[0] = None

    queue = []
    for g in seed:
        e, c = ctx.pack(g)
        if c.shape[0]:
            queue.append((e, c))
    queue.sort(key=lambda t: ctx.term_key(t[0][0]))

    while queue or pairs:
        if queue:
            e, c = queue.pop(0)
        else:
            best = min(range(len(pairs)), key=lambda k: ctx.term_key(pairs[k][2]))
            i, j, _ = pairs.pop(best)
            e, c = _spoly(ctx, basis[i], basis[j], leads[i], leads[j])
        e, c = reduce_full(e, c)
        if c.shape[0] == 0:
            continue
        inv = pow(int(c[0]), ctx.p - 2, ctx.p)
        add(e, c * inv % ctx.p)

    # reduced basis: minimal leads, tail reduced, ascending; transcript
    # block vectors (if any) pass through untouched
    loose = []
    if stop is not None:
        loose = [i for i in range(len(basis)) if leads[i][0] >= stop]
        lset = set(loose)
        basis = [b for i, b in enumerate(basis) if i not in lset] + \
            [basis[i] for i in loose]
        leads = [l for i, l in enumerate(leads) if i not in lset]
        loose = basis[len(leads):]
        basis = basis[:len(leads)]
    keep = []
    for i in range(len(basis)):
        if not any(j != i and ctx._divides(leads[j], leads[i])
                   and (j in keep or j > i) for j in range(len(basis))):
            keep.append(i)
    final = []
    for i in keep:
        others = PackedBasis.__new__(PackedBasis)
        others.ctx = ctx
        others.items = [basis[j] for j in keep if j != i]
        if others.items:
            others.gexp = np.concatenate([e for e, _ in others.items])
            others.gcoef = np.concatenate([c for _, c in others.items])
            others.goff = np.concatenate(
                ([0], np.cumsum([len(c) for _, c in others.items]))).astype(np.int64)
            e, c = others.reduce_packed(*basis[i])
        else:
            e, c = basis[i]
        final.append((e, c))
    final.sort(key=lambda t: ctx.term_key(t[0][0]))
    final.extend(loose)
    return final


def groebner(gens, order: Order = GREVLEX_ORDER, ring: PolyRing = None):
    """Reduced Groebner basis of the ideal generated by gens."""
    ring = ring or next(g.ring for g in gens)
    ctx = Context(ring, order)
    return [ctx.unpack(e, c) for e, c in _buchberger(ctx, gens)]


def module_groebner(vecs, order: Order = GREVLEX_ORDER, ring: PolyRing = None,
                    ncomp: int = None, stop: int = None):
    """Reduced Groebner basis of the submodule generated by vecs.

    With stop set, components >= stop are treated as a transcript block:
    no pairs are formed inside it and its vectors are returned as found.
    The components below stop still carry a reduced Groebner basis."""
    if ncomp is None:
        ncomp = len(vecs[0])
    if ring is None:
        ring = next(f.ring for v in vecs for f in v)
    ctx = Context(ring, order.module(), ncomp)
    return [ctx.unpack(e, c) for e, c in _buchberger(ctx, vecs, stop=stop)]


def normal_form(f, gb, order: Order = GREVLEX_ORDER):
    """Remainder of f on division by the (Groebner) list gb."""
    return PackedBasis(Context(f.ring, order), gb).reduce(f)


def module_normal_form(vec, gb, order: Order = GREVLEX_ORDER):
    ring = next(f.ring for f in vec)
    return PackedBasis(Context(ring, order.module(), len(vec)), gb).reduce(vec)


def syzygy_kernel(columns, ring: PolyRing = None):
    """Kernel of the map R^k -> R^m sending e_j to columns[j].

    columns is a list of length-m lists of Polynomials; returns generators
    of the syzygy module as length-k lists.
    """
    if not columns:
        return []
    m = len(columns[0])
    k = len(columns)
    if ring is None:
        ring = next(f.ring for v in columns for f in v)
    zero = ring.zero()
    graph = []
    for j, col in enumerate(columns):
        unit = [zero] * k
        unit[j] = ring.one()
        graph.append(list(col) + unit)
    gb = module_groebner(graph, GREVLEX_ORDER, ring=ring, ncomp=m + k,
                         stop=m)
    out = []
    for g in gb:
        if all(f.is_zero() for f in g[:m]):
            out.append(g[m:])
    return out
