"""Pure-Python section scanner; the reference the compiled kernel must match.

Both implementations expose ``scan(job, lo, hi)`` returning
``(raw, orbits, excl_raw, excl_orbits, orbit_size_sum, collected)`` for the
partition [lo, hi): a range of flat candidate indices in naive mode, or of
first-node representative indices in interpolation mode.  ``collected`` holds
``(coefficient_tuple, excluded)`` for every canonical section when
``job.collect`` is set.
"""

from __future__ import annotations


class _Ctx:
    def __init__(self, job):
        j = job
        self.Q = j.Q
        self.add = j.add.tolist()
        self.mul = j.mul.tolist()
        self.neg = j.neg.tolist()
        self.inv = j.inv.tolist()
        self.n = j.n
        self.D = j.D.tolist()
        self.off = j.off.tolist()
        self.M = j.M
        self.pw = j.pw.tolist()
        self.forms = _unpack(j.f_nterms, j.f_tstart, j.f_tdeg, j.t_coef, j.t_exp, j.n)
        self.gens = _unpack(j.g_nterms, j.g_tstart, j.g_tdeg, j.gt_coef, j.gt_exp, j.n)
        self.comp_start = j.comp_start.tolist()
        self.k = j.k
        self.checkpts = j.checkpts.tolist()
        self.lampow = j.lampow.reshape(-1, j.n).tolist()


def _unpack(nterms, tstart, tdeg, coef, exp, n):
    out = []
    coef = coef.tolist()
    exp = exp.tolist()
    for f in range(len(nterms)):
        s, c = int(tstart[f]), int(nterms[f])
        terms = [(coef[t], exp[t * n:(t + 1) * n]) for t in range(s, s + c)]
        out.append((terms, int(tdeg[f])))
    return out


def _eval(ctx, terms, vals):
    Q, add, mul, pw = ctx.Q, ctx.add, ctx.mul, ctx.pw
    acc = 0
    for c, ex in terms:
        v = c
        for i, a in enumerate(ex):
            if a:
                v = mul[v * Q + pw[a * Q + vals[i]]]
                if not v:
                    break
        acc = add[acc * Q + v]
    return acc


def _polymul(ctx, a, b):
    Q, add, mul = ctx.Q, ctx.add, ctx.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j] * Q + mul[x * Q + y]]
    return out


def _compose_zero(ctx, terms, polys):
    Q, add = ctx.Q, ctx.add
    acc = {}
    cache = {}
    for c, ex in terms:
        cur = [c]
        for i, a in enumerate(ex):
            if a:
                key = (i, a)
                if key not in cache:
                    p = [1]
                    for _ in range(a):
                        p = _polymul(ctx, p, polys[i])
                    cache[key] = p
                cur = _polymul(ctx, cur, cache[key])
        for d, v in enumerate(cur):
            if v:
                acc[d] = add[acc.get(d, 0) * Q + v]
    return all(v == 0 for v in acc.values())


def _horner(ctx, poly, s):
    Q, add, mul = ctx.Q, ctx.add, ctx.mul
    acc = 0
    for c in reversed(poly):
        acc = add[mul[acc * Q + s] * Q + c]
    return acc


def _vanishes(ctx, form_list, idxs, polys, lead, points, base_zeros):
    """True iff every form in ``idxs`` composes to the zero polynomial."""
    need = {f: form_list[f][1] + 1 - base_zeros for f in idxs}
    pending = [f for f in idxs if need[f] > 0]
    got = 0
    # point at infinity
    if pending:
        for f in pending:
            if _eval(ctx, form_list[f][0], lead):
                return False
        got = 1
    for s in points:
        pending = [f for f in pending if need[f] > got]
        if not pending:
            break
        vals = [_horner(ctx, p, s) for p in polys]
        for f in pending:
            if _eval(ctx, form_list[f][0], vals):
                return False
        got += 1
    for f in idxs:
        if need[f] > got and not _compose_zero(ctx, form_list[f][0], polys):
            return False
    return True


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmod(ctx, a, b):
    Q, add, mul, neg, inv = ctx.Q, ctx.add, ctx.mul, ctx.neg, ctx.inv
    a = list(a)
    db = len(b) - 1
    ib = inv[b[-1]]
    while len(a) - 1 >= db and a:
        c = mul[a[-1] * Q + ib]
        sh = len(a) - 1 - db
        for i, y in enumerate(b):
            a[sh + i] = add[a[sh + i] * Q + neg[mul[c * Q + y]]]
        a = _trim(a)
    return a


def _coprime(ctx, polys):
    g = None
    for p in polys:
        p = _trim(p)
        if not p:
            continue
        if len(p) == 1:
            return True
        if g is None:
            g = p
            continue
        a, b = g, p
        while b:
            a, b = b, _pmod(ctx, a, b)
        g = a
        if len(g) == 1:
            return True
    return g is not None and len(g) == 1


def _process(ctx, coef, mult, group, acc, collect_out):
    n, D, off, Q = ctx.n, ctx.D, ctx.off, ctx.Q
    lead = [coef[off[i] + D[i]] for i in range(n)]
    if not any(lead):
        return
    polys = [coef[off[i]:off[i] + D[i] + 1] for i in range(n)]
    if not _vanishes(ctx, ctx.forms, range(len(ctx.forms)), polys, lead, ctx.checkpts, ctx.k):
        return
    if not _coprime(ctx, polys):
        return
    canonical = True
    stab = 1
    mul = ctx.mul
    M = ctx.M
    for lam in group:
        lp = ctx.lampow[lam]
        cmp = 0
        for i in range(n):
            li = lp[i]
            for pos in range(off[i], off[i] + D[i] + 1):
                a = coef[pos]
                b = mul[li * Q + a]
                if b != a:
                    cmp = -1 if b < a else 1
                    break
            if cmp:
                break
        if cmp < 0:
            canonical = False
            break
        if cmp == 0:
            stab += 1
    excluded = False
    ncomp = len(ctx.comp_start) - 1
    for c in range(ncomp):
        gi = range(ctx.comp_start[c], ctx.comp_start[c + 1])
        if _vanishes(ctx, ctx.gens, gi, polys, lead, range(Q), 0):
            excluded = True
            break
    acc[0] += mult
    if excluded:
        acc[2] += mult
    if canonical:
        acc[1] += 1
        acc[4] += (Q - 1) // stab
        if excluded:
            acc[3] += 1
        if collect_out is not None:
            collect_out.append((tuple(coef[:M]), excluded))


def scan(job, lo, hi):
    ctx = _Ctx(job)
    acc = [0, 0, 0, 0, 0]
    collected = [] if job.collect else None
    Q, M, n = ctx.Q, ctx.M, ctx.n
    if job.mode == 0:
        group = list(range(1, Q - 1))
        digits = []
        x = lo
        for _ in range(M):
            digits.append(x % Q)
            x //= Q
        digits.reverse()
        for _ in range(lo, hi):
            _process(ctx, digits, 1, group, acc, collected)
            p = M - 1
            while p >= 0:
                digits[p] += 1
                if digits[p] < Q:
                    break
                digits[p] = 0
                p -= 1
        return (*acc, collected)

    k = ctx.k
    add, mul = ctx.add, ctx.mul
    cone = job.cone.reshape(-1, n).tolist()
    reps = job.reps.reshape(-1, n).tolist()
    rep_mult = job.rep_mult.tolist()
    rs = job.rep_stab_start.tolist()
    rstab = job.rep_stab.tolist()
    Lc = job.Lc.reshape(k, k).tolist()
    Pc = job.Pc.tolist()
    hcnt = [ctx.D[i] + 1 - k for i in range(n)]
    hoff = [0] * n
    for i in range(1, n):
        hoff[i] = hoff[i - 1] + hcnt[i - 1]
    H = sum(hcnt)
    ncone = len(cone)
    coef = [0] * M
    for r in range(lo, hi):
        group = rstab[rs[r]:rs[r + 1]]
        mult = rep_mult[r]
        sel = [0] * (k - 1)
        while True:
            vals = [reps[r]] + [cone[s] for s in sel]
            h = [0] * H
            while True:
                for i in range(n):
                    base = ctx.off[i]
                    for l in range(ctx.D[i] + 1):
                        acc_c = 0
                        if l < k:
                            for j in range(k):
                                acc_c = add[acc_c * Q + mul[vals[j][i] * Q + Lc[j][l]]]
                        for a in range(k + 1):
                            t = l - a
                            if 0 <= t < hcnt[i]:
                                acc_c = add[acc_c * Q + mul[Pc[a] * Q + h[hoff[i] + t]]]
                        coef[base + l] = acc_c
                _process(ctx, coef, mult, group, acc, collected)
                p = H - 1
                while p >= 0:
                    h[p] += 1
                    if h[p] < Q:
                        break
                    h[p] = 0
                    p -= 1
                if p < 0:
                    break
            p = k - 2
            while p >= 0:
                sel[p] += 1
                if sel[p] < ncone:
                    break
                sel[p] = 0
                p -= 1
            if p < 0:
                break
    return (*acc, collected)
