# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled section scanner; same contract and results as ``_pykernel.scan``."""

from libc.string cimport memcpy, memset

cdef enum:
    MAXP = 512


cdef struct Ctx:
    int Q
    int n
    int M
    int k
    int nf
    int ncomp
    int ncheck
    int *add
    int *mul
    int *neg
    int *inv
    int *pw
    int *D
    int *off
    int *f_nterms
    int *f_tstart
    int *f_tdeg
    int *t_coef
    int *t_exp
    int *g_nterms
    int *g_tstart
    int *g_tdeg
    int *gt_coef
    int *gt_exp
    int *comp_start
    int *checkpts
    int *allpts
    int *lampow


cdef inline int _eval(Ctx *c, int *tcoef, int *texp, int start, int cnt, int *vals) nogil:
    cdef int Q = c.Q, n = c.n, acc = 0, t, i, a, v
    for t in range(start, start + cnt):
        v = tcoef[t]
        for i in range(n):
            a = texp[t * n + i]
            if a:
                v = c.mul[v * Q + c.pw[a * Q + vals[i]]]
                if v == 0:
                    break
        acc = c.add[acc * Q + v]
    return acc


cdef inline int _horner(Ctx *c, int *coef, int i, int s) nogil:
    cdef int Q = c.Q, acc = 0, l
    cdef int base = c.off[i]
    for l in range(c.D[i], -1, -1):
        acc = c.add[c.mul[acc * Q + s] * Q + coef[base + l]]
    return acc


cdef int _compose_zero(Ctx *c, int *tcoef, int *texp, int start, int cnt, int tdeg, int *coef) nogil:
    cdef int acc[MAXP]
    cdef int cur[MAXP]
    cdef int tmp[MAXP]
    cdef int Q = c.Q, n = c.n, t, i, a, r, x, y, j, l, clen, plen, base
    memset(acc, 0, sizeof(int) * (tdeg + 1))
    for t in range(start, start + cnt):
        cur[0] = tcoef[t]
        clen = 1
        for i in range(n):
            a = texp[t * n + i]
            base = c.off[i]
            plen = c.D[i] + 1
            for r in range(a):
                memset(tmp, 0, sizeof(int) * (clen + plen - 1))
                for j in range(clen):
                    x = cur[j]
                    if x:
                        for l in range(plen):
                            y = coef[base + l]
                            if y:
                                tmp[j + l] = c.add[tmp[j + l] * Q + c.mul[x * Q + y]]
                clen = clen + plen - 1
                memcpy(cur, tmp, sizeof(int) * clen)
        for j in range(clen):
            if cur[j]:
                acc[j] = c.add[acc[j] * Q + cur[j]]
    for j in range(tdeg + 1):
        if acc[j]:
            return 0
    return 1


cdef int _vanishes(Ctx *c, int gens, int lo, int hi, int *coef, int *lead,
                   int *points, int npts, int base_zeros) nogil:
    cdef int *nterms
    cdef int *tstart
    cdef int *tdeg
    cdef int *tcoef
    cdef int *texp
    cdef int vals[64]
    cdef int f, need, maxneed = 0, got = 0, s, i
    if gens:
        nterms = c.g_nterms; tstart = c.g_tstart; tdeg = c.g_tdeg; tcoef = c.gt_coef; texp = c.gt_exp
    else:
        nterms = c.f_nterms; tstart = c.f_tstart; tdeg = c.f_tdeg; tcoef = c.t_coef; texp = c.t_exp
    for f in range(lo, hi):
        need = tdeg[f] + 1 - base_zeros
        if need > maxneed:
            maxneed = need
    if maxneed > 0:
        for f in range(lo, hi):
            if tdeg[f] + 1 - base_zeros > 0:
                if _eval(c, tcoef, texp, tstart[f], nterms[f], lead):
                    return 0
        got = 1
    for s in range(npts):
        if got >= maxneed:
            break
        for i in range(c.n):
            vals[i] = _horner(c, coef, i, points[s])
        for f in range(lo, hi):
            if tdeg[f] + 1 - base_zeros > got:
                if _eval(c, tcoef, texp, tstart[f], nterms[f], vals):
                    return 0
        got += 1
    for f in range(lo, hi):
        if tdeg[f] + 1 - base_zeros > got:
            if not _compose_zero(c, tcoef, texp, tstart[f], nterms[f], tdeg[f], coef):
                return 0
    return 1


cdef int _pmod(Ctx *c, int *a, int la, int *b, int lb) nogil:
    cdef int Q = c.Q, ib = c.inv[b[lb - 1]], co, sh, i
    while la >= lb and la > 0:
        co = c.mul[a[la - 1] * Q + ib]
        sh = la - lb
        for i in range(lb):
            a[sh + i] = c.add[a[sh + i] * Q + c.neg[c.mul[co * Q + b[i]]]]
        while la > 0 and a[la - 1] == 0:
            la -= 1
    return la


cdef int _coprime(Ctx *c, int *coef) nogil:
    cdef int bufa[MAXP]
    cdef int bufb[MAXP]
    cdef int g[MAXP]
    cdef int *a
    cdef int *b
    cdef int *sw
    cdef int glen = 0, i, L, la, lb, tl, base
    for i in range(c.n):
        base = c.off[i]
        L = c.D[i] + 1
        while L > 0 and coef[base + L - 1] == 0:
            L -= 1
        if L == 0:
            continue
        if L == 1:
            return 1
        if glen == 0:
            memcpy(g, coef + base, sizeof(int) * L)
            glen = L
            continue
        a = bufa
        b = bufb
        memcpy(a, g, sizeof(int) * glen)
        la = glen
        memcpy(b, coef + base, sizeof(int) * L)
        lb = L
        while lb > 0:
            la = _pmod(c, a, la, b, lb)
            sw = a; a = b; b = sw
            tl = la; la = lb; lb = tl
        memcpy(g, a, sizeof(int) * la)
        glen = la
        if glen == 1:
            return 1
    return glen == 1


cdef int _process(Ctx *c, int *coef, long long mult, int *group, int ng,
                  long long *acc, list collected) except -1:
    cdef int lead[64]
    cdef int n = c.n, Q = c.Q, i, any_lead = 0, g, lam, li, pos, a, b, cmp, stab = 1
    cdef int canonical = 1, excluded = 0, comp
    for i in range(n):
        lead[i] = coef[c.off[i] + c.D[i]]
        if lead[i]:
            any_lead = 1
    if not any_lead:
        return 0
    if not _vanishes(c, 0, 0, c.nf, coef, lead, c.checkpts, c.ncheck, c.k):
        return 0
    if not _coprime(c, coef):
        return 0
    for g in range(ng):
        lam = group[g]
        cmp = 0
        for i in range(n):
            li = c.lampow[lam * n + i]
            for pos in range(c.off[i], c.off[i] + c.D[i] + 1):
                a = coef[pos]
                b = c.mul[li * Q + a]
                if b != a:
                    cmp = -1 if b < a else 1
                    break
            if cmp:
                break
        if cmp < 0:
            canonical = 0
            break
        if cmp == 0:
            stab += 1
    for comp in range(c.ncomp):
        if _vanishes(c, 1, c.comp_start[comp], c.comp_start[comp + 1], coef, lead, c.allpts, Q, 0):
            excluded = 1
            break
    acc[0] += mult
    if excluded:
        acc[2] += mult
    if canonical:
        acc[1] += 1
        acc[4] += (Q - 1) // stab
        if excluded:
            acc[3] += 1
        if collected is not None:
            collected.append((tuple([coef[i] for i in range(c.M)]), bool(excluded)))
    return 0


def scan(job, long long lo, long long hi):
    cdef int[::1] add = job.add, mul = job.mul, neg = job.neg, inv = job.inv, pw = job.pw
    cdef int[::1] D = job.D, off = job.off
    cdef int[::1] f_nterms = job.f_nterms, f_tstart = job.f_tstart, f_tdeg = job.f_tdeg
    cdef int[::1] t_coef = job.t_coef, t_exp = job.t_exp
    cdef int[::1] g_nterms = job.g_nterms, g_tstart = job.g_tstart, g_tdeg = job.g_tdeg
    cdef int[::1] gt_coef = job.gt_coef, gt_exp = job.gt_exp
    cdef int[::1] comp_start = job.comp_start, checkpts = job.checkpts, lampow = job.lampow
    cdef int[::1] cone = job.cone, reps = job.reps, rstart = job.rep_stab_start, rstab = job.rep_stab
    cdef long long[::1] rep_mult = job.rep_mult
    cdef int[::1] Lc = job.Lc, Pc = job.Pc
    cdef int dummy = 0
    cdef Ctx c
    cdef long long acc[5]
    cdef int Q = job.Q, n = job.n, M = job.M, k = job.k
    cdef int coef[MAXP]
    cdef int digits[MAXP]
    cdef int allpts[4096]
    cdef int group[4096]
    cdef int sel[MAXP]
    cdef int h[MAXP]
    cdef int hcnt[64]
    cdef int hoff[64]
    cdef int vals[MAXP]
    cdef int ng, i, p, l, j, a, t, s, H, ncone, accv, base
    cdef long long idx, x, r, mult
    cdef list collected = [] if job.collect else None

    if n > 64 or M > MAXP or Q > 4096:
        raise ValueError("kernel limits exceeded")
    for i in range(Q):
        allpts[i] = i
    c.Q = Q; c.n = n; c.M = M; c.k = k
    c.nf = f_nterms.shape[0]
    c.ncomp = comp_start.shape[0] - 1
    c.ncheck = checkpts.shape[0]
    c.add = &add[0]; c.mul = &mul[0]; c.neg = &neg[0]; c.inv = &inv[0]; c.pw = &pw[0]
    c.D = &D[0]; c.off = &off[0]
    c.f_nterms = &f_nterms[0] if f_nterms.shape[0] else &dummy
    c.f_tstart = &f_tstart[0] if f_tstart.shape[0] else &dummy
    c.f_tdeg = &f_tdeg[0] if f_tdeg.shape[0] else &dummy
    c.t_coef = &t_coef[0] if t_coef.shape[0] else &dummy
    c.t_exp = &t_exp[0] if t_exp.shape[0] else &dummy
    c.g_nterms = &g_nterms[0] if g_nterms.shape[0] else &dummy
    c.g_tstart = &g_tstart[0] if g_tstart.shape[0] else &dummy
    c.g_tdeg = &g_tdeg[0] if g_tdeg.shape[0] else &dummy
    c.gt_coef = &gt_coef[0] if gt_coef.shape[0] else &dummy
    c.gt_exp = &gt_exp[0] if gt_exp.shape[0] else &dummy
    c.comp_start = &comp_start[0]
    c.checkpts = &checkpts[0] if checkpts.shape[0] else &dummy
    c.allpts = allpts
    c.lampow = &lampow[0]
    for i in range(5):
        acc[i] = 0
    for i in range(n):
        if c.D[i] + 1 > MAXP:
            raise ValueError("kernel limits exceeded")
    for i in range(c.nf):
        if c.f_tdeg[i] + 1 > MAXP:
            raise ValueError("kernel limits exceeded")
    for i in range(g_tdeg.shape[0]):
        if c.g_tdeg[i] + 1 > MAXP:
            raise ValueError("kernel limits exceeded")
    if k * n > MAXP:
        raise ValueError("kernel limits exceeded")

    if job.mode == 0:
        ng = 0
        for i in range(1, Q - 1):
            group[ng] = i
            ng += 1
        x = lo
        for p in range(M - 1, -1, -1):
            digits[p] = x % Q
            x //= Q
        idx = lo
        while idx < hi:
            _process(&c, digits, 1, group, ng, acc, collected)
            p = M - 1
            while p >= 0:
                digits[p] += 1
                if digits[p] < Q:
                    break
                digits[p] = 0
                p -= 1
            idx += 1
        return (acc[0], acc[1], acc[2], acc[3], acc[4], collected)

    ncone = cone.shape[0] // n
    H = 0
    for i in range(n):
        hcnt[i] = c.D[i] + 1 - k
        hoff[i] = H
        H += hcnt[i]
    r = lo
    while r < hi:
        ng = 0
        for j in range(rstart[r], rstart[r + 1]):
            group[ng] = rstab[j]
            ng += 1
        mult = rep_mult[r]
        for i in range(n):
            vals[i] = reps[r * n + i]
        for j in range(k - 1):
            sel[j] = 0
        while True:
            for j in range(k - 1):
                for i in range(n):
                    vals[(j + 1) * n + i] = cone[sel[j] * n + i]
            for j in range(H):
                h[j] = 0
            while True:
                for i in range(n):
                    base = c.off[i]
                    for l in range(c.D[i] + 1):
                        accv = 0
                        if l < k:
                            for j in range(k):
                                accv = c.add[accv * Q + c.mul[vals[j * n + i] * Q + Lc[j * k + l]]]
                        for a in range(k + 1):
                            t = l - a
                            if 0 <= t < hcnt[i]:
                                accv = c.add[accv * Q + c.mul[Pc[a] * Q + h[hoff[i] + t]]]
                        coef[base + l] = accv
                _process(&c, coef, mult, group, ng, acc, collected)
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
        r += 1
    return (acc[0], acc[1], acc[2], acc[3], acc[4], collected)
