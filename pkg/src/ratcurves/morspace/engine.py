"""Job construction, budget guard, partitioning and kernel dispatch."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ..forms import MultiForm
from ..parallel import parallel_map
from ..points import cone_points
from ..unipoly import UniPoly

DEFAULT_BUDGET = 1 << 34

try:
    if os.environ.get("RATCURVES_PURE"):
        raise ImportError("pure mode forced")
    from . import _kernel as _backend
    BACKEND = "compiled"
except ImportError:
    from . import _pykernel as _backend
    BACKEND = "python"

from . import _pykernel

KERNEL_MAX_Q = 2048


class BudgetExceeded(RuntimeError):
    def __init__(self, cost, budget, formula):
        super().__init__(f"morspace.budget: search space {formula} = {cost} exceeds the budget {budget}")
        self.cost = cost
        self.budget = budget
        self.formula = formula


class NodeShortage(ValueError):
    pass


@dataclass
class Job:
    mode: int
    Q: int
    n: int
    e: int
    M: int
    k: int
    D: np.ndarray
    off: np.ndarray
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    pw: np.ndarray
    maxexp: int
    f_nterms: np.ndarray
    f_tstart: np.ndarray
    f_tdeg: np.ndarray
    t_coef: np.ndarray
    t_exp: np.ndarray
    g_nterms: np.ndarray
    g_tstart: np.ndarray
    g_tdeg: np.ndarray
    gt_coef: np.ndarray
    gt_exp: np.ndarray
    comp_start: np.ndarray
    checkpts: np.ndarray
    lampow: np.ndarray
    cone: np.ndarray
    reps: np.ndarray
    rep_mult: np.ndarray
    rep_stab_start: np.ndarray
    rep_stab: np.ndarray
    Lc: np.ndarray
    Pc: np.ndarray
    collect: bool
    total: int


def _i32(a):
    return np.ascontiguousarray(np.asarray(a, dtype=np.int32))


def _i64(a):
    return np.ascontiguousarray(np.asarray(a, dtype=np.int64))


def _pack_forms(forms, e, n):
    nterms, tstart, tdeg, coef, exps = [], [], [], [], []
    for f in forms:
        tstart.append(len(coef))
        nterms.append(len(f.terms))
        tdeg.append((f.wdeg or 0) * e)
        for ex, c in f.terms:
            coef.append(c)
            exps.extend(ex)
    return _i32(nterms), _i32(tstart), _i32(tdeg), _i32(coef), _i32(exps or [0] * 0)


def lagrange_tables(F, k):
    """Coefficients of the Lagrange basis at nodes 0..k-1 and of prod (t - t_j)."""
    nodes = list(range(k))
    Lc = np.zeros((k, k), dtype=np.int32)
    for j in nodes:
        num = UniPoly(F, [1])
        den = 1
        for m in nodes:
            if m != j:
                num = num * UniPoly(F, [F.neg(m), 1])
                den = F.mul(den, F.sub(j, m))
        basis = num * F.inv(den)
        for l in range(k):
            Lc[j, l] = basis.coeff(l)
    P = UniPoly(F, [1])
    for m in nodes:
        P = P * UniPoly(F, [F.neg(m), 1])
    return Lc, np.array([P.coeff(a) for a in range(k + 1)], dtype=np.int32)


@dataclass
class Plan:
    mode: str
    k: int
    cost: int
    formula: str


def plan_strategy(spec, e, strategy, cone_info=None):
    """Pick nodes and estimate the candidate count for the requested strategy."""
    Q = spec.field.q
    D = [w * e for w in spec.weights]
    M = sum(d + 1 for d in D)
    naive = Plan("naive", 0, Q ** M, f"{Q}^{M}")
    if strategy == "naive":
        return naive
    if strategy not in ("interpolation", "auto"):
        raise ValueError(f"morspace.strategy: unknown strategy {strategy!r}")
    if strategy == "interpolation" and Q < e + 1:
        raise NodeShortage(f"morspace.interpolation: need {e + 1} distinct nodes but q^m = {Q}")
    k = min(e + 1, Q)
    if cone_info is None:
        return Plan("interpolation", k, -1, "")
    ncone, nrep = cone_info
    extra = sum(d + 1 - k for d in D)
    cost = nrep * ncone ** (k - 1) * Q ** extra
    plan = Plan("interpolation", k, cost, f"{nrep}*{ncone}^{k - 1}*{Q}^{extra}")
    if strategy == "auto" and naive.cost < cost:
        return naive
    return plan


def build_job(spec, e, strategy="auto", exclusions=(), collect=False, budget=DEFAULT_BUDGET):
    F = spec.field
    Q = F.q
    n = spec.N + 1
    D = [w * e for w in spec.weights]
    off = [0]
    for d in D[:-1]:
        off.append(off[-1] + d + 1)
    M = sum(d + 1 for d in D)
    cone_info = None
    plan = plan_strategy(spec, e, strategy)
    cone = reps = None
    if plan.mode == "interpolation":
        cone, reps, sizes, stabs = cone_points(spec.forms, F, spec.weights)
        plan = plan_strategy(spec, e, strategy, (len(cone), len(reps)))
    if plan.cost > budget:
        raise BudgetExceeded(plan.cost, budget, plan.formula)
    gens = [g for comp in exclusions for g in comp]
    comp_start = [0]
    for comp in exclusions:
        comp_start.append(comp_start[-1] + len(comp))
    forms = list(spec.forms)
    maxexp = max([max(ex) for f in forms + gens for ex, _ in f.terms] + [1])
    pw = np.zeros((maxexp + 1, Q), dtype=np.int64)
    el = np.arange(Q, dtype=np.int64)
    pw[0] = 1
    for a in range(1, maxexp + 1):
        pw[a] = F.vmul(pw[a - 1], el)
    add, mul, neg, inv = F.flat_tables()
    lams = np.arange(1, Q, dtype=np.int64)
    lampow = np.stack([F.vpow(lams, int(w)) for w in spec.weights], axis=1)
    f_pack = _pack_forms(forms, e, n)
    g_pack = _pack_forms(gens, e, n)
    if plan.mode == "interpolation":
        k = plan.k
        Lc, Pc = lagrange_tables(F, k)
        rs = [0]
        flat_stab = []
        for st in stabs:
            flat_stab.extend(st)
            rs.append(len(flat_stab))
        job_cone, job_reps = cone.ravel(), reps.ravel()
        rep_mult = sizes
        total = len(reps)
        checkpts = list(range(k, Q))
    else:
        k = 0
        Lc, Pc = np.zeros((0, 0)), np.zeros(1)
        rs, flat_stab = [0], []
        job_cone = job_reps = np.zeros(0)
        rep_mult = np.zeros(0)
        total = Q ** M
        checkpts = list(range(Q))
    return Job(
        mode=0 if plan.mode == "naive" else 1, Q=Q, n=n, e=e, M=M, k=k,
        D=_i32(D), off=_i32(off), add=_i32(add), mul=_i32(mul), neg=_i32(neg), inv=_i32(inv),
        pw=_i32(pw.ravel()), maxexp=maxexp,
        f_nterms=f_pack[0], f_tstart=f_pack[1], f_tdeg=f_pack[2], t_coef=f_pack[3], t_exp=f_pack[4],
        g_nterms=g_pack[0], g_tstart=g_pack[1], g_tdeg=g_pack[2], gt_coef=g_pack[3], gt_exp=g_pack[4],
        comp_start=_i32(comp_start), checkpts=_i32(checkpts), lampow=_i32(lampow.ravel()),
        cone=_i32(job_cone), reps=_i32(job_reps), rep_mult=_i64(rep_mult),
        rep_stab_start=_i32(rs), rep_stab=_i32(flat_stab),
        Lc=_i32(Lc.ravel()), Pc=_i32(Pc), collect=collect, total=total,
    ), plan


def partitions(job, parts):
    """Contiguous, ordered partitions of the job's index space."""
    total = job.total
    if job.mode == 0 and total > 0:
        # split on whole blocks of the leading coefficient digits
        block = job.Q ** max(job.M - 2, 0)
        nblocks = -(-total // block)
        per = max(1, -(-nblocks // max(parts, 1)))
        return [(lo * block, min((lo + per) * block, total)) for lo in range(0, nblocks, per)]
    per = max(1, -(-total // max(parts, 1))) if total else 1
    return [(lo, min(lo + per, total)) for lo in range(0, total, per)]


def _run(args):
    job, lo, hi, pure = args
    backend = _pykernel if (pure or job.Q > KERNEL_MAX_Q) else _backend
    return backend.scan(job, lo, hi)


def run_job(job, threads=1, pure=False, parts=None):
    """Scan every partition and merge counters in partition order."""
    chunks = partitions(job, parts or max(4 * threads, 1))
    results = parallel_map(_run, [(job, lo, hi, pure) for lo, hi in chunks], threads)
    acc = [0, 0, 0, 0, 0]
    collected = [] if job.collect else None
    for res in results:
        for i in range(5):
            acc[i] += int(res[i])
        if collected is not None:
            collected.extend(res[5])
    return acc, collected
