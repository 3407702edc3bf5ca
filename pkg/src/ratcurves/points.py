"""Vectorized enumeration of affine-cone and (weighted) projective points.

Vectors are int64 arrays of field encodings.  The lexicographic order on
vectors coincides with the order of the base-Q index ``sum x_i Q^(n-1-i)``,
which is what canonical representatives are minimized over.
"""

from __future__ import annotations

import numpy as np

from .field import FieldSpec

MAX_VECTORS = 1 << 25


class EnumerationTooLarge(RuntimeError):
    pass


def all_vectors(Q: int, n: int) -> np.ndarray:
    total = Q ** n
    if total > MAX_VECTORS:
        raise EnumerationTooLarge(f"{Q}^{n} = {total} vectors exceeds the enumeration cap {MAX_VECTORS}")
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((total, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = idx % Q
        idx //= Q
    return out


def vector_index(vecs: np.ndarray, Q: int) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    idx = np.zeros(vecs.shape[0], dtype=np.int64)
    for i in range(vecs.shape[1]):
        idx = idx * Q + vecs[:, i]
    return idx


def scalar_powers(F: FieldSpec, weights) -> np.ndarray:
    """Row j holds (lam^w_0, ..., lam^w_N) for lam = j + 1, over all nonzero lam."""
    lams = np.arange(1, F.q, dtype=np.int64)
    return np.stack([F.vpow(lams, int(w)) for w in weights], axis=1)


def act(F: FieldSpec, lam_pows, vecs):
    """lam . v for one multiplier row ``lam_pows`` applied to every vector."""
    return F.vmul(vecs, np.asarray(lam_pows, dtype=np.int64)[None, :])


def unweighted_points(F: FieldSpec, n: int) -> np.ndarray:
    """Normalized points of P^{n-1}(F): first nonzero coordinate equal to 1, lex order."""
    Q = F.q
    total = (Q ** n - 1) // (Q - 1)
    if total > MAX_VECTORS:
        raise EnumerationTooLarge(f"P^{n - 1}(F_{Q}) has {total} points, above the cap {MAX_VECTORS}")
    blocks = []
    for lead in range(n - 1, -1, -1):
        tail = all_vectors(Q, n - 1 - lead)
        blk = np.zeros((tail.shape[0], n), dtype=np.int64)
        blk[:, lead] = 1
        blk[:, lead + 1:] = tail
        blocks.append(blk)
    return np.concatenate(blocks, axis=0)


def orbit_data(F: FieldSpec, weights, vecs: np.ndarray):
    """Canonical representative index, orbit size and stabilizer mask for each vector.

    Returns (rep_index, orbit_size, stab) where ``stab[:, j]`` says whether
    multiplier j+1 fixes the vector.
    """
    Q = F.q
    lp = scalar_powers(F, weights)
    best = vector_index(vecs, Q)
    stab = np.zeros((vecs.shape[0], Q - 1), dtype=bool)
    base = best.copy()
    for j in range(Q - 1):
        img = vector_index(act(F, lp[j], vecs), Q)
        stab[:, j] = img == base
        best = np.minimum(best, img)
    sizes = (Q - 1) // stab.sum(axis=1)
    return best, sizes, stab


def weighted_points(F: FieldSpec, weights) -> np.ndarray:
    """Canonical (lex-least) orbit representatives of nonzero vectors under the weighted action."""
    weights = tuple(weights)
    if all(w == 1 for w in weights):
        return unweighted_points(F, len(weights))
    vecs = all_vectors(F.q, len(weights))[1:]
    best, _, _ = orbit_data(F, weights, vecs)
    keep = best == vector_index(vecs, F.q)
    return vecs[keep]


def forms_vanish(forms, vecs: np.ndarray) -> np.ndarray:
    from .forms import evaluate_many

    mask = np.ones(vecs.shape[0], dtype=bool)
    for f in forms:
        if not mask.any():
            break
        sub = np.nonzero(mask)[0]
        vals = evaluate_many(f, vecs[sub])
        mask[sub[vals != 0]] = False
    return mask


def points_on(forms, F: FieldSpec, weights, chunk: int = 1 << 20) -> np.ndarray:
    """Canonical representatives of the points of V(forms) over F."""
    pts = weighted_points(F, weights)
    out = []
    for lo in range(0, pts.shape[0], chunk):
        blk = pts[lo:lo + chunk]
        out.append(blk[forms_vanish(forms, blk)])
    return np.concatenate(out, axis=0) if out else np.zeros((0, len(weights)), dtype=np.int64)


def cone_points(forms, F: FieldSpec, weights):
    """All nonzero vectors of the affine cone of V(forms), lex ordered, with orbit data.

    Returns (cone, reps, rep_sizes, rep_stabs): ``reps`` are the canonical points,
    ``rep_sizes`` their orbit sizes and ``rep_stabs`` a list of multiplier
    indices (lam - 1) fixing each representative, identity excluded.
    """
    weights = tuple(weights)
    reps = points_on(forms, F, weights)
    lp = scalar_powers(F, weights)
    images = [act(F, lp[j], reps) for j in range(F.q - 1)]
    rep_idx = vector_index(reps, F.q)
    stab = np.stack([vector_index(img, F.q) == rep_idx for img in images], axis=1) if len(reps) \
        else np.zeros((0, F.q - 1), dtype=bool)
    sizes = (F.q - 1) // np.maximum(stab.sum(axis=1), 1)
    allv = np.concatenate(images, axis=0) if len(reps) else np.zeros((0, len(weights)), dtype=np.int64)
    idx = vector_index(allv, F.q)
    _, first = np.unique(idx, return_index=True)
    cone = allv[first]
    stabs = [[j for j in range(1, F.q - 1) if stab[r, j]] for r in range(len(reps))]
    return cone, reps, sizes, stabs
