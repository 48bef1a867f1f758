"""Line geometry in RP^3: transversals to four lines, counted exactly.

A line is a point on the Klein quadric in RP^5 via its Pluecker coordinates.
The lines meeting four given lines correspond to the intersection of four
hyperplanes (one per pairing condition) with the quadric: generically the
hyperplanes cut out a projective line, and restricting the quadric to it
leaves a binary quadratic whose real roots are the transversals — 0 or 2 of
them, with tangent/degenerate configurations flagged instead of counted.

This gives an enumerative ground truth for the expected-degree machinery:
averaging the count over uniform 4-tuples of lines is an independent Monte
Carlo route to edeg G(2,4), and summing counts over unions of lines checks
the multiplicative law for expected intersections with random subsets.
"""

import itertools
import math

import numpy as np
from dataclasses import dataclass

from .geomlin import Frame
from .mc import run_kernel

__all__ = [
    "PluckerLine",
    "TransversalCount",
    "plucker_of",
    "meet_pairing",
    "transversals_of_four",
    "edeg24_transversal_mc",
    "rig_union_of_lines_mc",
]

# index pairs (i, j), i < j, giving the minor order (p01, p02, p03, p12, p13, p23)
_MINOR_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_RANK_TOL = 1e-10  # kernel extraction threshold relative to sigma_max
_QUADRIC_TOL = 1e-10


def _quadric(x):
    """Klein quadric x01 x23 - x02 x13 + x03 x12, batched over leading axes."""
    return x[..., 0] * x[..., 5] - x[..., 1] * x[..., 4] + x[..., 2] * x[..., 3]


def _polar(x, y):
    """Polar bilinear form of the quadric; zero iff the two lines meet."""
    return (
        x[..., 0] * y[..., 5]
        - x[..., 1] * y[..., 4]
        + x[..., 2] * y[..., 3]
        + x[..., 3] * y[..., 2]
        - x[..., 4] * y[..., 1]
        + x[..., 5] * y[..., 0]
    )


@dataclass(frozen=True)
class PluckerLine:
    """Unit Pluecker coordinate vector of a line in RP^3."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (6,):
            raise ValueError("p must be a 6-vector")
        if abs(np.linalg.norm(p) - 1.0) > 1e-9:
            raise ValueError("p must be normalized to unit length")
        if abs(_quadric(p)) > _QUADRIC_TOL:
            raise ValueError("p does not satisfy the Klein quadric relation")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class TransversalCount:
    """Number of real lines meeting four given lines, or a degeneracy flag."""

    count: int
    degenerate: bool

    def __post_init__(self):
        if self.count not in (0, 1, 2):
            raise ValueError("count must be 0, 1, or 2")


def _minors_of_basis(mats):
    """Pluecker minors of 4x2 bases, batched: (..., 4, 2) -> (..., 6)."""
    out = np.empty(mats.shape[:-2] + (6,), dtype=float)
    for col, (i, j) in enumerate(_MINOR_PAIRS):
        out[..., col] = (
            mats[..., i, 0] * mats[..., j, 1] - mats[..., i, 1] * mats[..., j, 0]
        )
    return out


def plucker_of(frame):
    """PluckerLine spanned by a 4x2 frame (or any rank-2 4x2 basis matrix)."""
    mat = frame.entries if isinstance(frame, Frame) else np.asarray(frame, float)
    if mat.shape != (4, 2):
        raise ValueError("need a 4x2 basis of a 2-plane in R^4")
    minors = _minors_of_basis(mat)
    norm = np.linalg.norm(minors)
    scale = max(float(np.linalg.norm(mat)) ** 2, 1e-300)
    if norm <= 1e-12 * scale:
        raise ValueError("basis is rank deficient; no line is spanned")
    return PluckerLine(p=minors / norm)


def _as_vector(line):
    """Accept a PluckerLine or any nonzero homogeneous 6-vector."""
    if isinstance(line, PluckerLine):
        return line.p
    v = np.asarray(line, dtype=float)
    if v.shape != (6,):
        raise ValueError("line must be a PluckerLine or a 6-vector")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("zero vector is not a line")
    return v / norm


def meet_pairing(p, q):
    """Polar pairing of two lines: vanishes exactly when they intersect."""
    return float(_polar(_as_vector(p), _as_vector(q)))


def _count_batch(pluckers, tol=1e-12):
    """Transversal counts for batches of four lines.

    pluckers: (..., 4, 6) unit vectors.  Returns (counts, degenerate) with
    counts in {0, 2}; tangencies and rank-deficient systems set degenerate.
    """
    # pairing hyperplane rows: w(p) . q = polar(p, q)
    rows = pluckers[..., [5, 4, 3, 2, 1, 0]].copy()
    rows[..., 1] *= -1.0
    rows[..., 4] *= -1.0
    _, sv, vh = np.linalg.svd(rows, full_matrices=True)
    degenerate = sv[..., 3] <= _RANK_TOL * sv[..., 0]
    u = vh[..., 4, :]
    v = vh[..., 5, :]
    a = _quadric(u)
    b = _polar(u, v)
    c = _quadric(v)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.abs(c))
    degenerate |= scale < tol
    disc = b * b - 4.0 * a * c
    degenerate |= np.abs(disc) < tol * scale * scale
    counts = np.where(disc > 0.0, 2, 0).astype(np.int64)
    counts[degenerate] = 0
    return counts, degenerate


def transversals_of_four(l1, l2, l3, l4, tol=1e-12):
    """Count the real lines meeting all four given lines."""
    stack = np.stack([_as_vector(l) for l in (l1, l2, l3, l4)])
    counts, degenerate = _count_batch(stack[None, :, :], tol=tol)
    return TransversalCount(count=int(counts[0]), degenerate=bool(degenerate[0]))


def edeg24_transversal_mc(rng, samples, workers=1):
    """Mean transversal count over i.i.d. uniform 4-tuples of lines.

    Lines are spans of 4x2 Gaussian matrices — the same law as orthonormal
    frames from QR, since the minors of a basis differ from the frame's only
    by the positive factor det R, which normalization removes.
    """

    def kernel(gen, count):
        mats = gen.standard_normal((count, 4, 4, 2))
        pl = _minors_of_basis(mats)
        pl /= np.linalg.norm(pl, axis=-1, keepdims=True)
        counts, degenerate = _count_batch(pl)
        return counts[~degenerate].astype(float), int(degenerate.sum())

    return run_kernel(kernel, rng, samples, workers=workers, method="transversal-mc")


def rig_union_of_lines_mc(r, rng, samples, workers=1):
    """Expected number of lines meeting four unions of r_i random lines.

    Per sample draws r_1 + r_2 + r_3 + r_4 independent uniform lines and sums
    the transversal counts over all r_1 r_2 r_3 r_4 ways of picking one line
    from each union.  A degenerate pick marks the whole sample degenerate.
    """
    r = tuple(int(x) for x in r)
    if len(r) != 4 or any(x < 1 for x in r):
        raise ValueError("r must be four positive integers")
    combos = math.prod(r)
    if combos > 1000:
        raise ValueError("r1*r2*r3*r4 must be <= 1000")
    total_lines = sum(r)
    offsets = np.concatenate([[0], np.cumsum(r)[:-1]])

    def kernel(gen, count):
        mats = gen.standard_normal((count, total_lines, 4, 2))
        pl = _minors_of_basis(mats)
        pl /= np.linalg.norm(pl, axis=-1, keepdims=True)
        totals = np.zeros(count, dtype=float)
        bad = np.zeros(count, dtype=bool)
        for pick in itertools.product(*(range(x) for x in r)):
            idx = [int(offsets[g] + pick[g]) for g in range(4)]
            counts, degenerate = _count_batch(pl[:, idx, :])
            totals += counts
            bad |= degenerate
        return totals[~bad], int(bad.sum())

    return run_kernel(kernel, rng, samples, workers=workers, method="rig-mc")
