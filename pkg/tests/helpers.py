"""Shared random-instance generators and brute-force oracles."""

from __future__ import annotations

import numpy as np

from osnrgame import (
    PlayerParams,
    SeekerParams,
    ServicePartition,
    SystemMatrix,
    assemble,
)


def random_dominant_instance(rng, n_max=30, bounds_regime=False):
    """A random instance satisfying the diagonal-dominance hypotheses.

    Seeker targets are drawn as a fraction of the row-sum bound; player
    parameters exceed their off-diagonal row sums. With bounds_regime=True the
    instance additionally satisfies the power-bound preconditions (player
    row sums above every seeker row-sum bound, player right-hand sides
    above every seeker one).
    """
    n = int(rng.integers(2, n_max + 1))
    gamma = rng.uniform(1e-5, 1e-3, (n, n))
    n0 = rng.uniform(1e-4, 2e-3, n)
    sysm = SystemMatrix(gamma=gamma, n0=n0)

    # at least one player and one seeker
    is_player = rng.random(n) < 0.5
    is_player[int(rng.integers(0, n))] = True
    is_player[(int(np.flatnonzero(is_player)[0]) + 1) % n] = False

    roles = []
    for i in range(n):
        row_sum = gamma[i].sum()
        off = row_sum - gamma[i, i]
        if is_player[i]:
            if bounds_regime:
                a = off + rng.uniform(2.05, 4.0)
                beta_over_alpha = rng.uniform(1.02, 3.0)
            else:
                a = off + rng.uniform(0.005, 0.05)
                beta_over_alpha = rng.uniform(1.0, 3.0)
            roles.append(PlayerParams(alpha=1.0, beta=beta_over_alpha, a=a))
        else:
            g = rng.uniform(0.2, 0.85) / row_sum
            if bounds_regime:
                g = min(g, 1.5 / n0[i])
            roles.append(SeekerParams(gamma=g))
    partition = ServicePartition(roles=tuple(roles))
    return sysm, partition, assemble(sysm, partition)


def random_small_qp(rng):
    """A random least-squares fallback instance with at most 3 columns."""
    n_cols = int(rng.integers(2, 4))
    m = int(rng.integers(1, min(3, n_cols)))
    n_ineq = int(rng.integers(1, 3))
    gt = rng.normal(size=(m, n_cols))
    bt = rng.normal(size=m)
    gh = rng.normal(size=(n_ineq, n_cols))
    bh = rng.normal(size=n_ineq)
    return gt, bt, gh, bh


def rowspace_grid_minimum(gt, bt, gh, bh, u_scale, points=121, stages=4):
    """Brute-force the fallback objective over the player row space.

    The pseudoinverse recovery confines the solution to the row space of
    the player system, so the enumeration walks that subspace: a coarse
    grid over a box (sized from u_scale), then repeated refinements around
    the incumbent. Returns the best objective found, or None when no grid
    point is feasible.
    """
    gt = np.atleast_2d(gt)
    gh = np.atleast_2d(gh)
    _, sv, vt = np.linalg.svd(gt, full_matrices=False)
    q = vt[sv > 1e-10 * sv[0]].T  # orthonormal row-space basis, N x r
    r = q.shape[1]

    half = 3.0 * (1.0 + float(u_scale))
    center = np.zeros(r)
    best_v, best_obj = None, None
    for stage in range(stages):
        axes = [np.linspace(c - half, c + half, points) for c in center]
        mesh = np.meshgrid(*axes, indexing="ij")
        vs = np.stack([m.ravel() for m in mesh], axis=1)
        us = vs @ q.T
        feasible = np.all(us @ gh.T >= bh - 1e-9, axis=1)
        if not np.any(feasible):
            return None
        objs = np.linalg.norm(us[feasible] @ gt.T - bt, axis=1)
        k = int(np.argmin(objs))
        cand_obj = float(objs[k])
        if best_obj is None or cand_obj < best_obj:
            best_obj = cand_obj
            best_v = vs[feasible][k]
        center = best_v
        half = 4.0 * (2.0 * half / (points - 1))
    return best_obj
