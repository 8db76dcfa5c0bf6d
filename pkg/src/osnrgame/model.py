"""Allocation-problem data: roles, OSNR evaluation, player cost, and the
partitioned linear systems.

Channel powers are plain float ndarrays (mW). A power vector may carry
negative entries: the solvers work on affine systems and flag negativity
downstream instead of clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, UsageError, ValidationError
from .link import SystemMatrix, linear_to_db


@dataclass(frozen=True)
class PlayerParams:
    """Game-player parameters: power price, OSNR-desire weight, channel parameter."""

    alpha: float
    beta: float
    a: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValidationError("alpha must be > 0")
        if self.beta < 0:
            raise ValidationError("beta must be >= 0")
        if self.a <= 0:
            raise ValidationError("a must be > 0")


@dataclass(frozen=True)
class SeekerParams:
    """Target-seeker parameter: required OSNR as a linear ratio."""

    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValidationError("gamma must be > 0")


@dataclass(frozen=True)
class ServicePartition:
    """Per-channel role assignment over the global channel order."""

    roles: tuple[PlayerParams | SeekerParams, ...]

    def __post_init__(self):
        for r in self.roles:
            if not isinstance(r, (PlayerParams, SeekerParams)):
                raise ValidationError(f"unknown role object {r!r}")

    @property
    def size(self) -> int:
        return len(self.roles)

    @property
    def players(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if isinstance(r, PlayerParams)]

    @property
    def seekers(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if isinstance(r, SeekerParams)]

    @property
    def m(self) -> int:
        return len(self.players)

    @property
    def n(self) -> int:
        return len(self.seekers)


@dataclass(frozen=True)
class StackedSystem:
    """Player equality rows, seeker inequality rows, and their vertical stack.

    Rows are ordered players first, then seekers; columns stay in global
    channel order. player_index/seeker_index map stacked rows back to
    channel indices.
    """

    gamma_tilde: np.ndarray
    b_tilde: np.ndarray
    gamma_hat: np.ndarray
    b_hat: np.ndarray
    gamma_bar: np.ndarray
    b_bar: np.ndarray
    player_index: tuple[int, ...]
    seeker_index: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.gamma_bar.shape[0]

    @property
    def m(self) -> int:
        return len(self.player_index)

    @property
    def n(self) -> int:
        return len(self.seeker_index)


def osnr(u: np.ndarray, sys: SystemMatrix, i: int) -> float:
    """Signal-to-noise ratio of channel i: u_i over transmitter noise plus
    all coupled powers (the self term included)."""
    u = np.asarray(u, dtype=float)
    den = sys.n0[i] + float(np.dot(sys.gamma[i], u))
    if den <= 0:
        raise EvaluationError(
            f"channel {i}: non-positive OSNR denominator {den}", channel=i
        )
    return float(u[i]) / den


def osnr_all(u: np.ndarray, sys: SystemMatrix) -> np.ndarray:
    return np.array([osnr(u, sys, i) for i in range(sys.size)])


def osnr_db(u: np.ndarray, sys: SystemMatrix, i: int) -> float:
    val = osnr(u, sys, i)
    if val <= 0:
        raise EvaluationError(f"channel {i}: non-positive OSNR {val}", channel=i)
    return linear_to_db(val)


def interference(u: np.ndarray, sys: SystemMatrix, i: int) -> float:
    """Noise seen by channel i excluding its own coupled power."""
    u = np.asarray(u, dtype=float)
    return sys.n0[i] + float(np.dot(sys.gamma[i], u)) - sys.gamma[i, i] * float(u[i])


def player_cost(i: int, u: np.ndarray, sys: SystemMatrix, params: PlayerParams) -> float:
    """Pricing-minus-utility cost of a game player at the power profile u."""
    x = interference(u, sys, i)
    if x <= 0:
        raise EvaluationError(f"channel {i}: non-positive interference {x}", channel=i)
    arg = 1.0 + params.a * float(u[i]) / x
    if arg <= 0:
        raise EvaluationError(f"channel {i}: non-positive log argument {arg}", channel=i)
    return params.alpha * float(u[i]) - params.beta * math.log(arg)


def assemble(sys: SystemMatrix, partition: ServicePartition) -> StackedSystem:
    """Build the player equality system, the seeker inequality system, and
    their vertical concatenation."""
    n_ch = sys.size
    if partition.size != n_ch:
        raise UsageError(
            f"partition covers {partition.size} channels, matrix has {n_ch}"
        )
    players = partition.players
    seekers = partition.seekers

    gamma_tilde = np.empty((len(players), n_ch))
    b_tilde = np.empty(len(players))
    for r, i in enumerate(players):
        p = partition.roles[i]
        gamma_tilde[r] = sys.gamma[i]
        gamma_tilde[r, i] = p.a
        b_tilde[r] = p.a * p.beta / p.alpha - sys.n0[i]

    gamma_hat = np.empty((len(seekers), n_ch))
    b_hat = np.empty(len(seekers))
    for r, i in enumerate(seekers):
        s = partition.roles[i]
        gamma_hat[r] = -s.gamma * sys.gamma[i]
        gamma_hat[r, i] = 1.0 - s.gamma * sys.gamma[i, i]
        b_hat[r] = s.gamma * sys.n0[i]

    gamma_bar = np.vstack([gamma_tilde, gamma_hat])
    b_bar = np.concatenate([b_tilde, b_hat])
    return StackedSystem(
        gamma_tilde=gamma_tilde,
        b_tilde=b_tilde,
        gamma_hat=gamma_hat,
        b_hat=b_hat,
        gamma_bar=gamma_bar,
        b_bar=b_bar,
        player_index=tuple(players),
        seeker_index=tuple(seekers),
    )
