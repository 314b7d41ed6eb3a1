"""
Monte Carlo random-walk oracle.

Independent estimates of escape probabilities, hitting, commute, return and
detour times, and generalized voltages, used to test the algebraic
identities of the resistance module. Walkers are simulated in vectorized
batches; batch b draws from its own Philox stream spawned from the user
seed, so every estimate depends only on (seed, walks).
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np
import numpy.typing as npt
from scipy import sparse

from src.config import Config
from src.core.digraph import Digraph, require_strongly_connected, transition_matrix
from src.exceptions import ParameterError, VertexNotFoundError, WalkLimitExceededError

logger = logging.getLogger(__name__)

Target = Union[int, Iterable[int]]


@dataclass(frozen=True)
class WalkEstimate:
    """Sample mean of a walk statistic with its standard error."""
    mean: float
    std_error: float
    samples: int
    quantity: str
    valid: bool = True

    def within(self, value: float, sigmas: Optional[float] = None) -> bool:
        """True if `value` lies within `sigmas` standard errors of the mean."""
        sigmas = Config.STOCHASTIC_SIGMAS if sigmas is None else sigmas
        slack = 1e-9 * max(1.0, abs(value))
        return abs(self.mean - value) <= sigmas * self.std_error + slack

    def require_valid(self) -> 'WalkEstimate':
        if not self.valid:
            raise WalkLimitExceededError(
                f"{self.quantity}: step cap reached after {self.samples} completed walks"
            )
        return self


class WalkSampler:
    """
    Next-step sampler by inverse CDF over the cumulative rows of P.

    Row s of P is stored as keys s + cumsum(P[s]) (the last key exactly
    s + 1), so one searchsorted call over all rows moves every walker.
    s + u can round up to s + 1 for u close to 1, so positions are clamped
    to the row of s.
    """

    def __init__(self, g: Digraph):
        P = sparse.csr_matrix(transition_matrix(g))
        P.sort_indices()
        self.n = g.n
        self.columns = P.indices.astype(np.intp)
        self.indptr = P.indptr.astype(np.intp)
        keys = np.empty(P.nnz, dtype=np.float64)
        for s in range(g.n):
            start, end = P.indptr[s], P.indptr[s + 1]
            keys[start:end] = s + np.cumsum(P.data[start:end])
            keys[end - 1] = s + 1.0
        self.keys = keys

    def step(self, states: npt.NDArray[np.intp], rng: np.random.Generator) -> npt.NDArray[np.intp]:
        u = rng.random(states.shape[0])
        positions = np.searchsorted(self.keys, states + u, side='right')
        positions = np.clip(positions, self.indptr[states], self.indptr[states + 1] - 1)
        return self.columns[positions]


def _mask(n: int, target: Target) -> npt.NDArray[np.bool_]:
    members = [target] if isinstance(target, (int, np.integer)) else list(target)
    if not members:
        raise ParameterError("Target set must be nonempty")
    mask = np.zeros(n, dtype=bool)
    for v in members:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
            raise VertexNotFoundError(f"Vertex index {v!r} out of range 0..{n - 1}")
        mask[v] = True
    return mask


def _label(name: str, i: int, target: Target) -> str:
    kind = 'j' if isinstance(target, (int, np.integer)) else 'X'
    return f"{name}(i,{kind})"


def _batches(walks: int, seed: int):
    if walks < 1:
        raise ParameterError(f"walks must be >= 1, got {walks}")
    size = Config.WALK_BATCH
    count = -(-walks // size)
    children = np.random.SeedSequence(seed).spawn(count)
    for b, child in enumerate(children):
        yield min(size, walks - b * size), np.random.Generator(np.random.Philox(child))


def _simulate_phases(
    g: Digraph,
    start: int,
    phases: list[tuple[npt.NDArray[np.bool_], bool]],
    walks: int,
    seed: int,
) -> tuple[npt.NDArray[np.float64], bool]:
    """
    Times at which walks from `start` complete every phase in order.

    A phase (mask, zero_ok) completes at the first time the walker stands
    in `mask`; time 0 counts only when zero_ok is set.

    Returns:
        (completion times of finished walks, True if no cap was hit)
    """
    require_strongly_connected(g)
    sampler = WalkSampler(g)
    budget = Config.WALK_STEP_CAP
    finished = []
    complete = True

    for size, rng in _batches(walks, seed):
        states = np.full(size, start, dtype=np.intp)
        phase = np.zeros(size, dtype=np.intp)
        active = np.arange(size)
        t = 0
        while active.size:
            # advance phases that complete at the current position
            for p, (mask, zero_ok) in enumerate(phases):
                if t == 0 and not zero_ok:
                    continue
                hit = (phase[active] == p) & mask[states[active]]
                phase[active[hit]] += 1
            done = phase[active] == len(phases)
            if done.any():
                finished.append(np.full(int(done.sum()), t, dtype=np.float64))
                active = active[~done]
            if not active.size:
                break
            if budget < active.size:
                complete = False
                break
            budget -= active.size
            states[active] = sampler.step(states[active], rng)
            t += 1
        if not complete:
            break

    times = np.concatenate(finished) if finished else np.empty(0)
    return times, complete


def _simulate_race(
    g: Digraph,
    start: int,
    win: npt.NDArray[np.bool_],
    lose: npt.NDArray[np.bool_],
    zero_ok: bool,
    walks: int,
    seed: int,
) -> tuple[npt.NDArray[np.float64], bool]:
    """
    Outcomes (1 win, 0 lose) of walks from `start` absorbed by `win` or `lose`.

    Returns:
        (outcomes of finished walks, True if no cap was hit)
    """
    require_strongly_connected(g)
    sampler = WalkSampler(g)
    budget = Config.WALK_STEP_CAP
    outcomes = []
    complete = True

    for size, rng in _batches(walks, seed):
        states = np.full(size, start, dtype=np.intp)
        active = np.arange(size)
        t = 0
        while active.size:
            if t > 0 or zero_ok:
                won = win[states[active]]
                lost = lose[states[active]] & ~won
                if won.any() or lost.any():
                    outcomes.append(np.ones(int(won.sum())))
                    outcomes.append(np.zeros(int(lost.sum())))
                    active = active[~(won | lost)]
            if not active.size:
                break
            if budget < active.size:
                complete = False
                break
            budget -= active.size
            states[active] = sampler.step(states[active], rng)
            t += 1
        if not complete:
            break

    values = np.concatenate(outcomes) if outcomes else np.empty(0)
    return values, complete


def _estimate(values: npt.NDArray[np.float64], complete: bool, quantity: str) -> WalkEstimate:
    samples = int(values.size)
    if not complete:
        logger.warning(f"{quantity}: walk step cap reached, estimate from {samples} walks is invalid")
    if samples == 0:
        return WalkEstimate(mean=float('nan'), std_error=float('nan'), samples=0,
                            quantity=quantity, valid=False)
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return WalkEstimate(mean=mean, std_error=std_error, samples=samples,
                        quantity=quantity, valid=complete)


def estimate_escape_probability(g: Digraph, i: int, target: Target, walks: int, seed: int) -> WalkEstimate:
    """
    P_es(i, target): fraction of walks from i reaching target before returning to i.

    Raises:
        ParameterError: If i belongs to target
    """
    mask = _mask(g.n, target)
    home = _mask(g.n, i)
    if mask[i]:
        raise ParameterError("Start vertex must not belong to the target")
    values, complete = _simulate_race(g, i, mask, home, False, walks, seed)
    return _estimate(values, complete, _label('P_es', i, target))


def estimate_voltage(g: Digraph, k: int, i: int, j: Target, walks: int, seed: int) -> WalkEstimate:
    """
    Generalized voltage phi_{i,j}(k): probability a walk from k visits i before j.

    Raises:
        ParameterError: If i belongs to j
    """
    first = _mask(g.n, i)
    other = _mask(g.n, j)
    _mask(g.n, k)
    if other[i]:
        raise ParameterError("Vertex i must not belong to j")
    values, complete = _simulate_race(g, k, first, other, True, walks, seed)
    return _estimate(values, complete, _label('phi', i, j))


def estimate_hitting_time(g: Digraph, i: int, j: int, walks: int, seed: int) -> WalkEstimate:
    """H(i, j): mean steps for a walk from i to first reach j (i != j)."""
    if i == j:
        raise ParameterError("Hitting time needs two distinct vertices")
    _mask(g.n, i)
    times, complete = _simulate_phases(g, i, [(_mask(g.n, j), False)], walks, seed)
    return _estimate(times, complete, 'H(i,j)')


def estimate_group_hitting_time(g: Digraph, i: int, X: Iterable[int], walks: int, seed: int) -> WalkEstimate:
    """H(i, X): mean steps for a walk from i to first reach X (0 if i is in X)."""
    _mask(g.n, i)
    times, complete = _simulate_phases(g, i, [(_mask(g.n, X), True)], walks, seed)
    return _estimate(times, complete, 'H(i,X)')


def estimate_commute_time(g: Digraph, i: int, target: Target, walks: int, seed: int) -> WalkEstimate:
    """
    C(i, target): mean steps to reach target from i and then return to i.

    Raises:
        ParameterError: If i belongs to target
    """
    mask = _mask(g.n, target)
    if mask[i]:
        raise ParameterError("Start vertex must not belong to the target")
    phases = [(mask, False), (_mask(g.n, i), False)]
    times, complete = _simulate_phases(g, i, phases, walks, seed)
    return _estimate(times, complete, _label('C', i, target))


def estimate_return_time(g: Digraph, i: int, walks: int, seed: int) -> WalkEstimate:
    """Mean first-return time to i (1 / pi_i by Kac's law)."""
    times, complete = _simulate_phases(g, i, [(_mask(g.n, i), False)], walks, seed)
    return _estimate(times, complete, 'T(i)')


def estimate_detour_time(g: Digraph, i: int, X: Iterable[int], j: int, walks: int, seed: int) -> WalkEstimate:
    """
    H(i, X, j): mean steps of a walk from i that stops at j only after touching X.

    Touching X at time 0 counts; stopping at j needs at least one step.
    """
    _mask(g.n, i)
    phases = [(_mask(g.n, X), True), (_mask(g.n, j), False)]
    times, complete = _simulate_phases(g, i, phases, walks, seed)
    return _estimate(times, complete, 'H(i,X,j)')
