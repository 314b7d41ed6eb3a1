"""
Seeded random digraph models: directed Watts-Strogatz, directed
Erdos-Renyi and the two-weight scale-free model.

Every generator draws from numpy's Philox bit generator keyed by the
spec's seed, so an identical GenSpec yields a bitwise-identical edge list
on every platform. Generated graphs are not guaranteed to be strongly
connected; callers reduce them with largest_scc.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from src.config import Config
from src.core.digraph import Digraph, build_digraph
from src.exceptions import ParameterError

logger = logging.getLogger(__name__)

ModelType = Literal['ws', 'er', 'sf']

MODELS = ('ws', 'er', 'sf')

# per-model default for the probability flag --p
DEFAULT_P = {'ws': 0.5, 'er': 0.15}


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one generated network."""
    model: ModelType
    n: int
    seed: int = 0
    K: int = 10
    p: Optional[float] = None
    b: float = 1.0
    m: int = 300
    alpha_out: float = 0.5
    alpha_in: float = 0.5

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"Unknown generator model: {self.model}. Valid options: {list(MODELS)}")
        if self.p is None and self.model in DEFAULT_P:
            object.__setattr__(self, 'p', DEFAULT_P[self.model])
        self.validate()

    def validate(self) -> None:
        """
        Check parameter ranges.

        Raises:
            ParameterError: If any parameter is out of range
        """
        if self.n < 3:
            raise ParameterError(f"n must be >= 3, got {self.n}")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.model == 'ws':
            if not 1 <= self.K < self.n / 2:
                raise ParameterError(f"K must satisfy 1 <= K < n/2, got K={self.K}, n={self.n}")
            _check_unit('p', self.p, allow_zero=True)
            _check_unit('b', self.b, allow_zero=True)
        elif self.model == 'er':
            _check_unit('p', self.p, allow_zero=False)
        else:
            if self.m < 1:
                raise ParameterError(f"m must be >= 1, got {self.m}")
            for name in ('alpha_out', 'alpha_in'):
                value = getattr(self, name)
                if not 0 <= value < 1:
                    raise ParameterError(f"{name} must lie in [0, 1), got {value}")

    @property
    def label(self) -> str:
        """Network label used in reports, e.g. 'ws(n=50,K=10,p=0.5,b=1,seed=7)'."""
        if self.model == 'ws':
            params = f"n={self.n},K={self.K},p={self.p:g},b={self.b:g}"
        elif self.model == 'er':
            params = f"n={self.n},p={self.p:g}"
        else:
            params = f"n={self.n},m={self.m},a_out={self.alpha_out:g},a_in={self.alpha_in:g}"
        return f"{self.model}({params},seed={self.seed})"

    @classmethod
    def from_args(cls, args) -> 'GenSpec':
        """Build a spec from parsed CLI flags (--gen, --n, --K, --p, ...)."""
        values = {'model': args.gen, 'n': args.n, 'seed': args.seed}
        for name in ('K', 'p', 'b', 'm', 'alpha_out', 'alpha_in'):
            value = getattr(args, name, None)
            if value is not None:
                values[name] = value
        return cls(**values)

    def to_args(self) -> list[str]:
        """CLI flags reproducing this spec."""
        args = ['--gen', self.model, '--n', str(self.n)]
        if self.model == 'ws':
            args += ['--K', str(self.K), '--p', repr(self.p), '--b', repr(self.b)]
        elif self.model == 'er':
            args += ['--p', repr(self.p)]
        else:
            args += ['--m', str(self.m), '--alpha-out', repr(self.alpha_out),
                     '--alpha-in', repr(self.alpha_in)]
        return args + ['--seed', str(self.seed)]


def _check_unit(name: str, value: float, allow_zero: bool) -> None:
    low_ok = value >= 0 if allow_zero else value > 0
    if not (low_ok and value <= 1):
        interval = '[0, 1]' if allow_zero else '(0, 1]'
        raise ParameterError(f"{name} must lie in {interval}, got {value}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def degree_exponent(alpha: float) -> float:
    """Degree-distribution exponent gamma = (1 + alpha) / alpha of the SF model."""
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1) for a finite exponent, got {alpha}")
    return (1.0 + alpha) / alpha


def gen_directed_ws(n: int, K: int, p: float, b: float, seed: int) -> Digraph:
    """
    Directed Watts-Strogatz small-world digraph.

    Vertices sit on a ring. Lap l = 1..K visits every vertex u in
    counterclockwise order and takes the arc towards u + l. With probability
    p its far end is replaced by a uniform vertex; with probability b the arc
    leaves u, otherwise it enters u. A self-loop or an arc already present
    is resampled uniformly, at most WS_RETRY_FACTOR * n times.

    Returns:
        Digraph with exactly n*K unit-weight arcs

    Raises:
        ParameterError: On out-of-range parameters or exhausted resampling
    """
    GenSpec('ws', n=n, K=K, p=p, b=b, seed=seed)
    rng = _rng(seed)
    arcs: set[tuple[int, int]] = set()
    ordered: list[tuple[int, int, float]] = []
    attempts = Config.WS_RETRY_FACTOR * n
    resampled = 0

    for lap in range(1, K + 1):
        for u in range(n):
            other = (u + lap) % n
            if rng.random() < p:
                other = int(rng.integers(n))
            outward = rng.random() < b

            def arc(v: int) -> tuple[int, int]:
                return (u, v) if outward else (v, u)

            tries = 0
            while other == u or arc(other) in arcs:
                if tries >= attempts:
                    raise ParameterError(
                        f"No free arc for vertex {u} after {attempts} attempts (n={n}, K={K})"
                    )
                other = int(rng.integers(n))
                tries += 1
            resampled += tries
            arcs.add(arc(other))
            ordered.append((*arc(other), 1.0))

    if resampled:
        logger.debug(f"WS generator resampled {resampled} colliding arc end(s)")
    return build_digraph(ordered, vertices=range(n))


def gen_directed_er(n: int, p: float, seed: int) -> Digraph:
    """
    Directed Erdos-Renyi digraph: each ordered pair i != j is an arc with probability p.

    Raises:
        ParameterError: If p is outside (0, 1]
    """
    GenSpec('er', n=n, p=p, seed=seed)
    rng = _rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        logger.warning(f"ER(n={n}, p={p}) drew no arcs for seed {seed}")
    return build_digraph([(int(i), int(j), 1.0) for i, j in zip(rows, cols)], vertices=range(n))


def gen_directed_sf(n: int, m: int, a_out: float, a_in: float, seed: int) -> Digraph:
    """
    Two-weight scale-free digraph.

    Vertex i = 1..n carries out-weight i^-a_out and in-weight i^-a_in. Each
    of m draws picks a source by out-weight and a target by in-weight,
    redrawing the pair while source == target. Repeated arcs merge into one
    unit-weight arc, so the result has at most m arcs; the number merged is
    reported in `arcs_merged`.
    """
    GenSpec('sf', n=n, m=m, alpha_out=a_out, alpha_in=a_in, seed=seed)
    rng = _rng(seed)
    ranks = np.arange(1, n + 1, dtype=np.float64)
    p_out = ranks ** -a_out
    p_out /= p_out.sum()
    p_in = ranks ** -a_in
    p_in /= p_in.sum()

    triples = []
    for _ in range(m):
        i = j = 0
        while i == j:
            i = int(rng.choice(n, p=p_out))
            j = int(rng.choice(n, p=p_in))
        triples.append((i, j, 1.0))

    g = build_digraph(triples, vertices=range(n), binarize=True)
    logger.debug(f"SF generator: {m} draws, {g.m} distinct arcs, {g.arcs_merged} merged")
    return g


def generate(spec: GenSpec) -> Digraph:
    """
    Generate the digraph described by a GenSpec.

    Raises:
        ParameterError: If the generator parameters are invalid
    """
    if spec.model == 'ws':
        return gen_directed_ws(spec.n, spec.K, spec.p, spec.b, spec.seed)
    elif spec.model == 'er':
        return gen_directed_er(spec.n, spec.p, spec.seed)
    elif spec.model == 'sf':
        return gen_directed_sf(spec.n, spec.m, spec.alpha_out, spec.alpha_in, spec.seed)
    else:
        raise ParameterError(f"Unsupported generator model: {spec.model}")
