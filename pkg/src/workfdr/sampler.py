"""Seeded Monte Carlo simulation of full N-step TPM trajectories.

Random streams are counter-based: a Philox generator keyed by the master seed,
with trajectory i owning counter blocks [i*B, (i+1)*B) where B = ceil(2N/4)
(one block yields four doubles) and draws ordered (step, outcome) with two
draws per step. Every trajectory is therefore reproducible in isolation, and
results depend only on (config, master_seed, trajectory count) -- never on
batching, scheduling, or worker count. Outcome sampling is inverse-CDF over at
most four outcomes, drawn from the Born amplitudes directly rather than from
the exact work-distribution pipeline, so statistical agreement with that
pipeline is an independent check.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .errors import ContractViolationError, ValidationError
from .linalg import check_unitary, identity, kron
from .model import (
    CartanCoefficients,
    QubitHamiltonian,
    SeparableXZXParams,
    cartan_entangler,
    gibbs_populations,
    rotation_x,
    rxx,
    separable_xzx,
)

BORN_NORMALIZATION_TOL = 1e-10
_DRAWS_PER_STEP = 2
_BATCH_SIZE = 8192

ENTANGLER_KINDS = ("none", "rxx", "cartan", "separable_xzx")


@dataclass(frozen=True)
class ProtocolConfig:
    """Two-qubit protocol description; angles are totals, per-step values are totals/n_steps."""

    beta: float
    n_steps: int
    total_theta: float
    entangler_kind: str = "none"
    total_phi: float = 0.0
    total_c1: float = 0.0
    total_c2: float = 0.0
    total_c3: float = 0.0
    total_c: float = 0.0
    total_l: float = 0.0
    total_m: float = 0.0
    total_n: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta < 0.0:
            raise ValidationError(f"beta must be finite and non-negative, got {self.beta!r}")
        if self.n_steps <= 0 or self.n_steps != int(self.n_steps):
            raise ValidationError(f"n_steps must be a positive integer, got {self.n_steps!r}")
        if self.entangler_kind not in ENTANGLER_KINDS:
            raise ValidationError(
                f"entangler_kind must be one of {ENTANGLER_KINDS}, got {self.entangler_kind!r}"
            )
        for name in ("total_theta", "total_phi", "total_c1", "total_c2", "total_c3",
                     "total_c", "total_l", "total_m", "total_n"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")

    @property
    def delta_theta(self) -> float:
        return self.total_theta / self.n_steps

    def step_quench(self) -> np.ndarray:
        u = rotation_x(self.delta_theta)
        return kron(u, u)

    def step_entangler(self) -> np.ndarray:
        n = self.n_steps
        if self.entangler_kind == "none":
            return identity(4)
        if self.entangler_kind == "rxx":
            return rxx(self.total_phi / n)
        if self.entangler_kind == "cartan":
            return cartan_entangler(
                CartanCoefficients(self.total_c1 / n, self.total_c2 / n, self.total_c3 / n)
            )
        return separable_xzx(
            SeparableXZXParams(self.total_c / n, self.total_l / n, self.total_m / n, self.total_n / n)
        )


@dataclass(frozen=True)
class SampleStats:
    """Monte Carlo work cumulants with standard errors and seed provenance."""

    n_trajectories: int
    mean_w: float
    var_w: float
    se_mean: float
    se_var: float
    q_estimate: float
    q_se: float
    master_seed: int


def _blocks_per_trajectory(n_steps: int) -> int:
    return (_DRAWS_PER_STEP * n_steps + 3) // 4


def trajectory_stream(master_seed: int, trajectory_index: int, n_steps: int) -> Generator:
    """Random stream positioned at the counter block owned by one trajectory."""
    if trajectory_index < 0:
        raise ValidationError(f"trajectory_index must be non-negative, got {trajectory_index}")
    bits = Philox(key=np.uint64(master_seed))
    bits.advance(trajectory_index * _blocks_per_trajectory(n_steps))
    return Generator(bits)


def _born_matrix(quench: np.ndarray, entangler: np.ndarray) -> np.ndarray:
    """Column-stochastic Born matrix T[second, first] = |<second|quench@entangler|first>|^2."""
    quench = check_unitary(quench)
    entangler = check_unitary(entangler)
    transition = np.abs(quench @ entangler) ** 2
    column_sums = transition.sum(axis=0)
    deviation = float(np.max(np.abs(column_sums - 1.0)))
    if deviation > BORN_NORMALIZATION_TOL:
        raise ContractViolationError(
            f"Born probabilities fail to normalize: max |sum - 1| = {deviation:.3e}"
        )
    return transition / column_sums


def _pick(cdf: np.ndarray, u: float) -> int:
    # inverse CDF with right-closed boundaries; clip guards u landing on cdf[-1]
    return int(min(np.count_nonzero(u >= cdf), len(cdf) - 1))


def sample_step(
    beta: float, quench: np.ndarray, entangler: np.ndarray, stream: Generator
) -> tuple[int, int, int]:
    """Draw one TPM step: thermal first outcome, Born second outcome, work difference."""
    hamiltonian = QubitHamiltonian.two_qubit() if np.shape(quench) == (4, 4) else QubitHamiltonian.single()
    populations = gibbs_populations(beta, hamiltonian)
    born = _born_matrix(quench, entangler)
    population_cdf = np.cumsum(populations)
    first = _pick(population_cdf, stream.random())
    second = _pick(np.cumsum(born[:, first]), stream.random())
    energies = hamiltonian.energies
    return first, second, int(round(energies[second] - energies[first]))


def run_protocol(config: ProtocolConfig, trajectory_index: int, master_seed: int) -> int:
    """Total work of one trajectory: n_steps i.i.d. TPM steps (thermal reset between steps)."""
    quench = config.step_quench()
    entangler = config.step_entangler()
    stream = trajectory_stream(master_seed, trajectory_index, config.n_steps)
    total = 0
    for _ in range(config.n_steps):
        _, _, work = sample_step(config.beta, quench, entangler, stream)
        total += work
    return total


def _simulate_batch(
    master_seed: int,
    start: int,
    count: int,
    n_steps: int,
    population_cdf: np.ndarray,
    born_cdf_rows: np.ndarray,
    energies: np.ndarray,
) -> np.ndarray:
    """Integer total work for trajectories [start, start+count), vectorized."""
    blocks = _blocks_per_trajectory(n_steps)
    bits = Philox(key=np.uint64(master_seed))
    bits.advance(start * blocks)
    uniforms = Generator(bits).random(count * 4 * blocks).reshape(count, 4 * blocks)
    uniforms = uniforms[:, : _DRAWS_PER_STEP * n_steps].reshape(count, n_steps, _DRAWS_PER_STEP)
    first = np.minimum(
        (uniforms[:, :, 0][..., None] >= population_cdf).sum(axis=-1), len(population_cdf) - 1
    )
    row_cdf = born_cdf_rows[first]
    second = np.minimum(
        (uniforms[:, :, 1][..., None] >= row_cdf).sum(axis=-1), born_cdf_rows.shape[1] - 1
    )
    return (energies[second] - energies[first]).sum(axis=1)


def estimate(
    config: ProtocolConfig,
    n_trajectories: int,
    master_seed: int,
    workers: int = 1,
) -> SampleStats:
    """Monte Carlo estimate of the N-step work cumulants and the FDR correction.

    Parameters
    ----------
    config : ProtocolConfig
        Protocol to simulate.
    n_trajectories : int
        Number of independent trajectories, >= 2.
    master_seed : int
        Seed of the counter-based stream family.
    workers : int
        Thread count for batch processing. Batches have a fixed size and the
        reduction is over exact integer power sums, so the result is identical
        for any worker count.

    Returns
    -------
    SampleStats
        Sample mean/variance of W with standard errors (variance SE via the
        fourth central moment), and q_estimate = (beta/2)*var - mean with a
        delta-method standard error that keeps the mean-variance covariance.
    """
    if n_trajectories < 2 or n_trajectories != int(n_trajectories):
        raise ValidationError(f"n_trajectories must be an integer >= 2, got {n_trajectories!r}")
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    hamiltonian = QubitHamiltonian.two_qubit()
    population_cdf = np.cumsum(gibbs_populations(config.beta, hamiltonian))
    born = _born_matrix(config.step_quench(), config.step_entangler())
    born_cdf_rows = np.cumsum(born, axis=0).T.copy()
    energies = np.asarray(hamiltonian.energies, dtype=np.int64)

    batches = [
        (start, min(_BATCH_SIZE, n_trajectories - start))
        for start in range(0, n_trajectories, _BATCH_SIZE)
    ]

    def power_sums(batch: tuple[int, int]) -> tuple[int, int, int, int]:
        start, count = batch
        w = _simulate_batch(
            master_seed, start, count, config.n_steps, population_cdf, born_cdf_rows, energies
        )
        w2 = w * w
        return (int(w.sum()), int(w2.sum()), int((w2 * w).sum()), int((w2 * w2).sum()))

    if workers == 1:
        partials = [power_sums(batch) for batch in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(power_sums, batches))

    s1 = sum(p[0] for p in partials)
    s2 = sum(p[1] for p in partials)
    s3 = sum(p[2] for p in partials)
    s4 = sum(p[3] for p in partials)

    n = n_trajectories
    mean = s1 / n
    sample_var = (s2 - s1 * s1 / n) / (n - 1)
    m3 = (s3 - 3.0 * mean * s2 + 2.0 * n * mean**3) / n
    m4 = (s4 - 4.0 * mean * s3 + 6.0 * mean**2 * s2 - 3.0 * n * mean**4) / n
    se_mean = math.sqrt(max(sample_var, 0.0) / n)
    var_of_var = max(m4 - (n - 3) / (n - 1) * sample_var**2, 0.0) / n
    se_var = math.sqrt(var_of_var)
    half_beta = config.beta / 2.0
    q_estimate = half_beta * sample_var - mean
    q_var = max(
        half_beta**2 * var_of_var + max(sample_var, 0.0) / n - 2.0 * half_beta * m3 / n, 0.0
    )
    return SampleStats(
        n_trajectories=n,
        mean_w=mean,
        var_w=sample_var,
        se_mean=se_mean,
        se_var=se_var,
        q_estimate=q_estimate,
        q_se=math.sqrt(q_var),
        master_seed=int(master_seed),
    )
