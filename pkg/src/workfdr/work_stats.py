"""Work statistics of the discrete two-point-measurement (TPM) protocol.

Per-step work distributions (exact 16-term enumeration and closed forms),
N-fold convolution, cumulants, the Jarzynski identity check, and the
fluctuation-dissipation correction with its small-angle predictions.

Sign convention: the correction is reported as

    Q = (beta/2) * Var(W) - <W_diss>,

which is zero for classical (coherence-free) driving, non-negative in the
slow-driving regime, and decomposes into a local-coherence term with
temperature profile f(beta) plus an entanglement term with profile g(beta).

Work values are exact small integers (the level splitting is the unit).
Distribution probabilities are carried in extended precision
(numpy.longdouble): Q sits up to ~10^4 below the cumulants it is a difference
of, so plain doubles in the enumeration pipeline would already spend the
1e-12 relative budget on representation noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDimensionError, ValidationError
from .linalg import check_unitary
from .model import QubitHamiltonian, rotation_x

PROB_CLAMP = 1e-14
NORMALIZATION_TOL = 1e-12

_LD = np.longdouble


@dataclass(frozen=True)
class WorkDistribution:
    """Finite distribution over integer work values, strictly increasing support."""

    support: tuple[int, ...]
    probs: tuple

    @classmethod
    def from_weights(cls, weights: dict) -> "WorkDistribution":
        """Build from a work -> probability map; clamps sub-roundoff noise, drops zeros."""
        support = []
        probs = []
        for w in sorted(weights):
            p = _LD(weights[w])
            if p < -PROB_CLAMP or p > 1.0 + PROB_CLAMP:
                raise ValidationError(f"probability {float(p)!r} at work {w} is outside [0, 1]")
            p = min(max(p, _LD(0.0)), _LD(1.0))
            if p == 0.0:
                continue
            support.append(int(w))
            probs.append(p)
        total = np.sum(np.array(probs, dtype=_LD))
        if abs(float(total) - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"probabilities sum to {float(total)!r}, expected 1")
        return cls(support=tuple(support), probs=tuple(probs))

    @classmethod
    def point_mass(cls, value: int = 0) -> "WorkDistribution":
        return cls(support=(int(value),), probs=(_LD(1.0),))

    def prob(self, w: int):
        """Probability of work value w (0 when w is off-support)."""
        try:
            return self.probs[self.support.index(w)]
        except ValueError:
            return _LD(0.0)


@dataclass(frozen=True)
class QReport:
    """Cumulants of the N-step work, with the FDR correction Q = (beta/2)Var - W_diss."""

    mean_work: float
    var_work: float
    delta_f: float
    w_diss: float
    q_value: float
    beta: float
    n_steps: int
    small_angle_prediction: float | None = None


def _check_beta(beta: float) -> float:
    if not math.isfinite(beta):
        raise ValidationError(f"beta must be finite, got {beta!r}")
    if beta < 0.0:
        raise ValidationError(f"beta must be non-negative, got {beta}")
    return float(beta)


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value!r}")


def f_beta(beta: float) -> float:
    """Local-coherence temperature profile beta/2 - tanh(beta/2); zero at beta = 0."""
    beta = _check_beta(beta)
    return beta / 2.0 - math.tanh(beta / 2.0)


def g_beta(beta: float) -> float:
    """Entanglement temperature profile beta/(1 + sech(beta)) - tanh(beta/2)."""
    beta = _check_beta(beta)
    sech = 2.0 * math.exp(-beta) / (1.0 + math.exp(-2.0 * beta))
    return beta / (1.0 + sech) - math.tanh(beta / 2.0)


def _thermal_populations(beta: float, hamiltonian: QubitHamiltonian) -> np.ndarray:
    weights = np.exp(-_LD(beta) * np.asarray(hamiltonian.energies, dtype=_LD))
    return weights / weights.sum()


def _distribution_from_transition(populations, transition, energies) -> WorkDistribution:
    # TPM enumeration: first outcome from the thermal populations, second from
    # the Born matrix; equal work values from degenerate outcome pairs aggregate.
    weights: dict[int, object] = {}
    dim = len(energies)
    for first in range(dim):
        for second in range(dim):
            w = int(round(energies[second] - energies[first]))
            weights[w] = weights.get(w, _LD(0.0)) + populations[first] * transition[second, first]
    return WorkDistribution.from_weights(weights)


def step_distribution_single(beta: float, delta_theta: float) -> WorkDistribution:
    """Work distribution of one single-qubit step, by enumeration of both outcomes."""
    beta = _check_beta(beta)
    hamiltonian = QubitHamiltonian.single()
    transition = np.abs(rotation_x(delta_theta)).astype(_LD) ** 2
    return _distribution_from_transition(
        _thermal_populations(beta, hamiltonian), transition, hamiltonian.energies
    )


def step_distribution_bipartite(beta: float, quench: np.ndarray, entangler: np.ndarray) -> WorkDistribution:
    """Work distribution of one two-qubit step, by exhaustive 16-pair enumeration.

    Parameters
    ----------
    beta : float
        Inverse bath temperature, >= 0.
    quench : ndarray
        4x4 unitary rotating the local Hamiltonians.
    entangler : ndarray
        4x4 unitary applied to the state between the two measurements.

    The Born amplitudes are taken from quench @ entangler, the first outcome
    from the diagonal two-qubit Gibbs populations; outcome pairs with equal
    work (the degenerate |01>/|10> levels) are aggregated.
    """
    beta = _check_beta(beta)
    if np.shape(quench) != (4, 4) or np.shape(entangler) != (4, 4):
        raise UnsupportedDimensionError("bipartite step needs 4x4 quench and entangler")
    quench = check_unitary(quench)
    entangler = check_unitary(entangler)
    hamiltonian = QubitHamiltonian.two_qubit()
    transition = np.abs(quench @ entangler).astype(_LD) ** 2
    return _distribution_from_transition(
        _thermal_populations(beta, hamiltonian), transition, hamiltonian.energies
    )


def closed_form_distribution_cartan(
    beta: float, delta_theta: float, c1: float, c2: float
) -> WorkDistribution:
    """Closed-form two-qubit step distribution for the xx/yy/zz entangler.

    Depends on the entangler only through c1 - c2; P(0) is obtained by
    normalization. Written with exp(-beta) factors so it is stable at any beta.
    """
    beta = _check_beta(beta)
    _check_finite(delta_theta=delta_theta, c1=c1, c2=c2)
    w = np.exp(-_LD(beta))
    denom = (1 + w) ** 2
    half = _LD(delta_theta) / 2
    # non-degenerate channel weight: cos^4(dth/2) sin^2(c1-c2) + sin^4(dth/2) cos^2(c1-c2)
    k2 = np.cos(half) ** 4 * np.sin(_LD(c1) - _LD(c2)) ** 2 + np.sin(half) ** 4 * np.cos(_LD(c1) - _LD(c2)) ** 2
    sin_sq = np.sin(_LD(delta_theta)) ** 2
    weights = {
        -2: w * w * k2 / denom,
        -1: w * sin_sq / (2 * (1 + w)),
        1: sin_sq / (2 * (1 + w)),
        2: k2 / denom,
    }
    weights[0] = 1 - sum(weights.values())
    return WorkDistribution.from_weights(weights)


def closed_form_distribution_separable(
    beta: float, delta_theta: float, c: float, m: float
) -> WorkDistribution:
    """Closed-form two-qubit step distribution for a separable X-Z-X entangler.

    The Z angles drop out of the probabilities (they only add phases to
    computational-basis columns before the X structure acts), so only the two
    X angles c and m enter; P(0) is obtained by normalization.
    """
    beta = _check_beta(beta)
    _check_finite(delta_theta=delta_theta, c=c, m=m)
    w = np.exp(-_LD(beta))
    denom = (1 + w) ** 2
    dth = _LD(delta_theta)
    sc, cc = np.sin((_LD(c) + dth) / 2), np.cos((_LD(c) + dth) / 2)
    sm, cm = np.sin((_LD(m) + dth) / 2), np.cos((_LD(m) + dth) / 2)
    sc2, cc2 = np.sin(_LD(c) / 2), np.cos(_LD(c) / 2)
    sm2, cm2 = np.sin(_LD(m) / 2), np.cos(_LD(m) / 2)
    sdt, sdt_half, cdt_half = np.sin(dth), np.sin(dth / 2), np.cos(dth / 2)
    p_minus_1 = (
        w * w * sc**2 * cm**2
        + w * cc**2 * sm**2
        + w * w * cc**2 * sm**2
        + w * sc * cm * (-0.5 * sc2 * sm2 * sdt + sc2 * cm2 * cdt_half**2)
        + w * sc * cm * cc2 * sdt_half * cm
    ) / denom
    p_plus_1 = (
        w * sc**2 * cm**2
        + sc**2 * cm**2
        + cc**2 * sm**2
        + w * cc * sm * (-0.5 * sc2 * sm2 * sdt - sc2 * cm2 * sdt_half**2)
        + w * cc * sm * cc2 * cdt_half * sm
    ) / denom
    weights = {
        -2: w * w * sc**2 * sm**2 / denom,
        -1: p_minus_1,
        1: p_plus_1,
        2: sc**2 * sm**2 / denom,
    }
    weights[0] = 1 - sum(weights.values())
    return WorkDistribution.from_weights(weights)


def _moments_extended(dist: WorkDistribution):
    support = np.asarray(dist.support, dtype=_LD)
    probs = np.asarray(dist.probs, dtype=_LD)
    mean = np.sum(support * probs)
    second = np.sum(support * support * probs)
    return mean, second - mean * mean


def moments(dist: WorkDistribution) -> tuple[float, float]:
    """First two cumulants (mean, variance) by direct summation."""
    mean, variance = _moments_extended(dist)
    return float(mean), float(variance)


def convolve_n(step: WorkDistribution, n: int) -> WorkDistribution:
    """Exact n-fold convolution of an integer-support distribution (n = 0: point mass)."""
    if n < 0 or n != int(n):
        raise ValidationError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return WorkDistribution.point_mass(0)
    lo, hi = step.support[0], step.support[-1]
    dense = np.zeros(hi - lo + 1, dtype=_LD)
    for w, p in zip(step.support, step.probs):
        dense[w - lo] = p
    result = dense
    for _ in range(n - 1):
        result = np.convolve(result, dense)
    return WorkDistribution.from_weights({n * lo + k: p for k, p in enumerate(result)})


def distribution_distance(a: WorkDistribution, b: WorkDistribution) -> float:
    """Largest absolute probability difference over the union of supports."""
    values = set(a.support) | set(b.support)
    return float(max(abs(a.prob(w) - b.prob(w)) for w in values))


def jarzynski_check(dist: WorkDistribution, beta: float) -> float:
    """<exp(-beta*w)>; equals 1 for every spectrum-preserving protocol step.

    Terms are evaluated as exp(log p - beta*w) so deep convolution tails with
    large |beta*w| neither overflow nor produce inf*0.
    """
    beta = _check_beta(beta)
    support = np.asarray(dist.support, dtype=_LD)
    probs = np.asarray(dist.probs, dtype=_LD)
    return float(np.sum(np.exp(np.log(probs) - _LD(beta) * support)))


def q_correction(
    dist: WorkDistribution, beta: float, n: int, delta_f: float = 0.0
) -> QReport:
    """FDR correction of the N-step protocol built on a per-step distribution.

    Uses cumulant additivity of independent identical steps:
    mean and variance of the total work are n times the per-step values, and
    Q = (beta/2) * n * Var(w) - (n * <w> - delta_f).

    delta_f must be 0: every unitary in scope preserves the spectrum, so the
    free-energy change vanishes by construction.
    """
    beta = _check_beta(beta)
    if n <= 0 or n != int(n):
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if delta_f != 0.0:
        raise ValidationError("delta_f must be 0 for spectrum-preserving protocols")
    mean_step, var_step = _moments_extended(dist)
    mean_work = n * mean_step
    var_work = n * var_step
    w_diss = mean_work - _LD(delta_f)
    q_value = (_LD(beta) / 2) * var_work - w_diss
    return QReport(
        mean_work=float(mean_work),
        var_work=float(var_work),
        delta_f=float(delta_f),
        w_diss=float(w_diss),
        q_value=float(q_value),
        beta=beta,
        n_steps=int(n),
    )


def q_single_exact(n: int, beta: float, delta_theta: float) -> float:
    """Closed-form single-qubit correction N*sin^2(dth/2)*[(b/2)(1 - sin^2(dth/2)tanh^2(b/2)) - tanh(b/2)]."""
    beta = _check_beta(beta)
    s = math.sin(delta_theta / 2.0) ** 2
    t = math.tanh(beta / 2.0)
    return n * s * ((beta / 2.0) * (1.0 - s * t * t) - t)


def q_single_smallangle(n: int, beta: float, delta_theta: float) -> float:
    """Leading small-angle single-qubit correction N*(dth^2/4)*f(beta)."""
    return n * delta_theta**2 * f_beta(beta) / 4.0


def q_bipartite_smallangle_rxx(n: int, beta: float, delta_theta: float, delta_phi: float) -> float:
    """Small-angle two-qubit correction N*[(dth^2/2) f + (dphi^2/2) g] for the xx entangler."""
    return n * (delta_theta**2 / 2.0 * f_beta(beta) + delta_phi**2 / 2.0 * g_beta(beta))


def q_bipartite_smallangle_cartan(n: int, beta: float, delta_theta: float, c1: float, c2: float) -> float:
    """Small-angle two-qubit correction N*[(dth^2/2) f + 2(c1-c2)^2 g]; independent of c3."""
    return n * (delta_theta**2 / 2.0 * f_beta(beta) + 2.0 * (c1 - c2) ** 2 * g_beta(beta))


def q_separable_smallangle(n: int, beta: float, delta_theta: float, c: float, m: float) -> float:
    """Small-angle correction N*f(beta)*[(c+dth)^2/4 + (m+dth)^2/4]; no g term for separable driving."""
    return n * f_beta(beta) * ((c + delta_theta) ** 2 / 4.0 + (m + delta_theta) ** 2 / 4.0)
