"""Jump probabilities from potential increments.

Boltzmann weights put the walker at ``x +- dx`` with probability proportional
to ``exp(-beta V)``; written relative to the current site this is a logistic
function of the potential drop, so ``p_right`` stays inside ``(0, 1)`` for any
``dx``. The naive linear weight is kept for comparison and refuses to clamp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ProbabilityOutOfRange, StencilOutOfRange
from .force import SINGLE, TWO


@dataclass(frozen=True)
class JumpProbabilities:
    p_right: np.ndarray

    @property
    def p_left(self) -> np.ndarray:
        return 1.0 - self.p_right

    def __len__(self):
        return len(self.p_right)


def logistic(z):
    """``1 / (1 + exp(-z))`` without ever exponentiating a large positive number."""
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    out = np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return out if out.ndim else float(out)


def boltzmann_single(force_values, i: int, dx: float, beta: float) -> float:
    f = np.asarray(force_values, dtype=np.float64)
    return logistic(2.0 * beta * dx * f[i])


def boltzmann_two_point(force_values, i: int, dx: float, beta: float) -> float:
    f = np.asarray(force_values, dtype=np.float64)
    if not 1 <= i <= len(f) - 2:
        raise StencilOutOfRange(f"two-point weight at site {i} needs both neighbours")
    return logistic(0.5 * beta * dx * (f[i - 1] + 2.0 * f[i] + f[i + 1]))


def naive_linear(force_values, i: int, dx: float, beta: float) -> float:
    f = np.asarray(force_values, dtype=np.float64)
    p = 0.5 * (beta * f[i] * dx + 1.0)
    if not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRange(f"naive weight {p} at site {i} (beta*F*dx = {beta * f[i] * dx})")
    return float(p)


def _site_rules(rules, n: int) -> np.ndarray:
    if isinstance(rules, str):
        rules = [rules] * n
    rules = np.asarray(rules)
    if len(rules) != n:
        raise ValueError(f"need {n} quadrature rules, got {len(rules)}")
    if not np.all(np.isin(rules, (SINGLE, TWO))):
        raise ValueError(f"unknown quadrature rule in {set(rules.tolist())}")
    return rules


def boltzmann_exponent(force_values, dx: float, beta: float, rules, periodic: bool = False) -> np.ndarray:
    """Per-site argument of the logistic giving ``p_right``.

    Single-point sites use ``2 beta dx F_i``; two-point sites use
    ``(beta dx / 2)(F_{i-1} + 2 F_i + F_{i+1})``, with neighbours wrapped on a
    ring when ``periodic``.
    """
    f = np.asarray(force_values, dtype=np.float64)
    n = len(f)
    rules = _site_rules(rules, n)
    two = rules == TWO
    z = 2.0 * beta * dx * f
    if not two.any():
        return z
    if periodic:
        left, right = np.roll(f, 1), np.roll(f, -1)
    else:
        if two[0] or two[-1]:
            raise StencilOutOfRange("two-point weight requested at an end site without a ghost neighbour")
        left = np.concatenate(([f[0]], f[:-1]))
        right = np.concatenate((f[1:], [f[-1]]))
    z2 = 0.5 * beta * dx * (left + 2.0 * f + right)
    return np.where(two, z2, z)


def build_jump_probabilities(
    force_values, dx: float, beta: float, rules=TWO, *, weight: str = "boltzmann", periodic: bool = False
) -> JumpProbabilities:
    """Assemble ``p_right`` at every site; ``p_left`` is its complement.

    ``weight="naive"`` uses ``(beta F_i dx + 1)/2`` at every site regardless of
    ``rules`` and raises ProbabilityOutOfRange if any value leaves [0, 1].
    """
    f = np.asarray(force_values, dtype=np.float64)
    if weight == "boltzmann":
        return JumpProbabilities(np.asarray(logistic(boltzmann_exponent(f, dx, beta, rules, periodic))))
    if weight == "naive":
        p = 0.5 * (beta * f * dx + 1.0)
        bad = (p < 0.0) | (p > 1.0)
        if bad.any():
            i = int(np.argmax(bad))
            raise ProbabilityOutOfRange(f"naive weight {p[i]} at site {i}; dx={dx} exceeds the validity bound")
        return JumpProbabilities(p)
    raise ValueError(f"unknown weight {weight!r}")
