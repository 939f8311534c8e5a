"""Floating-point brute force: the independent check on every asymptotic claim.

Symbolic results are validated by substituting small numeric values for the
infinitesimal generators, computing roots or eigenvalues with a
simultaneous-iteration root finder, and testing that observed/predicted
ratios converge to 1 as the substituted values shrink.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DomainError, OracleError
from .exactpoly import ExactPolynomial
from .matrices import PerturbedMatrix, char_poly
from .ppoly import BalanceQuadratic, PerturbedPolynomial, RootAsymptotics

MAX_ITERATIONS = 200
STEP_TOLERANCE = 1e-14
RESIDUAL_FACTOR = 1e-10
NOISE_FLOOR = 1e-6  # deviations below this are rounding noise, not asymptotics


def poly_roots_numeric(
    coeffs: Sequence[complex], seed: int = 0
) -> list[complex]:
    """All complex roots by Aberth-type simultaneous iteration.

    Coefficients are listed low degree first; the leading coefficient must be
    nonzero and the degree at most 30.  Exact zero roots are deflated first;
    the rest start on a circle of radius given by the Fujiwara root bound
    with seed-determined phases, and are refined until the largest step falls
    below 1e-14 * (1 + |root|).
    """
    coeffs = [complex(c) for c in coeffs]
    if not coeffs or coeffs[-1] == 0:
        raise DomainError("leading coefficient must be nonzero")
    degree = len(coeffs) - 1
    if degree > 30:
        raise DomainError("degree above 30 is out of the oracle's scope")
    if degree == 0:
        return []

    roots: list[complex] = []
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots.append(0j)
        coeffs = coeffs[1:]
    degree = len(coeffs) - 1
    if degree == 0:
        return roots
    if degree == 1:
        return roots + [-coeffs[0] / coeffs[1]]

    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    # Fujiwara bound: every root has modulus <= 2 * max |a_{n-k}/a_n|^(1/k)
    radius = 2.0 * max(
        abs(monic[degree - k]) ** (1.0 / k) for k in range(1, degree + 1)
    )
    radius = max(radius, 1e-12)
    rng = random.Random(seed)
    phase = 2 * math.pi * rng.random()
    current = [
        radius * cmath.exp(1j * (2 * math.pi * (k + 0.5) / degree + phase))
        for k in range(degree)
    ]

    def horner_pair(z: complex):
        value = 0j
        slope = 0j
        for c in reversed(monic):
            slope = slope * z + value
            value = value * z + c
        return value, slope

    converged = False
    for _ in range(MAX_ITERATIONS):
        max_step = 0.0
        for k in range(degree):
            z = current[k]
            value, slope = horner_pair(z)
            if value == 0:
                continue
            if slope == 0:
                ratio = 0j
            else:
                ratio = value / slope
            repulse = sum(
                1 / (z - current[j]) for j in range(degree) if j != k and z != current[j]
            )
            denom = 1 - ratio * repulse
            step = ratio if denom == 0 else ratio / denom
            current[k] = z - step
            max_step = max(max_step, abs(step) / (1 + abs(current[k])))
        if max_step <= STEP_TOLERANCE:
            converged = True
            break
    if not converged:
        error = OracleError("root iteration did not converge")
        error.best_iterate = roots + current
        raise error

    scale = max(abs(c) for c in coeffs)
    if degree <= 10:
        worst = max(abs(_horner(monic, z)) * abs(lead) for z in current)
        if worst > RESIDUAL_FACTOR * scale:
            error = OracleError(f"root residual {worst:.3e} above tolerance")
            error.best_iterate = roots + current
            raise error
    return roots + current


def _horner(coeffs: Sequence[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def default_values(generators: Sequence[str], t0: float, multipliers=None) -> dict:
    """Sample map: the k-th generator goes to (k+1) * t0 unless overridden.

    `multipliers` maps generator names to per-unit factors, so a grid scan
    keeps the relative magnitudes fixed while t0 shrinks.
    """
    if multipliers is None:
        return {name: (index + 1) * t0 for index, name in enumerate(generators)}
    return {name: multipliers[name] * t0 for name in generators}


@dataclass
class Sample:
    t0: float
    observed: complex
    predicted: complex
    deviation: float

    def to_dict(self) -> dict:
        return {
            "t0": self.t0,
            "observed": [self.observed.real, self.observed.imag],
            "predicted": [self.predicted.real, self.predicted.imag],
            "deviation": self.deviation,
        }


@dataclass
class ConvergenceReport:
    """Grid of (t0, observed, predicted) with a pass/fail verdict."""

    samples: list[Sample] = field(default_factory=list)
    verdict: bool = False
    tolerance: float = 0.2
    inconclusive: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "samples": [s.to_dict() for s in self.samples],
            "verdict": "pass" if self.verdict else "fail",
            "tolerance": self.tolerance,
            "inconclusive": self.inconclusive,
            "note": self.note,
        }


def _judge(report: ConvergenceReport) -> ConvergenceReport:
    """Final deviation within tolerance, improving monotonically within 10%."""
    if report.inconclusive or not report.samples:
        report.verdict = False
        return report
    deviations = [s.deviation for s in report.samples]
    monotone = all(
        later <= earlier * 1.1 or later <= NOISE_FLOOR
        for earlier, later in zip(deviations, deviations[1:])
    )
    report.verdict = monotone and deviations[-1] <= report.tolerance
    return report


def _cluster_guard(
    base: ExactPolynomial, root: complex, max_pert: float, seed: int
) -> Optional[str]:
    """Spot shadow roots too close to the target for unambiguous clustering."""
    others = [
        r
        for r in poly_roots_numeric(base.numeric_coeffs(), seed=seed)
        if abs(r - root) > 1e-6
    ]
    if others and min(abs(r - root) for r in others) <= 10 * max_pert:
        return "another shadow root lies within 10x the perturbation size"
    return None


def verify_root_asymptotics(
    base: ExactPolynomial,
    shift_poly: PerturbedPolynomial,
    asym: RootAsymptotics,
    grid: Sequence[float] = (1e-2, 1e-3, 1e-4),
    tolerance: float = 0.2,
    seed: int = 0,
    multipliers=None,
) -> ConvergenceReport:
    """Numerically test xi^k ~ rhs against the roots of P + Xi(t0).

    For each grid point the k roots of P + Xi(t0) nearest the base root are
    clustered (k = exact multiplicity); the observed xi^k is the signed
    product over the cluster, (-1)^(k+1) * prod(root - u).  A k=1 statement
    inside a larger cluster is paired to the root nearest u + predicted.  A
    zero right-hand side requires |observed| <= 10 * t0^2 instead of a ratio.
    """
    grid = sorted(grid, reverse=True)
    if not grid or grid[0] > 0.1 or grid[-1] <= 0:
        raise DomainError("grid values must lie in (0, 0.1]")
    report = ConvergenceReport(tolerance=tolerance)
    root = complex(asym.base_root)
    multiplicity = base.multiplicity(asym.base_root)
    if multiplicity == 0:
        raise DomainError("asymptotics anchored at a non-root")
    if asym.order not in (multiplicity, 1):
        raise DomainError(
            f"order {asym.order} does not match multiplicity {multiplicity}"
        )
    base_coeffs = base.numeric_coeffs()

    for t0 in grid:
        sampled_values = default_values(
            shift_poly.ring.generators, t0, multipliers
        )
        shift_coeffs = shift_poly.numeric_coeffs(sampled_values)
        max_pert = max((abs(c) for c in shift_coeffs), default=0.0)
        guard = _cluster_guard(base, root, max_pert, seed)
        if guard:
            report.inconclusive = True
            report.note = guard
            return _judge(report)
        size = max(len(base_coeffs), len(shift_coeffs))
        mixed = [
            (base_coeffs[i] if i < len(base_coeffs) else 0)
            + (shift_coeffs[i] if i < len(shift_coeffs) else 0)
            for i in range(size)
        ]
        all_roots = poly_roots_numeric(mixed, seed=seed)
        cluster = sorted(all_roots, key=lambda r: abs(r - root))[:multiplicity]
        predicted = asym.rhs.numeric_sample(sampled_values)

        if asym.order == multiplicity:
            product = 1 + 0j
            for r in cluster:
                product *= r - root
            observed = (-1) ** (multiplicity + 1) * product
        else:  # single branch statement inside a bigger cluster
            target = root + predicted
            observed = min(cluster, key=lambda r: abs(r - target)) - root

        if predicted == 0:
            deviation = abs(observed)
            ok = deviation <= 10 * t0 * t0
            report.samples.append(Sample(t0, observed, predicted, deviation))
            if not ok:
                report.note = "zero prediction but observed shift is first order"
                report.verdict = False
                return report
            continue
        deviation = abs(observed / predicted - 1)
        report.samples.append(Sample(t0, observed, predicted, deviation))

    if all(s.predicted == 0 for s in report.samples):
        report.verdict = True
        return report
    return _judge(report)


def verify_quadratic_balance(
    base: ExactPolynomial,
    shift_poly: PerturbedPolynomial,
    balance: BalanceQuadratic,
    grid: Sequence[float] = (1e-2, 1e-3, 1e-4),
    tolerance: float = 0.2,
    seed: int = 0,
) -> ConvergenceReport:
    """Check both branches of a balanced double-root quadratic numerically."""
    grid = sorted(grid, reverse=True)
    report = ConvergenceReport(tolerance=tolerance)
    root = complex(balance.base_root)
    base_coeffs = base.numeric_coeffs()
    for t0 in grid:
        sampled_values = default_values(shift_poly.ring.generators, t0)
        shift_coeffs = shift_poly.numeric_coeffs(sampled_values)
        size = max(len(base_coeffs), len(shift_coeffs))
        mixed = [
            (base_coeffs[i] if i < len(base_coeffs) else 0)
            + (shift_coeffs[i] if i < len(shift_coeffs) else 0)
            for i in range(size)
        ]
        cluster = sorted(
            poly_roots_numeric(mixed, seed=seed), key=lambda r: abs(r - root)
        )[:2]
        a2 = complex(balance.quad_coeff)
        a1 = balance.linear.numeric_sample(sampled_values)
        a0 = balance.constant.numeric_sample(sampled_values)
        disc = cmath.sqrt(a1 * a1 - 4 * a2 * a0)
        predicted_pair = [(-a1 + disc) / (2 * a2), (-a1 - disc) / (2 * a2)]
        observed_pair = [r - root for r in cluster]
        # pair branches by the better of the two matchings
        direct = max(
            abs(o / p - 1) for o, p in zip(observed_pair, predicted_pair)
        )
        swapped = max(
            abs(o / p - 1) for o, p in zip(observed_pair, predicted_pair[::-1])
        )
        deviation = min(direct, swapped)
        report.samples.append(
            Sample(t0, observed_pair[0], predicted_pair[0], deviation)
        )
    return _judge(report)


def verify_pgcd(
    a: PerturbedPolynomial,
    b: PerturbedPolynomial,
    t0: float,
    symbolic_pgcd: PerturbedPolynomial = None,
    values=None,
    seed: int = 0,
) -> ConvergenceReport:
    """Numeric Euclidean algorithm versus the symbolic perturbed GCD.

    Remainder coefficients at most 10*t0 in modulus count as numerically
    zero; a remainder in the ambiguous band (10*t0, 100*t0] makes the check
    inconclusive.  The surviving numeric GCD, normalized monic, must match
    the sampled symbolic PGCD coefficient-by-coefficient within 10*t0.
    """
    if symbolic_pgcd is None:
        from .ppoly import pgcd

        symbolic_pgcd, _ = pgcd(a, b)
    threshold = 10 * t0
    sampled_values = values if values is not None else default_values(
        a.ring.generators, t0
    )
    report = ConvergenceReport(tolerance=threshold)

    def strip(coeffs: list[complex]) -> list[complex]:
        while coeffs and abs(coeffs[-1]) <= threshold:
            coeffs.pop()
        return coeffs

    previous = strip(a.numeric_coeffs(sampled_values))
    current = strip(b.numeric_coeffs(sampled_values))
    while True:
        if not current:
            break
        peak = max(abs(c) for c in current)
        if peak <= threshold:
            break
        if peak <= 10 * threshold:
            report.inconclusive = True
            report.note = f"remainder magnitude {peak:.3e} inside the ambiguous band"
            return report
        if len(previous) < len(current):
            previous, current = current, previous
            continue
        rest = list(previous)
        lead = current[-1]
        for k in range(len(previous) - len(current), -1, -1):
            factor = rest[k + len(current) - 1] / lead
            for j, c in enumerate(current):
                rest[k + j] -= factor * c
        previous, current = current, strip(rest[: len(current) - 1])

    if not previous:
        report.note = "all numeric remainders fell below the zero threshold"
        report.inconclusive = True
        return report
    numeric_gcd = [c / previous[-1] for c in previous]
    symbolic = strip(symbolic_pgcd.numeric_coeffs(sampled_values))
    if not symbolic:
        report.note = "sampled symbolic PGCD fell below the zero threshold"
        report.inconclusive = True
        return report
    symbolic = [c / symbolic[-1] for c in symbolic]
    if len(numeric_gcd) != len(symbolic):
        report.note = "numeric and symbolic PGCD degrees differ"
        report.verdict = False
        return report
    worst = max(abs(x - y) for x, y in zip(numeric_gcd, symbolic))
    report.samples.append(Sample(t0, worst, 0j, worst))
    report.verdict = worst <= threshold
    return report


def verify_eigenvalues(
    matrix: PerturbedMatrix, t0: float, values=None, seed: int = 0
) -> list[complex]:
    """Eigenvalues of the numerically sampled matrix via its char poly roots."""
    if matrix.n > 8:
        raise DomainError("matrices above order 8 are out of the oracle's scope")
    sampled_values = values if values is not None else default_values(
        matrix.ring.generators, t0
    )
    poly = char_poly(matrix)
    return poly_roots_numeric(poly.numeric_coeffs(sampled_values), seed=seed)


def transfer_residual(
    function, report, point: complex, values
) -> float:
    """|H(p0) - reduced(p0) - sum_g c_g(p0)*g| at sampled generator values.

    The linear term uses the first-order correction map; the residual should
    shrink quadratically with the sample scale.
    """
    sampled = function.numeric_sample(point, values)
    reduced = report.reduced_shadow.evaluate(point)
    linear = sum(
        coeff.evaluate(point) * complex(values[symbol])
        for symbol, coeff in report.first_order.items()
    )
    return abs(sampled - reduced - linear)
