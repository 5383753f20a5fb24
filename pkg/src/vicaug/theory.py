"""Numerical checks for the local-robustness bound on feature maps.

For a twice-differentiable vector statistic, two trace constants summarize
the local geometry: ``a`` is the trace of the Jacobian Gram matrix and
``b`` sums, per output, the trace of the Hessian slice and of its square.
Under isotropic Gaussian input noise of scale sigma, deviations of the
statistic stay below ``(sigma/delta) * (sqrt(a) + sigma*sqrt(b/2))`` with
probability at least ``1 - delta`` (up to second-order Taylor error).  This
module estimates the constants by central finite differences and checks the
bound by Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError, ParameterError
from .rng import RngState


@dataclass(frozen=True)
class StatisticFn:
    """A total map from R^d to R^D with declared dimensions.

    ``sigma_max`` certifies the noise scales for which the second-order
    Taylor picture is trustworthy; the shipped analytic statistics have no
    higher-order terms and certify every scale.  ``batch_fn``, when given,
    evaluates an (n, d) batch to (n, D) in one call.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    d: int
    D: int
    sigma_max: float | None = None
    batch_fn: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = np.asarray(self.fn(np.asarray(x, dtype=np.float64)), dtype=np.float64)
        if out.shape != (self.D,):
            raise EvaluationError(
                f"statistic returned shape {out.shape}, expected ({self.D},)"
            )
        if not np.all(np.isfinite(out)):
            raise EvaluationError("statistic returned non-finite values")
        return out

    def batch(self, xs: np.ndarray) -> np.ndarray:
        if self.batch_fn is not None:
            out = np.asarray(self.batch_fn(xs), dtype=np.float64)
            if out.shape != (len(xs), self.D):
                raise EvaluationError(
                    f"batch statistic returned shape {out.shape}, "
                    f"expected ({len(xs)}, {self.D})"
                )
            if not np.all(np.isfinite(out)):
                raise EvaluationError("statistic returned non-finite values")
            return out
        return np.stack([self(x) for x in xs])


def identity_statistic(d: int) -> StatisticFn:
    """Psi(x) = x."""
    return StatisticFn(
        fn=lambda x: x.copy(),
        d=d,
        D=d,
        sigma_max=math.inf,
        batch_fn=lambda xs: np.array(xs, dtype=np.float64),
    )


def linear_statistic(w: np.ndarray) -> StatisticFn:
    """Psi(x) = W x for a fixed (D, d) matrix."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2:
        raise ParameterError("linear statistic needs a 2-D matrix")
    D, d = w.shape
    return StatisticFn(
        fn=lambda x: w @ x,
        d=d,
        D=D,
        sigma_max=math.inf,
        batch_fn=lambda xs: xs @ w.T,
    )


def quadratic_statistic(mats) -> StatisticFn:
    """Psi_j(x) = x^T A_j x for fixed (d, d) matrices."""
    mats = [np.asarray(a, dtype=np.float64) for a in mats]
    d = mats[0].shape[0]
    for a in mats:
        if a.shape != (d, d):
            raise ParameterError("quadratic statistic matrices must share shape (d, d)")
    stacked = np.stack(mats)

    def fn(x):
        return np.einsum("jik,i,k->j", stacked, x, x)

    def batch_fn(xs):
        return np.einsum("jik,ni,nk->nj", stacked, xs, xs)

    return StatisticFn(fn=fn, d=d, D=len(mats), sigma_max=math.inf, batch_fn=batch_fn)


def fd_step(x: np.ndarray) -> float:
    """Default central-difference step: 1e-4 * (1 + max|x|)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ParameterError("cannot pick a step for an empty point")
    return 1e-4 * (1.0 + float(np.max(np.abs(x))))


def jacobian_fd(psi: StatisticFn, x: np.ndarray, h: float | None = None) -> np.ndarray:
    """Central-difference Jacobian, laid out (d, D): J[i, j] = dPsi_j/dx_i."""
    x = np.asarray(x, dtype=np.float64)
    h = fd_step(x) if h is None else float(h)
    if h <= 0:
        raise ParameterError(f"step must be positive, got {h}")
    jac = np.empty((psi.d, psi.D))
    for i in range(psi.d):
        e = np.zeros(psi.d)
        e[i] = h
        jac[i] = (psi(x + e) - psi(x - e)) / (2.0 * h)
    return jac


def hessian_fd(psi: StatisticFn, x: np.ndarray, h: float | None = None) -> np.ndarray:
    """Central-difference Hessian tensor, laid out (d, d, D) and symmetrized."""
    x = np.asarray(x, dtype=np.float64)
    h = fd_step(x) if h is None else float(h)
    if h <= 0:
        raise ParameterError(f"step must be positive, got {h}")
    d = psi.d
    hess = np.empty((d, d, psi.D))
    base = psi(x)
    plus = np.empty((d, psi.D))
    minus = np.empty((d, psi.D))
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        plus[i] = psi(x + e)
        minus[i] = psi(x - e)
        hess[i, i] = (plus[i] - 2.0 * base + minus[i]) / h**2
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h
        for k in range(i + 1, d):
            ek = np.zeros(d)
            ek[k] = h
            cross = (
                psi(x + ei + ek) - psi(x + ei - ek) - psi(x - ei + ek) + psi(x - ei - ek)
            ) / (4.0 * h**2)
            hess[i, k] = cross
            hess[k, i] = cross
    return 0.5 * (hess + hess.transpose(1, 0, 2))


@dataclass(frozen=True)
class SpectralConstants:
    """Trace summaries of the Jacobian and Hessian at one point."""

    a: float
    b: float


def constants_ab(
    psi: StatisticFn, x: np.ndarray, h: float | None = None, check_step: bool = False
) -> SpectralConstants:
    """The trace constants ``a`` and ``b`` by finite differences.

    With ``check_step`` the computation repeats at half the step and must
    agree, guarding against an unstable step choice.
    """
    x = np.asarray(x, dtype=np.float64)
    h = fd_step(x) if h is None else float(h)
    consts = _constants_at(psi, x, h)
    if check_step:
        refined = _constants_at(psi, x, h / 2.0)
        scale = 1.0 + abs(refined.a) + abs(refined.b)
        if (
            abs(refined.a - consts.a) > 1e-3 * scale
            or abs(refined.b - consts.b) > 1e-3 * scale
        ):
            raise EvaluationError(
                f"finite differences unstable at step {h}: "
                f"a {consts.a} vs {refined.a}, b {consts.b} vs {refined.b}"
            )
        return refined
    return consts


def _constants_at(psi: StatisticFn, x: np.ndarray, h: float) -> SpectralConstants:
    jac = jacobian_fd(psi, x, h)
    hess = hessian_fd(psi, x, h)
    a = float(np.sum(jac**2))
    traces = np.trace(hess, axis1=0, axis2=1)
    squares = np.einsum("ikj,kij->j", hess, hess)
    return SpectralConstants(a=a, b=float(np.sum(traces + squares)))


@dataclass(frozen=True)
class BoundReport:
    """Monte-Carlo verification record of the concentration bound."""

    sigma: float
    delta: float
    a: float
    b: float
    radius: float
    n_samples: int
    violation_rate: float
    passed: bool

    def to_text(self) -> str:
        lines = [
            f"sigma={self.sigma!r}",
            f"delta={self.delta!r}",
            f"a={self.a!r}",
            f"b={self.b!r}",
            f"radius={self.radius!r}",
            f"n_samples={self.n_samples}",
            f"violation_rate={self.violation_rate!r}",
            f"result={'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines)


def verify_bound(
    psi: StatisticFn,
    x: np.ndarray,
    sigma: float,
    delta: float,
    n_samples: int,
    rng: RngState,
    h: float | None = None,
    sigma_max: float | None = None,
) -> BoundReport:
    """Empirically check the concentration radius at one point.

    Draws ``n_samples`` isotropic Gaussian perturbations and reports the
    fraction whose statistic moves at least the bound radius; passing means
    that rate stays below ``delta`` plus three binomial standard errors.
    The caller must certify the noise scale via the statistic's
    ``sigma_max`` or the ``sigma_max`` argument.
    """
    x = np.asarray(x, dtype=np.float64)
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0, 1), got {delta}")
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if n_samples < 1:
        raise ParameterError(f"need at least one sample, got {n_samples}")
    cap = psi.sigma_max if psi.sigma_max is not None else sigma_max
    if cap is None:
        raise ParameterError(
            "statistic carries no sigma_max certificate; pass sigma_max "
            "explicitly or use a shipped analytic statistic"
        )
    if sigma > cap:
        raise ParameterError(f"sigma {sigma} exceeds certified maximum {cap}")

    consts = constants_ab(psi, x, h, check_step=True)
    b_eff = consts.b
    if b_eff < 0:
        # finite differences leave O(h^2) noise around zero for curvature-free
        # statistics; a materially negative b has no defined radius
        if -b_eff <= 1e-6 * (1.0 + consts.a):
            b_eff = 0.0
        else:
            raise ParameterError(
                f"b = {consts.b} is negative; the bound radius is undefined here"
            )
    radius = (sigma / delta) * (math.sqrt(consts.a) + sigma * math.sqrt(b_eff / 2.0))

    base = psi(x)
    noise = rng.normal_matrix((n_samples, psi.d))
    values = psi.batch(x[None, :] + sigma * noise)
    deviations = np.linalg.norm(values - base[None, :], axis=1)
    rate = float(np.mean(deviations >= radius))
    slack = 3.0 * math.sqrt(delta * (1.0 - delta) / n_samples)
    return BoundReport(
        sigma=float(sigma),
        delta=float(delta),
        a=consts.a,
        b=consts.b,
        radius=radius,
        n_samples=int(n_samples),
        violation_rate=rate,
        passed=rate < delta + slack,
    )
