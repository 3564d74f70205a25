"""Simultaneous Moser isotopies on flat tori.

Forms on the torus ``T^n = R^n / Z^n`` have trigonometric-polynomial
coefficients.  A :class:`FormFamily` is stored as a constant base form plus a
time-polynomial primitive ``alpha_t``; the realised family is
``w_t = base + d(int_0^t alpha_s ds)`` so ``dw_t/dt = d alpha_t`` by construction.

For two families ``(w_t, alpha_t)`` and ``(eta_t, beta_t)`` with constant
recursion operator ``A`` and ``alpha_t = beta_t o A`` the vector field defined
by ``i_X w_t = -alpha_t`` also solves ``i_X eta_t = -beta_t``, and its flow
pulls both families back to their values at ``t = 0``.  This module integrates
that flow together with its variational equation and measures the pullback
errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exterior import KForm, _sort_with_sign

__all__ = [
    "TrigPoly",
    "FormField",
    "FormFamily",
    "PairFamily",
    "FlowResult",
    "DegenerateFamilyError",
    "StepSizeError",
    "IntertwiningError",
    "exterior_derivative_field",
    "intertwining_check",
    "moser_vector_field",
    "interior_residual",
    "integrate_flow",
    "convergence_study",
    "cohomology_drift",
    "sample_points",
    "pointwise_recursion",
    "t2_family",
    "t4_pair_family",
    "foliation_defect",
]

TWO_PI = 2.0 * np.pi
CHECKPOINTS = (0.25, 0.5, 0.75, 1.0)
COND_LIMIT = 1e8


class DegenerateFamilyError(ValueError):
    """A form matrix became (numerically) singular at some sample point."""


class StepSizeError(RuntimeError):
    """Integration produced non-finite values or an error above the allowed bound."""


class IntertwiningError(ValueError):
    """The primitives are not intertwined by the recursion operator."""


def _canonical(freq: Tuple[int, ...], c: float, s: float):
    # cos is even and sin odd in the frequency, so fold k and -k together
    for k in freq:
        if k > 0:
            return freq, c, s
        if k < 0:
            return tuple(-x for x in freq), c, -s
    return freq, c + 0.0, 0.0


class TrigPoly:
    """``sum_k c_k cos(2 pi k.x) + s_k sin(2 pi k.x)`` with integer frequencies."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Iterable[Tuple[Sequence[int], float, float]] = ()):
        self.n = n
        acc: Dict[Tuple[int, ...], List[float]] = {}
        for freq, c, s in terms:
            freq = tuple(int(k) for k in freq)
            if len(freq) != n:
                raise ValueError(f"frequency {freq} has wrong length for n={n}")
            freq, c, s = _canonical(freq, float(c), float(s))
            slot = acc.setdefault(freq, [0.0, 0.0])
            slot[0] += c
            slot[1] += s
        self._terms = {k: (c, s) for k, (c, s) in acc.items() if c != 0.0 or s != 0.0}

    @classmethod
    def constant(cls, n: int, value: float) -> "TrigPoly":
        return cls(n, [((0,) * n, value, 0.0)])

    @property
    def terms(self) -> List[Tuple[Tuple[int, ...], float, float]]:
        return [(k, c, s) for k, (c, s) in sorted(self._terms.items())]

    def _arrays(self):
        if not self._terms:
            return np.zeros((0, self.n)), np.zeros(0), np.zeros(0)
        keys = sorted(self._terms)
        freqs = np.array(keys, dtype=float)
        cs = np.array([self._terms[k] for k in keys])
        return freqs, cs[:, 0], cs[:, 1]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        freqs, c, s = self._arrays()
        phase = TWO_PI * (x @ freqs.T)
        return np.cos(phase) @ c + np.sin(phase) @ s

    def gradient(self, x) -> np.ndarray:
        """Analytic gradient, shape ``x.shape``."""
        x = np.asarray(x, dtype=float)
        freqs, c, s = self._arrays()
        phase = TWO_PI * (x @ freqs.T)
        weights = -np.sin(phase) * c + np.cos(phase) * s
        return TWO_PI * (weights @ freqs)

    def derivative(self, i: int) -> "TrigPoly":
        """``d/dx_i``; ``i`` is 1-based."""
        out = []
        for k, (c, s) in self._terms.items():
            f = TWO_PI * k[i - 1]
            if f:
                out.append((k, s * f, -c * f))
        return TrigPoly(self.n, out)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        return TrigPoly(self.n, self.terms + other.terms)

    def __neg__(self) -> "TrigPoly":
        return self * -1.0

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def __mul__(self, a: float) -> "TrigPoly":
        return TrigPoly(self.n, [(k, a * c, a * s) for k, c, s in self.terms])

    __rmul__ = __mul__

    def mean(self) -> float:
        return self._terms.get((0,) * self.n, (0.0, 0.0))[0]

    def max_coefficient(self) -> float:
        return max((max(abs(c), abs(s)) for c, s in self._terms.values()), default=0.0)

    def __repr__(self) -> str:
        return f"TrigPoly(n={self.n}, terms={self.terms})"


class FormField:
    """A ``k``-form on ``T^n`` with :class:`TrigPoly` coefficients on increasing index tuples."""

    def __init__(self, n: int, k: int, coeffs: Optional[Mapping[Tuple[int, ...], TrigPoly]] = None):
        self.n, self.k = n, k
        self.coeffs: Dict[Tuple[int, ...], TrigPoly] = {}
        for idx, p in (coeffs or {}).items():
            sign, key = _sort_with_sign(idx)
            if key is None or len(key) != k:
                raise ValueError(f"bad index {idx} for a {k}-form")
            term = p if sign > 0 else -p
            self.coeffs[key] = self.coeffs[key] + term if key in self.coeffs else term

    @classmethod
    def constant(cls, f: KForm) -> "FormField":
        return cls(f.n, f.k, {idx: TrigPoly.constant(f.n, float(c)) for idx, c in f.coeffs.items()})

    def __add__(self, other: "FormField") -> "FormField":
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("cannot add form fields of different shape")
        merged = dict(self.coeffs)
        for idx, p in other.coeffs.items():
            merged[idx] = merged[idx] + p if idx in merged else p
        return FormField(self.n, self.k, merged)

    def __mul__(self, a: float) -> "FormField":
        return FormField(self.n, self.k, {i: p * a for i, p in self.coeffs.items()})

    __rmul__ = __mul__

    def max_coefficient(self) -> float:
        return max((p.max_coefficient() for p in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_coefficient() <= tol

    def components(self, x) -> np.ndarray:
        """Values of a 1-form as covector components, shape ``x.shape``."""
        if self.k != 1:
            raise ValueError("components() is for 1-forms")
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for (j,), p in self.coeffs.items():
            out[..., j - 1] = p(x)
        return out

    def component_gradients(self, x) -> np.ndarray:
        """``out[..., k, j] = d/dx_k a_j`` for a 1-form."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (self.n,))
        for (j,), p in self.coeffs.items():
            out[..., :, j - 1] = p.gradient(x)
        return out

    def matrix(self, x) -> np.ndarray:
        """Skew matrix of a 2-form at each point, shape ``x.shape + (n,)``."""
        if self.k != 2:
            raise ValueError("matrix() is for 2-forms")
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (self.n,))
        for (i, j), p in self.coeffs.items():
            v = p(x)
            out[..., i - 1, j - 1] = v
            out[..., j - 1, i - 1] = -v
        return out

    def matrix_gradient(self, x) -> np.ndarray:
        """``out[..., k, i, j] = d/dx_k M_ij``."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (self.n, self.n))
        for (i, j), p in self.coeffs.items():
            g = p.gradient(x)
            out[..., :, i - 1, j - 1] = g
            out[..., :, j - 1, i - 1] = -g
        return out

    def __repr__(self) -> str:
        return f"FormField(n={self.n}, k={self.k}, terms={len(self.coeffs)})"


def exterior_derivative_field(f: FormField) -> FormField:
    """Coordinate exterior derivative ``d(a_I dx^I) = sum_i d_i a_I dx^i ^ dx^I``."""
    if f.k >= f.n:
        raise ValueError("no exterior derivative of a top-degree field")
    acc: Dict[Tuple[int, ...], TrigPoly] = {}
    for idx, p in f.coeffs.items():
        for i in range(1, f.n + 1):
            sign, key = _sort_with_sign((i,) + idx)
            if key is None:
                continue
            d = p.derivative(i)
            if not d.terms:
                continue
            term = d if sign > 0 else -d
            acc[key] = acc[key] + term if key in acc else term
    return FormField(f.n, f.k + 1, acc)


class FormFamily:
    """``w_t = base + sum_p t^(p+1)/(p+1) d alpha^(p)`` with ``alpha_t = sum_p t^p alpha^(p)``."""

    def __init__(self, base: KForm, primitive: Mapping[int, FormField]):
        if base.k != 2:
            raise ValueError("base must be a 2-form")
        self.n = base.n
        self.base = base if not base.exact else base.to_float()
        self.primitive = {int(p): f for p, f in primitive.items()}
        for p, f in self.primitive.items():
            if p < 0 or f.k != 1 or f.n != self.n:
                raise ValueError("primitive terms must be 1-forms with non-negative powers")
        self._base_field = FormField.constant(self.base)
        self._d = {p: exterior_derivative_field(f) for p, f in self.primitive.items()}

    def scaled(self, eps: float) -> "FormFamily":
        return FormFamily(self.base, {p: f * eps for p, f in self.primitive.items()})

    def form(self, t: float) -> FormField:
        out = self._base_field
        for p, d in self._d.items():
            if d.coeffs:
                out = out + d * (t ** (p + 1) / (p + 1))
        return out

    def primitive_at(self, t: float) -> FormField:
        out = FormField(self.n, 1)
        for p, f in self.primitive.items():
            out = out + f * (t ** p)
        return out

    def closedness_defect(self) -> float:
        """Largest coefficient of ``d w_t``; zero up to rounding since each ``d alpha^(p)`` is exact."""
        if self.n < 3:
            return 0.0
        return max((exterior_derivative_field(d).max_coefficient() for d in self._d.values()), default=0.0)

    def matrix(self, x, t: float) -> np.ndarray:
        return self.form(t).matrix(x)

    def alpha(self, x, t: float) -> np.ndarray:
        return self.primitive_at(t).components(x)


@dataclass
class PairFamily:
    omega: FormFamily
    eta: FormFamily
    name: str = ""

    def __post_init__(self):
        if self.omega.n != self.eta.n:
            raise ValueError("families live in different dimensions")

    @property
    def n(self) -> int:
        return self.omega.n

    def scaled(self, eps: float) -> "PairFamily":
        return PairFamily(self.omega.scaled(eps), self.eta.scaled(eps), self.name)


def sample_points(n: int, count: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).random((count, n))


def _check_condition(m: np.ndarray) -> None:
    cond = np.linalg.cond(m)
    if not np.all(np.isfinite(cond)) or np.any(cond > COND_LIMIT):
        raise DegenerateFamilyError(f"form matrix condition number {np.max(cond):.3g} exceeds {COND_LIMIT:g}")


def pointwise_recursion(pair: PairFamily, x, t: float) -> np.ndarray:
    """``A(x, t) = M_eta^{-1} M_omega`` at each sample point."""
    mw, me = pair.omega.matrix(x, t), pair.eta.matrix(x, t)
    _check_condition(me)
    return np.linalg.solve(me, mw)


@dataclass(frozen=True)
class IntertwiningResidual:
    primitive: float
    operator_drift: float

    def below(self, threshold: float) -> bool:
        return self.primitive <= threshold and self.operator_drift <= threshold


def intertwining_check(pair: PairFamily, samples, times: Sequence[float] = (0.0,) + CHECKPOINTS) -> IntertwiningResidual:
    """Residuals of ``alpha_t = beta_t o A`` and of the t-constancy of ``A``.

    ``beta o A`` has covector components ``A^T beta``.  The drift of ``A`` is
    measured relative to ``max(1, |A(x, 0)|)``.
    """
    x = np.asarray(samples, dtype=float)
    a0 = pointwise_recursion(pair, x, 0.0)
    scale = max(1.0, float(np.max(np.abs(a0))))
    prim = drift = 0.0
    for t in times:
        a = pointwise_recursion(pair, x, t)
        alpha, beta = pair.omega.alpha(x, t), pair.eta.alpha(x, t)
        composed = np.einsum("...ji,...j->...i", a, beta)
        prim = max(prim, float(np.max(np.abs(alpha - composed))))
        drift = max(drift, float(np.max(np.abs(a - a0))) / scale)
    return IntertwiningResidual(prim, drift)


def moser_vector_field(family: FormFamily, x, t: float) -> np.ndarray:
    """Solve ``i_X w_t = -alpha_t`` pointwise.

    With ``w(X, Y) = X^T M Y`` the contraction ``i_X w`` has components
    ``M^T X = -M X``, so the system is ``M X = alpha``.

    Raises
    ------
    DegenerateFamilyError
        If some ``M`` has condition number above ``1e8``.
    """
    m = family.matrix(x, t)
    _check_condition(m)
    return np.linalg.solve(m, family.alpha(x, t)[..., None])[..., 0]


def interior_residual(family: FormFamily, x, t: float, v) -> np.ndarray:
    """``i_v w_t + alpha_t`` as covector components."""
    m = family.matrix(x, t)
    return -np.einsum("...ij,...j->...i", m, np.asarray(v)) + family.alpha(x, t)


def _field_and_jacobian(family: FormFamily, x, t: float):
    """``X`` and ``dX/dx`` from ``d_k X = M^{-1}(d_k alpha - (d_k M) X)``."""
    form, prim = family.form(t), family.primitive_at(t)
    m = form.matrix(x)
    _check_condition(m)
    alpha = prim.components(x)
    minv = np.linalg.inv(m)
    v = np.einsum("...ij,...j->...i", minv, alpha)
    dm = form.matrix_gradient(x)             # [..., k, i, j]
    dalpha = prim.component_gradients(x)     # [..., k, j]
    rhs = dalpha - np.einsum("...kij,...j->...ki", dm, v)
    jac = np.einsum("...ij,...kj->...ik", minv, rhs)  # [..., i, k] = d_k X_i
    return v, jac


@dataclass
class FlowResult:
    """Trajectories, Jacobians and pullback errors at each checkpoint.

    ``omega_errors[c]`` is the max over samples of the largest entry of
    ``J^T M_{w_t}(phi_t(x)) J - M_{w_0}(x)``; likewise ``eta_errors``.
    """

    times: Tuple[float, ...]
    points: np.ndarray
    trajectories: np.ndarray
    jacobians: np.ndarray
    omega_errors: np.ndarray
    eta_errors: np.ndarray
    min_det: np.ndarray
    field_mismatch: float
    field_residual: float
    steps: int

    @property
    def max_error(self) -> float:
        return float(max(self.omega_errors[-1], self.eta_errors[-1]))


def _pullback_error(family: FormFamily, x0, x, jac, t) -> float:
    pulled = np.einsum("...ki,...kl,...lj->...ij", jac, family.matrix(x, t), jac)
    return float(np.max(np.abs(pulled - family.matrix(x0, 0.0))))


def integrate_flow(pair: PairFamily, points, steps: int = 200, checkpoints: Sequence[float] = CHECKPOINTS,
                   max_residual: float = 1e-9, max_error: float = 1e-3) -> FlowResult:
    """Integrate ``x' = X_t(x)`` and ``J' = (dX_t/dx) J`` jointly with classical RK4.

    Parameters
    ----------
    pair
        Families whose primitives are intertwined by a t-independent operator.
    points
        Sample points, shape ``(m, n)``.
    steps
        Number of fixed RK4 steps on ``[0, 1]``; every checkpoint must fall on
        the step grid.
    max_residual
        Upper bound for both :func:`intertwining_check` residuals.
    max_error
        Integration aborts with :class:`StepSizeError` once a pullback error
        exceeds this.
    """
    x0 = np.atleast_2d(np.asarray(points, dtype=float))
    n = pair.n
    if x0.shape[-1] != n:
        raise ValueError(f"points must have {n} coordinates")
    check_idx = {}
    for c in checkpoints:
        k = round(c * steps)
        if abs(k - c * steps) > 1e-9:
            raise ValueError(f"checkpoint {c} is not on the grid of {steps} steps")
        check_idx[k] = c
    res = intertwining_check(pair, x0)
    if not res.below(max_residual):
        raise IntertwiningError(
            f"primitive residual {res.primitive:.3g}, operator drift {res.operator_drift:.3g} "
            f"exceed {max_residual:g}")

    family = pair.omega
    h = 1.0 / steps
    x = x0.copy()
    jac = np.broadcast_to(np.eye(n), x0.shape[:-1] + (n, n)).copy()
    traj, jacs, ew, ee, dets = [], [], [], [], []
    mismatch = residual = 0.0

    def rhs(t, x, jac):
        v, dv = _field_and_jacobian(family, x, t)
        return v, dv @ jac

    for step in range(steps):
        t = step * h
        k1x, k1j = rhs(t, x, jac)
        k2x, k2j = rhs(t + h / 2, x + h / 2 * k1x, jac + h / 2 * k1j)
        k3x, k3j = rhs(t + h / 2, x + h / 2 * k2x, jac + h / 2 * k2j)
        k4x, k4j = rhs(t + h, x + h * k3x, jac + h * k3j)
        # the field generated by eta must agree with the one generated by omega
        y = moser_vector_field(pair.eta, x, t)
        mismatch = max(mismatch, float(np.max(np.abs(y - k1x))))
        residual = max(residual, float(np.max(np.abs(interior_residual(family, x, t, k1x)))))
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        jac = jac + h / 6 * (k1j + 2 * k2j + 2 * k3j + k4j)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(jac))):
            raise StepSizeError(f"non-finite state at t={t + h:g}")
        if step + 1 in check_idx:
            tc = (step + 1) * h
            errs = (_pullback_error(pair.omega, x0, x, jac, tc), _pullback_error(pair.eta, x0, x, jac, tc))
            if max(errs) > max_error:
                raise StepSizeError(f"pullback error {max(errs):.3g} at t={tc:g} exceeds {max_error:g}")
            traj.append(x.copy())
            jacs.append(jac.copy())
            ew.append(errs[0])
            ee.append(errs[1])
            dets.append(float(np.min(np.linalg.det(jac))))
    return FlowResult(
        times=tuple(check_idx[k] for k in sorted(check_idx)),
        points=x0,
        trajectories=np.array(traj),
        jacobians=np.array(jacs),
        omega_errors=np.array(ew),
        eta_errors=np.array(ee),
        min_det=np.array(dets),
        field_mismatch=mismatch,
        field_residual=residual,
        steps=steps,
    )


def foliation_defect(result: FlowResult, fixed: Sequence[int]) -> float:
    """How far the flow is from fixing the coordinates ``fixed`` (1-based) and
    from preserving the block splitting of the Jacobian."""
    fixed_idx = [i - 1 for i in fixed]
    moving = [i for i in range(result.points.shape[-1]) if i not in fixed_idx]
    drift = np.abs(result.trajectories[..., fixed_idx] - result.points[..., fixed_idx])
    jac = result.jacobians
    ident = np.eye(len(fixed_idx))
    fixed_block = np.abs(jac[..., fixed_idx, :][..., :, fixed_idx] - ident)
    cross = np.concatenate([np.abs(jac[..., fixed_idx, :][..., :, moving]).reshape(-1),
                            np.abs(jac[..., moving, :][..., :, fixed_idx]).reshape(-1)])
    return float(max(drift.max(), fixed_block.max(), cross.max(initial=0.0)))


@dataclass(frozen=True)
class ConvergenceRow:
    steps: int
    omega_error: float
    eta_error: float

    @property
    def error(self) -> float:
        return max(self.omega_error, self.eta_error)


def convergence_study(pair: PairFamily, points, steps: int = 200, halvings: int = 1) -> List[ConvergenceRow]:
    """Final-time pullback errors for ``steps, 2 steps, ..., 2^halvings steps``."""
    rows = []
    for h in range(halvings + 1):
        r = integrate_flow(pair, points, steps * 2 ** h)
        rows.append(ConvergenceRow(r.steps, float(r.omega_errors[-1]), float(r.eta_errors[-1])))
    return rows


def cohomology_drift(family: FormFamily, times: Sequence[float] = (0.0,) + CHECKPOINTS, grid: int = 16) -> float:
    """Largest change in the grid average of ``w_t`` over the given times.

    On the torus the average of a closed 2-form determines its de Rham class,
    so this is a proxy for constancy of ``[w_t]``.
    """
    axes = [np.arange(grid) / grid] * family.n
    x = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, family.n)
    ref = family.matrix(x, times[0]).mean(axis=0)
    return max(float(np.max(np.abs(family.matrix(x, t).mean(axis=0) - ref))) for t in times)


def _one_form(n: int, components: Mapping[int, Iterable[Tuple[Sequence[int], float, float]]]) -> FormField:
    return FormField(n, 1, {(j,): TrigPoly(n, terms) for j, terms in components.items()})


def t2_family(eps: float = 0.05) -> PairFamily:
    """``w_t = (1 + 2 pi eps t cos 2 pi x_1) dx^1 ^ dx^2`` from ``alpha = eps sin(2 pi x_1) dx^2``.

    ``eta_t = 2 w_t`` with ``beta_t = 2 alpha_t``, so ``A = Id/2`` for all t.
    """
    base = KForm.basis(2, 1, 2, exact=False)
    alpha = _one_form(2, {2: [((1, 0), 0.0, eps)]})
    omega = FormFamily(base, {0: alpha})
    eta = FormFamily(2.0 * base, {0: alpha * 2.0})
    return PairFamily(omega, eta, "t2")


def t4_pair_family(eps: float = 0.1) -> PairFamily:
    """Symplectic-pair family on ``T^4`` with ``A = diag(1, 1, -1, -1)``.

    ``Omega+_t`` lives in the ``(x_1, x_2)`` block and varies through the
    primitive ``gamma_t``, ``Omega- = dx^3 ^ dx^4`` is fixed; the families are
    ``w_t = (Omega+_t + Omega-)/2`` and ``eta_t = (Omega+_t - Omega-)/2`` with
    ``alpha_t = beta_t = gamma_t / 2``.
    """
    n = 4
    plus = KForm.basis(n, 1, 2, exact=False)
    minus = KForm.basis(n, 3, 4, exact=False)
    gamma0 = _one_form(n, {2: [((1, 0, 0, 0), 0.0, eps)], 1: [((1, 1, 0, 0), 0.6 * eps, 0.0)]})
    gamma1 = _one_form(n, {1: [((0, 1, 0, 0), 0.0, 0.4 * eps)]})
    prim = {0: gamma0 * 0.5, 1: gamma1 * 0.5}
    omega = FormFamily(0.5 * (plus + minus), prim)
    eta = FormFamily(0.5 * (plus - minus), prim)
    return PairFamily(omega, eta, "t4-pair")
