"""Linearized model: state-space matrices and the exact transfer-function matrix.

Linearizing the rigid-body equations about hover gives a 6-state LTI system.
Gravity is carried as a third input channel (Laplace image g/s) so that the
model stays strictly linear with D = 0; the input vector is (u1, u2, g) and
the outputs are the positions (x, y).

The transfer-function matrix H(s) = C (sI - A)^-1 B + D is computed exactly
with polynomial-matrix arithmetic (Faddeev-LeVerrier), not by numerical
evaluation on a frequency grid. Every entry of the quadrotor's H(s) reduces
to an integrator chain K / s^k after cancelling common powers of s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import QuadParams, State, StateDeriv

N_STATES = 6
N_INPUTS = 3
N_OUTPUTS = 2
TF_OUTPUTS = ("x", "y")
TF_INPUTS = ("u1", "u2", "g")

# relative magnitude below which a computed polynomial coefficient is a
# structural zero (exact zeros dominate here; the slack absorbs rounding)
_COEFF_EPS = 1e-12


class UnsupportedTransferFunctionError(ValueError):
    """Raised when a rational TF is not the integrator chain K / s^k."""


@dataclass(frozen=True)
class StateSpace:
    """Matrices (A, B, C, D) with shapes (6,6), (6,3), (2,6), (2,3)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        shapes = {"A": (N_STATES, N_STATES), "B": (N_STATES, N_INPUTS),
                  "C": (N_OUTPUTS, N_STATES), "D": (N_OUTPUTS, N_INPUTS)}
        for name, want in shapes.items():
            got = np.shape(getattr(self, name))
            if got != want:
                raise ValueError(f"{name} must have shape {want}, got {got}")


def linearize(params: QuadParams) -> StateSpace:
    """Analytic Jacobian of the dynamics about hover.

    Nonzero entries: the velocity identities A[i, i+3] = 1, the tilt-to-
    acceleration coupling A[3][2] = -g, and the input map B[4][0] = 1/m,
    B[4][2] = -1 (gravity channel), B[5][1] = 1/J.
    """
    A = np.zeros((N_STATES, N_STATES))
    A[0, 3] = A[1, 4] = A[2, 5] = 1.0
    A[3, 2] = -params.g
    B = np.zeros((N_STATES, N_INPUTS))
    B[4, 0] = 1.0 / params.m
    B[4, 2] = -1.0
    B[5, 1] = 1.0 / params.J
    C = np.zeros((N_OUTPUTS, N_STATES))
    C[0, 0] = 1.0
    C[1, 1] = 1.0
    D = np.zeros((N_OUTPUTS, N_INPUTS))
    return StateSpace(A=A, B=B, C=C, D=D)


def deriv_linear(delta_state: State, delta_input, ss: StateSpace) -> StateDeriv:
    """Linear-model derivative A dx + B du for du = (du1, du2, dg)."""
    du = np.asarray(delta_input, dtype=float)
    if du.shape != (N_INPUTS,):
        raise ValueError(f"delta_input must have {N_INPUTS} entries, got shape {du.shape}")
    dx = np.array(delta_state.as_tuple())
    out = ss.A @ dx + ss.B @ du
    return StateDeriv(*out)


class Polynomial:
    """Real polynomial in s, coefficients stored ascending by degree.

    Trailing zero coefficients are stripped; the zero polynomial is ().
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [float(c) for c in coeffs]
        while cs and cs[-1] == 0.0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, s: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return Polynomial(a)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def scaled(self, factor: float) -> "Polynomial":
        return Polynomial(c * factor for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self):
        return poly_to_str(self)


def poly_to_str(p: Polynomial, fmt: str = "%.12g") -> str:
    """Human form, ascending powers: e.g. '3 + 2 s - s^2'."""
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0.0:
            continue
        mag = fmt % abs(c)
        if k == 0:
            term = mag
        else:
            var = "s" if k == 1 else f"s^{k}"
            term = var if mag == "1" else f"{mag} {var}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


@dataclass(frozen=True)
class RationalTF:
    """Ratio of polynomials in s, normalized on construction.

    Normalization cancels common powers of s (the only common factors that
    arise from this plant) and rescales so the denominator is monic. A zero
    numerator collapses to 0/1.
    """

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("transfer function denominator is identically zero")
        num, den = _cancel_origin_powers(self.num, self.den)
        lead = den.coeffs[-1]
        if lead != 1.0:
            num = num.scaled(1.0 / lead)
            den = den.scaled(1.0 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self):
        if self.is_zero():
            return "0"
        if self.den.degree == 0:
            return poly_to_str(self.num)
        return f"{poly_to_str(self.num)} / {poly_to_str(self.den)}"


def _low_order_zeros(p: Polynomial, scale: float) -> int:
    """Number of leading (lowest-power) coefficients that are structural zeros."""
    tol = scale * _COEFF_EPS
    n = 0
    for c in p.coeffs:
        if abs(c) > tol:
            break
        n += 1
    return n


def _cancel_origin_powers(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if num.is_zero():
        return Polynomial(), Polynomial([1.0])
    scale = max(max(abs(c) for c in num.coeffs), max(abs(c) for c in den.coeffs))
    k = min(_low_order_zeros(num, scale), _low_order_zeros(den, scale))
    if k == 0:
        return num, den
    return Polynomial(num.coeffs[k:]), Polynomial(den.coeffs[k:])


@dataclass(frozen=True)
class TfMatrix:
    """2x3 grid of RationalTF: rows are outputs (x, y), columns inputs (u1, u2, g).

    Y(s) = H(s) U(s) with U = (U1(s), U2(s), g/s): the output responses add
    the gravity channel's contribution driven by a step of height g.
    """

    entries: tuple[tuple[RationalTF, ...], ...]

    def __post_init__(self):
        if len(self.entries) != N_OUTPUTS or any(len(r) != N_INPUTS for r in self.entries):
            raise ValueError("TfMatrix must be 2x3")

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]


def charpoly_and_adjugate(A: np.ndarray) -> tuple[Polynomial, list[np.ndarray]]:
    """Faddeev-LeVerrier recurrence.

    Returns the characteristic polynomial det(sI - A) (ascending coefficients)
    and matrices N_0..N_{n-1} with adj(sI - A) = sum_k N_k s^(n-1-k).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    n = A.shape[0]
    eye = np.eye(n)
    coeffs_desc = [1.0]          # s^n downwards
    adj_terms = [eye.copy()]     # N_0
    N = eye.copy()
    for k in range(1, n + 1):
        M = A @ N
        c = -np.trace(M) / k
        coeffs_desc.append(c)
        if k < n:
            N = M + c * eye
            adj_terms.append(N.copy())
    return Polynomial(reversed(coeffs_desc)), adj_terms


def tf_from_ss(ss: StateSpace) -> TfMatrix:
    """Exact H(s) = C (sI - A)^-1 B + D as a matrix of normalized rationals."""
    char, adj_terms = charpoly_and_adjugate(ss.A)
    n = ss.A.shape[0]
    # numerator of entry (i, j): sum_k (C N_k B)[i, j] s^(n-1-k), plus D char
    projected = [ss.C @ Nk @ ss.B for Nk in adj_terms]
    rows = []
    for i in range(N_OUTPUTS):
        row = []
        for j in range(N_INPUTS):
            asc = [projected[k][i, j] for k in range(n)][::-1]  # degree 0..n-1
            num = Polynomial(asc)
            if ss.D[i, j] != 0.0:
                num = num + char.scaled(ss.D[i, j])
            row.append(RationalTF(num=num, den=char))
        rows.append(tuple(row))
    return TfMatrix(entries=tuple(rows))


@dataclass(frozen=True)
class PoleReport:
    """Pole/zero summary of one normalized rational entry."""

    origin_multiplicity: int
    other_poles: tuple[complex, ...] = ()
    zeros: tuple[complex, ...] = ()


def pole_report(tf: RationalTF) -> PoleReport:
    """Count poles at the origin by denominator bookkeeping; list the rest.

    After normalization the origin multiplicity is the number of low-order
    zero coefficients of the denominator. Any residual denominator factor or
    nonconstant numerator is reported via its roots; for this plant both
    lists are empty and a nonempty zero list signals a bug upstream.
    """
    if tf.den.is_zero():
        raise ZeroDivisionError("invalid rational: zero denominator")
    if tf.is_zero():
        return PoleReport(origin_multiplicity=0)
    scale = max(abs(c) for c in tf.den.coeffs)
    mult = _low_order_zeros(tf.den, scale)
    residual = Polynomial(tf.den.coeffs[mult:])
    other = _nontrivial_roots(residual)
    zeros = _nontrivial_roots(tf.num)
    return PoleReport(origin_multiplicity=mult, other_poles=other, zeros=zeros)


def _nontrivial_roots(p: Polynomial) -> tuple[complex, ...]:
    if p.degree < 1:
        return ()
    return tuple(complex(r) for r in np.roots(p.coeffs[::-1]))


def analytic_step_response(tf: RationalTF, t) -> np.ndarray:
    """Closed-form unit-step response of an integrator chain K / s^k.

    The Laplace image K / s^(k+1) inverts to K t^k / k!; sampled on the grid.
    Only pure chains are supported: anything with non-origin poles or a
    nonconstant numerator raises UnsupportedTransferFunctionError.
    """
    t = np.asarray(t, dtype=float)
    if tf.is_zero():
        return np.zeros_like(t)
    report = pole_report(tf)
    if report.other_poles:
        raise UnsupportedTransferFunctionError(
            f"poles away from the origin: {report.other_poles}")
    if tf.num.degree > 0:
        raise UnsupportedTransferFunctionError(
            f"numerator is not a pure gain: {tf.num}")
    k = report.origin_multiplicity
    gain = tf.num.coeffs[0]
    return gain * t ** k / math.factorial(k)


def format_tf_matrix(tfm: TfMatrix) -> str:
    """One line per entry: 'H(x, u2) = -39200 / s^4'."""
    lines = []
    for i, out in enumerate(TF_OUTPUTS):
        for j, inp in enumerate(TF_INPUTS):
            lines.append(f"H({out}, {inp}) = {tfm[i, j]}")
    return "\n".join(lines)


# Symbolic template of the hover-linearized plant, with the gain of each
# nonzero entry as a function of the physical parameters.
_SYMBOLIC_TEMPLATE = (
    ("0", "-g/(J s^4)", "0"),
    ("1/(m s^2)", "0", "-1/s^2"),
)


def _symbolic_gains(params: QuadParams):
    return (
        (0.0, -params.g / params.J, 0.0),
        (1.0 / params.m, 0.0, -1.0),
    )


_SYMBOLIC_ORDERS = ((0, 4, 0), (2, 0, 2))


def format_tf_symbolic(sample_params=(QuadParams(), QuadParams(m=0.37, g=3.1, L=0.2, J=4.2e-3))) -> str:
    """Parametric form of H(s), cross-checked against tf_from_ss.

    For each sample parameter set the numeric matrix is recomputed and every
    entry verified against the template's gain and integrator order before
    the parametric strings are emitted.
    """
    for params in sample_params:
        tfm = tf_from_ss(linearize(params))
        gains = _symbolic_gains(params)
        for i in range(N_OUTPUTS):
            for j in range(N_INPUTS):
                entry = tfm[i, j]
                want = gains[i][j]
                if want == 0.0:
                    if not entry.is_zero():
                        raise AssertionError(f"entry ({i},{j}) expected zero, got {entry}")
                    continue
                rep = pole_report(entry)
                if (rep.origin_multiplicity != _SYMBOLIC_ORDERS[i][j] or rep.other_poles
                        or entry.num.degree != 0):
                    raise AssertionError(f"entry ({i},{j}) is not an integrator chain: {entry}")
                got = entry.num.coeffs[0]
                if not math.isclose(got, want, rel_tol=1e-9):
                    raise AssertionError(f"entry ({i},{j}) gain {got} != {want}")
    lines = []
    for i, out in enumerate(TF_OUTPUTS):
        for j, inp in enumerate(TF_INPUTS):
            lines.append(f"H({out}, {inp}) = {_SYMBOLIC_TEMPLATE[i][j]}")
    return "\n".join(lines)
