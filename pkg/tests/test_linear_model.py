import numpy as np
import pytest

from planarquad.dynamics import Input, QuadParams, State, deriv_nonlinear
from planarquad.linear_model import (Polynomial, RationalTF, StateSpace,
                                     UnsupportedTransferFunctionError, analytic_step_response,
                                     charpoly_and_adjugate, deriv_linear, format_tf_matrix,
                                     format_tf_symbolic, linearize, pole_report, poly_to_str,
                                     tf_from_ss)

PARAMS = QuadParams()


class TestLinearize:
    def test_structure(self):
        ss = linearize(PARAMS)
        A_expect = np.zeros((6, 6))
        A_expect[0, 3] = A_expect[1, 4] = A_expect[2, 5] = 1.0
        A_expect[3, 2] = -9.8
        assert np.array_equal(ss.A, A_expect)
        B_mask = np.zeros((6, 3), dtype=bool)
        B_mask[4, 0] = B_mask[4, 2] = B_mask[5, 1] = True
        assert np.array_equal(ss.B != 0, B_mask)
        assert np.array_equal(ss.C, np.array([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]], dtype=float))
        assert not ss.D.any()

    def test_reference_gains(self):
        ss = linearize(PARAMS)
        assert ss.A[3, 2] == -9.8
        assert ss.B[4, 0] == pytest.approx(50.0 / 9.0, rel=1e-12)
        assert ss.B[4, 2] == -1.0
        assert ss.B[5, 1] == pytest.approx(4000.0, rel=1e-12)

    def test_matches_finite_difference_jacobian(self):
        ss = linearize(PARAMS)
        eq_state = State()
        eq_input = Input(u1=PARAMS.m * PARAMS.g)
        h = 1e-6

        def f(state_vec, u1, u2, g):
            d = deriv_nonlinear(State(*state_vec), Input(u1, u2), QuadParams(g=g))
            return np.array(d.as_tuple())

        x0 = np.array(eq_state.as_tuple())
        fd_A = np.empty((6, 6))
        for j in range(6):
            dx = np.zeros(6)
            dx[j] = h
            fd_A[:, j] = (f(x0 + dx, eq_input.u1, 0.0, PARAMS.g)
                          - f(x0 - dx, eq_input.u1, 0.0, PARAMS.g)) / (2 * h)
        assert np.abs(fd_A - ss.A).max() <= 1e-6

        fd_B = np.empty((6, 3))
        fd_B[:, 0] = (f(x0, eq_input.u1 + h, 0.0, PARAMS.g)
                      - f(x0, eq_input.u1 - h, 0.0, PARAMS.g)) / (2 * h)
        fd_B[:, 1] = (f(x0, eq_input.u1, h, PARAMS.g) - f(x0, eq_input.u1, -h, PARAMS.g)) / (2 * h)
        fd_B[:, 2] = (f(x0, eq_input.u1, 0.0, PARAMS.g + h)
                      - f(x0, eq_input.u1, 0.0, PARAMS.g - h)) / (2 * h)
        assert np.abs(fd_B - ss.B).max() <= 1e-6

    def test_shape_validation(self):
        ss = linearize(PARAMS)
        with pytest.raises(ValueError):
            StateSpace(A=ss.A[:5, :5], B=ss.B, C=ss.C, D=ss.D)
        with pytest.raises(ValueError):
            StateSpace(A=ss.A, B=ss.B.T, C=ss.C, D=ss.D)


class TestDerivLinear:
    def test_equilibrium_is_zero(self):
        ss = linearize(PARAMS)
        d = deriv_linear(State(), (0.0, 0.0, 0.0), ss)
        assert d.as_tuple() == (0.0,) * 6

    def test_tilt_couples_into_x(self):
        d = deriv_linear(State(phi=0.1), (0.0, 0.0, 0.0), linearize(PARAMS))
        assert d.ax == pytest.approx(-0.98, rel=1e-12)

    def test_moment_gain(self):
        d = deriv_linear(State(), (0.0, 1.0, 0.0), linearize(PARAMS))
        assert d.alpha == pytest.approx(4000.0, rel=1e-12)

    def test_dimension_error(self):
        with pytest.raises(ValueError):
            deriv_linear(State(), (1.0, 2.0), linearize(PARAMS))


class TestPolynomial:
    def test_trailing_zeros_stripped(self):
        assert Polynomial([1.0, 2.0, 0.0, 0.0]).coeffs == (1.0, 2.0)
        assert Polynomial([0.0, 0.0]).is_zero()

    def test_degree(self):
        assert Polynomial().degree == -1
        assert Polynomial([3.0]).degree == 0
        assert Polynomial([0.0, 0.0, 1.0]).degree == 2

    def test_add_mul(self):
        p = Polynomial([1.0, 1.0])      # 1 + s
        q = Polynomial([-1.0, 1.0])     # -1 + s
        assert (p + q).coeffs == (0.0, 2.0)
        assert (p * q).coeffs == (-1.0, 0.0, 1.0)

    def test_eval(self):
        p = Polynomial([1.0, 2.0, 3.0])
        assert p(2.0) == 1 + 4 + 12

    def test_str(self):
        assert poly_to_str(Polynomial()) == "0"
        assert poly_to_str(Polynomial([0, 0, 0, 0, 1.0])) == "s^4"
        assert poly_to_str(Polynomial([-39200.0])) == "-39200"
        assert poly_to_str(Polynomial([3.0, -2.0, 1.0])) == "3 - 2 s + s^2"


class TestRationalTF:
    def test_cancels_common_powers(self):
        tf = RationalTF(num=Polynomial([0.0, 0.0, 5.0]), den=Polynomial([0.0] * 6 + [1.0]))
        assert tf.num.coeffs == (5.0,)
        assert tf.den.coeffs == (0.0, 0.0, 0.0, 0.0, 1.0)

    def test_monic_denominator(self):
        tf = RationalTF(num=Polynomial([4.0]), den=Polynomial([0.0, 2.0]))
        assert tf.den.coeffs == (0.0, 1.0)
        assert tf.num.coeffs == (2.0,)

    def test_normalization_idempotent(self):
        tf = RationalTF(num=Polynomial([0.0, 0.0, -39200.0]), den=Polynomial([0.0] * 6 + [1.0]))
        again = RationalTF(num=tf.num, den=tf.den)
        assert again.num.coeffs == tf.num.coeffs
        assert again.den.coeffs == tf.den.coeffs

    def test_zero_numerator_collapses(self):
        tf = RationalTF(num=Polynomial(), den=Polynomial([0.0, 0.0, 3.0]))
        assert tf.is_zero()
        assert tf.den.coeffs == (1.0,)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RationalTF(num=Polynomial([1.0]), den=Polynomial())

    def test_str(self):
        tf = RationalTF(num=Polynomial([-39200.0]), den=Polynomial([0, 0, 0, 0, 1.0]))
        assert str(tf) == "-39200 / s^4"


class TestTfFromSs:
    def test_characteristic_polynomial_is_pure_s6(self):
        char, _ = charpoly_and_adjugate(linearize(PARAMS).A)
        assert char.coeffs == (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0)

    def test_reference_matrix(self):
        tfm = tf_from_ss(linearize(PARAMS))
        assert tfm[0, 0].is_zero()
        assert tfm[0, 2].is_zero()
        assert tfm[1, 1].is_zero()
        x_u2 = tfm[0, 1]
        assert x_u2.num.degree == 0
        assert x_u2.num.coeffs[0] == pytest.approx(-39200.0, rel=1e-9)
        assert x_u2.den.coeffs == (0.0, 0.0, 0.0, 0.0, 1.0)
        y_u1 = tfm[1, 0]
        assert y_u1.num.coeffs[0] == pytest.approx(50.0 / 9.0, rel=1e-9)
        assert y_u1.den.coeffs == (0.0, 0.0, 1.0)
        y_g = tfm[1, 2]
        assert y_g.num.coeffs[0] == pytest.approx(-1.0, rel=1e-9)
        assert y_g.den.coeffs == (0.0, 0.0, 1.0)

    def test_structure_is_parameter_invariant(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            params = QuadParams(m=rng.uniform(0.05, 5), g=rng.uniform(0.1, 30),
                                L=rng.uniform(0.01, 1), J=rng.uniform(1e-5, 1e-1))
            tfm = tf_from_ss(linearize(params))
            mults = [[pole_report(tfm[i, j]).origin_multiplicity if not tfm[i, j].is_zero() else 0
                      for j in range(3)] for i in range(2)]
            assert mults == [[0, 4, 0], [2, 0, 2]]
            for i in range(2):
                for j in range(3):
                    rep = pole_report(tfm[i, j])
                    assert rep.zeros == ()
                    assert rep.other_poles == ()

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            charpoly_and_adjugate(np.zeros((6, 5)))

    def test_format(self):
        text = format_tf_matrix(tf_from_ss(linearize(PARAMS)))
        assert "H(x, u2) = -39200 / s^4" in text
        assert "H(y, g) = -1 / s^2" in text

    def test_symbolic_format(self):
        text = format_tf_symbolic()
        assert "H(x, u2) = -g/(J s^4)" in text
        assert "H(y, u1) = 1/(m s^2)" in text
        assert "H(y, g) = -1/s^2" in text


class TestPoleReport:
    def test_quadruple_integrator(self):
        tf = RationalTF(num=Polynomial([-39200.0]), den=Polynomial([0, 0, 0, 0, 1.0]))
        rep = pole_report(tf)
        assert rep.origin_multiplicity == 4
        assert rep.other_poles == ()
        assert rep.zeros == ()

    def test_double_integrator(self):
        tf = RationalTF(num=Polynomial([50.0 / 9.0]), den=Polynomial([0, 0, 1.0]))
        assert pole_report(tf).origin_multiplicity == 2

    def test_constant(self):
        rep = pole_report(RationalTF(num=Polynomial([1.0]), den=Polynomial([1.0])))
        assert rep.origin_multiplicity == 0
        assert rep.other_poles == ()
        assert rep.zeros == ()

    def test_off_origin_pole_reported(self):
        tf = RationalTF(num=Polynomial([1.0]), den=Polynomial([2.0, 1.0]))  # 1/(s+2)
        rep = pole_report(tf)
        assert rep.origin_multiplicity == 0
        assert len(rep.other_poles) == 1
        assert rep.other_poles[0] == pytest.approx(-2.0)


class TestAnalyticStepResponse:
    def test_quad_chain_sample(self):
        tf = RationalTF(num=Polynomial([-39200.0]), den=Polynomial([0, 0, 0, 0, 1.0]))
        out = analytic_step_response(tf, [0.1])
        assert out[0] == pytest.approx(-39200.0 * 0.1 ** 4 / 24.0, rel=1e-12)
        assert out[0] == pytest.approx(-0.16333, rel=1e-4)

    def test_double_chain_sample(self):
        tf = RationalTF(num=Polynomial([50.0 / 9.0]), den=Polynomial([0, 0, 1.0]))
        assert analytic_step_response(tf, [1.0])[0] == pytest.approx(50.0 / 18.0, rel=1e-12)

    def test_zero_time(self):
        tf = RationalTF(num=Polynomial([7.0]), den=Polynomial([0, 1.0]))
        assert analytic_step_response(tf, [0.0])[0] == 0.0

    def test_zero_entry(self):
        tf = RationalTF(num=Polynomial(), den=Polynomial([1.0]))
        assert np.array_equal(analytic_step_response(tf, [0.0, 1.0]), [0.0, 0.0])

    def test_rejects_off_origin_pole(self):
        tf = RationalTF(num=Polynomial([1.0]), den=Polynomial([1.0, 1.0]))
        with pytest.raises(UnsupportedTransferFunctionError):
            analytic_step_response(tf, [1.0])

    def test_rejects_nonconstant_numerator(self):
        tf = RationalTF(num=Polynomial([1.0, 1.0]), den=Polynomial([0, 0, 0, 1.0]))
        with pytest.raises(UnsupportedTransferFunctionError):
            analytic_step_response(tf, [1.0])


def test_symbolic_entry_for_generic_params():
    # -g/(J s^4) with parameters left symbolic: spot-check two numeric draws
    for params in (QuadParams(m=0.5, g=3.0, L=0.2, J=1e-3), QuadParams(m=2.0, g=20.0, L=0.5, J=0.05)):
        tfm = tf_from_ss(linearize(params))
        entry = tfm[0, 1]
        assert entry.num.coeffs[0] == pytest.approx(-params.g / params.J, rel=1e-9)
        assert pole_report(entry).origin_multiplicity == 4
