import warnings
from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from pcrit import blowup
from pcrit.equations import (
    CentralCharge,
    EquationParams,
    central_charge,
    central_charge_params,
    dhym_central_charge,
    dhym_charge_data,
    dhym_params,
    dhym_surface_rescaled,
    hym_params,
    j_equation_params,
    monge_ampere_params,
    p_value,
    params_from_json,
    params_to_json,
)
from pcrit.errors import (
    DegenerateEquationWarning,
    DegreeMismatch,
    PositivityViolated,
    VanishingCharge,
    WrongDegree,
)
from pcrit.exact import Gaussian, Surd

from strategies import ample_classes, blp2_bundles

R, H, D = blowup.RING, blowup.H, blowup.D

# -- sympy model of the blow-up ring -------------------------------------------------
_h, _d = sp.symbols("h d")


def sym(c):
    """Class -> polynomial, pt = h^2."""
    return c["1"] + c["H"] * _h + c["D"] * _d + c["pt"] * _h**2


def sym_int(expr):
    """Integral over the surface: degree-2 part with h^2 -> 1, d^2 -> -1, hd -> 0."""
    p = sp.Poly(sp.expand(expr), _h, _d)
    return sp.expand(p.coeff_monomial(_h**2) - p.coeff_monomial(_d**2))


def sym_ch(F):
    return sum(sym(c) for c in F.ch)


def sym_Z_dhym(omega, F):
    """``∫ tr (omega + iF)^2`` expanded through the Chern character."""
    w = sym(omega)
    return sp.expand(sum(comb(2, k) * sp.factorial(k) * sp.I**k * sym_int(w ** (2 - k) * sym(F.ch[k])) for k in range(3)))


def as_sym(x):
    if isinstance(x, Surd):
        return sp.Rational(x.a.numerator, x.a.denominator) + sp.Rational(x.b.numerator, x.b.denominator) / sp.sqrt(
            sp.Rational(x.radicand.numerator, x.radicand.denominator)
        )
    x = Fraction(x)
    return sp.Rational(x.numerator, x.denominator)


def phase_value_matches(p, ZE, ZF):
    """Check ``p == Im(conj(ZE) ZF) / |ZE|`` exactly, comparing squares and signs."""
    num = sp.im(sp.conjugate(ZE) * ZF)
    N = sp.re(ZE) ** 2 + sp.im(ZE) ** 2
    if isinstance(p, Surd):
        if p.a != 0:
            return False
        v, w = as_sym(p.b), as_sym(p.radicand)
    else:
        v, w = as_sym(p), sp.Integer(1)
    return sp.sign(v) == sp.sign(num) and v**2 * N == num**2 * w


# -- worked values ---------------------------------------------------------------------

def test_j_constant_and_balance():
    for F in (blowup.L1, blowup.L2, blowup.E):
        zeta, c_j = j_equation_params(R, blowup.OMEGA, F)
        assert c_j == Fraction(5, 16)
        assert p_value(R, zeta, F) == 0
    zeta, _ = j_equation_params(R, blowup.OMEGA, blowup.E)
    assert p_value(R, zeta, blowup.L1) == 0
    assert p_value(R, zeta, blowup.L2) == 0


def test_dhym_charge_of_L1():
    Z = dhym_central_charge(R, blowup.OMEGA, blowup.L1)
    assert Z == Gaussian(-45, 30)
    # (omega + i c1)^2 for a line bundle
    w, c = sym(blowup.OMEGA), sym(blowup.L1.ch[1])
    assert sym_int(sp.expand((w + sp.I * c) ** 2)) == -45 + 30 * sp.I
    zeta = dhym_params(R, blowup.OMEGA, blowup.L1)
    assert zeta.surd_zetas[2] == 30 * R.one()
    # coefficients: zeta_2 = 30/|Z|, zeta_1 = -90 omega/|Z|, zeta_0 = -30 omega^2/|Z|
    assert zeta.surd_zetas[1] == -90 * blowup.OMEGA
    assert zeta.surd_zetas[0] == -30 * (blowup.OMEGA * blowup.OMEGA)
    assert zeta.radicand == 45**2 + 30**2


def test_hym_constant():
    zeta = hym_params(R, blowup.OMEGA, blowup.E)
    # slope of E: deg = 25, rk 2, vol 3
    assert zeta.zetas[0] == -Fraction(25, 6) * (blowup.OMEGA * blowup.OMEGA)
    assert zeta.zetas[1] == blowup.OMEGA


def test_monge_ampere_divides_by_rank():
    zeta = monge_ampere_params(R, blowup.E)
    assert zeta.zetas[2] == R.one()
    assert zeta.zetas[0] == -40 * R.pt()
    assert p_value(R, zeta, blowup.E) == 0


# -- oracles for P on sub-bundles ----------------------------------------------------

@given(ample_classes(), blp2_bundles(), blp2_bundles())
def test_hym_value_is_slope_difference(omega, E, F):
    zeta = hym_params(R, omega, E)
    deg = lambda B: sym_int(sym(omega) * sym(B.ch[1]))
    expected = deg(F) - F.rank * deg(E) / sp.Integer(E.rank)
    assert as_sym(p_value(R, zeta, F)) == expected


@given(ample_classes(), blp2_bundles(), blp2_bundles())
def test_dhym_value_is_phase_pairing(omega, E, F):
    ZE, ZF = sym_Z_dhym(omega, E), sym_Z_dhym(omega, F)
    if ZE == 0:
        with pytest.raises(VanishingCharge):
            dhym_params(R, omega, E)
        return
    zeta = dhym_params(R, omega, E)
    assert phase_value_matches(p_value(R, zeta, F), ZE, ZF)
    assert dhym_central_charge(R, omega, F) == Gaussian(sp.re(ZF), sp.im(ZF))


gaussians = st.builds(
    Gaussian,
    st.fractions(-5, 5, max_denominator=4),
    st.fractions(-5, 5, max_denominator=4),
)


@st.composite
def central_charges(draw):
    rho = tuple(draw(gaussians) for _ in range(3))
    a, b = draw(st.integers(-3, 3)), draw(st.integers(-3, 3))
    U = (R.one(), a * H + b * D, draw(st.integers(-3, 3)) * R.pt())
    return CentralCharge(rho, draw(ample_classes()), U)


def sym_Z(cc, F):
    tot = 0
    U = sum(sym(u) for u in cc.U)
    for d, r in enumerate(cc.rho):
        rr = as_sym(r.re) + sp.I * as_sym(r.im)
        tot += rr * sym_int(sym(cc.omega) ** d * U * sym_ch(F))
    return sp.expand(tot)


@given(central_charges(), blp2_bundles(), blp2_bundles())
def test_central_charge_value_is_phase_pairing(cc, E, F):
    ZE, ZF = sym_Z(cc, E), sym_Z(cc, F)
    Z = central_charge(R, cc, E)
    assert as_sym(Z.re) + sp.I * as_sym(Z.im) == ZE
    if ZE == 0:
        with pytest.raises(VanishingCharge):
            central_charge_params(R, cc, E)
        return
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateEquationWarning)
        zeta = central_charge_params(R, cc, E)
    assert phase_value_matches(p_value(R, zeta, F), ZE, ZF)


@given(ample_classes(), blp2_bundles())
def test_central_charge_reproduces_dhym(omega, E):
    if dhym_central_charge(R, omega, E) == Gaussian(0):
        return
    a = central_charge_params(R, dhym_charge_data(R, omega), E)
    b = dhym_params(R, omega, E)
    assert a.zetas == b.zetas and a.surd_zetas == b.surd_zetas and a.radicand == b.radicand


def test_degenerate_central_charge_warns():
    cc = CentralCharge((Gaussian(1), Gaussian(0), Gaussian(0)), blowup.OMEGA, (R.one(),))
    # Z real for every bundle, so Im(conj(Z) rho_l) vanishes
    with pytest.warns(DegenerateEquationWarning):
        central_charge_params(R, cc, blowup.E)


@given(ample_classes(), blp2_bundles())
def test_j_and_ma_values(omega, E):
    top = R.integrate(E.ch[2])
    mixed = R.integrate(omega * E.ch[1])
    if top <= 0 or mixed <= 0:
        with pytest.raises(PositivityViolated):
            j_equation_params(R, omega, E)
    else:
        zeta, c_j = j_equation_params(R, omega, E)
        assert c_j == mixed / (2 * top)
        assert p_value(R, zeta, E) == 0
    assert p_value(R, monge_ampere_params(R, E), E) == 0


# -- rescaled surface family -------------------------------------------------------

def closed_form(e1, e2):
    return Fraction(24, 5) * e2 + Fraction(3, 80) * (1 - e2**2) * (5 - 11 * e2) * e1**2


def test_rescaled_symbolic_p_of_L1():
    e1, e2 = sp.symbols("e1 e2")
    w = sym(blowup.OMEGA) + e2 * sym(blowup.ALPHA)
    E, L1 = blowup.E, blowup.L1
    w2 = sym_int(w * w)
    wc1 = sym_int(w * sym(E.ch[1]))
    ch2 = sym_int(sym(E.ch[2]))
    c_j, c_hym, C = wc1 / (2 * ch2), wc1 / (w2 * 2), w2 * 2 / (2 * ch2)
    s = C * e1**2
    P = 2 * c_j * sym_int(sym(L1.ch[2])) - (1 - s) * sym_int(w * sym(L1.ch[1])) - s * c_hym * w2
    target = sp.Rational(24, 5) * e2 + sp.Rational(3, 80) * (1 - e2**2) * (5 - 11 * e2) * e1**2
    assert sp.cancel(P - target) == 0


@given(st.fractions(0, 1, max_denominator=20), st.fractions(-1, 1, max_denominator=20).filter(lambda x: abs(x) < Fraction(1, 2)))
def test_rescaled_matches_closed_form(e1, e2):
    res = dhym_surface_rescaled(R, blowup.OMEGA, blowup.ALPHA, e1, e2, blowup.E)
    assert p_value(R, res.params, blowup.E) == 0
    assert p_value(R, res.params, blowup.L1) == closed_form(e1, e2)


def test_rescaled_constants_at_origin():
    res = dhym_surface_rescaled(R, blowup.OMEGA, blowup.ALPHA, 0, 0, blowup.E)
    assert res.c_j == Fraction(5, 16)
    assert res.c_hym == Fraction(25, 6)
    assert res.c_const == Fraction(3, 40)


# -- algebra and serialisation -------------------------------------------------------

def test_params_validation():
    with pytest.raises(DegreeMismatch):
        EquationParams.from_classes(R, {0: H})
    with pytest.raises(WrongDegree):
        hym_params(R, R.pt(), blowup.E)


@given(ample_classes(), blp2_bundles(), st.fractions(-5, 5, max_denominator=7))
def test_p_value_is_linear_in_zeta(omega, F, q):
    a = hym_params(R, omega, blowup.E)
    b, _ = j_equation_params(R, blowup.OMEGA, blowup.E)
    assert p_value(R, a + q * b, F) == p_value(R, a, F) + q * p_value(R, b, F)


def test_params_json_round_trip():
    for zeta in (
        hym_params(R, blowup.OMEGA, blowup.E),
        dhym_params(R, blowup.OMEGA, blowup.L1),
        monge_ampere_params(R, blowup.E),
    ):
        back = params_from_json(R, params_to_json(zeta))
        assert back == zeta
