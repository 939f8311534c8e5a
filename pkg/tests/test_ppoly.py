from fractions import Fraction

import pytest

from perturbalg import (
    BalanceQuadratic,
    ExactPolynomial,
    GaussianRational,
    NonUnitError,
    PerturbedPolynomial,
    SeriesRing,
    apply_root_sensitivity,
    decompose,
    dominant_balance,
    euclid_divide,
    monic_shadow,
    pgcd,
    poly_gcd,
    root_correction,
)
from perturbalg.errors import DegenerateError, DomainError, UnsupportedOrderError

from conftest import (
    random_exact_poly,
    random_infinitesimal,
    random_perturbed_poly,
    seeded,
)


@pytest.fixture
def worked_pair():
    ring = SeriesRing(("e1", "e2", "e3"), 8)
    e1, e2, e3 = (ring.generator(g) for g in ring.generators)
    a = PerturbedPolynomial(ring, [e2 - 1, -e1, ring.zero(), ring.one()])
    b = PerturbedPolynomial(ring, [ring.constant(-1), e3, ring.one()])
    return ring, a, b


def test_evaluate(ring, t):
    poly = PerturbedPolynomial(ring, [-1, 0, 1])
    assert poly.evaluate(1 + t) == 2 * t + t**2
    assert poly.evaluate(ring.zero()) == ring.constant(-1)
    shifted = PerturbedPolynomial(ring, [1 - t, -2, 1])
    assert shifted.evaluate(ring.one()) == -t


def test_derivative(ring):
    square = PerturbedPolynomial(ring, [1, -2, 1])
    assert square.derivative(2) == PerturbedPolynomial(ring, [2])
    cubic = PerturbedPolynomial(ring, [0, 0, 0, 1])
    assert cubic.derivative() == PerturbedPolynomial(ring, [0, 0, 3])
    assert PerturbedPolynomial(ring, [5]).derivative() == PerturbedPolynomial(ring, [])


def test_shadow(ring, t):
    poly = PerturbedPolynomial(ring, [-1, t, 1 + t])
    assert poly.shadow() == ExactPolynomial([-1, 0, 1])
    assert PerturbedPolynomial(ring, [0, t]).shadow() == ExactPolynomial([])


def test_shadow_of_worked_divisor(worked_pair):
    _, _, b = worked_pair
    assert b.shadow() == ExactPolynomial([-1, 0, 1])


def test_is_infinitesimal(ring, t):
    assert PerturbedPolynomial(ring, [t**2, t]).is_infinitesimal()
    assert not PerturbedPolynomial(ring, [t, 1]).is_infinitesimal()
    assert PerturbedPolynomial(ring, []).is_infinitesimal()


def test_euclid_worked_instance(worked_pair):
    ring, a, b = worked_pair
    e1, e2, e3 = (ring.generator(g) for g in ring.generators)
    quotient, remainder = euclid_divide(a, b)
    assert quotient == PerturbedPolynomial(ring, [-e3, ring.one()])
    assert remainder == PerturbedPolynomial(ring, [-(1 - e2 + e3), 1 - e1 + e3**2])


def test_euclid_simple(ring, t):
    num = PerturbedPolynomial(ring, [0, 0, 1])
    den = PerturbedPolynomial(ring, [-t, 1])
    quotient, remainder = euclid_divide(num, den)
    assert quotient == PerturbedPolynomial(ring, [t, 1])
    assert remainder == PerturbedPolynomial(ring, [t**2])


def test_euclid_self(worked_pair):
    ring, a, _ = worked_pair
    quotient, remainder = euclid_divide(a, a)
    assert quotient == PerturbedPolynomial(ring, [1])
    assert remainder.is_zero()


def test_euclid_non_unit_divisor(ring, t):
    with pytest.raises(NonUnitError):
        euclid_divide(
            PerturbedPolynomial(ring, [1, 0, 1]), PerturbedPolynomial(ring, [1, t])
        )


def test_division_identity_random():
    rng = seeded(31)
    ring = SeriesRing(("t", "e1"), 6)
    for _ in range(100):
        a = random_perturbed_poly(rng, ring, unit_lead=False)
        b = random_perturbed_poly(rng, ring, unit_lead=True)
        quotient, remainder = euclid_divide(a, b)
        assert b * quotient + remainder == a
        assert remainder.degree < b.degree


def test_shadow_commutation_random():
    rng = seeded(32)
    ring = SeriesRing(("t",), 8)
    for _ in range(50):
        a = random_perturbed_poly(rng, ring, unit_lead=False)
        b = random_perturbed_poly(rng, ring, unit_lead=True)
        quotient, remainder = euclid_divide(a, b)
        exact_q, exact_r = divmod(a.shadow(), b.shadow())
        assert quotient.shadow() == exact_q
        assert remainder.shadow() == exact_r


def test_pgcd_worked_instance(worked_pair):
    ring, a, b = worked_pair
    e1, e2, e3 = (ring.generator(g) for g in ring.generators)
    result, trace = pgcd(a, b)
    assert result == PerturbedPolynomial(ring, [-(1 - e2 + e3), 1 - e1 + e3**2])
    assert monic_shadow(result) == ExactPolynomial([-1, 1])
    assert trace[-1].wholly_infinitesimal


def test_pgcd_exact_zero_chain(ring):
    a = PerturbedPolynomial(ring, [-1, 0, 1])
    b = PerturbedPolynomial(ring, [-1, 1])
    result, trace = pgcd(a, b)
    assert result == b
    assert trace[-1].exact_zero


def test_pgcd_exact_cubic(ring):
    a = PerturbedPolynomial(ring, [-1, 0, 0, 1])
    b = PerturbedPolynomial(ring, [-1, 0, 1])
    result, _ = pgcd(a, b)
    assert monic_shadow(result) == ExactPolynomial([-1, 1])


def test_pgcd_rejects_wholly_infinitesimal_pair(ring, t):
    a = PerturbedPolynomial(ring, [t, t**2])
    b = PerturbedPolynomial(ring, [t**3])
    with pytest.raises(DomainError):
        pgcd(a, b)


def test_pgcd_keeps_input_when_other_is_infinitesimal(ring, t):
    a = PerturbedPolynomial(ring, [1, 0, 1])
    b = PerturbedPolynomial(ring, [t])
    result, trace = pgcd(a, b)
    assert result == a and trace == []


def test_pgcd_shadow_property_random():
    rng = seeded(33)
    ring = SeriesRing(("t",), 8)
    passes = 0
    while passes < 50:
        d = random_exact_poly(rng, max_degree=2)
        if d.degree < 1:
            continue
        a1 = random_exact_poly(rng, max_degree=2)
        a2 = random_exact_poly(rng, max_degree=2)
        if a1.is_zero() or a2.is_zero() or poly_gcd(a1, a2).degree != 0:
            continue
        noisy = []
        for cofactor in (a1, a2):
            product = PerturbedPolynomial.from_exact(d * cofactor, ring)
            noise = PerturbedPolynomial(
                ring,
                [
                    random_infinitesimal(rng, ring)
                    for _ in range(product.degree + 1)
                ],
            )
            noisy.append(product + noise)
        result, _ = pgcd(noisy[0], noisy[1])
        assert monic_shadow(result) == d.monic()
        passes += 1


def test_sensitivity_simple_root(ring, t):
    base = ExactPolynomial([-1, 0, 1])
    shift = PerturbedPolynomial(ring, [t])
    assert apply_root_sensitivity(base, 1, shift) == t * Fraction(-1, 2)


def test_sensitivity_zero_shift(ring):
    base = ExactPolynomial([-1, 0, 1])
    assert apply_root_sensitivity(base, 1, PerturbedPolynomial(ring, [])).is_zero()


def test_sensitivity_double_root(ring, t):
    base = ExactPolynomial([1, -2, 1])
    shift = PerturbedPolynomial(ring, [-t])
    assert apply_root_sensitivity(base, 1, shift) == t


def test_sensitivity_needs_root(ring, t):
    with pytest.raises(DomainError):
        apply_root_sensitivity(ExactPolynomial([-1, 0, 1]), 2, PerturbedPolynomial(ring, [t]))


def test_root_correction_simple(ring, t):
    asym = root_correction(ExactPolynomial([-1, 0, 1]), PerturbedPolynomial(ring, [t]), 1)
    assert asym.order == 1
    assert asym.rhs == t * Fraction(-1, 2)


def test_root_correction_double(ring, t):
    asym = root_correction(
        ExactPolynomial([1, -2, 1]), PerturbedPolynomial(ring, [-t]), 1
    )
    assert asym.order == 2
    assert asym.rhs == t


def test_root_correction_degenerate(ring):
    with pytest.raises(DegenerateError):
        root_correction(
            ExactPolynomial([1, -2, 1]), PerturbedPolynomial(ring, []), 1
        )


def test_root_correction_mult_mismatch(ring, t):
    with pytest.raises(DomainError):
        root_correction(
            ExactPolynomial([1, -2, 1]), PerturbedPolynomial(ring, [-t]), 1, order=1
        )


def test_root_correction_with_decomposition(ring, t):
    # Xi = t*(X - 2) + t^2: decomposition levels t*(-2, 1) then t*(1, 0)
    shift = PerturbedPolynomial(ring, [t**2 - 2 * t, t])
    decomposition = decompose([shift.coefficient(0), shift.coefficient(1)])
    base = ExactPolynomial([-4, 0, 1])  # roots +-2
    asym = root_correction(base, shift, 2, decomposition=decomposition)
    # U_1(X) = X - 2 vanishes at u = 2, so the second level leads
    assert asym.leading_level == 1
    direct = root_correction(base, shift, 2)
    assert asym.rhs.leading_part() == direct.rhs


def test_sensitivity_matches_correction():
    rng = seeded(34)
    ring = SeriesRing(("t",), 8)
    t = ring.generator("t")
    for base, root in [
        (ExactPolynomial([-1, 0, 1]), 1),
        (ExactPolynomial([1, -2, 1]), 1),
        (ExactPolynomial([0, -2, 0, 1]), 0),
    ]:
        shift = PerturbedPolynomial(
            ring, [random_infinitesimal(rng, ring) for _ in range(base.degree)]
        )
        if shift.evaluate(ring.constant(root)).is_zero():
            continue
        sensitivity = apply_root_sensitivity(base, root, shift)
        asym = root_correction(base, shift, root)
        assert sensitivity.leading_part() == asym.rhs


def test_balance_factored_case(ring, t):
    base = ExactPolynomial([1, -2, 1])
    shift = PerturbedPolynomial(ring, [-t, t])  # t*(X-1)
    branches = dominant_balance(base, shift, 1)
    assert len(branches) == 2
    assert branches[0].rhs.is_zero()
    assert branches[1].rhs == -t


def test_balance_pure_constant_case(ring, t):
    base = ExactPolynomial([1, -2, 1])
    branches = dominant_balance(base, PerturbedPolynomial(ring, [-t]), 1)
    assert len(branches) == 1
    assert branches[0].order == 2
    assert branches[0].rhs == t


def test_balance_quadratic_case(ring, t):
    base = ExactPolynomial([1, -2, 1])
    shift = PerturbedPolynomial(ring, [-t - t**2, t])  # t*(X-1) - t^2
    (balance,) = dominant_balance(base, shift, 1)
    assert isinstance(balance, BalanceQuadratic)
    assert balance.quad_coeff == GaussianRational(1)
    assert balance.linear == t
    assert balance.constant == -(t**2)


def test_balance_mixed_scales(ring, t):
    # Xi(u) = -t^3 while Xi'(u) = t: two separated branches
    base = ExactPolynomial([1, -2, 1])
    shift = PerturbedPolynomial(ring, [-t - t**3, t])
    small, large = dominant_balance(base, shift, 1)
    assert small.rhs == t**2
    assert large.rhs == -t


def test_balance_rejects_higher_order(ring, t):
    with pytest.raises(UnsupportedOrderError):
        dominant_balance(
            ExactPolynomial([-1, 3, -3, 1]), PerturbedPolynomial(ring, [t]), 1
        )
