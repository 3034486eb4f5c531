import math

import numpy as np
import pytest

from singmod.quadforms import (
    ClassData,
    Discriminant,
    InconsistencyError,
    QuadForm,
    chi_table,
    class_number_analytic_check,
    fundamental_mask,
    fundamental_range,
    heegner_points,
    is_fundamental,
    kronecker_chi,
    kronecker_symbol,
    principal_form,
    reduced_forms,
)


# -- independent oracles -------------------------------------------------------

def oracle_is_fundamental(d: int) -> bool:
    """Definition check via full factorization (independent of the sieve)."""
    if d >= 0:
        return False
    def squarefree(n):
        f = 2
        while f * f <= n:
            if n % (f * f) == 0:
                return False
            f += 1
        return True
    if d % 4 == 1:
        return squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(-m)
    return False


def oracle_reduced_forms(d: int) -> list[tuple[int, int, int]]:
    """Naive triple loop over (a, b, c) testing the defining conditions."""
    out = []
    amax = int(math.isqrt(-d // 3)) + 1
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            for c in range(a, (-d + b * b) // (4 * a) + 1):
                if b * b - 4 * a * c != d:
                    continue
                if (-a < b <= a < c) or (0 <= b <= a == c):
                    out.append((a, b, c))
    return sorted(out)


# -- fundamentality --------------------------------------------------------------

def test_is_fundamental_examples():
    assert is_fundamental(-4)           # 4m with m = -1 = 3 mod 4
    assert not is_fundamental(-12)      # 4m with m = -3 = 1 mod 4
    assert is_fundamental(-23)          # 1 mod 4 and squarefree
    assert not is_fundamental(-27)      # 27 not squarefree
    assert not is_fundamental(5)
    assert not is_fundamental(-1)


def test_is_fundamental_matches_oracle():
    for d in range(-1, -600, -1):
        assert is_fundamental(d) == oracle_is_fundamental(d), d


def test_fundamental_mask_matches_scalar():
    mask = fundamental_mask(2000)
    for k in range(1, 2001):
        assert bool(mask[k]) == is_fundamental(-k), k


def test_fundamental_range_contents_and_order():
    ds = fundamental_range(-30, -3)
    # oracle enumeration gives ten fundamental discriminants in this window
    expected = [d for d in range(-30, -2) if oracle_is_fundamental(d)]
    assert sorted(ds) == expected
    assert len(ds) == 10
    assert ds == sorted(ds)  # descending magnitude = ascending D value


def test_discriminant_validation():
    with pytest.raises(ValueError):
        Discriminant(-12)
    D = Discriminant(-23)
    assert D.abs_log == pytest.approx(math.log(23))
    assert Discriminant(-3).roots_of_unity == 6
    assert Discriminant(-4).roots_of_unity == 4
    assert Discriminant(-7).roots_of_unity == 2


# -- character -------------------------------------------------------------------

def test_chi_minus4_brute():
    D = Discriminant(-4)
    # chi_{-4}(n) = +1 for n = 1 mod 4, -1 for n = 3 mod 4, 0 on evens
    for n in range(0, 50):
        expect = 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)
        assert kronecker_chi(D, n) == expect, n
    assert kronecker_chi(D, 3) == -1
    assert kronecker_chi(D, 2) == 0


def test_chi_minus23_via_quadratic_residues():
    D = Discriminant(-23)
    assert kronecker_chi(D, 2) == 1
    # for D = 1 mod 4, chi_D(p) = (p|23) by reciprocity; legendre via Euler
    for p in (3, 5, 7, 11, 13, 29, 31):
        legendre = pow(p, 11, 23)
        legendre = -1 if legendre == 22 else legendre
        assert kronecker_chi(D, p) == legendre, p


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -20, -23, -40, -163])
def test_chi_properties(d):
    D = Discriminant(d)
    q = -d
    tab = chi_table(D)
    # table matches the scalar symbol
    for n in range(q):
        assert tab[n] == kronecker_chi(D, n), (d, n)
    # complete multiplicativity on a sample grid
    rng = np.random.default_rng(5)
    for _ in range(60):
        m, n = rng.integers(0, 4 * q, 2)
        assert kronecker_chi(D, int(m * n)) == kronecker_chi(D, int(m)) * kronecker_chi(D, int(n))
    # period |D|
    for n in range(0, 3 * q, max(1, q // 7)):
        assert kronecker_chi(D, n) == tab[n % q]
    # chi(n) = 0 iff gcd(n, D) > 1, and the character sums to zero
    for n in range(q):
        assert (tab[n] == 0) == (math.gcd(n, q) > 1)
    assert int(tab.sum()) == 0


def test_kronecker_symbol_rejects_negative_n():
    with pytest.raises(ValueError):
        kronecker_symbol(-4, -3)


# -- forms -----------------------------------------------------------------------

def test_principal_form_examples():
    assert principal_form(Discriminant(-4)) == QuadForm(1, 0, 1)
    assert principal_form(Discriminant(-7)) == QuadForm(1, 1, 2)
    assert principal_form(Discriminant(-3)) == QuadForm(1, 1, 1)
    for d in (-4, -7, -3, -23, -163):
        assert principal_form(Discriminant(d)).is_reduced


def test_reduced_forms_examples():
    cd = reduced_forms(Discriminant(-4))
    assert [(f.a, f.b, f.c) for f in cd.forms] == [(1, 0, 1)] and cd.h == 1
    cd = reduced_forms(Discriminant(-23))
    assert [(f.a, f.b, f.c) for f in cd.forms] == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    assert cd.h == 3
    cd = reduced_forms(Discriminant(-3))
    assert [(f.a, f.b, f.c) for f in cd.forms] == [(1, 1, 1)] and cd.h == 1


def test_reduced_forms_known_class_numbers():
    known = {-15: 2, -23: 3, -39: 4, -47: 5, -71: 7, -163: 1, -427: 2}
    for d, h in known.items():
        assert reduced_forms(Discriminant(d)).h == h, d


def test_reduced_forms_against_triple_loop():
    for k in range(3, 400):
        if not is_fundamental(-k):
            continue
        cd = reduced_forms(Discriminant(-k))
        assert [(f.a, f.b, f.c) for f in cd.forms] == oracle_reduced_forms(-k), -k


def test_form_invariants_in_range():
    for k in range(3, 600):
        if not is_fundamental(-k):
            continue
        cd = reduced_forms(Discriminant(-k))
        for f in cd.forms:
            assert f.is_reduced
            assert f.disc == -k
            assert f.a <= math.sqrt(k / 3) + 1e-12


def test_quadform_rejects_indefinite():
    with pytest.raises(ValueError):
        QuadForm(1, 5, 1)
    with pytest.raises(ValueError):
        QuadForm(-1, 0, -1)


def test_classdata_requires_principal_form():
    D = Discriminant(-23)
    with pytest.raises(ValueError):
        ClassData(disc=D, forms=(QuadForm(2, 1, 3),), h=1, w=2)


# -- Heegner points --------------------------------------------------------------

def test_heegner_point_examples():
    cd = reduced_forms(Discriminant(-4))
    assert heegner_points(cd)[0].tau == pytest.approx(1j)
    cd = reduced_forms(Discriminant(-7))
    assert heegner_points(cd)[0].tau == pytest.approx((-1 + 1j * math.sqrt(7)) / 2)
    cd = reduced_forms(Discriminant(-23))
    pt = [p for p in heegner_points(cd) if (p.source_form.a, p.source_form.b) == (2, 1)][0]
    assert pt.tau == pytest.approx((-1 + 1j * math.sqrt(23)) / 4)


def test_principal_point_shape():
    for d in (-4, -8, -20, -24):
        pt = heegner_points(reduced_forms(Discriminant(d)))[0]
        assert pt.source_form.is_principal
        assert pt.tau.real == pytest.approx(0.0)
        assert pt.tau.imag == pytest.approx(math.sqrt(-d) / 2)
    for d in (-3, -7, -23):
        pt = heegner_points(reduced_forms(Discriminant(d)))[0]
        assert pt.source_form.is_principal
        assert pt.tau.real == pytest.approx(-0.5)


def test_heegner_points_in_fundamental_domain():
    for k in range(3, 500):
        if not is_fundamental(-k):
            continue
        for pt in heegner_points(reduced_forms(Discriminant(-k))):
            assert abs(pt.tau.real) <= 0.5 + 1e-12
            assert abs(pt.tau) >= 1 - 1e-12


# -- analytic class number formula ------------------------------------------------

def test_class_number_check_minus4():
    cd = reduced_forms(Discriminant(-4))
    assert class_number_analytic_check(cd, math.pi / 4) < 1e-10


def test_class_number_check_minus3():
    cd = reduced_forms(Discriminant(-3))
    assert class_number_analytic_check(cd, math.pi / (3 * math.sqrt(3))) < 1e-10


def test_class_number_check_minus23():
    from singmod.lfunctions import L_one

    D = Discriminant(-23)
    cd = reduced_forms(D)
    assert cd.h == 3
    assert class_number_analytic_check(cd, L_one(D), tol=1e-8) < 1e-8


def test_class_number_check_signals_bad_value():
    cd = reduced_forms(Discriminant(-4))
    with pytest.raises(InconsistencyError):
        class_number_analytic_check(cd, 0.9)
