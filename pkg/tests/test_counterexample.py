import math
from fractions import Fraction

import pytest

from lattice_entropy.counterexample import build, localized_static, run
from lattice_entropy.entropy import EntropyConfig, h_w, palm_global_entropy

BITS = EntropyConfig(log_base="2")
# mpmath, 16 digits
PALM_V_BITS = 0.1614405425418206
LOCALIZED_BITS = 0.0807931358959112
CROSSOVER = 0.11354609761014176


def test_anomaly_at_one_percent():
    rep = run(Fraction(1, 100), BITS)
    assert rep.palm_W == 1.0
    assert rep.palm_V == pytest.approx(PALM_V_BITS, abs=1e-12)
    assert rep.anomaly and rep.repaired
    assert rep.localized_alpha == pytest.approx(LOCALIZED_BITS, abs=1e-12)
    assert rep.localized_alpha <= rep.localized_V


def test_natural_log_rescales():
    rep = run(Fraction(1, 100))
    assert rep.palm_W == pytest.approx(math.log(2), abs=1e-15)
    assert rep.palm_V * math.log2(math.e) == pytest.approx(PALM_V_BITS, abs=1e-12)


def test_w_is_attained_at_alpha():
    obj = build(Fraction(1, 100))
    assert h_w(obj.alpha, obj.W.lattice, obj.W.m).value == math.log(2)
    assert obj.V.omega(obj.alpha) == obj.V.lattice


def test_localization_ignores_the_sublattice():
    # the localized value of alpha depends on Omega(alpha) only
    obj = build(Fraction(1, 100))
    assert localized_static(obj.V, obj.alpha).value == h_w(obj.alpha, obj.V.lattice, obj.V.m).value


@pytest.mark.parametrize("eps", [Fraction(1, 100), Fraction(1, 20), Fraction(1, 10), Fraction(1, 9)])
def test_anomaly_below_the_crossover(eps):
    assert eps < CROSSOVER
    assert run(eps, BITS).anomaly


@pytest.mark.parametrize("eps", [Fraction(3, 25), Fraction(1, 4), Fraction(2, 5)])
def test_no_anomaly_above_the_crossover(eps):
    rep = run(eps, BITS)
    assert not rep.anomaly and rep.repaired
    assert rep.palm_W == 1.0


def test_quarter_epsilon_values():
    rep = run(Fraction(1, 4), BITS)
    assert rep.palm_V == pytest.approx(1.5, abs=1e-12)


def test_palm_w_is_one_bit_for_every_epsilon():
    for k in range(1, 50):
        eps = Fraction(k, 100)
        assert BITS.scale(palm_global_entropy(build(eps).W).value) == 1.0


def test_epsilon_out_of_range():
    for eps in (0, Fraction(1, 2), -1, 1):
        with pytest.raises(ValueError):
            build(eps)
