import math

import numpy as np
import pytest

from rsm2d import domain_optimizer as opt
from rsm2d import potentials
from rsm2d.errors import NoInteriorMinimumError


def test_free_particle_energy_is_box_ground_state():
    for L in (1.0, 3.0, 7.5):
        assert opt.ground_energy(4, L, potentials.free) == pytest.approx(2 * (math.pi / L) ** 2, rel=1e-14)
    es = [opt.ground_energy(4, L, potentials.free) for L in np.linspace(1, 20, 9)]
    assert np.all(np.diff(es) < 0)


def test_sho_n6_curve_has_interior_minimum():
    ls = np.linspace(3.0, 12.0, 31)
    es = np.array([opt.ground_energy(6, L, potentials.sho) for L in ls])
    i = int(np.argmin(es))
    assert 0 < i < len(ls) - 1
    assert es[i] == pytest.approx(2.0, rel=1e-3)


def test_sho_n22_at_table_length():
    assert abs(opt.ground_energy(22, 11.97, potentials.sho) - 2.0) <= 1e-11 * 2.0


def test_excited_state_target():
    e1 = opt.ground_energy(10, 8.0, potentials.sho, state=1)
    assert e1 == pytest.approx(4.0, rel=1e-4)


def test_golden_section_on_parabola():
    x, fx = opt.golden_section(lambda t: (t - 1.2345) ** 2 + 3.0, 0.0, 3.0, tol=1e-6)
    assert abs(x - 1.2345) < 1e-6
    assert fx == pytest.approx(3.0)


def test_find_optimal_length_sho22():
    l_hat, e0 = opt.find_optimal_length(22, potentials.sho, (6, 20))
    assert abs(l_hat - 11.97) <= 0.1
    assert abs(e0 - 2.0) <= 1e-13


def test_no_interior_minimum_for_free_particle():
    with pytest.raises(NoInteriorMinimumError) as info:
        opt.find_optimal_length(5, potentials.free, (1, 10))
    assert info.value.n_basis == 5
    assert "widen the bracket" in str(info.value)


def test_bad_bracket():
    with pytest.raises(ValueError):
        opt.find_optimal_length(5, potentials.sho, (10, 1))


def test_curve_samples_and_interpolation(sho_curve):
    ns = [n for n, _, _ in sho_curve.samples]
    assert ns == [6, 10, 14, 18, 22]
    n22, l22, e22 = sho_curve.samples[-1]
    assert abs(l22 - 11.97) <= 0.1
    for n, l, _ in sho_curve.samples:
        assert sho_curve(n) == l
    assert np.all(np.diff(sho_curve.l_hat) > 0)
    between = sho_curve(12)
    assert sho_curve.l_hat[1] < between < sho_curve.l_hat[2]


def test_curve_minimum_certificate(sho_curve):
    for n, l, e in sho_curve.samples:
        for d in (-0.05, 0.05):
            assert opt.ground_energy(n, l + d, potentials.sho) >= e


def test_curve_variational(sho_curve):
    assert np.all(sho_curve.energies >= 2.0 - 1e-9)


def test_refinement_payoff(sho_curve):
    l14 = sho_curve(14)
    err = abs(opt.ground_energy(14, l14, potentials.sho) - 2.0)
    for d in (-2.0, 2.0):
        assert abs(opt.ground_energy(14, l14 + d, potentials.sho) - 2.0) >= 10 * err


def test_build_curve_rejects_duplicates_and_short_lists():
    with pytest.raises(ValueError):
        opt.build_curve([6, 6, 10], potentials.sho)
    with pytest.raises(ValueError):
        opt.build_curve([6, 10], potentials.sho)


def test_build_curve_names_failing_n():
    with pytest.raises(NoInteriorMinimumError, match="N=4"):
        opt.build_curve([4, 5, 6], potentials.free, bracket=(1, 5))


def test_curve_roundtrip(tmp_path, sho_curve):
    path = tmp_path / "curve.txt"
    opt.write_curve(sho_curve, path)
    assert path.read_text().splitlines()[0] == "N L_hat E0"
    back = opt.read_curve(path)
    assert back.samples == sho_curve.samples
    assert back(13) == sho_curve(13)


def test_read_curve_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("n l e\n6 1 2\n")
    with pytest.raises(ValueError):
        opt.read_curve(p)


def test_curve_requires_increasing_samples():
    with pytest.raises(ValueError):
        opt.LhatCurve(np.array([6, 4, 8]), np.ones(3), np.ones(3))


def test_anisotropic_coordinate_descent():
    # x^2 + 4 y^2: the y-well is narrower, so its optimal box is shorter
    def build(lx, ly=None):
        return potentials.from_monomials([(1.0, 2, 0), (4.0, 0, 2)], lx, lx if ly is None else ly)

    lx, ly, e = opt.find_optimal_lengths(10, build, (3, 16))
    assert ly < lx
    assert e == pytest.approx(1.0 + 2.0, rel=1e-5)
