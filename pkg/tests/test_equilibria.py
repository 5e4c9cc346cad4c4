import math

import numpy as np
import pytest

from er3bp import (
    Branch,
    DegenerateSystem,
    Method,
    SystemParams,
    gradient,
    locate_newton,
    perturbative_offsets,
    perturbative_point,
)
from er3bp.equilibria import coefficient_system, linearized_system

from conftest import LOCATION_SET, LIBRATION, reference_sets

SQRT3_2 = math.sqrt(3) / 2


class TestCoefficientSystem:
    def test_classical_literal(self):
        a1, *_, b1, _, _ = coefficient_system(SystemParams(0.2))
        # the literal constant term does not vanish in the classical limit
        assert a1 == pytest.approx(0.6)
        assert b1 == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("mu", [0.01, 0.2, 0.45])
    def test_classical_derived_inhomogeneous_terms_vanish(self, mu):
        a1, _, _, b1, _, _ = linearized_system(SystemParams(mu), Branch.L4)
        assert abs(a1) < 1e-14 and abs(b1) < 1e-14

    def test_table_row2_pins(self):
        p = SystemParams(0.02, 0.006, 0.0004, 0.03, 0.002, e=0.2, a=0.92)
        assert coefficient_system(p) == pytest.approx(
            (
                1.2086496521739132,
                0.7178401014492752,
                2.430854898550725,
                0.21942390267380996,
                2.686302202116955,
                0.4530830958304775,
            ),
            rel=1e-13,
        )
        assert linearized_system(p, Branch.L4) == pytest.approx(
            (
                0.27674757671707634,
                2.0019254514939093,
                -0.5837054514939091,
                0.4855946913135901,
                2.8671165013133892,
                0.41068740500305556,
            ),
            rel=1e-13,
        )


class TestPerturbative:
    def test_classical_offsets(self):
        off = perturbative_offsets(SystemParams(0.3))
        assert abs(off.delta1) < 1e-15 and abs(off.delta2) < 1e-15

    def test_classical_point(self):
        p = SystemParams(0.3)
        l4 = perturbative_point(p, Branch.L4)
        l5 = perturbative_point(p, Branch.L5)
        assert (l4.pos.x, l4.pos.y) == pytest.approx((0.2, SQRT3_2), abs=1e-15)
        assert (l5.pos.x, l5.pos.y) == pytest.approx((0.2, -SQRT3_2), abs=1e-15)
        assert l4.method is Method.PERTURBATIVE

    def test_libration_pins(self, libration):
        off = perturbative_offsets(libration)
        assert (off.delta1, off.delta2) == pytest.approx(
            (-0.07795549628770389, -0.016728641236163643), rel=1e-12
        )
        assert off.within_first_order

    def test_offsets_vs_newton_distances(self):
        # mu well above the triaxiality scale, where the expansion holds
        errors = []
        for c in (1.0, 0.5, 0.25):
            p = SystemParams(0.3, **dict(LIBRATION, e=0.0, a=1.0)).scaled_triaxiality(c)
            off = perturbative_offsets(p)
            r1, r2 = locate_newton(p).distances(p)
            errors.append(max(abs(r1 - 1 - off.delta1), abs(r2 - 1 - off.delta2)))
        assert errors[0] < 1e-3
        assert errors[1] / errors[2] > 3.5

    def test_first_order_breaks_down_at_small_mu(self, libration):
        # mu comparable to the triaxiality: the small primary's distance is far from 1 + delta2
        r1, r2 = locate_newton(libration).distances(libration)
        assert abs(r2 - 1 - perturbative_offsets(libration).delta2) > 0.1

    def test_degenerate(self, monkeypatch):
        import er3bp.equilibria as eq

        monkeypatch.setattr(eq, "linearized_system", lambda p, b: (1.0, 1.0, 2.0, 1.0, 1.0, 2.0))
        with pytest.raises(DegenerateSystem):
            eq.perturbative_offsets(SystemParams(0.1))

    def test_literal_source_available(self, libration):
        off = perturbative_offsets(libration, source="literal")
        assert math.isfinite(off.delta1) and math.isfinite(off.delta2)
        with pytest.raises(ValueError):
            perturbative_offsets(libration, source="other")


class TestNewton:
    def test_classical_exact_start(self):
        pt = locate_newton(SystemParams(0.3), Branch.L4, tol=1e-12)
        assert (pt.pos.x, pt.pos.y) == pytest.approx((0.2, 0.8660254037844386), abs=1e-12)
        assert pt.iterations <= 3
        assert pt.method is Method.NEWTON

    @pytest.mark.parametrize("mu", [0.001, 0.05, 0.3, 0.5])
    def test_classical_reduction_both_methods(self, mu):
        p = SystemParams(mu)
        for branch in Branch:
            for pt in (perturbative_point(p, branch), locate_newton(p, branch)):
                assert pt.pos.x == pytest.approx(0.5 - mu, abs=1e-12)
                assert pt.pos.y == pytest.approx(branch.sign * SQRT3_2, abs=1e-12)

    def test_libration_pin(self, libration):
        pt = locate_newton(libration)
        assert pt.residual < 1e-12
        assert (pt.pos.x, pt.pos.y) == pytest.approx((0.26016265195165533, 0.8851697332790928), abs=1e-13)

    def test_table_row2_pin(self):
        p = SystemParams(0.02, 0.006, 0.0004, 0.03, 0.002, e=0.2, a=0.92)
        pt = locate_newton(p)
        assert pt.residual < 1e-12
        assert (pt.pos.x, pt.pos.y) == pytest.approx((0.3322817390437622, 0.7836104136364658), abs=1e-13)

    def test_basin_from_jittered_starts(self, libration):
        ref = locate_newton(libration)
        rng = np.random.default_rng(3)
        for dx, dy in rng.uniform(-0.05, 0.05, (20, 2)):
            pt = locate_newton(libration, guess=(ref.pos.x + dx, ref.pos.y + dy))
            assert math.hypot(pt.pos.x - ref.pos.x, pt.pos.y - ref.pos.y) < 1e-12

    @pytest.mark.parametrize("shape", reference_sets())
    def test_mirror_and_residual(self, shape):
        for mu in (0.01, 0.05, 0.3):
            p = SystemParams(mu, **shape)
            l4, l5 = locate_newton(p, Branch.L4), locate_newton(p, Branch.L5)
            assert l4.residual < 1e-12 and l5.residual < 1e-12
            assert l4.pos.y > 0 > l5.pos.y
            assert l5.pos.x == pytest.approx(l4.pos.x, abs=1e-12)
            assert l5.pos.y == pytest.approx(-l4.pos.y, abs=1e-12)
            assert max(map(abs, gradient(p, l4.pos))) < 1e-12


@pytest.mark.parametrize("e", [0.01, 0.04, 0.06, 0.08, 0.1])
def test_r_l4_decreases_with_mu(e):
    mus = np.round(np.arange(0.01, 0.4501, 0.01), 12)
    r = [locate_newton(SystemParams(mu, **LOCATION_SET, e=e)).r_from_origin for mu in mus]
    assert np.all(np.diff(r) < 0)
