"""Hyperelliptic segment integrals, solvers, and parameter maps."""

import cmath
import math

import pytest

from flatsurfkit.numeric import ALPHA, to_float
from flatsurfkit.periods import (
    BranchAmbiguityError,
    CurveA,
    CurveS,
    CurveTU,
    PeriodsError,
    QuadratureConfig,
    a_from_s,
    a_from_tu,
    induced_q_coefficient,
    phi_map,
    psi_map,
    segment_integrals,
    shape_ratios,
    silhol_periods,
    silhol_ratio,
    solve_t_rectangle,
    solve_tu,
)

A = to_float(ALPHA)
T_AY = 1.91709843377
U_AY = 2.07067976690


class TestSegmentIntegrals:
    def test_ay_curve_satisfies_the_integral_system(self):
        j1, j2, j3 = segment_integrals(CurveTU(T_AY, U_AY))
        assert abs(j1 / j2 - A) < 1e-8
        assert abs(j3 / j1 - (1 + A)) < 1e-8

    def test_rectangle_line_tail_identity(self):
        # x -> t/x fixes the integrand when u = 1, so J3 = J1
        for t in (1.3, 2.0, 3.7, 4.9):
            j1, _, j3 = segment_integrals(CurveTU(t, 1.0))
            assert abs(j3 / j1 - 1.0) < 1e-9

    def test_quadrature_self_validation(self):
        c = CurveTU(2.5, 1.5)
        coarse = segment_integrals(c, QuadratureConfig(tol=1e-8))
        fine = segment_integrals(c, QuadratureConfig(tol=1e-13))
        for x, y in zip(coarse, fine):
            assert abs(x - y) < 1e-8

    def test_domain_validation(self):
        with pytest.raises(PeriodsError):
            segment_integrals(CurveTU(0.9, 1.0))
        with pytest.raises(PeriodsError):
            segment_integrals(CurveTU(2.0, -1.0))


class TestShapeRatios:
    def test_ay_values(self):
        r1, r2 = shape_ratios(CurveTU(T_AY, U_AY))
        assert abs(r1 - 1 / A) < 1e-8
        assert abs(r2 - (1 + A)) < 1e-8

    def test_u_one_gives_rectangle(self):
        _, r2 = shape_ratios(CurveTU(2.0, 1.0))
        assert abs(r2 - 1.0) < 1e-9


class TestSolveTU:
    def test_arnoux_yoccoz_values(self):
        c = solve_tu((1 / A, 1 + A))
        assert abs(c.t - T_AY) < 1e-8
        assert abs(c.u - U_AY) < 1e-8
        r1, r2 = shape_ratios(c)
        assert max(abs(r1 - 1 / A), abs(r2 - (1 + A))) < 1e-10

    def test_round_trip(self):
        target = shape_ratios(CurveTU(2.5, 1.5))
        c = solve_tu(target)
        assert abs(c.t - 2.5) < 1e-7 and abs(c.u - 1.5) < 1e-7

    def test_rectangle_target_gives_u_one(self):
        r1, _ = shape_ratios(CurveTU(2.0, 1.0))
        c = solve_tu((r1, 1.0))
        assert abs(c.u - 1.0) < 1e-8

    def test_round_trip_grid(self):
        for t0 in (1.2, 2.6, 4.0):
            for u0 in (0.5, 1.75, 4.0):
                c = solve_tu(shape_ratios(CurveTU(t0, u0)))
                assert abs(c.t - t0) < 1e-7 and abs(c.u - u0) < 1e-7

    def test_infeasible_target_rejected(self):
        with pytest.raises(PeriodsError):
            solve_tu((-1.0, 1.5))
        with pytest.raises(PeriodsError):
            solve_tu((1.0, 0.0))


class TestSolveRectangle:
    def test_round_trip(self):
        for t0 in (1.7, 3.0, 6.0):
            r1, _ = shape_ratios(CurveTU(t0, 1.0))
            mu = 1.0 / r1
            t = solve_t_rectangle(mu)
            assert abs(t - t0) < 1e-8

    def test_mu_one_residual(self):
        t = solve_t_rectangle(1.0)
        j1, j2, _ = segment_integrals(CurveTU(t, 1.0))
        assert abs(j1 - j2) < 1e-10

    def test_monotone_scan(self):
        ts = [solve_t_rectangle(mu) for mu in (0.3, 0.5, 0.8, 1.2)]
        assert all(x > 1 for x in ts)
        assert ts == sorted(ts, reverse=True)


class TestParameterMaps:
    def test_phi_special_points(self):
        c = CurveTU(2.0, 1.0)
        tu = 2.0
        assert phi_map(c, 1.0) == 0
        assert cmath.isinf(phi_map(c, -tu))
        assert abs(phi_map(c, 1j * math.sqrt(tu)) - (-1)) < 1e-12
        assert abs(phi_map(c, -1j * math.sqrt(tu)) - 1) < 1e-12

    def test_a_from_tu_formula(self):
        got = a_from_tu(CurveTU(2.0, 1.0))
        assert abs(got - 1j * math.sqrt(0.5) * 0.5) < 1e-15

    def test_a_and_its_reciprocal(self):
        c = CurveTU(3.1, 0.8)
        a = a_from_tu(c)
        inv = 1j * math.sqrt(c.t / c.u) * (1 + c.u) / (1 - c.t)
        assert abs(a * inv - 1) < 1e-12

    def test_a_from_tu_positive_imaginary(self):
        for t in (1.2, 2.0, 5.0):
            for u in (0.3, 1.0, 4.0):
                a = a_from_tu(CurveTU(t, u))
                assert a.real == 0 and a.imag > 0

    def test_psi_special_points(self):
        s = (math.sqrt(3) + 1j) / 2
        assert abs(psi_map(s, 1j) - (-1)) < 1e-15
        assert abs(psi_map(s, -1j) - 1) < 1e-15
        assert psi_map(s, s) == 0
        assert cmath.isinf(psi_map(s, -1 / s))

    def test_a_from_s_escalator(self):
        assert a_from_s((math.sqrt(3) + 1j) / 2) == 0.5

    def test_a_from_s_unit_circle(self):
        for theta in (0.4, 1.0, 1.4):
            s = cmath.exp(1j * theta)
            assert abs(a_from_s(s) - s.imag) < 1e-15

    def test_a_from_s_in_unit_interval(self):
        for s in (0.3 + 0.9j, -1.2 + 2.0j, 0.1 + 0.2j):
            assert 0 < a_from_s(s) < 1

    def test_a_from_s_domain(self):
        with pytest.raises(PeriodsError):
            a_from_s(1j)
        with pytest.raises(PeriodsError):
            a_from_s(1.0 - 0.5j)

    def test_induced_q_coefficient(self):
        assert induced_q_coefficient(CurveTU(2.0, 0.5)) == 0
        assert abs(induced_q_coefficient(CurveTU(2.0, 1.0)) - 1j / math.sqrt(2)) < 1e-15
        for t, u in ((1.5, 0.7), (3.0, 2.0)):
            k = induced_q_coefficient(CurveTU(t, u))
            assert k.real == 0


class TestSilholRatio:
    def test_real_on_positive_imaginary_axis(self):
        for a in (0.5j, 2j):
            r = silhol_ratio(CurveA(a))
            assert abs(r.imag) / abs(r) < 1e-8

    def test_not_real_for_real_a(self):
        r = silhol_ratio(CurveA(0.5))
        assert abs(r.imag) > 1e-4

    def test_path_refinement_stable(self):
        for a in (0.5j, 0.5):
            coarse = silhol_periods(CurveA(a), checkpoints=512)
            fine = silhol_periods(CurveA(a), checkpoints=1024 + 3)
            assert abs(coarse[0] - fine[0]) < 1e-10
            assert abs(coarse[1] - fine[1]) < 1e-10

    def test_branch_ambiguity_near_interior_root(self):
        # a sits 1e-13 off the segment [0, 1/a]: ambiguous continuation
        with pytest.raises(BranchAmbiguityError):
            silhol_ratio(CurveA(0.5 + 1e-13j))

    def test_singular_curve_rejected(self):
        with pytest.raises(PeriodsError):
            silhol_ratio(CurveA(1.0))


class TestCurveDomains:
    def test_curve_s(self):
        with pytest.raises(PeriodsError):
            CurveS(1j).validate()
        with pytest.raises(PeriodsError):
            CurveS(0.5 - 1j).validate()
        CurveS(0.5 + 1j).validate()
