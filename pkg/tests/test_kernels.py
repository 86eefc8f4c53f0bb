"""Tests for Fourier kernels and their validity checks."""

from __future__ import annotations

import numpy as np
import pytest

from atomdeconv.errors import (
    IntegralNotTwo,
    InvalidParameter,
    InvalidSpecString,
    KernelKindMismatch,
    NotOneAtZero,
    RatioUnbounded,
)
from atomdeconv.kernels import (
    FourierKernel,
    KernelKind,
    paper_u_kernel,
    parse_kernel,
    phi_sinc,
    phi_u_paper,
    phi_w_default,
    poly_w_kernel,
    sinc_kernel,
    validate_u_kernel,
    validate_w_kernel,
)


class TestKernelFunctions:
    """Closed-form kernel values."""

    def test_paper_u_values(self) -> None:
        """The atom kernel vanishes at zero and outside [-1, 1]."""

        assert phi_u_paper(0.0) == 0.0
        assert phi_u_paper(0.5) == pytest.approx(0.7613525390625, rel=1e-15)
        assert phi_u_paper(1.0) == 0.0
        assert phi_u_paper(1.5) == 0.0

    def test_kernels_are_symmetric(self) -> None:
        """Every shipped kernel is an even function."""

        t = np.linspace(0.0, 1.5, 31)
        for phi in (phi_u_paper, phi_sinc, lambda x: phi_w_default(x, 6.0)):
            assert np.array_equal(phi(t), phi(-t))

    def test_scalar_input_returns_float(self) -> None:
        """Scalars in, scalars out."""

        assert isinstance(phi_u_paper(0.25), float)
        assert isinstance(phi_sinc(2.0), float)
        assert isinstance(phi_w_default(0.5, 6.0), float)

    def test_sinc_is_closed_indicator(self) -> None:
        """The sinc transform is one on the closed unit interval."""

        assert phi_sinc(1.0) == 1.0
        assert phi_sinc(-1.0) == 1.0
        assert phi_sinc(1.0001) == 0.0

    def test_poly_w_values(self) -> None:
        """1 - |t|^alpha on the unit interval."""

        assert phi_w_default(0.5, 6.0) == 0.984375
        assert phi_w_default(0.0, 6.0) == 1.0
        assert phi_w_default(2.0, 6.0) == 0.0
        with pytest.raises(InvalidParameter):
            phi_w_default(0.5, 0.0)


class TestParseKernel:
    """Kernel identifiers."""

    def test_known_identifiers(self) -> None:
        """paper-u, sinc and poly-w resolve to the right kernels."""

        assert parse_kernel("paper-u", KernelKind.ATOM_U).name == "paper-u"
        sinc = parse_kernel("sinc", KernelKind.DENSITY_W)
        assert sinc.name == "sinc" and sinc.kind is KernelKind.DENSITY_W
        poly = parse_kernel("poly-w:6", KernelKind.DENSITY_W)
        assert poly.name == "poly-w:6"
        assert poly(0.5) == 0.984375

    def test_kind_mismatch(self) -> None:
        """Role-specific kernels cannot be used in the other role."""

        with pytest.raises(KernelKindMismatch):
            parse_kernel("paper-u", KernelKind.DENSITY_W)
        with pytest.raises(KernelKindMismatch):
            parse_kernel("poly-w:6", KernelKind.ATOM_U)

    def test_malformed_identifiers(self) -> None:
        """Unknown names and bad exponents are spec-string errors."""

        with pytest.raises(InvalidSpecString):
            parse_kernel("gaussian", KernelKind.ATOM_U)
        with pytest.raises(InvalidSpecString):
            parse_kernel("poly-w:abc", KernelKind.DENSITY_W)

    def test_poly_w_requires_positive_alpha(self) -> None:
        """A zero exponent is rejected when the kernel is built."""

        with pytest.raises(InvalidParameter):
            poly_w_kernel(0.0)


class TestValidateUKernel:
    """Conditions on atom kernels."""

    def test_paper_u_constant(self) -> None:
        """The shipped atom kernel integrates to two with U = 693/8."""

        validity = validate_u_kernel(paper_u_kernel(), 6.0)
        assert validity.integral == pytest.approx(2.0, abs=1e-9)
        assert validity.u_bound == pytest.approx(86.625, rel=1e-12)
        assert validity.alpha == 6.0

    def test_paper_u_at_smaller_alpha(self) -> None:
        """With alpha below the vanishing order the ratio tends to zero at the origin."""

        validity = validate_u_kernel(paper_u_kernel(), 2.0)
        assert 0.0 < validity.u_bound < 86.625

    def test_sinc_is_unbounded_for_atoms(self) -> None:
        """sinc does not vanish at the origin, so |phi_u| / |t|^6 explodes."""

        with pytest.raises(RatioUnbounded):
            validate_u_kernel(sinc_kernel(KernelKind.ATOM_U), 6.0)

    def test_wrong_integral(self) -> None:
        """Scaling the kernel breaks the unit-mass condition."""

        doubled = FourierKernel(
            "double-u", lambda t: 2.0 * np.asarray(phi_u_paper(t)), KernelKind.ATOM_U
        )
        with pytest.raises(IntegralNotTwo):
            validate_u_kernel(doubled, 6.0)

    def test_kind_and_alpha_checks(self) -> None:
        """Density kernels and non-positive alpha are refused."""

        with pytest.raises(KernelKindMismatch):
            validate_u_kernel(poly_w_kernel(6.0), 6.0)
        with pytest.raises(InvalidParameter):
            validate_u_kernel(paper_u_kernel(), 0.0)


class TestValidateWKernel:
    """Conditions on density kernels."""

    def test_poly_w_constant(self) -> None:
        """|phi_w(t) - 1| = |t|^alpha, so W = 1."""

        validity = validate_w_kernel(poly_w_kernel(6.0), 6.0)
        assert validity.w_bound == pytest.approx(1.0, rel=1e-6)

    def test_poly_w_square_integral(self) -> None:
        """int (1 - t^6)^2 over [-1, 1] equals 2 (1 - 2/7 + 1/13)."""

        validity = validate_w_kernel(poly_w_kernel(6.0), 6.0)
        expected = 2.0 * (1.0 - 2.0 / 7.0 + 1.0 / 13.0)
        assert validity.square_integral == pytest.approx(expected, rel=1e-9)

    def test_sinc_has_zero_w(self) -> None:
        """sinc equals one on the whole support."""

        validity = validate_w_kernel(sinc_kernel(KernelKind.DENSITY_W), 6.0)
        assert validity.w_bound == 0.0
        assert validity.square_integral == pytest.approx(2.0, rel=1e-9)

    def test_not_one_at_zero(self) -> None:
        """A density kernel must equal one at the origin."""

        half = FourierKernel(
            "half", lambda t: 0.5 * np.asarray(phi_sinc(t)), KernelKind.DENSITY_W
        )
        with pytest.raises(NotOneAtZero):
            validate_w_kernel(half, 6.0)

    def test_linear_deficit_is_unbounded_at_high_alpha(self) -> None:
        """1 - |t| cannot satisfy the order-6 condition."""

        tent = FourierKernel(
            "tent", lambda t: np.asarray(phi_w_default(t, 1.0)), KernelKind.DENSITY_W
        )
        with pytest.raises(RatioUnbounded):
            validate_w_kernel(tent, 6.0)

    def test_kind_mismatch(self) -> None:
        """Atom kernels are not density kernels."""

        with pytest.raises(KernelKindMismatch):
            validate_w_kernel(paper_u_kernel(), 6.0)


def test_constants_grow_towards_the_supremum_on_refined_grids() -> None:
    """On nested grids the reported U and W never decrease."""

    bumped = FourierKernel(
        "bumped-w",
        lambda t: 1.0 - 4.0 * np.asarray(t) ** 4 * (1.0 - np.asarray(t) ** 2),
        KernelKind.DENSITY_W,
    )
    sizes = [17, 33, 65, 129, 257]
    u_bounds = [validate_u_kernel(paper_u_kernel(), 4.0, size).u_bound for size in sizes]
    w_bounds = [validate_w_kernel(bumped, 2.0, size).w_bound for size in sizes]

    assert all(later >= earlier for earlier, later in zip(u_bounds, u_bounds[1:]))
    assert all(later >= earlier for earlier, later in zip(w_bounds, w_bounds[1:]))
    # sup of (693/8) t^2 (1 - t^2)^2 is reached at t^2 = 1/5
    assert u_bounds[-1] <= 86.625 * 0.2 * 0.64 + 1e-12
    assert w_bounds[-1] <= 1.0 + 1e-12
