"""Euler numbers of the glued fourfold built from a pair of involutions."""

from __future__ import annotations

from dataclasses import asdict, dataclass

# Hodge numbers of the Beauville threefold Y
H11_Y = 36
H12_Y = 0


class InadmissibleError(ValueError):
    """Raised when a formula that needs admissible input is given something else."""


@dataclass(frozen=True)
class EulerBreakdown:
    chi_y: int
    chi_s1: int
    chi_s2: int
    chi_xtilde1: int
    chi_xtilde2: int
    chi_x1: int
    chi_x2: int
    chi_m: int

    def to_json(self) -> dict:
        return asdict(self)

    def swapped(self) -> EulerBreakdown:
        return euler_from_surfaces(self.chi_s2, self.chi_s1)


def chi_beauville() -> int:
    """chi(Y) = 2 (h11 - h12) for a Calabi-Yau threefold with b1 = 0."""
    return 2 * (H11_Y - H12_Y)


def euler_from_surfaces(chi_s1: int, chi_s2: int) -> EulerBreakdown:
    chi_y = chi_beauville()
    x1 = chi_y + 3 * chi_s1
    x2 = chi_y + 3 * chi_s2
    chi_m = x1 + x2 - 2 * chi_y
    if chi_m != 3 * (chi_s1 + chi_s2):
        raise AssertionError("Euler number pipeline is inconsistent")
    return EulerBreakdown(
        chi_y=chi_y,
        chi_s1=chi_s1,
        chi_s2=chi_s2,
        chi_xtilde1=2 * chi_y + 2 * chi_s1,
        chi_xtilde2=2 * chi_y + 2 * chi_s2,
        chi_x1=x1,
        chi_x2=x2,
        chi_m=chi_m,
    )


def chi_surface(a) -> int:
    """Euler number of the fixed surface of the involution of Y induced by ``a``.

    Twice the number of the 27 points Q_{i,j,k} fixed by ``a``.
    """
    from .conditions import check_matrix

    report = check_matrix(a)
    if not report.admissible:
        raise InadmissibleError("chi_surface is only defined for admissible involutions")
    return 2 * report.theta_count


def euler_breakdown(a1, a2) -> EulerBreakdown:
    from .conditions import check_pair

    report = check_pair(a1, a2)
    if not report.pair_admissible:
        raise InadmissibleError("the pair does not satisfy all five admissibility conditions")
    return report.euler
