"""Hypergeometric integral solutions for k = 2 and the identities between them."""
from .asymptotics import REGIMES, asymptotic_leading, leading_coefficient, ratio_sweep, regime_point
from .coefficients import duality_coefficient
from .contours import ContourSpec, Path, build_contour
from .identities import (
    IDENTITIES,
    check_identity,
    hyp2f1_euler,
    hyp2f1_half_line,
    hyp2f1_mellin_barnes,
    hyp2f1_series,
)
from .master import MasterFunctionSpec, branch_jumps, master_log, master_value
from .selberg import check_nu_scaling, check_selberg, selberg_closed_form, selberg_integrate
from .solutions import SolutionVector, integrate_solution, solution_residuals
from .weights import weight_value

__all__ = [
    "REGIMES", "asymptotic_leading", "leading_coefficient", "ratio_sweep", "regime_point",
    "duality_coefficient", "ContourSpec", "Path", "build_contour", "IDENTITIES", "check_identity",
    "hyp2f1_euler", "hyp2f1_half_line", "hyp2f1_mellin_barnes", "hyp2f1_series",
    "MasterFunctionSpec", "branch_jumps", "master_log", "master_value", "check_nu_scaling",
    "check_selberg", "selberg_closed_form", "selberg_integrate", "SolutionVector",
    "integrate_solution", "solution_residuals", "weight_value",
]
