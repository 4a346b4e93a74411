"""Numerical toolkit for Denjoy-Carleman classes and their microlocal analysis.

Modules:

* ``sequence``: regular weight sequences and the associated functions h, h1, N.
* ``jets``: corpus functions with derivative oracles and class-constant fits.
* ``mollifier``: radial cutoffs and ball quadratures.
* ``extension``: almost analytic extensions and their dbar residuals.
* ``manifold``: maximally real charts and the well-positioned certificate.
* ``fbi``: FBI transforms and the decay analysis built on them.
* ``nonlinear``: linearization and Hamiltonian lifts of first-order systems.
* ``consistency``: three regularity verdicts for one function.
* ``cli``: config-driven experiments.
"""

__version__ = "0.1.0"

from .sequence import RegularSequence, check_invariants, validate  # noqa: E402
from .jets import JetFunction, class_constant_fit, coordinate_frame, get_function  # noqa: E402
from .manifold import MaximallyRealChart, get_chart  # noqa: E402
from .extension import ExtensionOperator, build_field, fit_decay  # noqa: E402
from .fbi import FBIKernel, fbi_transform, wavefront_scan  # noqa: E402
from .nonlinear import get_solution, get_system, wf_inclusion_experiment  # noqa: E402
from .consistency import consistency_loop  # noqa: E402

__all__ = [
    "RegularSequence", "check_invariants", "validate",
    "JetFunction", "class_constant_fit", "coordinate_frame", "get_function",
    "MaximallyRealChart", "get_chart",
    "ExtensionOperator", "build_field", "fit_decay",
    "FBIKernel", "fbi_transform", "wavefront_scan",
    "get_solution", "get_system", "wf_inclusion_experiment",
    "consistency_loop",
]
