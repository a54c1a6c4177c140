"""hopflab: Hopf fibrations of spheres, the moduli space of great-circle
fibrations of S^3 as distance-decreasing maps, fiberwise-homogeneity
witnesses, and representation-type indicators, all checkable at desk
scale.

``hopflab.kernels.BACKEND`` reports whether the compiled kernel extension
or the NumPy fallback is active.
"""

__version__ = "0.1.0"

from . import algebra, grassmann, hopf, kernels, moduli, repcheck, symmetry  # noqa: F401
