"""Central tolerance configuration.

Every floating-point threshold used by the package lives here, so tests and
the command line can override them in one place instead of hunting through
the numerics.
"""

import dataclasses


@dataclasses.dataclass
class Tolerances:
    #: absolute tolerance for unit-scale quaternion/operator comparisons
    unit_abs: float = 1e-12
    #: eigenvalue clustering: two eigenvalues belong to the same cluster when
    #: closer than ``cluster * max(1, ||M||_F)``; imaginary parts below the
    #: same threshold are snapped onto the real axis
    cluster: float = 1e-8
    #: rank decisions in generalized-eigenvector chains: singular values
    #: below ``rank * sigma_max`` count as zero
    rank: float = 1e-10
    #: admissible relative imaginary residue when a complex similarity is
    #: collapsed to a real one
    imag_residual: float = 1e-9
    #: admissible residual of the initial-condition fit
    fit_residual: float = 1e-9
    #: agreement required between the term expansion of a solution and the
    #: factored-exponential evaluation path
    term_agreement: float = 1e-10
    #: admissible commutator size among the diagonal/antisymmetric/nilpotent
    #: parts, relative to ``||J|| + 1``
    commutator: float = 1e-10
    #: coefficients smaller than this are treated as exact zeros when an
    #: operator produced by numeric back-translation is classified
    classify_zero: float = 1e-12
    #: terms with coefficient mass below this are hidden from display
    term_prune: float = 1e-12

    def replace(self, **kw):
        return dataclasses.replace(self, **kw)


DEFAULT = Tolerances()
