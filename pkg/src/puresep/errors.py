"""Exception types raised by puresep."""


class PureSepError(Exception):
    """Base class for all puresep errors."""


class ZeroStateError(PureSepError, ValueError):
    """The amplitude vector has zero norm."""


class BadDimensionError(PureSepError, ValueError):
    """A local dimension is < 2 or the dims do not match the amplitude count."""


class BadIndexError(PureSepError, IndexError):
    """A partite index is out of range."""


class BadPermutationError(PureSepError, ValueError):
    """The permutation is not a bijection on the partite indices."""


class BadSubsetError(PureSepError, ValueError):
    """A bipartition subset is empty, improper, or holds invalid indices."""


class DimMismatchError(PureSepError, ValueError):
    """Two objects that must share dimensions do not."""


class BadSpecError(PureSepError, ValueError):
    """A random-state request is inconsistent (e.g. Bell on non-qubit dims)."""


class NotSeparableError(PureSepError):
    """Factorization was requested for a state that fails the criterion.

    Attributes
    ----------
    partites : tuple of int
        Zero-based indices of the partites whose reduced state is not pure.
    """

    def __init__(self, partites, message=None):
        self.partites = tuple(partites)
        if message is None:
            message = f"state is not fully separable; entangled partites {list(self.partites)}"
        super().__init__(message)


class CriterionDisagreementError(PureSepError, RuntimeError):
    """Norm and minor criteria disagree outside the borderline band.

    This only happens when tolerances are miscalibrated for the input, so
    both numbers are carried for diagnosis.
    """

    def __init__(self, partite, deficit, max_minor):
        self.partite = partite
        self.deficit = deficit
        self.max_minor = max_minor
        super().__init__(
            f"criteria disagree on partite {partite}: "
            f"norm deficit={deficit:.3e}, largest minor={max_minor:.3e}"
        )
