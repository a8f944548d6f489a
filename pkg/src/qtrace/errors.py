"""Exception hierarchy shared by all modules."""


class QtraceError(Exception):
    """Base class for every error raised by this package."""


# surface
class SurfaceError(QtraceError):
    pass


class SpecFormatError(SurfaceError):
    pass


class DuplicateGluing(SurfaceError):
    pass


class SelfGluedSlot(SurfaceError):
    pass


class SelfFoldedTriangle(SurfaceError):
    pass


class OrientationInconsistency(SurfaceError):
    pass


class NoBoundary(SurfaceError):
    pass


class InteriorPuncture(SurfaceError):
    pass


class NotTriangulable(SurfaceError):
    pass


# ntriang / trace
class NonIntegerHalf(QtraceError):
    pass


class NoAdmissibleRotation(QtraceError):
    pass


class ElongationLoop(QtraceError):
    pass


class WellDefinednessViolation(QtraceError):
    pass


class BlockMismatch(QtraceError):
    def __init__(self, lemma, where=None, detail=""):
        self.lemma = lemma
        self.where = where
        msg = f"{lemma}: mismatch at {where}" if where is not None else lemma
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


# lattice / torus
class NotSublattice(QtraceError):
    pass


class NotAntisymmetric(QtraceError):
    pass


class NotPerfectSquare(QtraceError):
    pass


class OddOrderRequired(QtraceError):
    pass


class DimensionMismatch(QtraceError):
    pass


class FormulaMismatch(QtraceError):
    pass


class PropertyViolation(QtraceError):
    pass


class NotADivisor(QtraceError):
    pass


class DimensionCapExceeded(QtraceError):
    pass
