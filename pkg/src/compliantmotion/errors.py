"""Exception types shared across the package."""


class CompliantMotionError(Exception):
    """Base class for every error raised by this package."""


class EmptyDemo(CompliantMotionError):
    """Demonstration has fewer than two samples."""

    def __init__(self, n_samples: int):
        self.n_samples = n_samples
        super().__init__(f"demonstration needs >= 2 samples, got {n_samples}")


class NonMonotoneTime(CompliantMotionError):
    """Timestamps are not strictly increasing."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"timestamp at sample {index} does not increase")


class NonFiniteValue(CompliantMotionError):
    """A sample contains NaN/inf or a degenerate quaternion."""

    def __init__(self, index: int, field: str = ""):
        self.index = index
        self.field = field
        where = f" in '{field}'" if field else ""
        super().__init__(f"non-finite value{where} at sample {index}")


class AngleNearPi(CompliantMotionError):
    """Rotation angle within tolerance of pi; the log axis is ill-conditioned."""


class InvalidWindow(CompliantMotionError):
    """A window's relative rotation is too large to difference reliably."""

    def __init__(self, window_index: int):
        self.window_index = window_index
        super().__init__(f"window {window_index} rotates by nearly pi or more")


class TooShort(CompliantMotionError):
    """Demonstration yields fewer than two aggregation windows."""


class NoMotion(CompliantMotionError):
    """No step carries a motion direction for the requested channel."""


class ZeroVector(CompliantMotionError):
    """Cannot normalize or project a zero vector."""


class OutOfDomain(CompliantMotionError):
    """Angle-space point lies outside the invertible disc (norm >= pi)."""


class ContraryWrench(CompliantMotionError):
    """Motion and negated wrench are nearly antiparallel; the sector covers a half-space."""


class NoUsableSteps(CompliantMotionError):
    """Fewer than two steps provide the data needed to build direction sectors."""


class NoRotation(CompliantMotionError):
    """Total rotation is below the motion floor; pitch is undefined."""


class NoInput(CompliantMotionError):
    """Compliance-axis selection called without any demonstration means."""


class NonOrthonormalAxes(CompliantMotionError):
    """Stiffness construction requires pairwise orthonormal axes."""


class Diverged(CompliantMotionError):
    """Simulated body left the workspace bounds."""


class TeacherStuck(CompliantMotionError):
    """Synthetic teacher produced no motion for over a second of simulated time."""


class FormatError(CompliantMotionError):
    """A file does not match the expected demonstration/primitive/environment schema."""
