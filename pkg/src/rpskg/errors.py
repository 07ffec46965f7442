"""Exception hierarchy shared by every module in the package."""


class KronError(ValueError):
    """Base class for validation failures."""


class AllZero(KronError):
    pass


class NegativeEntry(KronError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"negative seed entry at index {index}")


class NotNormalized(KronError):
    pass


class DegenerateSeed(KronError):
    pass


class AsymmetricSeed(KronError):
    pass


class MissingSeed3(KronError):
    pass


class NoiseBoundViolated(KronError):
    pass


class DegreeSumMismatch(KronError):
    pass


class IdOutOfRange(KronError):
    pass


class InsufficientData(KronError):
    pass


class TooLarge(KronError):
    pass
