"""Exception hierarchy. Everything raised deliberately derives from QstftError."""


class QstftError(ValueError):
    pass


class InvalidFactorsError(QstftError):
    pass


class InvalidElementError(QstftError):
    pass


class MismatchError(QstftError):
    """Objects built over different groups, subgroups or quotients were combined."""


class DegenerateWindowError(QstftError):
    pass


class NonInvertibleWindowPairError(QstftError):
    pass


class InvalidExponentError(QstftError):
    pass


class UnsupportedExponentError(QstftError):
    """Exact operator norm requested for an exponent outside {1, 2, inf}."""


class ExponentRangeError(QstftError):
    pass


class RegionError(QstftError):
    pass


class ConfigError(QstftError):
    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class PreconditionError(QstftError):
    pass
