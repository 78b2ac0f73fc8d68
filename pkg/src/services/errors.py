"""Error hierarchy shared by every layer.

Each error carries a human-readable ``detail`` and the process ``exit_code`` the
command line reports for it: 1 for usage errors, 2 for data errors and 3 for
numerical failures.
"""


class CensorMorphError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(CensorMorphError):
    exit_code = 1


class DataError(CensorMorphError):
    exit_code = 2


class NumericalError(CensorMorphError):
    exit_code = 3


class ConfigError(UsageError):
    pass


class InvalidParameter(UsageError):
    pass


class InvalidRange(UsageError):
    pass


class InvalidCounts(UsageError):
    pass


class InvalidBandwidth(UsageError):
    pass


class InvalidParams(UsageError):
    pass


class EtaOutOfRange(InvalidParams):
    pass


class OutOfRange(UsageError):
    pass


class ParseError(DataError):
    def __init__(self, detail: str, line: int | None = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class EmptyFile(DataError):
    pass


class EmptyManifest(DataError):
    pass


class DuplicateEntry(DataError):
    pass


class HemisphereMismatch(DataError):
    pass


class EmptyCollection(DataError):
    pass


class SingleGroup(DataError):
    pass


class EmptyInput(DataError):
    pass


class TooFewGroups(DataError):
    pass


class EmptyGroup(DataError):
    pass


class InsufficientGroupSize(DataError):
    pass


class ZeroVariance(DataError):
    pass


class InsufficientData(DataError):
    pass


class ZeroSpread(DataError):
    pass
