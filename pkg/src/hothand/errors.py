"""Exception hierarchy shared by the library and the CLI."""


class HotHandError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(HotHandError, ValueError):
    pass


# -- ingest -----------------------------------------------------------------
class ShotDataError(HotHandError):
    pass


class FileNotReadable(ShotDataError):
    pass


class SchemaMismatch(ShotDataError):
    pass


class RowParseError(ShotDataError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class EmptyDataset(ShotDataError):
    pass


# -- analysis ---------------------------------------------------------------
class ConflictingFilter(HotHandError, ValueError):
    pass


class MixedPlayers(HotHandError, ValueError):
    pass


class EmptyInput(HotHandError, ValueError):
    pass


class NoDefinedPoints(HotHandError):
    pass


class TooFewPairs(HotHandError):
    pass


class UnknownSeason(HotHandError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown season"


class LagMismatch(HotHandError, ValueError):
    pass


class TooFewPlayers(HotHandError):
    pass


# -- simulation -------------------------------------------------------------
class InvalidSpec(HotHandError, ValueError):
    pass


class WrongModelKind(HotHandError, ValueError):
    pass
