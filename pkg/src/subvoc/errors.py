"""Exception types shared across the toolkit."""


class SubvocError(Exception):
    """Base class for all toolkit errors."""


class IoFailure(SubvocError):
    """A file could not be read, decoded, or written."""


class LineCountMismatch(SubvocError):
    def __init__(self, source_count: int, target_count: int):
        super().__init__(
            f"aligned inputs differ in length: {source_count} vs {target_count}"
        )
        self.source_count = source_count
        self.target_count = target_count


class EmptyInput(SubvocError):
    """An operation that needs at least one token received none."""


class DanglingMarker(SubvocError):
    """The last subword of a sentence still carries the continuation marker."""


class FormatError(SubvocError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateToken(SubvocError):
    def __init__(self, token: str, line: int):
        super().__init__(f"line {line}: token {token!r} already seen")
        self.token = token
        self.line = line


class InvalidConfig(SubvocError):
    """A configuration triple outside the supported set."""


class EmptyTestSet(SubvocError):
    """Scoring needs at least one hypothesis/reference pair."""


class EmptyReference(SubvocError):
    """The references contain zero words in total, so rates are undefined."""


class MissingCell(SubvocError):
    def __init__(self, label: str, column: str):
        super().__init__(f"system {label!r} has no score for {column}")
        self.label = label
        self.column = column
