"""Exception types shared across the toolkit.

Everything raised in response to bad user input (malformed files,
mismatched target sets, out-of-range parameters) derives from
:class:`LscdError`; the CLI maps these to exit status 2.
"""


class LscdError(Exception):
    """Base class for input and data errors."""


class CorpusFormatError(LscdError):
    """Corpus or usage-dump file violates its format."""


class EmbeddingFormatError(LscdError):
    """Embedding wire-format file violates its format."""


class TargetMismatchError(LscdError):
    """Two keyed collections (prediction vs gold, rankings) disagree on targets."""

    def __init__(self, message: str, missing: set[str], unexpected: set[str]):
        super().__init__(
            f"{message}: missing={sorted(missing)} unexpected={sorted(unexpected)}"
        )
        self.missing = missing
        self.unexpected = unexpected
