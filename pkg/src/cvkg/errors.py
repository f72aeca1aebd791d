"""Error taxonomy: everything user-data-related derives from DataError so the
CLI and server can map failures to exit codes / HTTP statuses uniformly."""


class CvkgError(Exception):
    pass


class DataError(CvkgError):
    """Malformed input data (annotation files, queries, taxonomy, requests)."""


class IngestError(DataError):
    """Parse failure in an annotation/side file; `path` locates the fault."""

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{message} (at {path})" if path else message)


class BundleError(DataError):
    """A record in a DatasetBundle violates an invariant."""

    def __init__(self, message: str, record: str, field: str):
        self.record = record
        self.field = field
        super().__init__(f"{message} (record {record}, field {field})")


class NTriplesError(DataError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class TaxonomyError(DataError):
    pass


class SparqlError(DataError):
    """Query lex/parse/validation failure with position and token hints."""

    def __init__(self, message: str, line: int, column: int, expected: list[str] | None = None):
        self.line = line
        self.column = column
        self.expected = expected or []
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{hint}")


class ExportError(DataError):
    """`code` is machine-readable: query-missing-image-var, empty-result,
    format-incompatible, invalid-request."""

    def __init__(self, message: str, code: str):
        self.code = code
        super().__init__(message)
