"""Error categories raised while reading network descriptions."""
from ..errors import MultiportError


class NetspecError(MultiportError, ValueError):
    code = "invalid"

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class NetspecSyntaxError(NetspecError):
    code = "syntax"

    def __init__(self, message, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class VersionError(NetspecError):
    code = "version"


class SchemaError(NetspecError):
    code = "schema"


class UnknownNodeError(NetspecError):
    code = "unknown-node"


class DuplicateNodeError(NetspecError):
    code = "duplicate-node"


class ArityError(NetspecError):
    code = "arity"


class DuplicatePortError(NetspecError):
    code = "duplicate-port"


class DanglingPortError(NetspecError):
    code = "dangling-port"


class TerminalBalanceError(NetspecError):
    code = "terminal-balance"


class ConnectivityError(NetspecError):
    code = "disconnected"


class CompileError(NetspecError):
    code = "compile"


ERROR_BY_CODE = {cls.code: cls for cls in (
    SchemaError, UnknownNodeError, DuplicateNodeError, ArityError, DuplicatePortError,
    DanglingPortError, TerminalBalanceError, ConnectivityError,
)}
ERROR_BY_CODE["bad-phase"] = SchemaError
