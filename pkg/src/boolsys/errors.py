from __future__ import annotations


class BoolsysError(Exception):
    """Base class for every error raised by this package."""


class InputError(BoolsysError):
    """The caller supplied malformed or inconsistent data."""


class BackendMismatch(InputError):
    pass


class NotAnIdeal(InputError):
    pass


class EmptyArgument(InputError):
    pass


class NotHereditary(InputError):
    def __init__(self, member, label, image):
        super().__init__(f"theta_{label}({member}) = {image} leaves the ideal")
        self.member = member
        self.label = label
        self.image = image


class NotRegular(InputError):
    def __init__(self, witness):
        super().__init__(f"{witness} is not regular")
        self.witness = witness


class NotInDomain(InputError):
    pass


class NotWeaklyLeftResolving(InputError):
    def __init__(self, first, second, label):
        super().__init__(
            f"r({first} & {second}, {label}) differs from r({first}, {label}) & r({second}, {label})"
        )
        self.first = first
        self.second = second
        self.label = label


class NotBijective(InputError):
    pass


class MemoryTooSmall(InputError):
    pass


class SftSyntaxError(InputError):
    pass


class UnsupportedBackend(InputError):
    pass


class Incomplete(BoolsysError):
    """An honest 'could not decide within the configured bounds'."""


class Unsupported(Incomplete):
    pass


class UnsupportedQuotient(Unsupported):
    pass


class ClosureBoundExceeded(Incomplete):
    def __init__(self, partial, bound: int):
        super().__init__(f"closure did not stabilise within {bound} steps")
        self.partial = partial
        self.bound = bound


class SearchBoundExceeded(Incomplete):
    def __init__(self, bound: int):
        super().__init__(f"search did not terminate within {bound} steps")
        self.bound = bound


class DepthExhausted(Incomplete):
    pass


class SchemaError(InputError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class ValidationError(InputError):
    def __init__(self, report):
        super().__init__("; ".join(str(v) for v in report.violations))
        self.report = report
