from __future__ import annotations

from dataclasses import dataclass

from relkit.errors import RelkitError


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    col: int
    message: str
    suggestion: str | None = None

    def __str__(self) -> str:
        s = f"{self.line}:{self.col}: {self.severity}: {self.message}"
        if self.suggestion:
            s += f" (did you mean {self.suggestion!r}?)"
        return s


class ParseFailed(RelkitError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))
