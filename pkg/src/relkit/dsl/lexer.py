from __future__ import annotations

import re
from dataclasses import dataclass

from relkit.dsl.diagnostics import Diagnostic


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "num", "op", "eof"
    text: str
    line: int
    col: int


# longest first so maximal munch picks "<=>" over "<="
_OPS = sorted(
    [":=", "->", "<=>", "<=", ">=", "!=", "<", ">", "=", "+", "-", "*", "/", "^",
     ";", ",", ".", "(", ")", "{", "}", "[", "]", "~", "!", "|", "&", "?", ":", "1'"],
    key=len,
    reverse=True,
)
_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>//[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>" + "|".join(re.escape(o) for o in _OPS) + r")|(?P<num>[0-9]+)"
)


def tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            diags.append(Diagnostic("error", line, col, f"unexpected character {text[pos]!r}"))
            pos += 1
            continue
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("ident", "op", "num"):
            tokens.append(Token(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens, diags
