"""Text format for signatures, theories, frames and model-checking jobs."""

from relkit.dsl.diagnostics import Diagnostic, ParseFailed
from relkit.dsl.parser import parse, parse_formula, parse_rel_formula, parse_sentence, parse_source
from relkit.dsl.printer import print_formula, print_sentence, print_term, print_workspace
from relkit.dsl.workspace import CheckJob, EntailJob, MapDecl, MorphismJob, VerifyJob, Workspace

__all__ = [
    "Diagnostic",
    "ParseFailed",
    "parse",
    "parse_formula",
    "parse_rel_formula",
    "parse_sentence",
    "parse_source",
    "print_formula",
    "print_sentence",
    "print_term",
    "print_workspace",
    "CheckJob",
    "EntailJob",
    "MapDecl",
    "MorphismJob",
    "VerifyJob",
    "Workspace",
]
