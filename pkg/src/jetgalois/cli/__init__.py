"""Expression grammar, job files and the command-line interface."""

from .grammar import Scope, parse, parse_extension, parse_field, parse_form, parse_function, to_text

__all__ = ["Scope", "parse", "parse_extension", "parse_field", "parse_form", "parse_function", "to_text"]
