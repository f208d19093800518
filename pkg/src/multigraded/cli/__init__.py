from .parse import ParseError, format_module, parse_input, parse_text

__all__ = ["ParseError", "format_module", "parse_input", "parse_text"]
