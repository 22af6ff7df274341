"""Pretty-printing of algebra elements and bracket files in DSL syntax.

The output of format_poly parses back to the same element, and files
printed by format_bracket_file are fixed points of parse-then-print.
"""

from __future__ import annotations

from .algebra import DiffPoly
from .rationals import rat_str


def _format_monomial(key, coeff) -> str:
    upow, ufs, ths = key
    factors = []
    if upow:
        factors.append("u" if upow == 1 else f"u^{upow}")
    for (s, t), e in ufs:
        base = f"u[{s},{t}]"
        factors.append(base if e == 1 else f"{base}^{e}")
    for s, t in ths:
        factors.append(f"th[{s},{t}]")
    c = rat_str(coeff)
    if not factors:
        return c
    body = "*".join(factors)
    if c == "1":
        return body
    if c == "-1":
        return f"-{body}"
    return f"{c}*{body}"


def format_poly(a: DiffPoly) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for key in sorted(a.terms, reverse=True):
        term = _format_monomial(key, a.terms[key])
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts)


def format_bracket_file(spec) -> str:
    """Canonical text of a BracketSpecFile (see parser.parse)."""
    lines = [f"order = {spec.order};"]
    if spec.kind == "delta":
        lines.append("delta {")
        for (k, k1, k2) in sorted(spec.delta.coefficients):
            poly = spec.delta.coefficients[(k, k1, k2)]
            lines.append(f"  A[{k};{k1},{k2}] = {format_poly(poly)};")
        lines.append("}")
    else:
        lines.append("theta {")
        for d in sorted(spec.densities):
            lines.append(f"  density[{d}] = {format_poly(spec.densities[d])};")
        lines.append("}")
    return "\n".join(lines) + "\n"
