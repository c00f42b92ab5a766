"""Plain-text OA files.

Layout: first line ``n m``, second line ``s_1 ... s_m``, then ``n`` rows of
``m`` integer codes. Lines starting with ``#`` and blank lines are skipped.
"""

from __future__ import annotations

from pathlib import Path

from .core import DesignSpace, Fraction, Run
from .errors import ParseError, StructuralError

__all__ = ["parse_oa_file", "read_oa_file", "format_oa_file"]


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("+-").isdigit())
        raise ParseError(f"non-integer token {bad!r}", lineno) from None


def parse_oa_file(text: str) -> Fraction:
    lines = [
        (i, line.split())
        for i, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if len(lines) < 2:
        raise ParseError("expected a header line and a levels line")
    (hl, header), (ll, level_tokens) = lines[0], lines[1]
    if len(header) != 2:
        raise ParseError("header must be 'n m'", hl)
    n, m = _ints(header, hl)
    if n < 1 or m < 1:
        raise ParseError("n and m must be positive", hl)
    levels = _ints(level_tokens, ll)
    if len(levels) != m:
        raise ParseError(f"expected {m} level counts, got {len(levels)}", ll)
    try:
        space = DesignSpace(tuple(levels))
    except StructuralError as exc:
        raise ParseError(str(exc), ll) from None
    body = lines[2:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else None
        raise ParseError(f"expected {n} runs, found {len(body)}", where)
    runs = []
    for lineno, tokens in body:
        codes = _ints(tokens, lineno)
        if len(codes) != m:
            raise ParseError(f"expected {m} codes, got {len(codes)}", lineno)
        for j, (c, s) in enumerate(zip(codes, levels), 1):
            if not 0 <= c < s:
                raise ParseError(f"code {c} out of range 0..{s - 1} for factor {j}", lineno)
        runs.append(Run(tuple(codes)))
    return Fraction(space, tuple(runs))


def read_oa_file(path) -> Fraction:
    return parse_oa_file(Path(path).read_text(encoding="utf-8"))


def format_oa_file(fraction: Fraction, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{fraction.n} {fraction.m}")
    lines.append(" ".join(map(str, fraction.space.levels)))
    lines.extend(" ".join(map(str, r.codes)) for r in fraction.runs)
    return "\n".join(lines) + "\n"
