"""Regression corpus of published covariance examples.

One file per example under ``data/``. The format is line oriented::

    psd-fixture 1
    name: example-9
    expression: x*(1+x)^3          (or  preset: sqrt-example)
    s_lead: 1                      (leading coefficient of the printed s(z))
    expected_c: 1 1 2 31/6 ...     (listed prefix only; rationals as n/d)
    closed_form: bernoulli | geometric | poisson | fuss-catalan:<alpha>
    valid: yes | no
    domain: <R>                    (optional right end of (0, R))
    note: free text
    source: free text
    checksum: <sha256 of every preceding line, newline-terminated>
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .. import covariance as cov
from ..covariance import CovarianceSpec
from ..errors import FixtureCorrupt

FORMAT_HEADER = "psd-fixture 1"
_KNOWN = {
    "name", "expression", "preset", "s_lead", "expected_c", "closed_form",
    "valid", "domain", "note", "source", "checksum",
}


@dataclass(frozen=True)
class Fixture:
    name: str
    spec: CovarianceSpec
    expected_c: tuple[Fraction, ...]
    closed_form: str | None
    closed_form_note: str
    source: str
    s_lead: Fraction = Fraction(1)
    valid: bool = True
    expression: str = ""

    def expected(self, count: int) -> tuple[Fraction, ...]:
        """The first ``count`` expected coefficients (closed forms extend indefinitely)."""
        if self.closed_form is not None:
            return tuple(closed_form_coefficients(self.closed_form, count))
        return self.expected_c[:count]


def closed_form_coefficients(kind: str, count: int) -> list[Fraction]:
    if kind == "bernoulli":
        return [Fraction(1 if k < 2 else 0) for k in range(count)]
    if kind == "geometric":
        return [Fraction(1)] * count
    if kind == "poisson":
        return [Fraction(1, math.factorial(k)) for k in range(count)]
    if kind.startswith("fuss-catalan:"):
        alpha = int(kind.split(":", 1)[1])
        return [Fraction(math.comb(alpha * k + 1, k), alpha * k + 1) for k in range(count)]
    raise FixtureCorrupt(f"unknown closed form {kind!r}")


def checksum(lines: list[str]) -> str:
    return hashlib.sha256("".join(line + "\n" for line in lines).encode()).hexdigest()


def seal(text: str) -> str:
    """Append (or replace) the checksum line of a fixture text."""
    lines = [ln for ln in text.strip().splitlines() if not ln.startswith("checksum:")]
    return "\n".join(lines + [f"checksum: {checksum(lines)}"]) + "\n"


def parse_fixture(text: str, origin: str = "<string>") -> Fixture:
    lines = text.strip().splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise FixtureCorrupt(f"{origin}: missing header {FORMAT_HEADER!r}")
    fields: dict[str, str] = {}
    body = []
    for ln in lines:
        if ln.startswith("checksum:"):
            fields["checksum"] = ln.split(":", 1)[1].strip()
            break
        body.append(ln)
    for ln in body[1:]:
        if not ln.strip():
            continue
        key, sep, value = ln.partition(":")
        key = key.strip()
        if not sep or key not in _KNOWN:
            raise FixtureCorrupt(f"{origin}: unrecognized line {ln!r}")
        fields[key] = value.strip()
    if fields.get("checksum") != checksum(body):
        raise FixtureCorrupt(f"{origin}: checksum mismatch")

    domain = Fraction(fields["domain"]) if "domain" in fields else None
    if "preset" in fields:
        spec = cov.preset(fields["preset"])
        expression = f"preset:{fields['preset']}"
        if domain is not None:
            spec = spec.with_domain(domain)
    elif "expression" in fields:
        expression = fields["expression"]
        spec = cov.parse_spec(expression)
        if domain is not None:
            spec = spec.with_domain(domain)
    else:
        raise FixtureCorrupt(f"{origin}: neither expression nor preset given")

    try:
        expected = tuple(Fraction(tok) for tok in fields.get("expected_c", "").split())
    except (ValueError, ZeroDivisionError) as exc:
        raise FixtureCorrupt(f"{origin}: bad coefficient list ({exc})") from None
    closed = fields.get("closed_form") or None
    if closed == "none":
        closed = None
    return Fixture(
        name=fields["name"],
        spec=spec,
        expected_c=expected,
        closed_form=closed,
        closed_form_note=fields.get("note", ""),
        source=fields.get("source", ""),
        s_lead=Fraction(fields.get("s_lead", "1")),
        valid=fields.get("valid", "yes") == "yes",
        expression=expression,
    )


def load_all() -> list[Fixture]:
    data = resources.files(__package__).joinpath("data")
    out = []
    for entry in sorted(data.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".fix"):
            out.append(parse_fixture(entry.read_text(), entry.name))
    return out


def by_name(name: str) -> Fixture:
    """Look a fixture up by its name or by its closed form (``"bernoulli"``)."""
    for fx in load_all():
        if name in (fx.name, fx.closed_form):
            return fx
    raise KeyError(name)
