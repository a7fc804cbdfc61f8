"""Structured verification reports with a byte-stable text rendering.

One record per check, fields in fixed order.  Residuals below 1e-14 are
printed as ``0.000000e0`` so that platform rounding noise never reaches a
golden file; everything larger keeps six fractional digits with a bare
integer exponent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["CheckEntry", "Report", "format_residual", "render_report", "render_reports"]

NOISE_FLOOR = 1e-14


@dataclass(frozen=True)
class CheckEntry:
    check_id: str
    residual: float
    dims: tuple[int, ...] = ()
    passed: bool = True
    note: str = ""


@dataclass
class Report:
    scenario: str
    construction: str = ""
    params: tuple[tuple[str, str], ...] = ()
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(entry.passed for entry in self.entries)

    def extend_prefixed(self, prefix: str, other: "Report") -> None:
        """Absorb another report's entries under a check-id prefix."""
        for entry in other.entries:
            self.entries.append(CheckEntry(f"{prefix}{entry.check_id}", entry.residual,
                                           entry.dims, entry.passed, entry.note))


def format_residual(value: float) -> str:
    if value < NOISE_FLOOR:
        return "0.000000e0"
    mantissa, exponent = f"{value:.6e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _format_dims(dims: tuple[int, ...]) -> str:
    return "|".join(str(d) for d in dims) if dims else "-"


def render_report(report: Report, version: str = "") -> str:
    lines = [f"scenario {report.scenario}"]
    if report.construction:
        lines.append(f"construction {report.construction}")
    if version:
        lines.append(f"version {version}")
    for key, value in sorted(report.params):
        lines.append(f"param {key} = {value}")
    for entry in report.entries:
        line = (f"check id={entry.check_id}"
                f" residual={format_residual(entry.residual)}"
                f" dims={_format_dims(entry.dims)}"
                f" pass={'yes' if entry.passed else 'NO'}")
        if entry.note:
            line += f" note={entry.note}"
        lines.append(line)
    lines.append(f"overall {'pass' if report.overall else 'FAIL'}")
    return "\n".join(lines) + "\n"


def render_reports(reports, version: str = "") -> str:
    return "\n".join(render_report(r, version) for r in reports)
