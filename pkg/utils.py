"""
Formatting helpers: exact-looking scalars, matrix parsing for transition
scripts, markdown rendering of theories, diagrams and phase reports, and
markdown to HTML conversion.
"""
import html
import re
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import sympy as sp
from markupsafe import escape
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

OMEGA_EXACT = sp.Rational(-1, 2) + sp.sqrt(3) * sp.I / 2
OMEGA = complex(OMEGA_EXACT)

# Display pattern library: p/q or p√r/q with q <= 12 and squarefree r <= 6
MAX_DENOMINATOR = 12
RADICANDS = (1, 2, 3, 5, 6)

_SCALAR_GLOBALS = {"Integer": sp.Integer, "Float": sp.Float, "Rational": sp.Rational,
                   "Symbol": sp.Symbol, "sqrt": sp.sqrt}
_SCALAR_LOCALS = {"w": OMEGA_EXACT, "wbar": sp.conjugate(OMEGA_EXACT)}


def parse_exact(text) -> sp.Expr:
    """Exact value of a script literal such as '-1/3', '1/(2*sqrt(3))' or '-sqrt(2)*w/3'."""
    if isinstance(text, (int, float)):
        return sp.sympify(text)
    try:
        expr = parse_expr(str(text), local_dict=dict(_SCALAR_LOCALS), global_dict=dict(_SCALAR_GLOBALS),
                          transformations=standard_transformations)
    except Exception as e:
        raise ValueError(f"cannot parse scalar '{text}'") from e
    if not isinstance(expr, sp.Expr) or expr.free_symbols or not expr.is_number:
        raise ValueError(f"cannot parse scalar '{text}'")
    return expr


def parse_scalar(text) -> complex:
    """Numeric value of a script literal ('2', 'sqrt(2)', '1/sqrt(12)', 'w', '-wbar', ...)."""
    return complex(sp.N(parse_exact(text), 30))


def parse_matrix(spec: Dict[str, Any]) -> np.ndarray:
    """{"prefactor": "1/3", "rows": [["1", "sqrt(2)"], ...]} -> complex array."""
    prefactor = parse_scalar(spec.get("prefactor", 1))
    return prefactor * np.array([[parse_scalar(x) for x in row] for row in spec["rows"]], dtype=complex)


def matrix_diff(actual: np.ndarray, expected: np.ndarray, tol: float = 1e-9) -> str:
    if actual.shape != expected.shape:
        return f"shape {actual.shape} != {expected.shape}"
    lines = []
    for i, j in np.argwhere(np.abs(actual - expected) > tol)[:8]:
        lines.append(f"[{i}][{j}]: {format_scalar(actual[i, j])} != {format_scalar(expected[i, j])}")
    return "; ".join(lines)


def exact_real(x: float, tol: float = 1e-9) -> Optional[sp.Expr]:
    """p√r/q within `tol` of x from the display library, or None."""
    if abs(x) < tol:
        return sp.Integer(0)
    for r in RADICANDS:
        root = sp.sqrt(r)
        coeff = sp.nsimplify(x / float(root), tolerance=tol, rational=True)
        if coeff.is_Rational and coeff.q <= MAX_DENOMINATOR and abs(float(coeff * root) - x) < tol:
            return coeff * root
    return None


@lru_cache(maxsize=4096)
def _format_rounded(x: float, tol: float) -> str:
    value = exact_real(x, tol)
    if value is None:
        return f"{x:.6g}"
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    coeff, root = abs(value).as_coeff_Mul()
    radicand = root ** 2 if root != 1 else 1
    num = "" if coeff.p == 1 and radicand != 1 else str(coeff.p)
    body = num + ("" if radicand == 1 else f"√{radicand}") or "1"
    return sign + (body if coeff.q == 1 else f"{body}/{coeff.q}")


def _format_real(x: float, tol: float = 1e-9) -> str:
    return _format_rounded(round(float(x), 12), tol)


def format_scalar(z, tol: float = 1e-9) -> str:
    z = complex(z)
    if abs(z.imag) < tol:
        return _format_real(z.real, tol)
    for symbol, phase in (("ω", OMEGA), ("ω̄", OMEGA.conjugate())):
        r = z / phase
        if abs(r.imag) < tol:
            coeff = _format_real(r.real, tol)
            return symbol if coeff == "1" else ("-" + symbol if coeff == "-1" else f"{coeff}{symbol}")
    sign = "+" if z.imag >= 0 else "-"
    return f"{_format_real(z.real, tol)}{sign}{_format_real(abs(z.imag), tol)}i"


def format_matrix(S: np.ndarray, labels: Sequence[str]) -> str:
    header = "| | " + " | ".join(labels) + " |"
    rule = "|---" * (len(labels) + 1) + "|"
    rows = [f"| **{labels[i]}** | " + " | ".join(format_scalar(z) for z in S[i]) + " |"
            for i in range(len(labels))]
    return "\n".join([header, rule] + rows)


def render_theory(theory) -> str:
    lines = [f"# {theory.name}", "",
             f"- anyons: {', '.join(theory.labels)}",
             f"- total dimension: {format_scalar(theory.total_dim)}",
             "- dims: " + ", ".join(f"{x}={format_scalar(d)}" for x, d in zip(theory.labels, theory.dims))]
    if theory.T is not None:
        lines.append("- T: " + ", ".join(f"{x}={format_scalar(t)}" for x, t in zip(theory.labels, theory.T)))
    lines += ["", "## S-matrix", "", format_matrix(np.asarray(theory.S), theory.labels), "", "## Fusion", ""]
    N = np.asarray(theory.N)
    n = len(theory.labels)
    for a in range(n):
        for b in range(a, n):
            terms = [(f"{N[a, b, c]}{theory.labels[c]}" if N[a, b, c] > 1 else theory.labels[c])
                     for c in range(n) if N[a, b, c]]
            lines.append(f"- {theory.labels[a]} x {theory.labels[b]} = {' + '.join(terms)}")
    return "\n".join(lines)


def render_diagram(export) -> str:
    header = "| | " + " | ".join(export.columns) + " |"
    rule = "|---" * (len(export.columns) + 1) + "|"
    rows = [f"| **{r}** | " + " | ".join(cells) + " |" for r, cells in zip(export.rows, export.cells)]
    return "\n".join([f"# Flavor diagram of D({export.group})", "", header, rule] + rows)


def render_report(report) -> str:
    spec = ", ".join(report.spec) if report.spec else "nothing"
    lines = [f"# D({report.group}) forbidding {spec}", "", f"mode: {report.mode}", ""]
    for i, step in enumerate(report.steps, 1):
        lines.append(f"{i}. **{step.kind}** {step.summary}")
    if report.final:
        lines += ["", f"## Result: {report.final.display_name}", ""]
        lines += [f"- {k} -> {v}" for k, v in report.final.correspondence.items()]
        if report.final.correspondence_name:
            lines.append(f"- correspondence: {report.final.correspondence_name}")
    for stage in report.stages:
        S = np.array([[complex(re_, im) for re_, im in row] for row in stage.matrix])
        lines += ["", f"### {stage.name}", "", format_matrix(S, stage.labels)]
    failed = [b for b in report.branches]
    if failed:
        lines += ["", "## Rejected branches", ""]
        lines += [f"- {{{', '.join(b.labels)}}}: {b.outcome}" + (f" ({b.message})" if b.message else "")
                  for b in failed]
    if report.notes:
        lines += ["", "## Notes", ""] + [f"- {note}" for note in report.notes]
    return "\n".join(lines)


def render_phase_table(group: str, cells: List[Any]) -> str:
    lines = [f"# Phase diagram of D({group})", "",
             "| forbidden | result | steps | script |", "|---|---|---|---|"]
    for cell in cells:
        spec = ", ".join(cell.spec) if cell.spec else "none"
        result = cell.display_name or f"error: {cell.error}"
        script = cell.script_final or "-"
        if cell.error and cell.display_name:
            script = f"{script} ({cell.error})"
        lines.append(f"| {spec} | {result} | {cell.summary} | {script} |")
    return "\n".join(lines)


def format_response_as_html(text: str, title: Optional[str] = None) -> str:
    """
    Convert markdown-formatted text (headings, lists, tables, bold) to HTML.
    """
    text = html.unescape(text)
    result_html = [f"<h1>{escape(title)}</h1>"] if title else []
    in_ul = in_ol = in_table = False

    def inline(s: str) -> str:
        s = str(escape(s))
        return re.sub(r"\*\*(.*?)\*\*", r"<strong>\1</strong>", s)

    def close():
        nonlocal in_ul, in_ol, in_table
        if in_ul:
            result_html.append("</ul>")
        if in_ol:
            result_html.append("</ol>")
        if in_table:
            result_html.append("</table>")
        in_ul = in_ol = in_table = False

    for line in text.strip().splitlines():
        stripped = line.strip()
        if stripped.startswith("|"):
            if re.match(r"^\|(-+\|)+$", stripped):
                continue
            if not in_table:
                close()
                result_html.append("<table>")
                in_table = True
            cells = [c.strip() for c in stripped.strip("|").split("|")]
            result_html.append("<tr>" + "".join(f"<td>{inline(c)}</td>" for c in cells) + "</tr>")
        elif stripped.startswith("### "):
            close()
            result_html.append(f"<h4>{inline(stripped[4:])}</h4>")
        elif stripped.startswith("## "):
            close()
            result_html.append(f"<h3>{inline(stripped[3:])}</h3>")
        elif stripped.startswith("# "):
            close()
            result_html.append(f"<h2>{inline(stripped[2:])}</h2>")
        elif stripped.startswith("- "):
            if not in_ul:
                close()
                result_html.append("<ul>")
                in_ul = True
            result_html.append(f"<li>{inline(stripped[2:])}</li>")
        elif re.match(r"^\d+\.\s", stripped):
            if not in_ol:
                close()
                result_html.append("<ol>")
                in_ol = True
            item = re.sub(r"^\d+\.\s", "", stripped)
            result_html.append(f"<li>{inline(item)}</li>")
        elif not stripped:
            close()
        else:
            close()
            result_html.append(f"<p>{inline(stripped)}</p>")
    close()
    return "\n".join(result_html)
