import numpy as np
import pytest
import sympy as sp

from utils import format_response_as_html, format_scalar, parse_exact, parse_matrix, parse_scalar


@pytest.mark.parametrize("text, value", [
    ("2", 2),
    ("-1/3", -1 / 3),
    ("sqrt(2)", np.sqrt(2)),
    ("3*sqrt(2)", 3 * np.sqrt(2)),
    ("1/sqrt(12)", 1 / np.sqrt(12)),
    ("w", np.exp(2j * np.pi / 3)),
    ("-wbar", -np.exp(-2j * np.pi / 3)),
    ("sqrt(3)/sqrt(12)", 0.5),
    ("1/(2*sqrt(3))", 1 / (2 * np.sqrt(3))),
    ("-sqrt(2)*w/3", -np.sqrt(2) * np.exp(2j * np.pi / 3) / 3),
    ("(1+sqrt(5))/2", (1 + np.sqrt(5)) / 2),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["pi", "x + 1", "sqrt(", "import os"])
def test_parse_scalar_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_parse_exact_keeps_radicals():
    assert parse_exact("sqrt(3)/sqrt(12)") == sp.Rational(1, 2)
    assert parse_exact("1/sqrt(18)") == sp.sqrt(2) / 6


def test_parse_matrix_applies_prefactor():
    M = parse_matrix({"prefactor": "1/sqrt(2)", "rows": [["1", "1"], ["1", "-1"]]})
    np.testing.assert_allclose(M, np.array([[1, 1], [1, -1]]) / np.sqrt(2))


@pytest.mark.parametrize("value, text", [
    (0.0, "0"),
    (1 / 3, "1/3"),
    (np.sqrt(2) / 3, "√2/3"),
    (-1 / np.sqrt(12), "-√3/6"),
    (2.0, "2"),
    (np.exp(2j * np.pi / 3) / 3, "1/3ω"),
    (2 * np.sqrt(6) / 3, "2√6/3"),
    (np.sqrt(3), "√3"),
    # outside the pattern library: radicand 7, denominator 18
    (np.sqrt(7) / 13, "0.203519"),
    (1 / np.sqrt(162), "0.0785674"),
])
def test_format_scalar(value, text):
    assert format_scalar(value) == text


def test_html_escapes_and_renders_tables():
    html = format_response_as_html("# Title\n\n| a | <b> |\n|---|---|\n\n- **bold** item")
    assert "<h2>Title</h2>" in html
    assert "<td>&lt;b&gt;</td>" in html
    assert "<li><strong>bold</strong> item</li>" in html
