"""Finite natural models, free constructions and polynomials in finite sets."""

from ._core import (
    Polynomial,
    Report,
    check_composition,
    check_eat,
    check_representability,
    check_sigma,
    check_unit,
    cli,
    compose,
    extend,
    extend_by_sigma,
    extend_by_term,
    extend_by_type,
    extend_by_unit,
    fam_prop,
    model_to_json,
    parse_model,
    term_model,
)

__all__ = [
    "Polynomial",
    "Report",
    "check_composition",
    "check_eat",
    "check_representability",
    "check_sigma",
    "check_unit",
    "cli",
    "compose",
    "extend",
    "extend_by_sigma",
    "extend_by_term",
    "extend_by_type",
    "extend_by_unit",
    "fam_prop",
    "model_to_json",
    "parse_model",
    "term_model",
]
