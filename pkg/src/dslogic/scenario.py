"""Scenario files: JSON documents that describe one engine call.

Every file has ``"version": 1`` and a ``"kind"``; the remaining fields depend
on the kind and unknown fields are rejected. Numbers are ``"p/q"`` strings,
decimal strings, or JSON integers. Subsets are written as comma-separated
labels (``"a,b"``) or label lists.

:func:`parse_scenario` validates a document and returns it in canonical form
(rationals as ``"p/q"``, subsets in frame order), which is what the CLI echoes
back in its JSON output.
"""

from __future__ import annotations

from fractions import Fraction

from .frame import Frame, SubsetMask, make_frame
from .lp import ConstraintSystem, LinearConstraint, linearize_conditional, probability_constraint
from .mass import MassFunction, make_mass
from .numbers import fmt_rational, to_fraction
from .prob import ALL_CELLS, Cell, Event

__all__ = ["ScenarioError", "KINDS", "parse_scenario", "build_frame", "build_masses", "build_event", "build_system"]

VERSION = 1
KINDS = ("combine", "bounds", "agree", "lottery", "odds", "nonpartition", "paper")

_FIELDS = {
    "combine": {"frame", "masses"},
    "bounds": {"frame", "constraints", "query"},
    "agree": {"frame", "masses", "query", "samples", "seed"},
    "lottery": {"n", "m1"},
    "odds": {"m1", "m2", "prior"},
    "nonpartition": set(),
    "paper": set(),
}
_REQUIRED = {
    "combine": {"frame", "masses"},
    "bounds": {"frame", "query"},
    "agree": {"frame", "masses", "query"},
    "lottery": {"n", "m1"},
    "odds": {"m1", "m2", "prior"},
}

_CELL_GROUPS = {
    "E1": {Cell.E1E2, Cell.E1_NOT_E2},
    "E2": {Cell.E1E2, Cell.NOT_E1_E2},
    "~E1": {Cell.NOT_E1_E2, Cell.NOT_E1_NOT_E2},
    "~E2": {Cell.E1_NOT_E2, Cell.NOT_E1_NOT_E2},
}


class ScenarioError(ValueError):
    """The scenario document is malformed (a usage error, not a domain error)."""


def _num(value, what: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ScenarioError(f"{what}: numbers must be 'p/q' or decimal strings, got {value!r}")
    try:
        return to_fraction(value)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{what}: {exc}") from None


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{what} must be an integer, got {value!r}")
    return value


def _labels(value, what: str) -> list[str]:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",")] if value.strip() else []
    elif isinstance(value, list) and all(isinstance(p, str) for p in value):
        parts = value
    else:
        raise ScenarioError(f"{what}: expected a label list or comma-separated string, got {value!r}")
    return parts


def build_frame(doc) -> Frame:
    labels = doc.get("frame")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ScenarioError("frame must be a list of label strings")
    try:
        return make_frame(labels)
    except ValueError as exc:
        raise ScenarioError(f"frame: {exc}") from None


def _subset(frame: Frame, value, what: str) -> SubsetMask:
    try:
        return frame.subset(_labels(value, what))
    except ValueError as exc:
        raise ScenarioError(f"{what}: {exc}") from None


def _key(mask: SubsetMask) -> str:
    return ",".join(mask.labels())


def build_masses(frame: Frame, doc) -> list[MassFunction]:
    """Mass functions from ``doc["masses"]``; domain errors (bad sums) propagate."""
    masses = doc.get("masses")
    if not isinstance(masses, list) or not all(isinstance(m, dict) for m in masses):
        raise ScenarioError("masses must be a list of {focal set: mass} objects")
    out = []
    for idx, m in enumerate(masses):
        pairs = [(_subset(frame, k, f"masses[{idx}] key {k!r}"), _num(v, f"masses[{idx}][{k!r}]")) for k, v in m.items()]
        out.append(make_mass(frame, pairs))
    return out


def build_event(frame: Frame, value, what: str) -> Event:
    if not isinstance(value, dict) or not set(value) <= {"theta", "cells"}:
        raise ScenarioError(f"{what}: an event is an object with optional 'theta' and 'cells'")
    theta = _subset(frame, value["theta"], f"{what}.theta") if "theta" in value else None
    if "cells" in value:
        cells = set()
        for tok in _labels(value["cells"], f"{what}.cells"):
            if tok in _CELL_GROUPS:
                cells |= _CELL_GROUPS[tok]
            else:
                try:
                    cells.add(Cell.parse(tok))
                except ValueError as exc:
                    raise ScenarioError(f"{what}: {exc}") from None
        cells = frozenset(cells)
    else:
        cells = ALL_CELLS
    return Event(theta, cells)


def _event_doc(ev: Event) -> dict:
    out = {}
    if ev.theta is not None:
        out["theta"] = list(ev.theta.labels())
    if ev.cells != ALL_CELLS:
        out["cells"] = [c.token for c in sorted(ev.cells)]
    return out


def atom_key(frame: Frame, j: int) -> str:
    return f"{frame.labels[j // 4]}|{Cell(j % 4).token}"


def _atom_index(frame: Frame, key: str, what: str) -> int:
    label, sep, tok = key.partition("|")
    if not sep:
        raise ScenarioError(f"{what}: atom keys look like 'label|E1E2', got {key!r}")
    try:
        return frame.index(label) * 4 + Cell.parse(tok)
    except ValueError as exc:
        raise ScenarioError(f"{what}: {exc}") from None


def _constraint(frame: Frame, c, idx: int):
    """One constraint object -> (LinearConstraint, canonical document)."""
    what = f"constraints[{idx}]"
    if not isinstance(c, dict):
        raise ScenarioError(f"{what} must be an object")
    rel = c.get("relation", "=")
    if rel not in ("=", "<=", ">="):
        raise ScenarioError(f"{what}.relation must be '=', '<=' or '>='")
    if "linear" in c:
        if not set(c) <= {"linear", "relation", "rhs"}:
            raise ScenarioError(f"{what}: unknown fields {sorted(set(c) - {'linear', 'relation', 'rhs'})}")
        if not isinstance(c["linear"], dict):
            raise ScenarioError(f"{what}.linear must map atom keys to coefficients")
        coeffs = {}
        for k, v in c["linear"].items():
            j = _atom_index(frame, k, what)
            coeffs[j] = coeffs.get(j, Fraction(0)) + _num(v, f"{what}.linear[{k!r}]")
        rhs = _num(c.get("rhs", 0), f"{what}.rhs")
        try:
            con = LinearConstraint(coeffs, rel, rhs)
        except ValueError as exc:
            raise ScenarioError(f"{what}: {exc}") from None
        doc = {
            "linear": {atom_key(frame, j): fmt_rational(v) for j, v in con.coefficients.items()},
            "relation": rel,
            "rhs": fmt_rational(rhs),
        }
        return con, doc
    if "prob" in c:
        if not set(c) <= {"prob", "given", "relation", "value"}:
            raise ScenarioError(f"{what}: unknown fields {sorted(set(c) - {'prob', 'given', 'relation', 'value'})}")
        if "value" not in c:
            raise ScenarioError(f"{what}: missing 'value'")
        ev = build_event(frame, c["prob"], f"{what}.prob")
        value = _num(c["value"], f"{what}.value")
        doc = {"prob": _event_doc(ev)}
        try:
            if "given" in c:
                given = build_event(frame, c["given"], f"{what}.given")
                con = linearize_conditional(ev.atoms(frame), given.atoms(frame), value, rel)
                doc["given"] = _event_doc(given)
            else:
                con = probability_constraint(ev.atoms(frame), rel, value)
        except ValueError as exc:
            raise ScenarioError(f"{what}: {exc}") from None
        doc["relation"] = rel
        doc["value"] = fmt_rational(value)
        return con, doc
    raise ScenarioError(f"{what}: expected a 'prob' or 'linear' constraint")


def build_system(frame: Frame, doc):
    """ConstraintSystem plus canonical constraint documents."""
    raw = doc.get("constraints", [])
    if not isinstance(raw, list):
        raise ScenarioError("constraints must be a list")
    built = [_constraint(frame, c, i) for i, c in enumerate(raw)]
    return ConstraintSystem(frame.size * 4, tuple(c for c, _ in built)), [d for _, d in built]


def parse_scenario(doc, kind: str | None = None) -> dict:
    """Validate ``doc`` and return its canonical form.

    ``kind`` is the CLI subcommand; the file's kind must match when both are
    given. Domain errors (e.g. masses not summing to 1) are not raised here.
    """
    if not isinstance(doc, dict):
        raise ScenarioError("a scenario must be a JSON object")
    version = doc.get("version", None)
    if version != VERSION:
        raise ScenarioError(f"unsupported scenario version {version!r}; expected {VERSION}")
    file_kind = doc.get("kind", kind)
    if file_kind not in KINDS:
        raise ScenarioError(f"unknown kind {file_kind!r}; expected one of {list(KINDS)}")
    if kind is not None and file_kind != kind:
        raise ScenarioError(f"scenario kind {file_kind!r} does not match command {kind!r}")
    kind = file_kind
    extra = set(doc) - {"version", "kind"} - _FIELDS[kind]
    if extra:
        raise ScenarioError(f"unknown fields for kind {kind!r}: {sorted(extra)}")
    missing = _REQUIRED.get(kind, set()) - set(doc)
    if missing:
        raise ScenarioError(f"missing fields for kind {kind!r}: {sorted(missing)}")

    out = {"version": VERSION, "kind": kind}
    if kind in ("combine", "agree", "bounds"):
        frame = build_frame(doc)
        out["frame"] = list(frame.labels)
    if kind in ("combine", "agree"):
        masses = doc["masses"]
        if not isinstance(masses, list) or not all(isinstance(m, dict) for m in masses):
            raise ScenarioError("masses must be a list of {focal set: mass} objects")
        if kind == "combine" and len(masses) < 2:
            raise ScenarioError("combine needs at least two mass functions")
        if kind == "agree" and len(masses) != 2:
            raise ScenarioError("agree needs exactly two mass functions")
        canon = []
        for idx, m in enumerate(masses):
            entries = {}
            for k, v in m.items():
                key = _key(_subset(frame, k, f"masses[{idx}] key {k!r}"))
                entries[key] = entries.get(key, Fraction(0)) + _num(v, f"masses[{idx}][{k!r}]")
            canon.append({k: fmt_rational(v) for k, v in entries.items()})
        out["masses"] = canon
    if kind == "agree":
        out["query"] = _key(_subset(frame, doc["query"], "query"))
        out["samples"] = _int(doc.get("samples", 100), "samples")
        out["seed"] = _int(doc.get("seed", 0), "seed")
        if out["samples"] < 0:
            raise ScenarioError("samples must be non-negative")
    if kind == "bounds":
        _, cons = build_system(frame, doc)
        out["constraints"] = cons
        q = doc["query"]
        if not isinstance(q, dict) or "event" not in q or not set(q) <= {"event", "given"}:
            raise ScenarioError("query must be an object with 'event' and optional 'given'")
        qd = {"event": _event_doc(build_event(frame, q["event"], "query.event"))}
        if "given" in q:
            qd["given"] = _event_doc(build_event(frame, q["given"], "query.given"))
        out["query"] = qd
    if kind == "lottery":
        out["n"] = _int(doc["n"], "n")
        out["m1"] = fmt_rational(_num(doc["m1"], "m1"))
    if kind == "odds":
        for name in ("m1", "m2", "prior"):
            out[name] = fmt_rational(_num(doc[name], name))
    return out
