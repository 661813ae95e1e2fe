"""Command-line interface.

    dslogic combine -f scenario.json
    dslogic bounds -f scenario.json
    dslogic agree -f scenario.json
    dslogic lottery --n 112 --m1 1/10
    dslogic odds --m1 9/10 --m2 9/10 --prior 999/1000
    dslogic nonpartition
    dslogic paper

Every subcommand takes ``--json`` and ``-f FILE``. Exit status is 0 on
success, 1 on a domain error and 2 on a usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .agreement import agreement_report, lottery, nonpartition_witness, odds_swamp
from .errors import DSLogicError
from .lp import cond_prob_bounds, prob_bounds
from .mass import belief, combine_all, plausibility
from .numbers import fmt_decimal, fmt_rational
from .prob import theorem1_spec
from .scenario import (
    KINDS,
    ScenarioError,
    atom_key,
    build_event,
    build_frame,
    build_masses,
    build_system,
    parse_scenario,
)

__all__ = ["main", "run_scenario", "paper_table"]


def num(x: Fraction) -> dict:
    return {"exact": fmt_rational(x), "decimal": fmt_decimal(x)}


def _witness(frame, x) -> dict:
    return {atom_key(frame, j): fmt_rational(v) for j, v in enumerate(x) if v}


def _run_combine(sc: dict) -> dict:
    frame = build_frame(sc)
    masses = build_masses(frame, sc)
    res = combine_all(masses)
    m = res.combined
    rows = []
    for a, v in m.items():
        rows.append({
            "focal": ",".join(a.labels()),
            "mass": num(v),
            "bel": num(belief(m, a)),
            "pls": num(plausibility(m, a)),
        })
    return {"combined": rows, "conflict": num(res.conflict)}


def _run_bounds(sc: dict) -> dict:
    frame = build_frame(sc)
    system, _ = build_system(frame, sc)
    q = sc["query"]
    event = build_event(frame, q["event"], "query.event")
    if "given" in q:
        given = build_event(frame, q["given"], "query.given")
        iv = cond_prob_bounds(system, event.atoms(frame), given.atoms(frame))
    else:
        iv = prob_bounds(system, event.atoms(frame))
    return {
        "lo": num(iv.lo),
        "hi": num(iv.hi),
        "attained": iv.attained,
        "lo_witness": _witness(frame, iv.lo_witness),
        "hi_witness": _witness(frame, iv.hi_witness),
    }


def _run_agree(sc: dict) -> dict:
    frame = build_frame(sc)
    m1, m2 = build_masses(frame, sc)
    spec = theorem1_spec(m1, m2)
    query = frame.subset(sc["query"].split(",") if sc["query"] else [])
    rep = agreement_report(spec, query, sc["samples"], sc["seed"])
    return {
        "blocks": [
            {
                "block": ",".join(r.block.labels()),
                "dempster": num(r.m3),
                "closed_form": num(r.closed_form),
                "member": num(r.member),
                "equal": r.equal,
            }
            for r in rep.rows
        ],
        "blocks_agree": rep.blocks_agree,
        "query": sc["query"],
        "bel": num(rep.bel),
        "constructed_min": num(rep.constructed_min),
        "sampled_min": None if rep.sampled_min is None else num(rep.sampled_min),
        "samples": rep.samples,
        "belief_is_min": rep.belief_is_min,
    }


def _run_lottery(sc: dict) -> dict:
    r = lottery(sc["n"], Fraction(sc["m1"]))
    return {
        "n": r.n,
        "m1x1": num(r.m1x1),
        "m3x1": num(r.m3x1),
        "bel": num(r.bel),
        "posterior": num(r.posterior),
        "t1": num(r.t1),
        "t2": num(r.t2),
    }


def _run_odds(sc: dict) -> dict:
    r = odds_swamp(Fraction(sc["m1"]), Fraction(sc["m2"]), Fraction(sc["prior"]))
    return {
        "dempster": num(r.dempster),
        "problogic": num(r.problogic),
        "odds": num(r.odds),
        "divergence": num(r.divergence),
    }


def _run_nonpartition(sc: dict) -> dict:
    w = nonpartition_witness()
    frame = w.spec.frame
    return {
        "combined": {",".join(a.labels()): num(v) for a, v in w.combined.combined.items()},
        "conflict": num(w.combined.conflict),
        "witness": _witness(frame, w.witness.p),
        "conditions": w.report.summary(),
        "conditional_b_given_E1E2": num(w.conditional),
    }


def paper_table() -> list[dict]:
    """One row per published worked example, recomputed from scratch.

    ``match`` compares the computed values with the published ones: exactly
    where an exact value was published, to the published rounding otherwise.
    """
    rows = []

    def row(scenario, dempster, problogic, reference, match):
        rows.append({
            "scenario": scenario,
            "dempster": dempster,
            "problogic": problogic,
            "reference": reference,
            "match": bool(match),
        })

    s = odds_swamp(Fraction(9, 10), Fraction(9, 10), Fraction(999, 1000))
    row("prior swamping: m1(H)=m2(H)=0.9, P(H)=0.999", s.dempster, s.problogic, "~0.99 / 0.075",
        fmt_decimal(s.dempster, 2) == "0.99" and s.problogic == Fraction(3, 40))

    u = odds_swamp(Fraction(9, 10), Fraction(9, 10), Fraction(1, 2))
    row("uniform prior: m1(H)=m2(H)=0.9, P(H)=0.5", u.dempster, u.problogic, "equal",
        u.dempster == u.problogic)

    w = nonpartition_witness()
    b = w.spec.frame.subset(["b"])
    row("overlapping focal sets {a,b},{b,c}: belief in {b}", w.combined.combined.get(b), w.conditional,
        "0.5 / 0", w.combined.combined.get(b) == Fraction(1, 2) and w.conditional == 0 and w.report.all_pass)

    for n, m, ref in ((112, Fraction(1, 10), "0.001 / 0.1"), (112, Fraction(9, 10), "0.075 / 0.9")):
        r = lottery(n, m)
        row(f"lottery: n={n}, m1({{x1}})={fmt_decimal(m, 1)}", r.m3x1, r.posterior, ref,
            r.m3x1 == Fraction(ref.split(" / ")[0]) and r.posterior == Fraction(ref.split(" / ")[1]))

    big = lottery(10**6, Fraction(1, 10))
    row("lottery: n=1000000, m1({x1})=0.1 (posterior free of n)", big.m3x1, big.posterior, "-> 0 / 0.1",
        big.m3x1 < Fraction(1, 10**5) and big.posterior == Fraction(1, 10))
    return rows


def _run_paper(sc: dict) -> dict:
    rows = paper_table()
    return {
        "rows": [
            {**r, "dempster": num(r["dempster"]), "problogic": num(r["problogic"])}
            for r in rows
        ],
        "all_match": all(r["match"] for r in rows),
    }


_RUNNERS = {
    "combine": _run_combine,
    "bounds": _run_bounds,
    "agree": _run_agree,
    "lottery": _run_lottery,
    "odds": _run_odds,
    "nonpartition": _run_nonpartition,
    "paper": _run_paper,
}


def run_scenario(doc: dict, kind: str | None = None) -> dict:
    """Validate ``doc`` and run it; returns ``{"scenario": ..., "result": ...}``."""
    sc = parse_scenario(doc, kind)
    return {"scenario": sc, "result": _RUNNERS[sc["kind"]](sc)}


# ---------------------------------------------------------------- rendering


def _cell(v) -> str:
    if isinstance(v, dict) and "exact" in v:
        e, d = v["exact"], v["decimal"]
        return e if "/" not in e else f"{e} ({d})"
    if v is None:
        return "-"
    return str(v)


def _table(headers, rows) -> str:
    cells = [[_cell(v) for v in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(line.rstrip() for line in lines)


def _pairs(items) -> str:
    return _table(["quantity", "value"], [(k, v) for k, v in items])


def render_text(out: dict) -> str:
    kind = out["scenario"]["kind"]
    r = out["result"]
    if kind == "combine":
        body = _table(["focal set", "mass", "bel", "pls"],
                      [(x["focal"], x["mass"], x["bel"], x["pls"]) for x in r["combined"]])
        return f"{body}\n\nconflict K = {_cell(r['conflict'])}"
    if kind == "bounds":
        return _pairs([("lower", r["lo"]), ("upper", r["hi"]), ("attained", r["attained"])])
    if kind == "agree":
        body = _table(["block", "dempster", "closed form", "member", "equal"],
                      [(x["block"], x["dempster"], x["closed_form"], x["member"], x["equal"]) for x in r["blocks"]])
        tail = _pairs([
            ("block masses agree", r["blocks_agree"]),
            ("query", "{" + r["query"] + "}"),
            ("Bel(query)", r["bel"]),
            ("extremal member", r["constructed_min"]),
            (f"min over {r['samples']} samples", r["sampled_min"]),
            ("Bel is the minimum", r["belief_is_min"]),
        ])
        return f"{body}\n\n{tail}"
    if kind == "lottery":
        return _table(["n", "m1({x1})", "m3({x1})", "Bel({x1})", "P(x1|E1&E2)", "T1", "T2"],
                      [(r["n"], r["m1x1"], r["m3x1"], r["bel"], r["posterior"], r["t1"], r["t2"])])
    if kind == "odds":
        return _pairs([("Dempster m1+m2(H)", r["dempster"]), ("P(H|E1&E2)", r["problogic"]),
                       ("odds O(H)", r["odds"]), ("divergence", r["divergence"])])
    if kind == "nonpartition":
        body = _table(["focal set", "combined mass"], list(r["combined"].items()))
        tail = _pairs([("conflict K", r["conflict"]),
                       ("conditions (i)-(iv)", ", ".join(f"{k}:{'ok' if v else 'FAIL'}" for k, v in r["conditions"].items())),
                       ("P(b|E1&E2) at witness", r["conditional_b_given_E1E2"])])
        return f"{body}\n\n{tail}"
    if kind == "paper":
        body = _table(["scenario", "dempster", "prob. logic", "reference", "match"],
                      [(x["scenario"], x["dempster"], x["problogic"], x["reference"], x["match"]) for x in r["rows"]])
        return f"{body}\n\nall match: {r['all_match']}"
    raise AssertionError(kind)


# ---------------------------------------------------------------- argv


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dslogic", description="Dempster's rule against probabilistic logic.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("-f", "--file", help="scenario file (JSON)")
    for kind in KINDS:
        sp = sub.add_parser(kind, parents=[common])
        if kind == "lottery":
            sp.add_argument("--n", type=int)
            sp.add_argument("--m1")
        elif kind == "odds":
            sp.add_argument("--m1")
            sp.add_argument("--m2")
            sp.add_argument("--prior")
    return p


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from None


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    kind = args.command
    try:
        doc = _load(args.file) if args.file else {"version": 1, "kind": kind}
        for name in ("n", "m1", "m2", "prior"):
            value = getattr(args, name, None)
            if value is not None:
                doc[name] = value
        if args.file is None and kind in ("combine", "bounds", "agree"):
            raise ScenarioError(f"'{kind}' needs a scenario file (-f)")
        out = run_scenario(doc, kind)
    except ScenarioError as exc:
        print(f"dslogic {kind}: {exc}", file=sys.stderr)
        return 2
    except DSLogicError as exc:
        print(f"dslogic {kind}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        sys.stdout.write(json.dumps(out, indent=2, ensure_ascii=False) + "\n")
    else:
        print(render_text(out))
    if kind == "paper" and not out["result"]["all_match"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
