"""Command-line front end.

Exit codes: 0 ran fine (whatever the verdict), 2 bad document, 3 precision
or numerical failure, 4 unsupported combination, 5 oracle disagreement,
6 oracle cost guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import metadata

import numpy as np

from .document import (
    field_to_doc,
    load_json,
    operator_to_doc,
    parse_generators,
    parse_group,
    parse_operator,
)
from .errors import (
    CostGuardExceeded,
    DivisionByZeroScalar,
    DocumentError,
    FieldError,
    FieldMismatch,
    InsufficientPrecision,
    OperatorError,
    QuadratureFailure,
    ScalarSyntaxError,
    UnsupportedComponent,
)
from .operator import BallSupport, Verdict, canonicalize, decide
from .subgroup import ClosedSubgroup, closure, full_space, is_dense
from .verify import (
    OracleConfig,
    apply_to_wave,
    check_annihilator,
    density_oracle,
    wave_from_symbol,
    zero_set_scan,
)

EXIT_OK = 0
EXIT_DOCUMENT = 2
EXIT_PRECISION = 3
EXIT_UNSUPPORTED = 4
EXIT_DISAGREE = 5
EXIT_COST = 6

COVERAGE_THRESHOLD = 0.95
DEFAULT_SEED = 42


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _vec(v) -> list[str]:
    return [str(x) for x in v]


def verdict_block(v: Verdict) -> dict:
    out = {
        "liouville": v.liouville,
        "period_group": v.period_group.to_dict(),
        "period_group_dense": is_dense(v.period_group),
        "support_group": v.support_group.to_dict(),
        "local_group": v.local_group.to_dict(),
        "c_mu": _vec(v.c_mu),
        "effective_drift": _vec(v.effective_drift),
        "counterexample": None,
        "witness": None,
        "one_d_form": None,
    }
    if v.counterexample is not None:
        out["counterexample"] = {"xi": _vec(v.counterexample), "solution": "u(x) = cos(2 pi xi . x)"}
        out["witness"] = {"h_normal": _vec(v.witness[0]), "c": _vec(v.witness[1])}
    if v.one_d_form is not None:
        out["one_d_form"] = {"g": str(v.one_d_form.g),
                             "omega": {str(n): str(w) for n, w in v.one_d_form.omega}}
    return out


def _symbol_checks(op, v: Verdict, seed: int, n_samples: int = 200, path_samples: int = 20) -> dict:
    if any(isinstance(c, BallSupport) for c in op.components):
        raise UnsupportedComponent("symbol checks are not available for ball_support components")
    out: dict = {}
    if v.counterexample is not None:
        out["annihilator_residual"] = check_annihilator(op, v.counterexample)
        rng = np.random.default_rng(seed)
        diffs = []
        for _ in range(path_samples):
            x = rng.uniform(-2, 2, size=op.dim)
            diffs.append(abs(apply_to_wave(op, v.counterexample, x) - wave_from_symbol(op, v.counterexample, x)))
        out["path_equality_max_diff"] = max(diffs)
    out["zero_set_scan"] = zero_set_scan(op, v.period_group, n_samples, seed).to_dict()
    return out


def _report(command: str, seed, **blocks) -> dict:
    rep = {"command": command, "version": _version(), "seed": seed}
    rep.update(blocks)
    return rep


def _assumptions(field, warnings=()) -> dict:
    return {"independence": list(field.assertions), "warnings": list(warnings)}


def _render(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{k}:")
                lines.extend(_render(val, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_atom_text(val)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and item and not _flat_list(item):
                lines.append(f"{pad}-")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}- {_atom_text(item)}")
    else:
        lines.append(pad + _atom_text(obj))
    return lines


def _flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(x, (dict, list)) for x in val)


def _atom_text(val) -> str:
    if isinstance(val, list):
        return "(" + ", ".join(_atom_text(x) for x in val) + ")"
    if isinstance(val, dict):
        return "{}"
    if val is None:
        return "none"
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return f"{val:.6g}"
    return str(val)


def render_text(report: dict) -> str:
    return "\n".join(_render(report)) + "\n"


# ---------------------------------------------------------------- commands


def _load_operator(path):
    doc = load_json(path)
    op = parse_operator(doc)
    return doc, op


def cmd_decide(args) -> tuple[int, dict]:
    doc, op = _load_operator(args.path)
    v = decide(op)
    blocks = {"input": operator_to_doc(op, doc.get("truncation")), "verdict": verdict_block(v)}
    if args.verify:
        blocks["verification"] = _symbol_checks(canonicalize(op), v, args.seed)
    blocks["assumptions"] = _assumptions(op.field, v.warnings)
    return EXIT_OK, _report("decide", args.seed, **blocks)


def cmd_period_group(args) -> tuple[int, dict]:
    doc, op = _load_operator(args.path)
    v = decide(op)
    block = {
        "v_basis": v.period_group.to_dict()["v_basis"],
        "lattice_basis": v.period_group.to_dict()["lattice_basis"],
        "dense": is_dense(v.period_group),
        "c_mu": _vec(v.c_mu),
        "effective_drift": _vec(v.effective_drift),
        "support_group": v.support_group.to_dict(),
        "local_group": v.local_group.to_dict(),
    }
    return EXIT_OK, _report("period-group", None, input=operator_to_doc(op, doc.get("truncation")),
                            period_group=block, assumptions=_assumptions(op.field, v.warnings))


def cmd_closure(args) -> tuple[int, dict]:
    gen = parse_generators(load_json(args.path))
    G = closure(gen)
    block = dict(G.to_dict(), dense=is_dense(G))
    return EXIT_OK, _report("closure", None, generators={"atoms": [_vec(a) for a in gen.atoms],
                                                         "lines": [_vec(h) for h in gen.lines],
                                                         "field": field_to_doc(gen.field)},
                            closure=block, assumptions=_assumptions(gen.field))


def cmd_counterexample(args) -> tuple[int, dict]:
    doc, op = _load_operator(args.path)
    v = decide(op)
    block = {"liouville": v.liouville}
    if v.counterexample is None:
        block["counterexample"] = None
        block["reason"] = "the period group is dense, so every bounded solution is constant"
    else:
        block.update(verdict_block(v)["counterexample"])
        block["witness"] = verdict_block(v)["witness"]
    blocks = {"input": operator_to_doc(op, doc.get("truncation")), "counterexample": block}
    if args.verify:
        blocks["verification"] = _symbol_checks(canonicalize(op), v, args.seed)
    blocks["assumptions"] = _assumptions(op.field, v.warnings)
    return EXIT_OK, _report("counterexample", args.seed, **blocks)


def cmd_symbol_check(args) -> tuple[int, dict]:
    doc, op = _load_operator(args.path)
    v = decide(op)
    checks = _symbol_checks(canonicalize(op), v, args.seed)
    return EXIT_OK, _report("symbol-check", args.seed, input=operator_to_doc(op, doc.get("truncation")),
                            verdict={"liouville": v.liouville,
                                     "xi": _vec(v.counterexample) if v.counterexample is not None else None},
                            verification=checks, assumptions=_assumptions(op.field, v.warnings))


def cmd_oracle(args) -> tuple[int, dict]:
    doc = load_json(args.path)
    gen = parse_generators(doc)
    exact = closure(gen)
    predicted_block = doc.get("predicted")
    if args.predicted:
        predicted_block = load_json(args.predicted)
    predicted: ClosedSubgroup = parse_group(predicted_block, gen.dim, gen.field) if predicted_block else exact
    gens = list(gen.atoms) + list(gen.lines)
    if gen.lines:
        raise UnsupportedComponent("the density oracle enumerates integer combinations; lines are not supported")
    cfg = OracleConfig(N=args.oracle_N, eps=args.oracle_eps, seed=args.seed)
    res = density_oracle(gens, predicted, cfg)
    full = density_oracle(gens, full_space(gen.dim, gen.field), cfg)
    agree = res.confined and res.covered_fraction >= COVERAGE_THRESHOLD
    block = {
        "predicted": predicted.to_dict(),
        "predicted_dense": is_dense(predicted),
        "N": cfg.N,
        "eps": cfg.eps,
        "confined": res.confined,
        "confinement_certified": res.certified,
        "max_generator_distance": res.max_generator_distance,
        "covered_fraction": res.covered_fraction,
        "covered_fraction_full_space": full.covered_fraction,
        "targets": res.n_targets,
        "agreement": agree,
    }
    rep = _report("oracle", args.seed, closure=dict(exact.to_dict(), dense=is_dense(exact)), oracle=block,
                  assumptions=_assumptions(gen.field))
    return (EXIT_OK if agree else EXIT_DISAGREE), rep


COMMANDS = {
    "decide": cmd_decide,
    "period-group": cmd_period_group,
    "closure": cmd_closure,
    "counterexample": cmd_counterexample,
    "symbol-check": cmd_symbol_check,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liouville",
                                description="Decide the Liouville property for Levy-type operators exactly.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("path", help="JSON document (operator, or generators for closure/oracle)")
        sp.add_argument("--out", help="write the machine-readable JSON report here")
        sp.add_argument("--verify", action="store_true", help="run symbol checks on the verdict")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--oracle-N", dest="oracle_N", type=int, default=10**4)
        sp.add_argument("--oracle-eps", dest="oracle_eps", type=float, default=0.05)
        if name == "oracle":
            sp.add_argument("--predicted", help="JSON file with the predicted group (default: exact closure)")
    return p


def _error_report(command, code, exc) -> dict:
    return {"command": command, "version": _version(), "error": {"exit_code": code, "type": type(exc).__name__,
                                                                 "message": str(exc)}}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = COMMANDS[args.command](args)
    except (DocumentError, FieldError, ScalarSyntaxError, OperatorError, FieldMismatch,
            DivisionByZeroScalar) as exc:
        code, report = EXIT_DOCUMENT, _error_report(args.command, EXIT_DOCUMENT, exc)
    except (InsufficientPrecision, QuadratureFailure, ArithmeticError) as exc:
        code, report = EXIT_PRECISION, _error_report(args.command, EXIT_PRECISION, exc)
    except UnsupportedComponent as exc:
        code, report = EXIT_UNSUPPORTED, _error_report(args.command, EXIT_UNSUPPORTED, exc)
    except CostGuardExceeded as exc:
        code, report = EXIT_COST, _error_report(args.command, EXIT_COST, exc)
    except ValueError as exc:
        # remaining structural problems (wrong vector lengths in generator files, ...)
        code, report = EXIT_DOCUMENT, _error_report(args.command, EXIT_DOCUMENT, exc)
    stream = sys.stdout if code in (EXIT_OK, EXIT_DISAGREE) else sys.stderr
    stream.write(render_text(report))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
