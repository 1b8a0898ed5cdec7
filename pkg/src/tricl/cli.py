"""File-based command line front end.

Input files are JSON objects with the schema

    {"kind": "trinomial" | "type1",
     "blocks": [[positive ints], ...],
     "m": nonnegative int (optional, default 0),
     "theta": ["p/q" | "generic", ...] (optional)}

Subcommands accept one or more files or directories (a directory is the
batch of its *.json files); failure in one input never aborts the others.
Output goes to stdout as indented text or, with --format json, as one JSON
object per input.  Exit codes: 0 success, 2 invalid input, 3 class group not
finitely generated where a group was demanded, 4 iteration/diagram not
admitted, 5 internal cross-check mismatch.

The environment variable TRICL_MAX_BLOCK (default 16) caps the number of
relations and the block sizes to guard against accidentally huge inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .classgroup import (
    ClassGroup,
    GroupMethod,
    NotFinitelyGenerated,
    class_group_report,
    isolated_singularity_report,
    n_tilde,
    predicates,
)
from .coxring import (
    DuvalDiagram,
    IterationChain,
    duval_diagram,
    is_hyperplatonic,
    iterate_cox_rings,
    total_coordinate_space,
)
from .errors import (
    FactorialInputError,
    InvalidVarietyError,
    IterationNotAdmittedError,
    NotAdjustedError,
    NotHyperplatonicError,
    NotRationalError,
    OracleMismatchError,
)
from .exactlinalg import FgAbelianGroup, IntMatrix
from .selftest import run_selftest
from .type1 import Type1Variety, adjust_type1, class_group_type1, lift_to_type2, validate_type1
from .variety import (
    TrinomialVariety,
    adjust,
    block_invariants,
    dimension,
    rationality_class,
    render_relations,
    validate,
)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NOT_FINITELY_GENERATED = 3
EXIT_NOT_ADMITTED = 4
EXIT_INTERNAL_MISMATCH = 5

DEFAULT_MAX_BLOCK = 16


class SpecError(ValueError):
    """Malformed input file; carries human-readable field context."""


def _max_block() -> int:
    raw = os.environ.get("TRICL_MAX_BLOCK", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_BLOCK
    except ValueError:
        raise SpecError(f"TRICL_MAX_BLOCK is not an integer: {raw!r}")


class VarietySpec:
    """Parsed and size-checked content of one input file."""

    def __init__(self, kind: str, blocks, m: int, theta):
        self.kind = kind
        self.blocks = blocks
        self.m = m
        self.theta = theta

    def to_variety(self) -> Union[TrinomialVariety, Type1Variety]:
        if self.kind == "trinomial":
            return validate(TrinomialVariety(self.blocks, self.m, self.theta))
        return validate_type1(Type1Variety(self.blocks, self.m, self.theta))

    def echo(self) -> dict:
        return {
            "kind": self.kind,
            "blocks": [list(b) for b in self.blocks],
            "m": self.m,
            "theta": list(self.theta) if self.theta is not None else None,
        }


def parse_spec(text: str) -> VarietySpec:
    """Parse one JSON variety description, with field-level error context."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict):
        raise SpecError("top level must be a JSON object")
    unknown = set(raw) - {"kind", "blocks", "m", "theta"}
    if unknown:
        raise SpecError(f"unknown fields: {sorted(unknown)}")

    kind = raw.get("kind")
    if kind not in ("trinomial", "type1"):
        raise SpecError(f"field 'kind' must be 'trinomial' or 'type1', got {kind!r}")
    blocks = raw.get("blocks")
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise SpecError("field 'blocks' must be a list of lists of integers")
    for i, block in enumerate(blocks):
        for j, entry in enumerate(block):
            if not isinstance(entry, int) or isinstance(entry, bool) or entry < 1:
                raise SpecError(f"blocks[{i}][{j}] must be a positive integer, got {entry!r}")
    m = raw.get("m", 0)
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise SpecError(f"field 'm' must be a nonnegative integer, got {m!r}")
    theta = raw.get("theta")
    if theta is not None:
        if not isinstance(theta, list) or not all(isinstance(t, str) for t in theta):
            raise SpecError("field 'theta' must be a list of strings ('p/q' or 'generic')")
        for i, t in enumerate(theta):
            if t != "generic":
                try:
                    Fraction(t)
                except (ValueError, ZeroDivisionError):
                    raise SpecError(f"theta[{i}] is neither 'generic' nor a rational: {t!r}")

    cap = _max_block()
    if len(blocks) - 1 > cap:
        raise SpecError(f"{len(blocks)} blocks exceed TRICL_MAX_BLOCK={cap}")
    if any(len(b) > cap for b in blocks):
        raise SpecError(f"a block exceeds TRICL_MAX_BLOCK={cap} variables")

    return VarietySpec(kind, [tuple(b) for b in blocks], m, tuple(theta) if theta else None)


def group_json(group: ClassGroup) -> dict:
    if isinstance(group, NotFinitelyGenerated):
        return {"finitely_generated": False, "pretty": "not finitely generated"}
    return {
        "finitely_generated": True,
        "rank": group.rank,
        "invariant_factors": list(group.invariant_factors),
        "pretty": str(group),
    }


def _matrix_json(matrix: IntMatrix) -> list[list[int]]:
    return [list(matrix.row(i)) for i in range(matrix.rows)]


def _triple_json(triple) -> Optional[dict]:
    if triple is None:
        return None
    return {"triple": list(triple.as_tuple()), "ade_label": triple.ade_label}


def _adjusted_json(adjusted: TrinomialVariety, record) -> dict:
    return {
        "blocks": [list(b) for b in adjusted.blocks],
        "m": adjusted.m,
        "degenerate": adjusted.is_degenerate,
        "eliminated_blocks": list(record.eliminated),
        "permutation": list(record.permutation),
        "relations": render_relations(adjusted),
    }


def _invariants_json(adjusted: TrinomialVariety) -> dict:
    inv = block_invariants(adjusted)
    kind = rationality_class(adjusted)
    return {
        "frak_l": list(inv.frak_l),
        "pairwise_gcd": [list(row) for row in inv.pairwise_gcd],
        "frak_l_triple": inv.frak_l_small,
        "c": list(inv.c) if inv.c is not None else None,
        "dimension": dimension(adjusted),
        "n_tilde": n_tilde(adjusted) if kind.is_rational else None,
        "rationality": {"kind": kind.kind.value, "c": kind.c},
    }


def _class_group_json(adjusted: TrinomialVariety, method: GroupMethod) -> dict:
    report = class_group_report(adjusted, method)
    finitely_generated = isinstance(report.group, FgAbelianGroup)
    return {
        "method": method.value,
        "group": group_json(report.group),
        "formula": group_json(report.group) if method is not GroupMethod.SNF else None,
        "snf": (
            group_json(report.group)
            if method is not GroupMethod.FORMULA and finitely_generated
            else None
        ),
        "agree": True if method is GroupMethod.BOTH and finitely_generated else None,
        "n_tilde": report.n_tilde,
        "rank_check": list(report.rank_check) if report.rank_check else None,
        "compulsory_torsion": group_json(report.ctors) if report.ctors else None,
    }


def _chain_json(chain: IterationChain) -> dict:
    steps = []
    for step in chain.steps:
        steps.append(
            {
                "blocks": [list(b) for b in step.variety.blocks],
                "m": step.variety.m,
                "degenerate": step.variety.is_degenerate,
                "class_group": group_json(step.class_group),
                "basic_platonic_triple": _triple_json(step.triple),
            }
        )
    return {"admitted": True, "steps": steps, "patterns": list(chain.patterns)}


def _duval_json(diagram: DuvalDiagram) -> dict:
    return {
        "x_triple": _triple_json(diagram.x_triple),
        "xprime_triple": _triple_json(diagram.xprime_triple),
        "y_blocks": [list(b) for b in diagram.y.blocks],
        "yprime_blocks": [list(b) for b in diagram.yprime.blocks],
        "verified": diagram.verified,
        "p_tilde": _matrix_json(diagram.p_tilde),
        "veronese_generators": list(diagram.veronese_generators),
        "saturation_ok": diagram.saturation_ok,
    }


def _predicates_json(adjusted: TrinomialVariety) -> dict:
    result = predicates(adjusted)
    return {
        "free_abelian": result.free_abelian,
        "finite": result.finite,
        "cyclic": group_json(result.cyclic) if result.cyclic else None,
        "half_factorial": result.half_factorial,
    }


def _isolated_json(adjusted: TrinomialVariety) -> dict:
    report = isolated_singularity_report(adjusted)
    return {"isolated": report.isolated, "case": report.case.value}


def _type1_json(spec: VarietySpec) -> dict:
    adjusted = adjust_type1(spec.to_variety())
    group = class_group_type1(adjusted)
    lift = lift_to_type2(adjusted)
    lift_report = class_group_report(adjust(lift)[0], GroupMethod.FORMULA)
    return {
        "adjusted": {
            "blocks": [list(b) for b in adjusted.blocks],
            "m": adjusted.m,
            "degenerate": adjusted.is_degenerate,
        },
        "class_group": group_json(group),
        "lift": {
            "blocks": [list(b) for b in lift.blocks],
            "m": lift.m,
            "class_group": group_json(lift_report.group),
        },
    }


def _require_kind(spec: VarietySpec, kind: str) -> None:
    if spec.kind != kind:
        raise SpecError(f"this subcommand needs kind '{kind}', got '{spec.kind}'")


def _run_single(command: str, spec: VarietySpec, method: GroupMethod) -> dict:
    """Compute the report fragment for one parsed spec; may raise."""
    out: dict = {"input": spec.echo()}

    if command == "validate":
        spec.to_variety()
        out["valid"] = True
        return out

    if command == "adjust":
        if spec.kind == "type1":
            adjusted = adjust_type1(spec.to_variety())
            out["adjusted"] = {
                "blocks": [list(b) for b in adjusted.blocks],
                "m": adjusted.m,
                "degenerate": adjusted.is_degenerate,
            }
            return out
        adjusted, record = adjust(spec.to_variety())
        out["adjusted"] = _adjusted_json(adjusted, record)
        return out

    if command == "type1-classgroup":
        _require_kind(spec, "type1")
        fragment = _type1_json(spec)
        if not fragment["class_group"]["finitely_generated"]:
            raise NotRationalError(
                "class group is not finitely generated: variety is not rational"
            )
        out.update(fragment)
        return out

    _require_kind(spec, "trinomial")
    adjusted, record = adjust(spec.to_variety())

    if command == "invariants":
        out["adjusted"] = _adjusted_json(adjusted, record)
        out["invariants"] = _invariants_json(adjusted)
        return out

    if command == "classgroup":
        out["class_group"] = _class_group_json(adjusted, method)
        if not out["class_group"]["group"]["finitely_generated"]:
            raise NotRationalError(
                "class group is not finitely generated: variety is not rational"
            )
        return out

    if command == "coxring":
        if not rationality_class(adjusted).is_rational:
            raise NotRationalError("the total coordinate space needs a rational variety")
        cox = total_coordinate_space(adjusted)
        tcs_adjusted, tcs_record = adjust(cox.tcs)
        out["coxring"] = {
            "c": list(cox.c),
            "p1": _matrix_json(cox.p1),
            "tcs_blocks": [list(b) for b in cox.tcs.blocks],
            "n_prime": cox.n_prime,
            "r_prime": cox.r_prime,
            "tcs_adjusted": _adjusted_json(tcs_adjusted, tcs_record),
        }
        return out

    if command == "iterate":
        out["chain"] = _chain_json(iterate_cox_rings(adjusted))
        return out

    if command == "duval":
        out["duval"] = _duval_json(duval_diagram(adjusted))
        return out

    if command == "report":
        out["adjusted"] = _adjusted_json(adjusted, record)
        out["invariants"] = _invariants_json(adjusted)
        out["class_group"] = _class_group_json(adjusted, method)
        kind = rationality_class(adjusted)
        out["predicates"] = _predicates_json(adjusted) if kind.is_rational else None
        out["isolated_singularity"] = (
            _isolated_json(adjusted) if adjusted.m == 0 else None
        )
        triple = is_hyperplatonic(adjusted)
        out["hyperplatonic"] = _triple_json(triple)
        if kind.is_rational:
            try:
                out["chain"] = _chain_json(iterate_cox_rings(adjusted))
            except IterationNotAdmittedError as exc:
                out["chain"] = {"admitted": False, "reason": str(exc)}
        else:
            out["chain"] = None
        out["duval"] = _duval_json(duval_diagram(adjusted)) if triple else None
        return out

    raise SpecError(f"unknown subcommand {command!r}")


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, (SpecError, InvalidVarietyError, OSError)):
        return EXIT_INVALID_INPUT
    if isinstance(exc, (NotRationalError, FactorialInputError)):
        return EXIT_NOT_FINITELY_GENERATED
    if isinstance(exc, (IterationNotAdmittedError, NotHyperplatonicError)):
        return EXIT_NOT_ADMITTED
    if isinstance(exc, (OracleMismatchError, NotAdjustedError)):
        return EXIT_INTERNAL_MISMATCH
    return EXIT_INTERNAL_MISMATCH


def _render_text(data, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(data, dict):
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar_text(value)}")
    elif isinstance(data, list):
        for value in data:
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}-")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(value)}")
    else:
        lines.append(f"{pad}{_scalar_text(data)}")
    return lines


def _scalar_text(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict):
        return "{}"
    if isinstance(value, list):
        return "[]"
    return str(value)


def _collect_paths(arguments: list[str]) -> list[Path]:
    paths: list[Path] = []
    for argument in arguments:
        path = Path(argument)
        if path.is_dir():
            paths.extend(sorted(path.glob("*.json")))
        else:
            paths.append(path)
    return paths


def _emit(report: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        stream.write("\n".join(_render_text(report)) + "\n")


def _run_selftest(fmt: str, stream) -> int:
    results = run_selftest()
    failures = 0
    for result in results:
        if fmt == "json":
            stream.write(
                json.dumps(
                    {"case": result.name, "ok": result.ok, "detail": result.detail},
                    sort_keys=True,
                )
                + "\n"
            )
        else:
            status = "ok  " if result.ok else "FAIL"
            stream.write(f"{status} {result.name}: {result.detail}\n")
        failures += 0 if result.ok else 1
    stream.write(f"selftest: {len(results) - failures}/{len(results)} passed\n")
    return EXIT_OK if failures == 0 else EXIT_INTERNAL_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tricl",
        description="Exact divisor class groups and Cox ring iteration for trinomial varieties.",
    )
    parser.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="output format (identical data either way)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    file_commands = (
        ("validate", "check a variety description"),
        ("adjust", "bring a variety into adjusted form"),
        ("invariants", "block gcds, component counts, dimension, rationality"),
        ("classgroup", "divisor class group"),
        ("coxring", "total coordinate space data"),
        ("iterate", "iterate total coordinate spaces to a factorial variety"),
        ("duval", "surface correspondence of a hyperplatonic variety"),
        ("type1-classgroup", "class group of a Type 1 variety, with its lift"),
        ("report", "everything applicable to the input"),
    )
    for name, help_text in file_commands:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("paths", nargs="+", metavar="PATH", help="JSON files or directories")
        sub.add_argument(
            "--format", dest="format_after", choices=("text", "json"), default=None,
            help=argparse.SUPPRESS,
        )
        if name in ("classgroup", "report"):
            sub.add_argument(
                "--method",
                choices=("formula", "snf", "both"),
                default="both",
                help="group computation route (default: both, cross-checked)",
            )

    selftest = subparsers.add_parser("selftest", help="run the golden example corpus")
    selftest.add_argument(
        "--format", dest="format_after", choices=("text", "json"), default=None,
        help=argparse.SUPPRESS,
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    stream = sys.stdout
    fmt = args.format_after or args.format

    if args.command == "selftest":
        return _run_selftest(fmt, stream)

    method = GroupMethod(getattr(args, "method", "both"))
    paths = _collect_paths(args.paths)
    if not paths:
        sys.stderr.write("no input files found\n")
        return EXIT_INVALID_INPUT

    worst = EXIT_OK
    ok_count = 0
    for path in paths:
        try:
            spec = parse_spec(path.read_text(encoding="utf-8"))
            report = _run_single(args.command, spec, method)
            report["file"] = str(path)
            _emit(report, fmt, stream)
            ok_count += 1
        except Exception as exc:  # noqa: BLE001 - per-file isolation
            code = _exit_code_for(exc)
            worst = max(worst, code)
            failure = {
                "file": str(path),
                "error": str(exc),
                "error_type": type(exc).__name__,
                "exit_code": code,
            }
            _emit(failure, fmt, sys.stderr)
    if len(paths) > 1:
        summary = f"{ok_count}/{len(paths)} inputs processed"
        (stream if fmt == "text" else sys.stderr).write(summary + "\n")
    return worst


if __name__ == "__main__":
    sys.exit(main())
