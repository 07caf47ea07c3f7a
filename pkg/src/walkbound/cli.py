"""Batch front end.

    walkbound {analyze,decide,validate,simulate} --config PATH [--out PATH] [--seed N] [--pretty]

Configs and reports are UTF-8 JSON. Rationals travel as strings ``"a/b"``.
Exit codes: 0 success, 2 config error, 3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

import jsonschema
import numpy as np

from . import __version__
from .errors import InputError, ResourceLimitError, UnsupportedOracleError
from .groups import GroupSpec, QuotientStructure, Subgroup
from .rokhlin import (
    SYMBOLS,
    Angle,
    RokhlinSystem,
    TargetAction,
    decide_ergodic,
    decide_exact,
    is_weakly_mixing_quotient,
    meilijson_check,
    reducibility_dichotomy,
)
from .spectral import (
    character_spectrum,
    character_vector,
    law_vector,
    mixing_profile,
    pushforward_law,
    simulate,
    transfer_iterate,
    tv_distance,
    walk_spectrum,
)
from .walks import JumpMeasure, WalkAnalysis, analyze

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DISAGREE = 3

RATIONAL = r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"

_angle = {
    "type": "object",
    "properties": {
        "rational": {"type": "string", "pattern": RATIONAL},
        "symbols": {
            "type": "object",
            "patternProperties": {"^[A-Za-z_][A-Za-z0-9_]*$": {"type": "string", "pattern": RATIONAL}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "walkbound system config",
    "type": "object",
    "required": ["group", "measure"],
    "properties": {
        "group": {
            "type": "object",
            "required": ["free_rank"],
            "properties": {
                "free_rank": {"type": "integer", "minimum": 0},
                "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            },
            "additionalProperties": False,
        },
        "measure": {
            "type": "object",
            "required": ["support", "weights"],
            "properties": {
                "support": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "array", "items": {"type": "integer"}},
                },
                "weights": {"type": "array", "items": {"type": "string", "pattern": RATIONAL}},
            },
            "additionalProperties": False,
        },
        "action": {
            "type": "object",
            "properties": {
                "torus": {"type": "array", "items": {"type": "array", "items": _angle}},
                "finite": {
                    "type": "object",
                    "required": ["torsion", "images"],
                    "properties": {
                        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                        "images": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "params": {
            "type": "object",
            "properties": {
                "aperiodicity_bound": {"type": "integer", "minimum": 1},
                "n_max": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
                "n_paths": {"type": "integer", "minimum": 1},
                "n_steps": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

DEFAULTS = {"aperiodicity_bound": 64, "n_max": 200, "seed": 0, "n_paths": 100_000, "n_steps": 20}


class ConfigError(Exception):
    pass


def _path(err: jsonschema.ValidationError) -> str:
    out = ""
    for part in err.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<root>"


def load_config(text: str, source: str = "<config>") -> Dict[str, Any]:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    errors = sorted(jsonschema.Draft202012Validator(CONFIG_SCHEMA).iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError("\n".join(f"{source}: {_path(e)}: {e.message}" for e in errors))
    return cfg


def build_measure(cfg: Dict[str, Any]) -> JumpMeasure:
    g = cfg["group"]
    try:
        group = GroupSpec(g["free_rank"], tuple(g.get("torsion", [])))
    except InputError as e:
        raise ConfigError(f"group: {e}") from None
    m = cfg["measure"]
    if len(m["support"]) != len(m["weights"]):
        raise ConfigError(
            f"measure: {len(m['support'])} support points but {len(m['weights'])} weights"
        )
    try:
        weights = [Fraction(w) for w in m["weights"]]
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"measure.weights: {e}") from None
    total = sum(weights)
    if total != 1:
        raise ConfigError(f"measure.weights: weights sum to {total}, not 1")
    for i, pt in enumerate(m["support"]):
        if len(pt) != group.dim:
            raise ConfigError(f"measure.support[{i}]: {len(pt)} coordinates, group {group} needs {group.dim}")
    try:
        return JumpMeasure.from_points(group, [tuple(pt) for pt in m["support"]], weights)
    except InputError as e:
        raise ConfigError(f"measure: {e}") from None


def build_action(cfg: Dict[str, Any], group: GroupSpec) -> TargetAction:
    a = cfg["action"]
    torus = a.get("torus", [])
    if torus and len(torus) != group.dim:
        raise ConfigError(f"action.torus: {len(torus)} generator rows, acting group has {group.dim}")
    k = len(torus[0]) if torus else 0
    fin = a.get("finite", {"torsion": [], "images": [[] for _ in range(group.dim)]})
    try:
        F = GroupSpec(0, tuple(fin["torsion"]))
    except InputError as e:
        raise ConfigError(f"action.finite: {e}") from None
    images = fin["images"]
    if len(images) != group.dim:
        raise ConfigError(f"action.finite.images: {len(images)} images, acting group has {group.dim} generators")
    rows = []
    for i in range(group.dim):
        angles = []
        for j, desc in enumerate(torus[i] if torus else []):
            names = list(desc.get("symbols", {}))
            SYMBOLS.declare(*names)
            try:
                angles.append(
                    Angle.of(
                        Fraction(desc.get("rational", "0")),
                        {n: Fraction(c) for n, c in desc.get("symbols", {}).items()},
                    )
                )
            except (ValueError, ZeroDivisionError, InputError) as e:
                raise ConfigError(f"action.torus[{i}][{j}]: {e}") from None
        if len(angles) != k:
            raise ConfigError(f"action.torus[{i}]: {len(angles)} angles, expected {k}")
        if len(images[i]) != F.dim:
            raise ConfigError(f"action.finite.images[{i}]: {len(images[i])} coordinates, expected {F.dim}")
        rows.append((tuple(angles), F.element(tuple(images[i]))))
    try:
        return TargetAction(group, k, F, tuple(rows))
    except InputError as e:
        raise ConfigError(f"action: {e}") from None


def params_of(cfg: Dict[str, Any]) -> Dict[str, int]:
    out = dict(DEFAULTS)
    out.update(cfg.get("params", {}))
    return out


def _subgroup_json(h: Subgroup) -> Dict[str, Any]:
    return {
        "generators": [list(g.coords) for g in h.generators()],
        "finite": h.is_finite,
        "order": h.order,
    }


def _quotient_json(q: QuotientStructure) -> Dict[str, Any]:
    return {
        "label": str(q),
        "free_rank": q.free_rank,
        "invariant_factors": list(q.invariant_factors),
        "order": q.order,
    }


def _analysis_json(wa: WalkAnalysis) -> Dict[str, Any]:
    return {
        "h_poisson": _subgroup_json(wa.h_poisson),
        "h_tail": _subgroup_json(wa.h_tail),
        "poisson_boundary": _quotient_json(wa.poisson_boundary),
        "tail_boundary": _quotient_json(wa.tail_boundary),
        "adapted": wa.adapted,
        "steady": wa.steady,
        "aperiodic": "unknown" if wa.aperiodic is None else wa.aperiodic,
        "aperiodic_witness": wa.aperiodic_witness,
        "notes": ["aperiodic => steady (countable groups); recorded only, not used as a decision rule"],
    }


def cmd_analyze(cfg: Dict[str, Any]) -> Dict[str, Any]:
    p = build_measure(cfg)
    wa = analyze(p, params_of(cfg)["aperiodicity_bound"])
    return {"analysis": _analysis_json(wa)}


def _decisions(cfg: Dict[str, Any]):
    if "action" not in cfg:
        raise ConfigError("action: this command needs an action")
    p = build_measure(cfg)
    action = build_action(cfg, p.group)
    sys_ = RokhlinSystem(p, action)
    wa = analyze(p, params_of(cfg)["aperiodicity_bound"])
    dich = reducibility_dichotomy(p)
    dich_json: Dict[str, Any] = {"branch": dich.branch.value}
    if dich.t is not None:
        dich_json.update(t=list(dich.t.coords), K=_subgroup_json(dich.K), note=dich.note)
    meil = None
    if p.group == GroupSpec(1):
        r = meilijson_check(p, action)
        meil = {"d": r.d, "exact": r.exact, "s_d_ergodic": r.s_d_ergodic, "degenerate": r.degenerate}
    decisions = {
        "ergodic": decide_ergodic(sys_),
        "exact": decide_exact(sys_),
        "steady": wa.steady,
        "adapted": wa.adapted,
        "aperiodic": "unknown" if wa.aperiodic is None else wa.aperiodic,
        "dichotomy": dich_json,
        "meilijson": meil,
        "poisson_weakly_mixing": is_weakly_mixing_quotient(wa.poisson_boundary),
        "irrational_symbols": sorted(
            {name for angles, _ in action.images for a in angles for name, _ in a.symbols}
        ),
    }
    return sys_, wa, decisions


def cmd_decide(cfg: Dict[str, Any]) -> Dict[str, Any]:
    _, wa, decisions = _decisions(cfg)
    return {"analysis": _analysis_json(wa), "decisions": decisions}


def _spectral_json(spec) -> Dict[str, Any]:
    return {
        "status": "ok",
        "gap": spec.gap,
        "contraction_rate": spec.contraction_rate,
        "unit_characters": [list(spec.eigenvalues[i].character) for i in spec.unit_characters],
        "fixed_characters": [list(spec.eigenvalues[i].character) for i in spec.fixed_characters],
    }


def cmd_validate(cfg: Dict[str, Any]) -> Dict[str, Any]:
    sys_, wa, decisions = _decisions(cfg)
    params = params_of(cfg)
    n = params["n_max"]
    agreement: Dict[str, bool] = {}
    validation: Dict[str, Any] = {"oracle_agreement": agreement}
    report = {"analysis": _analysis_json(wa), "decisions": decisions, "validation": validation}

    if decisions["meilijson"] is not None and not decisions["meilijson"]["degenerate"]:
        agreement["meilijson"] = decisions["meilijson"]["exact"] == decisions["meilijson"]["s_d_ergodic"]

    if not sys_.action.is_finite_target:
        report["spectral"] = {"status": "skipped", "reason": "Y has a torus factor"}
    else:
        spec = character_spectrum(sys_)
        report["spectral"] = _spectral_json(spec)
        agreement["spectral_exact"] = (not spec.unit_characters) == decisions["exact"]
        agreement["spectral_ergodic"] = (not spec.fixed_characters) == decisions["ergodic"]
        agreement["unit_flags_numeric"] = all(
            abs(abs(e.value) - 1) < 1e-9 if e.unit_modulus else abs(e.value) <= 1 + 1e-12
            for e in spec.eigenvalues
        )
        size = sys_.action.finite.order
        rng = np.random.default_rng(params["seed"])
        H = rng.standard_normal((size, 10))
        out = transfer_iterate(sys_, H, n)
        resid = float(np.max(np.abs(out - H.mean(axis=0))))
        bound = (size - 1) * spec.contraction_rate**n * float(np.max(np.abs(H))) + 1e-9
        validation["transfer_residual"] = resid
        if decisions["exact"]:
            agreement["transfer_mixing"] = resid <= bound
        else:
            ev = spec.eigenvalues[spec.unit_characters[0]]
            psi = character_vector(sys_.action.finite, ev.character)
            stay = float(np.min(np.abs(transfer_iterate(sys_, psi, n))))
            validation["nonconvergent_character"] = list(ev.character)
            agreement["transfer_mixing"] = stay > 1 - 1e-9

    if sys_.p.group.is_finite:
        prof = mixing_profile(sys_.p, n)
        rate = walk_spectrum(sys_.p).contraction_rate
        h = wa.h_tail.order
        validation["tv_profile_tail"] = prof[-5:]
        agreement["mixing_vs_spectrum"] = prof[-1] <= 0.5 * math.sqrt(h - 1) * rate**n + 1e-15
    return report


def cmd_simulate(cfg: Dict[str, Any]) -> Dict[str, Any]:
    if "action" not in cfg:
        raise ConfigError("action: simulate needs an action")
    p = build_measure(cfg)
    action = build_action(cfg, p.group)
    if not action.is_finite_target:
        raise ConfigError("action: simulate needs a finite Y (no torus)")
    sys_ = RokhlinSystem(p, action)
    params = params_of(cfg)
    sample = simulate(sys_, params["seed"], params["n_steps"], params["n_paths"])
    size = action.finite.order
    exact = law_vector(pushforward_law(sys_, params["n_steps"]), size)
    tv = tv_distance(sample.frequencies(), exact)
    bound = 3 * math.sqrt(size / params["n_paths"])
    return {
        "simulation": {
            "n_steps": sample.n_steps,
            "n_paths": sample.n_paths,
            "histogram": list(sample.empirical_marginal),
            "exact_law": [float(x) for x in exact],
            "tv": tv,
            "tv_bound": bound,
            "within_bound": tv <= bound,
        }
    }


COMMANDS = {
    "analyze": cmd_analyze,
    "decide": cmd_decide,
    "validate": cmd_validate,
    "simulate": cmd_simulate,
}


def run(command: str, cfg: Dict[str, Any]) -> Dict[str, Any]:
    """Run a subcommand on a parsed config and return the full report."""
    cfg = copy.deepcopy(cfg)
    body = COMMANDS[command](cfg)
    report = {
        "version": __version__,
        "command": command,
        "seed": params_of(cfg)["seed"],
        "config": cfg,
    }
    report.update(body)
    return report


def exit_code_for(report: Dict[str, Any]) -> int:
    agreement = report.get("validation", {}).get("oracle_agreement", {})
    if not all(agreement.values()):
        return EXIT_DISAGREE
    if report.get("simulation", {}).get("within_bound") is False:
        return EXIT_DISAGREE
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON system description")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--seed", type=int, help="override params.seed")
        sp.add_argument("--pretty", action="store_true", help="indent the JSON report")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"walkbound: cannot read config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(text, args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed must be in [0, 2**64)")
            cfg.setdefault("params", {})["seed"] = args.seed
        report = run(args.command, cfg)
    except ConfigError as e:
        print(f"walkbound: config error:\n{e}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, ResourceLimitError, UnsupportedOracleError) as e:
        print(f"walkbound: {e}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(report, indent=2 if args.pretty else None, sort_keys=True, ensure_ascii=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return exit_code_for(report)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
