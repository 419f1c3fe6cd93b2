"""Command-line front end: one subcommand per analysis, JSON or DOT out.

Reports are canonical JSON (sorted keys, fixed layout), so identical
inputs give byte-identical output.  Exit code 0 means every executed
check passed, 1 means some diagnosis failed, 2 means the input itself
was unusable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from pathlib import Path

from .cohomology import GroupNotInCatalog
from .comparison import (
    ComparisonError,
    central_loc_pullback,
    central_localization,
    comp_map,
    divisor_constraint,
    homeo_onto_image,
    is_ample,
    table_from_obj,
    transfer_periods,
)
from .datasets import UnknownDataset, load_figure_dataset, load_figure_record
from .diagnostics import Diagnosis
from .graded import (
    GradedError,
    PrimePattern,
    enumerate_patterns,
    local_period,
    ring_from_obj,
    spech_to_obj,
    validate_presentation,
)
from .groups import (
    FiniteGroup,
    GroupError,
    cyclic,
    dihedral,
    elementary_abelian,
    group_from_obj,
    quaternion,
    symmetric,
)
from .multigraded import RingShapeError, SizeBound
from .spaces import (
    ModelError,
    dumps_canonical,
    model_from_obj,
    model_to_dot,
    model_to_obj,
)
from .spectra import (
    TAG_COMPUTED,
    artin_tower,
    dperm_period_map,
    stmod_discrepancies,
    stmod_period_map,
)
from .tworing import (
    BadShapes,
    NotSubmonoid,
    ShapeMismatch,
    agreement,
    homogeneous_ideals,
    ideal_name_two,
    localize,
    mult_closure_two,
    spc,
    validate_tightening,
    validate_two_ring,
)
from .tworing_catalog import (
    TIGHTENING_NAMES,
    TWO_RING_NAMES,
    build_tightening,
    load_two_ring,
    two_ring_from_obj,
    two_ring_to_obj,
)


class InputError(Exception):
    pass


_MODULE_ERRORS = (
    GradedError,
    ModelError,
    GroupError,
    GroupNotInCatalog,
    RingShapeError,
    SizeBound,
    BadShapes,
    ShapeMismatch,
    NotSubmonoid,
    ComparisonError,
    UnknownDataset,
    ValueError,
    KeyError,
)


# -- input plumbing ----------------------------------------------------

def _read_source(spec: str) -> tuple[str, str]:
    """Text and sha256 of a file path, or of stdin for '-'."""
    if spec == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(spec).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {spec}: {exc}") from exc
    return text, hashlib.sha256(text.encode("utf-8")).hexdigest()


def _load_json_source(spec: str) -> tuple[object, str]:
    text, digest = _read_source(spec)
    try:
        return json.loads(text), digest
    except ValueError as exc:
        raise InputError(f"{spec}: not valid JSON: {exc}") from exc


def _digest_of(obj) -> str:
    return hashlib.sha256(dumps_canonical(obj).encode("utf-8")).hexdigest()


def _jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=str)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


def _diag_obj(diag: Diagnosis) -> dict:
    out: dict = {"ok": diag.ok}
    if not diag.ok:
        out["reason"] = diag.reason
        out["detail"] = _jsonable(list(diag.detail))
    return out


def _emit(args, inputs: dict, result: dict) -> None:
    report = {"command": args.echo, "inputs": inputs, "result": result}
    sys.stdout.write(dumps_canonical(report))


def _stem(spec: str, fallback: str) -> str:
    return fallback if spec == "-" else Path(spec).stem


# -- ring --------------------------------------------------------------

def _parse_witnesses(obj):
    if not isinstance(obj, dict) or "witnesses" not in obj:
        return None
    out = []
    try:
        for names, cert in obj["witnesses"]:
            out.append((PrimePattern.of(*[str(n) for n in names]), str(cert)))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed witnesses: {exc}") from exc
    return out


def _cmd_ring(args) -> int:
    obj, digest = _load_json_source(args.input)
    inputs = {args.input: digest}
    ring = ring_from_obj(obj)
    if args.action == "validate":
        if args.format == "dot":
            raise InputError("validate has no dot form")
        diag = validate_presentation(ring)
        _emit(args, inputs, {"diagnosis": _diag_obj(diag)})
        return 0 if diag else 1
    model = enumerate_patterns(ring, _parse_witnesses(obj))
    name = _stem(args.input, "ring")
    if args.action == "patterns":
        if args.format == "dot":
            sys.stdout.write(model_to_dot(model.space, None, name=name))
            return 0
        _emit(args, inputs, {"model": spech_to_obj(model)})
        return 0
    periods = {q: local_period(ring, model.patterns[q]) for q in model.space.points}
    if args.format == "dot":
        sys.stdout.write(model_to_dot(model.space, periods, name=name))
        return 0
    result = {
        "model": spech_to_obj(model, periods),
        "tags": {q: TAG_COMPUTED for q in model.space.points},
    }
    _emit(args, inputs, result)
    return 0


# -- group -------------------------------------------------------------

_NAME_FORMS = (
    (re.compile(r"C(\d+)\^(\d+)\Z"), lambda m: elementary_abelian(int(m[1]), int(m[2]))),
    (re.compile(r"C(\d+)\Z"), lambda m: cyclic(int(m[1]))),
    (re.compile(r"D(\d+)\Z"), lambda m: dihedral(int(m[1]))),
    (re.compile(r"Q(\d+)\Z"), lambda m: quaternion(int(m[1]))),
    (re.compile(r"S(\d+)\Z"), lambda m: symmetric(int(m[1]))),
)


def _resolve_group(text: str, inputs: dict):
    """A constructible group, or the bare name for catalog lookup."""
    if text == "-" or text.endswith(".json"):
        obj, digest = _load_json_source(text)
        inputs[text] = digest
        return group_from_obj(obj)
    if text == "1":
        return cyclic(1)
    for pattern, build in _NAME_FORMS:
        m = pattern.match(text)
        if m:
            return build(m)
    return text


def _cmd_group(args) -> int:
    inputs: dict = {}
    G = _resolve_group(args.group, inputs)
    if args.action == "dperm":
        if not isinstance(G, FiniteGroup):
            raise InputError(f"dperm needs a constructible group, not the name {G!r}")
        asm = dperm_period_map(G, args.prime)
        name = f"dperm_{asm.group_name}_{args.prime}"
        if args.format == "dot":
            sys.stdout.write(model_to_dot(asm.space, asm.periods, name=name))
            return 0
        result = {
            "group": asm.group_name,
            "prime": args.prime,
            "model": model_to_obj(asm.space, asm.periods),
            "tags": dict(asm.tags),
            "strata": asm.stratum_points(),
            "closed_points": list(asm.closed_points),
        }
        _emit(args, inputs, result)
        return 0
    model, per = stmod_period_map(G, args.prime)
    name = f"stmod_{args.group}_{args.prime}"
    periods = {q: per[q] for q in model.space.points}
    if args.format == "dot":
        sys.stdout.write(model_to_dot(model.space, periods, name=name))
        return 0
    result = {
        "model": spech_to_obj(model, periods),
        "tags": {q: TAG_COMPUTED for q in model.space.points},
    }
    clashes = stmod_discrepancies(G, args.prime)
    if clashes:
        result["discrepancies"] = {
            q: {"derived": got, "stated": want}
            for q, (got, want) in clashes.items()
        }
    _emit(args, inputs, result)
    return 0


# -- tower -------------------------------------------------------------

def _cmd_tower(args) -> int:
    rep = artin_tower(args.prime, args.depth)
    name = f"tower_{args.prime}_{args.depth}"
    if args.format == "dot":
        sys.stdout.write(model_to_dot(rep.chain, rep.chain_periods, name=name))
        return 0
    result = {
        "prime": rep.prime,
        "height": rep.height,
        "chain": model_to_obj(rep.chain, rep.chain_periods),
        "tags": {q: TAG_COMPUTED for q in rep.chain.points},
        "strata": [
            {
                "index": s.index,
                "weyl": list(s.weyl_names),
                "proj_sequence": list(s.proj_sequence),
                "proj_eventual": s.proj_eventual,
                "closed_sequence": list(s.closed_sequence),
            }
            for s in rep.strata
        ],
    }
    _emit(args, {}, result)
    return 0


# -- tworing -----------------------------------------------------------

def _load_two_ring_arg(spec: str, inputs: dict):
    if spec != "-" and spec in TWO_RING_NAMES and not Path(spec).exists():
        R2 = load_two_ring(spec)
        inputs[spec] = _digest_of(two_ring_to_obj(R2))
        return R2
    obj, digest = _load_json_source(spec)
    inputs[spec] = digest
    return two_ring_from_obj(obj)


def _parse_system(spec: "str | None", inputs: dict) -> tuple:
    if spec is None:
        return ()
    obj, digest = _load_json_source(spec)
    inputs[spec] = digest
    try:
        return tuple(
            (row["src"], row["dst"], tuple(int(x) for x in row["vec"]))
            for row in obj["generators"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed system: {exc}") from exc


def _cmd_tworing(args) -> int:
    inputs: dict = {}
    if args.action == "agree":
        if args.input not in TIGHTENING_NAMES:
            raise InputError(
                "agree needs a catalog tightening name, one of: "
                + ", ".join(TIGHTENING_NAMES)
            )
        T, R2 = build_tightening(args.input)
        tdiag = validate_tightening(T, R2)
        adiag = agreement(T, R2)
        _emit(
            args,
            inputs,
            {"tightening": _diag_obj(tdiag), "agreement": _diag_obj(adiag)},
        )
        return 0 if tdiag and adiag else 1
    R2 = _load_two_ring_arg(args.input, inputs)
    vdiag = validate_two_ring(R2)
    if not vdiag:
        _emit(args, inputs, {"diagnosis": _diag_obj(vdiag)})
        return 1
    if args.action == "ideals":
        if args.format == "dot":
            raise InputError("ideals has no dot form")
        lat = homogeneous_ideals(R2)
        result = {
            "count": len(lat),
            "ideals": sorted(ideal_name_two(R2, ideal) for ideal in lat),
            "maximal_proper": sorted(
                ideal_name_two(R2, ideal) for ideal in lat.maximal_proper()
            ),
        }
        _emit(args, inputs, result)
        return 0
    if args.action == "spc":
        model = spc(R2)
        if args.format == "dot":
            name = f"spc_{_stem(args.input, R2.name or 'tworing')}"
            sys.stdout.write(model_to_dot(model, None, name=name))
            return 0
        _emit(args, inputs, {"model": model_to_obj(model)})
        return 0
    if args.format == "dot":
        raise InputError("localize has no dot form")
    gens = _parse_system(args.system, inputs)
    system = mult_closure_two(R2, gens)
    loc = localize(R2, system)
    diag = validate_two_ring(loc)
    result = {
        "system_size": len(system),
        "localized": two_ring_to_obj(loc),
        "diagnosis": _diag_obj(diag),
    }
    _emit(args, inputs, result)
    return 0 if diag else 1


# -- compare -----------------------------------------------------------

def _cmd_compare(args) -> int:
    sobj, sdig = _load_json_source(args.space)
    robj, rdig = _load_json_source(args.ring)
    tobj, tdig = _load_json_source(args.sections)
    inputs = {args.space: sdig, args.ring: rdig, args.sections: tdig}
    space, per = model_from_obj(sobj)
    ring = ring_from_obj(robj)
    table = table_from_obj(tobj, space)
    comp = comp_map(table)
    embedding = homeo_onto_image(table)
    result: dict = {
        "comparison": {p: sorted(comp[p].contains) for p in table.space.points},
        "ample": is_ample(table),
        "embedding": embedding,
    }
    diagnoses = []
    if per is not None:
        ddiag = divisor_constraint(table, ring, per)
        result["divisor"] = _diag_obj(ddiag)
        diagnoses.append(ddiag)
        if embedding:
            tdiag = transfer_periods(table, ring, per)
            result["transfer"] = _diag_obj(tdiag)
            diagnoses.append(tdiag)
    if args.invert is not None:
        names = sorted({s for s in args.invert.split(",") if s})
        region, sub = central_localization(table, names)
        pdiag = central_loc_pullback(table, names)
        subcomp = comp_map(sub)
        result["inverted"] = {
            "sections": names,
            "region": sorted(region),
            "pullback": _diag_obj(pdiag),
            "comparison": {
                p: sorted(subcomp[p].contains) for p in sub.space.points
            },
        }
        diagnoses.append(pdiag)
    _emit(args, inputs, result)
    return 1 if any(not d for d in diagnoses) else 0


# -- figure ------------------------------------------------------------

def _cmd_figure(args) -> int:
    rec = load_figure_record(args.name)
    model, per = load_figure_dataset(args.name)
    if args.format == "json":
        _emit(args, {args.name: _digest_of(rec)}, {"record": rec})
        return 0
    sys.stdout.write(model_to_dot(model, per, name=args.name))
    return 0


# -- parser ------------------------------------------------------------

_RING_HINT = """ring JSON:
  {"char": p, "constraint": "koszul"|"trivial",
   "generators": [{"name": str, "degree": int,
                   "invertible": bool?, "nilpotent": bool?}],
   "relations": [[{"coeff": int, "monomial": {name: exponent}}]],
   "witnesses": [[[generator names], "enumerated"|"witness"|"paper"]]?}
witnesses are required for non-monomial relations."""

_GROUP_HINT = """--group accepts 1, Cn, Cp^r, Dn, Qn, Sn, a catalog name,
or a JSON file {"degree": int, "generators": [[cycle, ...], ...]}."""

_TWORING_HINT = """--input accepts a shipped name or a two-ring JSON file;
--system JSON: {"generators": [{"src": obj, "dst": obj, "vec": [int]}]}.
agree takes a shipped tightening name instead of a file."""

_COMPARE_HINT = """--space: model JSON {"points", "specializes", "periods"?};
--ring: ring JSON (see ring --help);
--sections: {"format": 1, "bundles": {label: degree},
             "sections": [{"name", "bundle", "degree", "locus": [points]}],
             "products": [[s, t, product]]?}"""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttperiods",
        description="Desk-scale period computations over finite spectral models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    raw = argparse.RawDescriptionHelpFormatter

    ring = sub.add_parser(
        "ring", help="validate a graded presentation, list patterns or periods",
        epilog=_RING_HINT, formatter_class=raw,
    )
    ring.add_argument("action", choices=["validate", "patterns", "periods"])
    ring.add_argument("--input", required=True, help="ring JSON file, or - for stdin")
    ring.add_argument("--format", choices=["json", "dot"], default="json")
    ring.set_defaults(handler=_cmd_ring)

    group = sub.add_parser(
        "group", help="derived permutation-module or stable-module periods",
        epilog=_GROUP_HINT, formatter_class=raw,
    )
    group.add_argument("action", choices=["dperm", "stmod"])
    group.add_argument("--group", required=True)
    group.add_argument("--prime", type=int, required=True)
    group.add_argument("--format", choices=["json", "dot"], default="json")
    group.set_defaults(handler=_cmd_group)

    tower = sub.add_parser("tower", help="cyclic tower of period chains")
    tower.add_argument("--prime", type=int, required=True)
    tower.add_argument("--depth", type=int, required=True, help="0 to 6")
    tower.add_argument("--format", choices=["json", "dot"], default="json")
    tower.set_defaults(handler=_cmd_tower)

    tworing = sub.add_parser(
        "tworing", help="tabulated 2-ring ideals, spectrum, agreement, localization",
        epilog=_TWORING_HINT, formatter_class=raw,
    )
    tworing.add_argument("action", choices=["ideals", "spc", "agree", "localize"])
    tworing.add_argument("--input", required=True)
    tworing.add_argument("--system", default=None, help="system generators JSON")
    tworing.add_argument("--format", choices=["json", "dot"], default="json")
    tworing.set_defaults(handler=_cmd_tworing)

    compare = sub.add_parser(
        "compare", help="comparison map from a section table",
        epilog=_COMPARE_HINT, formatter_class=raw,
    )
    compare.add_argument("--space", required=True)
    compare.add_argument("--ring", required=True)
    compare.add_argument("--sections", required=True)
    compare.add_argument("--invert", default=None, help="comma-separated section names")
    compare.set_defaults(handler=_cmd_compare)

    figure = sub.add_parser("figure", help="emit a shipped dataset figure")
    figure.add_argument("name")
    figure.add_argument("--format", choices=["dot", "json"], default="dot")
    figure.set_defaults(handler=_cmd_figure)

    return parser


def main(argv=None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(raw)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    args.echo = ["ttperiods", *raw]
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except _MODULE_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
