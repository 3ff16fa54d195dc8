"""Command-line front end: ``hadvp {potential,shift,table,sweep,ratio}``.

Numbers are written in scientific notation with 6 significant digits.
Uncertainties use the bracket convention: -1.396(17)[-11] means
(-1.396 +- 0.017) x 10^-11.

Exit codes: 0 success, 2 configuration error, 3 computation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from hadvp.core import M_E, M_MU, M_P, LengthUnit, EnergyUnit, convert_energy, convert_length
from hadvp.nuclear import (
    NuclearModelError, builtin_radii, estimate_rms_radius, load_radii_csv, make_model,
)
from hadvp.polarization import LoopSpecies, ParameterSetError, builtin_params, load_params
from hadvp.potentials import (
    PotentialError, PotentialMethod, PotentialSpec, full_potential_table, make_potential,
)
from hadvp import reference_tables as ref
from hadvp.shifts import (
    LITERATURE_MUONIC_RATIO, ShiftError, ShiftMethod, ShiftRequest, ShiftResult,
    expansion_orders, muonic_vp_ratio, shift_expansion, shift_nonrel, shift_perturbative,
)
from hadvp.wavefunctions import BoundStateLabel, QuantumNumberError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

_MASSES = {"electron": M_E, "muon": M_MU}


class ConfigError(ValueError):
    pass


_CONFIG_ERRORS = (ConfigError, ParameterSetError, NuclearModelError, QuantumNumberError,
                  ShiftError, PotentialError, FileNotFoundError)


def fmt(x: float) -> str:
    return f"{x + 0.0:.5e}"  # + 0.0 turns -0.0 into 0.0


def format_bracket(value: float, uncertainty: float, digits: int = 2) -> str:
    """value(unc)[exp] with ``digits`` significant digits of uncertainty."""
    if value == 0.0 or not math.isfinite(value):
        return fmt(value)
    exp = int(math.floor(math.log10(abs(value))))
    mant = value / 10.0 ** exp
    if uncertainty <= 0.0 or not math.isfinite(uncertainty):
        return f"{mant:.5f}[{exp}]"
    u = uncertainty / 10.0 ** exp
    decimals = max(0, digits - 1 - int(math.floor(math.log10(u))))
    decimals = min(decimals, 8)
    u_last = int(round(u * 10 ** decimals))
    return f"{mant:.{decimals}f}({u_last})[{exp}]"


def _emit(rows: list[dict], columns: list[str], fmt_name: str, out) -> None:
    if fmt_name == "csv":
        w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k, "") for k in columns})
        return
    widths = [max([len(c)] + [len(str(r.get(c, ""))) for r in rows]) for c in columns]
    out.write("  ".join(c.ljust(wd) for c, wd in zip(columns, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(str(r.get(c, "")).ljust(wd) for c, wd in zip(columns, widths)).rstrip()
                  + "\n")


# --- shared option groups ------------------------------------------------

def _add_common(p):
    p.add_argument("--params", metavar="FILE", help="polarization parameter-set file "
                   "(default: built-in seven-region set)")
    p.add_argument("--alt-params", metavar="FILE",
                   help="alternate parameter set; its difference is the parameter uncertainty")
    p.add_argument("--radii", metavar="FILE",
                   help="radius CSV with columns Z,R_rms_fm,uncertainty_fm (default: built-in)")
    p.add_argument("--format", choices=("csv", "pretty"), default="csv")
    p.add_argument("--output", "-o", metavar="FILE", help="write to FILE instead of stdout")


def _add_nucleus(p, default_model="sphere"):
    p.add_argument("--Z", type=int, required=True, help="nuclear charge")
    p.add_argument("--model", choices=("point", "sphere", "fermi"), default=default_model)
    p.add_argument("--r-rms", type=float, metavar="FM",
                   help="rms charge radius in fm (default: radius table)")
    p.add_argument("--r-rms-unc", type=float, metavar="FM",
                   help="rms radius uncertainty in fm (default: radius table)")
    p.add_argument("--skin", type=float, default=2.3, metavar="FM",
                   help="Fermi 10-90%% skin thickness in fm (default 2.3)")


def _load_params(path):
    return load_params(path) if path else builtin_params()


def _radii(args):
    return load_radii_csv(args.radii) if args.radii else builtin_radii()


def _resolve_radius(Z, r_rms, r_unc, radii):
    """(r_rms, sigma, source) from flags, the table, or the estimate."""
    if r_rms is not None:
        if not r_rms > 0:
            raise ConfigError(f"--r-rms must be positive, got {r_rms}")
        return r_rms, (r_unc or 0.0), "flag"
    if Z in radii:
        e = radii[Z]
        return e.r_rms_fm, (e.uncertainty_fm if r_unc is None else r_unc), "table"
    return estimate_rms_radius(Z), (r_unc or 0.0), "estimate"


def _check_z(Z):
    if Z < 1:
        raise ConfigError(f"--Z must be positive, got {Z}")


# --- potential -----------------------------------------------------------

def cmd_potential(args, out) -> int:
    _check_z(args.Z)
    if not (args.r_min > 0 and args.r_max > 0):
        raise ConfigError("--r-min and --r-max must be positive")
    if args.r_max < args.r_min:
        raise ConfigError("--r-max must not be below --r-min")
    if args.points < 1:
        raise ConfigError("--points must be at least 1")
    params = _load_params(args.params)
    radii = _radii(args)
    if args.model == "point":
        model = make_model("point", args.Z)
    else:
        r_rms, _, _ = _resolve_radius(args.Z, args.r_rms, args.r_rms_unc, radii)
        model = make_model(args.model, args.Z, r_rms, args.skin)
    r = (np.array([args.r_min]) if args.points == 1
         else np.geomspace(args.r_min, args.r_max, args.points))
    r_nat = convert_length(r, args.r_unit, LengthUnit.GEV_INV)
    columns = [f"r_{args.r_unit}"]
    data = {}
    species = args.species or ["hadronic"]
    methods = args.method or ["closed-form-approx"]
    for sp in species:
        sp = LoopSpecies(sp)
        if sp is LoopSpecies.HADRONIC:
            for m in methods:
                m = PotentialMethod(m)
                if m is PotentialMethod.FULL and args.tabulated and args.model != "point":
                    V = full_potential_table(args.Z, params, model)
                else:
                    V = make_potential(PotentialSpec(sp, params, model, m))
                data[f"dV_{sp.value}_{m.value}"] = V(r_nat)
        else:
            if args.model != "point":
                raise ConfigError("--species electron-loop/muon-loop needs --model point")
            V = make_potential(PotentialSpec(sp, params, model))
            data[f"dV_{sp.value}"] = V(r_nat)
    columns += list(data)
    rows = []
    for i, ri in enumerate(r):
        row = {columns[0]: fmt(ri)}
        for k, v in data.items():
            row[k] = fmt(float(convert_energy(np.atleast_1d(v)[i], EnergyUnit.GEV, args.energy_unit)))
        rows.append(row)
    _emit(rows, columns, args.format, out)
    return EXIT_OK


# --- shift / table / sweep rows -----------------------------------------

# leading Z alpha term: the non-relativistic column entry for p states
_LEADING = "expansion-leading"


@dataclass(frozen=True)
class RowTask:
    """One shift evaluation; plain data so it pickles to worker processes."""

    key: tuple
    Z: int
    state: str
    method: str
    model: str
    r_rms: float | None
    r_unc: float
    skin: float
    mass: str
    params: object
    alt_params: object
    evaluation: str = "expectation"


def _compute(task: RowTask) -> ShiftResult:
    label = BoundStateLabel.parse(task.state, Z=task.Z, mass=_MASSES[task.mass])
    if task.method == _LEADING:
        v = shift_expansion(label, min(expansion_orders(label)), task.params)
        return ShiftResult(v, method=_LEADING, label=label.name)
    if task.method in (ShiftMethod.NONREL_POINT.value, ShiftMethod.REL_POINT_ANALYTIC.value,
                       ShiftMethod.REL_POINT_NUMERIC.value):
        model = make_model("point", task.Z)
    else:
        model = make_model(task.model, task.Z, task.r_rms, task.skin)
    req = ShiftRequest(label, model, task.method, task.params,
                       radius_uncertainty_fm=task.r_unc, alternate_params=task.alt_params,
                       evaluation=task.evaluation)
    return shift_perturbative(req)


def _run_task(task: RowTask):
    try:
        return task.key, _compute(task), None
    except Exception as exc:  # reported per row
        return task.key, None, f"{type(exc).__name__}: {exc}"


def _run_all(tasks, jobs):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


def _result_cells(res: ShiftResult | None, factor: float, fmt_name: str):
    if res is None:
        return {"value": "", "uncertainty": ""}
    v, u = res.value * factor, res.uncertainty * factor
    if fmt_name == "pretty":
        return {"value": format_bracket(v, u), "uncertainty": fmt(u)}
    return {"value": fmt(v), "uncertainty": fmt(u), "u_param": fmt(res.uncertainty_param * factor),
            "u_radius": fmt(res.uncertainty_radius * factor),
            "u_numeric": fmt(res.uncertainty_numeric * factor)}


def cmd_shift(args, out) -> int:
    _check_z(args.Z)
    method = ShiftMethod(args.method)
    params = _load_params(args.params)
    alt = load_params(args.alt_params) if args.alt_params else None
    point = method.value.startswith(("nonrel", "rel-point"))
    model = "point" if point else args.model
    if not point and model == "point":
        raise ConfigError(f"--method {method.value} needs --model sphere or fermi")
    r_rms, r_unc, src = (None, 0.0, "none") if point else _resolve_radius(
        args.Z, args.r_rms, args.r_rms_unc, _radii(args))
    BoundStateLabel.parse(args.state, Z=args.Z, mass=_MASSES[args.mass])  # validate early
    task = RowTask((0,), args.Z, args.state, method.value, model, r_rms, r_unc, args.skin,
                   args.mass, params, alt, args.evaluation)
    res = _compute(task)  # main() maps exceptions to exit codes
    unit = args.energy_unit
    factor = convert_energy(1.0, EnergyUnit.EV, unit)
    row = {"Z": args.Z, "state": args.state, "method": method.value, "model": model,
           "r_rms_fm": "" if r_rms is None else fmt(r_rms), "radius_source": src,
           "unit": unit, **_result_cells(res, factor, args.format)}
    if args.reduced_mass and method is ShiftMethod.NONREL_POINT:
        label = BoundStateLabel.parse(args.state, Z=args.Z, mass=_MASSES[args.mass])
        row["reduced_mass_value"] = fmt(shift_nonrel(label, params, reduced_mass_with=M_P)
                                        * factor)
    columns = list(row)
    _emit([row], columns, args.format, out)
    return EXIT_OK


def _table_tasks(which, params, alt, radii):
    tasks = []
    if which == "II":
        for Z in ref.ZS:
            e = radii[Z]
            for col in ("nonrel-point", "rel-point-analytic", "rel-fns-approx"):
                tasks.append(RowTask((Z, "1s", col), Z, "1s", col, "sphere", e.r_rms_fm,
                                     e.uncertainty_fm, 2.3, "electron", params, alt))
    elif which == "III":
        for Z in ref.ZS:
            e = radii[Z]
            for st in ref.TABLE_III_STATES:
                tasks.append(RowTask((Z, st, "rel-fns-approx"), Z, st, "rel-fns-approx", "sphere",
                                     e.r_rms_fm, e.uncertainty_fm, 2.3, "electron", params, alt))
    elif which == "IV":
        e = radii[1]
        for st in ref.TABLE_IV:
            nonrel = "nonrel-point" if st.endswith("s") else _LEADING
            for col in (nonrel, "rel-fns-full"):
                tasks.append(RowTask((1, st, col), 1, st, col, "sphere", e.r_rms_fm,
                                     e.uncertainty_fm, 2.3, "muon", params, alt))
    else:
        raise ConfigError(f"unknown table '{which}' (choose II, III or IV)")
    return tasks


def _reference(which, key):
    Z, st, col = key
    if which == "II":
        return ref.table_ii(Z, col)
    if which == "III":
        return ref.table_iii(Z, st)
    return ref.table_iv(st, "rel-fns-full" if col == "rel-fns-full" else "nonrel-point")


def cmd_table(args, out) -> int:
    which = args.which.upper()
    params = _load_params(args.params)
    alt = load_params(args.alt_params) if args.alt_params else None
    radii = _radii(args)
    tasks = _table_tasks(which, params, alt, radii)
    results = _run_all(tasks, args.jobs)
    unit = EnergyUnit.MEV if which == "IV" else EnergyUnit.EV
    factor = convert_energy(1.0, EnergyUnit.EV, unit)
    rows, failed = [], 0
    for key, res, err in results:
        Z, st, col = key
        quoted = _reference(which, key)
        row = {"table": which, "Z": Z, "state": st, "column": col, "unit": unit.value,
               "reference": quoted.text}
        if err:
            failed += 1
            print(f"hadvp table {which}: row Z={Z} {st} {col}: {err}", file=sys.stderr)
            row.update(value="", uncertainty="", rel_diff="", within="error")
        else:
            row.update(_result_cells(res, factor, args.format))
            v = res.value * factor
            diff = v / quoted.value - 1.0
            row["rel_diff"] = f"{diff:+.3e}"
            row["within"] = "yes" if abs(v - quoted.value) <= quoted.uncertainty else "no"
        rows.append(row)
    columns = ["table", "Z", "state", "column", "unit", "value", "uncertainty"]
    if args.format == "csv":
        columns += ["u_param", "u_radius", "u_numeric"]
    columns += ["reference", "rel_diff", "within"]
    _emit(rows, columns, args.format, out)
    return EXIT_COMPUTE if failed else EXIT_OK


def _parse_z_range(text):
    try:
        if text.strip() == "":
            return []
        out = []
        for part in text.split(","):
            if ":" in part or "-" in part.strip()[1:]:
                sep = ":" if ":" in part else "-"
                a, b = part.split(sep)
                out += list(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
        return out
    except ValueError:
        raise ConfigError(f"--Z-range: cannot parse '{text}' (use e.g. 1:96 or 1,14,20)") from None


def cmd_sweep(args, out) -> int:
    zs = _parse_z_range(args.z_range)
    method = ShiftMethod(args.method)
    params = _load_params(args.params)
    alt = load_params(args.alt_params) if args.alt_params else None
    radii = _radii(args)
    point = method.value.startswith(("nonrel", "rel-point"))
    tasks, sources = [], {}
    for Z in zs:
        _check_z(Z)
        BoundStateLabel.parse(args.state, Z=Z, mass=_MASSES[args.mass])  # precondition
        if point:
            r_rms, r_unc, src = None, 0.0, "none"
        else:
            r_rms, r_unc, src = _resolve_radius(Z, None, None, radii)
        sources[Z] = (r_rms, src)
        tasks.append(RowTask((Z,), Z, args.state, method.value, "point" if point else args.model,
                             r_rms, r_unc, args.skin, args.mass, params, alt))
    results = _run_all(tasks, args.jobs)
    factor = convert_energy(1.0, EnergyUnit.EV, args.energy_unit)
    rows, failed = [], 0
    for key, res, err in results:
        Z = key[0]
        r_rms, src = sources[Z]
        row = {"Z": Z, "state": args.state, "method": method.value,
               "r_rms_fm": "" if r_rms is None else fmt(r_rms), "radius_source": src,
               "unit": args.energy_unit}
        if err:
            failed += 1
            print(f"hadvp sweep: Z={Z}: {err}", file=sys.stderr)
            row["error"] = err
        else:
            row.update(_result_cells(res, factor, args.format))
        rows.append(row)
    columns = ["Z", "state", "method", "r_rms_fm", "radius_source", "unit", "value", "uncertainty"]
    if args.format == "csv":
        columns += ["u_param", "u_radius", "u_numeric"]
    columns += ["error"]
    _emit(rows, columns, args.format, out)
    return EXIT_COMPUTE if failed else EXIT_OK


def cmd_ratio(args, out) -> int:
    params = _load_params(args.params)
    r = muonic_vp_ratio(1, params)
    _emit([{"ratio": f"{r:.5f}", "reference": ref.MUONIC_RATIO,
            "literature": f"{LITERATURE_MUONIC_RATIO[0]}({int(LITERATURE_MUONIC_RATIO[1] * 1000)})"}],
          ["ratio", "reference", "literature"], args.format, out)
    return EXIT_OK


# --- parser --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hadvp", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pp = sub.add_parser("potential", help="sample Uehling potentials on a log grid")
    _add_nucleus(pp, default_model="point")
    pp.add_argument("--r-min", type=float, required=True)
    pp.add_argument("--r-max", type=float, required=True)
    pp.add_argument("--points", type=int, default=50)
    pp.add_argument("--r-unit", choices=[u.value for u in LengthUnit], default="compton")
    pp.add_argument("--energy-unit", choices=[u.value for u in EnergyUnit], default="eV")
    pp.add_argument("--species", action="append", choices=[s.value for s in LoopSpecies],
                    help="repeatable; default hadronic")
    pp.add_argument("--method", action="append", choices=[m.value for m in PotentialMethod],
                    help="hadronic potential variant, repeatable; default closed-form-approx")
    pp.add_argument("--tabulated", action="store_true",
                    help="evaluate full-quadrature through the interpolation table")
    _add_common(pp)
    pp.set_defaults(func=cmd_potential)

    ps = sub.add_parser("shift", help="energy shift of one state")
    _add_nucleus(ps)
    ps.add_argument("--state", default="1s", help="e.g. 1s, 2s, 2p1/2, 2p3/2")
    ps.add_argument("--method", choices=[m.value for m in ShiftMethod], default="rel-fns-approx")
    ps.add_argument("--mass", choices=sorted(_MASSES), default="electron",
                    help="bound lepton (muon: muonic atom, no reduced mass)")
    ps.add_argument("--evaluation", choices=("expectation", "eigenvalue"), default="expectation")
    ps.add_argument("--energy-unit", choices=[u.value for u in EnergyUnit], default="eV")
    ps.add_argument("--reduced-mass", action="store_true",
                    help="also report the non-relativistic reduced-mass value (nonrel-point only)")
    _add_common(ps)
    ps.set_defaults(func=cmd_shift)

    pt = sub.add_parser("table", help="recompute a reference table with a diff column")
    pt.add_argument("which", help="II (1s), III (n=2 states) or IV (muonic hydrogen)")
    pt.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_common(pt)
    pt.set_defaults(func=cmd_table)

    pw = sub.add_parser("sweep", help="one shift per Z")
    pw.add_argument("--Z-range", dest="z_range", required=True,
                    help="e.g. 1:96, 1-20 or 1,14,20; empty for none")
    pw.add_argument("--state", default="1s")
    pw.add_argument("--method", choices=[m.value for m in ShiftMethod], default="rel-fns-approx")
    pw.add_argument("--model", choices=("sphere", "fermi"), default="sphere")
    pw.add_argument("--skin", type=float, default=2.3, metavar="FM")
    pw.add_argument("--mass", choices=sorted(_MASSES), default="electron")
    pw.add_argument("--energy-unit", choices=[u.value for u in EnergyUnit], default="eV")
    pw.add_argument("--jobs", type=int, default=1)
    _add_common(pw)
    pw.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("ratio", help="hadronic / muon-loop non-relativistic shift ratio")
    pr.add_argument("--params", metavar="FILE")
    pr.add_argument("--format", choices=("csv", "pretty"), default="csv")
    pr.add_argument("--output", "-o", metavar="FILE")
    pr.set_defaults(func=cmd_ratio)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except _CONFIG_ERRORS as exc:
        print(f"hadvp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"hadvp {args.command}: computation failed: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_COMPUTE
    text = buf.getvalue()
    if getattr(args, "output", None):
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
