"""Command line front-end: ``conefourier verify|eval|transform|table``.

Reports are CSV (with a header row) or a JSON array of row objects. Floats
are written with 17 significant digits so that they round-trip exactly.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import cone, gfun, radial, specfun
from .checks import SUITES, SuiteConfig, run_suites
from .errors import ConeFourierError, ConfigError, ParameterError, SpecParseError
from .radial import RadialFn, RadialGrid, SectorIndex, Signature

__all__ = ["main", "parse_function_spec", "load_config", "write_rows"]


# ---------------------------------------------------------------------------
# output


def _fmt_float(v: float) -> str:
    return format(v, ".17g")


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return v


def _json_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        # JSON has no infinities; keep them readable as strings
        return _fmt_float(v) if math.isfinite(v) else json.dumps(repr(v))
    return json.dumps(v)


def write_rows(rows: list[dict], fmt: str, stream) -> None:
    """Write ``rows`` (dicts sharing keys) as CSV or a JSON array."""
    if fmt == "json":
        body = ",\n".join("  {" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in r.items()) + "}"
                          for r in rows)
        stream.write("[\n" + body + "\n]\n" if rows else "[]\n")
        return
    if not rows:
        return
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(list(rows[0]))
    for r in rows:
        w.writerow([_cell(v) for v in r.values()])


def _emit(rows, args) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_rows(rows, args.format, fh)
    else:
        write_rows(rows, args.format, sys.stdout)


# ---------------------------------------------------------------------------
# configuration


_CONFIG_KEYS = {"p", "q", "signatures", "lmax", "kmax", "grid_n", "xmin", "xmax", "tol",
                "seed", "suite", "cone_points", "format"}


def load_config(path: str | Path) -> dict:
    """Read a flat ``key = value`` file; ``#`` starts a comment.

    Keys: ``signatures`` (e.g. ``3x3, 4x4``), ``lmax``, ``kmax``, ``grid_n``,
    ``xmin``, ``xmax``, ``tol``, ``tol.<anchor prefix>``, ``seed``, ``suite``
    (comma list), ``cone_points``, ``format``.
    """
    out: dict = {"tol_overrides": {}}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key.startswith("tol."):
            out["tol_overrides"][key[4:]] = _to_float(val, n)
        elif key not in _CONFIG_KEYS:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        else:
            out[key] = val
    return out


def _to_float(s, n=None) -> float:
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"{'line %d: ' % n if n else ''}not a number: {s!r}") from None


def _parse_signatures(text: str) -> tuple:
    sigs = []
    for item in text.replace(";", ",").split(","):
        item = item.strip().lower()
        if not item:
            continue
        try:
            p, q = (int(v) for v in item.split("x"))
        except ValueError:
            raise ConfigError(f"signature {item!r} is not of the form PxQ") from None
        sigs.append((p, q))
    return tuple(sigs)


def _suite_config(args) -> SuiteConfig:
    file_cfg = load_config(args.config) if args.config else {"tol_overrides": {}}
    kw: dict = {"tol_overrides": file_cfg.pop("tol_overrides")}
    if "signatures" in file_cfg:
        kw["signatures"] = _parse_signatures(file_cfg["signatures"])
    for key, conv, dest in [("lmax", int, "lmax"), ("kmax", int, "kmax"), ("grid_n", int, "grid_n"),
                            ("xmin", float, "x_min"), ("xmax", float, "x_max"), ("tol", float, "tol"),
                            ("seed", int, "seed"), ("cone_points", int, "cone_points")]:
        if key in file_cfg:
            try:
                kw[dest] = conv(file_cfg[key])
            except ValueError:
                raise ConfigError(f"bad value for {key}: {file_cfg[key]!r}") from None
    if "suite" in file_cfg:
        kw["suites"] = tuple(s.strip() for s in file_cfg["suite"].split(",") if s.strip())
    if "format" in file_cfg:
        if file_cfg["format"] not in ("csv", "json"):
            raise ConfigError(f"bad value for format: {file_cfg['format']!r}")
        if args.format is None:
            args.format = file_cfg["format"]
    # command line wins over the file
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise ConfigError("--p and --q go together")
        kw["signatures"] = ((args.p, args.q),)
    for flag, dest in [("lmax", "lmax"), ("kmax", "kmax"), ("grid_n", "grid_n"), ("xmin", "x_min"),
                       ("xmax", "x_max"), ("tol", "tol"), ("seed", "seed")]:
        v = getattr(args, flag)
        if v is not None:
            kw[dest] = v
    if args.suite:
        kw["suites"] = tuple(args.suite)
    return SuiteConfig(**kw)


# ---------------------------------------------------------------------------
# function spec files


def _preset(tokens, sig: Signature):
    name = tokens[0].lower()
    try:
        nums = [float(t) for t in tokens[1:]]
    except ValueError:
        raise SpecParseError(f"non-numeric preset argument in {' '.join(tokens)!r}") from None
    if name == "flk":
        if len(nums) != 2 or any(v != int(v) or v < 0 for v in nums):
            raise SpecParseError("preset 'flk' takes two nonnegative integers l k")
        return radial.f_lk(sig, SectorIndex(int(nums[0]), int(nums[1])))
    if name == "gauss-bump":
        if len(nums) != 2 or nums[1] <= 0:
            raise SpecParseError("preset 'gauss-bump' takes x0 and a positive width")
        x0, w = nums
        return lambda r: np.exp(-0.5 * ((np.log(r) - x0) / w) ** 2)
    raise SpecParseError(f"unknown preset {name!r}")


def parse_function_spec(text: str, grid_defaults: RadialGrid | None = None):
    """Parse a function spec.

    The header holds ``key = value`` lines (``p``, ``q``, ``xmin``, ``xmax``,
    ``n``); then either a preset line (``flk l k`` or ``gauss-bump x0 w``,
    with ``x0`` and ``w`` in ``log r``) or one sample per line on the grid
    ``exp(xmin + i (xmax - xmin)/n)``.

    Returns
    -------
    RadialFn

    Raises
    ------
    SpecParseError
    """
    if not text.strip():
        raise SpecParseError("empty function spec")
    base = grid_defaults or RadialGrid()
    head = {"p": None, "q": None, "xmin": base.x_min, "xmax": base.x_max, "n": base.N}
    samples: list[float] = []
    preset = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            if samples or preset:
                raise SpecParseError(f"line {n}: header after data")
            key, val = (s.strip().lower() for s in line.split("=", 1))
            if key not in head:
                raise SpecParseError(f"line {n}: unknown header key {key!r}")
            try:
                head[key] = float(val) if key in ("xmin", "xmax") else int(val)
            except ValueError:
                raise SpecParseError(f"line {n}: bad value {val!r}") from None
            continue
        tokens = line.split()
        if tokens[0][0].isalpha() and tokens[0].lower() not in ("nan", "inf"):
            if preset or samples:
                raise SpecParseError(f"line {n}: only one preset, and no samples alongside it")
            preset = tokens
            continue
        if preset:
            raise SpecParseError(f"line {n}: samples after a preset")
        try:
            samples.extend(float(t) for t in tokens)
        except ValueError:
            raise SpecParseError(f"line {n}: not a number") from None
    if head["p"] is None or head["q"] is None:
        raise SpecParseError("header must give p and q")
    if not samples and not preset:
        raise SpecParseError("spec has no samples and no preset")
    try:
        sig = Signature(head["p"], head["q"])
        grid = RadialGrid(head["xmin"], head["xmax"], head["n"])
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    if preset:
        return RadialFn.from_callable(grid, sig, _preset(preset, sig))
    if len(samples) != grid.N:
        raise SpecParseError(f"expected {grid.N} samples, found {len(samples)}")
    try:
        return RadialFn(grid, sig, np.array(samples))
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None


def _read_spec(path: str) -> str:
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        try:
            return resources.files("conefourier").joinpath("data", name + ".spec").read_text()
        except FileNotFoundError:
            raise SpecParseError(f"no bundled spec named {name!r}") from None
    return Path(path).read_text()


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    cfg = _suite_config(args)
    args.format = args.format or "csv"
    rows = run_suites(cfg)
    out = [dict(r.as_dict(), seed=cfg.seed) for r in rows]
    _emit(out, args)
    failed = [r for r in rows if r.status == "fail"]
    for r in failed:
        print(f"FAIL {r.anchor} [{r.params}] error={_fmt_float(r.error)} tol={_fmt_float(r.tol)}",
              file=sys.stderr)
    n_dev = sum(r.status == "deviation" for r in rows)
    print(f"{len(rows) - len(failed) - n_dev} passed, {len(failed)} failed, {n_dev} documented deviations",
          file=sys.stderr)
    return 1 if failed else 0


def _points(text: str | None, name: str) -> list[float]:
    if text is None:
        raise ParameterError(f"--{name} is required for this target")
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"--{name} must be a comma separated list of numbers") from None


def _sig_idx(args):
    if args.p is None or args.q is None:
        raise ParameterError("--p and --q are required")
    try:
        return Signature(args.p, args.q), SectorIndex(args.l, args.k)
    except ValueError as exc:
        raise ParameterError(str(exc)) from None


def _param_list(text: str | None) -> tuple:
    if not text:
        return ()
    return tuple(float(v) for v in text.split(","))


def cmd_eval(args) -> int:
    what = args.what
    rows = []
    if what == "bessel":
        if args.nu is None:
            raise ParameterError("--nu is required")
        for x in _points(args.x, "x"):
            rows.append({"target": what, "kind": args.kind, "nu": args.nu, "x": x,
                         "value": float(specfun.bessel(args.kind, args.nu, x))})
    elif what == "gfun":
        spec = gfun.GSpec(args.m, args.n, _param_list(args.a), _param_list(args.b))
        for x in _points(args.x, "x"):
            d = gfun.default_contour(x, spec)
            v = gfun.g_contour(x, spec, d)
            # a second, deformed path estimates the quadrature error
            alt = gfun.Contour(d.gamma + 0.25, d.s0 - 0.1, 1.5 * d.jog_height)
            try:
                err = abs(gfun.g_contour(x, spec, alt) - v)
            except ConeFourierError:
                err = float("nan")
            rows.append({"target": what, "x": x, "value": v, "error_estimate": err})
    elif what == "kernel-Klk":
        sig, idx = _sig_idx(args)
        for t in _points(args.t, "t"):
            rows.append({"target": what, "p": sig.p, "q": sig.q, "l": idx.l, "k": idx.k, "t": t,
                         "value": float(radial.kernel_K_lk(sig, idx, t))})
    elif what == "psi":
        sig, idx = _sig_idx(args)
        for z in _points(args.zeta, "zeta"):
            v = radial.psi_multiplier(sig, idx, z)
            rows.append({"target": what, "p": sig.p, "q": sig.q, "l": idx.l, "k": idx.k, "zeta": z,
                         "real": v.real, "imag": v.imag})
    elif what == "flk":
        sig, idx = _sig_idx(args)
        fn = radial.f_lk(sig, idx)
        for r in _points(args.r, "r"):
            rows.append({"target": what, "p": sig.p, "q": sig.q, "l": idx.l, "k": idx.k, "r": r,
                         "value": float(fn(r))})
    _emit(rows, args)
    return 0


def _fox_norm(values: np.ndarray, grid: RadialGrid) -> float:
    # L^2(dy) on a log grid: dy = y dx
    return float(np.sqrt(np.sum(values ** 2 * grid.r) * grid.dx))


def cmd_transform(args) -> int:
    base = RadialGrid(args.xmin if args.xmin is not None else -14.0,
                      args.xmax if args.xmax is not None else 7.0, args.grid_n or 4096)
    if args.op == "fox" and args.xmin is None and args.xmax is None:
        base = radial.fox_grid(args.gamma, base)
    f = parse_function_spec(_read_spec(args.input), base)
    grid, sig = f.grid, f.sig
    summary: dict = {"op": args.op, "p": sig.p, "q": sig.q}
    if args.op in ("tlk", "fc"):
        idx = SectorIndex(args.l, args.k)
        summary.update(l=idx.l, k=idx.k)
        if args.op == "tlk":
            apply = lambda g, tol: radial.t_lk_multiplier(g, idx, edge_tol=tol)  # noqa: E731
        else:
            def apply(g, tol):
                u = cone.ConeFunctionStructured.single(sig, idx, g)
                return cone.inversion_fc(u, edge_tol=tol).sectors[0].radial
        out = apply(f, 1e-10)
        norm_in, norm_out = f.norm(), out.norm()
        twice = apply(out, None) if args.twice else None
        residual = (twice - f).norm() / norm_in if twice is not None else None
        out_vals = out.values
        twice_vals = twice.values if twice is not None else None
    else:
        b1, b2, gam = args.b1, args.b2, args.gamma
        summary.update(b1=b1, b2=b2, gamma=gam)
        out_vals = radial.fox_g_transform(b1, b2, gam, f.values, grid)
        norm_in, norm_out = _fox_norm(f.values, grid), _fox_norm(out_vals, grid)
        twice_vals = (radial.fox_g_transform(b1, b2, gam, out_vals, grid, check=False)
                      if args.twice else None)
        residual = (_fox_norm(twice_vals - f.values, grid) / norm_in) if args.twice else None
    summary.update(norm_in=norm_in, norm_out=norm_out, norm_ratio=norm_out / norm_in)
    if residual is not None:
        summary["involution_residual"] = residual
    rows = []
    for i, (x, v, w) in enumerate(zip(grid.x, f.values, out_vals)):
        row = {"x": float(x), "r": float(math.exp(x)), "input": float(v), "output": float(w)}
        if twice_vals is not None:
            row["twice"] = float(twice_vals[i])
        rows.append(row)
    _emit(rows, args)
    stream = sys.stderr if not args.out else sys.stdout
    write_rows([summary], args.format, stream)
    return 0


_TABLES = ("eigen", "kernel", "reductions")


def cmd_table(args) -> int:
    sigs = [(args.p, args.q)] if args.p is not None else [(3, 3), (4, 4), (4, 2), (6, 2)]
    lmax = 3 if args.lmax is None else args.lmax
    kmax = 3 if args.kmax is None else args.kmax
    rows = []
    if args.name == "eigen":
        for pq in sigs:
            sig = Signature(*pq)
            kcap = min(kmax, 1) if sig.q == 2 else kmax
            for l in range(lmax + 1):
                for k in range(kcap + 1):
                    idx = SectorIndex(l, k)
                    rows.append({"p": sig.p, "q": sig.q, "l": l, "k": k, "case": idx.case(sig),
                                 "a": idx.a(sig), "eigenvalue": radial.eigenvalue(sig, idx),
                                 "norm_sq": radial.f_lk_norm_sq(sig, idx)})
    elif args.name == "kernel":
        ts = _points(args.t, "t") if args.t else [0.25, 0.5, 1.0, 2.0, 4.0]
        for pq in sigs:
            sig = Signature(*pq)
            idx = SectorIndex(args.l, args.k)
            for t in ts:
                rows.append({"p": sig.p, "q": sig.q, "l": idx.l, "k": idx.k, "t": t,
                             "value": float(radial.kernel_K_lk(sig, idx, t))})
    else:
        from scipy import special as sc
        GS = gfun.GSpec
        for nu in (0.0, 0.5, 1.0, 1.5):
            for x in (0.1, 1.0, 10.0):
                cases = [
                    ("bessel-j", GS(1, 0, (), (nu, 0.0)), x ** (nu / 2) * sc.jv(nu, 2 * math.sqrt(x))),
                    ("bessel-k", GS(2, 0, (), (nu, 0.0)), 2 * x ** (nu / 2) * sc.kv(nu, 2 * math.sqrt(x))),
                    ("bessel-j-quartic", GS(2, 0, (), (nu / 2, nu / 2 + 0.5, 0.0, 0.5)),
                     x ** (nu / 4) * sc.jv(nu, 4 * x ** 0.25)),
                    ("bessel-y", GS(2, 0, (-0.5,), (0.0, nu, -0.5)), x ** (nu / 2) * sc.yv(nu, 2 * math.sqrt(x))),
                ]
                for name, spec, ref in cases:
                    v = gfun.g_contour(x, spec)
                    rows.append({"identity": f"gfun.reduction.{name}", "nu": nu, "x": x, "contour": v,
                                 "bessel": float(ref), "rel_error": abs(v - ref) / abs(ref)})
    _emit(rows, args)
    return 0


# ---------------------------------------------------------------------------
# parser


def _common(sp, signature=True):
    g = sp.add_argument_group("common")
    if signature:
        g.add_argument("--p", type=int)
        g.add_argument("--q", type=int)
    g.add_argument("--lmax", type=int)
    g.add_argument("--kmax", type=int)
    g.add_argument("--grid-n", dest="grid_n", type=int)
    g.add_argument("--xmin", type=float)
    g.add_argument("--xmax", type=float)
    g.add_argument("--tol", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=("csv", "json"), help="report format (default csv)")
    g.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conefourier", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    _common(v)
    v.add_argument("--suite", action="append", choices=sorted(SUITES),
                   help="suite to run (repeatable; default all)")
    v.add_argument("--config", metavar="FILE", help="flat key = value configuration")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a special function or kernel")
    e.add_argument("what", choices=("bessel", "gfun", "kernel-Klk", "psi", "flk"))
    _common(e)
    e.add_argument("--l", type=int, default=0)
    e.add_argument("--k", type=int, default=0)
    e.add_argument("--kind", choices=("J", "Y", "I", "K"), default="J")
    e.add_argument("--nu", type=float)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--n", type=int, default=0)
    e.add_argument("--a", help="comma list of upper parameters")
    e.add_argument("--b", help="comma list of lower parameters")
    for name in ("x", "t", "r", "zeta"):
        e.add_argument(f"--{name}", help="comma separated points")
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("transform", help="apply T_lk, F_C or the Fox transform to a function spec")
    t.add_argument("input", help="spec file, or builtin:NAME for a bundled spec")
    t.add_argument("--op", choices=("tlk", "fc", "fox"), default="tlk")
    _common(t, signature=False)
    t.add_argument("--l", type=int, default=0)
    t.add_argument("--k", type=int, default=0)
    t.add_argument("--b1", type=float, default=0.0)
    t.add_argument("--b2", type=float, default=0.0)
    t.add_argument("--gamma", type=float, default=1.0)
    t.add_argument("--twice", action="store_true", help="apply again and report the involution residual")
    t.set_defaults(func=cmd_transform)

    tb = sub.add_parser("table", help="print a reference table")
    tb.add_argument("name", choices=_TABLES)
    _common(tb)
    tb.add_argument("--l", type=int, default=0)
    tb.add_argument("--k", type=int, default=0)
    tb.add_argument("--t", help="comma separated points for the kernel table")
    tb.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command != "verify" and args.format is None:
            args.format = "csv"
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ConeFourierError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
