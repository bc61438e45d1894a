"""Command-line front end: ``symres {info,eval,scan,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 bad configuration
(unknown space, invalid root data or profile, bad flags), 3 point off the
surface, 4 point at a pole, 5 quadrature did not converge, 6 any other
engine error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import continuation as cont
from .errors import (
    InvalidRootData,
    NearPole,
    NoConvergence,
    OffDomain,
    OffSurface,
    OnSpectrum,
    RankUnsupported,
    SymresError,
    UnknownSpace,
)
from .oracles import verify_space
from .profile import SpectralProfile, profile_from_spec, symmetrize
from .radial import RadialProfile, radial_profile
from .rootspace import (
    Parity,
    SymmetricSpaceSpec,
    catalog_get,
    catalog_names,
    invariants,
    load_space,
    weyl_generate,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_OFF_SURFACE = 3
EXIT_NEAR_POLE = 4
EXIT_NO_CONVERGENCE = 5
EXIT_ENGINE = 6

CSV_HEADER = ["w_re", "w_im", "z_re", "z_im", "G_re", "G_im", "err", "status"]
TOL_RANGE = (1e-12, 1e-4)

_STATUS = {
    OffSurface: ("off_surface", EXIT_OFF_SURFACE),
    OffDomain: ("off_surface", EXIT_OFF_SURFACE),
    OnSpectrum: ("off_surface", EXIT_OFF_SURFACE),
    NearPole: ("near_pole", EXIT_NEAR_POLE),
    NoConvergence: ("no_convergence", EXIT_NO_CONVERGENCE),
}


class ConfigError(Exception):
    pass


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the documented exit code."""
    for cls, (_, code) in _STATUS.items():
        if isinstance(exc, cls):
            return code
    if isinstance(exc, (ConfigError, UnknownSpace, InvalidRootData, RankUnsupported, ValueError)):
        return EXIT_CONFIG
    return EXIT_ENGINE


def _status_for(exc: SymresError) -> str:
    for cls, (status, _) in _STATUS.items():
        if isinstance(exc, cls):
            return status
    return "error"


@dataclass(frozen=True)
class RunConfig:
    space: SymmetricSpaceSpec
    profile: SpectralProfile
    tolerance: float = 1e-9
    mode: cont.Mode = cont.Mode.GENERAL
    output: str | None = None
    fmt: str = "csv"
    resolution: int | None = None

    def radial(self) -> RadialProfile:
        return radial_profile(self.space, self.profile, self.resolution)


# --- parsing helpers -------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Accept ``1.5-0.3j``, ``1.5-0.3i`` or ``1.5,-0.3``."""
    s = text.strip().replace(" ", "")
    try:
        if "," in s:
            re_part, im_part = s.split(",")
            return complex(float(re_part), float(im_part))
        return complex(s.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> ``n`` equispaced values from ``a`` to ``b`` inclusive."""
    try:
        a, b, n = text.split(":")
        n = int(n)
        if n < 1:
            raise ValueError
        return np.linspace(float(a), float(b), n)
    except ValueError:
        raise ConfigError(f"grid range must look like a:b:n, got {text!r}") from None


def _load_json_arg(text: str):
    path = Path(text)
    raw = path.read_text() if not text.lstrip().startswith("{") and path.exists() else text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"profile is neither a JSON object nor a readable JSON file: {exc}") from None


def resolve_space(name: str | None, space_file: str | None) -> SymmetricSpaceSpec:
    if space_file:
        try:
            return load_space(space_file)
        except OSError as exc:
            raise ConfigError(f"cannot read space file: {exc}") from None
    if not name:
        raise ConfigError("give a catalog name (--space) or --space-file")
    return catalog_get(name)


def resolve_profile(text: str | None, space: SymmetricSpaceSpec) -> SpectralProfile:
    if text is None:
        return SpectralProfile.gaussian(space.rank)
    spec = _load_json_arg(text)
    if not isinstance(spec, dict):
        raise ConfigError("profile spec must be a JSON object")
    profile = profile_from_spec(spec, space.rank)
    if spec.get("symmetrize"):
        profile = symmetrize(profile, weyl_generate(space))
    return profile


def build_config(args) -> RunConfig:
    tol = args.tol
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise ConfigError(f"--tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}], got {tol:g}")
    space = resolve_space(getattr(args, "space_name", None) or args.space, args.space_file)
    mode = cont.Mode(args.mode)
    if mode is cont.Mode.RANK1 and space.rank != 1:
        raise ConfigError("--mode rank1 needs a rank-one space")
    return RunConfig(
        space=space,
        profile=resolve_profile(args.profile, space),
        tolerance=tol,
        mode=mode,
        output=args.out,
        fmt=args.format,
        resolution=args.resolution,
    )


# --- records ------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return "%.17g" % x


def make_record(w: complex, z: complex, value: complex, err: float, status: str) -> dict:
    return {
        "w_re": w.real,
        "w_im": w.imag,
        "z_re": z.real,
        "z_im": z.imag,
        "G_re": value.real,
        "G_im": value.imag,
        "err": err,
        "status": status,
    }


def evaluate_point(cfg: RunConfig, rp: RadialProfile, w: complex) -> dict:
    """Evaluate one point; engine errors propagate."""
    ev = cont.resolvent_eval(rp, w, mode=cfg.mode, tol=cfg.tolerance, full_output=True)
    ok = ev.error <= cfg.tolerance * max(1.0, abs(ev.value))
    return make_record(w, ev.z, ev.value, ev.error, "ok" if ok else "inexact")


class RecordWriter:
    """Emit records as CSV rows (streamed) or as one JSON array (buffered)."""

    def __init__(self, stream, fmt: str):
        self.stream = stream
        self.fmt = fmt
        self.records: list[dict] = []
        if fmt == "csv":
            self.writer = csv.writer(stream, lineterminator="\n")
            self.writer.writerow(CSV_HEADER)

    def write(self, rec: dict):
        if self.fmt == "csv":
            row = [rec[k] if k == "status" else _fmt(rec[k]) for k in CSV_HEADER]
            self.writer.writerow(row)
        else:
            self.records.append(rec)

    def close(self):
        if self.fmt == "json":
            clean = [
                {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in r.items()}
                for r in self.records
            ]
            json.dump(clean, self.stream, indent=1)
            self.stream.write("\n")
        self.stream.flush()


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


# --- commands --------------------------------------------------------------------------

def _surface_text(space: SymmetricSpaceSpec) -> tuple[str, list[str]]:
    inv = invariants(space)
    par = "Odd" if inv.parity is Parity.ODD else "Even"
    if inv.entire_density:
        return f"{par}+entire", ["continuation to all of C in w"]
    r = inv.branch_radius
    if inv.parity is Parity.ODD:
        extra = [f"cut: i[{r:.17g}, inf) in w"]
        if space.rank == 1:
            extra.append("rank one: meromorphic through the cut (--mode rank1)")
        return f"{par}+cut", extra
    return f"{par}+cuts", [
        f"excluded half-lines: i*pi*(n+1/2) + [log r, inf) = i*pi*(n+1/2) + [{math.log(r):.17g}, inf), n != -1"
    ]


def cmd_info(args) -> int:
    space = resolve_space(args.space_name or args.space, args.space_file)
    inv = invariants(space)
    surface, extra = _surface_text(space)
    out = sys.stdout
    out.write(f"name={space.name}\n")
    out.write(f"rank={space.rank}\n")
    for k, r in enumerate(space.roots):
        vec = ", ".join(_fmt(x) for x in r.vector)
        out.write(f"root[{k}]=({vec}) m={r.m} m2={r.m2}\n")
    out.write(f"rho_norm_sq={_fmt(inv.rho_norm_sq)}\n")
    out.write(f"branch_radius={_fmt(inv.branch_radius)}\n")
    out.write(f"parity={'Odd' if inv.parity is Parity.ODD else 'Even'}\n")
    out.write(f"entire={'true' if inv.entire_density else 'false'}\n")
    out.write(f"surface={surface}\n")
    for line in extra:
        out.write(f"  {line}\n")
    out.write(f"weyl_order={weyl_generate(space).order}\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = build_config(args)
    w = parse_complex(args.w)
    rp = cfg.radial()
    rec = evaluate_point(cfg, rp, w)
    stream, owned = _open_out(cfg.output)
    try:
        writer = RecordWriter(stream, cfg.fmt)
        writer.write(rec)
        writer.close()
    finally:
        if owned:
            stream.close()
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = build_config(args)
    res = parse_range(args.re)
    ims = parse_range(args.im)
    rp = cfg.radial()
    kind = rp.info.parity
    stream, owned = _open_out(cfg.output)
    writer = RecordWriter(stream, cfg.fmt)
    code = EXIT_OK
    try:
        for y in ims:  # row-major: imaginary part outer, real part inner
            for x in res:
                w = complex(x, y)
                try:
                    rec = evaluate_point(cfg, rp, w)
                except SymresError as exc:
                    if not args.skip_invalid:
                        print(f"error at w={w}: {exc}", file=sys.stderr)
                        code = exit_code_for(exc)
                        return code
                    z = cont.SurfacePoint(w, kind).z(rp.info.rho_norm_sq)
                    rec = make_record(w, z, complex(math.nan, math.nan), math.nan, _status_for(exc))
                writer.write(rec)
    finally:
        writer.close()
        if owned:
            stream.close()
    return code


def cmd_verify(args) -> int:
    if args.space_file or args.space_name or args.space:
        spaces = [resolve_space(args.space_name or args.space, args.space_file)]
    else:
        spaces = [catalog_get(n) for n in catalog_names()]
    tol = args.tol
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise ConfigError(f"--tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    failed = 0
    total = 0
    for space in spaces:
        profile = resolve_profile(args.profile, space)
        rp = radial_profile(space, profile, args.resolution)
        for rep in verify_space(rp, tol=min(tol, 1e-11)):
            total += 1
            failed += not rep.passed
            flag = "PASS" if rep.passed else "FAIL"
            line = f"{flag}  {space.name:<6} {rep.name:<48} max_rel_err={rep.max_rel_err:.3e} (<= {rep.threshold:.0e})"
            if rep.detail:
                line += f"  [{rep.detail}]"
            print(line)
    print(f"{total - failed}/{total} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


# --- argument parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="catalog space name (H2..H6, CH2, SL3R, SL3C, SL4R)")
    common.add_argument("--space-file", help="custom space as a JSON file")
    common.add_argument("--profile", help="profile spec: inline JSON object or path to a JSON file")
    common.add_argument("--tol", type=float, default=1e-9, help="error tolerance (default 1e-9)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--mode", choices=["general", "rank1"], default="general",
                        help="rank1: continue rank-one resolvents meromorphically through the cut")
    common.add_argument("--resolution", type=int, default=None, help="sphere rule resolution (rank >= 2)")

    parser = argparse.ArgumentParser(
        prog="symres",
        description="Continued resolvents of Laplacians on noncompact symmetric spaces.",
        epilog="Negative arguments need '=' (e.g. --w=-0.5j, --re=-2:2:11).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="describe a space and its resolvent surface")
    p.add_argument("space_name", nargs="?", help="catalog space name")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("eval", parents=[common], help="evaluate at one surface point")
    p.add_argument("--w", required=True, help="surface coordinate, e.g. 0.5-0.3j")
    p.set_defaults(func=cmd_eval, space_name=None)

    p = sub.add_parser("scan", parents=[common], help="evaluate on a rectangular grid")
    p.add_argument("--re", required=True, help="real parts a:b:n")
    p.add_argument("--im", required=True, help="imaginary parts a:b:n")
    p.add_argument("--skip-invalid", action="store_true",
                   help="record invalid points with a status instead of aborting")
    p.set_defaults(func=cmd_scan, space_name=None)

    p = sub.add_parser("verify", parents=[common], help="run the consistency checks")
    p.add_argument("space_name", nargs="?", help="catalog space name (default: all)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SymresError, ValueError) as exc:
        print(f"symres: error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
