"""Command-line entry point: ``coxnl <subcommand> ...``.

Output is ``key=value`` lines.  Exit codes: 0 all checks pass, 1 usage or
input error, 2 a mathematical check failed, 3 an emptiness certificate was
inconclusive under ``--strict``.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .chow import NotNefError, verify_degree_bound
from .cox_ring import CoxRing, PolynomialSyntaxError, format_monomial
from .fan import Fan, FanError
from .gorenstein import euler_coefficients, verify_cox_gorenstein
from .graded_ideal import GradedIdeal, jacobian_ideal, nondegenerate_check, quasi_smooth_check
from .io import FormatError, fixtures_dir, format_poly, read_fan, read_ideal, read_poly
from .nl_tangent import (
    FlagDatum,
    NotContainedError,
    hilbert_family_diagnostic,
    hodge_class_candidates,
    nl_tangent_codim,
    transporter_identity,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    fan: str | None = None
    poly: str | None = None
    ideal: str | None = None
    classes: dict[str, str] = field(default_factory=dict)
    w: list[str] = field(default_factory=list)
    A: list[str] = field(default_factory=list)
    K: list[str] = field(default_factory=list)
    m_max: int | None = None
    seed: int = 0
    bound: int = 100
    strict: bool = False
    output: str = "lines"
    extra: dict = field(default_factory=dict)


# -- input helpers ---------------------------------------------------------------------


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    q = fixtures_dir() / path
    if q.exists():
        return q
    raise UsageError(f"file not found: {path}")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_fan(cfg: RunConfig) -> Fan:
    if not cfg.fan:
        raise UsageError("--fan is required")
    fan = read_fan(_resolve(cfg.fan))
    report = fan.validate()
    if not report.valid:
        raise UsageError("invalid fan: " + "; ".join(report.lines()))
    return fan


def _class(fan: Fan, text: str):
    return fan.from_class(_ints(text))


def _degree(cfg: RunConfig, fan: Fan, key: str = "class"):
    if cfg.classes.get("divisor"):
        return fan.divisor(_ints(cfg.classes["divisor"]))
    if cfg.classes.get(key):
        return _class(fan, cfg.classes[key])
    raise UsageError(f"--{key} or --divisor is required")


def _load_poly(ring: CoxRing, text: str):
    """A polynomial file path (or bundled fixture name), else an inline polynomial."""
    p = Path(text)
    if p.exists() or (fixtures_dir() / text).exists():
        return read_poly(_resolve(text), ring)
    return ring.parse(text)


def _split_w(values: list[str], width: int) -> list[str]:
    """W classes from repeated flags, ';'-separated groups, or one flat comma list."""
    out = []
    for v in values:
        for group in (x for x in v.split(";") if x):
            nums = group.split(",")
            if len(nums) % width:
                raise UsageError(f"W class {group!r} does not split into {width}-coordinate classes")
            out += [",".join(nums[i:i + width]) for i in range(0, len(nums), width)]
    return out


# -- subcommands -----------------------------------------------------------------------


def cmd_fan(cfg: RunConfig, emit) -> int:
    fan = read_fan(_resolve(cfg.fan)) if cfg.fan else None
    if fan is None:
        raise UsageError("--fan is required")
    report = fan.validate()
    for line in report.lines():
        emit(line)
    if not report.valid:
        return EXIT_FAIL
    cg = fan.class_group
    emit(f"free_rank={cg.free_rank}")
    emit("torsion=" + (",".join(map(str, cg.torsion)) or "none"))
    for i, deg in enumerate(fan.variable_degrees):
        emit(f"deg_x{i}=" + ",".join(map(str, deg)))
    emit(f"anticanonical={fan.anticanonical().label()}")
    if cfg.classes.get("ample"):
        D = _class(fan, cfg.classes["ample"])
        emit(f"ample({D.label()})={str(D.is_ample()).lower()}")
        return EXIT_OK if D.is_ample() else EXIT_FAIL
    return EXIT_OK


def cmd_basis(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    S = CoxRing(fan)
    for m in S.monomial_basis(_degree(cfg, fan)):
        emit(format_monomial(m))
    return EXIT_OK


def cmd_jacobian(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    S = CoxRing(fan)
    if not cfg.poly:
        raise UsageError("--poly is required")
    f = _load_poly(S, cfg.poly)
    J = jacobian_ideal(f)
    for i, g in enumerate(J.generators):
        emit(f"generator_{i}={g}")
    if cfg.classes.get("class") or cfg.classes.get("divisor"):
        alpha = _degree(cfg, fan)
        emit(f"ideal_dim={J.piece(alpha).dim}")
        emit(f"quotient_dim={J.quotient_dim(alpha)}")
    return EXIT_OK


def _certificate_exit(certified: bool, strict: bool, emit) -> int:
    if certified:
        return EXIT_OK
    if strict:
        return EXIT_INCONCLUSIVE
    emit("warning=certificate inconclusive; rerun with a larger --m-max or --strict")
    return EXIT_OK


def cmd_nondegenerate(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    S = CoxRing(fan)
    if not cfg.poly:
        raise UsageError("--poly is required")
    f = _load_poly(S, cfg.poly)
    check = quasi_smooth_check if cfg.extra.get("quasi_smooth") else nondegenerate_check
    v = check(f, cfg.m_max)
    for line in v.lines():
        emit(line)
    if v.certificate.refuted:
        return EXIT_FAIL
    return _certificate_exit(v.certified, cfg.strict, emit)


def cmd_gorenstein(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    S = CoxRing(fan)
    beta0 = fan.anticanonical()
    if cfg.extra.get("jacobian_of"):
        f = _load_poly(S, cfg.extra["jacobian_of"])
        I = jacobian_ideal(f)
        default_N = (fan.d + 1) * f.degree - beta0
    elif cfg.ideal:
        I = read_ideal(_resolve(cfg.ideal), S)
        default_N = None
        if len(I.generators) == fan.d + 1:
            total = fan.zero_class()
            for g in I.generators:
                total = total + g.degree
            default_N = total - beta0
    else:
        raise UsageError("--jacobian-of or --ideal is required")
    if cfg.classes.get("socle"):
        N = _class(fan, cfg.classes["socle"])
    elif default_N is not None:
        N = default_N
    else:
        raise UsageError("--socle-degree is required for this ideal")
    report = verify_cox_gorenstein(I, N, cfg.m_max)
    for line in report.lines():
        emit(line)
    if report.verdict == "FAIL":
        return EXIT_FAIL
    return _certificate_exit(report.verdict == "PASS", cfg.strict, emit)


def cmd_degree(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    for key in ("eta", "beta"):
        if not cfg.classes.get(key):
            raise UsageError(f"--{key} is required")
    cg = fan.class_group
    ws = _split_w(cfg.w, cg.free_rank + len(cg.torsion))
    if not ws:
        raise UsageError("at least one --w class is required")
    eta, beta = _class(fan, cfg.classes["eta"]), _class(fan, cfg.classes["beta"])
    try:
        rep = verify_degree_bound(beta, eta, [_class(fan, w) for w in ws])
    except NotNefError as e:
        raise UsageError(str(e)) from None
    for line in rep.lines():
        emit(line)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_nl(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    S = CoxRing(fan)
    if not cfg.A:
        raise UsageError("--A is required")
    A = [_load_poly(S, a) for a in cfg.A]
    beta = _class(fan, cfg.classes["beta"]) if cfg.classes.get("beta") else None
    K = [_load_poly(S, k) for k in cfg.K] if cfg.K else None
    f = _load_poly(S, cfg.poly) if cfg.poly else None
    rng = random.Random(cfg.seed)
    datum = FlagDatum.build(A, beta, K=K, f=f, rng=rng, bound=cfg.bound)
    emit(f"f={datum.f}")
    for i, k in enumerate(datum.K):
        emit(f"K_{i}={k}")
    P = None
    cand = None
    if cfg.extra.get("tangent"):
        cand = hodge_class_candidates(datum)
        if cand.nonzero_class_exists:
            P = cand.sample(rng)
    rep = nl_tangent_codim(datum, P=P, m_max=cfg.m_max,
                           check_smoothness=bool(cfg.extra.get("check_smooth")))
    for line in rep.lines():
        emit(line)
    est = hilbert_family_diagnostic(S, [a.degree for a in A], datum.beta)
    for line in est.lines():
        emit(line)
    code = EXIT_OK if rep.status != "FAIL" else EXIT_FAIL
    if cand is not None:
        for line in cand.lines():
            emit(line)
        if P is None:
            emit("transporter_identity=skipped")
            code = EXIT_FAIL
        else:
            ident = transporter_identity(datum.f, P, datum.beta).holds
            emit(f"transporter_identity={str(ident).lower()}")
            if not ident:
                code = EXIT_FAIL
    if rep.smoothness == "REFUTED" and code == EXIT_OK:
        code = EXIT_FAIL
    elif rep.smoothness == "INCONCLUSIVE" and cfg.strict and code == EXIT_OK:
        code = EXIT_INCONCLUSIVE
    return code


def cmd_euler(cfg: RunConfig, emit) -> int:
    fan = _load_fan(cfg)
    for line in euler_coefficients(fan).lines():
        emit(line)
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, emit) -> int:
    from .acceptance import CRITERIA
    ok = True
    for crit in CRITERIA:
        res = crit()
        emit(res.line())
        for d in res.details:
            emit("  " + d)
        ok &= res.passed and res.within_budget
    emit(f"selftest={'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "fan": cmd_fan, "basis": cmd_basis, "jacobian": cmd_jacobian,
    "nondegenerate": cmd_nondegenerate, "gorenstein": cmd_gorenstein,
    "degree": cmd_degree, "nl": cmd_nl, "euler": cmd_euler, "selftest": cmd_selftest,
}


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxnl", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"coxnl {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, fan=True):
        if fan:
            sp.add_argument("--fan", help="fan file (or bundled fixture name, e.g. p3.fan)")
        sp.add_argument("--m-max", type=int, default=None, help="emptiness search bound")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--strict", action="store_true",
                        help="exit 3 when an emptiness certificate is inconclusive")
        sp.add_argument("--format", choices=("lines", "text"), default="lines")
        return sp

    def degree_args(sp):
        sp.add_argument("--class", dest="cls", help="class coordinates c1,...,ck")
        sp.add_argument("--divisor", help="representative a1,...,ar")

    sp = common(sub.add_parser("fan", help="validate a fan and print its class group"))
    sp.add_argument("--ample", help="class to test for ampleness")
    degree_args(common(sub.add_parser("basis", help="monomial basis of a graded piece")))
    sp = common(sub.add_parser("jacobian", help="toric Jacobian ideal of a polynomial"))
    sp.add_argument("--poly", required=True)
    degree_args(sp)
    sp = common(sub.add_parser("nondegenerate", help="certify nondegeneracy of a hypersurface"))
    sp.add_argument("--poly", required=True)
    sp.add_argument("--quasi-smooth", action="store_true",
                    help="certify quasi-smoothness via partial derivatives instead")
    sp = common(sub.add_parser("gorenstein", help="verify the Cox-Gorenstein property"))
    sp.add_argument("--jacobian-of")
    sp.add_argument("--ideal")
    sp.add_argument("--socle-degree")
    sp = common(sub.add_parser("degree", help="degree bound for V = X cap W"))
    sp.add_argument("--eta", required=True)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--w", action="append", default=[], required=True,
                    help="classes presenting W: a flat list c,c,..., ';'-separated, or repeated")
    sp = common(sub.add_parser("nl", help="NL tangent space of a datum f = sum A_i K_i"))
    sp.add_argument("--beta")
    sp.add_argument("--A", required=True, help="comma-separated polynomial files")
    sp.add_argument("--K", help="comma-separated polynomial files")
    sp.add_argument("--f", dest="poly")
    sp.add_argument("--bound", type=int, default=100, help="coefficient bound for random K")
    sp.add_argument("--tangent", action="store_true",
                    help="also sample a Hodge class and compare T^beta with I^beta")
    sp.add_argument("--check-smooth", action="store_true")
    common(sub.add_parser("euler", help="Euler form coefficients det(e_iota)"))
    common(sub.add_parser("selftest", help="run the acceptance suite"), fan=False)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    classes = {}
    for key, attr in (("class", "cls"), ("divisor", "divisor"), ("eta", "eta"),
                      ("beta", "beta"), ("ample", "ample"), ("socle", "socle_degree")):
        if getattr(ns, attr, None):
            classes[key] = getattr(ns, attr)
    extra = {k: getattr(ns, k) for k in ("jacobian_of", "tangent", "check_smooth",
                                         "quasi_smooth") if getattr(ns, k, None)}
    return RunConfig(
        subcommand=ns.subcommand, fan=getattr(ns, "fan", None), poly=getattr(ns, "poly", None),
        ideal=getattr(ns, "ideal", None), classes=classes, w=getattr(ns, "w", []) or [],
        A=(ns.A.split(",") if getattr(ns, "A", None) else []),
        K=(ns.K.split(",") if getattr(ns, "K", None) else []),
        m_max=ns.m_max, seed=ns.seed, bound=getattr(ns, "bound", 100), strict=ns.strict,
        output=ns.format, extra=extra)


def _apply_threads():
    n = os.environ.get("COXNL_THREADS")
    if not n:
        return
    try:
        import flint
        flint.ctx.threads = max(1, int(n))
    except (ImportError, ValueError, AttributeError):
        pass


def run(cfg: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout

    def emit(line: str):
        if cfg.output == "text" and "=" in line and not line.startswith(" "):
            k, v = line.split("=", 1)
            line = f"{k}: {v}"
        out.write(line + "\n")

    _apply_threads()
    try:
        return COMMANDS[cfg.subcommand](cfg, emit)
    except (UsageError, FormatError, FanError, PolynomialSyntaxError, NotContainedError,
            ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
