"""Command-line interface.

Exit codes: 0 success, 1 mathematical negative (no refutation, no
certificate, trivial cohomology, failed verification), 2 usage or input
error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
import time
from pathlib import Path
from typing import Dict, Optional, Sequence

from . import cohomology, resolution, sos, xorsys, zoo
from .complex import SimplicialComplex, ball
from .errors import (AuditFailure, BudgetExceeded, DimensionError, InvalidComplex, NotRefuted,
                     ParseError, Refuted, TrivialCohomology)

log = logging.getLogger("xorgap")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Manifest:
    """Line-oriented ``key value`` record of one command run."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.params: Dict[str, str] = {}
        self.inputs: Dict[str, str] = {}
        self.outputs: Dict[str, str] = {}
        self.timing: Dict[str, float] = {}
        self.with_timing = getattr(args, "timing", False)
        skip = {"func", "out", "timing", "verbose", "command"}
        for k, v in sorted(vars(args).items()):
            if k in skip or v is None or k in ("complex", "spec", "instance", "beta", "cert", "dag", "chain"):
                continue
            self.params[k] = str(v)

    def add_input(self, name: str, path) -> None:
        self.inputs[name] = sha256_bytes(Path(path).read_bytes())

    def write_output(self, path: Path, text: str, name: Optional[str] = None) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        self.outputs[name or path.name] = sha256_bytes(text.encode())

    def time(self, step: str, seconds: float) -> None:
        self.timing[step] = seconds

    def dumps(self) -> str:
        lines = [f"command {self.command}"]
        lines += [f"param.{k} {v}" for k, v in sorted(self.params.items())]
        lines += [f"input.{k} {v}" for k, v in sorted(self.inputs.items())]
        lines += [f"output.{k} {v}" for k, v in sorted(self.outputs.items())]
        if self.with_timing:
            lines += [f"timing.{k} {v:.6f}" for k, v in sorted(self.timing.items())]
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps())


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest")


# -- argument helpers ------------------------------------------------------------

def _add_complex_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--zoo", choices=[k for k in zoo.KINDS if k not in ("clique_complex", "cayley_clique")],
                   help="named zoo complex")
    g.add_argument("--spec", help="zoo spec file (key = value lines)")
    g.add_argument("--complex", help="complex file")


def _add_beta_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--beta", help="2-chain file for the right-hand sides")
    g.add_argument("--trivial", action="store_true", help="use a coboundary (satisfiable control)")
    g.add_argument("--nontrivial", action="store_true", help="use a non-trivial cocycle (default)")


def _load_complex(args, man: Optional[Manifest] = None) -> SimplicialComplex:
    if getattr(args, "zoo", None):
        return zoo.build(args.zoo)
    if getattr(args, "spec", None):
        if man:
            man.add_input("spec", args.spec)
        return zoo.build(zoo.load_spec(args.spec))
    if getattr(args, "complex", None):
        if man:
            man.add_input("complex", args.complex)
        return zoo.load(args.complex)
    raise ParseError("one of --zoo, --spec, --complex is required")


def _load_beta(args, X: SimplicialComplex, man: Optional[Manifest] = None) -> cohomology.Cocycle:
    if getattr(args, "beta", None):
        if man:
            man.add_input("beta", args.beta)
        return cohomology.classify(X, cohomology.load_chain(args.beta, X))
    if getattr(args, "trivial", False):
        return cohomology.pick_trivial_cocycle(X, 2)
    return cohomology.pick_nontrivial_cocycle(X, 2)


def _out(args, default: str) -> Path:
    return Path(args.out if args.out else default)


def _finish(man: Manifest, out: Path) -> None:
    man.save(_manifest_path(out))


# -- commands ----------------------------------------------------------------------

def cmd_build(args) -> int:
    man = Manifest("build", args)
    X = _load_complex(args, man)
    out = _out(args, "complex.txt")
    man.write_output(out, zoo.dumps(X))
    _finish(man, out)
    print(f"{X!r} written to {out}")
    return EXIT_OK


def cmd_homology(args) -> int:
    man = Manifest("homology", args)
    X = _load_complex(args, man)
    rep = cohomology.report(X)
    text = rep.format() + "\n"
    out = _out(args, "homology.txt")
    man.write_output(out, text)
    _finish(man, out)
    print(text, end="")
    return EXIT_OK if rep.duality_ok else EXIT_NEGATIVE


def cmd_cocycle(args) -> int:
    man = Manifest("cocycle", args)
    X = _load_complex(args, man)
    if args.trivial:
        c = cohomology.pick_trivial_cocycle(X, args.dim)
    else:
        c = cohomology.pick_nontrivial_cocycle(X, args.dim)
    out = _out(args, "beta.chain")
    man.write_output(out, cohomology.dumps_chain(c.chain))
    _finish(man, out)
    print(f"{c.cls} {c.dim}-cocycle of weight {c.chain.weight} written to {out}")
    return EXIT_OK


def cmd_instance(args) -> int:
    man = Manifest("instance", args)
    X = _load_complex(args, man)
    beta = _load_beta(args, X, man)
    inst = xorsys.make_instance(X, beta, args.mode)
    out = _out(args, "instance.xor")
    man.write_output(out, xorsys.dumps(inst))
    _finish(man, out)
    print(f"{args.mode}-mode instance: {inst.n_vars} variables, {inst.m} equations, beta {beta.cls}")
    return EXIT_OK


def _load_instance(args, man: Manifest) -> xorsys.XorSystem:
    man.add_input("instance", args.instance)
    return xorsys.read(args.instance)


def cmd_optimum(args) -> int:
    man = Manifest("optimum", args)
    inst = _load_instance(args, man)
    X = _load_complex(args, man) if (args.zoo or args.spec or args.complex) else None
    t0 = time.perf_counter()
    frac, arg = xorsys.exhaustive_optimum(inst, args.budget_enum, args.method, X)
    man.time("optimum", time.perf_counter() - t0)
    text = f"min_violated {frac}\nassignment {arg}\n"
    out = _out(args, "optimum.txt")
    man.write_output(out, text)
    _finish(man, out)
    print(text, end="")
    return EXIT_OK


def cmd_cosystole(args) -> int:
    man = Manifest("cosystole", args)
    X = _load_complex(args, man)
    frac, w = cohomology.cosystole(X, args.dim, args.budget_enum)
    out = _out(args, "cosystole.txt")
    text = f"cosystole {frac}\nweight {w.weight}\ncount {X.count(args.dim)}\n"
    man.write_output(out, text)
    man.write_output(out.with_name(out.name + ".witness"), cohomology.dumps_chain(w), "witness")
    _finish(man, out)
    print(text, end="")
    return EXIT_OK


def cmd_refute(args) -> int:
    man = Manifest("refute", args)
    inst = _load_instance(args, man)
    w_max = args.w_max if args.w_max is not None else inst.n_vars
    print(f"closure bound at w_max={w_max}: {resolution.closure_bound(inst.n_vars, w_max)} equations")
    t0 = time.perf_counter()
    w = resolution.refutation_width(inst, w_max, args.budget_closure)
    man.time("sweep", time.perf_counter() - t0)
    out = _out(args, "refute.txt")
    if w is None:
        man.write_output(out, f"refutation_width none\nw_max {w_max}\n")
        _finish(man, out)
        print(f"no refutation up to w_max = {w_max}")
        return EXIT_NEGATIVE
    cl = resolution.close(resolution.subsystem(inst, w), w, args.budget_closure)
    dag = resolution.extract_dag(cl)
    man.write_output(out, f"refutation_width {w}\nw_max {w_max}\ndag_nodes {len(dag.nodes)}\n")
    man.write_output(out.with_name(out.name + ".dag"), resolution.dumps_dag(dag), "dag")
    _finish(man, out)
    print(f"refutation_width {w}")
    return EXIT_OK


def cmd_certify(args) -> int:
    man = Manifest("certify", args)
    inst = _load_instance(args, man)
    out = _out(args, "certificate.txt")
    try:
        cert = sos.build_certificate(inst, args.t, args.budget_sets, args.budget_closure)
    except Refuted as exc:
        print(str(exc))
        return EXIT_NEGATIVE
    man.write_output(out, sos.dumps(cert))
    _finish(man, out)
    print(f"level-{args.t} certificate: {len(cert.sets)} sets, {cert.n_classes} classes")
    return EXIT_OK


def cmd_verify(args) -> int:
    man = Manifest("verify", args)
    inst = _load_instance(args, man)
    man.add_input("cert", args.cert)
    cert = sos.load(args.cert)
    rep = sos.verify_certificate(cert, inst, seed=args.seed, closure_budget=args.budget_closure)
    out = _out(args, "verify.txt")
    man.write_output(out, rep.format())
    _finish(man, out)
    print(rep.format(), end="")
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_fill(args) -> int:
    man = Manifest("fill", args)
    X = _load_complex(args, man)
    man.add_input("chain", args.chain)
    f = cohomology.load_chain(args.chain, X)
    if args.center is not None:
        B, inc = ball(X, args.center, args.radius)
        fb = inc.pull(f)
        if inc.push(fb) != f:
            raise DimensionError("the cycle is not contained in the ball")
    else:
        B, inc, fb = X, None, f
    res = cohomology.min_filling(B, fb, args.budget_enum)
    out = _out(args, "filling.chain")
    if res is None:
        man.write_output(out.with_name(out.name + ".txt"), "filling none\n", "report")
        _finish(man, out)
        print("cycle is not a boundary in this complex")
        return EXIT_NEGATIVE
    g, size = res
    g_host = inc.push(g) if inc is not None else g
    man.write_output(out, cohomology.dumps_chain(g_host))
    _finish(man, out)
    print(f"filling size {size} for cycle of length {f.weight}")
    return EXIT_OK


def cmd_audit_dag(args) -> int:
    man = Manifest("audit-dag", args)
    X = _load_complex(args, man)
    beta = _load_beta(args, X, man)
    inst = _load_instance(args, man)
    man.add_input("dag", args.dag)
    dag = resolution.loads_dag(Path(args.dag).read_text(), inst)
    rep = resolution.audit_dag(dag, X, beta.chain, inst, args.budget_enum, strict=False)
    out = _out(args, "audit.txt")
    man.write_output(out, rep.format())
    _finish(man, out)
    print(rep.format(), end="")
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_pipeline(args) -> int:
    """complex -> beta -> instance -> optimum -> refutation sweep -> certificate -> verify."""
    man = Manifest("pipeline", args)
    outdir = Path(args.out or "pipeline_out")
    X = _load_complex(args, man)
    beta = _load_beta(args, X, man)
    man.write_output(outdir / "complex.txt", zoo.dumps(X))
    man.write_output(outdir / "beta.chain", cohomology.dumps_chain(beta.chain))
    inst = xorsys.make_instance(X, beta, args.mode)
    man.write_output(outdir / "instance.xor", xorsys.dumps(inst))

    t0 = time.perf_counter()
    opt, _ = xorsys.exhaustive_optimum(inst, args.budget_enum, "auto", X)
    man.time("optimum", time.perf_counter() - t0)

    w_max = args.w_max if args.w_max is not None else inst.n_vars
    t0 = time.perf_counter()
    width = resolution.refutation_width(inst, w_max, args.budget_closure)
    man.time("refute", time.perf_counter() - t0)
    audit = None
    if width is not None:
        cl = resolution.close(resolution.subsystem(inst, width), width, args.budget_closure)
        dag = resolution.extract_dag(cl)
        man.write_output(outdir / "dag.txt", resolution.dumps_dag(dag))
        if args.mode == "edge":
            audit = resolution.audit_dag(dag, X, beta.chain, inst, args.budget_enum, strict=False)
            man.write_output(outdir / "audit.txt", audit.format())

    t0 = time.perf_counter()
    cert = rep = None
    cert_note = ""
    try:
        cert = sos.build_certificate(inst, args.t, args.budget_sets, args.budget_closure)
    except Refuted as exc:
        cert_note = str(exc)
    if cert is not None:
        man.write_output(outdir / "certificate.txt", sos.dumps(cert))
        rep = sos.verify_certificate(cert, inst, seed=args.seed)
        man.write_output(outdir / "verify.txt", rep.format())
    man.time("certificate", time.perf_counter() - t0)

    lines = [
        "gap report",
        f"complex f-vector {' '.join(map(str, X.f_vector()))}",
        f"mode {args.mode}",
        f"beta {beta.cls} weight {beta.chain.weight}",
        f"variables {inst.n_vars} equations {inst.m}",
        f"satisfiable {'yes' if opt == 0 else 'no'}",
        f"optimum_violated_fraction {opt}",
        f"optimum_satisfied_fraction {1 - opt}",
        f"refutation_width {width if width is not None else f'none up to {w_max}'}",
    ]
    if audit is not None:
        lines.append(f"audit_violations {len(audit.violations)} root_kappa {audit.root_kappa}")
    if rep is not None:
        lines += [
            f"certificate_level {args.t}",
            f"certificate_classes {cert.n_classes}",
            f"certificate_objective {rep.objective}",
            f"certificate_checks {'ok' if rep.ok else 'FAILED'}",
        ]
        if rep.objective is not None and opt > 0:
            lines.append(f"integrality_gap sdp {rep.objective} vs true {1 - opt}")
    else:
        lines.append(f"certificate none: {cert_note}")
    report = "\n".join(lines) + "\n"
    man.write_output(outdir / "report.txt", report)
    man.save(outdir / "manifest.txt")
    print(report, end="")
    if rep is None or not rep.ok:
        return EXIT_NEGATIVE
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file (directory for pipeline)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    p.add_argument("--budget-enum", type=int, default=1 << 20, help="max members of an exhaustive enumeration")
    p.add_argument("--budget-closure", type=int, default=10 ** 6, help="max equations in a closure")
    p.add_argument("--budget-sets", type=int, default=sos.DEFAULT_SET_BUDGET, help="max sets in a certificate")
    p.add_argument("--timing", action="store_true", help="record wall-clock timings in the manifest")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xorgap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a complex file")
    _add_complex_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("homology", help="(co)homology dimension table")
    _add_complex_args(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("cocycle", help="pick a cocycle")
    _add_complex_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--trivial", action="store_true")
    g.add_argument("--nontrivial", action="store_true")
    p.add_argument("--dim", type=int, default=2)
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("instance", help="build a 3XOR instance")
    _add_complex_args(p)
    _add_beta_args(p)
    p.add_argument("--mode", choices=xorsys.MODES, default="edge")
    p.set_defaults(func=cmd_instance)

    p = sub.add_parser("optimum", help="exact optimum of an instance")
    p.add_argument("--instance", required=True)
    _add_complex_args(p, required=False)
    p.add_argument("--method", choices=("auto", "full", "coset"), default="auto")
    p.set_defaults(func=cmd_optimum)

    p = sub.add_parser("cosystole", help="exact cosystole")
    _add_complex_args(p)
    p.add_argument("--dim", type=int, default=2)
    p.set_defaults(func=cmd_cosystole)

    p = sub.add_parser("refute", help="refutation width sweep")
    p.add_argument("--instance", required=True)
    p.add_argument("--w-max", type=int)
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("certify", help="build a level-t SoS certificate")
    p.add_argument("--instance", required=True)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="verify a certificate against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fill", help="minimum filling of a 1-cycle")
    _add_complex_args(p)
    p.add_argument("--chain", required=True, help="1-chain file")
    p.add_argument("--center", type=int, help="restrict to the ball around this vertex")
    p.add_argument("--radius", type=int, default=1)
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("audit-dag", help="audit a refutation DAG")
    _add_complex_args(p)
    _add_beta_args(p)
    p.add_argument("--instance", required=True)
    p.add_argument("--dag", required=True)
    p.set_defaults(func=cmd_audit_dag)

    p = sub.add_parser("pipeline", help="run the whole chain and print a gap report")
    _add_complex_args(p)
    _add_beta_args(p)
    p.add_argument("--mode", choices=xorsys.MODES, default="edge")
    p.add_argument("--w-max", type=int)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(func=cmd_pipeline)

    for action in sub.choices.values():
        _common(action)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TrivialCohomology, NotRefuted, Refuted, AuditFailure) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NEGATIVE
    except (ParseError, InvalidComplex, DimensionError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
