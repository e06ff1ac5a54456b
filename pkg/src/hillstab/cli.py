"""Command-line surface: spectra, certificates, constants tables, witness
generation, zero structures, discriminant charts, and nonlinear probing.

All JSON outputs embed a run manifest (command, inputs, parameters,
tolerances, tool version) so artifacts are reproducible.  Exit codes:
0 success, 2 parse error, 3 root-search or integration failure, 4 a
``--verify`` pass found a certificate contradicted by the ground truth.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib.metadata import PackageNotFoundError, version

from . import coeff as cf
from . import floquet as fq
from . import lyapunov as ly
from . import nonlinear as nl
from . import witness as wt
from . import zeros as zr
from .errors import (HillstabError, IntegrationFailure, NoConvergence,
                     ParseError, RootSearchFailure)

EXIT_PARSE = 2
EXIT_SEARCH = 3
EXIT_SOUNDNESS = 4


def _tool_version() -> str:
    try:
        return version("hillstab")
    except PackageNotFoundError:
        return "unknown"


def _manifest(args, command: str, inputs: list[str]) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "parameters": {k: v for k, v in vars(args).items()
                       if k not in ("func",) and v is not None},
        "tool_version": _tool_version(),
        "tolerances": {"quad": cf.QUAD_TOL, "root": fq.TOL_ROOT,
                       "boundary": fq.TOL_BOUNDARY},
    }


def _load_coefficient(args) -> cf.PeriodicCoefficient:
    with open(args.coeff_file) as fh:
        doc = json.load(fh)
    if args.period_override is not None:
        if "period" in doc:
            raise ParseError(
                "--period-override conflicts with a file that sets 'period'")
        doc["period"] = args.period_override
    return cf.PeriodicCoefficient.from_dict(doc)


def _json_default(o):
    import numpy as np
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def _emit(doc: dict, args):
    out = json.dumps(doc, indent=2, sort_keys=True, default=_json_default)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# -- subcommands --------------------------------------------------------------

def cmd_eigs(args) -> int:
    a = _load_coefficient(args)
    if args.bc == "periodic":
        s = fq.periodic_eigenvalues(a, args.count)
    elif args.bc == "antiperiodic":
        s = fq.antiperiodic_eigenvalues(a, args.count)
    else:
        s = fq.spectrum(a, args.count, args.count)
    interlace_ok = True
    if s.periodic and s.antiperiodic:
        try:
            fq.check_interlacing(s)
        except HillstabError:
            interlace_ok = False
    doc = {
        "manifest": _manifest(args, "eigs", [args.coeff_file]),
        "periodic": [{"index": e.index, "value": e.value,
                      "multiplicity": e.multiplicity} for e in s.periodic],
        "antiperiodic": [{"index": e.index, "value": e.value,
                          "multiplicity": e.multiplicity}
                         for e in s.antiperiodic],
        "interlacing_ok": interlace_ok,
    }
    _emit(doc, args)
    return 0


def _conclusion_confirmed(a, cert, spec_cache) -> bool:
    """Ground-truth check of one holds=true certificate's conclusion."""
    tol = 1e-6
    if cert.theorem_id == "L1_PERIODIC_N":
        n = cert.n_or_p
        if "p" not in spec_cache:
            spec_cache["p"] = fq.periodic_eigenvalues(a, 2 * 3 + 2)
        vals = spec_cache["p"].periodic_values()
        return vals[2 * n] < tol and vals[2 * n + 1] > -tol
    if cert.theorem_id == "L1_ANTIPERIODIC_N":
        n = cert.n_or_p
        if "ap" not in spec_cache:
            spec_cache["ap"] = fq.antiperiodic_eigenvalues(a, 2 * 3 + 2)
        vals = spec_cache["ap"].antiperiodic_values()
        # antiperiodic indexing starts at 1
        return vals[2 * n - 1] < tol and vals[2 * n] > -tol
    if cert.theorem_id in ("L1_ZONE_KP", "LINF_FIRST_ZONE"):
        if "sp" not in spec_cache:
            spec_cache["sp"] = fq.spectrum(a, 4, 4)
        return fq.classify(a, 0.0, spec_cache["sp"]).kind == "Stable"
    if cert.theorem_id == "LINF_PERIODIC":
        if "p" not in spec_cache:
            spec_cache["p"] = fq.periodic_eigenvalues(a, 8)
        vals = spec_cache["p"].periodic_values()
        return vals[0] < tol and vals[1] > -tol
    if cert.theorem_id == "CLASSICAL_16T":
        return abs(fq.discriminant(a, 0.0) - 2.0) > 1e-9
    return True


def cmd_certify(args) -> int:
    a = _load_coefficient(args)
    n_list = [args.n] if args.n else [1, 2, 3]
    theorems = [args.theorem] if args.theorem else None
    certs = ly.certify_all(a, n_list=n_list, theorems=theorems)
    doc = {
        "manifest": _manifest(args, "certify", [args.coeff_file]),
        "certificates": [c.to_dict() for c in certs],
    }
    contradiction = False
    if args.verify:
        spec_cache = {}
        checks = []
        for c in certs:
            if not c.holds:
                continue
            ok = _conclusion_confirmed(a, c, spec_cache)
            checks.append({"theorem_id": c.theorem_id, "n_or_p": c.n_or_p,
                           "confirmed": ok})
            contradiction = contradiction or not ok
        if "p" in spec_cache:
            checks.append({"periodic_eigenvalues":
                           spec_cache["p"].periodic_values()})
        if "ap" in spec_cache:
            checks.append({"antiperiodic_eigenvalues":
                           spec_cache["ap"].antiperiodic_values()})
        doc["verification"] = checks
    _emit(doc, args)
    return EXIT_SOUNDNESS if contradiction else 0


def cmd_constants(args) -> int:
    rows = ly.constants_table(args.n_max, args.period)
    records = [{"n": r.n, "T": r.T,
                "lambda_2n_minus_1": r.lambda_2n_minus_1,
                "beta1": r.beta1, "gamma1": r.gamma1,
                "beta1_anti": r.beta1_anti, "gamma1_anti": r.gamma1_anti,
                "zhang": r.zhang} for r in rows]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(records[0]))
        w.writeheader()
        w.writerows(records)
        text = buf.getvalue()
        if getattr(args, "output", None):
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit({"manifest": _manifest(args, "constants", []),
               "rows": records}, args)
    return 0


def cmd_witness(args) -> int:
    if args.family == "a-eps":
        a = wt.make_a_eps(args.n, args.period, args.eps)
    else:
        a = wt.make_two_step(args.alpha, args.x0).a
    doc = a.to_dict()
    doc["manifest"] = _manifest(args, f"witness {args.family}", [])
    _emit(doc, args)
    return 0


def cmd_zeros(args) -> int:
    a = _load_coefficient(args)
    z = zr.extract_zero_structure(a, args.bc)
    doc = {"manifest": _manifest(args, "zeros", [args.coeff_file])}
    doc.update(z.to_dict())
    if args.n is not None:
        if args.bc == "periodic":
            rep = zr.check_periodic_structure(z, args.n, a.period)
        else:
            rep = zr.check_antiperiodic_structure(z, args.n, a.period)
        sub = zr.subinterval_inequality(z.shifted_coefficient, z, args.n,
                                        a.period, args.bc)
        doc["checks"] = {"structure": rep.to_dict(),
                         "subinterval_chain_ok": sub["chain_ok"],
                         "cot_sum": sub["cot_sum"],
                         "total_distance": sub["total_distance"]}
    _emit(doc, args)
    return 0


def cmd_chart(args) -> int:
    a = _load_coefficient(args)
    if not args.mu_from < args.mu_to:
        raise ParseError("--mu-from must be below --mu-to")
    import numpy as np
    mus = np.linspace(args.mu_from, args.mu_to, args.points)
    rows = []
    for mu in mus:
        d = fq.discriminant(a, float(mu))
        if abs(d) < 2 - fq.TOL_BOUNDARY:
            verdict = "Stable"
        elif abs(d) > 2 + fq.TOL_BOUNDARY:
            verdict = "Unstable"
        else:
            verdict = "Boundary"
        rows.append((float(mu), d, verdict))
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["mu", "discriminant", "verdict"])
    w.writerows(rows)
    text = buf.getvalue()
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_nonlinear(args) -> int:
    with open(args.problem_file) as fh:
        p = nl.NonlinearProblem.from_json(fh.read())
    doc = {"manifest": _manifest(args, f"nonlinear {args.action}",
                                 [args.problem_file])}
    if args.action == "check":
        certs = []
        if p.alpha_env is not None and p.beta_env is not None:
            if args.n is not None:
                certs.append(nl.check_l1_hypotheses(p, args.n))
            if abs(p.period - math.pi) <= 1e-12:
                certs.append(nl.check_linf_hypotheses(p))
        if p.u_box is not None:
            certs.append(nl.check_classical_band(p))
        doc["certificates"] = [c.to_dict() for c in certs]
    else:
        r = nl.solve_periodic(p, starts=args.starts, seed=args.seed)
        doc["unique"] = r.unique
        doc["n_converged_starts"] = r.n_converged_starts
        doc["solutions"] = [{"u0": s.u0, "du0": s.du0,
                             "residual": s.residual} for s in r.solutions]
    _emit(doc, args)
    return 0


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hillstab",
        description="Stability certification for u'' + (mu + a(x)) u = 0",
    )
    ap.add_argument("--period-override", type=float, default=None,
                    help="period for coefficient files that omit it")
    ap.add_argument("--tol-quad", type=float, default=None,
                    help="override the quadrature tolerance")
    ap.add_argument("--tol-root", type=float, default=None,
                    help="override the eigenvalue root tolerance")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eigs", help="periodic/antiperiodic eigenvalues")
    p.add_argument("coeff_file")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--bc", choices=["periodic", "antiperiodic", "both"],
                   default="both")
    p.add_argument("--output")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("certify", help="run the certification theorems")
    p.add_argument("coeff_file")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--theorem", choices=ly.THEOREM_IDS, default=None)
    p.add_argument("--verify", action="store_true",
                   help="cross-check holds=true certificates against the "
                        "computed spectrum; exit 4 on contradiction")
    p.add_argument("--output")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("constants", help="table of the optimal constants")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--period", type=float, default=2 * math.pi)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("witness", help="emit an extremal coefficient file")
    p.add_argument("family", choices=["a-eps", "two-step"])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--period", type=float, default=2 * math.pi)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("zeros", help="zero structure of the kernel solution")
    p.add_argument("coeff_file")
    p.add_argument("--bc", choices=["periodic", "antiperiodic"],
                   default="periodic")
    p.add_argument("--n", type=int, default=None,
                   help="also run the structure checks at this index")
    p.add_argument("--output")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("chart", help="discriminant sweep as CSV")
    p.add_argument("coeff_file")
    p.add_argument("--mu-from", type=float, required=True)
    p.add_argument("--mu-to", type=float, required=True)
    p.add_argument("--points", type=int, default=601)
    p.add_argument("--output")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("nonlinear", help="nonlinear periodic BVP tooling")
    p.add_argument("action", choices=["check", "solve"])
    p.add_argument("problem_file")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--output")
    p.set_defaults(func=cmd_nonlinear)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.tol_quad is not None:
        cf.QUAD_TOL = args.tol_quad
    if args.tol_root is not None:
        fq.TOL_ROOT = args.tol_root
    try:
        return args.func(args)
    except (ParseError, json.JSONDecodeError, FileNotFoundError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (RootSearchFailure, IntegrationFailure, NoConvergence) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SEARCH
    except HillstabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
