"""Command-line front end.

Subcommands: classify, decompose, generate, project, verify.  Matrices
travel as Matrix Market 'array complex general' files; each command prints a
single JSON report on stdout (schema version 1) and human-readable
diagnostics on stderr.  Exit codes: 0 success with all residuals within
--tol, 1 usage or I/O error, 2 structure violation or failed residual check.

Every residual in a report is recomputed from the emitted factors at
reporting time, never cached from intermediate stages.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import canonical as canon
from .projector import idempotency_residual, projector, projector_svd
from .errors import InvolSvdError, MatrixFormatError, StructureViolationError
from .generators import gen_structured
from .mmio import read_matrix, write_matrix, write_values
from .structures import ClassificationReport, GeneratorSpec, StructureClass, classify
from .structured_svd import StructuredSvd, extract_T, restructure

SCHEMA_VERSION = 1

_PREFERENCE = [
    StructureClass.INVOLUTORY,
    StructureClass.SKEW_INVOLUTORY,
    StructureClass.CONINVOLUTORY,
    StructureClass.SKEW_CONINVOLUTORY,
]
_CLASS_FLAGS = {c.value: c for c in _PREFERENCE}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="involsvd", description=__doc__.split("\n", 1)[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_class=True):
        p.add_argument("--tol", type=float, default=1e-10, help="acceptance tolerance")
        if with_class:
            p.add_argument(
                "--class",
                dest="structure",
                choices=["auto"] + list(_CLASS_FLAGS),
                default="auto",
                help="structure class (auto picks the best accepted one)",
            )

    p = sub.add_parser("classify", help="report structure residuals")
    p.add_argument("matrix")
    common(p, with_class=False)

    p = sub.add_parser("decompose", help="structure-revealing SVD and canonical form")
    p.add_argument("matrix")
    common(p)
    p.add_argument("--out", help="directory for factor files (U, V, T, sigma)")

    p = sub.add_parser("generate", help="random structured matrix with ground truth")
    common(p, with_class=False)
    p.add_argument(
        "--class",
        dest="structure",
        choices=list(_CLASS_FLAGS),
        required=True,
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--sigmas", default="", help="comma-separated values > 1")
    p.add_argument("--eta1", type=int, default=0)
    p.add_argument("--eta2", type=int, default=0)
    p.add_argument("--phases", default=None, help="comma-separated phases (coninvolutory)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("project", help="SVD of the idempotent (I +- A)/2")
    p.add_argument("matrix")
    common(p, with_class=False)
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.add_argument("--out", help="directory for factor files")

    p = sub.add_parser("verify", help="full pipeline with every residual rechecked")
    p.add_argument("matrix")
    common(p)
    return parser


def _emit(report) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _input_digest(path, a) -> dict:
    with open(path, "rb") as handle:
        digest = hashlib.sha256(handle.read()).hexdigest()
    return {
        "path": str(path),
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "frobenius_norm": float(np.linalg.norm(a)),
        "sha256": digest,
    }


def _residuals_json(report: ClassificationReport) -> dict:
    return {c.value: float(r) for c, r in report.residuals.items()}


def _resolve_class(report: ClassificationReport, requested: str) -> StructureClass:
    if requested != "auto":
        structure = _CLASS_FLAGS[requested]
        if structure not in report.accepted:
            extra = ""
            if (
                structure is StructureClass.SKEW_CONINVOLUTORY
                and len(report.residuals) == 4
            ):
                extra = " (skew-coninvolutory matrices exist only for even dimension)"
            raise StructureViolationError(
                f"matrix is not {structure.value} at tolerance {report.tol:g}{extra}",
                residual=report.residuals[structure],
            )
        return structure
    if not report.accepted:
        raise StructureViolationError(
            "matrix matches no structure class at tolerance "
            f"{report.tol:g} (best residual {min(report.residuals.values()):.3e})"
        )
    return min(
        report.accepted,
        key=lambda c: (report.residuals[c], _PREFERENCE.index(c)),
    )


def _blocks_json(ssvd: StructuredSvd) -> list:
    out = []
    for b in ssvd.blocks:
        entry = {"kind": b.kind, "columns": list(b.columns), "sigma": float(b.sigma)}
        if b.sign is not None:
            entry["sign"] = int(b.sign)
        if b.phase is not None:
            entry["phase"] = float(b.phase)
        out.append(entry)
    return out


def _pairing_defect(sigma: np.ndarray) -> float:
    s = np.sort(np.asarray(sigma, dtype=float))[::-1]
    return float(np.max(np.abs(s * s[::-1] - 1.0))) if s.size else 0.0


def _analysis_payload(a, ssvd: StructuredSvd, tol: float, with_oracle: bool = False) -> dict:
    """Recompute every reported residual from scratch."""
    n = ssvd.dim
    norm_a = max(1.0, float(np.linalg.norm(a)))
    fresh_classify = classify(a, tol)
    residuals = {
        "classification": float(fresh_classify.residuals[ssvd.structure]),
        "reconstruction": float(np.linalg.norm(a - ssvd.reconstruct())) / (n * norm_a),
        "pairing": _pairing_defect(ssvd.sigma),
    }
    t_fresh = extract_T(ssvd.u, ssvd.v, ssvd.structure, tol)
    base = ssvd.v.conj() if ssvd.structure.is_con else ssvd.v
    residuals["coupling"] = float(np.linalg.norm(ssvd.u - base @ t_fresh)) / n

    form = canon.canonical_form(ssvd)
    residuals["canonical"] = canon.canonical_residual(a, form)
    closure = ssvd.structure in classify(form.t_sigma, max(tol, 1e-8)).accepted

    checks = {
        "canonical_class_closure": bool(closure),
        "coupling_pattern_match": bool(np.allclose(t_fresh, ssvd.t)),
    }

    if ssvd.structure in (StructureClass.INVOLUTORY, StructureClass.SKEW_INVOLUTORY):
        eig = canon.eigendecompose(ssvd)
        residuals["eigen"] = canon.eigen_residual(a, eig) / (
            n * norm_a * max(1.0, float(np.linalg.norm(eig.x)))
        )
        trace = complex(np.trace(a))
        imbalance = trace.imag if ssvd.structure.is_skew else trace.real
        checks["eigen_counts_consistent"] = eig.n_plus - eig.n_minus == round(imbalance)
        if with_oracle and ssvd.structure is StructureClass.INVOLUTORY:
            from .projector import householder_singular_values

            vals = householder_singular_values(a, tol)
            reference = np.sort(np.asarray(ssvd.sigma))[::-1]
            residuals["oracle"] = float(
                np.max(np.abs(vals - reference) / np.maximum(reference, 1e-30))
            ) / max(1.0, float(reference[0]))
    elif ssvd.structure is StructureClass.CONINVOLUTORY:
        s = canon.consim_to_identity(ssvd)
        cond = float(np.linalg.cond(s))
        residuals["consimilarity"] = canon.consimilarity_residual(a, s) / (
            n * norm_a * max(1.0, cond)
        )
        singles = canon.coneigen_singles(ssvd)
        worst = 0.0
        for q, _ in singles:
            worst = max(worst, float(np.linalg.norm(a @ q.conj() - q)))
        residuals["coneigen"] = worst / n
    else:
        z = canon.consim_to_minusJ(ssvd)
        cond = float(np.linalg.cond(z))
        residuals["consimilarity"] = canon.minusj_residual(a, z) / (
            n * norm_a * max(1.0, cond)
        )

    payload = {
        "class": ssvd.structure.value,
        "classification_residuals": _residuals_json(fresh_classify),
        "counts": {
            "nu": ssvd.counts.nu,
            "mu": ssvd.counts.mu,
            "delta": ssvd.counts.delta,
            "eta": ssvd.counts.eta,
            "eta1": ssvd.counts.eta1,
            "eta2": ssvd.counts.eta2,
        },
        "sigma": [float(s) for s in ssvd.sigma],
        "blocks": _blocks_json(ssvd),
        "residuals": residuals,
        "checks": checks,
        "passed": bool(
            all(checks.values()) and all(v <= tol for v in residuals.values())
        ),
    }
    return payload


def _write_factors(out_dir, ssvd: StructuredSvd) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    files = {
        "U": os.path.join(out_dir, "U.mtx"),
        "V": os.path.join(out_dir, "V.mtx"),
        "T": os.path.join(out_dir, "T.mtx"),
        "sigma": os.path.join(out_dir, "sigma.txt"),
    }
    write_matrix(files["U"], ssvd.u)
    write_matrix(files["V"], ssvd.v)
    write_matrix(files["T"], ssvd.t)
    write_values(files["sigma"], ssvd.sigma)
    return files


def cmd_classify(args) -> int:
    a = read_matrix(args.matrix)
    report = classify(a, args.tol)
    _emit(
        {
            "schema": SCHEMA_VERSION,
            "command": "classify",
            "input": _input_digest(args.matrix, a),
            "tol": args.tol,
            "residuals": _residuals_json(report),
            "accepted": sorted(c.value for c in report.accepted),
        }
    )
    if not report.accepted:
        print("no structure class accepted", file=sys.stderr)
        return 2
    return 0


def _run_pipeline(args, command: str) -> int:
    a = read_matrix(args.matrix)
    report = classify(a, args.tol)
    structure = _resolve_class(report, args.structure)
    ssvd = restructure(a, structure, args.tol)
    payload = _analysis_payload(a, ssvd, args.tol, with_oracle=command == "verify")
    out = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "input": _input_digest(args.matrix, a),
        "tol": args.tol,
        **payload,
    }
    if getattr(args, "out", None):
        out["files"] = _write_factors(args.out, ssvd)
    _emit(out)
    if not payload["passed"]:
        print("residual checks failed", file=sys.stderr)
        return 2
    return 0


def cmd_decompose(args) -> int:
    return _run_pipeline(args, "decompose")


def cmd_verify(args) -> int:
    return _run_pipeline(args, "verify")


def _parse_floats(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise _UsageError(f"cannot parse float list {text!r}") from None


def cmd_generate(args) -> int:
    structure = _CLASS_FLAGS[args.structure]
    spec = GeneratorSpec(
        n=args.n,
        nu=args.nu,
        sigmas=_parse_floats(args.sigmas) or (),
        eta1=args.eta1,
        eta2=args.eta2,
        phases=_parse_floats(args.phases),
        seed=args.seed,
    )
    a, truth = gen_structured(structure, spec)
    os.makedirs(args.out, exist_ok=True)
    matrix_path = os.path.join(args.out, "A.mtx")
    write_matrix(matrix_path, a)
    files = _write_factors(args.out, truth)
    files["A"] = matrix_path
    with open(matrix_path, "rb") as handle:
        digest = hashlib.sha256(handle.read()).hexdigest()
    fresh = classify(a, args.tol)
    _emit(
        {
            "schema": SCHEMA_VERSION,
            "command": "generate",
            "class": structure.value,
            "seed": args.seed,
            "tol": args.tol,
            "output": {
                "path": matrix_path,
                "rows": int(a.shape[0]),
                "cols": int(a.shape[1]),
                "frobenius_norm": float(np.linalg.norm(a)),
                "sha256": digest,
            },
            "counts": {
                "nu": truth.counts.nu,
                "mu": truth.counts.mu,
                "delta": truth.counts.delta,
                "eta": truth.counts.eta,
                "eta1": truth.counts.eta1,
                "eta2": truth.counts.eta2,
            },
            "sigma": [float(s) for s in truth.sigma],
            "blocks": _blocks_json(truth),
            "residuals": {
                "classification": float(fresh.residuals[structure]),
                "reconstruction": float(np.linalg.norm(a - truth.reconstruct()))
                / (truth.dim * max(1.0, float(np.linalg.norm(a)))),
            },
            "files": files,
        }
    )
    return 0


def cmd_project(args) -> int:
    a = read_matrix(args.matrix)
    sign = 1 if args.sign == "+" else -1
    b = projector(a, sign, args.tol)  # classify gate lives here
    ssvd = restructure(a, StructureClass.INVOLUTORY, args.tol)
    psvd = projector_svd(ssvd, sign)
    n = a.shape[0]
    scale = n * max(1.0, float(np.linalg.norm(b)))
    kernel_sigma = np.sort(psvd.svd.sigma)[::-1]
    from .kernel import svd as kernel_svd

    reference = kernel_svd(b).sigma
    residuals = {
        "idempotency": idempotency_residual(b),
        "reconstruction": float(np.linalg.norm(b - psvd.svd.reconstruct())) / scale,
        "kernel_agreement": float(np.max(np.abs(kernel_sigma - reference)))
        / max(1.0, float(reference[0])),
    }
    out = {
        "schema": SCHEMA_VERSION,
        "command": "project",
        "input": _input_digest(args.matrix, a),
        "tol": args.tol,
        "sign": args.sign,
        "sigma": [float(s) for s in psvd.svd.sigma],
        "residuals": residuals,
        "passed": bool(all(v <= args.tol for v in residuals.values())),
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        files = {
            "B": os.path.join(args.out, "B.mtx"),
            "U": os.path.join(args.out, "U.mtx"),
            "V": os.path.join(args.out, "V.mtx"),
            "sigma": os.path.join(args.out, "sigma.txt"),
        }
        write_matrix(files["B"], b)
        write_matrix(files["U"], psvd.svd.u)
        write_matrix(files["V"], psvd.svd.v)
        write_values(files["sigma"], psvd.svd.sigma)
        out["files"] = files
    _emit(out)
    if not out["passed"]:
        print("residual checks failed", file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "generate": cmd_generate,
    "project": cmd_project,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (StructureViolationError,) as exc:
        print(f"structure violation: {exc}", file=sys.stderr)
        return 2
    except InvolSvdError as exc:
        if isinstance(exc, MatrixFormatError) or isinstance(exc, ValueError):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
