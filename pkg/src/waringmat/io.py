"""JSON reading and writing.

Matrices are arrays of rows of ``"p/q"`` strings. A decomposition file is an
object with ``n, q, lambdas, alphas, T, A1..A3, S1..S3`` and a ``report``;
polynomial results add ``f``, ``constant``, ``p``, ``witness`` and ``tuples``.
``verify_document`` works from the JSON alone.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Union

from .constructions import ModelSpectrum, certifies, model_matrix
from .matrix import Matrix
from .ncpoly import evaluate, parse as parse_polynomial
from .pipeline import DiagonalWitness, PolynomialDecomposition
from .scalar import parse_scalar, render_scalar
from .waring import Coefficients, Decomposition, Report

PathLike = Union[str, Path]


def read_json(path: PathLike) -> Any:
    if str(path) == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(obj: Any, path: PathLike) -> None:
    text = json.dumps(obj, indent=1)
    if str(path) == "-":
        sys.stdout.write(text + "\n")
        return
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_matrix(path: PathLike) -> Matrix:
    return Matrix.from_json(read_json(path))


def read_matrices(path: PathLike) -> list[Matrix]:
    obj = read_json(path)
    if not isinstance(obj, list) or not obj:
        raise ValueError("expected a non-empty array of matrices")
    return [Matrix.from_json(m) for m in obj]


def decomposition_to_json(d: Decomposition) -> dict:
    out = {
        "n": d.spec.n,
        "q": d.spec.q,
        "lambdas": [render_scalar(x) for x in d.spec.lambdas],
        "alphas": d.coeffs.to_json(),
        "T": d.T.to_json(),
    }
    for i, A in enumerate(d.A, start=1):
        out[f"A{i}"] = A.to_json()
    for i, S in enumerate(d.S, start=1):
        out[f"S{i}"] = S.to_json()
    out["report"] = d.report.to_json()
    return out


def witness_to_json(w: DiagonalWitness) -> dict:
    return {
        "f": str(w.f),
        "p": w.p,
        "args": [a.to_json() for a in w.args],
        "value": w.value.to_json(),
        "spectrum": [render_scalar(x) for x in w.spectrum],
        "attempt": w.attempt,
    }


def polynomial_result_to_json(r: PolynomialDecomposition) -> dict:
    out = decomposition_to_json(r.decomposition)
    for i, img in enumerate(r.images, start=1):
        out[f"A{i}"] = img.to_json()
    out["f"] = str(r.f)
    out["constant"] = render_scalar(r.constant)
    out["p"] = r.prime.p
    out["witness"] = witness_to_json(r.witness)
    out["tuples"] = {f"A{i}": [a.to_json() for a in tup] for i, tup in enumerate(r.tuples, start=1)}
    report = dict(out["report"])
    report.update({k: ("PASS" if v else "FAIL") for k, v in r.check().items()})
    out["report"] = report
    return out


def verify_document(doc: dict) -> Report:
    """Re-check a decomposition file using only its contents."""
    report = Report()
    try:
        n = int(doc["n"])
        spec = ModelSpectrum(n, int(doc["q"]), tuple(parse_scalar(x) for x in doc["lambdas"]))
        report.add("spec_valid", True)
    except (KeyError, TypeError, ValueError) as exc:
        report.add("spec_valid", False, str(exc))
        return report
    try:
        coeffs = Coefficients.of([parse_scalar(x) for x in doc["alphas"]])
        report.add("alphas_valid", True)
    except (KeyError, TypeError, ValueError) as exc:
        report.add("alphas_valid", False, str(exc))
        return report
    try:
        T = Matrix.from_json(doc["T"])
        A = [Matrix.from_json(doc[f"A{i}"]) for i in (1, 2, 3)]
        S = [Matrix.from_json(doc[f"S{i}"]) for i in (1, 2, 3)]
    except (KeyError, TypeError, ValueError) as exc:
        report.add("matrices_readable", False, str(exc))
        return report
    shapes = T.shape == (n, n) and all(m.shape == (n, n) for m in A + S)
    report.add("shapes", shapes)
    if not shapes:
        return report
    tr = T.trace()
    report.add("trace_zero", tr == 0, f"trace {render_scalar(tr)}")
    a1, a2, a3 = coeffs
    report.add("linear_combination", A[0].scale(a1) + A[1].scale(a2) + A[2].scale(a3) == T)
    constant = parse_scalar(doc.get("constant", "0"))
    shift = Matrix.identity(n).scale(constant)
    D = model_matrix(spec)
    for i, (a, s) in enumerate(zip(A, S), start=1):
        report.add(f"witness_A{i}", certifies(s, a - shift, D))
    if "f" in doc:
        try:
            f = parse_polynomial(doc["f"])
            tuples = doc["tuples"]
            for i, a in enumerate(A, start=1):
                args = [Matrix.from_json(m) for m in tuples[f"A{i}"]]
                report.add(f"image_A{i}", evaluate(f, args) == a)
        except (KeyError, TypeError, ValueError) as exc:
            report.add("polynomial_tuples", False, str(exc))
    return report
