"""JSON encodings of complex numbers, algebra elements, matrices and problem specs.

Complex numbers are ``[re, im]`` pairs (a bare number is accepted as real).
Elements are encoded per algebra:

* Laurent: ``[[degree, re, im], ...]``
* polynomial in the generator: ``[[re, im], ...]`` by ascending degree
* pointwise: ``[[re, im], ...]``, one pair per slot

A matrix over the algebra is ``{"matrix": [[element, ...], ...]}`` (row-major).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algebra import Algebra, Element, LaurentAlgebra, OperatorAlgebra, PointwiseAlgebra, matrix
from .fredholm import FredholmModule, make_commuting_module, make_pointwise_module, make_toeplitz_module


class SpecError(ValueError):
    """Malformed problem specification; ``where`` locates the offending part."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


TASKS = ("character", "branch", "verify")


def parse_complex(v: Any, where: str) -> complex:
    if isinstance(v, bool):
        raise SpecError(where, "expected a number or [re, im]")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                                   for x in v):
        return complex(v[0], v[1])
    raise SpecError(where, f"expected a number or [re, im], got {json.dumps(v)[:40]}")


def parse_dense(v: Any, where: str) -> np.ndarray:
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise SpecError(where, "expected a non-empty list of rows")
    n = len(v)
    if any(len(r) != n for r in v):
        raise SpecError(where, "matrix must be square")
    return np.array([[parse_complex(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)]
                     for i, r in enumerate(v)], dtype=complex)


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    # normalise negative zero so equal values serialise identically
    return [z.real + 0.0, z.imag + 0.0]


def encode_dense(M: np.ndarray) -> list:
    return [[encode_complex(x) for x in row] for row in np.asarray(M)]


def parse_algebra(v: Any) -> Algebra:
    where = "algebra"
    if not isinstance(v, dict) or "type" not in v:
        raise SpecError(where, 'expected an object with a "type"')
    kind = v["type"]
    if kind == "laurent":
        return LaurentAlgebra()
    if kind == "operator":
        if "generator" not in v:
            raise SpecError(where, 'operator algebra needs a "generator" matrix')
        return OperatorAlgebra(parse_dense(v["generator"], "algebra.generator"))
    if kind == "pointwise":
        k = v.get("k")
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise SpecError("algebra.k", "expected a positive integer")
        return PointwiseAlgebra(k)
    raise SpecError("algebra.type", f"unknown algebra {kind!r} (laurent, operator, pointwise)")


def parse_element(v: Any, algebra: Algebra, where: str) -> Element:
    if not isinstance(v, list):
        raise SpecError(where, "expected a list")
    if isinstance(algebra, LaurentAlgebra):
        coeffs: dict[int, complex] = {}
        for i, term in enumerate(v):
            if (not isinstance(term, list) or len(term) != 3 or not isinstance(term[0], int)
                    or isinstance(term[0], bool)):
                raise SpecError(f"{where}[{i}]", "expected [degree, re, im]")
            coeffs[term[0]] = coeffs.get(term[0], 0) + parse_complex(term[1:], f"{where}[{i}]")
        return algebra.element(coeffs)
    values = [parse_complex(x, f"{where}[{i}]") for i, x in enumerate(v)]
    if isinstance(algebra, PointwiseAlgebra):
        if len(values) != algebra.k:
            raise SpecError(where, f"expected {algebra.k} slots, got {len(values)}")
        return algebra.vector(values)
    if isinstance(algebra, OperatorAlgebra):
        return algebra.poly(values)
    raise SpecError(where, f"cannot parse elements of {algebra!r}")


def parse_entry(v: Any, algebra: Algebra, where: str) -> Element:
    """An algebra element (a 1x1 matrix) or ``{"matrix": rows}``."""
    if isinstance(v, dict):
        if set(v) != {"matrix"}:
            raise SpecError(where, 'expected {"matrix": rows}')
        rows = v["matrix"]
        if not isinstance(rows, list) or not rows or any(not isinstance(r, list) or len(r) != len(rows)
                                                          for r in rows):
            raise SpecError(f"{where}.matrix", "expected a non-empty square grid")
        return matrix([[parse_element(x, algebra, f"{where}.matrix[{i}][{j}]") for j, x in enumerate(r)]
                       for i, r in enumerate(rows)], algebra)
    return parse_element(v, algebra, where)


def encode_element(x: Element) -> Any:
    alg = x.algebra
    if isinstance(alg, LaurentAlgebra):
        return [[d, *encode_complex(c)] for d, c in sorted(x.coeffs.items())]
    if isinstance(alg, PointwiseAlgebra):
        return [encode_complex(v) for v in alg.values(x)]
    if isinstance(alg, OperatorAlgebra):
        top = max(x.coeffs, default=-1)
        return [encode_complex(x.coeffs.get(d, 0)) for d in range(top + 1)]
    raise TypeError(f"no encoding for {alg!r}")


def parse_module(v: Any, algebra: Algebra, p: int) -> FredholmModule:
    where = "module"
    if not isinstance(v, dict) or "type" not in v:
        raise SpecError(where, 'expected an object with a "type"')
    kind = v["type"]
    if kind == "toeplitz":
        if not isinstance(algebra, LaurentAlgebra):
            raise SpecError(where, "the Toeplitz module needs the laurent algebra")
        N = v.get("N")
        if not isinstance(N, int) or isinstance(N, bool) or N < 1:
            raise SpecError("module.N", "expected a positive integer window")
        return make_toeplitz_module(N, p)
    if kind == "commuting":
        if not isinstance(algebra, OperatorAlgebra):
            raise SpecError(where, "the commuting module needs the operator algebra")
        P = parse_dense(v.get("projection"), "module.projection")
        if P.shape != algebra.generator.shape:
            raise SpecError("module.projection", "projection and generator sizes differ")
        module = make_commuting_module(algebra.generator, P, p)
        # keep the parsed algebra so symbol entries match the module
        module.algebra = algebra
        module._rep = algebra.evaluate
        return module
    if kind == "pointwise":
        if not isinstance(algebra, PointwiseAlgebra):
            raise SpecError(where, "the pointwise module needs the pointwise algebra")
        P = parse_dense(v.get("projection"), "module.projection")
        basis = parse_dense(v["basis"], "module.basis") if "basis" in v else None
        if P.shape[0] != algebra.k:
            raise SpecError("module.projection", f"expected a {algebra.k}x{algebra.k} projection")
        return make_pointwise_module(P, basis, p)
    raise SpecError("module.type", f"unknown module {kind!r} (toeplitz, commuting, pointwise)")


@dataclass
class ProblemSpec:
    task: str
    algebra: Algebra | None = None
    module: FredholmModule | None = None
    symbol: list[Element] = field(default_factory=list)
    branch_index: int | None = None
    branch_alt: Element | None = None
    tolerances: dict[str, float] = field(default_factory=dict)
    suite: str = "all"
    instances: int = 20
    echo: dict = field(default_factory=dict)


DEFAULT_TOLERANCES = {"residual": 1e-9, "lattice": 1e-6, "exp": 1e-10}


def parse_spec(doc: Any, task: str | None = None) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise SpecError("$", "expected a JSON object")
    task = task or doc.get("task", "character")
    if isinstance(task, dict):
        task = task.get("type")
    if task not in TASKS:
        raise SpecError("task", f"unknown task {task!r} ({', '.join(TASKS)})")
    tols = dict(DEFAULT_TOLERANCES)
    for k, v in (doc.get("tolerances") or {}).items():
        if k not in tols or not isinstance(v, (int, float)) or isinstance(v, bool) or v < 0:
            raise SpecError(f"tolerances.{k}", "unknown tolerance or not a non-negative number")
        tols[k] = float(v)
    spec = ProblemSpec(task, tolerances=tols, echo={"task": task})
    if task == "verify":
        spec.suite = doc.get("suite", "all")
        inst = doc.get("instances", 20)
        if not isinstance(inst, int) or isinstance(inst, bool) or inst < 1:
            raise SpecError("instances", "expected a positive integer")
        spec.instances = inst
        return spec
    for key in ("algebra", "module", "symbol"):
        if key not in doc:
            raise SpecError(key, "missing")
    algebra = parse_algebra(doc["algebra"])
    raw_symbol = doc["symbol"]
    if not isinstance(raw_symbol, list) or not raw_symbol or len(raw_symbol) % 2:
        raise SpecError("symbol", "expected a list of 2p entries")
    p = len(raw_symbol) // 2
    if "p" in doc and doc["p"] != p:
        raise SpecError("p", f"symbol has {len(raw_symbol)} entries, so p = {p}, not {doc['p']}")
    spec.algebra = algebra
    spec.symbol = [parse_entry(v, algebra, f"symbol[{i}]") for i, v in enumerate(raw_symbol)]
    spec.module = parse_module(doc["module"], algebra, p)
    spec.echo.update({"p": p, "module": doc["module"].get("type"), "algebra": doc["algebra"].get("type")})
    if task == "branch":
        b = doc.get("branch")
        if not isinstance(b, dict) or "index" not in b or "alt_log" not in b:
            raise SpecError("branch", 'expected {"index": i, "alt_log": entry}')
        idx = b["index"]
        if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < 2 * p:
            raise SpecError("branch.index", f"expected an integer in [0, {2 * p})")
        spec.branch_index = idx
        spec.branch_alt = parse_entry(b["alt_log"], algebra, "branch.alt_log")
        spec.echo["branch_index"] = idx
    return spec
