"""JSON encoding and decoding for every object the CLI passes around.

Conventions: spectral values are bare numbers for the real kinds and
``[re, im]`` pairs for normal models (parsers accept either everywhere);
infinite multiplicities are the string ``"inf"``; explicit delta sequences
carry an optional ``"terminates"`` flag (default true) distinguishing
finitely-many-eigenvalues sugar from a genuine limit point written out
term by term.  Emission is deterministic: keys sorted, compact separators,
negative zeros scrubbed, one trailing newline.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .decompose import (
    AMForm,
    Block,
    ClusterBlock,
    FredholmReport,
    PositiveTriple,
    StructuredDecomposition,
)
from .errors import ParseError
from .model import (
    ABOVE,
    BELOW,
    INF,
    KINDS,
    NORMAL,
    Cluster,
    EigenvalueEntry,
    ModuliReport,
    ANVerdict,
    SpectrumModel,
)
from .oracle import OracleReport, PerturbationReport
from .sequences import EXPLICIT, GEOMETRIC, HARMONIC, DecaySequence

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# scalar helpers


def _scrub(x: float) -> float:
    f = float(x)
    if math.isnan(f) or math.isinf(f):
        raise ParseError(f"non-finite number {f} cannot be emitted")
    return 0.0 if f == 0.0 else f


def _value_out(value: complex, kind: str | None):
    v = complex(value)
    if kind is not None and kind != NORMAL:
        return _scrub(v.real)
    return [_scrub(v.real), _scrub(v.imag)]


def _mult_out(mult):
    if mult == INF:
        return "inf"
    return int(mult)


def _require(obj, key: str, what: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise ParseError(f"{what} is missing the {key!r} field")
    return obj[key]


def _number_in(raw, what: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ParseError(f"{what} must be a number, got {raw!r}")
    return float(raw)


def _value_in(raw, what: str) -> complex:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(float(raw), 0.0)
    if (isinstance(raw, list) and len(raw) == 2
            and all(isinstance(c, (int, float)) and not isinstance(c, bool)
                    for c in raw)):
        return complex(float(raw[0]), float(raw[1]))
    raise ParseError(f"{what} must be a number or [re, im] pair, got {raw!r}")


def _mult_in(raw, what: str):
    if raw == "inf":
        return INF
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError(f"{what} must be an integer or \"inf\", got {raw!r}")
    return raw


# ---------------------------------------------------------------------------
# delta sequences


def deltas_payload(seq: DecaySequence) -> dict:
    if seq.kind == GEOMETRIC:
        return {"kind": GEOMETRIC, "first": _scrub(seq.first),
                "ratio": _scrub(seq.ratio)}
    if seq.kind == HARMONIC:
        return {"kind": HARMONIC, "scale": _scrub(seq.scale)}
    out = {"kind": EXPLICIT, "terms": [_scrub(t) for t in seq.terms_]}
    if not seq.terminating:
        out["terminates"] = False
    return out


def parse_deltas(obj) -> DecaySequence:
    kind = _require(obj, "kind", "delta sequence")
    if kind == GEOMETRIC:
        return DecaySequence.geometric(
            _number_in(_require(obj, "first", "geometric sequence"), "first"),
            _number_in(_require(obj, "ratio", "geometric sequence"), "ratio"))
    if kind == HARMONIC:
        return DecaySequence.harmonic(
            _number_in(_require(obj, "scale", "harmonic sequence"), "scale"))
    if kind == EXPLICIT:
        raw = _require(obj, "terms", "explicit sequence")
        if not isinstance(raw, list):
            raise ParseError("explicit terms must be a list")
        terms = tuple(_number_in(t, "explicit term") for t in raw)
        terminates = obj.get("terminates", True)
        if not isinstance(terminates, bool):
            raise ParseError(f"terminates must be a boolean, got {terminates!r}")
        return DecaySequence.explicit(terms, terminating=terminates)
    raise ParseError(f"unknown delta sequence kind {kind!r}")


# ---------------------------------------------------------------------------
# spectrum models


def model_payload(model: SpectrumModel) -> dict:
    return {
        "kind": model.kind,
        "points": [{"value": _value_out(p.value, model.kind),
                    "mult": _mult_out(p.mult)} for p in model.points],
        "clusters": [{"limit": _value_out(cl.limit, model.kind),
                      "side": cl.side,
                      "deltas": deltas_payload(cl.deltas)}
                     for cl in model.clusters],
    }


def parse_model(obj) -> SpectrumModel:
    kind = _require(obj, "kind", "model")
    if kind not in KINDS:
        raise ParseError(f"model kind must be one of {KINDS}, got {kind!r}")
    raw_points = obj.get("points", [])
    raw_clusters = obj.get("clusters", [])
    if not isinstance(raw_points, list) or not isinstance(raw_clusters, list):
        raise ParseError("points and clusters must be lists")
    points = []
    for rp in raw_points:
        points.append(EigenvalueEntry(
            _value_in(_require(rp, "value", "point"), "point value"),
            _mult_in(_require(rp, "mult", "point"), "point multiplicity")))
    clusters = []
    for rc in raw_clusters:
        side = _require(rc, "side", "cluster")
        if side not in (ABOVE, BELOW):
            raise ParseError(f"cluster side must be above/below, got {side!r}")
        clusters.append(Cluster(
            _value_in(_require(rc, "limit", "cluster"), "cluster limit"),
            side,
            parse_deltas(_require(rc, "deltas", "cluster"))))
    return SpectrumModel(kind, tuple(points), tuple(clusters))


# ---------------------------------------------------------------------------
# triples, structures, AM forms


def _entries_payload(entries) -> list:
    return [{"value": _scrub(e.value.real), "mult": _mult_out(e.mult)}
            for e in entries]


def _entries_in(raw, what: str):
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be a list")
    out = []
    for item in raw:
        out.append(EigenvalueEntry(
            _value_in(_require(item, "value", what), f"{what} value"),
            _mult_in(_require(item, "mult", what), f"{what} multiplicity")))
    return tuple(out)


def triple_payload(triple: PositiveTriple) -> dict:
    return {
        "alpha": _scrub(triple.alpha),
        "k": model_payload(triple.k_entries),
        "f": _entries_payload(triple.f_entries),
        "identity_multiplicity": _mult_out(triple.identity_multiplicity)
        if triple.identity_multiplicity else 0,
    }


def parse_triple(obj) -> PositiveTriple:
    alpha = _number_in(_require(obj, "alpha", "triple"), "alpha")
    k = parse_model(_require(obj, "k", "triple"))
    f = _entries_in(obj.get("f", []), "finite-rank entry")
    ident_raw = obj.get("identity_multiplicity", 0)
    ident = _mult_in(ident_raw, "identity multiplicity")
    return PositiveTriple(alpha, k, f, ident)


def amform_payload(form: AMForm) -> dict:
    return {
        "beta": _scrub(form.beta),
        "k1": model_payload(form.k1_entries),
        "f1": _entries_payload(form.f1_entries),
        "identity_multiplicity": _mult_out(form.identity_multiplicity)
        if form.identity_multiplicity else 0,
    }


def structure_payload(sd: StructuredDecomposition) -> dict:
    return {
        "alpha": _scrub(sd.alpha),
        "blocks": [{"phase": _value_out(b.phase, None),
                    "part": b.part,
                    "value": _scrub(b.value),
                    "mult": _mult_out(b.mult)} for b in sd.blocks],
        "clusters": [{"limit": _value_out(cb.limit, None),
                      "side": cb.side,
                      "deltas": deltas_payload(cb.deltas)}
                     for cb in sd.cluster_blocks],
        "kernel_multiplicity": _mult_out(sd.kernel_multiplicity)
        if sd.kernel_multiplicity else 0,
    }


def parse_structure(obj) -> StructuredDecomposition:
    alpha = _number_in(_require(obj, "alpha", "structure"), "alpha")
    raw_blocks = obj.get("blocks", [])
    raw_clusters = obj.get("clusters", [])
    if not isinstance(raw_blocks, list) or not isinstance(raw_clusters, list):
        raise ParseError("blocks and clusters must be lists")
    blocks = []
    for rb in raw_blocks:
        part = _require(rb, "part", "block")
        if part not in ("k", "f", "identity"):
            raise ParseError(f"block part must be k/f/identity, got {part!r}")
        blocks.append(Block(
            _value_in(_require(rb, "phase", "block"), "block phase"),
            part,
            _number_in(_require(rb, "value", "block"), "block value"),
            _mult_in(_require(rb, "mult", "block"), "block multiplicity")))
    cluster_blocks = []
    for rc in raw_clusters:
        side = _require(rc, "side", "cluster block")
        if side not in (ABOVE, BELOW):
            raise ParseError(f"cluster side must be above/below, got {side!r}")
        cluster_blocks.append(ClusterBlock(
            _value_in(_require(rc, "limit", "cluster block"), "cluster limit"),
            side,
            parse_deltas(_require(rc, "deltas", "cluster block"))))
    kern = _mult_in(obj.get("kernel_multiplicity", 0), "kernel multiplicity")
    return StructuredDecomposition(alpha, tuple(blocks), tuple(cluster_blocks), kern)


# ---------------------------------------------------------------------------
# matrices


def matrix_payload(m) -> list:
    return [[[_scrub(c.real), _scrub(c.imag)] for c in row] for row in m]


def parse_matrix(obj):
    if not isinstance(obj, list) or not obj:
        raise ParseError("matrix must be a nonempty list of rows")
    rows = []
    for raw_row in obj:
        if not isinstance(raw_row, list) or len(raw_row) != len(obj):
            raise ParseError("matrix must be square")
        rows.append([_value_in(c, "matrix entry") for c in raw_row])
    return np.array(rows, dtype=np.complex128)


# ---------------------------------------------------------------------------
# report payloads


def verdict_payload(verdict: ANVerdict, moduli: ModuliReport) -> dict:
    return {
        "is_an": verdict.is_an,
        "violations": list(verdict.violations),
        "moduli": {
            "operator_norm": _scrub(moduli.operator_norm),
            "min_modulus": _scrub(moduli.min_modulus),
            "essential_min_modulus": _scrub(moduli.essential_min_modulus),
            "norm_attained": moduli.norm_attained,
            "finite_dim": moduli.finite_dim,
        },
    }


def fredholm_payload(report: FredholmReport) -> dict:
    return {
        "kernel_dimension": _mult_out(report.kernel_dimension)
        if report.kernel_dimension else 0,
        "range_closed": report.range_closed,
        "is_fredholm": report.is_fredholm,
        "is_left_semi_fredholm": report.is_left_semi_fredholm,
        "essential_min_modulus": _scrub(report.essential_min_modulus),
        "is_injective": report.is_injective,
    }


def oracle_payload(report: OracleReport) -> dict:
    return {
        "is_an": report.is_an,
        "failures": [{"kind": f.kind,
                      "witness": [_scrub(w) for w in f.witness],
                      "detail": f.detail} for f in report.failures],
        "subsets_checked": report.subsets_checked,
        "pairs_checked": report.pairs_checked,
    }


def perturbation_payload(report: PerturbationReport) -> dict:
    return {
        "within_bound": report.within_bound,
        "max_count_gap": report.max_count_gap,
        "rank_detected": report.rank_detected,
        "grid_lo": _scrub(report.grid_lo),
        "grid_hi": _scrub(report.grid_hi),
    }


def verification_payload(report) -> dict:
    return {
        "ok": report.ok,
        "mode": report.mode,
        "recombination_residual": _scrub(report.recombination_residual),
        "kf_residual": _scrub(report.kf_residual),
        "k_hermitian_defect": _scrub(report.k_hermitian_defect),
        "f_hermitian_defect": _scrub(report.f_hermitian_defect),
        "k_psd_defect": _scrub(report.k_psd_defect),
        "f_psd_defect": _scrub(report.f_psd_defect),
        "f_bound_defect": _scrub(report.f_bound_defect),
        "normality_defect": _scrub(report.normality_defect),
        "partial_isometry_defect": _scrub(report.partial_isometry_defect),
        "off_diagonal_norm": _scrub(report.off_diagonal_norm),
        "witness_min_eig": _scrub(report.witness_min_eig),
        "failures": list(report.failures),
    }


def witness_payload(report) -> dict:
    return {
        "identity_residual": _scrub(report.identity_residual),
        "partial_isometry_defect": _scrub(report.partial_isometry_defect),
        "script_k_min_eig": _scrub(report.script_k_min_eig),
        "script_f_min_eig": _scrub(report.script_f_min_eig),
        "an_predicted": report.an_predicted,
    }


# ---------------------------------------------------------------------------
# report envelope


def report(command: str, result, diagnostics=()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": result,
        "diagnostics": list(diagnostics),
    }


def emit(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
