"""Finitely presented operator spectra and the norm-attainment classifier.

A :class:`SpectrumModel` describes the spectrum of a bounded operator on a
separable Hilbert space by a finite list of eigenvalue entries plus a finite
list of accumulation clusters.  The classifier decides membership in the
class of absolutely norm-attaining operators: the restriction of the
operator to every nonzero closed subspace attains its norm.  For positive
(and, via the modulus reduction, self-adjoint and normal) operators this is
equivalent to four checkable spectral conditions:

1. every subset of the modulus spectrum has an attained supremum,
2. at most one limit point, approached from above,
3. at most one eigenvalue of infinite multiplicity,
4. a limit point and an infinite-multiplicity value must coincide.

Violations are reported with one code per failed condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MalformedModelError
from .sequences import DecaySequence, MATERIALIZE_DEPTH, merge_sequences

INF = math.inf

POSITIVE = "positive"
SELF_ADJOINT = "selfadjoint"
NORMAL = "normal"
KINDS = (POSITIVE, SELF_ADJOINT, NORMAL)

ABOVE = "above"
BELOW = "below"

NEGATIVE_VALUE = "NEGATIVE_VALUE"
MULTIPLE_LIMIT_POINTS = "MULTIPLE_LIMIT_POINTS"
LIMIT_FROM_BELOW = "LIMIT_FROM_BELOW"
MULTIPLE_INFINITE_MULTIPLICITIES = "MULTIPLE_INFINITE_MULTIPLICITIES"
LIMIT_NEQ_INFINITE_MULT = "LIMIT_NEQ_INFINITE_MULT"

#: Canonical report order for violation codes.
VIOLATION_ORDER = (
    NEGATIVE_VALUE,
    MULTIPLE_LIMIT_POINTS,
    LIMIT_FROM_BELOW,
    MULTIPLE_INFINITE_MULTIPLICITIES,
    LIMIT_NEQ_INFINITE_MULT,
)

#: Absolute tolerance at which two presented spectral values are the same.
MERGE_TOL = 1e-9

_REAL_KINDS = (POSITIVE, SELF_ADJOINT)
_IMAG_SLACK = 1e-15


def _as_value(value, kind: str) -> complex:
    v = complex(value)
    if kind in _REAL_KINDS:
        if abs(v.imag) > _IMAG_SLACK * max(1.0, abs(v.real)):
            raise MalformedModelError(
                f"kind {kind!r} requires real spectral values, got {v}")
        v = complex(v.real, 0.0)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise MalformedModelError(f"spectral value {v} is not finite")
    return v


def _as_mult(mult, minimum: int = 1):
    if mult == INF:
        return INF
    if isinstance(mult, bool) or not isinstance(mult, int):
        raise MalformedModelError(f"multiplicity {mult!r} must be a positive integer or inf")
    if mult < minimum:
        raise MalformedModelError(f"multiplicity {mult} must be >= {minimum}")
    return mult


@dataclass(frozen=True)
class EigenvalueEntry:
    """One eigenvalue with its multiplicity (a positive integer or ``inf``)."""

    value: complex
    mult: float  # int >= 1 or math.inf

    def is_infinite(self) -> bool:
        return self.mult == INF


@dataclass(frozen=True)
class Cluster:
    """An accumulation of eigenvalues ``limit + delta_n`` (above) or
    ``limit - delta_n`` (below), deltas strictly decreasing to zero."""

    limit: complex
    side: str
    deltas: DecaySequence

    def members(self, depth: int) -> tuple[complex, ...]:
        sign = 1.0 if self.side == ABOVE else -1.0
        return tuple(self.limit + sign * d for d in self.deltas.terms(depth))


@dataclass(frozen=True)
class SpectrumModel:
    kind: str
    points: tuple[EigenvalueEntry, ...] = ()
    clusters: tuple[Cluster, ...] = ()


@dataclass(frozen=True)
class ANVerdict:
    """Classifier output: membership flag, violation codes, and the positive
    modulus spectrum the decision was made on."""

    is_an: bool
    violations: tuple[str, ...]
    modulus_collapsed: SpectrumModel


@dataclass(frozen=True)
class ModuliReport:
    operator_norm: float
    min_modulus: float
    essential_min_modulus: float
    norm_attained: bool
    finite_dim: bool


# ---------------------------------------------------------------------------
# normalization


def _validate_cluster(cl: Cluster, kind: str) -> Cluster:
    limit = _as_value(cl.limit, kind)
    if cl.side not in (ABOVE, BELOW):
        raise MalformedModelError(f"cluster side {cl.side!r} must be above/below")
    if not isinstance(cl.deltas, DecaySequence):
        raise MalformedModelError("cluster deltas must be a DecaySequence")
    # Members may touch zero but not cross it: crossing would break the
    # monotone modulus picture every downstream map relies on.
    r = limit.real
    head = cl.deltas.head
    if cl.side == ABOVE and r < 0 and head > -r + MERGE_TOL:
        raise MalformedModelError(
            f"above-side deltas (head {head}) overshoot the limit {limit}")
    if cl.side == BELOW and r > 0 and head > r + MERGE_TOL:
        raise MalformedModelError(
            f"below-side deltas (head {head}) overshoot the limit {limit}")
    return Cluster(limit, cl.side, cl.deltas)


def _sort_key(v: complex):
    return (v.real, v.imag)


def _merge_values(items, tol: float = MERGE_TOL):
    """Union-find merge of (value, mult) pairs whose values sit within tol.

    Transitive: chains of nearby values collapse into one entry keyed by the
    lexicographically smallest representative.
    """
    items = list(items)
    n = len(items)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(items[i][0] - items[j][0]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(items[i])
    merged = []
    for members in groups.values():
        value = min((m[0] for m in members), key=_sort_key)
        mult = sum(m[1] for m in members)
        merged.append((value, mult))
    merged.sort(key=lambda it: _sort_key(it[0]))
    return merged


def normalize_model(model: SpectrumModel) -> SpectrumModel:
    """Canonical form: validated, merged, sorted; idempotent.

    Terminating explicit clusters denote finitely many eigenvalues, so they
    are expanded into point entries here; every cluster surviving
    normalization marks a genuine limit point.
    """
    if model.kind not in KINDS:
        raise MalformedModelError(f"unknown model kind {model.kind!r}")

    point_items = []
    for p in model.points:
        point_items.append((_as_value(p.value, model.kind), _as_mult(p.mult)))

    survivors = []
    for cl in model.clusters:
        cl = _validate_cluster(cl, model.kind)
        if cl.deltas.terminating:
            sign = 1.0 if cl.side == ABOVE else -1.0
            for d in cl.deltas.terms_:
                point_items.append((cl.limit + sign * d, 1))
        else:
            survivors.append(cl)

    merged_points = tuple(
        EigenvalueEntry(v, m) for v, m in _merge_values(point_items))

    # merge clusters sharing a (limit, side) slot
    by_slot = _merge_values(
        [(cl.limit, 1) for cl in survivors]) if survivors else []
    reps = [v for v, _ in by_slot]

    def rep_of(limit):
        for v in reps:
            if abs(limit - v) <= MERGE_TOL:
                return v
        return limit

    slots: dict[tuple, list[Cluster]] = {}
    for cl in survivors:
        key = (_sort_key(rep_of(cl.limit)), cl.side)
        slots.setdefault(key, []).append(cl)
    merged_clusters = []
    for (limit_key, side), group in slots.items():
        limit = complex(*limit_key)
        if len(group) == 1 and abs(group[0].limit - limit) == 0.0:
            merged_clusters.append(group[0])
        elif len(group) == 1:
            merged_clusters.append(Cluster(limit, side, group[0].deltas))
        else:
            merged_clusters.append(
                Cluster(limit, side, merge_sequences([g.deltas for g in group])))
    merged_clusters.sort(key=lambda c: (_sort_key(c.limit), c.side))

    return SpectrumModel(model.kind, merged_points, tuple(merged_clusters))


# ---------------------------------------------------------------------------
# structural queries


def total_multiplicity(model: SpectrumModel) -> float:
    """Hilbert-space dimension the model spans (may be ``inf``)."""
    total = 0.0
    for p in model.points:
        total += p.mult
    for cl in model.clusters:
        total += cl.deltas.term_count()
    return total


def is_finite_dimensional(model: SpectrumModel) -> bool:
    return total_multiplicity(model) < INF


def materialize(model: SpectrumModel, depth: int):
    """Concrete (value, mult) pairs: points plus the first ``depth`` members
    of every cluster (cluster members carry multiplicity one)."""
    out = [(p.value, p.mult) for p in model.points]
    for cl in model.clusters:
        out.extend((m, 1) for m in cl.members(depth))
    return out


# ---------------------------------------------------------------------------
# modulus reduction


def descending_prefix(values) -> tuple[float, ...]:
    """Longest strictly decreasing, strictly positive prefix.

    Materialized images of monotone maps can flatten at the floating-point
    resolution floor; the prefix cut keeps explicit sequences valid.
    """
    out = []
    prev = INF
    for v in values:
        if v <= 0.0 or v >= prev:
            break
        out.append(v)
        prev = v
    return tuple(out)


def _modulus_cluster(cl: Cluster, depth: int) -> Cluster | None:
    limit = cl.limit
    base = abs(limit)
    if limit.imag == 0.0:
        r = limit.real
        if r > 0.0:
            side = cl.side
        elif r < 0.0:
            side = BELOW if cl.side == ABOVE else ABOVE
        else:
            side = ABOVE
        return Cluster(complex(base, 0.0), side, cl.deltas)
    # genuinely complex limit: member moduli move monotonically but not
    # linearly, so re-present the deltas explicitly
    members = cl.members(depth)
    diffs = [abs(m) - base for m in members]
    side = ABOVE if diffs[0] > 0 else BELOW
    mags = descending_prefix(abs(d) for d in diffs)
    if not mags:
        return None
    return Cluster(complex(base, 0.0), side,
                   DecaySequence.explicit(mags, terminating=cl.deltas.terminating))


def modulus_spectrum(model: SpectrumModel,
                     depth: int = MATERIALIZE_DEPTH) -> SpectrumModel:
    """Positive model of ``|T|``: values replaced by moduli and merged."""
    n = normalize_model(model)
    points = [EigenvalueEntry(complex(abs(p.value), 0.0), p.mult) for p in n.points]
    clusters = []
    for cl in n.clusters:
        mapped = _modulus_cluster(cl, depth)
        if mapped is not None:
            clusters.append(mapped)
    return normalize_model(SpectrumModel(POSITIVE, tuple(points), tuple(clusters)))


# ---------------------------------------------------------------------------
# classification


def _distinct_reals(values, tol: float = MERGE_TOL):
    out: list[float] = []
    for v in sorted(values):
        if out and v - out[-1] <= tol:
            continue
        out.append(v)
    return out


def _declared_positive_negative(n: SpectrumModel) -> bool:
    if n.kind != POSITIVE:
        return False
    for p in n.points:
        if p.value.real < -MERGE_TOL:
            return True
    for cl in n.clusters:
        if cl.limit.real < -MERGE_TOL:
            return True
        if cl.side == BELOW and cl.limit.real <= MERGE_TOL:
            return True  # members below zero
    return False


def classify(model: SpectrumModel) -> ANVerdict:
    """Decide AN membership; violations listed in canonical order.

    Finite-total-multiplicity models are AN outright (every subspace of a
    finite-dimensional space attains), except that a declared-positive model
    showing negative values breaks its kind contract regardless of size.
    """
    n = normalize_model(model)
    mod = modulus_spectrum(n)
    found = set()

    if _declared_positive_negative(n):
        found.add(NEGATIVE_VALUE)

    if not is_finite_dimensional(mod):
        limits = _distinct_reals(cl.limit.real for cl in mod.clusters)
        if len(limits) > 1:
            found.add(MULTIPLE_LIMIT_POINTS)
        if any(cl.side == BELOW for cl in mod.clusters):
            found.add(LIMIT_FROM_BELOW)
        inf_values = [p.value.real for p in mod.points if p.is_infinite()]
        if len(inf_values) > 1:
            found.add(MULTIPLE_INFINITE_MULTIPLICITIES)
        for limit in limits:
            for v in inf_values:
                if abs(limit - v) > MERGE_TOL:
                    found.add(LIMIT_NEQ_INFINITE_MULT)

    violations = tuple(c for c in VIOLATION_ORDER if c in found)
    return ANVerdict(not violations, violations, mod)


# ---------------------------------------------------------------------------
# moduli report


def moduli_report(model: SpectrumModel) -> ModuliReport:
    """Operator norm, minimum modulus, and essential minimum modulus.

    The essential part consists of cluster limits and infinite-multiplicity
    values; for finite-dimensional models it is empty and the report falls
    back to ``min_modulus`` with the ``finite_dim`` flag set.
    """
    mod = modulus_spectrum(model)

    attained = [p.value.real for p in mod.points]
    unattained_sups = []
    lower_candidates = list(attained)
    for cl in mod.clusters:
        limit = cl.limit.real
        if cl.side == ABOVE:
            attained.append(limit + cl.deltas.head)
            lower_candidates.append(limit)  # infimum of the tail
        else:
            unattained_sups.append(limit)
            lower_candidates.append(limit - cl.deltas.head)

    if not attained and not unattained_sups:
        return ModuliReport(0.0, 0.0, 0.0, True, True)

    norm = max(attained + unattained_sups)
    norm_attained = bool(attained) and max(attained) >= norm - MERGE_TOL
    min_modulus = min(lower_candidates)

    essential = [cl.limit.real for cl in mod.clusters]
    essential += [p.value.real for p in mod.points if p.is_infinite()]
    if essential:
        return ModuliReport(norm, min_modulus, min(essential), norm_attained, False)
    return ModuliReport(norm, min_modulus, min_modulus, norm_attained, True)
