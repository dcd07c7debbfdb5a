"""Independent attainment checks and seeded model generators.

The oracle re-derives the attainment verdict from the definition instead of
the classifier's rule table: it materializes the spectrum, enumerates
restriction subspaces spanned by eigendirections (diagonal subsets plus
cluster tail subspaces), and searches for two-point mixing subspaces whose
restricted norm is a strict supremum.  A model passes only if every probed
subspace attains its norm.  numpy's LAPACK may be used here as lab
equipment; library results never depend on this module.

Known blind spot, by design: mixing witnesses draw their vectors from
materialized cluster members, so a hand-written explicit cluster that stops
far from its limit can leave a pair unprobed.  The seeded generators below
keep cluster heads small relative to value spacing, which makes every
essential-value pair probeable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .model import (
    ABOVE,
    BELOW,
    INF,
    NORMAL,
    POSITIVE,
    SELF_ADJOINT,
    LIMIT_FROM_BELOW,
    LIMIT_NEQ_INFINITE_MULT,
    MULTIPLE_INFINITE_MULTIPLICITIES,
    MULTIPLE_LIMIT_POINTS,
    NEGATIVE_VALUE,
    Cluster,
    EigenvalueEntry,
    SpectrumModel,
    normalize_model,
)
from .sequences import DecaySequence


@dataclass(frozen=True)
class TruncationProfile:
    """How hard the oracle probes: materialization depth per cluster,
    ground-set cap for subset enumeration, and the comparison tolerance."""

    depth: int = 12
    subset_cap: int = 14
    tol: float = 1e-9

    def __post_init__(self):
        if self.depth < 2:
            raise ValueError(f"depth must be at least 2, got {self.depth}")
        if not 1 <= self.subset_cap <= 22:
            raise ValueError(f"subset cap {self.subset_cap} out of range 1..22")
        if not 0 < self.tol < 1:
            raise ValueError(f"tolerance {self.tol} out of range")


@dataclass(frozen=True)
class OracleFailure:
    """One subspace on which the restricted norm is not attained (or a
    declared-positivity breach)."""

    kind: str  # "declared_negative" | "unattained_tail" | "unattained_mixture"
    witness: tuple
    detail: str


@dataclass(frozen=True)
class OracleReport:
    is_an: bool
    failures: tuple[OracleFailure, ...]
    subsets_checked: int
    pairs_checked: int


def _dedupe_sorted(values, tol: float):
    out = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def _subset_scan(attained, unattained, cap: int, tol: float):
    """Exhaustively check sup = max on eigenbasis subsets.

    Ground items are attained values (eigenvector directions, supremum
    reached) and unattained markers (cluster tail subspaces approaching
    their value from below).  A subset fails when its largest unattained
    marker tops every attained value.  Markers survive trimming because a
    failing subset can always be shrunk to a single marker.
    """
    markers = [(v, False) for v in _dedupe_sorted(unattained, tol)]
    points = [(v, True) for v in _dedupe_sorted(attained, tol)]
    ground = markers + sorted(points, reverse=True)[: max(cap - len(markers), 0)]
    g = len(ground)
    if g == 0:
        return 0, []
    masks = np.arange(1, 1 << g, dtype=np.uint32)
    max_att = np.full(masks.shape, -np.inf)
    max_un = np.full(masks.shape, -np.inf)
    for i, (value, is_attained) in enumerate(ground):
        present = (masks >> np.uint32(i)) & np.uint32(1)
        column = np.where(present.astype(bool), value, -np.inf)
        if is_attained:
            np.maximum(max_att, column, out=max_att)
        else:
            np.maximum(max_un, column, out=max_un)
    bad = max_un > max_att + tol
    failing = [ground[int(i)][0]
               for i in range(g)
               if not ground[int(i)][1] and bad[(1 << i) - 1]]
    return int(masks.size), failing


def _mixing_refutes(a_base, a_dir, a_mags, b_base, b_dir, b_mags,
                    depth: int, tol: float):
    """Probe the two-point mixing subspace for essential values a < b.

    Vectors v_n = cos(t_n) e_a^n + sin(t_n) e_b^n with weights chosen so the
    restricted norms climb strictly to b without reaching it; the subspace
    then has supremum b attained by no vector.  Returns the climb endpoint,
    or None when no usable member window exists (inconclusive).
    """
    ceiling2 = (a_base * a_base + b_base * b_base) / 2.0
    if a_mags is None:
        a_seq = [a_base] * depth
    else:
        usable = [m for m in a_mags if m * m < ceiling2]
        if not usable:
            return None
        a_seq = list(reversed(usable[-depth:]))
        while len(a_seq) < depth:
            a_seq.append(a_seq[-1])
    if b_mags is None:
        b_seq = [b_base] * depth
    else:
        usable = [m for m in b_mags if m >= b_base - tol]
        if not usable:
            return None
        b_seq = list(reversed(usable[-depth:]))
        while len(b_seq) < depth:
            b_seq.append(b_seq[-1])

    b2 = b_base * b_base
    gap0 = b2 - max(x * x for x in a_seq)
    if gap0 <= tol:
        return None
    prev = -math.inf
    climb = []
    for i in range(depth):
        target = b2 - gap0 / (2.0 ** (i + 1))
        an2 = a_seq[i] * a_seq[i]
        bn2 = b_seq[i] * b_seq[i]
        if bn2 - an2 <= 0.0:
            return None
        w = (target - an2) / (bn2 - an2)
        if not 0.0 < w < 1.0:
            return None
        norm = math.sqrt((1.0 - w) * an2 + w * bn2)
        if norm <= prev or norm >= b_base:
            return None
        climb.append(norm)
        prev = norm
    return climb[-1]


def attainment_oracle(model: SpectrumModel,
                      profile: TruncationProfile | None = None) -> OracleReport:
    """Decide attainment by direct subspace probing.

    Checks, in order: declared positivity on materialized members (positive
    kind only), supremum attainment on every eigenbasis subset including
    cluster tails, and unattained two-point mixing subspaces between
    distinct essential values.
    """
    prof = profile or TruncationProfile()
    tol = prof.tol
    n = normalize_model(model)
    failures: list[OracleFailure] = []

    if n.kind == POSITIVE:
        for p in n.points:
            if p.value.real < -tol:
                failures.append(OracleFailure(
                    "declared_negative", (p.value.real,),
                    f"declared positive but carries eigenvalue {p.value.real}"))
        for cl in n.clusters:
            head = min(m.real for m in cl.members(prof.depth))
            if head < -tol:
                failures.append(OracleFailure(
                    "declared_negative", (head,),
                    f"declared positive but cluster member reaches {head}"))

    deep = max(prof.depth, 48)
    attained = [abs(p.value) for p in n.points]
    unattained: list[float] = []
    essential = []  # (base modulus, direction, member moduli or None)
    for p in n.points:
        if p.is_infinite():
            essential.append((abs(p.value), "flat", None))
    for cl in n.clusters:
        mags = [abs(m) for m in cl.members(deep)]
        base = abs(cl.limit)
        attained.extend(mags[: prof.depth])
        if mags[0] > base + tol:
            direction = "upper"
        elif mags[0] < base - tol:
            direction = "lower"
        else:
            direction = "flat"
        if direction == "lower":
            unattained.append(base)
        else:
            attained.append(max(mags[0], base))
        essential.append((base, direction, mags))

    subsets, failing_markers = _subset_scan(attained, unattained,
                                            prof.subset_cap, tol)
    for value in failing_markers:
        failures.append(OracleFailure(
            "unattained_tail", (value,),
            f"tail subspace has supremum {value} reached by no member"))

    groups: list[list] = []
    for item in sorted(essential, key=lambda e: e[0]):
        if groups and item[0] - groups[-1][0][0] <= tol:
            groups[-1].append(item)
        else:
            groups.append([item])
    pairs = 0
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            b_items = [e for e in groups[j] if e[1] in ("flat", "upper")]
            if not b_items:
                continue  # approached only from below; its own tail refutes
            a_item = groups[i][0]
            b_item = b_items[0]
            pairs += 1
            climbed = _mixing_refutes(a_item[0], a_item[1], a_item[2],
                                      b_item[0], b_item[1], b_item[2],
                                      prof.depth, tol)
            if climbed is not None:
                failures.append(OracleFailure(
                    "unattained_mixture", (a_item[0], b_item[0], climbed),
                    f"mixing directions at {a_item[0]} and {b_item[0]} climbs "
                    f"to {climbed} with supremum {b_item[0]} never attained"))

    return OracleReport(not failures, tuple(failures), subsets, pairs)


# ---------------------------------------------------------------------------
# finite-rank perturbation lab check


@dataclass(frozen=True)
class PerturbationReport:
    """Eigenvalue counting comparison for a finite-rank perturbation."""

    within_bound: bool
    max_count_gap: int
    rank_detected: int
    grid_lo: float
    grid_hi: float


def rank_perturbation_check(base, perturbed, rank_bound: int,
                            grid_points: int = 257,
                            tol: float = 1e-9) -> PerturbationReport:
    """Check the Weyl-type stability of eigenvalue counts.

    For Hermitian A and B with rank(A - B) <= r, the counting functions
    N_A(x) and N_B(x) can differ by at most r at every x.  The comparison
    runs on a uniform grid over [min - 1, max + 1] of the joint spectrum.
    """
    a = np.asarray(base, dtype=np.complex128)
    b = np.asarray(perturbed, dtype=np.complex128)
    va = np.linalg.eigvalsh(a)
    vb = np.linalg.eigvalsh(b)
    lo = float(min(va[0], vb[0])) - 1.0
    hi = float(max(va[-1], vb[-1])) + 1.0
    xs = np.linspace(lo, hi, grid_points)
    na = np.searchsorted(va, xs, side="right")
    nb = np.searchsorted(vb, xs, side="right")
    gap = int(np.max(np.abs(na - nb)))
    diff_eigs = np.linalg.eigvalsh(a - b)
    scale = max(float(np.max(np.abs(diff_eigs))), 1.0)
    rank = int(np.count_nonzero(np.abs(diff_eigs) > tol * scale))
    return PerturbationReport(gap <= rank_bound, gap, rank, lo, hi)


# ---------------------------------------------------------------------------
# seeded model generators


FAMILY_POSITIVE = "positive"
FAMILY_SELF_ADJOINT = "selfadjoint"
FAMILY_NORMAL = "normal"
FAMILIES = (FAMILY_POSITIVE, FAMILY_SELF_ADJOINT, FAMILY_NORMAL)

VIOLATION_CODES = (
    NEGATIVE_VALUE,
    MULTIPLE_LIMIT_POINTS,
    LIMIT_FROM_BELOW,
    MULTIPLE_INFINITE_MULTIPLICITIES,
    LIMIT_NEQ_INFINITE_MULT,
)


@dataclass(frozen=True)
class GeneratorProfile:
    """Value layout for seeded models: grid spacing keeps distinct values
    far apart relative to the merge tolerance, and cluster heads stay under
    half the spacing so every essential pair is oracle-probeable."""

    spacing: float = 0.25
    max_points: int = 4
    max_mult: int = 3

    def __post_init__(self):
        if self.spacing <= 1e-6:
            raise ValueError("spacing too small")
        if self.max_points < 1 or self.max_mult < 1:
            raise ValueError("point and multiplicity caps must be positive")


def _gen_deltas(rng: random.Random, head: float) -> DecaySequence:
    style = rng.randrange(3)
    if style == 0:
        return DecaySequence.geometric(head * rng.choice([0.5, 1.0]),
                                       rng.choice([0.25, 0.5, 0.75]))
    if style == 1:
        return DecaySequence.harmonic(head * rng.choice([0.5, 1.0]))
    count = rng.randint(4, 8)
    first = head * rng.choice([0.5, 0.8])
    terms = tuple(first * (0.6 ** i) for i in range(count))
    return DecaySequence.explicit(terms, terminating=False)


def _grid_values(rng: random.Random, prof: GeneratorProfile, count: int,
                 lo_step: int, hi_step: int):
    steps = rng.sample(range(lo_step, hi_step), min(count, hi_step - lo_step))
    return [s * prof.spacing for s in sorted(steps)]


def _gen_positive(rng: random.Random, prof: GeneratorProfile) -> SpectrumModel:
    head = prof.spacing / 2.0
    case = rng.randrange(4)
    points: list[EigenvalueEntry] = []
    clusters: list[Cluster] = []
    if case == 0:
        # compact only: essential minimum zero
        for v in _grid_values(rng, prof, rng.randint(1, prof.max_points), 1, 17):
            points.append(EigenvalueEntry(complex(v, 0), rng.randint(1, prof.max_mult)))
        if rng.random() < 0.6:
            clusters.append(Cluster(0j, ABOVE, _gen_deltas(rng, head)))
        if rng.random() < 0.3:
            points.append(EigenvalueEntry(0j, INF))
        if not points and not clusters:
            points.append(EigenvalueEntry(complex(prof.spacing, 0), 1))
    else:
        alpha = rng.randint(2, 6) * prof.spacing * 2
        alpha_steps = round(alpha / prof.spacing)
        if case == 1:
            # no finite-rank part
            sink_cluster = rng.random() < 0.5
            if sink_cluster:
                clusters.append(Cluster(complex(alpha, 0), ABOVE, _gen_deltas(rng, head)))
            else:
                points.append(EigenvalueEntry(complex(alpha, 0), INF))
            for v in _grid_values(rng, prof, rng.randint(1, prof.max_points),
                                  alpha_steps + 1, alpha_steps + 12):
                points.append(EigenvalueEntry(complex(v, 0), rng.randint(1, prof.max_mult)))
        elif case == 2:
            # no compact part: infinite multiplicity holds the shift alone
            points.append(EigenvalueEntry(complex(alpha, 0), INF))
            for v in _grid_values(rng, prof, rng.randint(1, prof.max_points),
                                  1, alpha_steps):
                points.append(EigenvalueEntry(complex(v, 0), rng.randint(1, prof.max_mult)))
            if rng.random() < 0.3:
                points.append(EigenvalueEntry(0j, rng.randint(1, 2)))
        else:
            # both parts present
            if rng.random() < 0.5:
                clusters.append(Cluster(complex(alpha, 0), ABOVE, _gen_deltas(rng, head)))
            else:
                points.append(EigenvalueEntry(complex(alpha, 0), INF))
                above = _grid_values(rng, prof, 1, alpha_steps + 1, alpha_steps + 9)
                points.append(EigenvalueEntry(complex(above[0], 0),
                                              rng.randint(1, prof.max_mult)))
            for v in _grid_values(rng, prof, rng.randint(1, 2),
                                  alpha_steps + 1, alpha_steps + 12):
                points.append(EigenvalueEntry(complex(v, 0), rng.randint(1, prof.max_mult)))
            below = _grid_values(rng, prof, rng.randint(1, 2), 1, alpha_steps)
            for v in below:
                points.append(EigenvalueEntry(complex(v, 0), rng.randint(1, prof.max_mult)))
    return normalize_model(SpectrumModel(POSITIVE, tuple(points), tuple(clusters)))


def _gen_selfadjoint(rng: random.Random, prof: GeneratorProfile) -> SpectrumModel:
    head = prof.spacing / 2.0
    alpha = rng.randint(2, 6) * prof.spacing * 2
    alpha_steps = round(alpha / prof.spacing)
    points: list[EigenvalueEntry] = []
    clusters: list[Cluster] = []
    sinks = rng.sample(["plus_inf", "minus_inf", "plus_cluster", "minus_cluster"],
                       rng.randint(1, 2))
    if "plus_inf" in sinks:
        points.append(EigenvalueEntry(complex(alpha, 0), INF))
    if "minus_inf" in sinks:
        points.append(EigenvalueEntry(complex(-alpha, 0), INF))
    if "plus_cluster" in sinks:
        clusters.append(Cluster(complex(alpha, 0), ABOVE, _gen_deltas(rng, head)))
    if "minus_cluster" in sinks:
        clusters.append(Cluster(complex(-alpha, 0), BELOW, _gen_deltas(rng, head)))
    for v in _grid_values(rng, prof, rng.randint(1, prof.max_points),
                          1, alpha_steps + 12):
        if abs(v - alpha) < prof.spacing / 2:
            continue
        sign = rng.choice([-1.0, 1.0])
        points.append(EigenvalueEntry(complex(sign * v, 0), rng.randint(1, prof.max_mult)))
    if rng.random() < 0.3:
        points.append(EigenvalueEntry(0j, rng.randint(1, 2)))
    return normalize_model(SpectrumModel(SELF_ADJOINT, tuple(points), tuple(clusters)))


_PHASES = tuple(complex(math.cos(k * math.pi / 6.0), math.sin(k * math.pi / 6.0))
                for k in range(12))


def _gen_normal(rng: random.Random, prof: GeneratorProfile) -> SpectrumModel:
    head = prof.spacing / 2.0
    alpha = rng.randint(2, 6) * prof.spacing * 2
    alpha_steps = round(alpha / prof.spacing)
    points: list[EigenvalueEntry] = []
    clusters: list[Cluster] = []
    for _ in range(rng.randint(1, 2)):
        phase = rng.choice(_PHASES)
        if rng.random() < 0.5:
            points.append(EigenvalueEntry(alpha * phase, INF))
        else:
            side = ABOVE if phase.real >= 0 else BELOW
            clusters.append(Cluster(alpha * phase, side, _gen_deltas(rng, head)))
    for v in _grid_values(rng, prof, rng.randint(1, prof.max_points),
                          1, alpha_steps + 12):
        if abs(v - alpha) < prof.spacing / 2:
            continue
        points.append(EigenvalueEntry(v * rng.choice(_PHASES),
                                      rng.randint(1, prof.max_mult)))
    if rng.random() < 0.2:
        points.append(EigenvalueEntry(0j, rng.randint(1, 2)))
    return normalize_model(SpectrumModel(NORMAL, tuple(points), tuple(clusters)))


def generate_model(seed: int, family: str,
                   profile: GeneratorProfile | None = None) -> SpectrumModel:
    """Seeded AN model from one of the three kind families."""
    prof = profile or GeneratorProfile()
    rng = random.Random(("model", family, seed).__repr__())
    if family == FAMILY_POSITIVE:
        return _gen_positive(rng, prof)
    if family == FAMILY_SELF_ADJOINT:
        return _gen_selfadjoint(rng, prof)
    if family == FAMILY_NORMAL:
        return _gen_normal(rng, prof)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def _maybe_sign_flip(rng: random.Random, model: SpectrumModel) -> SpectrumModel:
    """Optionally re-dress a positive violator as self-adjoint; moduli (and
    therefore the violation set) are preserved exactly."""
    if rng.random() >= 0.4:
        return model
    points = tuple(
        EigenvalueEntry(-p.value if rng.random() < 0.5 else p.value, p.mult)
        for p in model.points)
    clusters = []
    for cl in model.clusters:
        if rng.random() < 0.5 and abs(cl.limit) > 0:
            flipped = ABOVE if cl.side == BELOW else BELOW
            clusters.append(Cluster(-cl.limit, flipped, cl.deltas))
        else:
            clusters.append(cl)
    return normalize_model(SpectrumModel(SELF_ADJOINT, points, tuple(clusters)))


FAMILY_CYCLE = (
    (FAMILY_POSITIVE, None),
    (FAMILY_POSITIVE, None),
    (FAMILY_POSITIVE, None),
    (FAMILY_SELF_ADJOINT, None),
    (FAMILY_SELF_ADJOINT, None),
    (FAMILY_NORMAL, None),
    (FAMILY_NORMAL, None),
    ("violator", NEGATIVE_VALUE),
    ("violator", MULTIPLE_LIMIT_POINTS),
    ("violator", LIMIT_FROM_BELOW),
    ("violator", MULTIPLE_INFINITE_MULTIPLICITIES),
    ("violator", LIMIT_NEQ_INFINITE_MULT),
)


def mixed_model(seed: int, profile: GeneratorProfile | None = None):
    """Seeded model drawn from the weighted family cycle (three positive,
    two self-adjoint, two normal, five violators per twelve seeds).
    Returns ``(tag, model)`` where the tag names the family or violation."""
    family, code = FAMILY_CYCLE[seed % len(FAMILY_CYCLE)]
    if family == "violator":
        return f"violator:{code}", generate_violator(seed, code, profile)
    return family, generate_model(seed, family, profile)


def generate_violator(seed: int, code: str,
                      profile: GeneratorProfile | None = None) -> SpectrumModel:
    """Seeded model violating exactly the requested condition."""
    prof = profile or GeneratorProfile()
    rng = random.Random(("violator", code, seed).__repr__())
    head = prof.spacing / 2.0
    points: list[EigenvalueEntry] = []
    clusters: list[Cluster] = []
    if code == NEGATIVE_VALUE:
        neg = -rng.randint(1, 8) * prof.spacing
        points.append(EigenvalueEntry(complex(neg, 0), rng.randint(1, prof.max_mult)))
        points.append(EigenvalueEntry(complex(rng.randint(2, 6) * prof.spacing * 2, 0), INF))
        return normalize_model(SpectrumModel(POSITIVE, tuple(points), ()))
    if code == MULTIPLE_LIMIT_POINTS:
        lo, hi = _grid_values(rng, prof, 2, 2, 14)
        if hi - lo < 2 * prof.spacing:
            hi = lo + 2 * prof.spacing
        clusters.append(Cluster(complex(lo, 0), ABOVE, _gen_deltas(rng, head)))
        clusters.append(Cluster(complex(hi, 0), ABOVE, _gen_deltas(rng, head)))
    elif code == LIMIT_FROM_BELOW:
        limit = rng.randint(4, 10) * prof.spacing
        clusters.append(Cluster(complex(limit, 0), BELOW, _gen_deltas(rng, head)))
    elif code == MULTIPLE_INFINITE_MULTIPLICITIES:
        lo, hi = _grid_values(rng, prof, 2, 2, 14)
        if hi - lo < 2 * prof.spacing:
            hi = lo + 2 * prof.spacing
        points.append(EigenvalueEntry(complex(lo, 0), INF))
        points.append(EigenvalueEntry(complex(hi, 0), INF))
    elif code == LIMIT_NEQ_INFINITE_MULT:
        lo, hi = _grid_values(rng, prof, 2, 2, 14)
        if hi - lo < 2 * prof.spacing:
            hi = lo + 2 * prof.spacing
        if rng.random() < 0.5:
            clusters.append(Cluster(complex(lo, 0), ABOVE, _gen_deltas(rng, head)))
            points.append(EigenvalueEntry(complex(hi, 0), INF))
        else:
            points.append(EigenvalueEntry(complex(lo, 0), INF))
            clusters.append(Cluster(complex(hi, 0), ABOVE, _gen_deltas(rng, head)))
    else:
        raise ValueError(f"unknown violation code {code!r}")
    if rng.random() < 0.5:
        for v in _grid_values(rng, prof, rng.randint(1, 2), 15, 24):
            points.append(EigenvalueEntry(complex(v, 0), rng.randint(1, prof.max_mult)))
    model = SpectrumModel(POSITIVE, tuple(points), tuple(clusters))
    return _maybe_sign_flip(rng, normalize_model(model))
