"""Strictly decreasing positive delta sequences used by spectral clusters.

A cluster presents eigenvalues ``limit +/- delta_n``. The deltas come from
one of three generators:

* ``explicit``  -- a finite list of terms.  By default an explicit sequence
  terminates: it stands for exactly ``len(terms)`` eigenvalues and nothing
  more.  Images of infinite clusters under nonlinear maps (Gram, squaring)
  are materialized as explicit terms but keep ``terminating=False`` so the
  cluster still marks a genuine limit point.
* ``geometric`` -- ``first * ratio**n`` with ``first > 0``, ``0 < ratio < 1``.
* ``harmonic``  -- ``scale / (n + 1)`` with ``scale > 0``.

All generators yield strictly positive, strictly decreasing terms converging
to zero; violations raise :class:`~anop.errors.MalformedModelError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import MalformedModelError

EXPLICIT = "explicit"
GEOMETRIC = "geometric"
HARMONIC = "harmonic"

#: Depth at which symbolic sequences are expanded when a map has no closed
#: form on the generator parameters (cluster images under squaring, Gram,
#: modulus of genuinely complex limits, cluster merges).
MATERIALIZE_DEPTH = 64


@dataclass(frozen=True)
class DecaySequence:
    """One of the three delta generators above, plus a termination flag."""

    kind: str
    terms_: tuple[float, ...] = ()
    first: float = 0.0
    ratio: float = 0.0
    scale: float = 0.0
    terminating: bool = True

    def __post_init__(self):
        if self.kind == EXPLICIT:
            if not self.terms_:
                raise MalformedModelError("explicit delta sequence needs at least one term")
            prev = math.inf
            for t in self.terms_:
                if not (isinstance(t, (int, float)) and math.isfinite(t)):
                    raise MalformedModelError(f"delta term {t!r} is not a finite number")
                if t <= 0.0:
                    raise MalformedModelError(f"delta term {t} is not strictly positive")
                if t >= prev:
                    raise MalformedModelError("delta terms must be strictly decreasing")
                prev = t
        elif self.kind == GEOMETRIC:
            if not (math.isfinite(self.first) and self.first > 0.0):
                raise MalformedModelError(f"geometric first term {self.first} must be > 0")
            if not (0.0 < self.ratio < 1.0):
                raise MalformedModelError(f"geometric ratio {self.ratio} must lie in (0, 1)")
            if self.terminating:
                object.__setattr__(self, "terminating", False)
        elif self.kind == HARMONIC:
            if not (math.isfinite(self.scale) and self.scale > 0.0):
                raise MalformedModelError(f"harmonic scale {self.scale} must be > 0")
            if self.terminating:
                object.__setattr__(self, "terminating", False)
        else:
            raise MalformedModelError(f"unknown delta sequence kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def explicit(terms, terminating: bool = True) -> "DecaySequence":
        return DecaySequence(kind=EXPLICIT, terms_=tuple(float(t) for t in terms),
                             terminating=terminating)

    @staticmethod
    def geometric(first: float, ratio: float) -> "DecaySequence":
        return DecaySequence(kind=GEOMETRIC, first=float(first), ratio=float(ratio),
                             terminating=False)

    @staticmethod
    def harmonic(scale: float) -> "DecaySequence":
        return DecaySequence(kind=HARMONIC, scale=float(scale), terminating=False)

    # -- evaluation --------------------------------------------------------

    def terms(self, n: int) -> tuple[float, ...]:
        """First ``min(n, available)`` terms, largest first."""
        if n <= 0:
            return ()
        if self.kind == EXPLICIT:
            return self.terms_[:n]
        if self.kind == GEOMETRIC:
            out = []
            t = self.first
            for _ in range(n):
                out.append(t)
                t *= self.ratio
            return tuple(out)
        return tuple(self.scale / (k + 1) for k in range(n))

    @property
    def head(self) -> float:
        """Largest delta."""
        if self.kind == EXPLICIT:
            return self.terms_[0]
        if self.kind == GEOMETRIC:
            return self.first
        return self.scale

    def term_count(self) -> float:
        """Number of terms: finite for terminating sequences, else ``inf``."""
        if self.terminating:
            return float(len(self.terms_))
        return math.inf


def merge_sequences(seqs, depth: int = MATERIALIZE_DEPTH, tol: float = 1e-9) -> DecaySequence:
    """Interleave several delta sequences into one explicit sequence.

    Used when two clusters land on the same (limit, side) after a modulus or
    Gram map.  Coincident terms (within ``tol``) are kept once; the merge is
    non-terminating when any source is.
    """
    pool: list[float] = []
    for s in seqs:
        pool.extend(s.terms(depth))
    pool.sort(reverse=True)
    merged: list[float] = []
    for t in pool:
        if merged and merged[-1] - t <= tol:
            continue
        merged.append(t)
    terminating = all(s.terminating for s in seqs)
    return DecaySequence.explicit(merged[:depth], terminating=terminating)
