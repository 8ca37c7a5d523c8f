"""Outcome distributions and the POS / Hellinger-fidelity metrics."""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class OutcomeDistribution:
    """Bitstring counts from one execution; qubit 0 is the rightmost bit."""

    counts: dict[str, int]
    shots: int

    def __post_init__(self) -> None:
        total = sum(self.counts.values())
        if total != self.shots:
            raise MetricsError(f"counts sum to {total}, expected {self.shots} shots")
        lengths = {len(b) for b in self.counts}
        if len(lengths) > 1:
            raise MetricsError(f"inconsistent bitstring lengths: {sorted(lengths)}")

    def probabilities(self) -> dict[str, float]:
        if self.shots == 0:
            raise MetricsError("empty distribution")
        return {b: c / self.shots for b, c in self.counts.items()}


def pos(dist: OutcomeDistribution, accepted: Iterable[str]) -> float:
    """Probability of success: the fraction of shots in the accepted set."""
    if dist.shots <= 0:
        raise MetricsError("empty distribution")
    accepted = set(accepted)
    return sum(c for b, c in dist.counts.items() if b in accepted) / dist.shots


def _as_probabilities(dist: OutcomeDistribution | Mapping[str, float]) -> dict[str, float]:
    if isinstance(dist, OutcomeDistribution):
        return dist.probabilities()
    return dict(dist)


def hellinger_fidelity(p: OutcomeDistribution | Mapping[str, float],
                       q: OutcomeDistribution | Mapping[str, float]) -> float:
    """(sum_i sqrt(p_i * q_i))^2 for two normalized distributions."""
    pp, qq = _as_probabilities(p), _as_probabilities(q)
    for name, dist in (("p", pp), ("q", qq)):
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-9:
            raise MetricsError(f"distribution {name} is not normalized (sum={total})")
    overlap = sum((pp[b] * qq[b]) ** 0.5 for b in pp.keys() & qq.keys())
    return overlap * overlap


def total_variation(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(b, 0.0) - q.get(b, 0.0)) for b in keys)
