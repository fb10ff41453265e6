"""Choice events: a source node picking targets out of a candidate set."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..exceptions import EmptyCandidates, ValidationError
from ..poset import PartitionedPreference

SCOPES = ("global", "fof")


@dataclass(frozen=True)
class ChoiceEvent:
    """One source's batch of new edges.

    ``windows`` orders the chosen targets into preference tiers (earlier
    windows preferred); without timing information it is a single tier.
    ``candidates`` is an explicit candidate set; when absent it is derived
    from a graph and ``scope``.  ``negatives`` are sampled non-chosen
    candidates used for link-prediction evaluation.
    """

    source: int
    windows: tuple
    scope: str = "global"
    label: str | None = None
    negatives: tuple | None = None
    timestamp: int | None = None
    candidates: tuple | None = None
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        windows = tuple(tuple(int(x) for x in w) for w in self.windows)
        windows = tuple(w for w in windows if w)
        object.__setattr__(self, "windows", windows)
        object.__setattr__(self, "source", int(self.source))
        chosen = [x for w in windows for x in w]
        if len(set(chosen)) != len(chosen):
            raise ValidationError("a target appears in more than one window")
        if self.source in chosen:
            raise ValidationError("the source cannot choose itself")
        if self.scope not in SCOPES:
            raise ValidationError(f"unknown candidate scope {self.scope!r}")
        if self.negatives is not None:
            neg = tuple(int(x) for x in self.negatives)
            if set(neg) & set(chosen):
                raise ValidationError("negatives overlap the chosen targets")
            object.__setattr__(self, "negatives", neg)
        if self.candidates is not None:
            cand = tuple(sorted({int(x) for x in self.candidates}))
            if not set(chosen) <= set(cand):
                raise ValidationError("chosen targets must be candidates")
            object.__setattr__(self, "candidates", cand)

    @classmethod
    def from_chosen(cls, source, chosen, **kw) -> "ChoiceEvent":
        """Event whose targets form a single tier."""
        return cls(source, (tuple(chosen),), **kw)

    @property
    def chosen(self) -> tuple:
        return tuple(x for w in self.windows for x in w)

    def with_negatives(self, negatives) -> "ChoiceEvent":
        return replace(self, negatives=tuple(negatives))

    def evaluation_candidates(self) -> tuple:
        """Chosen targets plus sampled negatives, sorted by id."""
        if self.negatives is None:
            raise ValidationError("event has no negative samples")
        return tuple(sorted(set(self.chosen) | set(self.negatives)))


def event_to_partial_ranking(ev: ChoiceEvent, candidates=None) -> PartitionedPreference:
    """Tiers of chosen targets followed by the unchosen candidates as the last block.

    ``candidates`` defaults to the event's explicit set, then to chosen plus
    negatives.  Every candidate chosen in one window gives a single block
    (no information).
    """
    if candidates is None:
        if ev.candidates is not None:
            candidates = ev.candidates
        elif ev.negatives is not None:
            candidates = ev.evaluation_candidates()
        else:
            raise ValidationError("event carries no candidate set; pass one explicitly")
    cand = {int(x) for x in candidates}
    if not cand:
        raise EmptyCandidates("empty candidate set")
    chosen = set(ev.chosen)
    if not chosen <= cand:
        raise ValidationError("chosen targets must be candidates")
    rest = cand - chosen
    blocks = list(ev.windows) + ([sorted(rest)] if rest else [])
    return PartitionedPreference(blocks)
