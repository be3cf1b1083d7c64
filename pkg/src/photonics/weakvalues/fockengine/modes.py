from __future__ import annotations

from typing import Dict
from typing import Iterable
from typing import Iterator
from typing import Tuple

from photonics.weakvalues.utils.errors import UnknownModeError


class ModeRegistry:
    """
    Ordered, immutable collection of photonic mode labels.  The position of a label is its index in every occupation
    vector built against this registry, so registries are never mutated - extending one produces a new registry.
    """

    _labels: Tuple[str, ...]
    _indices: Dict[str, int]

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ValueError(f"Mode labels must be unique (got duplicates {duplicates})")

        self._labels = labels
        self._indices = {label: i for i, label in enumerate(labels)}

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def size(self) -> int:
        return len(self._labels)

    def index(self, label: str) -> int:
        try:
            return self._indices[label]
        except KeyError:
            raise UnknownModeError(f'Mode "{label}" is not registered (known modes: {list(self._labels)})')

    def indices(self, labels: Iterable[str]) -> Tuple[int, ...]:
        return tuple(self.index(label) for label in labels)

    def with_modes(self, *labels: str) -> ModeRegistry:
        """Return a new registry with the given labels appended, e.g. loss ancillas."""
        return ModeRegistry(self._labels + tuple(labels))

    def __contains__(self, label: object) -> bool:
        return label in self._indices

    def __iter__(self) -> Iterator[str]:
        return iter(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other):
        if not isinstance(other, ModeRegistry):
            return False
        return self._labels == other._labels

    def __hash__(self):
        return hash(self._labels)

    def __repr__(self):
        return f"ModeRegistry({list(self._labels)})"
