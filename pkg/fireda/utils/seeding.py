"""Labelled, order-independent random substreams."""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

Label = int | str


def _label_key(label: Label) -> int:
    if isinstance(label, str):
        return zlib.crc32(label.encode("utf-8"))
    if label < 0:
        raise ValueError(f"Integer labels must be non-negative, got {label}")
    return int(label)


@dataclass(frozen=True)
class SeedStream:
    """A node in a tree of random streams rooted at one integer seed.

    Two streams with the same root seed and labels always produce the same
    numbers, independent of how many other streams were drawn before.

    Attributes:
        root_seed: Experiment seed
        labels: Path from the root to this node
    """

    root_seed: int
    labels: tuple[Label, ...] = ()

    def child(self, *labels: Label) -> SeedStream:
        """Return the substream reached by appending labels."""
        return SeedStream(self.root_seed, self.labels + labels)

    def generator(self) -> np.random.Generator:
        """Build a counter-based generator for this node."""
        seq = np.random.SeedSequence(
            entropy=self.root_seed,
            spawn_key=tuple(_label_key(label) for label in self.labels),
        )
        return np.random.Generator(np.random.Philox(seq))
