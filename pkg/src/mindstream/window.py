"""Sliding window over the sentence stream.

Buffers the most recent sentences for resolution look-back; anything evicted
is gone for good. Sentences must arrive in strict stream order.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .conllu import Sentence


class StreamOrderError(ValueError):
    """A sentence arrived out of stream order."""


class SlidingWindow:
    """Fixed-capacity FIFO of the newest sentences, oldest first.

    Single-owner mutable state; `buffer()` hands out immutable snapshots.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"window capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._buffer: deque[Sentence] = deque()
        self.consumed = 0  # total sentences ever pushed

    def push(self, sentence: Sentence) -> Optional[Sentence]:
        """Append `sentence`; return the evicted sentence if the window was full."""
        if sentence.seq != self.consumed:
            raise StreamOrderError(
                f"expected sentence seq {self.consumed}, got {sentence.seq}"
            )
        self._buffer.append(sentence)
        self.consumed += 1
        if len(self._buffer) > self.capacity:
            return self._buffer.popleft()
        return None

    def lookback(self, n: int) -> list[Sentence]:
        """Up to the `n` most recent buffered sentences, most recent last."""
        if n < 1:
            raise ValueError(f"look-back count must be >= 1, got {n}")
        take = min(n, len(self._buffer))
        return list(self._buffer)[len(self._buffer) - take :]

    def buffer(self) -> tuple[Sentence, ...]:
        return tuple(self._buffer)

    def replace_last(self, sentence: Sentence) -> None:
        """Swap the newest buffered sentence for its pronoun-substituted copy."""
        if not self._buffer or self._buffer[-1].seq != sentence.seq:
            raise StreamOrderError("replace_last must target the newest buffered sentence")
        self._buffer[-1] = sentence

    def __len__(self) -> int:
        return len(self._buffer)
