"""Phoneme-frame alignment: frame labeling, vocabulary filtering, 5-frame group sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput

SILENCE = "<sil>"

# The detection vocabulary: visually salient phonemes spanning bilabials,
# labiodentals, alveolars, velars, approximants, vowels, and a postalveolar.
# Order is load-bearing: one-hot indices are assigned by position.
VOCABULARY_SYMBOLS = ("p", "b", "m", "f", "v", "t", "s", "k", "w", "ɹ", "i", "æ", "o", "ʃ")

GROUP_FRAMES = 5


@dataclass(frozen=True)
class PhonemeInterval:
    """An IPA phoneme with a half-open time span [start, end) in seconds."""

    symbol: str
    start: float
    end: float

    def __post_init__(self):
        if not self.symbol:
            raise InvalidInput("phoneme symbol must be non-empty")
        if not self.start < self.end:
            raise InvalidInput(
                f"phoneme {self.symbol!r} has start {self.start} >= end {self.end}"
            )

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end


class PhonemeVocabulary:
    """The ordered 14-symbol vocabulary with a stable symbol <-> index bijection."""

    def __init__(self, symbols: tuple[str, ...] = VOCABULARY_SYMBOLS):
        if len(symbols) != len(set(symbols)):
            raise InvalidInput("vocabulary symbols must be distinct")
        self.symbols = tuple(symbols)
        self._index = {s: i for i, s in enumerate(self.symbols)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def __iter__(self):
        return iter(self.symbols)

    def index(self, symbol: str) -> int:
        if symbol not in self._index:
            raise InvalidInput(f"symbol {symbol!r} is not in the vocabulary")
        return self._index[symbol]

    def symbol(self, index: int) -> str:
        return self.symbols[index]


VOCABULARY = PhonemeVocabulary()


@dataclass
class FrameRecord:
    """Per-frame feature bundle flowing from extraction into the cache.

    geometry is the 4-vector (lip_height, lip_width, aspect_ratio,
    closure_score); identity is the raw 512-d embedding. valid is False for
    silence frames and frames where no face was detected.
    """

    frame_index: int
    timestamp: float
    phoneme: str
    geometry: np.ndarray | None = None
    identity: np.ndarray | None = None
    valid: bool = True


@dataclass
class PhonemeGroupSample:
    """One training sample: a phoneme plus 5 aligned frames' features.

    sample_groups produces skeletons (symbol + frame indices); the dataset
    loader attaches crops, geometry vectors, and identity embeddings.
    """

    symbol: str
    frame_indices: list[int]
    crops: np.ndarray | None = None
    geometry: np.ndarray | None = None
    identities: np.ndarray | None = None
    label: str | None = None
    valid: list[bool] = field(default_factory=list)


def label_frames(
    intervals: list[PhonemeInterval], fps: float, frame_count: int
) -> list[tuple[int, str]]:
    """Assign each frame the symbol of the interval containing its timestamp.

    Frame i sits at t = i / fps. Containment uses the half-open convention
    [start, end), so a frame exactly at an interval's end belongs to the
    next interval (or to silence). Frames covered by no interval get SILENCE.
    """
    if fps <= 0:
        raise InvalidInput(f"fps must be positive, got {fps}")
    ordered = sorted(intervals, key=lambda iv: iv.start)
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.start < prev.end - 1e-12:
            raise InvalidInput(
                f"intervals overlap: {prev.symbol!r} [{prev.start}, {prev.end}) and "
                f"{cur.symbol!r} [{cur.start}, {cur.end})"
            )

    starts = np.array([iv.start for iv in ordered])
    labels: list[tuple[int, str]] = []
    for i in range(frame_count):
        t = i / fps
        pos = int(np.searchsorted(starts, t, side="right")) - 1
        if pos >= 0 and ordered[pos].contains(t):
            labels.append((i, ordered[pos].symbol))
        else:
            labels.append((i, SILENCE))
    return labels


def filter_vocabulary(
    labeled: list[tuple[int, str]], vocabulary: PhonemeVocabulary = VOCABULARY
) -> list[tuple[int, str]]:
    """Drop frames whose symbol is outside the vocabulary (silence, noise, other IPA)."""
    return [(i, s) for i, s in labeled if s in vocabulary]


def _runs(labeled: list[tuple[int, str]]) -> list[tuple[str, list[int]]]:
    """Maximal runs of consecutive frame indices sharing one symbol."""
    runs: list[tuple[str, list[int]]] = []
    for idx, symbol in labeled:
        if runs and runs[-1][0] == symbol and runs[-1][1][-1] == idx - 1:
            runs[-1][1].append(idx)
        else:
            runs.append((symbol, [idx]))
    return runs


def sample_groups(labeled: list[tuple[int, str]], k: int = GROUP_FRAMES) -> list[PhonemeGroupSample]:
    """Sample k uniformly spaced frames from each maximal same-symbol run.

    Runs of at least k frames contribute their first and last frame plus
    evenly spaced interior frames (nearest-integer spacing, ties to even,
    matching numpy rounding). Shorter runs keep every frame and pad by
    repeating the last index.
    """
    samples = []
    for symbol, indices in _runs(labeled):
        n = len(indices)
        if n >= k:
            first, last = indices[0], indices[-1]
            picked = [round(first + j * (last - first) / (k - 1)) for j in range(k)]
        else:
            picked = indices + [indices[-1]] * (k - n)
        samples.append(PhonemeGroupSample(symbol=symbol, frame_indices=picked))
    return samples
