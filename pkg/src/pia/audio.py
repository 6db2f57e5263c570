"""Audio canonicalization: every track becomes 16 kHz mono before transcription."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import resample_poly

from .errors import InvalidInput

TARGET_SAMPLE_RATE = 16_000


@dataclass
class AudioTrack:
    """Raw audio: samples shaped (n,) for mono or (n, channels) otherwise."""

    samples: np.ndarray
    sample_rate: int

    @property
    def channels(self) -> int:
        return 1 if self.samples.ndim == 1 else self.samples.shape[1]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate


def canonicalize_audio(raw: AudioTrack) -> AudioTrack:
    """Return ``raw`` converted to mono 16 kHz.

    Channels are averaged, then the track is resampled with a polyphase
    filter. Duration is preserved to within one sample period. A track
    already in canonical form is returned unchanged (same array object).
    """
    if raw.n_samples < 1:
        raise InvalidInput("audio track has no samples")
    if raw.sample_rate <= 0:
        raise InvalidInput(f"sample_rate must be positive, got {raw.sample_rate}")

    samples = np.asarray(raw.samples, dtype=np.float64)
    if samples.ndim == 1 and raw.sample_rate == TARGET_SAMPLE_RATE:
        return AudioTrack(samples=raw.samples, sample_rate=TARGET_SAMPLE_RATE)

    if samples.ndim > 1:
        samples = samples.mean(axis=1)

    if raw.sample_rate != TARGET_SAMPLE_RATE:
        g = np.gcd(raw.sample_rate, TARGET_SAMPLE_RATE)
        up = TARGET_SAMPLE_RATE // g
        down = raw.sample_rate // g
        samples = resample_poly(samples, up, down)

    return AudioTrack(samples=samples, sample_rate=TARGET_SAMPLE_RATE)
