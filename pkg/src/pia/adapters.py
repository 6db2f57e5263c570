"""Adapter interfaces to the external perception models, with offline implementations.

The heavyweight stack (speech transcription, forced alignment, face mesh,
face recognition) is hidden behind four small interfaces. Each comes in
three flavors:

* live     — wraps the real model; optional, needs the third-party stack.
* fixture  — replays committed recordings (JSON for segments / intervals /
             landmarks, raw little-endian float32 for embeddings). Used in CI.
* synthetic — wired to the trace generator's ground truth.

All adapters are deterministic for a fixed adapter identity and input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .alignment import PhonemeInterval
from .audio import AudioTrack
from .errors import AdapterError, DecodeError, InvalidInput, NoFaceError

N_MESH_POINTS = 468
EMBEDDING_DIM = 512
CROP_SIZE = 112
CROP_MEAN = 0.5
CROP_STD = 0.5


@dataclass
class WordSegment:
    """A transcribed word with its start/end time in seconds."""

    text: str
    start: float
    end: float


@dataclass
class LandmarkSet:
    """Full face-mesh result for one frame: 468 (x, y) points in [0, 1]."""

    points: np.ndarray
    detected: bool

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.shape != (N_MESH_POINTS, 2):
            raise InvalidInput(
                f"landmark set must have shape ({N_MESH_POINTS}, 2), got {self.points.shape}"
            )


@dataclass
class IdentityEmbedding:
    """512-component face identity vector for one frame."""

    vector: np.ndarray
    frame_index: int

    def __post_init__(self):
        self.vector = np.asarray(self.vector, dtype=np.float32).reshape(-1)
        if self.vector.shape != (EMBEDDING_DIM,):
            raise InvalidInput(f"identity embedding must have {EMBEDDING_DIM} components")
        if not np.all(np.isfinite(self.vector)):
            raise InvalidInput("identity embedding contains non-finite components")


@dataclass
class VisemeCrop:
    """Normalized 112x112x3 mouth-region crop for one frame."""

    pixels: np.ndarray
    frame_index: int

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float32)
        if self.pixels.shape != (CROP_SIZE, CROP_SIZE, 3):
            raise InvalidInput(
                f"crop must have shape ({CROP_SIZE}, {CROP_SIZE}, 3), got {self.pixels.shape}"
            )


def normalize_crop(pixels01: np.ndarray) -> np.ndarray:
    """Map raw [0, 1] intensities to the documented per-channel mean/std normalization."""
    return ((np.asarray(pixels01, dtype=np.float32)) - CROP_MEAN) / CROP_STD


def _validate_frame(frame: np.ndarray) -> np.ndarray:
    if frame is None:
        raise DecodeError("frame is None")
    frame = np.asarray(frame)
    if frame.ndim not in (2, 3) or frame.size == 0 or not np.issubdtype(frame.dtype, np.number):
        raise DecodeError(f"frame with shape {getattr(frame, 'shape', None)} cannot be decoded")
    return frame


def _frame_has_content(frame: np.ndarray) -> bool:
    # all-zero frames stand in for "no face present" in the offline adapters
    return bool(np.any(frame))


# --------------------------------------------------------------------------
# transcription


class Transcriber:
    """Maps canonical audio to ordered, non-overlapping word segments."""

    def transcribe(self, audio: AudioTrack) -> list[WordSegment]:
        raise NotImplementedError


class FixtureTranscriber(Transcriber):
    """Replays a recorded transcript; byte-identical output across runs."""

    def __init__(self, fixture_path: str | Path):
        self.fixture_path = Path(fixture_path)
        if not self.fixture_path.exists():
            raise AdapterError(f"transcript fixture not found: {self.fixture_path}")
        payload = json.loads(self.fixture_path.read_text())
        self._segments = [
            WordSegment(text=s["text"], start=float(s["start"]), end=float(s["end"]))
            for s in payload["segments"]
        ]
        _check_segments(self._segments)

    def transcribe(self, audio: AudioTrack) -> list[WordSegment]:
        if not np.any(audio.samples):
            return []
        duration = audio.duration
        for seg in self._segments:
            if seg.end > duration + 1e-9:
                raise AdapterError(
                    f"fixture segment [{seg.start}, {seg.end}] exceeds audio duration {duration:.3f}s"
                )
        return list(self._segments)


def _check_segments(segments: list[WordSegment]) -> None:
    prev_end = 0.0
    for seg in segments:
        if not (0 <= seg.start < seg.end):
            raise InvalidInput(f"segment {seg.text!r} has invalid times [{seg.start}, {seg.end}]")
        if seg.start < prev_end - 1e-9:
            raise InvalidInput(f"segment {seg.text!r} overlaps its predecessor")
        prev_end = seg.end


# --------------------------------------------------------------------------
# phonemization

# letter-level fallback used for words missing from the lexicon
_GRAPHEME_MAP = {
    "a": "æ", "b": "b", "c": "k", "d": "d", "e": "ɛ", "f": "f", "g": "ɡ",
    "h": "h", "i": "i", "j": "dʒ", "k": "k", "l": "l", "m": "m", "n": "n",
    "o": "o", "p": "p", "q": "k", "r": "ɹ", "s": "s", "t": "t", "u": "ʌ",
    "v": "v", "w": "w", "x": "s", "y": "j", "z": "z",
}

DEFAULT_LEXICON: dict[str, list[str]] = {
    "map": ["m", "æ", "p"],
    "hello": ["h", "ə", "l", "o"],
    "we": ["w", "i"],
    "ship": ["ʃ", "ɪ", "p"],
    "show": ["ʃ", "o"],
    "boat": ["b", "o", "t"],
    "five": ["f", "aɪ", "v"],
    "make": ["m", "e", "k"],
    "see": ["s", "i"],
    "red": ["ɹ", "ɛ", "d"],
    "cat": ["k", "æ", "t"],
    "pop": ["p", "ɑ", "p"],
    "vine": ["v", "aɪ", "n"],
    "team": ["t", "i", "m"],
    "wow": ["w", "aʊ"],
}


class Phonemizer:
    """Maps word segments to ordered phoneme intervals contained in their words."""

    def phonemize(self, segments: list[WordSegment]) -> list[PhonemeInterval]:
        raise NotImplementedError


class ReferencePhonemizer(Phonemizer):
    """Distributes each word's duration uniformly over its phonemes.

    Stands in when no forced-alignment adapter is available. Pronunciations
    come from a lexicon, falling back to a one-letter-per-phoneme map for
    unknown words.
    """

    def __init__(self, lexicon: dict[str, list[str]] | None = None):
        self.lexicon = dict(DEFAULT_LEXICON if lexicon is None else lexicon)

    def _pronounce(self, word: str) -> list[str]:
        key = word.strip().lower()
        if key in self.lexicon:
            return list(self.lexicon[key])
        return [_GRAPHEME_MAP[ch] for ch in key if ch in _GRAPHEME_MAP]

    def phonemize(self, segments: list[WordSegment]) -> list[PhonemeInterval]:
        _check_segments(segments)
        intervals: list[PhonemeInterval] = []
        for seg in segments:
            if seg.end <= seg.start:
                raise InvalidInput(f"segment {seg.text!r} has end <= start")
            phones = self._pronounce(seg.text)
            if not phones:
                continue
            width = (seg.end - seg.start) / len(phones)
            for i, symbol in enumerate(phones):
                start = seg.start + i * width
                end = seg.end if i == len(phones) - 1 else seg.start + (i + 1) * width
                intervals.append(PhonemeInterval(symbol=symbol, start=start, end=end))
        return intervals


class FixturePhonemizer(Phonemizer):
    """Replays recorded phoneme intervals, checking containment in the given words."""

    def __init__(self, fixture_path: str | Path):
        self.fixture_path = Path(fixture_path)
        if not self.fixture_path.exists():
            raise AdapterError(f"phoneme fixture not found: {self.fixture_path}")
        payload = json.loads(self.fixture_path.read_text())
        self._intervals = [
            PhonemeInterval(symbol=iv["symbol"], start=float(iv["start"]), end=float(iv["end"]))
            for iv in payload["intervals"]
        ]

    def phonemize(self, segments: list[WordSegment]) -> list[PhonemeInterval]:
        _check_segments(segments)
        prev_end = -np.inf
        for iv in self._intervals:
            if iv.start < prev_end - 1e-9:
                raise AdapterError(f"fixture interval {iv.symbol!r} overlaps its predecessor")
            prev_end = iv.end
            if not any(seg.start - 1e-9 <= iv.start and iv.end <= seg.end + 1e-9 for seg in segments):
                raise AdapterError(
                    f"fixture interval {iv.symbol!r} [{iv.start}, {iv.end}] not contained in any word"
                )
        return list(self._intervals)


# --------------------------------------------------------------------------
# landmarks


class LandmarkDetector:
    """Per-frame face-mesh detection."""

    def detect(self, frame: np.ndarray, frame_index: int) -> LandmarkSet:
        raise NotImplementedError


def _no_face() -> LandmarkSet:
    return LandmarkSet(points=np.zeros((N_MESH_POINTS, 2)), detected=False)


class FixtureLandmarkDetector(LandmarkDetector):
    """Replays recorded landmark arrays keyed by frame index; null entries mean no face."""

    def __init__(self, fixture_path: str | Path):
        self.fixture_path = Path(fixture_path)
        if not self.fixture_path.exists():
            raise AdapterError(f"landmark fixture not found: {self.fixture_path}")
        payload = json.loads(self.fixture_path.read_text())
        self._frames = payload["frames"]

    def detect(self, frame: np.ndarray, frame_index: int) -> LandmarkSet:
        frame = _validate_frame(frame)
        if not _frame_has_content(frame):
            return _no_face()
        if frame_index >= len(self._frames) or self._frames[frame_index] is None:
            return _no_face()
        return LandmarkSet(points=np.array(self._frames[frame_index], dtype=np.float64), detected=True)


class SyntheticLandmarkDetector(LandmarkDetector):
    """Returns the trace generator's ground-truth landmarks for each frame."""

    def __init__(self, landmarks_per_frame: np.ndarray):
        self._landmarks = np.asarray(landmarks_per_frame, dtype=np.float64)
        if self._landmarks.ndim != 3 or self._landmarks.shape[1:] != (N_MESH_POINTS, 2):
            raise InvalidInput("expected landmarks shaped (frames, 468, 2)")

    def detect(self, frame: np.ndarray, frame_index: int) -> LandmarkSet:
        frame = _validate_frame(frame)
        if not _frame_has_content(frame):
            return _no_face()
        return LandmarkSet(points=self._landmarks[frame_index], detected=True)


# --------------------------------------------------------------------------
# identity embeddings


class IdentityEmbedder:
    """Per-frame 512-d identity embedding."""

    def embed(self, frame: np.ndarray, frame_index: int) -> IdentityEmbedding:
        raise NotImplementedError


class FixtureIdentityEmbedder(IdentityEmbedder):
    """Replays embeddings from a raw little-endian float32 file shaped (frames, 512)."""

    def __init__(self, fixture_path: str | Path):
        self.fixture_path = Path(fixture_path)
        if not self.fixture_path.exists():
            raise AdapterError(f"embedding fixture not found: {self.fixture_path}")
        flat = np.fromfile(self.fixture_path, dtype="<f4")
        if flat.size % EMBEDDING_DIM != 0:
            raise AdapterError(
                f"embedding fixture size {flat.size} is not a multiple of {EMBEDDING_DIM}"
            )
        self._vectors = flat.reshape(-1, EMBEDDING_DIM)

    def embed(self, frame: np.ndarray, frame_index: int) -> IdentityEmbedding:
        frame = _validate_frame(frame)
        if not _frame_has_content(frame):
            raise NoFaceError(f"no face in frame {frame_index}")
        if frame_index >= len(self._vectors):
            raise AdapterError(f"embedding fixture has no row for frame {frame_index}")
        return IdentityEmbedding(vector=self._vectors[frame_index], frame_index=frame_index)


class SyntheticIdentityEmbedder(IdentityEmbedder):
    """Returns the trace generator's planted identity vectors."""

    def __init__(self, embeddings_per_frame: np.ndarray):
        self._vectors = np.asarray(embeddings_per_frame, dtype=np.float32)
        if self._vectors.ndim != 2 or self._vectors.shape[1] != EMBEDDING_DIM:
            raise InvalidInput("expected embeddings shaped (frames, 512)")

    def embed(self, frame: np.ndarray, frame_index: int) -> IdentityEmbedding:
        frame = _validate_frame(frame)
        if not _frame_has_content(frame):
            raise NoFaceError(f"no face in frame {frame_index}")
        return IdentityEmbedding(vector=self._vectors[frame_index], frame_index=frame_index)


@dataclass
class AdapterBundle:
    """The four adapters an extraction run needs, selected together."""

    transcriber: Transcriber | None = None
    phonemizer: Phonemizer | None = None
    landmarks: LandmarkDetector | None = None
    identity: IdentityEmbedder | None = None
    lexicon: dict[str, list[str]] = field(default_factory=dict)


def fixture_bundle(video_dir: str | Path) -> AdapterBundle:
    """Build the fixture adapters for one recorded video directory.

    Expected files: transcript.json, landmarks.json, identity.f32, and
    either phonemes.json (recorded alignment) or nothing (reference
    phonemizer fallback).
    """
    video_dir = Path(video_dir)
    phoneme_path = video_dir / "phonemes.json"
    phonemizer: Phonemizer
    if phoneme_path.exists():
        phonemizer = FixturePhonemizer(phoneme_path)
    else:
        phonemizer = ReferencePhonemizer()
    return AdapterBundle(
        transcriber=FixtureTranscriber(video_dir / "transcript.json"),
        phonemizer=phonemizer,
        landmarks=FixtureLandmarkDetector(video_dir / "landmarks.json"),
        identity=FixtureIdentityEmbedder(video_dir / "identity.f32"),
    )
