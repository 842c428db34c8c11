"""Streaming multipath Doppler tracker.

The per-path emission-time warp is modeled as piecewise linear in the sample
index: over a segment starting at a, path l maps sample n to the transmit
time d_l (n - a) T + tau_l. Candidate segment starts are held by the
segmentation layer; each candidate fits, via RLS on linearized rows, the
small Doppler correction of its own segment against a frozen reference
Doppler vector. Because the per-path gradient rows become collinear when the
reference Doppler components coincide, every sample contributes L+1 rows:
one at the reference and one at each singly-perturbed reference, which
restores full column rank.

A new segment is declared when the prefix-cost-optimal start jumps forward
by at least detect_threshold samples. On closure the open segment's Doppler
is fixed from the incumbent fit, the per-path delays are propagated so the
reconstructed warp chains continuously across the boundary, and the winning
candidate becomes the new open segment.

One tracker instance consumes one strictly sample-ordered stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rls
from .segmentation import (SegmentationState, admit_hypothesis, bellman_step,
                           evict_if_full)
from .signal_model import TransmitSignal


@dataclass(frozen=True)
class TrackerConfig:
    """Tracker tuning and known channel-side information.

    initial_tau holds, per path, the emission time of sample 0 (the known
    initial arrival expressed as a warp value: minus the initial path delay).
    """

    penalty: float                 # cost of opening one more segment
    detect_threshold: int          # min forward jump of the optimal start
    keep_best: int                 # retained small-lse candidates
    keep_recent: int               # eviction-protected recent candidates
    perturbation: float            # Doppler offset of the extra linearizations
    gains: tuple[float, ...]       # known per-path channel gains
    initial_tau: tuple[float, ...]
    sample_period: float
    ridge: float = 1e-4
    doppler_bounds: tuple[float, float] = (0.5, 1.5)

    def __post_init__(self):
        if self.penalty <= 0.0:
            raise ValueError("penalty must be positive")
        if self.detect_threshold < 1:
            raise ValueError("detect_threshold must be >= 1")
        if self.keep_best < 1 or self.keep_recent < 1:
            raise ValueError("memory sizes must be >= 1")
        if self.perturbation <= 0.0:
            raise ValueError("perturbation must be positive")
        if self.sample_period <= 0.0:
            raise ValueError("sample_period must be positive")
        if len(self.gains) != len(self.initial_tau):
            raise ValueError("gains and initial_tau must have equal length")
        if len(self.gains) < 1:
            raise ValueError("need at least one path")

    @property
    def num_paths(self) -> int:
        return len(self.gains)


@dataclass
class DopplerSegment:
    """One closed segment: samples a..b inclusive, per-path Doppler and delay."""

    a: int
    b: int
    doppler: np.ndarray   # (num_paths,)
    tau: np.ndarray       # (num_paths,) emission time of sample a
    lse: float

    def __post_init__(self):
        if self.b < self.a:
            raise ValueError("segment end before start")
        if np.any(self.doppler <= 0.0) or np.any(self.doppler >= 2.0):
            raise ValueError("unphysical Doppler factor")


def _segment_warp(seg: DopplerSegment, path: int, n, T: float):
    return seg.doppler[path] * (np.asarray(n, dtype=float) - seg.a) * T \
        + seg.tau[path]


@dataclass
class HypothesisModel:
    """Per-candidate frozen linearization anchor."""

    d_ref: np.ndarray   # reference Doppler the RLS correction is relative to
    tau: np.ndarray     # modeled emission time of the candidate's start sample


def rows_batch(sig: TransmitSignal, d_ref: np.ndarray, tau: np.ndarray,
               lever: np.ndarray, epsilon: float, gains: np.ndarray):
    """Linearized regression rows for many candidates at one sample.

    d_ref and tau have shape (H, L) and lever (H,), lever being (n - start) T.
    Returns (rows, target_offsets, predictions) with shapes (H, L+1, L),
    (H, L+1), (H, L+1): entry m=0 is the unperturbed linearization, entry
    m=l+1 perturbs reference Doppler component l by epsilon. The regression
    target for received value r is r - prediction + target_offset.
    """
    H, L = d_ref.shape
    base = d_ref * lever[:, None] + tau
    times = np.repeat(base[:, None, :], L + 1, axis=1)
    shift = epsilon * lever
    idx = np.arange(L)
    times[:, idx + 1, idx] += shift[:, None]
    s, sd = sig.eval_passband_with_derivative(times.reshape(-1))
    s = s.reshape(H, L + 1, L)
    sd = sd.reshape(H, L + 1, L)
    preds = (s * gains).sum(axis=2)
    rows = gains * lever[:, None, None] * sd
    offsets = np.zeros((H, L + 1))
    offsets[:, 1:] = epsilon * np.diagonal(rows[:, 1:, :], axis1=1, axis2=2)
    return rows, offsets, preds


def predict_and_gradient(sig: TransmitSignal, d_ref, tau, a: int, n: int,
                         T: float, gains) -> tuple[float, np.ndarray]:
    """Predicted received value and its gradient in the Doppler vector."""
    d_ref = np.asarray(d_ref, dtype=float)
    tau = np.asarray(tau, dtype=float)
    gains = np.asarray(gains, dtype=float)
    u = (n - a) * T
    t = d_ref * u + tau
    s, sd = sig.eval_passband_with_derivative(t)
    return float(gains @ s), gains * u * sd


def perturbed_rows(sig: TransmitSignal, d_ref, tau, a: int, n: int, T: float,
                   epsilon: float, gains) -> list[tuple[np.ndarray, float, float]]:
    """The L+1 linearization models for one candidate at one sample.

    Returns [(row, target_offset, prediction), ...]; the regression target
    for received value r is r - prediction + target_offset.
    """
    d_ref = np.asarray(d_ref, dtype=float)[None, :]
    tau = np.asarray(tau, dtype=float)[None, :]
    lever = np.array([(n - a) * T])
    gains = np.asarray(gains, dtype=float)
    rows, offsets, preds = rows_batch(sig, d_ref, tau, lever, epsilon, gains)
    return [(rows[0, m].copy(), float(offsets[0, m]), float(preds[0, m]))
            for m in range(rows.shape[1])]


def update_delays(d_prev, tau_prev, a_prev: int, b_prev: int, T: float) -> np.ndarray:
    """Propagate per-path delays over one segment: tau + d (b - a) T."""
    if b_prev <= a_prev:
        raise ValueError("b_prev must exceed a_prev")
    return np.asarray(tau_prev, dtype=float) \
        + np.asarray(d_prev, dtype=float) * (b_prev - a_prev) * T


def reconstruct_timing(segments: list[DopplerSegment], ell: int, n: int,
                       T: float) -> float:
    """Reconstructed emission time of sample n on path ell."""
    for seg in segments:
        if seg.a <= n <= seg.b:
            return float(_segment_warp(seg, ell, n, T))
    raise ValueError("sample %d not covered by any segment" % n)


def reconstruct_warp_array(segments: list[DopplerSegment], num_paths: int,
                           n_samples: int, T: float) -> np.ndarray:
    """Per-path reconstructed warp over 0..n_samples-1 (NaN where uncovered)."""
    out = np.full((num_paths, n_samples), np.nan)
    for seg in segments:
        lo, hi = seg.a, min(seg.b, n_samples - 1)
        if hi < lo:
            continue
        rel = (np.arange(lo, hi + 1) - seg.a) * T
        out[:, lo:hi + 1] = seg.doppler[:, None] * rel[None, :] \
            + seg.tau[:, None]
    return out


class DopplerTracker:
    """Drives the segmentation layer over one received-sample stream."""

    def __init__(self, sig: TransmitSignal, config: TrackerConfig):
        self.sig = sig
        self.config = config
        L = config.num_paths
        self._gains = np.asarray(config.gains, dtype=float)
        self._d_ref = np.ones(L)
        self._a_cur = 0
        self._tau_cur = np.asarray(config.initial_tau, dtype=float).copy()
        self._seg = SegmentationState()
        self._anchor = admit_hypothesis(
            self._seg, 1, rls.init(L, config.ridge),
            payload=HypothesisModel(self._d_ref.copy(), self._tau_cur.copy()))
        self._n = 0
        self.segments: list[DopplerSegment] = []
        self.diverged = False
        self.diverged_at: int | None = None
        self._finalized = False

    @property
    def sample_index(self) -> int:
        """Number of samples consumed so far."""
        return self._n

    @property
    def segmentation(self) -> SegmentationState:
        return self._seg

    @property
    def current_doppler(self) -> np.ndarray:
        """Running Doppler estimate of the open segment."""
        return self._anchor.payload.d_ref + self._anchor.rls.estimate

    @property
    def current_correction(self) -> np.ndarray:
        """Running Doppler-correction estimate of the open segment."""
        return self._anchor.rls.estimate.copy()

    @property
    def reference_doppler(self) -> np.ndarray:
        """Linearization reference: Doppler of the last closed segment."""
        return self._d_ref.copy()

    @property
    def current_tau(self) -> np.ndarray:
        """Per-path emission time of the open segment's first sample."""
        return self._tau_cur.copy()

    def _running_warp_at(self, m: int) -> np.ndarray:
        d_run = self._anchor.payload.d_ref + self._anchor.rls.estimate
        return self._tau_cur + d_run * (m - self._a_cur) \
            * self.config.sample_period

    def process_sample(self, r_n: float) -> DopplerSegment | None:
        """Consume the next received sample; returns a segment when one closes."""
        if self._finalized:
            raise RuntimeError("tracker already finalized")
        cfg = self.config
        n = self._n
        self._n += 1
        if n == 0:
            # sample 0 is the known anchor point of the warp; no row to fit
            return None
        if self._seg.filled >= cfg.keep_best + cfg.keep_recent:
            evict_if_full(self._seg, cfg.keep_best, cfg.keep_recent,
                          protect_start=self._a_cur)
        if self._seg.find(n - 1) is None:
            admit_hypothesis(
                self._seg, n, rls.init(cfg.num_paths, cfg.ridge),
                payload=HypothesisModel(self._d_ref.copy(),
                                        self._running_warp_at(n - 1)))
        hyps = self._seg.hypotheses
        d_ref = np.stack([h.payload.d_ref for h in hyps])
        tau = np.stack([h.payload.tau for h in hyps])
        starts = np.array([h.start for h in hyps])
        lever = (n - starts) * cfg.sample_period
        rows, offsets, preds = rows_batch(self.sig, d_ref, tau, lever,
                                          cfg.perturbation, self._gains)
        targets = r_n - preds + offsets
        # the L+1 models describe one observation: weight them so the lse
        # accumulates one squared residual per sample, the unit the segment
        # penalty is calibrated in (uniform scaling leaves the estimate alone)
        scale = 1.0 / np.sqrt(rows.shape[1])
        rls.update_batch([h.rls for h in hyps], rows * scale, targets * scale)
        for h in hyps:
            h.last_updated = n
        _, best = bellman_step(self._seg, cfg.penalty)
        jump = best - self._seg.prev_best_start
        if jump >= cfg.detect_threshold and best > self._a_cur:
            return self._close_segment(best, n)
        return None

    def _clamped_doppler(self, hyp, n: int) -> np.ndarray:
        d = hyp.payload.d_ref + hyp.rls.estimate
        lo, hi = self.config.doppler_bounds
        clipped = np.clip(d, lo, hi)
        if np.any(clipped != d):
            self.diverged = True
            if self.diverged_at is None:
                self.diverged_at = n
        return clipped

    def _close_segment(self, new_start: int, n: int) -> DopplerSegment:
        d_closed = self._clamped_doppler(self._anchor, n)
        seg = DopplerSegment(a=self._a_cur, b=new_start - 1,
                             doppler=d_closed, tau=self._tau_cur.copy(),
                             lse=self._anchor.rls.lse)
        self.segments.append(seg)
        self._tau_cur = update_delays(d_closed, self._tau_cur, self._a_cur,
                                      new_start, self.config.sample_period)
        self._a_cur = new_start
        self._d_ref = d_closed.copy()
        winner = self._seg.find(new_start)
        assert winner is not None, "Bellman winner missing from memory"
        self._anchor = winner
        return seg

    def finalize(self) -> DopplerSegment | None:
        """Close the open segment at the last consumed sample."""
        if self._finalized:
            return None
        self._finalized = True
        last = self._n - 1
        if last < self._a_cur:
            return None
        d = self._clamped_doppler(self._anchor, last)
        seg = DopplerSegment(a=self._a_cur, b=last, doppler=d,
                             tau=self._tau_cur.copy(),
                             lse=self._anchor.rls.lse)
        self.segments.append(seg)
        return seg
