import itertools

import numpy as np
import pytest

from dopptrack import rls
from dopptrack.segmentation import (SegmentationState, SegmentHypothesis,
                                    admit_hypothesis, batch_sls, bellman_step,
                                    evict_if_full)


def fake_hypothesis(start, lse, e_admit, admit_seq=0):
    state = rls.init(1, ridge=1e-4)
    state.lse = lse
    return SegmentHypothesis(start=start, rls=state, e_admit=e_admit,
                             admit_seq=admit_seq)


def affine_lse(y):
    """Exact unregularized least-squares error of a free line fit."""
    def fitter(a, b):
        seg = y[a:b + 1]
        if seg.size <= 2:
            return 0.0
        k = np.arange(seg.size, dtype=float)
        A = np.column_stack([np.ones_like(k), k])
        x, *_ = np.linalg.lstsq(A, seg, rcond=None)
        resid = seg - A @ x
        return float(resid @ resid)
    return fitter


def enumerate_all_segmentations(y, penalty, fitter):
    """Brute force over all 2^(N-1) break placements."""
    N = len(y)
    best = np.inf
    for mask in itertools.product([0, 1], repeat=N - 1):
        bounds = [0] + [i + 1 for i, m in enumerate(mask) if m] + [N]
        cost = 0.0
        for a, b in zip(bounds[:-1], bounds[1:]):
            cost += penalty + fitter(a, b - 1)
        best = min(best, cost)
    return best


class TestBellmanStep:
    def test_single_hypothesis(self):
        state = SegmentationState()
        state.hypotheses.append(fake_hypothesis(0, lse=0.5, e_admit=0.0))
        E, best = bellman_step(state, penalty=0.01)
        assert E == pytest.approx(0.51)
        assert best == 0

    def test_picks_cheapest_total(self):
        state = SegmentationState()
        state.hypotheses.append(fake_hypothesis(0, lse=1.0, e_admit=0.0))
        state.hypotheses.append(fake_hypothesis(5, lse=0.2, e_admit=0.3))
        E, best = bellman_step(state, penalty=0.01)
        assert E == pytest.approx(0.51)
        assert best == 5

    def test_tie_breaks_to_earliest_start(self):
        state = SegmentationState()
        state.hypotheses.append(fake_hypothesis(7, lse=0.2, e_admit=0.1))
        state.hypotheses.append(fake_hypothesis(3, lse=0.1, e_admit=0.2))
        _, best = bellman_step(state, penalty=0.01)
        assert best == 3

    def test_tracks_previous_best(self):
        state = SegmentationState()
        state.hypotheses.append(fake_hypothesis(0, lse=0.0, e_admit=0.0))
        bellman_step(state, penalty=0.01)
        state.hypotheses.append(fake_hypothesis(4, lse=0.0, e_admit=-1.0))
        bellman_step(state, penalty=0.01)
        assert state.prev_best_start == 0
        assert state.best_start == 4

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            bellman_step(SegmentationState(), penalty=0.01)


class TestAdmit:
    def test_start_and_prefix_cost(self):
        state = SegmentationState()
        hyp = admit_hypothesis(state, 1, rls.init(2, 1e-4))
        assert hyp.start == 0
        assert hyp.e_admit == 0.0
        assert state.filled == 1

    def test_admission_records_last_prefix_cost(self):
        state = SegmentationState()
        admit_hypothesis(state, 1, rls.init(1, 1e-4))
        state.hypotheses[0].rls.lse = 0.25
        bellman_step(state, penalty=0.01)
        hyp = admit_hypothesis(state, 2, rls.init(1, 1e-4))
        assert hyp.start == 1
        assert hyp.e_admit == pytest.approx(0.26)

    def test_filled_increments(self):
        state = SegmentationState()
        for n in range(1, 6):
            admit_hypothesis(state, n, rls.init(1, 1e-4))
        assert state.filled == 5
        assert state.e_values.keys() == {0, 1, 2, 3, 4}


class TestEvict:
    def build(self, lses):
        state = SegmentationState()
        for i, lse in enumerate(lses):
            state.hypotheses.append(
                fake_hypothesis(start=i, lse=lse, e_admit=0.0, admit_seq=i))
        state._admit_counter = len(lses)
        return state

    def test_largest_lse_outside_recent_goes(self):
        state = self.build([5.0, 1.0, 0.1])
        gone = evict_if_full(state, n_best=2, n_recent=1)
        assert gone.lse == 5.0
        assert state.filled == 2

    def test_below_capacity_is_noop(self):
        state = self.build([5.0, 1.0])
        assert evict_if_full(state, n_best=2, n_recent=1) is None
        assert state.filled == 2

    def test_most_recent_always_survives(self):
        state = self.build([0.1, 0.2, 9.0])
        evict_if_full(state, n_best=2, n_recent=1)
        assert 2 in {h.start for h in state.hypotheses}

    def test_protected_start_survives(self):
        state = self.build([9.0, 1.0, 0.1])
        gone = evict_if_full(state, n_best=2, n_recent=1, protect_start=0)
        assert gone.start == 1
        assert 0 in {h.start for h in state.hypotheses}


class TestBatchSls:
    def test_linear_data_single_segment(self):
        y = 0.7 * np.arange(40) + 2.0
        segments, cost = batch_sls(y, penalty=0.5, segment_fitter=affine_lse(y))
        assert segments == [(0, 39)]
        assert cost == pytest.approx(0.5, abs=1e-9)

    def test_two_piece_break_recovered_exactly(self):
        k = np.arange(100, dtype=float)
        y = np.where(k < 50, 1.0 + 0.5 * k, 26.0 - 2.0 * (k - 50))
        segments, cost = batch_sls(y, penalty=1e-6,
                                   segment_fitter=affine_lse(y))
        assert [a for a, _ in segments] == [0, 50]
        assert cost == pytest.approx(2e-6, abs=1e-12)

    def test_huge_penalty_forces_single_segment(self):
        rng = np.random.default_rng(0)
        y = rng.normal(size=30)
        segments, _ = batch_sls(y, penalty=1e12, segment_fitter=affine_lse(y))
        assert segments == [(0, 29)]

    def test_needs_two_observations(self):
        with pytest.raises(ValueError):
            batch_sls([1.0], penalty=0.1, segment_fitter=lambda a, b: 0.0)

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(21)
        for trial in range(25):
            N = int(rng.integers(2, 13))
            y = np.cumsum(rng.normal(size=N))
            if trial % 2:
                y[N // 2:] += rng.normal() * 3.0
            penalty = float(rng.choice([0.05, 0.5, 2.0]))
            fitter = affine_lse(y)
            _, cost = batch_sls(y, penalty, fitter)
            brute = enumerate_all_segmentations(y, penalty, fitter)
            assert cost == pytest.approx(brute, rel=1e-9, abs=1e-9)
