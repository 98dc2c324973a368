import numpy as np
import pytest

from qctlearn.arch.graph import build_grid
from qctlearn.bench.scaling import fit_exponent, labelgen_timing
from qctlearn.exceptions import BenchError


def test_fit_recovers_power_law():
    sizes = [4, 9, 16, 25]
    seconds = [0.002 * n ** 3.5 for n in sizes]
    slope, intercept = fit_exponent(sizes, seconds)
    assert slope == pytest.approx(3.5)
    assert intercept == pytest.approx(np.log(0.002))

def test_fit_needs_three_sizes():
    with pytest.raises(BenchError):
        fit_exponent([4, 4, 9], [1.0, 1.1, 2.0])
    with pytest.raises(BenchError):
        fit_exponent([4, 9, 16], [1.0, 0.0, 2.0])

def test_labelgen_timing_rejects_one_device():
    g = build_grid(2, 2)
    with pytest.raises(BenchError):
        labelgen_timing([g, g, g], n_samples=1)
    with pytest.raises(BenchError):
        labelgen_timing([build_grid(2, 2), build_grid(2, 3), build_grid(3, 3)], n_samples=0)

def test_labelgen_timing_small_grids():
    report = labelgen_timing([build_grid(3, 3), build_grid(2, 2), build_grid(2, 3)], n_samples=2, depth=1)
    assert report.sizes == [4, 6, 9]
    assert all(t > 0 for t in report.seconds_per_label)
    assert np.isfinite(report.slope)
    assert [row["num_nodes"] for row in report.rows()] == [4, 6, 9]

@pytest.mark.slow
def test_lookahead_labeling_grows_like_a_high_power():
    report = labelgen_timing([build_grid(r, r) for r in range(2, 6)], n_samples=5)
    assert report.sizes == [4, 9, 16, 25]
    assert 3.0 <= report.slope <= 5.5
