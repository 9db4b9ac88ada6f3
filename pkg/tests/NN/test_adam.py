import numpy as np
import pytest

from SwaptionPricer.NN.Adam import adam_step
from SwaptionPricer.NN.Adam import AdamState
from SwaptionPricer.NN.Adam import LrSchedule
from SwaptionPricer.NN.Tensor import parameter


def test_first_step_moves_by_learning_rate():
    p = parameter([0.0, 1.0])
    state = AdamState.for_parameters([p])
    adam_step(state, [p], [np.array([1.0, -4.0])], 0.01)
    np.testing.assert_allclose(p.data, [-0.01, 1.01], rtol=1e-7)
    assert state.step == 1


def test_zero_gradient_leaves_parameters():
    p = parameter([0.3])
    state = AdamState.for_parameters([p])
    for _ in range(3):
        adam_step(state, [p], [np.zeros(1)], 0.1)
    np.testing.assert_array_equal(p.data, [0.3])


def test_non_finite_gradient_is_rejected():
    p = parameter([0.3])
    state = AdamState.for_parameters([p])
    with pytest.raises(AdamState.NonFiniteGradient):
        adam_step(state, [p], [np.array([np.inf])], 0.1)
    assert state.step == 0
    np.testing.assert_array_equal(p.data, [0.3])


def test_mismatched_gradients():
    p = parameter(np.zeros(2))
    state = AdamState.for_parameters([p])
    with pytest.raises(ValueError):
        adam_step(state, [p], [np.zeros(3)], 0.1)
    with pytest.raises(ValueError):
        adam_step(state, [p], [], 0.1)


def test_minimises_quadratic():
    p = parameter([5.0])
    state = AdamState.for_parameters([p])
    for _ in range(2000):
        adam_step(state, [p], [2.0 * (p.data - 1.0)], 0.05)
    assert p.data[0] == pytest.approx(1.0, abs=0.1)


def test_schedule_quarters():
    schedule = LrSchedule(8)
    rates = [schedule.rate(e) for e in range(8)]
    assert rates == [1e-2, 1e-2, 1e-3, 1e-3, 1e-4, 1e-4, 1e-5, 1e-5]


@pytest.mark.parametrize("epochs", [0, 2, 6, 401])
def test_schedule_rejects_uneven_epochs(epochs):
    with pytest.raises(ValueError):
        LrSchedule(epochs)


def test_schedule_range():
    with pytest.raises(ValueError):
        LrSchedule(4).rate(4)
