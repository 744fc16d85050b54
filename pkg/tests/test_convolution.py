from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from stokes_certify.convolution import RelaxedConvolution, naive_convolution


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(min_value=0, max_value=2**200), min_size=1, max_size=140),
    st.integers(min_value=1, max_value=20),
)
def test_relaxed_matches_naive(values, threshold):
    # streams start at index 1; index 0 never enters the sum
    a = [0] + values
    b = [0] + [v // 3 + 1 for v in values]
    conv = RelaxedConvolution(direct_below=threshold)
    for m in range(1, len(a)):
        assert conv.value(m) == naive_convolution(a, b, m)
        conv.push(a[m], b[m])
    assert len(conv) == len(values)


def test_online_value_needs_prefix():
    conv = RelaxedConvolution()
    conv.push(1, 1)
    with pytest.raises(IndexError):
        conv.value(3)


def test_rejects_negative():
    with pytest.raises(ValueError):
        RelaxedConvolution().push(-1, 1)
