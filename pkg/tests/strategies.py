"""Hypothesis strategies shared by the test modules."""

import numpy as np
from hypothesis import strategies as st

# probabilities with deliberate weight on the endpoints
prob = st.one_of(
    st.floats(0.0, 1.0, allow_nan=False),
    st.sampled_from([0.0, 1.0, 0.5]),
)


def vectors(min_size=0, max_size=30):
    return st.lists(prob, min_size=min_size, max_size=max_size)


@st.composite
def pairs(draw, min_size=0, max_size=30):
    n = draw(st.integers(min_size, max_size))
    p = draw(st.lists(prob, min_size=n, max_size=n))
    q = draw(st.lists(prob, min_size=n, max_size=n))
    return p, q


@st.composite
def dominating_pairs(draw, min_size=0, max_size=30):
    p, q = draw(pairs(min_size, max_size))
    return list(np.maximum(p, q)), list(np.minimum(p, q))

