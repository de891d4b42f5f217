"""Hypothesis strategies shared by the suites."""

from hypothesis import strategies as st

from khoszul.algebra import IntMatrix


@st.composite
def int_matrices(draw, max_rows=8, max_cols=8, max_entry=6, density=0.5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    ent = {}
    for i in range(r):
        for j in range(c):
            if draw(st.floats(0, 1)) < density:
                v = draw(st.integers(-max_entry, max_entry))
                if v:
                    ent[(i, j)] = v
    return IntMatrix(r, c, ent)


@st.composite
def braid_words(draw, max_strands=4, max_len=6):
    k = draw(st.integers(2, max_strands))
    n = draw(st.integers(0, max_len))
    gens = st.integers(1, k - 1).flatmap(lambda i: st.sampled_from([i, -i]))
    return draw(st.lists(gens, min_size=n, max_size=n)), k
